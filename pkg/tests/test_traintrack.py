import pytest

from ttforge.errors import EvenOrNonpositive
from ttforge.graphmap import graph, map_from_words, path_of_word
from ttforge.traintrack import (
    TraintrackStructure,
    Turn,
    induced_split_structure,
    prototype_graph,
    prototype_map,
    prototype_structure,
    turn_image,
    turn_of_word,
    turns_of_path,
    verify_traintrack,
)


@pytest.fixture(scope="module")
def p7():
    return prototype_graph()


@pytest.fixture(scope="module")
def p7_structure(p7):
    return prototype_structure(p7)


class TestTurns:
    def test_word_reversal_names_same_turn(self, p7):
        assert turn_of_word(p7, "aB") == turn_of_word(p7, "bA")

    def test_degenerate_never_legal(self, p7, p7_structure):
        t = Turn.at(p7, 1, -1, -1)
        assert t.is_degenerate and not p7_structure.is_legal(t)

    def test_structure_has_fourteen_turns(self, p7_structure):
        assert len(p7_structure.legal_turns()) == 14

    def test_abc_pairs_legal_at_both_vertices(self, p7, p7_structure):
        for w in ("aB", "aC", "bC", "Ab", "Ac", "Bc"):
            assert p7_structure.is_legal(turn_of_word(p7, w))


class TestPrototypeMaps:
    def test_identity(self, p7):
        m = prototype_map(1)
        for ch in "abcdefg":
            assert m.image_word(ch) == ch

    def test_n3_table(self):
        m = prototype_map(3)
        assert m.image_word("a") == "aGa"
        assert m.image_word("d") == "aBa"
        assert m.image_word("g") == "bEb"
        assert m.image_word("e") == "cBa"

    def test_n7_word(self):
        m = prototype_map(7)
        assert m.image_word("a") == "aGaBaBa"
        for ch in "abcdefg":
            assert len(m.image_word(ch)) == 7

    def test_vertices_fixed(self):
        m = prototype_map(5)
        assert m.vertex_images == (0, 1)

    @pytest.mark.parametrize("n", [0, 2, 4, -3])
    def test_rejects_even_or_nonpositive(self, n):
        with pytest.raises(EvenOrNonpositive):
            prototype_map(n)


class TestTurnImage:
    def test_paper_checks(self, p7):
        m = prototype_map(5)
        assert turn_image(m, turn_of_word(p7, "Ga")) == turn_of_word(p7, "Ba")
        assert turn_image(m, turn_of_word(p7, "Ba")) == turn_of_word(p7, "Ba")
        assert turn_image(m, turn_of_word(p7, "Ca")) == turn_of_word(p7, "Ca")

    def test_identity_fixes_every_turn(self, p7, p7_structure):
        m = prototype_map(1)
        for t in p7_structure.legal_turns():
            assert turn_image(m, t) == t


class TestVerifyTraintrack:
    @pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11, 13])
    def test_prototype_family_passes(self, p7_structure, n):
        report = verify_traintrack(prototype_map(n), p7_structure)
        assert report.ok, report.violations

    def test_empty_structure_violation_names_first_turn(self, p7):
        empty = TraintrackStructure(p7, [])
        report = verify_traintrack(prototype_map(3), empty)
        assert not report.ok
        v = report.first_violation()
        assert v.kind == "illegal-path-turn" and v.edge == "a"
        assert v.turn == turn_of_word(p7, "aG")

    def test_legal_closure(self, p7, p7_structure):
        # every turn occurring in any prototype image path is legal
        for n in (3, 5, 7, 9, 11):
            m = prototype_map(n)
            for p in m.edge_images:
                for t in turns_of_path(p7, p):
                    assert p7_structure.is_legal(t)

    def test_non_taut_map_reported(self, p7, p7_structure):
        words = {ch: prototype_map(3).image_word(ch) for ch in "abcdefg"}
        words["a"] = "aAa"
        bad = map_from_words(prototype_graph(), words,
                             vertex_images={"v0": "v0", "v1": "v1"})
        report = verify_traintrack(bad, p7_structure)
        assert not report.ok
        assert any(v.kind == "not-taut" and v.edge == "a" for v in report.violations)


class TestInducedStructure:
    def setup_method(self):
        from ttforge.splitting import split_graph

        # parallel edges let cross-subscript turns appear at both vertices
        g = graph(["u", "v"], [("u", "v", "x1"), ("u", "v", "x2"), ("u", "v", "x3")])
        self.split = split_graph(g)
        self.structure = induced_split_structure(self.split)
        self.sg = self.split.graph

    def turn(self, word):
        return turn_of_word(self.sg, word)

    def test_cross_subscript_legal(self):
        assert self.structure.is_legal(self.turn("a_x1B_x2"))

    def test_illegal_letter_pair(self):
        assert not self.structure.is_legal(self.turn("a_x1F_x2"))

    def test_backtrack_illegal(self):
        assert not self.structure.is_legal(self.turn("a_x1A_x1"))

    def test_same_letter_distinct_subscripts_illegal(self):
        assert not self.structure.is_legal(self.turn("a_x1A_x2"))

    def test_star_center_turns_between_petals(self):
        from ttforge.splitting import split_graph

        g = graph(["c", "t1", "t2", "t3"],
                  [("c", "t1", "x1"), ("c", "t2", "x2"), ("c", "t3", "x3")])
        split = split_graph(g)
        structure = induced_split_structure(split)
        # ab pair is legal at the near vertex irrespective of subscripts
        assert structure.is_legal(turn_of_word(split.graph, "A_x1b_x3"))
        assert structure.is_legal(turn_of_word(split.graph, "G_x1a_x2"))
        assert not structure.is_legal(turn_of_word(split.graph, "A_x1d_x3"))

"""Traintrack structures, turn legality, and the 7-edge prototype family.

A direction at a vertex is an outward signed edge: ``+k`` for an edge
leaving the vertex, ``-k`` for one arriving.  A turn is an unordered pair of
directions at one vertex; the degenerate pair {x, x} (backtracking) is never
legal.  In word notation the turn taken between consecutive steps ``x . y``
is {reverse(x), y}; reversing the word and swapping case names the same
turn, so ``aB`` and ``bA`` compare equal here by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CollapsedEdge, EvenOrNonpositive, GraphStructureError
from .graphmap import EdgePath, Graph, GraphMap, graph, map_from_words, path_of_word


@dataclass(frozen=True)
class Turn:
    vertex: int
    dirs: tuple[int, int]  # signed edge references, sorted

    @staticmethod
    def at(g: Graph, vertex: int, d1: int, d2: int) -> "Turn":
        for d in (d1, d2):
            src, _ = g.step_endpoints(d)
            if src != vertex:
                raise GraphStructureError(f"direction {d} is not based at vertex {vertex}")
        a, b = sorted((d1, d2))
        return Turn(vertex, (a, b))

    @property
    def is_degenerate(self) -> bool:
        return self.dirs[0] == self.dirs[1]


def turn_of_word(g: Graph, word: str) -> Turn:
    """The turn a two-step word takes at its middle vertex."""
    p = path_of_word(g, word)
    if len(p) != 2:
        raise GraphStructureError("turn words have exactly two steps")
    x, y = p.steps
    v = g.step_endpoints(x)[1]
    return Turn.at(g, v, -x, y)


def turns_of_path(g: Graph, path: EdgePath) -> list[Turn]:
    out = []
    for x, y in zip(path.steps, path.steps[1:]):
        v = g.step_endpoints(x)[1]
        a, b = sorted((-x, y))
        out.append(Turn(v, (a, b)))
    return out


class TraintrackStructure:
    """Explicit per-vertex sets of legal turns."""

    def __init__(self, g: Graph, turns: Iterable[Turn]):
        self.graph = g
        self._legal = set()
        for t in turns:
            if t.is_degenerate:
                raise GraphStructureError("a backtracking turn cannot be legal")
            self._legal.add((t.vertex, t.dirs))

    def is_legal(self, t: Turn) -> bool:
        if t.is_degenerate:
            return False
        return (t.vertex, t.dirs) in self._legal

    def legal_turns(self) -> list[Turn]:
        return [Turn(v, d) for v, d in sorted(self._legal)]

    def direction_class(self, vertex: int, direction: int):
        """Key under which legality is invariant; identity for explicit sets."""
        return (vertex, direction)


# ---------------------------------------------------------------------------
# the prototype graph P7
# ---------------------------------------------------------------------------

PROTOTYPE_LETTERS = "abcdefg"

#: legal turns as two-step words; at the far vertex the directions are the
#: reversed edges (AB etc.), at the near vertex the forward ones (ab etc.)
PROTOTYPE_LEGAL_WORDS = (
    "aB", "aC", "bC", "aG", "bD", "bE", "cF",   # turns at the far vertex v1
    "Ab", "Ac", "Bc", "Ag", "Bd", "Be", "Cf",   # the mirrored pattern at v0
)


def prototype_graph() -> Graph:
    return graph(("v0", "v1"), [("v0", "v1", ch) for ch in PROTOTYPE_LETTERS])


def prototype_structure(g: Graph | None = None) -> TraintrackStructure:
    g = g or prototype_graph()
    return TraintrackStructure(g, [turn_of_word(g, w) for w in PROTOTYPE_LEGAL_WORDS])


def prototype_word(letter: str, n: int) -> str:
    """Image word of ``letter`` under the n-th prototype map (n odd, >= 1)."""
    if n < 1 or n % 2 == 0:
        raise EvenOrNonpositive(f"prototype maps exist for odd n >= 1, got {n}")
    if n == 1:
        return letter
    m = (n - 3) // 2
    head = {
        "a": "aG", "b": "bD", "c": "cF", "d": "aB", "e": "cB", "f": "aC", "g": "bE",
    }[letter]
    middle = {"g": "bA"}.get(letter, {"b": "bC", "c": "cA"}.get(letter, "aB"))
    tail = {"b": "b", "c": "c", "g": "b"}.get(letter, "a")
    return head + middle * m + tail


def prototype_map(n: int) -> GraphMap:
    """The prototype traintrack homotopy equivalence with word length n."""
    g = prototype_graph()
    words = {ch: prototype_word(ch, n) for ch in PROTOTYPE_LETTERS}
    return map_from_words(g, words, vertex_images={"v0": "v0", "v1": "v1"})


# ---------------------------------------------------------------------------
# turn images and verification
# ---------------------------------------------------------------------------


def direction_image(m: GraphMap, direction: int) -> int:
    """First signed edge of the image of an outward direction."""
    p = m.edge_images[abs(direction) - 1]
    if len(p) == 0:
        raise CollapsedEdge("direction over a collapsed edge has no image")
    return p.steps[0] if direction > 0 else -p.steps[-1]


def turn_image(m: GraphMap, t: Turn) -> Turn:
    """Image turn: last edge of the incoming image, first of the outgoing."""
    d1, d2 = (direction_image(m, d) for d in t.dirs)
    v = m.vertex_images[t.vertex]
    a, b = sorted((d1, d2))
    return Turn(v, (a, b))


@dataclass(frozen=True)
class TraintrackViolation:
    kind: str  # "not-taut" | "illegal-turn-image" | "illegal-path-turn"
    edge: str | None
    turn: Turn | None

    def __str__(self):
        where = f" on edge {self.edge}" if self.edge else ""
        return f"{self.kind}{where}: {self.turn}"


@dataclass(frozen=True)
class TraintrackReport:
    ok: bool
    taut_checked: int
    legal_turns_checked: int
    path_turns_checked: int
    violations: tuple[TraintrackViolation, ...]
    structure_name: str

    def first_violation(self) -> TraintrackViolation | None:
        return self.violations[0] if self.violations else None


def verify_traintrack(m: GraphMap, structure) -> TraintrackReport:
    """Check tautness, legal-turn images, and legality of image paths.

    Violations are reported as values, never raised.  When the structure's
    ``direction_class`` collapses directions (subscript-erasing structures on
    split graphs), legal-turn images are verified once per class pair, which
    is exact because both legality and turn images factor through the class.
    """
    g = m.domain
    violations = []
    taut_checked = 0
    for e, p in zip(g.edges, m.edge_images):
        taut_checked += 1
        for a, b in zip(p.steps, p.steps[1:]):
            if a == -b:
                violations.append(TraintrackViolation("not-taut", e.label, None))
                break

    # group directions by legality class; one representative pair per class
    # pair stands for all (legality and turn images both factor through the
    # class), with a same-class pair drawn from two distinct members
    by_class: dict[tuple, list[int]] = {}
    class_order: dict[int, list[tuple]] = {}
    for e_idx, e in enumerate(g.edges):
        for d, v in ((e_idx + 1, e.src), (-(e_idx + 1), e.dst)):
            img = direction_image(m, d)
            key = (v, structure.direction_class(v, d),
                   structure.direction_class(m.vertex_images[v], img))
            members = by_class.setdefault(key, [])
            if len(members) < 2:
                members.append(d)
            if len(members) == 1:
                class_order.setdefault(v, []).append(key)
    legal_checked = 0
    for v, keys in sorted(class_order.items()):
        for i, k1 in enumerate(keys):
            for k2 in keys[i:]:
                if k1 == k2:
                    if len(by_class[k1]) < 2:
                        continue
                    d1, d2 = by_class[k1][:2]
                else:
                    d1, d2 = by_class[k1][0], by_class[k2][0]
                t = Turn(v, tuple(sorted((d1, d2))))
                if t.is_degenerate or not structure.is_legal(t):
                    continue
                legal_checked += 1
                if not structure.is_legal(turn_image(m, t)):
                    violations.append(TraintrackViolation("illegal-turn-image", None, t))

    path_checked = 0
    for e, p in zip(g.edges, m.edge_images):
        for t in turns_of_path(m.codomain, p):
            path_checked += 1
            if not structure.is_legal(t):
                violations.append(TraintrackViolation("illegal-path-turn", e.label, t))
                break

    return TraintrackReport(
        ok=not violations,
        taut_checked=taut_checked,
        legal_turns_checked=legal_checked,
        path_turns_checked=path_checked,
        violations=tuple(violations),
        structure_name=getattr(structure, "name", structure.__class__.__name__),
    )


# ---------------------------------------------------------------------------
# the subscript-erasing structure on split graphs
# ---------------------------------------------------------------------------


class InducedSplitStructure:
    """Legality on a split graph by erasing subscripts into the prototype.

    A turn is legal exactly when the letter pair (with orientation) is a
    legal prototype turn; legality therefore factors through the signed
    prototype letter of each direction, which is what ``direction_class``
    exposes so verification can work with class representatives.
    """

    name = "subscript-erased P7 structure"

    def __init__(self, split):
        self.split = split
        self._proto = prototype_graph()
        self._proto_struct = prototype_structure(self._proto)
        letter_pos = {ch: i for i, ch in enumerate(PROTOTYPE_LETTERS)}
        self._letter_idx = tuple(letter_pos[split.letter_of(i)]
                                 for i in range(len(split.graph.edges)))

    def proto_direction(self, d: int) -> int:
        li = self._letter_idx[abs(d) - 1]
        return li + 1 if d > 0 else -(li + 1)

    def is_legal(self, t: Turn) -> bool:
        if t.is_degenerate:
            return False
        p1, p2 = (self.proto_direction(d) for d in t.dirs)
        if (p1 > 0) != (p2 > 0):
            return False  # cannot occur with a consistent bipartite orientation
        proto_vertex = 0 if p1 > 0 else 1
        a, b = sorted((p1, p2))
        if a == b:
            return False
        return self._proto_struct.is_legal(Turn(proto_vertex, (a, b)))

    def direction_class(self, vertex: int, d: int):
        return self.proto_direction(d)

    def legal_turns(self) -> list[Turn]:
        """Explicit enumeration (exported structures only; quadratic in degree)."""
        g = self.split.graph
        at: dict[int, list[int]] = {}
        for i, e in enumerate(g.edges):
            at.setdefault(e.src, []).append(i + 1)
            at.setdefault(e.dst, []).append(-(i + 1))
        out = []
        for v, dirs in sorted(at.items()):
            for i, d1 in enumerate(dirs):
                for d2 in dirs[i + 1:]:
                    t = Turn(v, tuple(sorted((d1, d2))))
                    if self.is_legal(t):
                        out.append(t)
        return out


def induced_split_structure(split) -> InducedSplitStructure:
    """Pullback of the prototype legal set along subscript erasure."""
    return InducedSplitStructure(split)

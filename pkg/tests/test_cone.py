import random
from fractions import Fraction

import pytest

from ttforge.config import Config
from ttforge.cone import (
    EigenSplit,
    build_rational_cone,
    cone_member,
    decompose,
    eigen_split,
    find_recipe,
    gordan_generators,
    recipe_identity_holds,
    recompose,
    verify_invariance,
)
from ttforge.errors import ConeSearchFailed, EnumerationCapExceeded
from ttforge.numberfield import (
    LatticeElement,
    even_lemma,
    make_context,
    mul_lambda,
    mul_lambda_power,
)


def pipeline_to_gens(text, scale=None, config=None):
    ctx = make_context(text)
    split = eigen_split(ctx)
    cone = build_rational_cone(ctx, split, scale=scale, config=config)
    gens = gordan_generators(ctx, cone, config)
    return ctx, cone, gens


class TestEigenSplit:
    def test_degree_one(self):
        split = eigen_split(make_context("x - 5"))
        assert split.invariant_subspaces == ()
        assert split.dominant_direction[0].contains(1)

    def test_quadratic(self):
        split = eigen_split(make_context("x^2 - 3x - 2"))
        assert len(split.invariant_subspaces) == 1
        sub = split.invariant_subspaces[0]
        assert sub.kind == "real" and sub.dimension == 1
        assert float(sub.radius_upper) < 0.57
        # dominant eigenvector is (lambda - 3, 1) up to scale
        dom = split.dominant_direction
        assert abs(float(dom[0].mid) - 0.5616) < 1e-3
        assert dom[1].contains(1)

    def test_pisot_cubic_has_complex_pair(self):
        split = eigen_split(make_context("x^3 - x - 1"))
        kinds = sorted(s.kind for s in split.invariant_subspaces)
        assert kinds == ["complex"]
        assert split.invariant_subspaces[0].dimension == 2


class TestBuildCone:
    def test_degree_one_ray(self):
        ctx = make_context("x - 5")
        cone = build_rational_cone(ctx, eigen_split(ctx))
        assert [g.coords for g in cone.generators] == [(1,)]
        assert cone.invariance_certificate == ((Fraction(5),),)
        assert verify_invariance(ctx, cone)

    def test_quadratic_default_scale(self):
        ctx = make_context("x^2 - 3x - 2")
        cone = build_rational_cone(ctx, eigen_split(ctx), scale=8)
        assert len(cone.generators) == 2
        assert cone.scale_used == 8
        for col in cone.invariance_certificate:
            assert all(c >= 0 for c in col)
        assert verify_invariance(ctx, cone)

    def test_quadratic_certificate_oracle(self):
        # independent 2x2 solve of the invariance systems
        ctx = make_context("x^2 - 3x - 2")
        cone = build_rational_cone(ctx, eigen_split(ctx), scale=8)
        (u1, u2) = cone.generators
        det = u1.coords[0] * u2.coords[1] - u2.coords[0] * u1.coords[1]
        assert det != 0
        for j, u in enumerate(cone.generators):
            target = mul_lambda(ctx, u).coords
            a = Fraction(target[0] * u2.coords[1] - u2.coords[0] * target[1], det)
            b = Fraction(u1.coords[0] * target[1] - target[0] * u1.coords[1], det)
            assert (a, b) == cone.invariance_certificate[j]
            assert a >= 0 and b >= 0

    def test_retry_loop_eventually_succeeds(self):
        ctx = make_context("x^3 - x - 1")
        cone = build_rational_cone(ctx, eigen_split(ctx),
                                   config=Config(cone_scale_start=1))
        assert verify_invariance(ctx, cone)

    def test_single_scale_failure(self):
        # at scale 1 the rounded 16-gon for this quartic does not certify;
        # with the cap pinned to 1 the retry loop is exhausted immediately
        ctx = make_context("x^4 - x - 1")
        with pytest.raises(ConeSearchFailed):
            build_rational_cone(ctx, eigen_split(ctx), scale=1,
                                config=Config(cone_scale_start=1, cone_scale_cap=1))

    def test_near_degenerate_quartic_recovers_at_larger_scale(self):
        ctx = make_context("x^4 - x - 1")
        cone = build_rational_cone(ctx, eigen_split(ctx),
                                   config=Config(cone_scale_start=1))
        assert cone.scale_used > 1
        assert verify_invariance(ctx, cone)


class TestConeMember:
    def setup_method(self):
        self.ctx = make_context("x^2 - 3x - 2")
        self.cone = build_rational_cone(self.ctx, eigen_split(self.ctx), scale=8)

    def test_generator_is_member(self):
        cert = cone_member(self.cone, self.cone.generators[0])
        assert cert is not None
        assert sum(cert[j] for j in range(len(cert))) >= 1

    def test_zero_is_member_with_zero_certificate(self):
        cert = cone_member(self.cone, self.ctx.zero())
        assert cert is not None

    def test_negated_generator_not_member(self):
        assert cone_member(self.cone, -self.cone.generators[0]) is None


class TestGordan:
    def test_integer_ray(self):
        ctx, cone, gens = pipeline_to_gens("x - 5")
        assert [e.coords for e in gens.elements] == [(1,)]
        assert gens.parallelepiped_count == 2

    def test_quadratic_contains_generators(self):
        ctx, cone, gens = pipeline_to_gens("x^2 - 3x - 2", scale=8)
        for g in cone.generators:
            assert gens.index_of(g) is not None
        assert gens.size >= 2

    def test_enumeration_cap(self):
        ctx = make_context("x^2 - 3x - 2")
        split = eigen_split(ctx)
        cone = build_rational_cone(ctx, split, scale=4096)
        with pytest.raises(EnumerationCapExceeded):
            gordan_generators(ctx, cone)

    def test_semigroup_closure_sampling(self):
        ctx, cone, gens = pipeline_to_gens("x^2 - 3x - 2", scale=1)
        rng = random.Random(7)
        for _ in range(100):
            a = gens.elements[rng.randrange(gens.size)]
            b = gens.elements[rng.randrange(gens.size)]
            t = a + b
            assert cone_member(cone, t) is not None
            assert recompose(gens, decompose(gens, cone, t)).coords == t.coords


class TestDecompose:
    def test_unit_vector_on_generator(self):
        ctx, cone, gens = pipeline_to_gens("x^2 - 3x - 2", scale=1)
        s0 = gens.elements[0]
        c = decompose(gens, cone, s0)
        assert sum(c) == 1 and c[0] == 1

    def test_integer_counting(self):
        ctx, cone, gens = pipeline_to_gens("x - 5")
        c = decompose(gens, cone, LatticeElement((16,)))
        assert c == (16,)

    def test_constructed_round_trip(self):
        ctx, cone, gens = pipeline_to_gens("x^2 - 3x - 2", scale=1)
        t = mul_lambda(ctx, gens.elements[0]) + gens.elements[1]
        c = decompose(gens, cone, t)
        assert recompose(gens, c).coords == t.coords


class TestFindRecipe:
    def test_lambda_three(self):
        ctx, cone, gens = pipeline_to_gens("x - 3")
        n0, n = even_lemma(ctx)
        recipe = find_recipe(ctx, gens, n0, n, cone)
        assert (n0, n) == (1, 2)
        assert recipe.big_m == 3
        assert recipe.e == ((8,),)
        # 27 = (2*8+2)*1 + 2*3 + 3
        assert 27 == (2 * 8 + 2) + 2 * 3 + 3
        assert recipe_identity_holds(ctx, recipe)

    def test_lambda_five(self):
        ctx, cone, gens = pipeline_to_gens("x - 5")
        recipe = find_recipe(ctx, gens, 1, 2, cone)
        assert recipe.big_m == 2
        assert recipe.e == ((4,),)
        assert 25 == (2 * 4 + 2) + 2 * 5 + 5

    def test_h_zero_rejected(self):
        # for lambda = 2: g = 2 + 2(1+2) = 8 = 2^3, so M = 3 gives h = 0 and
        # must be skipped; M = 4 is the first acceptable exponent
        ctx, cone, gens = pipeline_to_gens("x - 2")
        recipe = find_recipe(ctx, gens, 1, 2, cone)
        assert recipe.big_m == 4
        assert recipe.e == ((4,),)

    def test_quadratic_recipe(self):
        ctx, cone, gens = pipeline_to_gens("x^2 - 3x - 2", scale=1)
        n0, n = even_lemma(ctx)
        recipe = find_recipe(ctx, gens, n0, n, cone)
        assert recipe_identity_holds(ctx, recipe)
        assert (recipe.big_m - recipe.n_even) % (recipe.n_even - recipe.n0) == 0
        assert recipe.big_m > recipe.n0

    def test_slim_cone_monotone_witness(self):
        # the next congruent exponent also works for every k
        ctx, cone, gens = pipeline_to_gens("x^2 - 3x - 2", scale=1)
        n0, n = even_lemma(ctx)
        recipe = find_recipe(ctx, gens, n0, n, cone)
        step = recipe.n_even - recipe.n0
        for k, sk in enumerate(recipe.s):
            nxt = mul_lambda_power(ctx, sk, recipe.big_m + step) - recipe.g[k]
            assert not nxt.is_zero()
            half = nxt.halve()
            assert half is not None and cone_member(cone, half) is not None

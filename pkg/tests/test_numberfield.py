from fractions import Fraction

import pytest

from ttforge.config import Config
from ttforge.errors import (
    NoPositiveRealRoot,
    NotMonic,
    NotSquareFree,
    DegreeCapExceeded,
    ReducibleInput,
)
from ttforge.numberfield import (
    Classification,
    IntPolynomial,
    LatticeElement,
    classify,
    even_lemma,
    eval_poly_at_lattice,
    lat_mul,
    make_context,
    minpoly_power,
    mul_lambda,
    parse_polynomial,
    power_lambda,
    real_embed,
)


def ctx_of(text):
    return make_context(parse_polynomial(text))


class TestParsing:
    def test_quadratic(self):
        p = parse_polynomial("x^2 - 3x - 2")
        assert p.coefficients == (-2, -3, 1)

    def test_linear(self):
        assert parse_polynomial("x - 5").coefficients == (-5, 1)

    def test_json_style_list(self):
        p = IntPolynomial((-2, -3, 1))
        assert str(p) == "x^2 - 3x - 2"

    def test_cubic_sparse(self):
        assert parse_polynomial("x^3 - x - 1").coefficients == (-1, -1, 0, 1)

    def test_rejects_garbage(self):
        with pytest.raises(Exception):
            parse_polynomial("x^2 + squirrel")


class TestMakeContext:
    def test_degree_one(self):
        ctx = ctx_of("x - 5")
        assert ctx.degree == 1
        assert ctx.companion == ((5,),)
        assert ctx.lambda_interval.contains(5)

    def test_quadratic_companion_and_roots(self):
        ctx = ctx_of("x^2 - 3x - 2")
        assert ctx.companion == ((0, 2), (1, 3))
        lam = ctx.lambda_interval
        assert lam.contains(Fraction(35616, 10000)) or (
            lam.lo < Fraction(35616, 10000) < lam.hi or abs(float(lam.mid) - 3.5616) < 1e-3
        )
        others = [b for i, b in enumerate(ctx.roots) if i != ctx.lambda_index]
        assert len(others) == 1
        assert abs(float(others[0].box.re.mid) + 0.5616) < 1e-3

    def test_no_positive_real_root(self):
        with pytest.raises(NoPositiveRealRoot):
            ctx_of("x^2 + 1")

    def test_not_monic(self):
        with pytest.raises(NotMonic):
            make_context([1, 1, 2])

    def test_not_square_free(self):
        with pytest.raises(NotSquareFree):
            make_context([1, -2, 1])  # (x-1)^2

    def test_rejects_integer_root(self):
        with pytest.raises(ReducibleInput):
            make_context([-2, -1, 1])  # (x-2)(x+1)

    def test_degree_cap(self):
        coeffs = [1] + [0] * 8 + [1]
        coeffs[0] = -1
        with pytest.raises(DegreeCapExceeded):
            make_context(coeffs, config=Config(degree_cap=8))

    def test_boxes_pairwise_disjoint(self):
        ctx = ctx_of("x^3 - x - 1")
        assert len(ctx.roots) == 3
        for i in range(3):
            for j in range(i + 1, 3):
                assert ctx.roots[i].box.disjoint(ctx.roots[j].box)


class TestMulLambda:
    def test_paper_quadratic(self):
        ctx = ctx_of("x^2 - 3x - 2")
        assert mul_lambda(ctx, LatticeElement((0, 1))).coords == (2, 3)

    def test_zero(self):
        ctx = ctx_of("x^2 - 3x - 2")
        assert mul_lambda(ctx, ctx.zero()).coords == (0, 0)

    def test_scalar(self):
        ctx = ctx_of("x - 5")
        assert mul_lambda(ctx, LatticeElement((1,))).coords == (5,)


class TestFieldOps:
    def test_lambda_squared(self):
        ctx = ctx_of("x^2 - 3x - 2")
        lam = LatticeElement((0, 1))
        assert lat_mul(ctx, lam, lam).coords == (2, 3)

    def test_additive_identity(self):
        ctx = ctx_of("x^2 - 3x - 2")
        v = LatticeElement((4, -7))
        assert (v + ctx.zero()).coords == v.coords

    def test_power_lambda_cubed(self):
        ctx = ctx_of("x^2 - 3x - 2")
        assert power_lambda(ctx, 3).coords == (6, 11)

    def test_power_matches_iterated_mul(self):
        for text in ("x - 5", "x^2 - 3x - 2", "x^3 - x - 1"):
            ctx = ctx_of(text)
            v = ctx.one()
            for n in range(13):
                assert power_lambda(ctx, n).coords == v.coords
                v = mul_lambda(ctx, v)

    def test_mul_commutes_and_distributes(self):
        ctx = ctx_of("x^3 - x - 1")
        a = LatticeElement((1, -2, 3))
        b = LatticeElement((0, 5, -1))
        c = LatticeElement((2, 0, 7))
        assert lat_mul(ctx, a, b).coords == lat_mul(ctx, b, a).coords
        left = lat_mul(ctx, a, b + c)
        right = lat_mul(ctx, a, b) + lat_mul(ctx, a, c)
        assert left.coords == right.coords


class TestRealEmbed:
    def test_rational_value(self):
        ctx = ctx_of("x - 5")
        iv = real_embed(ctx, LatticeElement((3,)), 64)
        assert iv.contains(3)
        assert iv.width <= Fraction(1, 2 ** 60)

    def test_surd(self):
        ctx = ctx_of("x^2 - 3x - 2")
        iv = real_embed(ctx, LatticeElement((0, 1)), 64)
        assert abs(float(iv.mid) - 3.5615528128088303) < 1e-12

    def test_zero(self):
        ctx = ctx_of("x^2 - 3x - 2")
        iv = real_embed(ctx, ctx.zero(), 64)
        assert iv.contains(0) and float(iv.width) < 1e-15

    def test_respects_ring_ops(self):
        ctx = ctx_of("x^2 - 3x - 2")
        u = LatticeElement((1, 2))
        v = LatticeElement((-3, 1))
        iu, iv_ = real_embed(ctx, u, 80), real_embed(ctx, v, 80)
        isum = real_embed(ctx, u + v, 80)
        iprod = real_embed(ctx, lat_mul(ctx, u, v), 80)
        assert isum.lo <= (iu + iv_).hi and (iu + iv_).lo <= isum.hi
        assert iprod.lo <= (iu * iv_).hi and (iu * iv_).lo <= iprod.hi


class TestEvenLemma:
    @pytest.mark.parametrize(
        "text,expected",
        [("x^2 - 3x - 2", (1, 2)), ("x - 5", (1, 2)), ("x - 2", (1, 2)), ("x - 3", (1, 2))],
    )
    def test_examples(self, text, expected):
        assert even_lemma(ctx_of(text)) == expected

    @pytest.mark.parametrize("text", ["x^2 - 3x - 2", "x^3 - x - 1", "x^2 - 2", "x^2 - x - 1"])
    def test_brute_force_oracle(self, text):
        ctx = ctx_of(text)
        n0, n = even_lemma(ctx)
        states = {}
        v = ctx.lam()
        k = 1
        first_pair = None
        while first_pair is None:
            state = tuple(c % 2 for c in v.coords)
            for earlier, idx in states.items():
                if state == earlier:
                    first_pair = (idx, k)
                    break
            if first_pair is None:
                states[state] = k
                v = mul_lambda(ctx, v)
                k += 1
        assert (n0, n) == first_pair
        lhs = power_lambda(ctx, n).coords
        rhs = power_lambda(ctx, n0).coords
        assert all((a - b) % 2 == 0 for a, b in zip(lhs, rhs))
        # no lexicographically smaller pair exists
        for m0 in range(1, n0 + 1):
            top = n if m0 == n0 else 2 ** ctx.degree + 2
            for m in range(m0 + 1, top):
                a = power_lambda(ctx, m).coords
                b = power_lambda(ctx, m0).coords
                assert any((x - y) % 2 for x, y in zip(a, b))


class TestMinpolyPower:
    def test_sqrt2_squared(self):
        ctx = ctx_of("x^2 - 2")
        assert minpoly_power(ctx, 2).coefficients == (-2, 1)

    def test_identity_power(self):
        ctx = ctx_of("x^2 - 3x - 2")
        assert minpoly_power(ctx, 1) is ctx.minpoly

    def test_quadratic_squared(self):
        ctx = ctx_of("x^2 - 3x - 2")
        assert minpoly_power(ctx, 2).coefficients == (4, -13, 1)

    def test_root_containment(self):
        ctx = ctx_of("x^3 - x - 1")
        for n in (2, 3, 5):
            q = minpoly_power(ctx, n)
            lam_pow = ctx.lambda_refined(120).pow(n)
            from ttforge.numberfield import poly_eval

            assert poly_eval(q.coefficients, lam_pow).contains_zero()


class TestClassify:
    def test_perron_quadratic(self):
        assert classify(ctx_of("x^2 - 3x - 2")) == Classification("Perron")

    def test_weak_perron_sqrt2(self):
        cls = classify(ctx_of("x^2 - 2"))
        assert cls.kind == "WeakPerron" and cls.witness == 2

    def test_degree_one_is_perron(self):
        assert classify(ctx_of("x - 1")).kind == "Perron"

    def test_neither(self):
        # golden-ratio-conjugate case: largest real root 0.618 < |-1.618|
        assert classify(ctx_of("x^2 + x - 1")).kind == "Neither"

    def test_pisot_cubic_perron(self):
        assert classify(ctx_of("x^3 - x - 1")).kind == "Perron"

    def test_precision_monotone(self):
        for text in ("x^2 - 3x - 2", "x^3 - x - 1"):
            a = classify(make_context(text, precision=64))
            b = classify(make_context(text, precision=512))
            assert a.kind == b.kind

    def test_neg_lambda_detection_is_exact(self):
        ctx = ctx_of("x^2 - 2")
        neg = -ctx.lam()
        val = eval_poly_at_lattice(ctx, ctx.minpoly.coefficients, neg)
        assert val.is_zero()

"""Invariant rational cones, Gordan generators, and the star-map recipe.

The flow is: split R^d into certified eigendata for the companion matrix,
round bisector directions to integer generators, certify the cone exactly
(invariance under the companion matrix, full dimension, salience, dominant
direction strictly interior), enumerate the Gordan parallelepiped to get
semigroup generators, and search exponents for the key expansion identity

    lambda^M . s_k = sum_i (2 e_i^{(k)} + 2) s_i + 2 lambda . s_k + lambda^{n0} . s_k

which is re-verified as an exact integer-vector identity before a recipe is
ever returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .config import Config
from .errors import (
    ConeSearchFailed,
    DecompositionFailed,
    EnumerationCapExceeded,
    PrecisionExhausted,
    RecipeSearchExhausted,
)
from .exactlp import facet_normals, fm_nonneg, rank, solve_box_combination, solve_nonneg
from .numberfield import (
    Box,
    LatticeElement,
    NumberFieldContext,
    RInterval,
    poly_eval,
    mul_lambda,
    mul_lambda_power,
    real_embed,
)

# ---------------------------------------------------------------------------
# eigen decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantSubspace:
    kind: str  # "real" | "complex"
    basis: tuple[tuple[RInterval, ...], ...]  # 1 vector (real) or 2 (complex pair)
    radius_upper: Fraction  # certified bound on |mu|
    root_indices: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class EigenSplit:
    dominant_direction: tuple[RInterval, ...]
    invariant_subspaces: tuple[InvariantSubspace, ...]


def _horner_tails(ctx: NumberFieldContext) -> list[list[int]]:
    """Integer polynomials H_k with eigenvector(mu) = (H_0(mu),...,H_{d-1}(mu)).

    H_{d-1} = 1 and H_{k-1}(x) = x H_k(x) + c_k, so C . v(mu) = mu v(mu)
    holds identically for every root mu of the minimal polynomial.
    """
    c = ctx.minpoly.coefficients
    d = ctx.degree
    tails: list[list[int]] = [[] for _ in range(d)]
    tails[d - 1] = [1]
    for k in range(d - 1, 0, -1):
        tails[k - 1] = [c[k]] + tails[k]
    return tails


def dominant_direction(ctx: NumberFieldContext, width_bits: int = 64) -> tuple[RInterval, ...]:
    lam = ctx.lambda_refined(width_bits)
    return tuple(poly_eval(t, lam) for t in _horner_tails(ctx))


def eigen_split(ctx: NumberFieldContext, width_bits: int = 64) -> EigenSplit:
    """Certified invariant-subspace decomposition under the companion matrix.

    Requires a Perron context: every non-dominant spectral radius bound must
    fall strictly below the lower bound for lambda.
    """
    d = ctx.degree
    tails = _horner_tails(ctx)
    dominant = dominant_direction(ctx, width_bits)
    if d == 1:
        return EigenSplit(dominant, ())

    work = ctx
    for _ in range(12):
        lam_lo = work.roots[work.lambda_index].box.re.lo
        subspaces = []
        seen = set()
        ok = True
        for i, rb in enumerate(work.roots):
            if i == work.lambda_index or i in seen:
                continue
            bound = rb.box.mag_upper()
            if bound >= lam_lo:
                ok = False
                break
            if rb.is_real:
                vec = tuple(poly_eval(t, rb.box.re) for t in tails)
                subspaces.append(InvariantSubspace("real", (vec,), bound, (i,)))
                _check_real_residual(work, rb.box.re, vec)
            else:
                mate = next((j for j, other in enumerate(work.roots)
                             if j != i and j not in seen and not other.is_real
                             and other.box.re == rb.box.re and other.box.im == -rb.box.im),
                            None)
                if mate is None:
                    raise PrecisionExhausted("conjugate pairing lost during refinement")
                seen.add(mate)
                box = rb.box if rb.box.im.lo > 0 else work.roots[mate].box
                vecs = [poly_eval(t, box) for t in tails]
                re_vec = tuple(v.re for v in vecs)
                im_vec = tuple(v.im for v in vecs)
                subspaces.append(InvariantSubspace("complex", (re_vec, im_vec), bound, (i, mate)))
                _check_complex_residual(work, box, re_vec, im_vec)
        if ok:
            assert 1 + sum(s.dimension for s in subspaces) == d
            return EigenSplit(dominant, tuple(subspaces))
        work = work.refined(8)
    raise PrecisionExhausted(f"eigen split: conjugates not separated below lambda for {ctx.minpoly}")


def _mat_vec_interval(mat, vec):
    return tuple(sum((RInterval.point(mat[i][j]) * vec[j] for j in range(len(vec))),
                     RInterval.point(0)) for i in range(len(mat)))


def _check_real_residual(ctx, mu: RInterval, vec) -> None:
    cv = _mat_vec_interval(ctx.companion, vec)
    for i in range(len(vec)):
        assert (cv[i] - mu * vec[i]).contains_zero()


def _check_complex_residual(ctx, beta: Box, re_vec, im_vec) -> None:
    c_re = _mat_vec_interval(ctx.companion, re_vec)
    c_im = _mat_vec_interval(ctx.companion, im_vec)
    for i in range(len(re_vec)):
        assert (c_re[i] - (beta.re * re_vec[i] - beta.im * im_vec[i])).contains_zero()
        assert (c_im[i] - (beta.re * im_vec[i] + beta.im * re_vec[i])).contains_zero()


# ---------------------------------------------------------------------------
# rational cone
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalCone:
    generators: tuple[LatticeElement, ...]
    invariance_certificate: tuple[tuple[Fraction, ...], ...]  # column j expresses C.u_j
    facets: tuple[tuple[int, ...], ...]
    scale_used: int

    @property
    def dimension(self) -> int:
        return len(self.generators[0].coords)


def _unit(v):
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def _candidate_directions(split: EigenSplit, polygon_k: int) -> list[list[float]]:
    v1 = _unit([float(iv.mid) for iv in split.dominant_direction])
    out = []
    for sub in split.invariant_subspaces:
        if sub.kind == "real":
            w = _unit([float(iv.mid) for iv in sub.basis[0]])
            out.append([a + b for a, b in zip(v1, w)])
            out.append([a - b for a, b in zip(v1, w)])
        else:
            # scale Re/Im parts by one common factor: the companion action is a
            # rotation-scaling in their coefficient coordinates, so the regular
            # polygon must be inscribed in that metric, not the Euclidean one
            wa = [float(iv.mid) for iv in sub.basis[0]]
            wb = [float(iv.mid) for iv in sub.basis[1]]
            s = 1.0 / max(math.sqrt(sum(x * x for x in wa)),
                          math.sqrt(sum(x * x for x in wb)))
            for t in range(2 * polygon_k):
                ang = math.pi * t / polygon_k
                u = [s * (math.cos(ang) * a + math.sin(ang) * b) for a, b in zip(wa, wb)]
                out.append([a + b for a, b in zip(v1, u)])
    return out


def _certify_cone(ctx: NumberFieldContext, gens: list[LatticeElement],
                  scale: int) -> RationalCone | None:
    d = ctx.degree
    rows = [[g.coords[i] for g in gens] for i in range(d)]  # d x g
    if rank(rows) < d:
        return None
    # positive embedding keeps every generator on the lambda-positive side
    for g in gens:
        emb = real_embed(ctx, g, 48)
        if not emb.lo > 0:
            return None
    cert = []
    cmat = ctx.companion
    for g in gens:
        target = [sum(cmat[i][j] * g.coords[j] for j in range(d)) for i in range(d)]
        sol = solve_nonneg(rows, target)
        if sol is None:
            return None
        cert.append(tuple(sol))
    # salience: no generator's negative is a member
    for g in gens:
        if solve_nonneg(rows, [-c for c in g.coords]) is not None:
            return None
    facets = tuple(facet_normals([g.coords for g in gens]))
    if not facets:
        return None
    for bits in (64, 128, 256):
        dom = dominant_direction(ctx, bits)
        dots = [sum((RInterval.point(n[i]) * dom[i] for i in range(d)), RInterval.point(0))
                for n in facets]
        if all(dt.lo > 0 for dt in dots):
            return RationalCone(tuple(gens), tuple(cert), facets, scale)
        if any(dt.hi < 0 for dt in dots):
            return None
    return None


def build_rational_cone(ctx: NumberFieldContext, split: EigenSplit,
                        scale: int | None = None,
                        config: Config | None = None) -> RationalCone:
    """Integer-generated cone with exact invariance certificate.

    Generators are rounded from R-scaled bisector directions; every
    certificate failure doubles R up to the configured cap.
    """
    config = config or Config()
    d = ctx.degree
    if d == 1:
        one = LatticeElement((1,))
        lam = ctx.companion[0][0]
        return RationalCone((one,), ((Fraction(lam),),), ((1,),), scale or 1)

    r = scale if scale is not None else config.cone_scale_start
    cap = max(r, config.cone_scale_cap)
    tried = []
    cands = _candidate_directions(split, config.polygon_k)
    while r <= cap:
        gens = []
        seen = set()
        for cand in cands:
            coords = tuple(round(r * x) for x in cand)
            if all(c == 0 for c in coords) or coords in seen:
                continue
            seen.add(coords)
            gens.append(LatticeElement(coords))
        if gens:
            cone = _certify_cone(ctx, gens, r)
            if cone is not None:
                return cone
        tried.append(r)
        r *= 2
    raise ConeSearchFailed(f"no certifiable cone for {ctx.minpoly} at scales {tried}")


def cone_member(cone: RationalCone, x: LatticeElement) -> tuple[Fraction, ...] | None:
    """Nonnegative rational coefficients reproducing x, or None (not a member).

    Fourier-Motzkin decides dimensions <= 3; the exact simplex handles the
    rest.  The returned combination is re-checked exactly.
    """
    d = cone.dimension
    rows = [[g.coords[i] for g in cone.generators] for i in range(d)]
    engine = fm_nonneg if d <= 3 else solve_nonneg
    sol = engine(rows, list(x.coords))
    if sol is None:
        return None
    recombined = [sum(sol[j] * cone.generators[j].coords[i] for j in range(len(sol)))
                  for i in range(d)]
    assert all(Fraction(a) == b for a, b in zip(recombined, x.coords))
    return tuple(sol)


def verify_invariance(ctx: NumberFieldContext, cone: RationalCone) -> bool:
    """Independent substitution check of the invariance certificate.

    Clears denominators and compares integer vectors; used by the acceptance
    suite, not by the builder (which has its own path through the LP).
    """
    d = ctx.degree
    for j, g in enumerate(cone.generators):
        coeffs = cone.invariance_certificate[j]
        if any(c < 0 for c in coeffs):
            return False
        den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        lhs = [den * sum(ctx.companion[i][t] * g.coords[t] for t in range(d)) for i in range(d)]
        rhs = [sum(int(c * den) * u.coords[i] for c, u in zip(coeffs, cone.generators))
               for i in range(d)]
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Gordan generators and decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemigroupGenerators:
    elements: tuple[LatticeElement, ...]
    parallelepiped_count: int

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, x: LatticeElement) -> int | None:
        return self._index.get(x.coords)

    @property
    def _index(self):
        d = getattr(self, "_index_cache", None)
        if d is None:
            d = {e.coords: i for i, e in enumerate(self.elements)}
            object.__setattr__(self, "_index_cache", d)
        return d


def gordan_generators(ctx: NumberFieldContext, cone: RationalCone,
                      config: Config | None = None) -> SemigroupGenerators:
    """All nonzero lattice points of the generator parallelepiped H.

    H = {sum a_j u_j : a_j in [0,1]}; by Gordan's argument these points
    generate the semigroup of lattice cone points.
    """
    config = config or Config()
    d = ctx.degree
    gens = cone.generators
    lo = [sum(min(0, g.coords[i]) for g in gens) for i in range(d)]
    hi = [sum(max(0, g.coords[i]) for g in gens) for i in range(d)]
    volume = math.prod(hi[i] - lo[i] + 1 for i in range(d))
    if volume > config.enumeration_cap:
        raise EnumerationCapExceeded(
            f"candidate box holds {volume} points, cap is {config.enumeration_cap}")
    rows = [[g.coords[i] for g in gens] for i in range(d)]
    elements = []
    examined = 0
    for point in product(*(range(lo[i], hi[i] + 1) for i in range(d))):
        examined += 1
        if all(c == 0 for c in point):
            continue
        if solve_box_combination(rows, list(point)) is not None:
            elements.append(LatticeElement(point))
    elements.sort(key=lambda e: e.coords)
    out = SemigroupGenerators(tuple(elements), examined)
    for g in gens:
        assert out.index_of(g) is not None, "parallelepiped must contain the cone generators"
    for e in elements:
        assert cone_member(cone, e) is not None
    return out


def decompose(gens: SemigroupGenerators, cone: RationalCone,
              t: LatticeElement) -> tuple[int, ...]:
    """Nonnegative integers c with t = sum c_i s_i, exactly.

    Vertex cone coordinates from the deterministic simplex, integer parts
    peeled off, fractional remainder matched against the parallelepiped set.
    """
    if t.is_zero():
        raise DecompositionFailed("zero is not a semigroup element")
    d = cone.dimension
    rows = [[g.coords[i] for g in cone.generators] for i in range(d)]
    sol = solve_nonneg(rows, list(t.coords))
    if sol is None:
        raise DecompositionFailed(f"{t.coords} is not in the cone")
    coeffs = [0] * gens.size
    rem = t
    for j, b in enumerate(sol):
        n = math.floor(b)
        if n:
            idx = gens.index_of(cone.generators[j])
            coeffs[idx] += n
            rem = rem - cone.generators[j].scale(n)
    if not rem.is_zero():
        idx = gens.index_of(rem)
        if idx is None:
            raise DecompositionFailed(
                f"fractional remainder {rem.coords} is not a parallelepiped point")
        coeffs[idx] += 1
    recombined = recompose(gens, tuple(coeffs))
    if recombined.coords != t.coords:
        raise DecompositionFailed("recomposition mismatch (upstream bug)")
    return tuple(coeffs)


def recompose(gens: SemigroupGenerators, coeffs) -> LatticeElement:
    d = len(gens.elements[0].coords)
    acc = LatticeElement((0,) * d)
    for c, s in zip(coeffs, gens.elements, strict=True):
        if c:
            acc = acc + s.scale(c)
    return acc


# ---------------------------------------------------------------------------
# the star recipe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StarRecipe:
    m: int
    big_m: int  # the exponent M
    n0: int
    n_even: int  # the Even-Lemma N
    e: tuple[tuple[int, ...], ...]  # e[k][i]
    total: LatticeElement  # T = s_1 + ... + s_m
    g: tuple[LatticeElement, ...]
    s: tuple[LatticeElement, ...]


def recipe_identity_holds(ctx: NumberFieldContext, recipe: StarRecipe) -> bool:
    """Exact re-verification of the key identity for every k."""
    for k in range(recipe.m):
        sk = recipe.s[k]
        lhs = mul_lambda_power(ctx, sk, recipe.big_m)
        rhs = ctx.zero()
        for i in range(recipe.m):
            rhs = rhs + recipe.s[i].scale(2 * recipe.e[k][i] + 2)
        rhs = rhs + mul_lambda(ctx, sk).scale(2)
        rhs = rhs + mul_lambda_power(ctx, sk, recipe.n0)
        if lhs.coords != rhs.coords:
            return False
    return True


def find_recipe(ctx: NumberFieldContext, gens: SemigroupGenerators,
                n0: int, n_even: int, cone: RationalCone,
                config: Config | None = None) -> StarRecipe:
    """Search M = p(N - n0) + N for the first exponent satisfying the identity.

    Acceptance of M depends only on M: every k is tested independently and
    all must pass.  h_k = lambda^M s_k - g_k must be a nonzero even lattice
    vector whose half decomposes in the semigroup.
    """
    config = config or Config()
    total = gens.elements[0]
    for s in gens.elements[1:]:
        total = total + s
    g_list = []
    for sk in gens.elements:
        gk = mul_lambda_power(ctx, sk, n0) + (total + mul_lambda(ctx, sk)).scale(2)
        g_list.append(gk)

    for p in range(config.p_cap + 1):
        big_m = p * (n_even - n0) + n_even
        e_rows = []
        ok = True
        for k, sk in enumerate(gens.elements):
            h = mul_lambda_power(ctx, sk, big_m) - g_list[k]
            if h.is_zero():
                ok = False
                break
            half = h.halve()
            assert half is not None, "parity broken: Even-Lemma congruence violated"
            if cone_member(cone, half) is None:
                ok = False
                break
            e_rows.append(decompose(gens, cone, half))
        if not ok:
            continue
        recipe = StarRecipe(
            m=gens.size, big_m=big_m, n0=n0, n_even=n_even,
            e=tuple(e_rows), total=total, g=tuple(g_list), s=gens.elements)
        assert recipe_identity_holds(ctx, recipe)
        return recipe
    raise RecipeSearchExhausted(
        f"no admissible exponent with p <= {config.p_cap} for {ctx.minpoly}")

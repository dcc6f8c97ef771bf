"""Exact arithmetic in Z[lambda] with certified root enclosures.

Conventions used throughout the package:

* A monic integer polynomial ``p`` of degree ``d`` defines the ambient
  arithmetic.  Elements of ``Z[lambda]`` (and of ``Q(lambda)``) are stored as
  coordinate vectors in the basis ``1, lambda, ..., lambda^(d-1)``.
* Multiplication by ``lambda`` is the companion matrix ``C`` acting on
  coordinates: subdiagonal ones, last column ``-c_0, ..., -c_{d-1}``.
* All root enclosures are rectangles with ``fractions.Fraction`` endpoints.
  Real roots are isolated by Sturm bisection; complex roots are certified
  with a Krawczyk containment test seeded from floating-point eigenvalues.
  Nothing downstream ever trusts a float.

The lattice used everywhere is ``Z[lambda]`` (not the maximal order); every
certificate that mentions a lattice records this choice.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .config import Config
from .errors import (
    DegreeCapExceeded,
    NoPerronPower,
    NoPositiveRealRoot,
    NotMonic,
    NotSquareFree,
    PolynomialInputError,
    PrecisionExhausted,
    ReducibleInput,
    UndecidedAtPrecision,
)

LATTICE_NOTE = "lattice = Z[lambda]"

# ---------------------------------------------------------------------------
# rational intervals and boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RInterval:
    """Closed interval with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @staticmethod
    def point(x) -> "RInterval":
        x = Fraction(x)
        return RInterval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other):
        other = _as_interval(other)
        return RInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_interval(other))

    def __rsub__(self, other):
        return _as_interval(other) + (-self)

    def __mul__(self, other):
        other = _as_interval(other)
        prods = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return RInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def strictly_inside(self, other: "RInterval") -> bool:
        return other.lo < self.lo and self.hi < other.hi

    def disjoint(self, other: "RInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def intersect(self, other: "RInterval") -> "RInterval":
        return RInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def abs_upper(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def abs_lower(self) -> Fraction:
        if self.contains_zero():
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def pow(self, n: int) -> "RInterval":
        out = RInterval.point(1)
        for _ in range(n):
            out = out * self
        return out

    def dilate(self, bits: int) -> "RInterval":
        """Round endpoints outward to dyadics with denominator 2**bits."""
        scale = 1 << bits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return RInterval(lo, hi)

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def _as_interval(x) -> RInterval:
    if isinstance(x, RInterval):
        return x
    return RInterval.point(x)


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """Rational r with r*r >= q (q >= 0)."""
    if q < 0:
        raise ValueError("negative argument")
    n, d = q.numerator, q.denominator
    scale = 1 << bits
    s = math.isqrt(n * d * scale * scale)
    return Fraction(s + 1, d * scale)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    """Rational r >= 0 with r*r <= q (q >= 0)."""
    if q < 0:
        raise ValueError("negative argument")
    n, d = q.numerator, q.denominator
    scale = 1 << bits
    s = math.isqrt(n * d * scale * scale)
    return Fraction(s, d * scale)


@dataclass(frozen=True, slots=True)
class Box:
    """Complex rectangle re + i*im with rational interval sides."""

    re: RInterval
    im: RInterval

    @staticmethod
    def point(re, im=0) -> "Box":
        return Box(RInterval.point(re), RInterval.point(im))

    def __add__(self, other):
        other = _as_box(other)
        return Box(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Box(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_box(other))

    def __rsub__(self, other):
        return _as_box(other) + (-self)

    def __mul__(self, other):
        other = _as_box(other)
        return Box(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    @property
    def mid(self) -> tuple[Fraction, Fraction]:
        return (self.re.mid, self.im.mid)

    def strictly_inside(self, other: "Box") -> bool:
        return self.re.strictly_inside(other.re) and self.im.strictly_inside(other.im)

    def disjoint(self, other: "Box") -> bool:
        return self.re.disjoint(other.re) or self.im.disjoint(other.im)

    def intersect(self, other: "Box") -> "Box":
        return Box(self.re.intersect(other.re), self.im.intersect(other.im))

    def mag_upper(self) -> Fraction:
        return sqrt_upper(self.re.abs_upper() ** 2 + self.im.abs_upper() ** 2)

    def mag_lower(self) -> Fraction:
        return sqrt_lower(self.re.abs_lower() ** 2 + self.im.abs_lower() ** 2)

    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def __repr__(self):
        return f"Box({self.re!r}, {self.im!r})"


def _as_box(x) -> Box:
    if isinstance(x, Box):
        return x
    if isinstance(x, RInterval):
        return Box(x, RInterval.point(0))
    if isinstance(x, tuple):
        return Box.point(x[0], x[1])
    return Box.point(x)


def _c_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _c_inv(a):
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise ZeroDivisionError("complex zero")
    return (a[0] / n, -a[1] / n)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Monic square-free integer polynomial, coefficients ascending."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) < 2:
            raise PolynomialInputError("degree must be at least 1")
        if coeffs[-1] != 1:
            raise NotMonic(f"leading coefficient is {coeffs[-1]}, expected 1")
        if _gcd_degree(coeffs) != 0:
            raise NotSquareFree("polynomial shares a factor with its derivative")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def derivative(self) -> tuple[int, ...]:
        return tuple(i * c for i, c in enumerate(self.coefficients) if i > 0)

    def __call__(self, x):
        return poly_eval(self.coefficients, x)

    def __str__(self):
        return format_polynomial(self.coefficients)


def poly_eval(coeffs: Sequence, x):
    """Horner evaluation; works for ints, Fractions, intervals and boxes."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_trim(c: list) -> list:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i, bc in enumerate(b):
            a[i + k] -= f * bc
        a.pop()
    return _poly_trim(q), _poly_trim(a if a else [Fraction(0)])


def _poly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    a = _poly_trim([Fraction(c) for c in a])
    b = _poly_trim([Fraction(c) for c in b])
    while b != [Fraction(0)]:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a[-1] != 0:
        a = [c / a[-1] for c in a]
    return a


def _gcd_degree(coeffs: Sequence[int]) -> int:
    deriv = [i * c for i, c in enumerate(coeffs) if i > 0]
    return len(_poly_gcd(coeffs, deriv)) - 1


_TERM_RE = _re.compile(r"([+-]?)\s*(\d+)?\s*(?:(x)\s*(?:\^\s*(\d+))?)?")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse text like ``x^2 - 3x - 2`` into an IntPolynomial."""
    s = text.strip().replace("**", "^").replace("*", "")
    if not s:
        raise PolynomialInputError("empty polynomial text")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise PolynomialInputError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, num, xpart, exp = m.groups()
        if num is None and xpart is None:
            raise PolynomialInputError(f"cannot parse polynomial near {s[pos:]!r}")
        coef = int(num) if num is not None else 1
        if sign == "-":
            coef = -coef
        power = 0
        if xpart:
            power = int(exp) if exp is not None else 1
        coeffs[power] = coeffs.get(power, 0) + coef
        pos = m.end()
        while pos < len(s) and s[pos] in " \t":
            pos += 1
    degree = max(coeffs)
    return IntPolynomial(tuple(coeffs.get(i, 0) for i in range(degree + 1)))


def format_polynomial(coeffs: Sequence[int]) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            x = "x" if i == 1 else f"x^{i}"
            body = x if mag == 1 else f"{mag}{x}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LatticeElement:
    """Integer coordinates in the basis 1, lambda, ..., lambda^(d-1)."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __add__(self, other: "LatticeElement") -> "LatticeElement":
        return LatticeElement(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "LatticeElement") -> "LatticeElement":
        return LatticeElement(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> "LatticeElement":
        return LatticeElement(tuple(-a for a in self.coords))

    def scale(self, k: int) -> "LatticeElement":
        return LatticeElement(tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def halve(self) -> "LatticeElement | None":
        if any(c % 2 for c in self.coords):
            return None
        return LatticeElement(tuple(c // 2 for c in self.coords))


@dataclass(frozen=True, slots=True)
class FieldElement:
    """Rational coordinates in the basis 1, lambda, ..., lambda^(d-1)."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))


@dataclass(frozen=True)
class Classification:
    kind: str  # "Perron" | "WeakPerron" | "Neither"
    witness: int | None = None

    def __post_init__(self):
        if self.kind not in ("Perron", "WeakPerron", "Neither"):
            raise ValueError(f"bad kind {self.kind}")
        if self.kind == "Perron" and self.witness is not None:
            raise ValueError("Perron carries no witness")
        if self.kind == "WeakPerron" and (self.witness is None or self.witness < 2):
            raise ValueError("WeakPerron witness must be >= 2")


# ---------------------------------------------------------------------------
# root certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootBox:
    box: Box
    is_real: bool

    def refined(self, poly: IntPolynomial, rounds: int = 1) -> "RootBox":
        if self.is_real:
            iv = self.box.re
            if iv.width == 0:
                return self
            for _ in range(rounds):
                iv = _bisect_once(poly.coefficients, iv)
            return RootBox(Box(iv, RInterval.point(0)), True)
        box = self.box
        for _ in range(rounds):
            box = _krawczyk_refine(poly, box)
        return RootBox(box, False)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _bisect_once(coeffs: Sequence[int], iv: RInterval) -> RInterval:
    # invariant: p changes sign across iv and iv contains no other root
    mid = iv.mid
    v = poly_eval(coeffs, mid)
    if v == 0:  # rational roots were excluded up front
        raise PrecisionExhausted("bisection hit an exact root unexpectedly")
    if _sign(v) == _sign(poly_eval(coeffs, iv.lo)):
        return RInterval(mid, iv.hi)
    return RInterval(iv.lo, mid)


def _sturm_chain(coeffs: Sequence[int]) -> list[list[Fraction]]:
    p0 = [Fraction(c) for c in coeffs]
    p1 = [Fraction(i * c) for i, c in enumerate(coeffs) if i > 0]
    chain = [p0, p1]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if r == [Fraction(0)]:
            break
        chain.append([-c for c in r])
    return chain


def _variations(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        s = _sign(poly_eval(p, x))
        if s != 0:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _isolate_real_roots(poly: IntPolynomial) -> list[RInterval]:
    coeffs = poly.coefficients
    chain = _sturm_chain(coeffs)
    bound = Fraction(1 + max(abs(c) for c in coeffs[:-1]))
    stack = [(-bound, bound)]
    out = []
    while stack:
        a, b = stack.pop()
        n = _variations(chain, a) - _variations(chain, b)
        if n == 0:
            continue
        if n == 1:
            out.append(RInterval(a, b))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort(key=lambda iv: iv.lo)
    return out


def _krawczyk_box(poly: IntPolynomial, box: Box) -> Box | None:
    """One Krawczyk step; returns K(box) or None if the preconditioner fails."""
    coeffs = poly.coefficients
    dcoeffs = poly.derivative()
    m = box.mid
    # exact complex evaluation at the rational midpoint
    acc = (Fraction(0), Fraction(0))
    dacc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _c_mul(acc, m)
        acc = (acc[0] + c, acc[1])
    for c in reversed(dcoeffs):
        dacc = _c_mul(dacc, m)
        dacc = (dacc[0] + c, dacc[1])
    try:
        y = _c_inv(dacc)
    except ZeroDivisionError:
        return None
    ybox = Box.point(*y)
    mbox = Box.point(*m)
    pm_box = Box.point(*acc)
    dp_on_box = poly_eval(dcoeffs, box)
    one = Box.point(1, 0)
    return mbox - ybox * pm_box + (one - ybox * dp_on_box) * (box - mbox)


def _krawczyk_refine(poly: IntPolynomial, box: Box) -> Box:
    k = _krawczyk_box(poly, box)
    if k is None:
        return box
    try:
        return k.intersect(box)
    except ValueError:
        return box


def _dyadic(x: float, bits: int = 80) -> Fraction:
    return Fraction(x).limit_denominator(1 << bits)


def _certify_complex_root(poly: IntPolynomial, seed: complex,
                          radius: float, precision_bits: int) -> Box:
    dcoeffs = poly.derivative()
    z = seed
    for _ in range(60):  # float polish; certification below is what counts
        dp = poly_eval(dcoeffs, z)
        if dp == 0:
            break
        step = poly_eval(poly.coefficients, z) / dp
        z -= step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    m = (_dyadic(z.real), _dyadic(z.imag))
    r = Fraction(_dyadic(max(radius, 1e-12)))
    for _ in range(precision_bits):
        box = Box(RInterval(m[0] - r, m[0] + r), RInterval(m[1] - r, m[1] + r))
        k = _krawczyk_box(poly, box)
        if k is not None and k.strictly_inside(box):
            return k.intersect(box)
        r /= 4
        if r == 0:
            break
    raise PrecisionExhausted(f"cannot certify complex root near {z}")


# ---------------------------------------------------------------------------
# contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumberFieldContext:
    """The ambient arithmetic for a designated positive real root lambda."""

    minpoly: IntPolynomial
    companion: tuple[tuple[int, ...], ...]
    roots: tuple[RootBox, ...]
    lambda_index: int
    precision_bits: int

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def lambda_interval(self) -> RInterval:
        return self.roots[self.lambda_index].box.re

    def zero(self) -> LatticeElement:
        return LatticeElement((0,) * self.degree)

    def one(self) -> LatticeElement:
        return LatticeElement((1,) + (0,) * (self.degree - 1))

    def lam(self) -> LatticeElement:
        if self.degree == 1:
            return LatticeElement((-self.minpoly.coefficients[0],))
        return LatticeElement((0, 1) + (0,) * (self.degree - 2))

    def refined(self, rounds: int = 8) -> "NumberFieldContext":
        roots = tuple(r.refined(self.minpoly, rounds) for r in self.roots)
        return NumberFieldContext(self.minpoly, self.companion, roots,
                                  self.lambda_index, self.precision_bits)

    def lambda_refined(self, width_bits: int) -> RInterval:
        """A lambda enclosure of width <= 2**-width_bits (local, context unchanged)."""
        iv = self.lambda_interval
        if iv.width == 0:
            return iv
        target = Fraction(1, 1 << width_bits)
        guard = 0
        while iv.width > target:
            iv = _bisect_once(self.minpoly.coefficients, iv)
            guard += 1
            if guard > width_bits + 4 * self.precision_bits:
                raise PrecisionExhausted("lambda refinement stalled")
        return iv


def companion_matrix(poly: IntPolynomial) -> tuple[tuple[int, ...], ...]:
    d = poly.degree
    c = poly.coefficients
    rows = []
    for i in range(d):
        row = [0] * d
        if i > 0:
            row[i - 1] = 1
        row[d - 1] += -c[i]
        rows.append(tuple(row))
    return tuple(rows)


def _integer_root_trial(coeffs: Sequence[int]) -> int | None:
    c0 = coeffs[0]
    if c0 == 0:
        return 0
    divisors = set()
    a = abs(c0)
    i = 1
    while i * i <= a:
        if a % i == 0:
            divisors.update((i, a // i))
        i += 1
    for k in sorted(divisors):
        for cand in (k, -k):
            if poly_eval(coeffs, cand) == 0:
                return cand
    return None


def make_context(poly: IntPolynomial | Sequence[int] | str,
                 precision: int | None = None,
                 config: Config | None = None) -> NumberFieldContext:
    """Build a context with certified, pairwise-disjoint root boxes.

    The designated root is the largest real root and must be positive.
    Irreducibility is caller-asserted; obvious reducibility (an integer root
    at degree >= 2) is rejected.
    """
    config = config or Config()
    if isinstance(poly, str):
        poly = parse_polynomial(poly)
    elif not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(tuple(poly))
    if poly.degree > config.degree_cap:
        raise DegreeCapExceeded(f"degree {poly.degree} exceeds cap {config.degree_cap}")
    precision = precision or config.precision_bits

    d = poly.degree
    if d == 1:
        root = -poly.coefficients[0]
        if root <= 0:
            raise NoPositiveRealRoot(f"root {root} is not positive")
        boxes = (RootBox(Box.point(root, 0), True),)
        return NumberFieldContext(poly, companion_matrix(poly), boxes, 0, precision)

    k = _integer_root_trial(poly.coefficients)
    if k is not None:
        raise ReducibleInput(f"{poly} has integer root {k}; pass the irreducible factor")

    real_ivs = _isolate_real_roots(poly)
    for _ in range(40):  # initial tightening, width <= 2^-40-ish
        real_ivs = [_bisect_once(poly.coefficients, iv) if iv.width > Fraction(1, 1 << 40) else iv
                    for iv in real_ivs]
    n_complex = d - len(real_ivs)
    if len(real_ivs) == 0:
        raise NoPositiveRealRoot("no real root")

    boxes: list[RootBox] = [RootBox(Box(iv, RInterval.point(0)), True) for iv in real_ivs]
    if n_complex:
        seeds = [z for z in np.roots(list(reversed(poly.coefficients))) if z.imag > 0]
        seeds.sort(key=lambda z: (z.real, z.imag))
        if 2 * len(seeds) != n_complex:
            raise PrecisionExhausted("floating seeds disagree with the Sturm count")
        gap = min([abs(a - b) for a in seeds for b in seeds if a is not b] + [1.0])
        radius = min(0.25 * gap, 1e-3)
        for z in seeds:
            upper = _certify_complex_root(poly, z, radius, precision)
            if not (upper.im.lo > 0):
                raise PrecisionExhausted("complex box touches the real axis")
            boxes.append(RootBox(upper, False))
            boxes.append(RootBox(Box(upper.re, -upper.im), False))

    boxes = _refine_until_disjoint(poly, boxes, precision)

    lam_idx = max((i for i, b in enumerate(boxes) if b.is_real),
                  key=lambda i: boxes[i].box.re.lo)
    guard = 0
    while boxes[lam_idx].box.re.lo <= 0:
        if boxes[lam_idx].box.re.hi < 0:
            raise NoPositiveRealRoot("largest real root is negative")
        boxes[lam_idx] = boxes[lam_idx].refined(poly, 4)
        guard += 1
        if guard > precision:
            raise NoPositiveRealRoot("largest real root is not certifiably positive")

    return NumberFieldContext(poly, companion_matrix(poly), tuple(boxes), lam_idx, precision)


def _refine_until_disjoint(poly: IntPolynomial, boxes: list[RootBox],
                           precision: int) -> list[RootBox]:
    for _ in range(precision):
        clash = False
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if not boxes[i].box.disjoint(boxes[j].box):
                    clash = True
        if not clash:
            return boxes
        boxes = [b.refined(poly, 4) for b in boxes]
    raise PrecisionExhausted("root boxes could not be separated")


# ---------------------------------------------------------------------------
# arithmetic operations
# ---------------------------------------------------------------------------


def mul_lambda(ctx: NumberFieldContext, v):
    """C_lambda . v, exactly.  Accepts LatticeElement or FieldElement."""
    c = ctx.minpoly.coefficients
    d = ctx.degree
    coords = v.coords
    if len(coords) != d:
        raise ValueError(f"expected {d} coordinates, got {len(coords)}")
    top = coords[-1]
    out = [-c[0] * top] + [coords[i - 1] - c[i] * top for i in range(1, d)]
    return type(v)(tuple(out))


def mul_lambda_power(ctx: NumberFieldContext, v, n: int):
    for _ in range(n):
        v = mul_lambda(ctx, v)
    return v


def lat_add(u, v):
    return u + v


def lat_mul(ctx: NumberFieldContext, u, v):
    """Product in Z[lambda] (or Q(lambda)): convolution reduced mod the minpoly."""
    d = ctx.degree
    a, b = u.coords, v.coords
    conv = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                conv[i + j] += ai * bj
    c = ctx.minpoly.coefficients
    for k in range(2 * d - 2, d - 1, -1):
        top = conv[k]
        if top:
            conv[k] = 0
            for i in range(d):
                conv[k - d + i] -= top * c[i]
    return type(u)(tuple(conv[:d]))


def power_lambda(ctx: NumberFieldContext, n: int) -> LatticeElement:
    """Coordinates of lambda**n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return mul_lambda_power(ctx, ctx.one(), n)


def eval_poly_at_lattice(ctx: NumberFieldContext, coeffs: Sequence[int],
                         x: LatticeElement) -> LatticeElement:
    acc = ctx.zero()
    for c in reversed(coeffs):
        acc = lat_mul(ctx, acc, x) + ctx.one().scale(c)
    return acc


def real_embed(ctx: NumberFieldContext, v, precision: int | None = None) -> RInterval:
    """Certified interval for sum(v_i lambda^i) at the designated root."""
    precision = precision or 64
    coords = v.coords
    size = max([abs(Fraction(c)) for c in coords] + [Fraction(1)])
    extra = max(0, size.numerator.bit_length())
    width_bits = min(precision + extra + 8, 8 * ctx.precision_bits)
    lam = ctx.lambda_refined(width_bits)
    out = poly_eval(list(coords), lam)
    target = Fraction(1, 1 << precision)
    while out.width > target:
        width_bits += 32
        if width_bits > 8 * ctx.precision_bits:
            raise PrecisionExhausted("real_embed: precision cap hit")
        lam = ctx.lambda_refined(width_bits)
        out = poly_eval(list(coords), lam)
    return out.dilate(precision + 16)


def embed_float(ctx: NumberFieldContext, v) -> float:
    return float(real_embed(ctx, v, 60).mid)


def even_lemma(ctx: NumberFieldContext) -> tuple[int, int]:
    """Smallest (n0, N), n0 < N, with lambda^N == lambda^n0 mod 2Z[lambda].

    Forward iteration over (Z/2)^d with memoization; the first revisited
    state is the cycle entry, which gives the lexicographically least pair.
    Pigeonhole bounds the walk by 2^d + 1 steps.
    """
    d = ctx.degree
    v = ctx.lam()
    state = tuple(c % 2 for c in v.coords)
    seen = {state: 1}
    for n in range(2, 2 ** d + 3):
        v = mul_lambda(ctx, v)
        state = tuple(c % 2 for c in v.coords)
        if state in seen:
            return seen[state], n
        seen[state] = n
    raise AssertionError("pigeonhole violated; even_lemma must terminate")


def _mat_mul_int(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def _mat_pow_int(m, n: int):
    size = len(m)
    out = tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size))
    base = m
    while n:
        if n & 1:
            out = _mat_mul_int(out, base)
        base = _mat_mul_int(base, base)
        n >>= 1
    return out


def _charpoly(mat) -> list[int]:
    """Faddeev-LeVerrier characteristic polynomial, exact."""
    n = len(mat)
    m = [[Fraction(x) for x in row] for row in mat]
    a = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]  # leading
    for k in range(1, n + 1):
        a = [[sum(m[i][t] * a[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        ck = -sum(a[i][i] for i in range(n)) / k
        coeffs.append(ck)
        for i in range(n):
            a[i][i] += ck
    out = list(reversed(coeffs))  # ascending
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out]


def minpoly_power(ctx: NumberFieldContext, n: int) -> IntPolynomial:
    """Minimal polynomial of lambda**n: square-free part of char(C^n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return ctx.minpoly
    cn = _mat_pow_int(ctx.companion, n)
    char = _charpoly(cn)
    deriv = [i * c for i, c in enumerate(char) if i > 0]
    g = _poly_gcd(char, deriv)
    q, r = _poly_divmod([Fraction(c) for c in char], g)
    assert r == [Fraction(0)]
    assert all(c.denominator == 1 for c in q) and q[-1] == 1
    out = IntPolynomial(tuple(int(c) for c in q))
    # soundness: the certified enclosure of lambda^n must pinch a root of out
    lam_pow = ctx.lambda_refined(96).pow(n)
    assert poly_eval(out.coefficients, lam_pow).contains_zero()
    return out


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _neg_lambda_is_root(ctx: NumberFieldContext) -> bool:
    neg_lam = -ctx.lam()
    return eval_poly_at_lattice(ctx, ctx.minpoly.coefficients, neg_lam).is_zero()


def classify(ctx: NumberFieldContext, config: Config | None = None) -> Classification:
    """Perron / weak Perron / Neither, with certified separations.

    Strict dominance is certified by interval separation.  The only exact
    equal-modulus test is for the real conjugate -lambda; complex ties
    escalate precision and then raise UndecidedAtPrecision.
    """
    config = config or Config()
    if ctx.degree == 1:
        return Classification("Perron")

    neg_root = _neg_lambda_is_root(ctx)
    work = ctx
    rounds = max(4, ctx.precision_bits // 16)
    for _ in range(rounds):
        lam_lo = work.roots[work.lambda_index].box.re.lo
        lam_hi = work.roots[work.lambda_index].box.re.hi
        others = [b for i, b in enumerate(work.roots) if i != work.lambda_index]
        if all(b.box.mag_upper() < lam_lo for b in others):
            return Classification("Perron")
        if any(b.box.mag_lower() > lam_hi for b in others):
            return Classification("Neither")
        if neg_root:
            neg_iv = -work.roots[work.lambda_index].box.re
            ties = [b for b in others if not b.box.disjoint(Box(neg_iv, RInterval.point(0)))]
            rest = [b for b in others if b.box.disjoint(Box(neg_iv, RInterval.point(0)))]
            if len(ties) == 1 and ties[0].is_real and all(b.box.mag_upper() < lam_lo for b in rest):
                return _witness_search(ctx, config)
        work = work.refined(8)
    raise UndecidedAtPrecision(
        f"cannot separate |conjugates| from lambda for {ctx.minpoly} at the precision cap")


def _witness_search(ctx: NumberFieldContext, config: Config) -> Classification:
    undecided = None
    for n in range(2, config.n_max + 1):
        q = minpoly_power(ctx, n)
        try:
            sub = make_context(q, ctx.precision_bits, config)
            if classify(sub, config).kind == "Perron":
                return Classification("WeakPerron", witness=n)
        except (UndecidedAtPrecision, NoPositiveRealRoot) as err:
            undecided = err
    if undecided is not None:
        raise NoPerronPower(
            f"no certified Perron power found for N <= {config.n_max} (last issue: {undecided})")
    raise NoPerronPower(f"lambda^N is not Perron for any N <= {config.n_max}")

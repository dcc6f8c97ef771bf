"""Exact rational linear feasibility.

Two engines, both over ``fractions.Fraction`` so certificates carry no
floating error:

* a Phase-I simplex with Bland's rule (deterministic, terminating), used for
  vertex solutions and as the general-dimension engine;
* a Fourier-Motzkin eliminator with lower-bound back-substitution, used for
  membership queries in ambient dimension <= 3.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

Row = list[Fraction]


def _frac_rows(mat) -> list[Row]:
    return [[Fraction(x) for x in row] for row in mat]


def solve_nonneg(mat, rhs) -> list[Fraction] | None:
    """Vertex solution c >= 0 of mat . c = rhs, or None if infeasible.

    Phase-I simplex, entering/leaving by Bland's rule: smallest eligible
    column, ties in the ratio test broken by smallest basis variable.
    """
    a = _frac_rows(mat)
    b = [Fraction(x) for x in rhs]
    m = len(a)
    n = len(a[0]) if m else 0
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # tableau columns: n structural + m artificial + rhs
    tab = [a[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]]
           for i in range(m)]
    basis = [n + i for i in range(m)]
    ncols = n + m

    def reduced_costs() -> Row:
        # artificial cost 1, structural 0; r_j = sum over artificial basic rows
        r = [Fraction(0)] * ncols
        for i in range(m):
            if basis[i] >= n:
                for j in range(ncols):
                    r[j] += tab[i][j]
        for j in range(n, ncols):
            r[j] -= 1
        return r

    while True:
        r = reduced_costs()
        enter = next((j for j in range(ncols) if r[j] > 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return None  # unbounded Phase-I cannot happen; defensive
        _, row = best
        piv = tab[row][enter]
        tab[row] = [x / piv for x in tab[row]]
        for i in range(m):
            if i != row and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[row])]
        basis[row] = enter

    objective = sum(tab[i][-1] for i in range(m) if basis[i] >= n)
    if objective != 0:
        return None
    out = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            out[basis[i]] = tab[i][-1]
    return out


def solve_box_combination(mat, rhs) -> list[Fraction] | None:
    """Coefficients a in [0, 1]^g with mat . a = rhs, or None."""
    a = _frac_rows(mat)
    d = len(a)
    g = len(a[0]) if d else 0
    big = [row + [Fraction(0)] * g for row in a]
    for j in range(g):
        row = [Fraction(0)] * (2 * g)
        row[j] = Fraction(1)
        row[g + j] = Fraction(1)
        big.append(row)
    full_rhs = [Fraction(x) for x in rhs] + [Fraction(1)] * g
    sol = solve_nonneg(big, full_rhs)
    return sol[:g] if sol is not None else None


# ---------------------------------------------------------------------------
# Fourier-Motzkin
# ---------------------------------------------------------------------------


def fm_nonneg(mat, rhs) -> list[Fraction] | None:
    """Same contract as solve_nonneg, by Fourier-Motzkin elimination.

    Back-substitution picks each variable at the max of its lower bounds
    (0 included), which is deterministic.
    """
    a = _frac_rows(mat)
    b = [Fraction(x) for x in rhs]
    m = len(a)
    g = len(a[0]) if m else 0
    # inequalities: coeffs . c <= const
    ineqs: list[tuple[Row, Fraction]] = []
    for i in range(m):
        ineqs.append((list(a[i]), b[i]))
        ineqs.append(([-x for x in a[i]], -b[i]))
    for j in range(g):
        row = [Fraction(0)] * g
        row[j] = Fraction(-1)
        ineqs.append((row, Fraction(0)))

    stages = []
    for var in range(g - 1, -1, -1):
        uppers, lowers, rest = [], [], []
        for coeffs, const in ineqs:
            c = coeffs[var]
            if c > 0:
                uppers.append((coeffs, const))
            elif c < 0:
                lowers.append((coeffs, const))
            else:
                rest.append((coeffs, const))
        stages.append((var, uppers, lowers))
        new = list(rest)
        for uc, ub in uppers:
            for lc, lb in lowers:
                s, t = uc[var], -lc[var]
                coeffs = [t * u + s * l for u, l in zip(uc, lc)]
                coeffs[var] = Fraction(0)
                new.append((coeffs, t * ub + s * lb))
        ineqs = new
    for coeffs, const in ineqs:
        if const < 0:
            return None
    sol = [Fraction(0)] * g
    for var, uppers, lowers in reversed(stages):
        lo = Fraction(0)
        for coeffs, const in lowers:
            val = (const - sum(coeffs[j] * sol[j] for j in range(g) if j != var)) / coeffs[var]
            lo = max(lo, val)
        for coeffs, const in uppers:
            hi = (const - sum(coeffs[j] * sol[j] for j in range(g) if j != var)) / coeffs[var]
            if lo > hi:
                return None  # defensive; elimination already certified feasibility
        sol[var] = lo
    return sol


# ---------------------------------------------------------------------------
# exact linear algebra helpers
# ---------------------------------------------------------------------------


def rank(mat) -> int:
    rows = _frac_rows(mat)
    if not rows:
        return 0
    cols = len(rows[0])
    r = 0
    for j in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][j] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][j] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j] != 0:
                f = rows[i][j]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hyperplane_normal(rows: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Primitive integer normal of the span of d-1 independent rows in Z^d.

    Computed by Laplace cofactors, so it is exact and integral; returns None
    when the rows are dependent.
    """
    d = len(rows[0])
    if len(rows) != d - 1:
        raise ValueError("need exactly d-1 rows")
    comps = []
    idx = list(range(d))
    for i in range(d):
        cols = idx[:i] + idx[i + 1:]
        minor = [[row[c] for c in cols] for row in rows]
        comps.append((-1) ** i * det_int(minor))
    if all(c == 0 for c in comps):
        return None
    from math import gcd
    g = 0
    for c in comps:
        g = gcd(g, abs(c))
    return tuple(c // g for c in comps)


def facet_normals(generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Inward facet normals of cone(generators), full-dimensional case.

    Brute-force over (d-1)-subsets; intended for desk-scale generator counts.
    """
    d = len(generators[0])
    if d == 1:
        return [(1,)] if all(g[0] > 0 for g in generators) else [(-1,)]
    out = set()
    for subset in combinations(range(len(generators)), d - 1):
        n = hyperplane_normal([generators[i] for i in subset])
        if n is None:
            continue
        dots = [sum(a * b for a, b in zip(n, gen)) for gen in generators]
        if all(x >= 0 for x in dots) and any(x > 0 for x in dots):
            out.add(n)
        elif all(x <= 0 for x in dots) and any(x < 0 for x in dots):
            out.add(tuple(-c for c in n))
    return sorted(out)

"""Finite graphs, edge paths, self-maps, transition matrices, entropy.

Edge paths are tuples of signed 1-based edge references: ``+k`` traverses
edge ``k-1`` forward, ``-k`` traverses it against its orientation.  Path
validation is eager; assembling an endpoint-incompatible path raises at
construction time.

Transition counts are sign-insensitive: an edge and its reverse both count
as one traversal, matching the total-variation bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    CollapsedEdge,
    ExpansionViolation,
    GraphStructureError,
    NonConvergence,
    PathLengthExceeded,
)
from .numberfield import LatticeElement, NumberFieldContext, mul_lambda, real_embed


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    label: str


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphStructureError("duplicate vertex names")
        labels = [e.label for e in self.edges]
        if len(set(labels)) != len(labels):
            raise GraphStructureError("duplicate edge labels")
        for e in self.edges:
            if not (0 <= e.src < len(self.vertices) and 0 <= e.dst < len(self.vertices)):
                raise GraphStructureError(f"edge {e.label} references a missing vertex")

    @property
    def edge_index(self) -> dict[str, int]:
        cached = getattr(self, "_edge_index", None)
        if cached is None:
            cached = {e.label: i for i, e in enumerate(self.edges)}
            object.__setattr__(self, "_edge_index", cached)
        return cached

    @property
    def vertex_index(self) -> dict[str, int]:
        cached = getattr(self, "_vertex_index", None)
        if cached is None:
            cached = {v: i for i, v in enumerate(self.vertices)}
            object.__setattr__(self, "_vertex_index", cached)
        return cached

    def step_endpoints(self, step: int) -> tuple[int, int]:
        e = self.edges[abs(step) - 1]
        return (e.src, e.dst) if step > 0 else (e.dst, e.src)

    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components()

    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.src), find(e.dst)
            if a != b:
                parent[a] = b
        return len({find(v) for v in range(len(self.vertices))})


def graph(vertices, edges) -> Graph:
    """Convenience constructor: edges as (src_name, dst_name, label)."""
    vertices = tuple(vertices)
    vi = {v: i for i, v in enumerate(vertices)}
    return Graph(vertices, tuple(Edge(vi[s], vi[d], lab) for s, d, lab in edges))


@dataclass(frozen=True)
class EdgePath:
    steps: tuple[int, ...]

    def __post_init__(self):
        if any(s == 0 for s in self.steps):
            raise GraphStructureError("0 is not a valid signed edge reference")

    def __len__(self):
        return len(self.steps)

    def reversed(self) -> "EdgePath":
        return EdgePath(tuple(-s for s in reversed(self.steps)))

    def validate(self, g: Graph) -> None:
        for s in self.steps:
            if abs(s) > len(g.edges):
                raise GraphStructureError(f"step {s} references a missing edge")
        for a, b in zip(self.steps, self.steps[1:]):
            if g.step_endpoints(a)[1] != g.step_endpoints(b)[0]:
                raise GraphStructureError(f"steps {a},{b} are not endpoint-compatible")

    def start(self, g: Graph) -> int:
        return g.step_endpoints(self.steps[0])[0]

    def end(self, g: Graph) -> int:
        return g.step_endpoints(self.steps[-1])[1]


def path_of_word(g: Graph, word: str) -> EdgePath:
    """Label word with an uppercased first character meaning reversed.

    Tokenizes by longest label match, so multi-character labels like ``x1``
    work: ``x1X1x2`` is x1 forward, x1 reversed, x2 forward.
    """
    by_len = sorted(g.edge_index.items(), key=lambda kv: -len(kv[0]))
    steps = []
    pos = 0
    while pos < len(word):
        for lab, idx in by_len:
            token = word[pos:pos + len(lab)]
            if token == lab:
                steps.append(idx + 1)
                break
            if token == lab[0].upper() + lab[1:]:
                steps.append(-(idx + 1))
                break
        else:
            raise GraphStructureError(f"cannot tokenize word near {word[pos:]!r}")
        pos += len(lab)
    p = EdgePath(tuple(steps))
    p.validate(g)
    return p


def word_of_path(g: Graph, path: EdgePath) -> str:
    out = []
    for s in path.steps:
        lab = g.edges[abs(s) - 1].label
        out.append(lab if s > 0 else lab[0].upper() + lab[1:])
    return "".join(out)


@dataclass(frozen=True)
class GraphMap:
    """Vertices to vertices, edges to edge paths (eagerly validated)."""

    domain: Graph
    codomain: Graph
    vertex_images: tuple[int, ...]
    edge_images: tuple[EdgePath, ...]
    allow_collapsed: bool = field(default=False, compare=False)

    def __post_init__(self):
        if len(self.vertex_images) != len(self.domain.vertices):
            raise GraphStructureError("vertex image count mismatch")
        if len(self.edge_images) != len(self.domain.edges):
            raise GraphStructureError("edge image count mismatch")
        for v in self.vertex_images:
            if not 0 <= v < len(self.codomain.vertices):
                raise GraphStructureError("vertex image out of range")
        for e, p in zip(self.domain.edges, self.edge_images):
            if len(p) == 0:
                if not self.allow_collapsed:
                    raise CollapsedEdge(f"edge {e.label} maps to the empty path")
                if self.vertex_images[e.src] != self.vertex_images[e.dst]:
                    raise GraphStructureError(f"collapsed edge {e.label} with split endpoints")
                continue
            p.validate(self.codomain)
            if p.start(self.codomain) != self.vertex_images[e.src]:
                raise GraphStructureError(f"image of {e.label} starts at the wrong vertex")
            if p.end(self.codomain) != self.vertex_images[e.dst]:
                raise GraphStructureError(f"image of {e.label} ends at the wrong vertex")

    @property
    def is_self_map(self) -> bool:
        return self.domain is self.codomain or self.domain == self.codomain

    def image_word(self, label: str) -> str:
        return word_of_path(self.codomain, self.edge_images[self.domain.edge_index[label]])


def map_from_words(g: Graph, words: dict[str, str], vertex_images: dict[str, str] | None = None,
                   codomain: Graph | None = None) -> GraphMap:
    cod = codomain or g
    paths = tuple(path_of_word(cod, words[e.label]) for e in g.edges)
    if vertex_images is None:
        vimg = _infer_vertex_images(g, cod, paths)
    else:
        vimg = tuple(cod.vertex_index[vertex_images[v]] for v in g.vertices)
    return GraphMap(g, cod, vimg, paths)


def _infer_vertex_images(g: Graph, cod: Graph, paths) -> tuple[int, ...]:
    vimg: list[int | None] = [None] * len(g.vertices)
    for e, p in zip(g.edges, paths):
        if len(p) == 0:
            continue
        s, t = p.start(cod), p.end(cod)
        for v, w in ((e.src, s), (e.dst, t)):
            if vimg[v] is None:
                vimg[v] = w
            elif vimg[v] != w:
                raise GraphStructureError(f"inconsistent vertex image at {g.vertices[v]}")
    if any(v is None for v in vimg):
        raise GraphStructureError("cannot infer all vertex images")
    return tuple(vimg)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# tighten / compose / iterate
# ---------------------------------------------------------------------------


def _reduce_steps(steps) -> tuple[int, ...]:
    out: list[int] = []
    for s in steps:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def tighten(m: GraphMap) -> GraphMap:
    """Freely reduce every image path (fixed point of xX-cancellation)."""
    new_paths = []
    changed = False
    for p in m.edge_images:
        reduced = _reduce_steps(p.steps)
        changed = changed or len(reduced) != len(p.steps)
        new_paths.append(EdgePath(reduced))
    if not changed:
        return m
    return GraphMap(m.domain, m.codomain, m.vertex_images, tuple(new_paths),
                    allow_collapsed=True)


def compose(outer: GraphMap, inner: GraphMap, path_cap: int = 10 ** 7) -> GraphMap:
    """outer after inner; image paths substituted, not tightened."""
    if inner.codomain != outer.domain:
        raise GraphStructureError("maps are not composable")
    vimg = tuple(outer.vertex_images[v] for v in inner.vertex_images)
    paths = []
    for p in inner.edge_images:
        steps: list[int] = []
        for s in p.steps:
            img = outer.edge_images[abs(s) - 1]
            steps.extend(img.steps if s > 0 else img.reversed().steps)
            if len(steps) > path_cap:
                raise PathLengthExceeded(f"composed path exceeds {path_cap} steps")
        paths.append(EdgePath(tuple(steps)))
    return GraphMap(inner.domain, outer.codomain, vimg, tuple(paths), allow_collapsed=True)


def iterate(m: GraphMap, n: int, path_cap: int = 10 ** 7) -> GraphMap:
    if not m.is_self_map:
        raise GraphStructureError("iterate needs a self-map")
    if n < 1:
        raise ValueError("n must be >= 1")
    out = m
    for _ in range(n - 1):
        out = compose(m, out, path_cap)
    return out


# ---------------------------------------------------------------------------
# transition matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionMatrix:
    """Nonnegative integer matrix; entry (i, j) counts unsigned traversals of
    edge i in the image of edge j.  Stored column-sparse."""

    size: int
    cols: tuple[dict[int, int], ...]

    def entry(self, i: int, j: int) -> int:
        return self.cols[j].get(i, 0)

    def dense(self) -> list[list[int]]:
        return [[self.cols[j].get(i, 0) for j in range(self.size)] for i in range(self.size)]

    def column_sum(self, j: int) -> int:
        return sum(self.cols[j].values())

    def __matmul__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        if self.size != other.size:
            raise ValueError("size mismatch")
        cols = []
        for j in range(other.size):
            acc: dict[int, int] = {}
            for k, ckj in other.cols[j].items():
                for i, cik in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + cik * ckj
            cols.append(acc)
        return TransitionMatrix(self.size, tuple(cols))

    def power(self, n: int) -> "TransitionMatrix":
        if n < 1:
            raise ValueError("n must be >= 1")
        out = self
        for _ in range(n - 1):
            out = out @ self
        return out

    def __eq__(self, other):
        return (isinstance(other, TransitionMatrix) and self.size == other.size
                and all({k: v for k, v in a.items() if v} == {k: v for k, v in b.items() if v}
                        for a, b in zip(self.cols, other.cols)))


def transition_matrix(m: GraphMap) -> TransitionMatrix:
    if not m.is_self_map:
        raise GraphStructureError("transition matrix needs a self-map")
    n = len(m.domain.edges)
    cols = []
    for p in m.edge_images:
        col: dict[int, int] = {}
        for s in p.steps:
            i = abs(s) - 1
            col[i] = col.get(i, 0) + 1
        cols.append(col)
    return TransitionMatrix(n, tuple(cols))


def matrix_from_dense(rows) -> TransitionMatrix:
    n = len(rows)
    cols = [{i: rows[i][j] for i in range(n) if rows[i][j]} for j in range(n)]
    return TransitionMatrix(n, tuple(cols))


def _successors(t: TransitionMatrix) -> list[list[int]]:
    # arc j -> i whenever entry (i, j) > 0
    return [list(t.cols[j].keys()) for j in range(t.size)]


def _strongly_connected(adj: list[list[int]]) -> bool:
    n = len(adj)
    if n == 0:
        return False

    def reach(start, nbrs):
        seen = bytearray(n)
        seen[start] = 1
        stack = [start]
        while stack:
            u = stack.pop()
            for v in nbrs[u]:
                if not seen[v]:
                    seen[v] = 1
                    stack.append(v)
        return sum(seen)

    if reach(0, adj) != n:
        return False
    radj: list[list[int]] = [[] for _ in range(n)]
    for u, vs in enumerate(adj):
        for v in vs:
            radj[v].append(u)
    return reach(0, radj) == n


def is_ergodic(t: TransitionMatrix) -> bool:
    """Irreducibility: the transition digraph is strongly connected."""
    if t.size == 1:
        return t.entry(0, 0) > 0
    if any(not col for col in t.cols):
        return False
    return _strongly_connected(_successors(t))


def digraph_period(t: TransitionMatrix) -> int:
    """gcd of cycle lengths, via BFS level classes (0 if not ergodic)."""
    if not is_ergodic(t):
        return 0
    adj = _successors(t)
    n = t.size
    level = [-1] * n
    level[0] = 0
    queue = [0]
    g = 0
    while queue:
        nxt = []
        for u in queue:
            for v in adj[u]:
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(v)
                else:
                    g = math.gcd(g, level[u] + 1 - level[v])
        queue = nxt
    return abs(g)


def is_mixing(t: TransitionMatrix) -> bool:
    """Primitivity: strongly connected with cycle-length gcd 1."""
    return digraph_period(t) == 1


def pf_eigenvalue(t: TransitionMatrix, tol: float = 1e-12, max_iter: int = 200_000) -> float:
    """Power iteration for the Perron-Frobenius eigenvalue (advisory float).

    Iterates on T + I so the estimate converges even for periodic ergodic
    matrices; the shift is subtracted at the end.
    """
    n = t.size
    rows_idx, cols_idx, vals = [], [], []
    for j in range(n):
        for i, c in t.cols[j].items():
            rows_idx.append(i)
            cols_idx.append(j)
            vals.append(float(c))
    rows_idx = np.array(rows_idx, dtype=np.int64)
    cols_idx = np.array(cols_idx, dtype=np.int64)
    vals = np.array(vals, dtype=np.float64)
    v = np.full(n, 1.0 / n)
    est = 1.0
    for _ in range(max_iter):
        w = v.copy()  # the +I shift
        np.add.at(w, rows_idx, vals * v[cols_idx])
        total = float(w.sum())
        new_est = total / float(v.sum())
        v = w / total
        if abs(new_est - est) <= tol * abs(new_est):
            return new_est - 1.0
        est = new_est
    raise NonConvergence(f"power iteration did not settle in {max_iter} steps",
                         best_estimate=est - 1.0)


# ---------------------------------------------------------------------------
# symbolic metrics and entropy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicMetric:
    """Edge lengths lambda^fan * rho(base), base exact in the base context.

    ``base_ctx`` holds the lattice the bases live in (the mu-context for
    glued stars); ``root_ctx`` owns lambda itself, with lambda^fan_modulus
    equal to the base context's designated root.  For plain metrics the two
    contexts coincide and every fan exponent is 0.
    """

    base_ctx: NumberFieldContext
    root_ctx: NumberFieldContext
    fan_modulus: int
    lengths: dict[str, tuple[LatticeElement, int]]

    def __post_init__(self):
        if self.fan_modulus < 1:
            raise ValueError("fan_modulus must be >= 1")
        for label, (base, fan) in self.lengths.items():
            if not 0 <= fan < self.fan_modulus:
                raise ValueError(f"fan exponent out of range on {label}")
            if base.is_zero():
                raise ExpansionViolation(f"zero length on edge {label}", edge=label)

    def length_of(self, label: str) -> tuple[LatticeElement, int]:
        return self.lengths[label]

    def embed_float(self, label: str) -> float:
        base, fan = self.lengths[label]
        val = float(real_embed(self.base_ctx, base, 60).mid)
        if fan:
            lam = float(self.root_ctx.lambda_refined(60).mid)
            val *= lam ** fan
        return val

    def check_positive(self) -> None:
        for label, (base, _) in self.lengths.items():
            if not real_embed(self.base_ctx, base, 48).lo > 0:
                raise ExpansionViolation(f"length of {label} is not certifiably positive",
                                         edge=label)


def unit_metric(g: Graph, ctx: NumberFieldContext) -> SymbolicMetric:
    one = ctx.one()
    return SymbolicMetric(ctx, ctx, 1, {e.label: (one, 0) for e in g.edges})


@dataclass(frozen=True)
class ExpansionCertificate:
    """Per-edge exact identities behind uniform lambda-expansion."""

    lattice_note: str
    fan_modulus: int
    rows: tuple[tuple[str, str, tuple[int, ...], tuple[int, ...]], ...]
    # rows: (edge label, rule, lhs coords, rhs coords) with lhs == rhs exact

    @property
    def ok(self) -> bool:
        return all(l == r for _, _, l, r in self.rows)


def check_uniform_expansion(m: GraphMap, metric: SymbolicMetric) -> ExpansionCertificate:
    """Exact verification that every edge is scaled by the same factor lambda.

    Plain metrics check sum(image lengths) = C . length(e).  Fan-tagged
    metrics check the structural rules instead: shift edges increment the
    exponent with the same base, wrap edges land at exponent 0 carrying
    C_mu . base.  Both are exact lattice identities.
    """
    from .numberfield import LATTICE_NOTE

    if not m.is_self_map:
        raise GraphStructureError("expansion check needs a self-map")
    metric.check_positive()
    ctx = metric.base_ctx
    n_fan = metric.fan_modulus
    rows = []
    for e, p in zip(m.domain.edges, m.edge_images):
        base, fan = metric.length_of(e.label)
        if len(p) == 0:
            raise ExpansionViolation(f"edge {e.label} is collapsed", edge=e.label)
        img_fans = {metric.length_of(m.domain.edges[abs(s) - 1].label)[1] for s in p.steps}
        if len(img_fans) != 1:
            raise ExpansionViolation(f"image of {e.label} mixes fan exponents", edge=e.label)
        img_fan = img_fans.pop()
        total = ctx.zero()
        for s in p.steps:
            total = total + metric.length_of(m.domain.edges[abs(s) - 1].label)[0]
        if img_fan == fan + 1 and img_fan <= n_fan - 1:
            expect = base
            rule = "shift"
        elif img_fan == 0 and fan == n_fan - 1:
            expect = mul_lambda(ctx, base)
            rule = "wrap"
        else:
            raise ExpansionViolation(
                f"image of {e.label} at fan {img_fan} incompatible with source fan {fan}",
                edge=e.label)
        if total.coords != expect.coords:
            raise ExpansionViolation(
                f"edge {e.label}: image length {total.coords} != expected {expect.coords}",
                edge=e.label)
        rows.append((e.label, rule, total.coords, expect.coords))
    return ExpansionCertificate(LATTICE_NOTE, n_fan, tuple(rows))


def left_eigenvector_identity(m: GraphMap, metric: SymbolicMetric) -> bool:
    """ell^T . T = lambda . ell^T as an exact lattice identity.

    Column j of the transition matrix counts traversals, so the j-th entry
    of ell^T . T is exactly the image length of edge j; this is the
    float-free entropy certificate for uniform expanders.
    """
    t = transition_matrix(m)
    ctx = metric.base_ctx
    n_fan = metric.fan_modulus
    for j, e in enumerate(m.domain.edges):
        base, fan = metric.length_of(e.label)
        acc: dict[int, LatticeElement] = {}
        for i, c in t.cols[j].items():
            bi, fi = metric.length_of(m.domain.edges[i].label)
            if fi in acc:
                acc[fi] = acc[fi] + bi.scale(c)
            else:
                acc[fi] = bi.scale(c)
        if len(acc) != 1:
            return False
        (fi, total), = acc.items()
        if fi == fan + 1 and fi <= n_fan - 1:
            expect = base
        elif fi == 0 and fan == n_fan - 1:
            expect = mul_lambda(ctx, base)
        else:
            return False
        if total.coords != expect.coords:
            return False
    return True


def entropy(m: GraphMap, tol: float = 1e-12) -> float:
    """log of the PF eigenvalue of the transition matrix."""
    lam = pf_eigenvalue(transition_matrix(m), tol)
    return math.log(lam) if lam > 0 else float("-inf")


def var_growth(m: GraphMap, metric: SymbolicMetric | None, n: int) -> list[float]:
    """(1/k) log Var(f^k) for k = 1..n, via the transition matrix action.

    Lengths enter as floats; the sequence is the independent entropy oracle
    (never computed by composing maps symbolically).
    """
    t = transition_matrix(m)
    if metric is None:
        lengths = np.ones(t.size)
    else:
        lengths = np.array([metric.embed_float(e.label) for e in m.domain.edges])
    rows_idx, cols_idx, vals = [], [], []
    for j in range(t.size):
        for i, c in t.cols[j].items():
            rows_idx.append(i)
            cols_idx.append(j)
            vals.append(float(c))
    rows_idx = np.array(rows_idx, dtype=np.int64)
    cols_idx = np.array(cols_idx, dtype=np.int64)
    vals = np.array(vals, dtype=np.float64)
    w = lengths.copy()
    log_scale = 0.0
    out = []
    for k in range(1, n + 1):
        w2 = np.zeros_like(w)
        np.add.at(w2, cols_idx, vals * w[rows_idx])
        w = w2
        total = float(w.sum())
        if total <= 0:
            out.append(float("-inf"))
            continue
        log_scale += math.log(total)
        w = w / total
        out.append(log_scale / k)
    return out

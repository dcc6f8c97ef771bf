"""Split graphs and split maps over the 7-edge prototype.

Splitting replaces each edge of a bipartite graph with seven parallel copies
named ``a_<label>`` .. ``g_<label>``, all inheriting the original length.
The split of a self-map sends the copy ``y_i`` over the prototype word for
``y`` at the image's word length, decorated positionwise with the subscripts
of the image path.  Bipartite orientation makes both sign sequences
alternate from ``+``, so the letter orientation and the subscript
orientation agree by construction; this is asserted, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CollapsedEdge, EvenImageLength, NotBipartite
from .graphmap import Edge, EdgePath, Graph, GraphMap, SymbolicMetric
from .traintrack import PROTOTYPE_LETTERS, prototype_word


@dataclass(frozen=True)
class SplitGraph:
    graph: Graph
    original: Graph
    provenance: dict[str, tuple[str, int]]  # split label -> (letter, original edge index)
    classes: tuple[frozenset, frozenset]    # (B0, B1) vertex indices

    def letter_of(self, edge_index: int) -> str:
        return self.provenance[self.graph.edges[edge_index].label][0]

    def original_edge_of(self, edge_index: int) -> int:
        return self.provenance[self.graph.edges[edge_index].label][1]


def bipartition(g: Graph) -> tuple[frozenset, frozenset]:
    """2-coloring with every edge oriented from class 0 into class 1."""
    incident: list[list[Edge]] = [[] for _ in g.vertices]
    for e in g.edges:
        incident[e.src].append(e)
        incident[e.dst].append(e)
    color: dict[int, int] = {}
    for start in range(len(g.vertices)):
        if start in color:
            continue
        comp = [start]
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for e in incident[u]:
                other = e.dst if u == e.src else e.src
                want = 1 - color[u]
                if other not in color:
                    color[other] = want
                    comp.append(other)
                    queue.append(other)
                elif color[other] != want:
                    raise NotBipartite("graph contains an odd cycle")
        # orient the component so its edges run class0 -> class1
        first = next((e for v in comp for e in incident[v]), None)
        if first is not None and color[first.src] == 1:
            for v in comp:
                color[v] = 1 - color[v]
    b0 = frozenset(v for v, c in color.items() if c == 0)
    b1 = frozenset(v for v, c in color.items() if c == 1)
    for e in g.edges:
        if e.src not in b0 or e.dst not in b1:
            raise NotBipartite(f"edge {e.label} is not oriented from class 0 to class 1")
    return b0, b1


def split_graph(g: Graph, classes: tuple[frozenset, frozenset] | None = None) -> SplitGraph:
    """Replace each edge with seven prototype copies sharing its endpoints."""
    classes = classes or bipartition(g)
    b0, b1 = classes
    for e in g.edges:
        if e.src not in b0 or e.dst not in b1:
            raise NotBipartite(f"edge {e.label} is not oriented from class 0 to class 1")
    edges = []
    provenance = {}
    for idx, e in enumerate(g.edges):
        for letter in PROTOTYPE_LETTERS:
            label = f"{letter}_{e.label}"
            edges.append(Edge(e.src, e.dst, label))
            provenance[label] = (letter, idx)
    return SplitGraph(Graph(g.vertices, tuple(edges)), g, provenance, classes)


def split_metric(split: SplitGraph, metric: SymbolicMetric) -> SymbolicMetric:
    lengths = {}
    for label, (letter, idx) in split.provenance.items():
        lengths[label] = metric.length_of(split.original.edges[idx].label)
    return SymbolicMetric(metric.base_ctx, metric.root_ctx, metric.fan_modulus, lengths)


def split_map(f: GraphMap, split: SplitGraph | None = None) -> tuple[GraphMap, SplitGraph]:
    """The split self-map; requires odd image lengths and no collapsed edges."""
    if not f.is_self_map:
        raise NotBipartite("split maps are defined for self-maps")
    split = split or split_graph(f.domain)
    b0, b1 = split.classes
    for v, img in enumerate(f.vertex_images):
        if (v in b0) != (img in b0):
            raise NotBipartite(
                f"vertex {f.domain.vertices[v]} crosses the bipartition classes")
    for e, p in zip(f.domain.edges, f.edge_images):
        if len(p) == 0:
            raise CollapsedEdge(f"edge {e.label} is collapsed; split undefined")
        if len(p) % 2 == 0:
            raise EvenImageLength(f"edge {e.label} has image length {len(p)}")

    sg = split.graph
    letter_pos = {ch: i for i, ch in enumerate(PROTOTYPE_LETTERS)}
    paths = []
    for label, (letter, idx) in ((e.label, split.provenance[e.label]) for e in sg.edges):
        w = f.edge_images[idx]
        proto = prototype_word(letter, len(w))
        steps = []
        for t, (ch, fstep) in enumerate(zip(proto, w.steps)):
            psign = 1 if ch.islower() else -1
            fsign = 1 if fstep > 0 else -1
            assert psign == fsign, "alternation mismatch; bipartite precondition broken"
            orig_label = f.domain.edges[abs(fstep) - 1].label
            split_idx = sg.edge_index[f"{ch.lower()}_{orig_label}"]
            steps.append(psign * (split_idx + 1))
        paths.append(EdgePath(tuple(steps)))
    return GraphMap(sg, sg, f.vertex_images, tuple(paths)), split

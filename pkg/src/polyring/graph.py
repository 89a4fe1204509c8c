"""Polygon chains, rings and twisted rings as labelled, oriented multigraphs.

Construction follows the usual picture: a top path x_0 ... x_A carrying the
f-edges (oriented left to right), a bottom path y_0 ... y_B carrying the
g-edges (oriented right to left), and rungs e_i from u_i = y_{b_1+...+b_i}
up to v_i = x_{a_1+...+a_i}. Rings glue the two free rungs directly; twisted
rings glue them with a flip.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .linalg import IntegerMatrix


class SpecError(ValueError):
    pass


class Topology(str, Enum):
    CHAIN = "chain"
    RING = "ring"
    TWISTED = "twisted"


@dataclass(frozen=True)
class PolygonSpec:
    n: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    topology: Topology = Topology.RING

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "topology", Topology(self.topology))
        if self.n < 1:
            raise SpecError("n must be at least 1")
        if len(self.a) != self.n or len(self.b) != self.n:
            raise SpecError(f"need {self.n} values for each of a and b")
        if any(x < 0 for x in self.a + self.b):
            raise SpecError("a_i and b_i must be non-negative")
        if self.topology is not Topology.CHAIN and self.n < 2:
            raise SpecError("rings need n >= 2")

    @classmethod
    def uniform(cls, n: int, a: int, b: int, topology: Topology | str = Topology.RING) -> "PolygonSpec":
        return cls(n, (a,) * n, (b,) * n, Topology(topology))

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(x + y + 2 for x, y in zip(self.a, self.b))

    @property
    def is_uniform(self) -> bool:
        return len(set(self.a)) == 1 and len(set(self.b)) == 1

    def swapped(self) -> "PolygonSpec":
        return PolygonSpec(self.n, self.b, self.a, self.topology)

    def to_dict(self) -> dict:
        return {"n": self.n, "a": list(self.a), "b": list(self.b), "topology": self.topology.value}

    @classmethod
    def from_dict(cls, d: dict) -> "PolygonSpec":
        return cls(int(d["n"]), tuple(d["a"]), tuple(d["b"]), Topology(d["topology"]))

    def __str__(self) -> str:
        letter = {"chain": "G", "ring": "R", "twisted": "T"}[self.topology.value]
        if self.is_uniform:
            return f"{letter}{self.n}({self.a[0]},{self.b[0]})"
        return f"{letter}{self.n}({''.join(map(str, self.a))};{''.join(map(str, self.b))})"


@dataclass(frozen=True)
class Edge:
    label: str
    tail: str
    head: str


@dataclass(frozen=True)
class MultiGraph:
    """Vertices plus oriented labelled edges.

    Parallel edges are kept. Loops are allowed: a ring whose top or bottom
    path has total length 1 closes it into a loop, and so does the merged
    rung of a twisted ring without a top or bottom path. Loops never affect
    the Laplacian, toppling, or the sandpile group.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    corners: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        vs = set(self.vertices)
        for e in self.edges:
            if e.tail not in vs or e.head not in vs:
                raise SpecError(f"edge {e.label} has an unknown endpoint")
        if len({e.label for e in self.edges}) != len(self.edges):
            raise SpecError("duplicate edge labels")

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Sequence[tuple[str, str, str]]) -> "MultiGraph":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    @property
    def edge_labels(self) -> list[str]:
        return [e.label for e in self.edges]

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def degree(self, v: str) -> int:
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def multiplicities(self) -> dict[str, dict[str, int]]:
        """m(u, v) for u != v as nested dicts, symmetric; loops are skipped."""
        m: dict[str, dict[str, int]] = {v: {} for v in self.vertices}
        for e in self.edges:
            if e.tail == e.head:
                continue
            m[e.tail][e.head] = m[e.tail].get(e.head, 0) + 1
            m[e.head][e.tail] = m[e.head].get(e.tail, 0) + 1
        return m

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.multiplicities()
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"label": e.label, "tail": e.tail, "head": e.head} for e in self.edges],
            "corners": dict(self.corners),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "MultiGraph":
        return cls(
            tuple(d["vertices"]),
            tuple(Edge(e["label"], e["tail"], e["head"]) for e in d["edges"]),
            dict(d.get("corners", {})),
        )


def build(spec: PolygonSpec) -> MultiGraph:
    """Build the oriented multigraph for a polygon spec.

    Edge order: rungs (e_0 for chains, then e_1 ... e_n), then f_{i,j} and
    g_{i,j} in lexicographic (i, j) order.
    """
    n = spec.n
    A, B = sum(spec.a), sum(spec.b)
    topo = spec.topology

    def x(t: int) -> str:
        return f"x{t}"

    def y(t: int) -> str:
        return f"y{t}"

    # vertex identification for the glued ends (tiny union-find; the
    # representative is whichever of the pair comes first: x before y)
    order = [x(t) for t in range(A + 1)] + [y(t) for t in range(B + 1)]
    rank = {v: i for i, v in enumerate(order)}
    parent = {v: v for v in order}

    def canon(v: str) -> str:
        while parent[v] != v:
            v = parent[v]
        return v

    def glue(p: str, q: str) -> None:
        p, q = canon(p), canon(q)
        if p != q:
            p, q = sorted((p, q), key=rank.get)
            parent[q] = p

    if topo is Topology.RING:
        glue(x(0), x(A))
        glue(y(0), y(B))
    elif topo is Topology.TWISTED:
        glue(x(0), y(B))  # v_0 ~ u_n
        glue(y(0), x(A))  # u_0 ~ v_n

    vertices: list[str] = []
    for v in order:
        c = canon(v)
        if c not in vertices:
            vertices.append(c)

    pa = [sum(spec.a[:i]) for i in range(n + 1)]
    pb = [sum(spec.b[:i]) for i in range(n + 1)]
    corners = {}
    for i in range(n + 1):
        corners[f"v{i}"] = canon(x(pa[i]))
        corners[f"u{i}"] = canon(y(pb[i]))

    edges: list[Edge] = []
    first_rung = 0 if topo is Topology.CHAIN else 1
    for i in range(first_rung, n + 1):
        tail, head = canon(y(pb[i])), canon(x(pa[i]))
        if topo is Topology.TWISTED and i == n:
            # merged free rung runs u_0 -> v_0
            tail, head = corners["u0"], corners["v0"]
        edges.append(Edge(f"e{i}", tail, head))
    for i in range(1, n + 1):
        for j in range(1, spec.a[i - 1] + 1):
            t = pa[i - 1] + j
            edges.append(Edge(f"f{i},{j}", canon(x(t - 1)), canon(x(t))))
    for i in range(1, n + 1):
        for j in range(1, spec.b[i - 1] + 1):
            t = pb[i - 1] + j
            # Q^2 runs from u_n towards u_0
            edges.append(Edge(f"g{i},{j}", canon(y(t)), canon(y(t - 1))))

    g = MultiGraph(tuple(vertices), tuple(edges), corners)
    assert g.is_connected()
    return g


def expected_counts(spec: PolygonSpec) -> tuple[int, int]:
    """(|V|, |E|) predicted from the polygon parameters."""
    A, B, n = sum(spec.a), sum(spec.b), spec.n
    if spec.topology is Topology.CHAIN:
        return A + B + 2, A + B + n + 1
    if spec.topology is Topology.RING:
        # a path of length zero keeps its single vertex
        return max(A, 1) + max(B, 1), A + B + n
    # twisting joins both paths into one closed walk of length A + B
    return max(A + B, 1), A + B + n


def laplacian(g: MultiGraph) -> IntegerMatrix:
    idx = g.index()
    k = len(g.vertices)
    L = [[0] * k for _ in range(k)]
    for e in g.edges:
        i, j = idx[e.tail], idx[e.head]
        if i == j:
            continue
        L[i][i] += 1
        L[j][j] += 1
        L[i][j] -= 1
        L[j][i] -= 1
    return IntegerMatrix.from_rows(L)


def reduced_laplacian(g: MultiGraph, sink: str | None = None) -> IntegerMatrix:
    """Laplacian with the sink's row and column removed (default sink: first vertex)."""
    if sink is None:
        sink = g.vertices[0]
    if sink not in g.vertices:
        raise SpecError(f"unknown sink {sink!r}")
    q = g.index()[sink]
    rows = laplacian(g).to_rows()
    return IntegerMatrix.from_rows([r[:q] + r[q + 1:] for i, r in enumerate(rows) if i != q])


def _spanning_tree(g: MultiGraph, root: str) -> dict[str, tuple[str, int]]:
    """BFS tree: vertex -> (parent, index of the tree edge)."""
    inc: dict[str, list[tuple[int, str]]] = {v: [] for v in g.vertices}
    for k, e in enumerate(g.edges):
        inc[e.tail].append((k, e.head))
        inc[e.head].append((k, e.tail))
    parent: dict[str, tuple[str, int]] = {}
    seen = {root}
    q = deque([root])
    while q:
        v = q.popleft()
        for k, w in inc[v]:
            if w not in seen:
                seen.add(w)
                parent[w] = (v, k)
                q.append(w)
    return parent


def cycle_basis(g: MultiGraph, root: str | None = None) -> list[tuple[int, ...]]:
    """Fundamental cycles of a BFS spanning tree as signed edge vectors.

    Each non-tree edge e = (t, h) is closed up by the tree path from h back
    to t, and every edge gets sign +1 when traversed along its orientation.
    """
    root = root or g.vertices[0]
    parent = _spanning_tree(g, root)
    tree_edges = {k for _, k in parent.values()}
    depth = {root: 0}

    def d(v: str) -> int:
        if v not in depth:
            depth[v] = d(parent[v][0]) + 1
        return depth[v]

    out = []
    m = len(g.edges)
    for k, e in enumerate(g.edges):
        if k in tree_edges:
            continue
        vec = [0] * m
        vec[k] = 1
        # walk from head back to tail through the tree
        a, b = e.head, e.tail
        up_a, up_b = [], []
        while a != b:
            if d(a) >= d(b):
                up_a.append(a)
                a = parent[a][0]
            else:
                up_b.append(b)
                b = parent[b][0]
        for v in up_a:  # traversed v -> parent(v)
            p, ek = parent[v]
            vec[ek] += 1 if g.edges[ek].tail == v else -1
        for v in up_b:  # traversed parent(v) -> v
            p, ek = parent[v]
            vec[ek] += 1 if g.edges[ek].head == v else -1
        out.append(tuple(vec))
    return out


def vertex_cut(g: MultiGraph, v: str) -> tuple[int, ...]:
    return tuple((e.tail == v) - (e.head == v) for e in g.edges)


def cut_basis(g: MultiGraph, omit: str | None = None) -> list[tuple[int, ...]]:
    """Vertex cuts c_v for every vertex except ``omit`` (default v_0)."""
    if omit is None:
        omit = g.corners.get("v0", g.vertices[0])
    return [vertex_cut(g, v) for v in g.vertices if v != omit]


def edge_presentation_matrix(g: MultiGraph) -> IntegerMatrix:
    """Square |E| x |E| matrix: cycle basis rows, then cut basis rows.

    Its cokernel is Z^E / (cycle space + cut space), i.e. the sandpile group.
    """
    return IntegerMatrix.from_rows(cycle_basis(g) + cut_basis(g))


def cycle_graph(k: int) -> MultiGraph:
    """Plain oriented cycle C_k, handy as a tiny fixture."""
    vs = [f"c{i}" for i in range(k)]
    return MultiGraph.from_edges(vs, [(f"h{i}", vs[i], vs[(i + 1) % k]) for i in range(k)])

"""Graphs with labeled edges as a minors system.

The ground set is the edge list. Vertices are kept explicitly so that
isolated vertices survive contraction: a graph with no edges is the
monomial a^|V| of the twist.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Hashable
from dataclasses import dataclass
from typing import Any

import networkx as nx
from networkx.utils import UnionFind

from unitutte_core.algebra import MonoidSig, MRPoly
from unitutte_core.bits import elements, full
from unitutte_core.characters import delcon_evaluate, witness
from unitutte_core.config import settings
from unitutte_core.errors import StructureError, UnsupportedSystemError, check_size
from unitutte_core.matroid import RankTable
from unitutte_core.minors import MinorsSystem
from unitutte_core.schemas import GraphDoc, Witness
from unitutte_core.variables import XY, var

logger = logging.getLogger(__name__)

AB = MonoidSig(["a", "b"])
A1A2B = MonoidSig(["a1", "a2", "b"])
Q = MonoidSig(["q"])


@dataclass(frozen=True)
class EdgeGraph:
    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for i, (s, t) in enumerate(self.edges):
            if not (0 <= s < self.vertices and 0 <= t < self.vertices):
                raise StructureError(f"edge {i} = ({s}, {t}) has an endpoint outside 0..{self.vertices - 1}")

    @property
    def n(self) -> int:
        return len(self.edges)

    def to_networkx(self, mask: int | None = None) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.vertices))
        picked = range(self.n) if mask is None else elements(mask)
        g.add_edges_from((*self.edges[i], i) for i in picked)
        return g

    def components(self, mask: int | None = None) -> int:
        """k(A): components of the spanning subgraph (V, A)."""
        return nx.number_connected_components(self.to_networkx(mask))

    def rank(self, mask: int) -> int:
        return self.vertices - self.components(mask)

    def is_loop(self, e: int) -> bool:
        s, t = self.edges[e]
        return s == t

    # --- Minors ---

    def restrict(self, mask: int) -> EdgeGraph:
        return EdgeGraph(self.vertices, tuple(self.edges[i] for i in elements(mask)))

    def contract(self, mask: int) -> EdgeGraph:
        uf = UnionFind(range(self.vertices))
        for i in elements(mask):
            uf.union(*self.edges[i])
        roots = sorted({uf[v] for v in range(self.vertices)}, key=lambda r: min(
            v for v in range(self.vertices) if uf[v] == r
        ))
        label = {r: k for k, r in enumerate(roots)}
        kept = full(self.n) & ~mask
        return EdgeGraph(
            len(roots),
            tuple((label[uf[s]], label[uf[t]]) for s, t in (self.edges[i] for i in elements(kept))),
        )

    def delete(self, mask: int) -> EdgeGraph:
        return self.restrict(full(self.n) & ~mask)

    def disjoint_union(self, other: EdgeGraph) -> EdgeGraph:
        off = self.vertices
        return EdgeGraph(
            self.vertices + other.vertices,
            self.edges + tuple((s + off, t + off) for s, t in other.edges),
        )

    # --- Serialization ---

    def to_doc(self) -> dict[str, Any]:
        return {"type": "graph", "vertices": self.vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_doc(cls, doc: GraphDoc | dict) -> EdgeGraph:
        if isinstance(doc, dict):
            doc = GraphDoc.model_validate(doc)
        return cls(doc.vertices, tuple((int(s), int(t)) for s, t in doc.edges))


def isolated(k: int) -> EdgeGraph:
    return EdgeGraph(k, ())


EDGE = EdgeGraph(2, ((0, 1),))
LOOP_EDGE = EdgeGraph(1, ((0, 0),))
TRIANGLE = EdgeGraph(3, ((0, 1), (1, 2), (0, 2)))

# two-edge graphs without isolated vertices, one per isomorphism class
_TWO_EDGE = (
    EdgeGraph(3, ((0, 1), (1, 2))),
    EdgeGraph(4, ((0, 1), (2, 3))),
    EdgeGraph(2, ((0, 1), (0, 1))),
    EdgeGraph(2, ((0, 1), (1, 1))),
    EdgeGraph(3, ((0, 1), (2, 2))),
    EdgeGraph(1, ((0, 0), (0, 0))),
    EdgeGraph(2, ((0, 0), (1, 1))),
)


def to_matroid(g: EdgeGraph) -> RankTable:
    """Cycle matroid: rk(A) = |V| - k(A)."""
    check_size(g.n, settings.max_graph_edges, "graph to matroid")
    uf_rank = []
    for a in range(1 << g.n):
        uf = UnionFind(range(g.vertices))
        merges = 0
        for i in elements(a):
            s, t = g.edges[i]
            if uf[s] != uf[t]:
                uf.union(s, t)
                merges += 1
        uf_rank.append(merges)
    return RankTable(g.n, tuple(uf_rank))


def random_graph(rng: random.Random, n: int) -> EdgeGraph:
    v = rng.randint(1, n + 1)
    return EdgeGraph(v, tuple((rng.randrange(v), rng.randrange(v)) for _ in range(n)))


def enumerate_graphs(k: int, vertices: int = 3) -> list[EdgeGraph]:
    """Every multiset of k edges (loops included) on a fixed vertex set."""
    slots = [(s, t) for s in range(vertices) for t in range(s, vertices)]
    return [EdgeGraph(vertices, edges) for edges in itertools.combinations_with_replacement(slots, k)]


class GraphSystem(MinorsSystem[EdgeGraph]):
    NAME = "gra"
    MULTIPLICATIVE = True
    TWIST_AXES = ("a",)

    def ground_size(self, x: EdgeGraph) -> int:
        return x.n

    def restrict(self, x: EdgeGraph, mask: int) -> EdgeGraph:
        return x.restrict(mask)

    def contract(self, x: EdgeGraph, mask: int) -> EdgeGraph:
        return x.contract(mask)

    def direct_sum(self, x: EdgeGraph, y: EdgeGraph) -> EdgeGraph:
        return x.disjoint_union(y)

    def unit(self) -> EdgeGraph:
        return isolated(0)

    def to_doc(self, x: EdgeGraph) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: EdgeGraph) -> dict[str, int]:
        r = x.rank(full(x.n))
        return {"u": r, "v": x.n - r}

    def twist_class(self, x: EdgeGraph) -> tuple[dict[str, int], dict[int, int]]:
        return {"a": x.vertices}, {}

    def exact_key(self, x: EdgeGraph) -> Hashable:
        return (x.vertices, x.edges)

    def enumerate(self, k: int) -> list[EdgeGraph]:
        if k == 0:
            return [isolated(0)]
        if k == 1:
            return [EDGE, LOOP_EDGE]
        if k == 2:
            return list(_TWO_EDGE)
        raise UnsupportedSystemError(f"{self.NAME}: enumeration only up to two edges")

    def generator_name(self, x: EdgeGraph) -> str:
        return "l" if x.is_loop(0) else "c"

    def empty_samples(self) -> list[EdgeGraph]:
        return [isolated(k) for k in range(3)]

    def random(self, rng: random.Random, n: int) -> EdgeGraph:
        return random_graph(rng, n)


GRAPHS = GraphSystem()


# --- Invariants ---

def universal_graph_tutte(g: EdgeGraph) -> MRPoly:
    """Character in (u1, v1, a, u2, v2):
    sum_A u1^rk(A) v1^null(A) a^k(A) u2^(k(A)-k(G)) v2^(|E|-|A|+k(G)-k(A))."""
    check_size(g.n, settings.max_graph_edges, "graph character")
    return delcon_evaluate(GRAPHS, g, GRAPHS.universal_spec())


def dichromatic(g: EdgeGraph, universal: bool = False) -> MRPoly:
    """Q_G(a, b) = sum_A a^k(A) b^(|A| - |V| + k(A))."""
    u = universal_graph_tutte(g)
    if universal:
        return u
    b = var(AB, "b")
    return u.specialize({"u1": 1, "v1": b, "u2": 1, "v2": 1}, AB)


def graph_tutte(g: EdgeGraph) -> MRPoly:
    """𝔗 of the cycle matroid, from the universal character at (1, y-1, 1, x-1, 1)."""
    x, y = var(XY, "x"), var(XY, "y")
    return universal_graph_tutte(g).specialize(
        {"u1": 1, "v1": y - 1, "a": 1, "u2": x - 1, "v2": 1}, XY
    )


def chromatic(g: EdgeGraph) -> MRPoly:
    """χ_G(q) by χ_G = χ_{G∖e} - χ_{G/e}; a loop gives 0."""
    check_size(g.n, settings.max_graph_edges, "chromatic")
    cache: dict = {}

    def rec(h: EdgeGraph) -> MRPoly:
        if h.n == 0:
            return MRPoly.mono(Q.monomial(q=h.vertices))
        key = (h.vertices, h.edges)
        if key in cache:
            return cache[key]
        if h.is_loop(0):
            val = MRPoly.zero(Q)
        else:
            val = rec(h.delete(1)) - rec(h.contract(1))
        cache[key] = val
        return val

    return rec(g)


# --- Identities ---

def dichromatic_recurrence_check(g: EdgeGraph) -> Witness | None:
    """Loop: Q(G) = (b+1) Q(G∖e); otherwise Q(G) = Q(G/e) + Q(G∖e)."""
    q = dichromatic(g)
    b = var(AB, "b")
    for e in range(g.n):
        bit = 1 << e
        if g.is_loop(e):
            rhs = (b + 1) * dichromatic(g.delete(bit))
        else:
            rhs = dichromatic(g.contract(bit)) + dichromatic(g.delete(bit))
        if q != rhs:
            return witness("dichromatic-recurrence", GRAPHS, g, q, rhs, elements_=[e])
    if g.n == 0 and q != MRPoly.mono(AB.monomial(a=g.vertices)):
        return witness("dichromatic-base", GRAPHS, g, q, f"a^{g.vertices}")
    return None


def matroid_compatibility_check(g: EdgeGraph) -> Witness | None:
    """M(G|A) = M(G)|A and M(G/A) = M(G)/A for every A."""
    m = to_matroid(g)
    for a in range(1 << g.n):
        if to_matroid(g.restrict(a)) != m.restrict(a):
            return witness("graph-matroid-restrict", GRAPHS, g, subsets=[a])
        if to_matroid(g.contract(a)) != m.contract(a):
            return witness("graph-matroid-contract", GRAPHS, g, subsets=[a])
    return None


def chromatic_convolution_check(g: EdgeGraph) -> Witness | None:
    """Q_G(a1 a2, b) = sum_A Q_{G|A}(a1, b) χ_{G/A}(a2)."""
    check_size(g.n, settings.max_chromatic_edges, "chromatic convolution")
    a1, a2, b = (var(A1A2B, n) for n in ("a1", "a2", "b"))
    lhs = dichromatic(g).specialize({"a": a1 * a2, "b": b}, A1A2B)
    rhs = MRPoly.zero(A1A2B)
    for a in range(1 << g.n):
        qa = dichromatic(g.restrict(a)).specialize({"a": a1, "b": b}, A1A2B)
        chi = chromatic(g.contract(a)).specialize({"q": a2}, A1A2B)
        rhs = rhs + qa * chi
    if lhs != rhs:
        return witness("chromatic-convolution", GRAPHS, g, lhs, rhs)
    return None


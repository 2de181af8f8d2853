"""Loopless simple graphs with ordered incidence lists."""

from __future__ import annotations

import itertools
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ShapeError


class SimpleGraph:
    """A simple graph on vertices ``0..n-1``.

    ``incidence[v]`` lists the ids of the edges at ``v``; its order fixes
    which tensor index each edge is plugged into. By default edges appear in
    increasing id order. Any permutation of each list is allowed.
    """

    __slots__ = ("n_vertices", "edges", "incidence")

    def __init__(self, n_vertices: int, edges: Sequence[Tuple[int, int]],
                 incidence: Optional[Sequence[Sequence[int]]] = None):
        n = int(n_vertices)
        if n < 0:
            raise ShapeError("n_vertices must be nonnegative")
        es = []
        seen = set()
        for e in edges:
            u, v = (int(x) for x in e)
            if not (0 <= u < n and 0 <= v < n):
                raise ShapeError(f"edge {(u, v)} references a vertex outside 0..{n - 1}")
            if u == v:
                raise ShapeError(f"loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ShapeError(f"parallel edge {key}")
            seen.add(key)
            es.append((u, v))
        if incidence is None:
            inc = [[] for _ in range(n)]
            for i, (u, v) in enumerate(es):
                inc[u].append(i)
                inc[v].append(i)
        else:
            inc = [list(map(int, lst)) for lst in incidence]
            if len(inc) != n:
                raise ShapeError("incidence must have one list per vertex")
            for v in range(n):
                expect = sorted(i for i, e in enumerate(es) if v in e)
                if sorted(inc[v]) != expect:
                    raise ShapeError(f"incidence list of vertex {v} disagrees with the edges")
        self.n_vertices = n
        self.edges = tuple(es)
        self.incidence = tuple(tuple(lst) for lst in inc)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    @property
    def degrees(self) -> List[int]:
        return [len(lst) for lst in self.incidence]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def __repr__(self):
        return f"SimpleGraph({self.n_vertices}, {list(self.edges)})"

    def with_incidence(self, incidence) -> "SimpleGraph":
        return SimpleGraph(self.n_vertices, self.edges, incidence)

    def disjoint_union(self, other: "SimpleGraph") -> "SimpleGraph":
        off = self.n_vertices
        return SimpleGraph(off + other.n_vertices,
                           list(self.edges) + [(u + off, v + off) for u, v in other.edges])

    def add_isolated(self, count: int = 1) -> "SimpleGraph":
        return SimpleGraph(self.n_vertices + count, self.edges)

    def to_dict(self) -> dict:
        return {"n_vertices": self.n_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, doc: dict) -> "SimpleGraph":
        return cls(int(doc["n_vertices"]), [tuple(e) for e in doc["edges"]])


def empty_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, list(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise ShapeError("a simple cycle needs at least 3 vertices")
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> SimpleGraph:
    """Path on ``n`` vertices."""
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def random_graph(n: int, p: float, rng: np.random.Generator) -> SimpleGraph:
    pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return SimpleGraph(n, [e for e, k in zip(pairs, keep) if k])


def _canonical_key(n: int, edges) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges))
        if best is None or key < best:
            best = key
    return best


def all_graphs(max_vertices: int, min_vertices: int = 0) -> Iterator[SimpleGraph]:
    """Every simple graph on ``min_vertices..max_vertices`` vertices, one per isomorphism class.

    Brute-force canonical labelling; intended for ``max_vertices <= 6``.
    """
    for n in range(min_vertices, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        seen = set()
        for m in range(len(pairs) + 1):
            for edges in itertools.combinations(pairs, m):
                key = _canonical_key(n, edges)
                if key in seen:
                    continue
                seen.add(key)
                yield SimpleGraph(n, key)


def named_graph(name: str) -> SimpleGraph:
    """``K<n>`` complete, ``C<n>`` cycle, ``P<n>`` path on n vertices, ``E<n>`` edgeless.

    Aliases: ``edge`` (K2), ``triangle`` (K3), ``path3`` (P3).
    """
    aliases = {"edge": "K2", "triangle": "K3", "path3": "P3"}
    key = aliases.get(name, name)
    makers = {"K": complete_graph, "C": cycle_graph, "P": path_graph, "E": empty_graph}
    if len(key) >= 2 and key[0] in makers and key[1:].isdigit():
        return makers[key[0]](int(key[1:]))
    raise ShapeError(f"unknown graph name {name!r}")

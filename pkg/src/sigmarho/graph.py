"""Simple undirected graphs, DIMACS-style I/O, and modulator search.

Vertices are ``0..n-1`` internally. The text format is 1-indexed::

    c a comment
    p edge 3 2
    e 1 2
    e 2 3
    w 2 5        (optional vertex weight, only in weighted files)
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ParseError


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match vertex count")
        for v, nb in enumerate(self.adj):
            if v in nb:
                raise ValueError(f"self-loop at vertex {v}")
            for u in nb:
                if not 0 <= u < self.n or v not in self.adj[u]:
                    raise ValueError(f"asymmetric or out-of-range edge {v}-{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(frozenset() for _ in range(n)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, combinations(range(n), 2))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        """K_{1,leaves} with the center at vertex 0."""
        return cls.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adj[v])

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.adj) // 2

    def masks(self) -> list[int]:
        """Neighborhood bitmasks, handy for subset enumeration."""
        return [sum(1 << u for u in nb) for nb in self.adj]

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to 0..len-1, plus the new->old map."""
        order = sorted(vertices)
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u in order for v in self.adj[u] if v in index and u < v]
        return Graph.from_edges(len(order), edges), order

    def complement(self) -> "Graph":
        return Graph.from_edges(
            self.n, ((u, v) for u, v in combinations(range(self.n), 2) if v not in self.adj[u])
        )

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1


@dataclass(frozen=True)
class WeightedGraph:
    graph: Graph
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != self.graph.n:
            raise ValueError("one weight per vertex required")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive integers")

    @classmethod
    def unit(cls, g: Graph) -> "WeightedGraph":
        return cls(g, (1,) * g.n)


@dataclass(frozen=True)
class Modulator:
    vertices: frozenset[int]
    degree_bound: int

    @property
    def size(self) -> int:
        return len(self.vertices)


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------

def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer, got {tok!r}", lineno) from None


def parse_weighted_graph(text: str) -> WeightedGraph:
    n = None
    edges: list[tuple[int, int]] = []
    weights: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError("header must be 'p edge <n> <m>'", lineno)
            n = _parse_int(parts[2], lineno)
            _parse_int(parts[3], lineno)
            if n < 0:
                raise ParseError("negative vertex count", lineno)
            continue
        if n is None:
            raise ParseError(f"{tag!r} line before 'p edge' header", lineno)
        if tag == "e":
            if len(parts) != 3:
                raise ParseError("edge line must be 'e <u> <v>'", lineno)
            u, v = (_parse_int(t, lineno) for t in parts[1:])
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop on vertex {u}", lineno)
            edges.append((u - 1, v - 1))
        elif tag == "w":
            if len(parts) != 3:
                raise ParseError("weight line must be 'w <v> <weight>'", lineno)
            v, w = (_parse_int(t, lineno) for t in parts[1:])
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
            if w < 1:
                raise ParseError("weights must be positive", lineno)
            weights[v - 1] = w
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge' header")
    g = Graph.from_edges(n, edges)
    return WeightedGraph(g, tuple(weights.get(v, 1) for v in range(n)))


def parse_graph(text: str) -> Graph:
    """Parse the DIMACS-like edge format. Weight lines are accepted and ignored."""
    return parse_weighted_graph(text).graph


def format_graph(g: Graph, weights: Sequence[int] | None = None) -> str:
    lines = [f"p edge {g.n} {g.edge_count}"]
    if weights is not None:
        lines += [f"w {v + 1} {w}" for v, w in enumerate(weights) if w != 1]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> WeightedGraph:
    with open(path) as fh:
        return parse_weighted_graph(fh.read())


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------

def generate_random(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); identical arguments give identical graphs."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    return Graph.from_edges(n, ((u, v) for u, v in combinations(range(n), 2) if rng.random() < p))


def generate_connected(n: int, p: float, seed: int, max_tries: int = 1000) -> Graph:
    """Rejection-sample G(n, p) until connected; falls back to adding a path spine."""
    for attempt in range(max_tries):
        g = generate_random(n, p, seed * 7919 + attempt)
        if g.is_connected():
            return g
    return Graph.from_edges(n, g.edges() + [(i, i + 1) for i in range(n - 1)])


# --------------------------------------------------------------------------
# modulators
# --------------------------------------------------------------------------

def verify_modulator(g: Graph, s: Iterable[int], d: int) -> bool:
    removed = set(s)
    return all(
        len(g.adj[v] - removed) <= d for v in range(g.n) if v not in removed
    )


def is_vertex_cover(g: Graph, s: Iterable[int]) -> bool:
    return verify_modulator(g, s, 0)


def maximal_matching(g: Graph) -> list[tuple[int, int]]:
    matched = set()
    out = []
    for u, v in g.edges():
        if u not in matched and v not in matched:
            matched.update((u, v))
            out.append((u, v))
    return out


def approx_vertex_cover(g: Graph) -> frozenset[int]:
    """Both endpoints of a greedy maximal matching (factor-2 approximation)."""
    return frozenset(x for e in maximal_matching(g) for x in e)


def _branch_modulator(g: Graph, d: int, removed: set[int], budget: int) -> set[int] | None:
    # lowest-index vertex whose residual degree exceeds d
    for v in range(g.n):
        if v in removed:
            continue
        residual = sorted(g.adj[v] - removed)
        if len(residual) > d:
            break
    else:
        return set(removed)
    if budget == 0:
        return None
    # the star {v} + any d+1 residual neighbours cannot all survive
    for choice in [v] + residual[: d + 1]:
        removed.add(choice)
        found = _branch_modulator(g, d, removed, budget - 1)
        removed.discard(choice)
        if found is not None:
            return found
    return None


def compute_degree_d_modulator(g: Graph, d: int, budget: int | None = None) -> frozenset[int] | None:
    """Smallest-found degree-d modulator by bounded search tree.

    With a budget, returns some modulator of size <= budget or None. Without one,
    the budget is raised from a lower bound until the search succeeds, so the
    result has minimum size.
    """
    if d < 0:
        raise ValueError("degree bound must be non-negative")
    if budget is not None:
        found = _branch_modulator(g, d, set(), budget)
        return None if found is None else frozenset(found)
    start = len(maximal_matching(g)) if d == 0 else 0
    for b in range(start, g.n + 1):
        found = _branch_modulator(g, d, set(), b)
        if found is not None:
            return frozenset(found)
    raise AssertionError("removing every vertex always yields a modulator")


def compute_vertex_cover(g: Graph, budget: int | None = None) -> frozenset[int] | None:
    return compute_degree_d_modulator(g, 0, budget)

"""Modular decomposition trees and the modular-width solvers.

Two problems are handled: efficient domination (sigma={0}, rho={1}) and
perfect total domination (sigma={1}, rho={1}).

Tree text format (leaves are 1-indexed like the graph files)::

    (leaf 3)
    (union t t ...)
    (join t t)
    (subst <graph-file or "inline;graph;lines"> t t ...)
"""

from __future__ import annotations

import os
import random
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Union

from .domination import SigmaRhoSpec, preset
from .errors import DecompositionError, ParseError
from .graph import Graph, format_graph, parse_graph


@dataclass(frozen=True)
class Introduce:
    vertex: int


@dataclass(frozen=True)
class UnionNode:
    children: tuple["Node", ...]


@dataclass(frozen=True)
class JoinNode:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class SubstNode:
    base: Graph
    children: tuple["Node", ...]


Node = Union[Introduce, UnionNode, JoinNode, SubstNode]


def children_of(t: Node) -> tuple[Node, ...]:
    if isinstance(t, Introduce):
        return ()
    if isinstance(t, JoinNode):
        return (t.left, t.right)
    return t.children


def leaves(t: Node) -> list[int]:
    if isinstance(t, Introduce):
        return [t.vertex]
    return [v for c in children_of(t) for v in leaves(c)]


def modular_width(t: Node) -> int:
    if isinstance(t, Introduce):
        return 1
    own = t.base.n if isinstance(t, SubstNode) else 2
    return max([own] + [modular_width(c) for c in children_of(t)])


def _edges(t: Node) -> tuple[list[int], set[tuple[int, int]]]:
    if isinstance(t, Introduce):
        return [t.vertex], set()
    parts = [_edges(c) for c in children_of(t)]
    verts = [v for vs, _ in parts for v in vs]
    edges = set().union(*(es for _, es in parts))

    def link(a: list[int], b: list[int]):
        for u in a:
            for v in b:
                edges.add((min(u, v), max(u, v)))

    if isinstance(t, JoinNode):
        link(parts[0][0], parts[1][0])
    elif isinstance(t, SubstNode):
        for i, j in t.base.edges():
            link(parts[i][0], parts[j][0])
    return verts, edges


def evaluate_tree(t: Node, n: int | None = None) -> Graph:
    """Graph described by the tree, on vertices 0..n-1 (n defaults to leaf count)."""
    verts, edges = _edges(t)
    if len(set(verts)) != len(verts):
        raise DecompositionError("a vertex appears in more than one leaf")
    n = len(verts) if n is None else n
    if sorted(verts) != list(range(n)):
        raise DecompositionError(f"leaves do not biject with vertices 0..{n - 1}")
    return Graph.from_edges(n, edges)


def check_reconstruction(t: Node, g: Graph) -> None:
    if evaluate_tree(t, g.n) != g:
        raise DecompositionError("tree does not reconstruct the graph")


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------

def decompose(g: Graph) -> Node:
    """Union over components, join over co-components, else one prime node.

    Exact for cographs; any other graph part becomes a substitution node whose
    base is that induced subgraph with single-leaf children.
    """
    if g.n == 0:
        raise DecompositionError("cannot decompose the empty graph")
    return _decompose(g, list(range(g.n)))


def _decompose(g: Graph, vs: list[int]) -> Node:
    if len(vs) == 1:
        return Introduce(vs[0])
    sub, order = g.induced(vs)
    comps = sub.components()
    if len(comps) > 1:
        return UnionNode(tuple(_decompose(g, [order[i] for i in c]) for c in comps))
    co = sub.complement().components()
    if len(co) > 1:
        parts = [_decompose(g, [order[i] for i in c]) for c in co]
        tree = parts[0]
        for p in parts[1:]:
            tree = JoinNode(tree, p)
        return tree
    return SubstNode(sub, tuple(Introduce(v) for v in order))


def random_cograph(n: int, seed: int) -> Graph:
    """Random cograph built by recursive union/join splits, labels shuffled."""
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()

    def build(vs: list[int]):
        if len(vs) == 1:
            return
        cut = rng.randint(1, len(vs) - 1)
        a, b = vs[:cut], vs[cut:]
        build(a)
        build(b)
        if rng.random() < 0.5:
            edges.update((min(u, v), max(u, v)) for u in a for v in b)

    labels = list(range(n))
    rng.shuffle(labels)
    build(labels)
    return Graph.from_edges(n, edges)


def is_module(g: Graph, m: set[int]) -> bool:
    """Every vertex outside ``m`` sees all of ``m`` or none of it."""
    for v in range(g.n):
        if v in m:
            continue
        hits = len(g.adj[v] & m)
        if 0 < hits < len(m):
            return False
    return True


def has_nontrivial_module(g: Graph) -> bool:
    """Exhaustive check, for small graphs only."""
    for size in range(2, g.n):
        for combo in combinations(range(g.n), size):
            if is_module(g, set(combo)):
                return True
    return False


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------

_TOKEN = re.compile(r'\s*(\(|\)|"[^"]*"|[^\s()"]+)')


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at offset {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_decomposition(
    text: str, base_dir: str = ".", graph: Graph | None = None, loader: Callable[[str], Graph] | None = None
) -> Node:
    """Parse a tree; with ``graph`` given, the tree must reconstruct it."""
    toks = _tokenize(text)
    pos = 0

    def load(src: str) -> Graph:
        if src.startswith('"'):
            return parse_graph(src.strip('"').replace(";", "\n"))
        if loader is not None:
            return loader(src)
        with open(os.path.join(base_dir, src)) as fh:
            return parse_graph(fh.read())

    def expect(tok: str):
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            got = toks[pos] if pos < len(toks) else "end of input"
            raise ParseError(f"expected {tok!r}, got {got!r}")
        pos += 1

    def node() -> Node:
        nonlocal pos
        expect("(")
        if pos >= len(toks):
            raise ParseError("unexpected end of input")
        head = toks[pos]
        pos += 1
        if head == "leaf":
            try:
                v = int(toks[pos])
            except (IndexError, ValueError):
                raise ParseError("leaf needs a vertex number") from None
            if v < 1:
                raise ParseError("leaf vertices are 1-indexed")
            pos += 1
            expect(")")
            return Introduce(v - 1)
        base = None
        if head == "subst":
            if pos >= len(toks) or toks[pos] in "()":
                raise ParseError("subst needs a base graph")
            base = load(toks[pos])
            pos += 1
        kids = []
        while pos < len(toks) and toks[pos] == "(":
            kids.append(node())
        expect(")")
        if head == "union":
            if len(kids) < 2:
                raise DecompositionError("union needs at least two children")
            return UnionNode(tuple(kids))
        if head == "join":
            if len(kids) != 2:
                raise DecompositionError("join takes exactly two children")
            return JoinNode(kids[0], kids[1])
        if head == "subst":
            if len(kids) != base.n:
                raise DecompositionError(f"subst base has {base.n} vertices but {len(kids)} children")
            return SubstNode(base, tuple(kids))
        raise ParseError(f"unknown node type {head!r}")

    tree = node()
    if pos != len(toks):
        raise ParseError("trailing tokens after tree")
    evaluate_tree(tree, graph.n if graph is not None else None)
    if graph is not None:
        check_reconstruction(tree, graph)
    return tree


def format_decomposition(t: Node) -> str:
    if isinstance(t, Introduce):
        return f"(leaf {t.vertex + 1})"
    inner = " ".join(format_decomposition(c) for c in children_of(t))
    if isinstance(t, UnionNode):
        return f"(union {inner})"
    if isinstance(t, JoinNode):
        return f"(join {inner})"
    base = format_graph(t.base).strip().replace("\n", ";")
    return f'(subst "{base}" {inner})'


# --------------------------------------------------------------------------
# solvers
# --------------------------------------------------------------------------

EDS = preset("efficient-dominating")
PTDS = preset("total-perfect-dominating")


def _valid_within(g: Graph, vertices: list[int], spec: SigmaRhoSpec, d: set[int]) -> bool:
    for v in vertices:
        c = len(g.adj[v] & d)
        if c not in (spec.sigma if v in d else spec.rho):
            return False
    return True


def _universal(g: Graph, part: list[int]) -> list[int]:
    ps = set(part)
    return [v for v in part if ps - {v} <= g.adj[v]]


def _isolated(g: Graph, part: list[int]) -> list[int]:
    ps = set(part)
    return [v for v in part if not g.adj[v] & ps]


class _Solver:
    def __init__(self, g: Graph, spec: SigmaRhoSpec, leaf_rule, candidate_rule, trace=None):
        self.g = g
        self.spec = spec
        self.leaf_rule = leaf_rule
        self.candidate_rule = candidate_rule
        self.trace = trace

    def solve(self, t: Node) -> set[int] | None:
        g = self.g
        if isinstance(t, Introduce):
            return self.leaf_rule(t.vertex)
        if isinstance(t, UnionNode):
            out: set[int] = set()
            for c in t.children:
                part = self.solve(c)
                if part is None:
                    return None
                out |= part
            return out
        if isinstance(t, JoinNode):
            return self._join(t)
        return self._subst(t)

    def _join(self, t: JoinNode) -> set[int] | None:
        # children still get solved so that every node is visited
        self.solve(t.left)
        self.solve(t.right)
        a, b = leaves(t.left), leaves(t.right)
        for cand in self.join_candidates(a, b):
            if _valid_within(self.g, a + b, self.spec, cand):
                return cand
        return None

    def join_candidates(self, a: list[int], b: list[int]):
        raise NotImplementedError

    def _subst(self, t: SubstNode) -> set[int] | None:
        parts = [leaves(c) for c in t.children]
        out: set[int] = set()
        for comp in t.base.components():
            if len(comp) == 1:
                sol = self.solve(t.children[comp[0]])
                if sol is None:
                    return None
                out |= sol
                continue
            for i in comp:
                self.solve(t.children[i])
            cands = []
            for i in comp:
                found = self.candidate_rule(self.g, parts[i])
                if found:
                    cands.append(min(found))
                    if self.trace is not None:
                        self.trace.append((tuple(parts[i]), min(found)))
            region = [v for i in comp for v in parts[i]]
            sol = None
            for size in range(len(cands) + 1):
                for combo in combinations(cands, size):
                    if _valid_within(self.g, region, self.spec, set(combo)):
                        sol = set(combo)
                        break
                if sol is not None:
                    break
            if sol is None:
                return None
            out |= sol
        return out


class _EdsSolver(_Solver):
    def __init__(self, g, trace=None):
        super().__init__(g, EDS, lambda v: {v}, _universal, trace)

    def join_candidates(self, a, b):
        # only a single vertex universal in the joined graph can work
        for v in sorted(_universal(self.g, a) + _universal(self.g, b)):
            yield {v}


class _PtdsSolver(_Solver):
    def __init__(self, g, trace=None):
        super().__init__(g, PTDS, lambda v: None, _isolated, trace)

    def join_candidates(self, a, b):
        iso_a, iso_b = _isolated(self.g, a), _isolated(self.g, b)
        if iso_a and iso_b:
            yield {min(iso_a), min(iso_b)}


def solve_eds_modular(g: Graph, t: Node, trace: list | None = None) -> frozenset[int] | None:
    """Efficient dominating set via the tree, or None when none exists."""
    check_reconstruction(t, g)
    sol = _EdsSolver(g, trace).solve(t)
    if sol is not None and not _valid_within(g, list(range(g.n)), EDS, sol):
        raise AssertionError("modular EDS witness failed validation")
    return None if sol is None else frozenset(sol)


def solve_ptds_modular(g: Graph, t: Node, trace: list | None = None) -> frozenset[int] | None:
    """Perfect total dominating set via the tree, or None when none exists."""
    check_reconstruction(t, g)
    sol = _PtdsSolver(g, trace).solve(t)
    if sol is not None and not _valid_within(g, list(range(g.n)), PTDS, sol):
        raise AssertionError("modular PTDS witness failed validation")
    return None if sol is None else frozenset(sol)


MODULAR_SOLVERS = {
    "efficient-dominating": solve_eds_modular,
    "total-perfect-dominating": solve_ptds_modular,
}

"""Neighborhood-diversity type partition, its kernels, and the profile solver."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import product

from .domination import (
    DominationAnswer,
    Kind,
    SigmaRhoSpec,
    _mask_checker,
    brute_force,
    brute_force_weighted,
    is_sigma_rho_dominating,
)
from .errors import CapExceededError, DisconnectedGraphError, UnsupportedSpecError
from .graph import Graph, WeightedGraph, format_graph

CLIQUE = "clique"
INDEPENDENT = "independent"
DEFAULT_BLOCK_CAP = 16


@dataclass(frozen=True)
class TypePartition:
    blocks: tuple[tuple[int, ...], ...]
    kinds: tuple[str, ...]

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(bl) for bl in self.blocks)

    def block_of(self) -> dict[int, int]:
        return {v: i for i, bl in enumerate(self.blocks) for v in bl}


def same_type(g: Graph, u: int, v: int) -> bool:
    return g.adj[u] - {v} == g.adj[v] - {u}


def compute_type_partition(g: Graph) -> TypePartition:
    """Coarsest partition into twin classes; comparing with a representative suffices."""
    blocks: list[list[int]] = []
    for v in range(g.n):
        for bl in blocks:
            if same_type(g, bl[0], v):
                bl.append(v)
                break
        else:
            blocks.append([v])
    kinds = tuple(
        CLIQUE if len(bl) > 1 and bl[1] in g.adj[bl[0]] else INDEPENDENT for bl in blocks
    )
    return TypePartition(tuple(tuple(bl) for bl in blocks), kinds)


@dataclass(frozen=True)
class NdKernel:
    reduced: WeightedGraph
    budget_out: int
    provenance: tuple[tuple[int, int], ...]  # new vertex -> (original vertex, block)
    variant: str
    partition: TypePartition
    oracle_check: bool | None = None  # set only for the unproven sigma = N* route

    @property
    def weights_fit_bits(self) -> bool:
        """Every weight is representable in b bits."""
        b = self.partition.b
        return all(w.bit_length() <= b for w in self.reduced.weights)


def _require_connected(g: Graph):
    if not g.is_connected():
        raise DisconnectedGraphError(
            "the type-partition kernels assume a connected graph; kernelize each component separately"
        )


def _build(g: Graph, tp: TypePartition, keep: int, heavy_light: int | None):
    """Keep the ``keep`` lowest vertices of each block.

    With ``heavy_light`` set, blocks larger than ``keep`` get ``heavy_light``
    unit-weight vertices and the lowest kept vertex carries the rest of the block's size.
    """
    kept: list[int] = []
    weight: dict[int, int] = {}
    prov = []
    for bi, bl in enumerate(tp.blocks):
        chosen = bl[:keep]
        for v in chosen:
            weight[v] = 1
            prov.append((v, bi))
        kept.extend(chosen)
        if heavy_light is not None and len(bl) > keep:
            weight[chosen[0]] = len(bl) - heavy_light
    sub, order = g.induced(kept)
    by_vertex = dict(prov)
    provenance = tuple((v, by_vertex[v]) for v in order)
    return WeightedGraph(sub, tuple(weight[v] for v in order)), provenance


def kernel_bounded(g: Graph, spec: SigmaRhoSpec, k: int) -> NdKernel:
    """Unweighted kernel for finite sigma and rho: at most max(s, r) + 1 vertices per type.

    For a complete graph that gets truncated, the kept clique would accept a
    full selection the original cannot, so the budget is capped at max(s, r).
    """
    if not spec.is_finite:
        raise UnsupportedSpecError("bounded kernel needs finite sigma and rho")
    if not spec.sigma.values or not spec.rho.values:
        raise UnsupportedSpecError("bounded kernel needs non-empty sigma and rho")
    _require_connected(g)
    top = max(spec.sigma.max(), spec.rho.max())
    tp = compute_type_partition(g)
    reduced, prov = _build(g, tp, top + 1, None)
    budget = k
    if tp.b == 1 and tp.kinds[0] == CLIQUE and tp.sizes[0] > top + 1:
        budget = min(k, top)
    return NdKernel(reduced, budget, prov, "bounded", tp)


def kernel_rho_finite(g: Graph, spec: SigmaRhoSpec, k: int) -> NdKernel:
    """Weighted kernel for finite rho (max r) and sigma = N: r + 1 vertices per type."""
    if not spec.rho.is_finite or not spec.rho.values:
        raise UnsupportedSpecError("rho must be finite and non-empty")
    if spec.sigma.kind not in (Kind.NATURALS, Kind.POSITIVE):
        raise UnsupportedSpecError("sigma must be N (or N*, checked against the oracle)")
    _require_connected(g)
    r = spec.rho.max()
    tp = compute_type_partition(g)
    reduced, prov = _build(g, tp, r + 1, r)
    kern = NdKernel(reduced, k, prov, "rho-finite", tp)
    if spec.sigma.kind is Kind.POSITIVE:
        kern = _oracle_checked(g, spec, kern)
    return kern


def _oracle_checked(g: Graph, spec: SigmaRhoSpec, kern: NdKernel) -> NdKernel:
    try:
        lhs = brute_force(g, spec, kern.budget_out).exists
        rhs = brute_force_weighted(kern.reduced, spec, kern.budget_out).exists
    except CapExceededError:
        return kern
    if lhs != rhs:
        warnings.warn(
            f"rho-finite kernel with sigma=N* disagrees with the oracle (G: {lhs}, kernel: {rhs})",
            stacklevel=3,
        )
    return NdKernel(kern.reduced, kern.budget_out, kern.provenance, kern.variant, kern.partition, lhs == rhs)


def kernel_sigma_finite(g: Graph, spec: SigmaRhoSpec, k: int) -> NdKernel:
    """Weighted kernel for finite sigma (max s) and rho = N*: s + 2 vertices per type."""
    if not spec.sigma.is_finite or not spec.sigma.values:
        raise UnsupportedSpecError("sigma must be finite and non-empty")
    if spec.rho.kind is not Kind.POSITIVE:
        raise UnsupportedSpecError("rho must be N*")
    _require_connected(g)
    s = spec.sigma.max()
    tp = compute_type_partition(g)
    reduced, prov = _build(g, tp, s + 2, s + 1)
    return NdKernel(reduced, k, prov, "sigma-finite", tp)


VARIANTS = {
    "bounded": kernel_bounded,
    "rho-finite": kernel_rho_finite,
    "sigma-finite": kernel_sigma_finite,
}


def nd_enumerate_solve(
    g: Graph, spec: SigmaRhoSpec, budget: int | None = None, cap: int = DEFAULT_BLOCK_CAP
) -> DominationAnswer:
    """Minimum valid set by guessing a count per type from {0..r} and the full type.

    Twins are interchangeable, so one representative selection (lowest indices)
    per count profile decides the profile. Counts strictly between r and the
    full type are skipped: a non-selected member would see more than r selected
    neighbors (cliques), or a minimum solution can drop the type (sigma = N),
    or both a selected and an unselected member see the same count, which
    needs sigma and rho to intersect.
    """
    if not spec.rho.is_finite:
        raise UnsupportedSpecError("profile enumeration needs finite rho")
    tp = compute_type_partition(g)
    if tp.b > cap:
        raise CapExceededError(f"{tp.b} types exceeds block cap {cap}")
    r = spec.rho.max() if spec.rho.values else -1
    options = [sorted(set(range(min(r, t) + 1)) | {t}) for t in tp.sizes]
    valid = _mask_checker(g, spec)
    best: tuple[int, int] | None = None
    for profile in product(*options):
        size = sum(profile)
        if budget is not None and size > budget:
            continue
        if best is not None and size >= best[0]:
            continue
        mask = 0
        for bl, c in zip(tp.blocks, profile):
            for v in bl[:c]:
                mask |= 1 << v
        if valid(mask):
            best = (size, mask)
    if best is None:
        return DominationAnswer.no()
    witness = frozenset(v for v in range(g.n) if best[1] >> v & 1)
    assert is_sigma_rho_dominating(g, spec, witness)
    return DominationAnswer(True, witness, best[0])


def format_nd_kernel(kern: NdKernel) -> str:
    """Weighted graph text; refuses weights wider than b bits."""
    if not kern.weights_fit_bits:
        raise ValueError("weights exceed b bits; solve directly with nd_enumerate_solve")
    header = [
        f"c variant {kern.variant} budget {kern.budget_out} types {kern.partition.b}",
    ] + [f"c origin {i + 1} {v + 1} type {bi + 1}" for i, (v, bi) in enumerate(kern.provenance)]
    return "\n".join(header) + "\n" + format_graph(kern.reduced.graph, kern.reduced.weights)

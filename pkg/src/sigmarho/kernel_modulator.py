"""Polynomial kernel for finite (sigma, rho) parameterized by a degree-d modulator.

Pipeline: one 0/1 polynomial constraint per vertex, elimination of every
non-modulator variable through an interpolant on the offset sets, then
constraint reduction by linear independence over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .domination import SigmaRhoSpec, is_sigma_rho_dominating
from .errors import GuardViolationError, InterpolationError, LiftInconsistencyError, UnsupportedSpecError
from .graph import Graph, Modulator, verify_modulator
from .poly import (
    Polynomial,
    RootCspInstance,
    Univariate,
    compose,
    reduce_constraints,
    substitute_linear_sum,
)


@dataclass(frozen=True)
class OffsetSets:
    P: tuple[int, ...]  # interpolant is 0 here (vertex left out)
    Q: tuple[int, ...]  # interpolant is 1 here (vertex selected)

    @property
    def disjoint(self) -> bool:
        return not set(self.P) & set(self.Q)


def _require_finite(spec: SigmaRhoSpec):
    if not spec.is_finite:
        raise UnsupportedSpecError("the modulator kernel needs finite sigma and rho")


def _require_nonempty(spec: SigmaRhoSpec):
    if not spec.sigma.values or not spec.rho.values:
        raise UnsupportedSpecError(
            "empty sigma or rho makes the per-vertex product degenerate; refusing to encode it"
        )


def offset_sets(spec: SigmaRhoSpec, d: int) -> OffsetSets:
    _require_finite(spec)
    P = sorted({i - j for i in spec.rho.values for j in range(d + 1)})
    Q = sorted({i - j for i in spec.sigma.values for j in range(d + 1)})
    return OffsetSets(tuple(P), tuple(Q))


def check_guard(spec: SigmaRhoSpec, d: int) -> bool:
    """No element of sigma lies within distance d of an element of rho."""
    _require_finite(spec)
    if d < 0:
        raise ValueError("degree bound must be non-negative")
    for i in spec.sigma.values:
        if any(i - j in spec.rho for j in range(d + 1)):
            return False
    for i in spec.rho.values:
        if any(i - j in spec.sigma for j in range(d + 1)):
            return False
    return True


def build_csp(g: Graph, spec: SigmaRhoSpec) -> RootCspInstance:
    """Variable ``v`` is 1 iff vertex ``v`` is selected.

    Vertex ``v`` contributes ``Y(1 - s_v) + Z s_v`` with
    ``Y = prod_{i in rho} ((i - x)^2 + s_v)``, ``Z = prod_{j in sigma} ((j - x)^2 + s_v - 1)``
    and ``x`` the sum over the open neighborhood.
    """
    _require_finite(spec)
    _require_nonempty(spec)
    constraints = []
    for v in range(g.n):
        x = Polynomial.linear_sum(g.neighbors(v))
        sv = Polynomial.var(v)
        Y = Polynomial.constant(1)
        for i in spec.rho.values:
            Y = Y * ((i - x) ** 2 + sv)
        Z = Polynomial.constant(1)
        for j in spec.sigma.values:
            Z = Z * ((j - x) ** 2 + sv - 1)
        constraints.append(Y * (1 - sv) + Z * sv)
    deg = max((c.degree() for c in constraints), default=0)
    return RootCspInstance(g.n, tuple(constraints), deg)


def lagrange_g(po: OffsetSets) -> Univariate:
    """Interpolant equal to 0 on P and 1 on Q.

    Written as the sum of Lagrange basis polynomials over P, plus twice those
    over Q, minus one.
    """
    if not po.disjoint:
        raise InterpolationError(f"P and Q overlap on {sorted(set(po.P) & set(po.Q))}")
    nodes = sorted(set(po.P) | set(po.Q))
    if not nodes:
        raise InterpolationError("no interpolation nodes")

    def basis(a: int) -> Univariate:
        poly = Univariate.of([1])
        for c in nodes:
            if c != a:
                poly = poly * Univariate.of([Fraction(-c, a - c), Fraction(1, a - c)])
        return poly

    total = Univariate.of([-1])
    for a in po.P:
        total = total + basis(a)
    for b in po.Q:
        total = total + basis(b) * 2
    return total


@dataclass(frozen=True)
class EliminationEntry:
    vertex: int
    modulator_neighbors: tuple[int, ...]  # graph vertices in N(v) & S


@dataclass
class KernelResult:
    csp: RootCspInstance
    modulator_order: tuple[int, ...]  # CSP variable index -> graph vertex
    interpolant: Univariate
    elimination_table: dict[int, EliminationEntry]
    gamma: int
    alpha: int
    pre_substitution_degree: int
    substituted_degree: int
    constraints_before_reduction: int
    bit_size_estimate: int
    graph: Graph = field(repr=False)
    spec: SigmaRhoSpec = field(repr=False)
    degree_bound: int = 0
    shortcut: bool = False

    @property
    def k(self) -> int:
        return len(self.modulator_order)


def substitute(
    csp: RootCspInstance, g: Graph, s: Modulator, spec: SigmaRhoSpec
) -> tuple[RootCspInstance, dict[int, EliminationEntry], Univariate]:
    """Rewrite ``csp`` over modulator variables only.

    Each non-modulator ``s_v`` becomes ``g(sum of s_u for u in N(v) & S)``,
    expanded multilinearly.
    """
    if not check_guard(spec, s.degree_bound):
        raise GuardViolationError(f"{spec} fails the offset guard for d={s.degree_bound}")
    if not verify_modulator(g, s.vertices, s.degree_bound):
        raise ValueError(f"not a degree-{s.degree_bound} modulator")
    interp = lagrange_g(offset_sets(spec, s.degree_bound))
    order = tuple(sorted(s.vertices))
    index = {v: i for i, v in enumerate(order)}
    mapping: dict[int, Polynomial] = {v: Polynomial.var(index[v]) for v in order}
    table: dict[int, EliminationEntry] = {}
    for v in range(g.n):
        if v in index:
            continue
        nbrs = tuple(u for u in g.neighbors(v) if u in index)
        table[v] = EliminationEntry(v, nbrs)
        mapping[v] = substitute_linear_sum(interp, [index[u] for u in nbrs])
    out = tuple(compose(c, mapping) for c in csp.constraints)
    deg = max((c.degree() for c in out), default=0)
    return RootCspInstance(len(order), out, deg), table, interp


def estimate_bits(csp: RootCspInstance) -> int:
    """Coefficient storage: numerator and denominator bits plus variable-index bits per term."""
    index_bits = max(1, (csp.variable_count - 1).bit_length())
    total = 0
    for c in csp.constraints:
        for m, v in c.terms.items():
            total += abs(v.numerator).bit_length() + v.denominator.bit_length() + len(m) * index_bits
    return total


def solve_by_guessing(g: Graph, s: Modulator, spec: SigmaRhoSpec) -> frozenset[int] | None:
    """Try every subset of S; the rest is forced by the offset sets.

    A vertex outside S whose S-neighbor count lands in P must be unselected,
    in Q selected, anywhere else the guess is infeasible.
    """
    po = offset_sets(spec, s.degree_bound)
    P, Q = set(po.P), set(po.Q)
    order = sorted(s.vertices)
    outside = [v for v in range(g.n) if v not in s.vertices]
    s_nbrs = {v: [u for u in g.adj[v] if u in s.vertices] for v in outside}
    for bits in product((0, 1), repeat=len(order)):
        chosen = {v for v, b in zip(order, bits) if b}
        ok = True
        for v in outside:
            y = sum(1 for u in s_nbrs[v] if u in chosen)
            if y in Q:
                chosen.add(v)
            elif y not in P:
                ok = False
                break
        if ok and is_sigma_rho_dominating(g, spec, chosen):
            return frozenset(chosen)
    return None


def kernelize(g: Graph, s: Modulator, spec: SigmaRhoSpec, shortcut: bool = True) -> KernelResult:
    """Full pipeline: build, eliminate, reduce.

    When ``shortcut`` is set and ``2^|S| <= n`` the instance is solved by
    guessing over S instead, and the result pins the found assignment (or is
    the unsatisfiable constraint ``1 = 0``).
    """
    _require_finite(spec)
    _require_nonempty(spec)
    d = s.degree_bound
    if not check_guard(spec, d):
        raise GuardViolationError(f"{spec} fails the offset guard for d={d}; no kernel")
    gamma = (d + 1) * (len(spec.sigma) + len(spec.rho)) - 1
    alpha = max(len(spec.sigma), len(spec.rho)) + 1
    k = len(s.vertices)

    base = build_csp(g, spec)
    substituted, table, interp = substitute(base, g, s, spec)
    order = tuple(sorted(s.vertices))
    used_shortcut = shortcut and 2**k <= g.n
    if used_shortcut:
        found = solve_by_guessing(g, s, spec)
        if found is None:
            cons: tuple[Polynomial, ...] = (Polynomial.constant(1),)
        else:
            cons = tuple(Polynomial.var(i) - (1 if v in found else 0) for i, v in enumerate(order))
        reduced = RootCspInstance(k, cons, max((c.degree() for c in cons), default=0))
    else:
        reduced = reduce_constraints(substituted)
    return KernelResult(
        csp=reduced,
        modulator_order=order,
        interpolant=interp,
        elimination_table=table,
        gamma=gamma,
        alpha=alpha,
        pre_substitution_degree=base.degree_bound,
        substituted_degree=substituted.degree_bound,
        constraints_before_reduction=len(substituted.constraints),
        bit_size_estimate=estimate_bits(reduced),
        graph=g,
        spec=spec,
        degree_bound=d,
        shortcut=used_shortcut,
    )


def lift_assignment(kr: KernelResult, tau_prime: Sequence[int]) -> frozenset[int]:
    """Extend an assignment over S to the whole graph via the interpolant."""
    if len(tau_prime) != kr.k:
        raise ValueError(f"expected {kr.k} values, got {len(tau_prime)}")
    value = {v: tau_prime[i] for i, v in enumerate(kr.modulator_order)}
    chosen = {v for v, x in value.items() if x}
    for v, entry in kr.elimination_table.items():
        y = sum(value[u] for u in entry.modulator_neighbors)
        fv = kr.interpolant(y)
        if fv not in (0, 1):
            raise LiftInconsistencyError(
                f"vertex {v}: interpolant at modulator-neighbor sum {y} is {fv}, not 0/1"
            )
        if fv == 1:
            chosen.add(v)
    if not is_sigma_rho_dominating(kr.graph, kr.spec, chosen):
        raise LiftInconsistencyError(f"lifted set {sorted(chosen)} is not {kr.spec}-dominating")
    return frozenset(chosen)

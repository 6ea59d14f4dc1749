"""(sigma, rho) specifications, validity checks, and exhaustive oracles."""

from __future__ import annotations

import bisect
import os
import re
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from .errors import CapExceededError, ParseError, SigmaRhoError
from .graph import Graph, WeightedGraph

CAP_ENV_VAR = "SIGMARHO_ORACLE_CAP"
DEFAULT_VERTEX_CAP = 24


def oracle_cap(default: int) -> int:
    """Cap for exhaustive enumeration, overridable through ``SIGMARHO_ORACLE_CAP``."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise SigmaRhoError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None


class Kind(Enum):
    FINITE = "finite"
    NATURALS = "nat"  # {0, 1, 2, ...}
    POSITIVE = "nat+"  # {1, 2, ...}


@dataclass(frozen=True)
class NumberSet:
    kind: Kind
    values: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind is Kind.FINITE:
            if any(v < 0 for v in self.values):
                raise ValueError("finite sets hold non-negative integers")
            if any(a >= b for a, b in zip(self.values, self.values[1:])):
                raise ValueError("finite set values must be strictly increasing")
        elif self.values:
            raise ValueError("infinite sets carry no explicit values")

    @classmethod
    def finite(cls, values: Iterable[int]) -> "NumberSet":
        return cls(Kind.FINITE, tuple(sorted(set(values))))

    @classmethod
    def naturals(cls) -> "NumberSet":
        return cls(Kind.NATURALS)

    @classmethod
    def positive(cls) -> "NumberSet":
        return cls(Kind.POSITIVE)

    @classmethod
    def parse(cls, text: str) -> "NumberSet":
        t = text.strip().lower()
        if t in ("nat", "n"):
            return cls.naturals()
        if t in ("nat+", "n*", "nat*"):
            return cls.positive()
        if t in ("", "{}"):
            return cls.finite(())
        try:
            return cls.finite(int(x) for x in t.strip("{}").split(","))
        except ValueError:
            raise ParseError(f"cannot parse number set {text!r}") from None

    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    def __contains__(self, i: int) -> bool:
        if self.kind is Kind.NATURALS:
            return i >= 0
        if self.kind is Kind.POSITIVE:
            return i >= 1
        j = bisect.bisect_left(self.values, i)
        return j < len(self.values) and self.values[j] == i

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("infinite set has no length")
        return len(self.values)

    def max(self) -> int:
        if not self.is_finite or not self.values:
            raise ValueError("max() needs a non-empty finite set")
        return self.values[-1]

    def __str__(self) -> str:
        if self.kind is Kind.FINITE:
            return ",".join(map(str, self.values)) if self.values else "{}"
        return self.kind.value


@dataclass(frozen=True)
class SigmaRhoSpec:
    sigma: NumberSet
    rho: NumberSet

    @classmethod
    def of(cls, sigma, rho) -> "SigmaRhoSpec":
        def conv(x):
            if isinstance(x, NumberSet):
                return x
            if isinstance(x, str):
                return NumberSet.parse(x)
            return NumberSet.finite(x)

        return cls(conv(sigma), conv(rho))

    @property
    def zero_in_rho(self) -> bool:
        """Flag: with 0 in rho the empty set is always a solution."""
        return 0 in self.rho

    @property
    def is_finite(self) -> bool:
        return self.sigma.is_finite and self.rho.is_finite

    def __str__(self) -> str:
        return f"sigma={self.sigma};rho={self.rho}"


_FIXED_PRESETS = {
    "efficient-dominating": ("0", "1"),
    "perfect-dominating": ("nat", "1"),
    "total-perfect-dominating": ("1", "1"),
    "independent-dominating": ("0", "nat+"),
    "weakly-perfect-dominating": ("0,1", "1"),
    "dominating-induced-matching": ("1", "nat+"),
}
_RANGE_PRESET = re.compile(r"^(total-)?\[(\d+),(\d+)\]-dominating$")

PRESET_NAMES = tuple(_FIXED_PRESETS) + ("[i,j]-dominating", "total-[i,j]-dominating")


def preset(name: str, i: int | None = None, j: int | None = None) -> SigmaRhoSpec:
    """Named (sigma, rho) problems.

    The two range rows take ``i <= j`` either as keyword arguments
    (``preset("[i,j]-dominating", i=1, j=2)``) or inline (``"[1,2]-dominating"``).
    """
    key = name.strip().lower()
    if key in _FIXED_PRESETS:
        return SigmaRhoSpec.of(*_FIXED_PRESETS[key])
    total = key.startswith("total-")
    if key in ("[i,j]-dominating", "total-[i,j]-dominating"):
        if i is None or j is None:
            raise SigmaRhoError(f"preset {name!r} needs i and j")
    else:
        m = _RANGE_PRESET.match(key)
        if not m:
            raise SigmaRhoError(f"unknown problem {name!r}; known: {', '.join(PRESET_NAMES)}")
        i, j = int(m.group(2)), int(m.group(3))
    if not 0 <= i <= j:
        raise SigmaRhoError("range presets need 0 <= i <= j")
    rng = NumberSet.finite(range(i, j + 1))
    return SigmaRhoSpec(rng if total else NumberSet.naturals(), rng)


# --------------------------------------------------------------------------
# validity
# --------------------------------------------------------------------------

def is_sigma_rho_dominating(g: Graph, spec: SigmaRhoSpec, d: Iterable[int]) -> bool:
    chosen = set(d)
    for v in range(g.n):
        count = len(g.adj[v] & chosen)
        if count not in (spec.sigma if v in chosen else spec.rho):
            return False
    return True


def _mask_checker(g: Graph, spec: SigmaRhoSpec):
    masks = g.masks()
    # membership tables up to max degree avoid repeated set lookups
    top = max((len(a) for a in g.adj), default=0)
    in_sigma = [i in spec.sigma for i in range(top + 1)]
    in_rho = [i in spec.rho for i in range(top + 1)]

    def valid(mask: int) -> bool:
        for v, m in enumerate(masks):
            c = (m & mask).bit_count()
            if (mask >> v) & 1:
                if not in_sigma[c]:
                    return False
            elif not in_rho[c]:
                return False
        return True

    return valid


@dataclass(frozen=True)
class DominationAnswer:
    exists: bool
    witness: frozenset[int] | None = None
    value: int | None = None  # size, or total weight for weighted problems

    def __post_init__(self):
        if self.exists != (self.witness is not None):
            raise ValueError("witness must be present exactly when a solution exists")

    @classmethod
    def no(cls) -> "DominationAnswer":
        return cls(False)


def _check_cap(n: int, cap: int | None):
    limit = oracle_cap(DEFAULT_VERTEX_CAP) if cap is None else cap
    if n > limit:
        raise CapExceededError(f"{n} vertices exceeds oracle cap {limit}")


def brute_force(
    g: Graph, spec: SigmaRhoSpec, budget: int | None = None, cap: int | None = None
) -> DominationAnswer:
    """Minimum-size valid set, enumerating subsets by size then lexicographically."""
    _check_cap(g.n, cap)
    valid = _mask_checker(g, spec)
    top = g.n if budget is None else min(budget, g.n)
    for size in range(top + 1):
        for combo in combinations(range(g.n), size):
            if valid(sum(1 << v for v in combo)):
                return DominationAnswer(True, frozenset(combo), size)
    return DominationAnswer.no()


def brute_force_weighted(
    wg: WeightedGraph, spec: SigmaRhoSpec, budget: int | None = None, cap: int | None = None
) -> DominationAnswer:
    """Minimum-weight valid set; ties go to the first set in size-then-lex order."""
    g, w = wg.graph, wg.weights
    _check_cap(g.n, cap)
    valid = _mask_checker(g, spec)
    best: tuple[int, tuple[int, ...]] | None = None
    for size in range(g.n + 1):
        for combo in combinations(range(g.n), size):
            weight = sum(w[v] for v in combo)
            if best is not None and weight >= best[0]:
                continue
            if budget is not None and weight > budget:
                continue
            if valid(sum(1 << v for v in combo)):
                best = (weight, combo)
    if best is None:
        return DominationAnswer.no()
    return DominationAnswer(True, frozenset(best[1]), best[0])


def closed_neighborhoods_partition(g: Graph, d: Iterable[int]) -> bool:
    """Perfect-code check: the closed neighborhoods of ``d`` partition V."""
    seen: set[int] = set()
    for v in d:
        closed = g.adj[v] | {v}
        if seen & closed:
            return False
        seen |= closed
    return len(seen) == g.n

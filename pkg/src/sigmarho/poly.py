"""Exact sparse polynomials over Q and the 0/1 polynomial-root CSP.

Monomials are tuples of variable indices in non-decreasing order; ``(0, 0, 2)``
is ``x0^2 * x2`` and ``()`` is the constant term. Arithmetic results are always
multilinear (repeated indices collapse), which is sound because every variable
ranges over {0, 1}. Non-multilinear input is still representable so that
:func:`multilinearize` has something to do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, lcm
from typing import Iterable, Mapping, Sequence

from .domination import oracle_cap
from .errors import CapExceededError, ParseError

DEFAULT_VARIABLE_CAP = 20

Monomial = tuple[int, ...]


def _ml(mono: Iterable[int]) -> Monomial:
    return tuple(sorted(set(mono)))


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                key = tuple(sorted(mono))
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, i: int, coeff=1) -> "Polynomial":
        return cls({(i,): coeff})

    @classmethod
    def linear_sum(cls, variables: Iterable[int], constant=0) -> "Polynomial":
        terms: dict[Monomial, Fraction] = {}
        for v in variables:
            terms[(v,)] = terms.get((v,), Fraction(0)) + 1
        terms[()] = Fraction(constant)
        return cls(terms)

    # -- algebra ---------------------------------------------------------
    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return _coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = _coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _ml(m1 + m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        result = Polynomial.constant(1)
        for _ in range(e):
            result = result * self
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial()
        return Polynomial._raw({m: v * c for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        return {v for m in self.terms for v in m}

    def is_multilinear(self) -> bool:
        return all(len(set(m)) == len(m) for m in self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"


def _coerce(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial.constant(x)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def scale(p: Polynomial, c) -> Polynomial:
    return p.scale(c)


def multilinearize(p: Polynomial) -> Polynomial:
    """Collapse every exponent above 1; preserves values on {0,1}^n."""
    out: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        key = _ml(m)
        out[key] = out.get(key, 0) + c
    return Polynomial(out)


def evaluate(p: Polynomial, assignment: Sequence[int] | Mapping[int, int]) -> Fraction:
    """Exact value at a 0/1 (or any integer) assignment."""
    total = Fraction(0)
    for m, c in p.terms.items():
        term = c
        for v in m:
            try:
                x = assignment[v]
            except (IndexError, KeyError):
                raise KeyError(f"assignment has no value for x{v}") from None
            if not x:
                term = 0
                break
            term *= x
        total += term
    return total


# --------------------------------------------------------------------------
# univariate helpers (interpolants)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Univariate:
    """Dense univariate polynomial, coefficients in ascending degree."""

    coeffs: tuple[Fraction, ...]

    @classmethod
    def of(cls, coeffs: Iterable) -> "Univariate":
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        return cls(tuple(cs))

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else 0

    def __add__(self, other: "Univariate") -> "Univariate":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Univariate.of(x + y for x, y in zip(a, b))

    def __mul__(self, other) -> "Univariate":
        if not isinstance(other, Univariate):
            return Univariate.of(c * other for c in self.coeffs)
        out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Univariate.of(out)

    __rmul__ = __mul__


def substitute_linear_sum(g: Univariate, variables: Sequence[int]) -> Polynomial:
    """Multilinear form of ``g(x_a + x_b + ...)`` over 0/1 variables.

    A function of 0/1 inputs that depends only on how many are set has
    coefficient ``Delta^m g(0)`` on every monomial of ``m`` of those variables
    (Moebius inversion over subsets); differences vanish above ``deg g``.
    """
    vs = sorted(set(variables))
    if len(vs) != len(variables):
        raise ValueError("linear form must use distinct variables")
    values = [g(i) for i in range(len(vs) + 1)]
    terms: dict[Monomial, Fraction] = {}
    top = min(len(vs), g.degree())
    for m in range(top + 1):
        delta = sum((-1) ** (m - i) * comb(m, i) * values[i] for i in range(m + 1))
        if delta:
            for mono in combinations(vs, m):
                terms[mono] = Fraction(delta)
    return Polynomial._raw(terms)


def _to_int_masks(p: Polynomial) -> tuple[dict[int, int], int]:
    den = lcm(*(c.denominator for c in p.terms.values())) if p.terms else 1
    return {sum(1 << i for i in m): int(c * den) for m, c in p.terms.items()}, den


def _mask_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 | m2
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _mask_to_mono(mask: int) -> Monomial:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def compose(p: Polynomial, mapping: Mapping[int, Polynomial]) -> Polynomial:
    """Replace each variable ``i`` of ``p`` by ``mapping[i]`` and multilinearize.

    Variables absent from ``mapping`` are kept as they are. Works on bitmask
    monomials with denominators cleared, converting back to Q at the end.
    """
    factors: dict[int, tuple[dict[int, int], int]] = {}

    def factor(v: int):
        hit = factors.get(v)
        if hit is None:
            q = mapping.get(v)
            hit = ({1 << v: 1}, 1) if q is None else _to_int_masks(q)
            factors[v] = hit
        return hit

    cache: dict[Monomial, tuple[dict[int, int], int]] = {(): ({0: 1}, 1)}

    def prod_of(mono: Monomial):
        hit = cache.get(mono)
        if hit is None:
            head, den = prod_of(mono[:-1])
            f, fden = factor(mono[-1])
            hit = (_mask_mul(head, f), den * fden)
            cache[mono] = hit
        return hit

    pieces = []
    for mono, c in p.terms.items():
        prod, den = prod_of(_ml(mono))
        pieces.append((c / den, prod))
    common = lcm(*(c.denominator for c, _ in pieces)) if pieces else 1
    acc: dict[int, int] = {}
    for c, prod in pieces:
        scaled = int(c * common)
        for m, v in prod.items():
            acc[m] = acc.get(m, 0) + scaled * v
    return Polynomial._raw(
        {_mask_to_mono(m): Fraction(v, common) for m, v in acc.items() if v}
    )


# --------------------------------------------------------------------------
# CSP instances
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RootCspInstance:
    variable_count: int
    constraints: tuple[Polynomial, ...]
    degree_bound: int

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for k, c in enumerate(self.constraints):
            if c.degree() > self.degree_bound:
                raise ValueError(f"constraint {k} has degree {c.degree()} > bound {self.degree_bound}")
            bad = [v for v in c.variables() if not 0 <= v < self.variable_count]
            if bad:
                raise ValueError(f"constraint {k} uses unknown variable x{bad[0]}")


def _compile(c: Polynomial) -> list[tuple[int, int]]:
    # integer coefficients after clearing denominators; zero-ness is unchanged
    den = lcm(*(v.denominator for v in c.terms.values())) if c.terms else 1
    return [(int(v * den), sum(1 << i for i in m)) for m, v in c.terms.items()]


def _satisfied(compiled: list[list[tuple[int, int]]], mask: int) -> bool:
    for terms in compiled:
        if sum(c for c, m in terms if m & mask == m):
            return False
    return True


def _assignment_masks(n: int):
    """Masks in lexicographic order of (x0, x1, ..., x_{n-1}), x0 most significant."""
    for bits in product((0, 1), repeat=n):
        yield sum(1 << i for i, b in enumerate(bits) if b), bits


def satisfiable_brute(inst: RootCspInstance, cap: int | None = None) -> tuple[int, ...] | None:
    """First satisfying 0/1 assignment in lexicographic order, or None."""
    limit = oracle_cap(DEFAULT_VARIABLE_CAP) if cap is None else cap
    if inst.variable_count > limit:
        raise CapExceededError(f"{inst.variable_count} variables exceeds oracle cap {limit}")
    compiled = [_compile(c) for c in inst.constraints]
    for mask, bits in _assignment_masks(inst.variable_count):
        if _satisfied(compiled, mask):
            return bits
    return None


def all_solutions(inst: RootCspInstance, cap: int | None = None) -> list[tuple[int, ...]]:
    limit = oracle_cap(DEFAULT_VARIABLE_CAP) if cap is None else cap
    if inst.variable_count > limit:
        raise CapExceededError(f"{inst.variable_count} variables exceeds oracle cap {limit}")
    compiled = [_compile(c) for c in inst.constraints]
    return [bits for mask, bits in _assignment_masks(inst.variable_count) if _satisfied(compiled, mask)]


def _mono_key(m: Monomial):
    return (len(m), m)


def reduce_constraints(inst: RootCspInstance) -> RootCspInstance:
    """Keep the constraints whose multilinear coefficient vectors are independent.

    Rows are scanned in list order and reduced against an echelon basis keyed
    by leading monomial; a row that reduces to zero is a rational combination
    of earlier kept rows, so every common root of the kept rows is a root of it.
    """
    basis: dict[Monomial, dict[Monomial, Fraction]] = {}
    kept = []
    for c in inst.constraints:
        row = dict(multilinearize(c).terms)
        while row:
            lead = max(row, key=_mono_key)
            pivot_row = basis.get(lead)
            if pivot_row is None:
                break
            f = row[lead]
            for m, v in pivot_row.items():
                s = row.get(m, 0) - f * v
                if s:
                    row[m] = s
                else:
                    row.pop(m, None)
        if row:
            lead = max(row, key=_mono_key)
            inv = 1 / row[lead]
            basis[lead] = {m: v * inv for m, v in row.items()}
            kept.append(c)
    return RootCspInstance(inst.variable_count, tuple(kept), inst.degree_bound)


def monomial_basis_size(n: int, d: int) -> int:
    """Number of multilinear monomials of degree <= d in n variables."""
    return sum(comb(n, i) for i in range(min(n, d) + 1))


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for m in sorted(p.terms, key=_mono_key):
        c = _fmt_coeff(p.terms[m])
        parts.append(c if not m else c + " * " + " ".join(f"x{i}" for i in m))
    return " + ".join(parts)


def parse_polynomial(text: str, line: int | None = None) -> Polynomial:
    terms: dict[Monomial, Fraction] = {}
    text = text.strip()
    if text == "0":
        return Polynomial()
    for chunk in text.split(" + "):
        coeff_txt, star, vars_txt = chunk.partition("*")
        try:
            c = Fraction(coeff_txt.strip())
            mono = tuple(int(tok[1:]) for tok in vars_txt.split() if tok.startswith("x"))
            if len(mono) != len(vars_txt.split()):
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad term {chunk!r}", line) from None
        if star and not mono:
            raise ParseError(f"term {chunk!r} has '*' but no variables", line)
        terms[tuple(sorted(mono))] = terms.get(tuple(sorted(mono)), 0) + c
    return Polynomial(terms)


def format_csp(inst: RootCspInstance) -> str:
    lines = [f"csp {inst.variable_count} {inst.degree_bound} {len(inst.constraints)}"]
    lines += [format_polynomial(c) for c in inst.constraints]
    return "\n".join(lines) + "\n"


def parse_csp(text: str) -> RootCspInstance:
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise ParseError("empty CSP text")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "csp":
        raise ParseError("header must be 'csp <variables> <degree> <constraints>'", lineno)
    try:
        n, d, m = (int(x) for x in parts[1:])
    except ValueError:
        raise ParseError("non-integer header field", lineno) from None
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} constraints, found {len(body)}", lineno)
    cons = tuple(parse_polynomial(ln, i) for i, ln in body)
    try:
        return RootCspInstance(n, cons, d)
    except ValueError as exc:
        raise ParseError(str(exc)) from None

import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from sigmarho.errors import CapExceededError, ParseError
from sigmarho.poly import (
    Polynomial,
    RootCspInstance,
    Univariate,
    all_solutions,
    compose,
    evaluate,
    format_csp,
    format_polynomial,
    monomial_basis_size,
    multilinearize,
    parse_csp,
    parse_polynomial,
    reduce_constraints,
    satisfiable_brute,
    substitute_linear_sum,
)

x = Polynomial.var


def test_arithmetic_examples():
    assert (x(0) + x(1)) * (x(0) - x(1)) == x(0) - x(1)
    p = 3 * x(0) * x(2) + 1
    assert (p + (-1) * p).is_zero()
    assert Polynomial.constant(3) * Polynomial.constant(Fraction(1, 3)) == 1


def test_multilinearize_examples():
    assert multilinearize(Polynomial({(0, 0, 0): 1})) == x(0)
    assert multilinearize(Polynomial({(0, 0, 1, 1): 1, (): 2})) == x(0) * x(1) + 2
    p = x(0) * x(1) - 4 * x(2)
    assert multilinearize(p) == p


def test_evaluate_examples():
    assert evaluate(1 - x(0), {0: 1}) == 0
    assert evaluate((1 - x(0) - x(1)) ** 2 + x(2), (1, 1, 0)) == 1
    assert evaluate(Polynomial(), {}) == 0
    with pytest.raises(KeyError):
        evaluate(x(3), {0: 1})


raw_polys = st.dictionaries(
    st.lists(st.integers(0, 3), max_size=4).map(lambda m: tuple(sorted(m))),
    st.fractions(min_value=-20, max_value=20, max_denominator=5),
    max_size=6,
).map(Polynomial)


@given(raw_polys)
def test_multilinearize_agrees_on_cube(p):
    q = multilinearize(p)
    assert q.is_multilinear()
    for a in product((0, 1), repeat=4):
        assert evaluate(p, a) == evaluate(q, a)


@given(raw_polys, raw_polys)
def test_product_is_pointwise(p, q):
    for a in product((0, 1), repeat=4):
        assert evaluate(p * q, a) == evaluate(p, a) * evaluate(q, a)
        assert evaluate(p + q, a) == evaluate(p, a) + evaluate(q, a)


@given(st.lists(st.fractions(max_denominator=4), min_size=1, max_size=5), st.lists(st.integers(0, 5), max_size=5, unique=True))
def test_substitute_linear_sum(coeffs, variables):
    g = Univariate.of(coeffs)
    p = substitute_linear_sum(g, variables)
    for a in product((0, 1), repeat=6):
        assert evaluate(p, a) == g(sum(a[v] for v in variables))


@settings(max_examples=50)
@given(raw_polys, st.lists(raw_polys, min_size=4, max_size=4))
def test_compose_matches_pointwise(p, images):
    mapping = {i: multilinearize(q) for i, q in enumerate(images)}
    out = compose(p, mapping)
    for a in product((0, 1), repeat=4):
        inner = {i: evaluate(mapping[i], a) for i in range(4)}
        # compose multilinearizes, so only compare where the images are 0/1
        if all(v in (0, 1) for v in inner.values()):
            assert evaluate(out, a) == evaluate(p, inner)


def test_satisfiable_examples():
    assert satisfiable_brute(RootCspInstance(1, (x(0) - 1,), 1)) == (1,)
    assert satisfiable_brute(RootCspInstance(1, (x(0), x(0) - 1), 1)) is None
    assert satisfiable_brute(RootCspInstance(3, (), 0)) == (0, 0, 0)
    with pytest.raises(CapExceededError):
        satisfiable_brute(RootCspInstance(5, (), 0), cap=4)


def test_lexicographic_first():
    # x0 + x1 - 1 = 0 has solutions (0,1) and (1,0)
    inst = RootCspInstance(2, (x(0) + x(1) - 1,), 1)
    assert satisfiable_brute(inst) == (0, 1)
    assert all_solutions(inst) == [(0, 1), (1, 0)]


def test_instance_validation():
    with pytest.raises(ValueError):
        RootCspInstance(2, (x(0) * x(1),), 1)
    with pytest.raises(ValueError):
        RootCspInstance(1, (x(1),), 1)


def test_reduce_examples():
    cons = (x(0) + x(1), 2 * x(0) + 2 * x(1), x(0) - x(1))
    red = reduce_constraints(RootCspInstance(2, cons, 1))
    assert red.constraints == (cons[0], cons[2])
    single = RootCspInstance(2, (x(0) * x(1) - 1,), 2)
    assert reduce_constraints(single) == single


def random_csp(r: random.Random, n: int, d: int, m: int) -> RootCspInstance:
    cons = []
    for _ in range(m):
        terms = {}
        for _ in range(r.randint(1, 4)):
            mono = tuple(sorted(r.sample(range(n), r.randint(0, min(d, n)))))
            terms[mono] = r.randint(-3, 3)
        cons.append(Polynomial(terms))
    return RootCspInstance(n, tuple(cons), d)


def test_reduce_preserves_solutions(rng):
    for _ in range(60):
        n, d = rng.randint(1, 7), rng.randint(1, 3)
        inst = random_csp(rng, n, d, rng.randint(0, 12))
        red = reduce_constraints(inst)
        assert all_solutions(red) == all_solutions(inst)
        assert len(red.constraints) <= monomial_basis_size(n, d) <= n**d + 1
        it = iter(inst.constraints)
        assert all(any(c is c2 for c2 in it) for c in red.constraints)


def test_basis_size():
    assert monomial_basis_size(4, 2) == 1 + 4 + 6
    assert monomial_basis_size(2, 5) == 4


def test_univariate():
    g = Univariate.of([1, -1])
    assert g(0) == 1 and g(1) == 0 and g.degree() == 1
    assert (g * g)(3) == 4 and (g + g)(2) == -2


def test_text_round_trip(rng):
    for _ in range(30):
        inst = random_csp(rng, 5, 3, 4)
        inst = RootCspInstance(5, tuple(c.scale(Fraction(1, rng.randint(1, 6))) for c in inst.constraints), 3)
        assert parse_csp(format_csp(inst)) == inst
    assert format_polynomial(Polynomial()) == "0"
    assert format_polynomial(Fraction(1, 2) * x(0) * x(3) - 2) == "-2 + 1/2 * x0 x3"


@pytest.mark.parametrize(
    "text",
    ["csp 2 1 1\n3 * y1\n", "csp 2 1 2\nx0\n", "cps 1 1 0\n", "csp 1 1 1\n1 * x0 x0 x5\n"],
)
def test_csp_parse_errors(text):
    with pytest.raises(ParseError):
        parse_csp(text)


def test_parse_polynomial():
    assert parse_polynomial("1 + -1 * x0") == 1 - x(0)
    assert parse_polynomial("0").is_zero()

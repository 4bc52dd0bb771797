from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nambukit.literals import LiteralSyntaxError, format_poly, parse_poly, parse_rational
from nambukit.ratpoly import (
    DimensionError,
    Poly,
    RatMatrix,
    as_rational,
    monomials_up_to,
    subspace_intersect,
    subspace_span,
    subspace_sum,
)

x0, x1, x2 = (Poly.var(3, k) for k in range(3))


def test_basic_arithmetic():
    p = (x0 + x1) * (x0 - x1)
    assert p == x0 ** 2 - x1 ** 2
    assert (p + 1)([2, 1, 0]) == 4
    assert (2 * x0).scale(Fraction(1, 2)) == x0
    assert (x0 - x0).is_zero()


def test_partial_and_degree():
    p = parse_poly("3/2*x0^2*x1 - x2 + 1", 3)
    assert p.partial(0) == parse_poly("3*x0*x1", 3)
    assert p.partial(2) == Poly.const(3, -1)
    assert p.degree() == 3
    assert not p.is_homogeneous(3)
    assert Poly.zero(3).degree() == -1


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        x0 * 0.5


def test_mismatched_variables():
    with pytest.raises(DimensionError):
        x0 + Poly.var(2, 0)


def test_literal_round_trip_examples():
    for text in ["0", "1", "-x1", "3/2*x0^2*x1 - x2 + 1", "x0*x1*x2 - 1/3"]:
        assert format_poly(parse_poly(text, 3)) == text


def test_literal_errors_carry_column():
    with pytest.raises(LiteralSyntaxError) as err:
        parse_poly("x0 + + x1", 3)
    assert err.value.column >= 1
    with pytest.raises(LiteralSyntaxError):
        parse_poly("x5", 3)
    with pytest.raises(LiteralSyntaxError):
        parse_rational("1/0")


def test_monomial_count():
    # C(n + d, d) monomials of degree <= d in n variables
    assert len(monomials_up_to(3, 2)) == 10
    assert len(monomials_up_to(4, 3)) == 35


def test_rref_and_nullspace():
    a = RatMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert a.rank() == 2
    for v in a.nullspace():
        assert all(sum(r[i] * v[i] for i in range(3)) == 0 for r in a.entries)
    assert len(a.nullspace()) == 1


def test_subspace_operations():
    e = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    f = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert len(subspace_span(e)) == 3
    assert len(subspace_sum(e, f)) == 4
    inter = subspace_intersect(e, f)
    assert len(inter) == 2
    assert all(v[0] == 0 and v[3] == 0 for v in inter)


small = st.integers(-4, 4)
polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=5).map(
    lambda d: Poly(2, d))


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p


@given(polys, polys)
def test_product_rule(p, q):
    for k in range(2):
        assert (p * q).partial(k) == p.partial(k) * q + p * q.partial(k)


@given(polys, st.tuples(small, small))
def test_evaluation_is_a_homomorphism(p, pt):
    q = p * p + p
    assert q(pt) == p(pt) ** 2 + p(pt)


@given(polys)
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), 2) == p

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nambukit.exterior import (
    DegreeError,
    DiffForm,
    MultiVectorField,
    contract_forms,
    contract_functions,
    contract_once,
    differential,
    evaluate_mv,
    exterior_derivative,
    form_wedge,
    lie_derivative,
    mv_wedge,
    pairing,
    schouten,
    support_subspace,
    tangent_lift,
    tangent_lift_function,
)
from nambukit.literals import parse_poly
from nambukit.ratpoly import Poly, mat_rank
from nambukit.sampling import make_rng, random_form, random_multivector, random_poly


def mv(m, *terms):
    return MultiVectorField(m, len(terms[0][0]), [(i, parse_poly(c, m)) for i, c in terms])


def form(m, *terms):
    return DiffForm(m, len(terms[0][0]), [(i, parse_poly(c, m)) for i, c in terms])


def sg(k):
    return -1 if k % 2 else 1


D = lambda m, *idx: MultiVectorField.basis(m, idx)  # noqa: E731

SO3 = mv(3, ((0, 1), "x2"), ((1, 2), "x0"), ((0, 2), "-x1"))


def test_wedge_examples():
    assert mv_wedge(D(3, 0), D(3, 1, 2)) == D(3, 0, 1, 2)
    assert not mv_wedge(D(3, 0), D(3, 0)).terms
    assert mv_wedge(mv(3, ((1,), "x0")), D(3, 0)) == mv(3, ((0, 1), "-x0"))


def test_unsorted_index_is_canonicalized_with_sign():
    assert MultiVectorField(3, 2, [((1, 0), Poly.const(3, 1))]) == D(3, 0, 1).scale(-1)
    with pytest.raises(DegreeError):
        MultiVectorField(2, 3, [])


def test_contraction_examples():
    dx = lambda m, j: DiffForm.basis(m, (j,))  # noqa: E731
    assert contract_once(dx(2, 0), D(2, 0, 1)) == D(2, 1)
    assert contract_once(dx(2, 1), D(2, 0, 1)) == D(2, 0).scale(-1)
    # hand expansion: i(dx2)(d0^d2^d3) = -(d0^d3), the dx2 slot is second
    assert contract_once(dx(4, 2), D(4, 0, 2, 3)) == D(4, 0, 3).scale(-1)


def test_contract_functions_matches_determinant():
    lam = D(3, 0, 1, 2)
    xs = [Poly.var(3, k) for k in range(3)]
    assert contract_functions(lam, xs).as_function() == 1
    assert contract_functions(lam, [xs[1], xs[0], xs[2]]).as_function() == -1
    assert not contract_functions(lam, [xs[0], xs[0]]).terms


def test_pairing_examples():
    dx = [DiffForm.basis(3, (j,)) for j in range(3)]
    assert pairing(D(3, 0, 1), [dx[0], dx[1]]) == 1
    assert pairing(D(3, 0, 1), [dx[1], dx[0]]) == -1
    assert pairing(mv(3, ((0, 1), "x2")), [dx[0], dx[1]]) == Poly.var(3, 2)


def test_exterior_derivative_examples():
    assert exterior_derivative(form(3, ((1,), "x0"))) == DiffForm.basis(3, (0, 1))
    f = parse_poly("x0^2*x1 - x2", 3)
    assert not exterior_derivative(differential(f)).terms
    alpha = form(2, ((1,), "1/2*x0"), ((0,), "-1/2*x1"))
    assert exterior_derivative(alpha) == DiffForm.basis(2, (0, 1))


def test_schouten_examples():
    dx = D(1, 0)
    assert schouten(dx, mv(1, ((0,), "x0"))) == dx
    assert not schouten(D(3, 0, 1, 2), D(3, 0, 1, 2)).terms
    assert not schouten(SO3, SO3).terms


def lie_bracket_oracle(x, y):
    """[X, Y]^j = X(Y^j) - Y(X^j) written out directly."""
    m = x.m
    xc = [x.coeff((i,)) for i in range(m)]
    yc = [y.coeff((i,)) for i in range(m)]
    terms = []
    for j in range(m):
        c = sum((xc[i] * yc[j].partial(i) - yc[i] * xc[j].partial(i) for i in range(m)), Poly.zero(m))
        terms.append(((j,), c))
    return MultiVectorField(m, 1, terms)


@given(st.integers(0, 10**6))
def test_schouten_on_vectors_is_lie_bracket(seed):
    rng = make_rng(seed)
    x = random_multivector(3, 1, rng, coeff_degree=2)
    y = random_multivector(3, 1, rng, coeff_degree=2)
    assert schouten(x, y) == lie_bracket_oracle(x, y)


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_schouten_with_vector_is_lie_derivative(seed, q):
    rng = make_rng(seed)
    x = random_multivector(3, 1, rng, coeff_degree=2)
    a = random_multivector(3, q, rng, coeff_degree=2)
    assert schouten(x, a) == lie_derivative(x, a)


def test_lie_derivative_examples():
    assert lie_derivative(D(3, 0), form(3, ((1,), "x0"))) == DiffForm.basis(3, (1,))
    assert lie_derivative(mv(3, ((0,), "x1")), Poly.var(3, 0)) == Poly.var(3, 1)
    assert not lie_derivative(D(3, 0), D(3, 1, 2)).terms


def test_tangent_lift_examples():
    lifted = tangent_lift(mv(1, ((0,), "x0")))
    assert lifted == mv(2, ((0,), "x0"), ((1,), "x1"))
    # d_T(d0^d1) = d0^d(x1 dot) + d(x0 dot)^d1
    assert tangent_lift(D(2, 0, 1)) == D(4, 0, 3) + D(4, 2, 1)
    assert not tangent_lift(MultiVectorField.zero(2, 2)).terms
    assert tangent_lift_function(Poly.var(2, 0)) == Poly.var(4, 2)
    assert tangent_lift_function(Poly.const(2, 5)).is_zero()
    assert tangent_lift_function(parse_poly("x0*x1", 2)) == parse_poly("x2*x1 + x0*x3", 4)


def test_support_and_evaluation():
    assert mat_rank(support_subspace(D(4, 0, 1))) == 2
    s = support_subspace(D(4, 0, 1) + D(4, 2, 3))
    assert mat_rank(s) == 4
    assert mat_rank(support_subspace(D(4, 0, 1).scale(Fraction(-7, 3)))) == 2
    assert evaluate_mv(mv(3, ((0, 1), "x2")), [0, 0, 2]) == D(3, 0, 1).scale(2)
    assert evaluate_mv(SO3, [0, 0, 1]) == D(3, 0, 1)
    assert not evaluate_mv(SO3, [0, 0, 0]).terms


@given(st.integers(0, 10**6), st.integers(0, 2), st.integers(0, 2))
def test_wedge_graded_commutative(seed, p, q):
    rng = make_rng(seed)
    a = random_multivector(4, p, rng)
    b = random_multivector(4, q, rng)
    assert mv_wedge(a, b) == mv_wedge(b, a).scale(sg(p * q))
    fa, fb = random_form(4, p, rng), random_form(4, q, rng)
    assert form_wedge(fa, fb) == form_wedge(fb, fa).scale(sg(p * q))


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_double_contraction_vanishes(seed, p):
    rng = make_rng(seed)
    a = random_multivector(4, p, rng, coeff_degree=2)
    w = random_form(4, 1, rng, coeff_degree=2)
    assert not contract_once(w, contract_once(w, a)).terms


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_d_squared_vanishes(seed, p):
    rng = make_rng(seed)
    w = random_form(4, p, rng, coeff_degree=3)
    assert not exterior_derivative(exterior_derivative(w)).terms


@given(st.integers(0, 10**6))
def test_contract_forms_of_differentials_is_contract_functions(seed):
    rng = make_rng(seed)
    lam = random_multivector(3, 3, rng, coeff_degree=1)
    fs = [random_poly(3, 2, rng, 3) for _ in range(2)]
    assert contract_forms(lam, [differential(f) for f in fs]) == contract_functions(lam, fs)


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_tangent_lift_commutes_with_contraction(seed, p):
    rng = make_rng(seed)
    lam = random_multivector(3, p, rng, coeff_degree=2)
    f = random_poly(3, 2, rng, 4)
    left = contract_functions(tangent_lift(lam), [tangent_lift_function(f)])
    assert left == tangent_lift(contract_functions(lam, [f]))


def test_coordinate_contraction_table():
    """Contracting by coordinate differentials picks out coefficients with signs."""
    lam = SO3
    for i, j in itertools.permutations(range(3), 2):
        value = contract_functions(lam, [Poly.var(3, i), Poly.var(3, j)]).as_function()
        assert value == lam.coeff((i, j))


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_support_matches_contraction_oracle(seed, p):
    rng = make_rng(seed)
    lam = random_multivector(5, p, rng, coeff_degree=0, max_terms=4)
    vectors = []
    for combo in itertools.combinations(range(5), p - 1):
        v = lam
        for j in combo:
            v = contract_once(DiffForm.basis(5, (j,)), v)
        if v.terms:
            vectors.append([v.coeff((k,)).constant_value() for k in range(5)])
    assert mat_rank(support_subspace(lam)) == mat_rank(vectors)
    assert mat_rank(support_subspace(lam) + vectors) == mat_rank(vectors)

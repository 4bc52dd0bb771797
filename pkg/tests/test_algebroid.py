import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nambukit.algebroid import (
    AlgebroidSpec,
    DualVars,
    NotAnAlgebroidTensor,
    Section,
    algebroid_from_filippov_tensor,
    anchor_apply,
    bracket_sections,
    check_axiom_anchor,
    check_axiom_leibniz,
    check_fi_sections,
    example3_build,
    example4_build,
    filippov_tensor_of,
    iota,
    random_section,
)
from nambukit.exterior import MultiVectorField
from nambukit.filippov import NAryStructure, heisenberg, so3
from nambukit.literals import parse_poly
from nambukit.nambu import nambu_bracket
from nambukit.ratpoly import Poly
from nambukit.sampling import make_rng


def sec(m, *texts):
    return Section([parse_poly(t, m) for t in texts])


EX3 = example3_build(so3(), Poly.var(3, 0))
EX4 = example4_build(2, 3)


def frame(m, r, i):
    return Section([Poly.const(m, int(k == i)) for k in range(r)])


def test_iota():
    dual = DualVars(3, 3)
    assert iota(frame(3, 3, 0)) == Poly.var(6, dual.xi(0))
    assert iota(sec(3, "0", "x0", "0")) == Poly.var(6, 0) * Poly.var(6, 4)
    assert iota(Section.zero(3, 3)).is_zero()


def test_example3_frame_brackets():
    # [e0, e1] = g e2 with g = x0
    assert bracket_sections(EX3, [frame(3, 3, 0), frame(3, 3, 1)]) == sec(3, "0", "0", "x0")
    assert bracket_sections(EX3, [frame(3, 3, 1), frame(3, 3, 0)]) == sec(3, "0", "0", "-x0")
    assert not anchor_apply(EX3, [sec(3, "x1", "1", "x2^2")]).terms


def test_example4_frame_and_anchor():
    frames = [frame(3, 3, i) for i in range(3)]
    for idx in itertools.combinations(range(3), 3):
        assert bracket_sections(EX4, [frames[i] for i in idx]).is_zero()
    assert anchor_apply(EX4, frames[:2]) == MultiVectorField.basis(3, (0,))
    assert not anchor_apply(EX4, [frames[1], frames[1]]).terms


def example4_display_oracle(n, ys):
    """Signed-permutation sum with d/dx_0 of the left-out section, as displayed."""
    m = ys[0].m
    out = [Poly.zero(m) for _ in range(m)]
    for k in range(n + 1):
        rest = ys[:k] + ys[k + 1:]
        det = Poly.zero(m)
        for perm in itertools.permutations(range(n)):
            inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
            term = Poly.const(m, -1 if inv % 2 else 1)
            for row, col in zip(rest, perm):
                term = term * row[col]
            det = det + term
        # 1-based sign (-1)^(k+n+1) becomes (-1)^(k+n) with 0-based k
        sign = -1 if (k + n) % 2 else 1
        for i in range(m):
            out[i] = out[i] + det * ys[k][i].partial(0).scale(sign)
    return Section(out)


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_example4_matches_display(seed):
    rng = make_rng(seed)
    ys = [random_section(EX4, rng, 2) for _ in range(3)]
    assert bracket_sections(EX4, ys) == example4_display_oracle(2, ys)


def test_bracket_is_antisymmetric():
    rng = make_rng(5)
    ys = [random_section(EX4, rng, 2) for _ in range(3)]
    swapped = [ys[1], ys[0], ys[2]]
    assert bracket_sections(EX4, ys) == bracket_sections(EX4, swapped).scale(-1)
    with pytest.raises(ValueError):
        bracket_sections(EX4, ys[:2])


@pytest.mark.parametrize("spec", [EX3, EX4, example3_build(heisenberg(), parse_poly("x1 + 2", 3))],
                         ids=["example3-so3", "example4", "example3-heisenberg"])
def test_constructed_specs_pass_axioms(spec):
    assert check_axiom_leibniz(spec, samples=8).passed
    assert check_axiom_anchor(spec, samples=8).passed
    assert check_fi_sections(spec, samples=8).passed


def test_example3_trivial_g():
    assert all(c.is_zero() for c in example3_build(so3(), Poly.zero(3)).bracket_sc.values())
    spec = example3_build(so3(), Poly.const(3, 1))
    assert bracket_sections(spec, [frame(3, 3, 1), frame(3, 3, 2)]) == frame(3, 3, 0)


def test_negative_controls():
    stripped = AlgebroidSpec(EX4.m, EX4.r, EX4.n, EX4.bracket_sc, {})
    rep = check_axiom_leibniz(EX4, anchor=lambda xs: anchor_apply(stripped, xs))
    assert not rep.passed and rep.witness["kind"] == "leibniz"
    rep = check_axiom_anchor(EX4, anchor=lambda xs: anchor_apply(EX4, xs).scale(-1))
    assert not rep.passed and rep.witness["kind"] == "anchor"
    c = dict(so3().c)
    c[((0, 1), 0)] = 1
    broken = example3_build(NAryStructure(2, 3, c), Poly.var(3, 0))
    rep = check_fi_sections(broken)
    assert not rep.passed and rep.witness["kind"] == "fi-sections"


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_iota_intertwines_brackets(seed):
    rng = make_rng(seed)
    for spec in (EX3, EX4):
        lam = filippov_tensor_of(spec)
        dual = DualVars(spec.m, spec.r)
        ys = [random_section(spec, rng, 2) for _ in range(spec.n)]
        assert iota(bracket_sections(spec, ys), dual) == nambu_bracket(lam, [iota(y, dual) for y in ys])


def test_tensor_correspondence():
    lam = filippov_tensor_of(EX4)
    expected = MultiVectorField(6, 3, [((3, 4, 0), Poly.const(6, 1))])
    assert lam == expected
    dual = DualVars(3, 3)
    for spec in (EX3, EX4, example4_build(1, 2)):
        d = DualVars(spec.m, spec.r)
        assert algebroid_from_filippov_tensor(filippov_tensor_of(spec), d) == spec
    # constant coefficients give {xi0, xi1, xi2} = 1, which is not fibre-linear
    with pytest.raises(NotAnAlgebroidTensor):
        algebroid_from_filippov_tensor(MultiVectorField.basis(6, (3, 4, 5)), dual)


def test_non_linear_tensor_rejected():
    dual = DualVars(1, 2)
    lam = MultiVectorField(3, 2, [((1, 2), Poly.var(3, 1) ** 2)])
    with pytest.raises(NotAnAlgebroidTensor) as err:
        algebroid_from_filippov_tensor(lam, dual)
    assert err.value.witness["index"] == [1, 2]

"""Regenerate the shipped fixtures in src/nambukit/fixtures.

Run from the repository root::

    python3 tools/make_fixtures.py
"""

from pathlib import Path

from nambukit import algebroid as abx
from nambukit import filippov as fil
from nambukit.documents import Document, serialize_document
from nambukit.exterior import DiffForm, MultiVectorField
from nambukit.literals import parse_poly
from nambukit.ratpoly import Poly

OUT = Path(__file__).resolve().parent.parent / "src" / "nambukit" / "fixtures"


def mv(m, terms):
    return MultiVectorField(m, len(terms[0][0]), [(idx, parse_poly(c, m)) for idx, c in terms])


def form(m, terms):
    return DiffForm(m, 1, [((j,), parse_poly(c, m)) for j, c in terms])


def fixtures():
    yield "det3.mv", "multivector", MultiVectorField.basis(3, (0, 1, 2)), "canonical Nambu tensor on R^3"
    yield "poincare.mv", "multivector", mv(4, [
        ((1, 2, 3), "x0"), ((0, 2, 3), "x1"), ((0, 1, 3), "-x2"), ((0, 1, 2), "x3"),
    ]), "linear Nambu-Poisson 3-vector on R^4"
    yield "nonintegrable.mv", "multivector", mv(4, [((0, 1, 2), "1"), ((0, 1, 3), "x0")]), \
        "decomposable everywhere but not involutive"
    yield "so3.sc", "structure_constants", fil.so3(), "so(3)"
    yield "so4.sc", "structure_constants", fil.so4(), "so(3) + so(3)"
    yield "heisenberg.sc", "structure_constants", fil.heisenberg(), "3-dimensional Heisenberg algebra"
    ex1 = fil.example1_build(fil.so4(), 1)
    yield "example1_so4_k1.mv", "multivector", ex1, "linear Poisson tensor of so(4) wedged with one extra direction"
    yield "so4_example1.mv", "multivector", ex1, "alias of example1_so4_k1.mv"
    yield "example3_so3.abx", "algebroid", abx.example3_build(fil.so3(), Poly.var(3, 0)), \
        "so(3) bracket scaled by g = x0 on the tangent bundle, zero anchor"
    yield "example4_n2_m3.abx", "algebroid", abx.example4_build(2, 3), "zero frame bracket, anchor dx0^dx1 (x) d0"

    # normal-form presets, one per family
    yield "nf_A_n3_m4.mv", "multivector", fil.normal_form_A(3, 4, parse_poly("x3", 4)), "family A, phi = x3"
    yield "nf_B1_n3_m5.mv", "multivector", fil.normal_form_B1(
        3, 5, parse_poly("x0^2 + x1*x2 - x3^2", 5), {(4, 0): 1, (4, 2): -2}), "family B1"
    yield "nf_B2_n3_m6.mv", "multivector", fil.normal_form_B2(
        3, 6, parse_poly("x0*x1", 6), {4: 1}, {5: 3}), "family B2"
    yield "nf_C_n3_m5.mv", "multivector", fil.normal_form_C(3, 5, [[0, 1, 0], [0, 0, 1], [1, 0, 0]]), \
        "family C, cyclic permutation matrix"

    # three-planes dichotomy families on R^5
    b = [MultiVectorField.basis(5, idx) for idx in ((0, 1, 2), (0, 1, 3), (0, 1, 4))]
    a = [MultiVectorField.basis(5, idx) for idx in ((0, 1, 2), (1, 2, 3), (0, 2, 3))]
    yield "lemma1_branch_b.fam", "family", b, "three 3-planes sharing a 2-plane"
    yield "lemma1_branch_a.fam", "family", a, "three 3-planes inside one 4-space"

    # 1-form bracket counterexample on d0^d1^d2: mus then nus
    members = [form(3, [(0, "1")]), form(3, [(1, "x0")]),
               form(3, [(1, "1")]), form(3, [(2, "1")]), form(3, [(0, "x2")])]
    yield "ff_counterexample.fam", "family", members, \
        "1-forms (mu1, mu2, nu1, nu2, nu3) on which the form bracket breaks the Filippov identity"
    yield "ff_triple.fam", "family", members[2:], "three 1-forms for bracket forms on det3.mv"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, kind, payload, notes in fixtures():
        doc = Document(kind, payload, {"name": name.rsplit(".", 1)[0], "notes": notes})
        (OUT / name).write_text(serialize_document(doc), encoding="utf-8")
        print("wrote", name)


if __name__ == "__main__":
    main()

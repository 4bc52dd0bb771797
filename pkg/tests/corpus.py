"""Shared tensor corpus: shipped fixtures plus a few hand-made tensors."""

from importlib import resources
from pathlib import Path

from nambukit.documents import parse_document
from nambukit.exterior import MultiVectorField
from nambukit.filippov import example1_build, linear_tensor_from_structure, so3
from nambukit.literals import parse_poly

FIXTURES = Path(str(resources.files("nambukit") / "fixtures"))


def fixture(name):
    return parse_document((FIXTURES / name).read_text(encoding="utf-8")).payload


def mv(m, *terms):
    return MultiVectorField(m, len(terms[0][0]), [(i, parse_poly(c, m)) for i, c in terms])


def corpus():
    """(name, tensor) pairs in a fixed order."""
    out = [(p.name, fixture(p.name)) for p in sorted(FIXTURES.glob("*.mv")) if p.name != "so4_example1.mv"]
    out += [
        ("so3-linear", linear_tensor_from_structure(so3())),
        ("example1-so3-k1", example1_build(so3(), 1)),
        ("plucker-pass", mv(4, ((0, 1, 2), "x0"), ((0, 1, 3), "x1"))),
        ("quadratic-volume", mv(3, ((0, 1, 2), "x0^2 - x1*x2 + 3"))),
        ("rotation-bivector", mv(3, ((0, 1), "x0^2 + x1^2"), ((0, 2), "x2"))),
    ]
    return out

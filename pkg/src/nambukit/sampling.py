"""Seeded random generators for polynomials, tensors and sections."""

from __future__ import annotations

import random
from itertools import combinations

from .exterior import DiffForm, MultiVectorField
from .ratpoly import Poly, monomials_up_to

_NONZERO = (-3, -2, -1, 1, 2, 3)


def make_rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_poly(nvars: int, degree_bound: int, rng: random.Random, max_terms: int | None = None) -> Poly:
    """Coefficients uniform in {-3..3}\\{0} on monomials of degree <= degree_bound.

    Without ``max_terms`` every monomial gets a coefficient; otherwise a
    random subset of at most ``max_terms`` monomials is used.
    """
    monos = monomials_up_to(nvars, degree_bound)
    if max_terms is not None and max_terms < len(monos):
        monos = rng.sample(monos, rng.randint(1, max_terms))
    return Poly(nvars, {e: rng.choice(_NONZERO) for e in monos})


def random_tensor(cls, m: int, degree: int, rng: random.Random, coeff_degree: int = 1,
                  max_terms: int = 3, poly_terms: int = 3):
    indices = list(combinations(range(m), degree))
    chosen = rng.sample(indices, min(len(indices), rng.randint(1, max_terms)))
    return cls(m, degree, [(i, random_poly(m, coeff_degree, rng, poly_terms)) for i in chosen])


def random_multivector(m, degree, rng, **kw) -> MultiVectorField:
    return random_tensor(MultiVectorField, m, degree, rng, **kw)


def random_form(m, degree, rng, **kw) -> DiffForm:
    return random_tensor(DiffForm, m, degree, rng, **kw)


def random_vector(dim: int, rng: random.Random, lo: int = -3, hi: int = 3) -> list[int]:
    return [rng.randint(lo, hi) for _ in range(dim)]

"""Checkers for Nambu-Poisson tensors, the Filippov identity and friends.

Every checker returns a :class:`CheckReport`.  A failing report always
carries a witness holding the inputs needed to recompute a nonzero
residual (see :func:`replay_witness`).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exterior import (
    DegreeError,
    DiffForm,
    MultiVectorField,
    contract_forms,
    contract_functions,
    contract_once,
    differential,
    lie_derivative,
    mv_wedge,
    pairing,
    schouten,
    support_subspace,
)
from .literals import format_rational, parse_poly
from .ratpoly import Poly, subspace_intersect, subspace_span
from .sampling import make_rng, random_poly

__all__ = [
    "CheckReport",
    "PreconditionError",
    "HypothesisViolation",
    "Lemma1Counterexample",
    "hamiltonian_field",
    "nambu_bracket",
    "is_decomposable_everywhere",
    "is_involutive",
    "check_nambu_poisson",
    "fi_residual",
    "fi_random_test",
    "hamiltonian_invariance",
    "hamiltonian_closure_test",
    "closure_on_coordinates",
    "form_bracket",
    "form_fi_residual",
    "lemma1_dichotomy",
    "find_nonzero_point",
    "replay_witness",
]


class PreconditionError(ValueError):
    """A checker was called outside its domain."""


class HypothesisViolation(ValueError):
    """A family fails the hypotheses of the three-planes dichotomy."""


class Lemma1Counterexample(AssertionError):
    """Neither branch of the dichotomy holds; should never be raised."""


@dataclass
class CheckReport:
    check: str
    passed: bool
    witness: dict | None = None
    stats: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failing report needs a witness")

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        out = {"check": self.check, "verdict": self.verdict, "stats": dict(self.stats)}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _coords(m: int, idx: Sequence[int]) -> list[Poly]:
    return [Poly.var(m, i) for i in idx]


def _tensor_str(t) -> str:
    return str(t)


def find_nonzero_point(p: Poly) -> list[Fraction]:
    """A small integer point where the nonzero polynomial ``p`` does not vanish.

    Tries the indicator vector of the leading monomial first, then the
    all-ones vector, then the grid {0..d}^m in lexicographic order.
    """
    if not p.terms:
        raise ValueError("the zero polynomial vanishes everywhere")
    m = p.nvars
    lead = p.leading_monomial()
    candidates = [[Fraction(int(e > 0)) for e in lead], [Fraction(1)] * m]
    for pt in candidates:
        if p(pt):
            return pt
    d = max(p.degree(), 1)
    for pt in itertools.product(range(d + 1), repeat=m):
        pt = [Fraction(v) for v in pt]
        if p(pt):
            return pt
    raise AssertionError("unreachable: nonzero polynomial vanishes on a full grid")


def _point_witness(residual) -> dict:
    """Sample point and value for a nonzero residual (tensor or Poly)."""
    if isinstance(residual, Poly):
        pt = find_nonzero_point(residual)
        return {"point": [format_rational(v) for v in pt], "value": format_rational(residual(pt))}
    index, coeff = residual.sorted_items()[0]
    pt = find_nonzero_point(coeff)
    return {
        "point": [format_rational(v) for v in pt],
        "value": _tensor_str(residual.evaluate(pt)),
        "term": {"index": list(index), "coeff": str(coeff)},
    }


# -- brackets ---------------------------------------------------------------


def hamiltonian_field(lam: MultiVectorField, fs: Sequence[Poly]) -> MultiVectorField:
    """The vector field lam_{f_1..f_{n-1}}."""
    if len(fs) != lam.degree - 1:
        raise DegreeError(f"hamiltonian field of a degree {lam.degree} tensor needs {lam.degree - 1} functions")
    return contract_functions(lam, fs)


def nambu_bracket(lam: MultiVectorField, fs: Sequence[Poly]) -> Poly:
    if len(fs) != lam.degree:
        raise DegreeError(f"bracket of a degree {lam.degree} tensor needs {lam.degree} functions")
    return contract_functions(lam, fs).as_function()


# -- structure checks -----------------------------------------------------


def _covector_subsets(lam: MultiVectorField, size: int):
    seen = set()
    for index in sorted(lam.terms):
        for combo in itertools.combinations(index, size):
            if combo not in seen:
                seen.add(combo)
    return sorted(seen)


def _plucker_residual(lam: MultiVectorField, covector: Sequence[int]) -> MultiVectorField:
    v = lam
    for j in covector:
        v = contract_once(DiffForm.basis(lam.m, (j,)), v)
    return mv_wedge(v, lam)


def is_decomposable_everywhere(lam: MultiVectorField) -> CheckReport:
    """Plücker relations (i_w lam) ^ lam = 0 as polynomial identities."""
    n = lam.degree
    if n < 1:
        raise PreconditionError("decomposability needs degree >= 1")
    checked = 0
    for combo in _covector_subsets(lam, n - 1):
        checked += 1
        res = _plucker_residual(lam, combo)
        if res.terms:
            w = {"kind": "plucker", "covector": list(combo), "residual": str(res)}
            w.update(_point_witness(res))
            return CheckReport("decomposable", False, w, {"relations": checked})
    return CheckReport("decomposable", True, stats={"relations": checked})


def _coordinate_hamiltonians(lam: MultiVectorField):
    out = []
    for combo in itertools.combinations(range(lam.m), lam.degree - 1):
        h = hamiltonian_field(lam, _coords(lam.m, combo))
        if h.terms:
            out.append((combo, h))
    return out


def is_involutive(lam: MultiVectorField) -> CheckReport:
    """[ham_I, ham_J] ^ lam = 0 for all pairs of coordinate tuples."""
    if lam.degree < 2:
        raise PreconditionError("involutivity needs degree >= 2")
    dec = is_decomposable_everywhere(lam)
    if not dec.passed:
        raise PreconditionError("is_involutive needs a decomposable tensor")
    hams = _coordinate_hamiltonians(lam)
    checked = 0
    for (ka, ha), (kb, hb) in itertools.combinations(hams, 2):
        checked += 1
        res = mv_wedge(schouten(ha, hb), lam)
        if res.terms:
            w = {"kind": "involutive", "pair": [list(ka), list(kb)], "residual": str(res)}
            w.update(_point_witness(res))
            return CheckReport("involutive", False, w, {"pairs": checked})
    return CheckReport("involutive", True, stats={"pairs": checked})


def check_nambu_poisson(lam: MultiVectorField) -> CheckReport:
    n = lam.degree
    if n <= 1 or not lam.terms:
        return CheckReport("nambu-poisson", True, stats={"degree": n}, notes=["trivially Nambu-Poisson"])
    if n == 2:
        res = schouten(lam, lam)
        if res.terms:
            w = {"kind": "jacobi", "residual": str(res)}
            w.update(_point_witness(res))
            return CheckReport("nambu-poisson", False, w, {"degree": 2})
        return CheckReport("nambu-poisson", True, stats={"degree": 2})
    dec = is_decomposable_everywhere(lam)
    stats = {"degree": n, "plucker_relations": dec.stats["relations"]}
    if not dec.passed:
        return CheckReport("nambu-poisson", False, dec.witness, stats, ["not decomposable"])
    inv = is_involutive(lam)
    stats["involutivity_pairs"] = inv.stats["pairs"]
    if not inv.passed:
        return CheckReport("nambu-poisson", False, inv.witness, stats, ["not involutive"])
    return CheckReport("nambu-poisson", True, stats=stats)


# -- Filippov identity ------------------------------------------------------


def fi_residual(bracket, fs: Sequence, gs: Sequence):
    """LHS - RHS of the Filippov identity for an arbitrary n-ary ``bracket``."""
    fs, gs = list(fs), list(gs)
    lhs = bracket(fs + [bracket(gs)])
    rhs = None
    for i in range(len(gs)):
        args = gs[:i] + [bracket(fs + [gs[i]])] + gs[i + 1:]
        term = bracket(args)
        rhs = term if rhs is None else rhs + term
    return lhs - rhs


def _fi_trial(lam: MultiVectorField, fs, gs) -> Poly:
    return fi_residual(lambda args: nambu_bracket(lam, args), fs, gs)


def _fi_trial_packed(args):
    return _fi_trial(*args)


def _residuals(lam: MultiVectorField, samples: list, jobs: int):
    """Yield (trial, sample, residual) in trial order.

    With several jobs the trials run in ordered batches so a failure stops
    the search early while the reported witness stays the first failing
    trial.
    """
    if jobs <= 1:
        for t, (fs, gs) in enumerate(samples):
            yield t, (fs, gs), _fi_trial(lam, fs, gs)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for start in range(0, len(samples), jobs):
            batch = samples[start:start + jobs]
            results = pool.map(_fi_trial_packed, [(lam, fs, gs) for fs, gs in batch])
            for offset, res in enumerate(results):
                yield start + offset, batch[offset], res


def fi_random_test(lam: MultiVectorField, degree_bound: int = 2, trials: int = 20, seed=0,
                   jobs: int = 1, max_terms: int | None = None) -> CheckReport:
    """Seeded search for violations of the Filippov identity."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = lam.degree
    if n < 2:
        return CheckReport("fi-random", True, stats={"trials": 0}, notes=["arity < 2"])
    rng = make_rng(seed)
    samples = []
    for _ in range(trials):
        fs = [random_poly(lam.m, degree_bound, rng, max_terms) for _ in range(n - 1)]
        gs = [random_poly(lam.m, degree_bound, rng, max_terms) for _ in range(n)]
        samples.append((fs, gs))
    for t, (fs, gs), res in _residuals(lam, samples, jobs):
        if res.terms:
            w = {
                "kind": "fi",
                "trial": t,
                "fs": [str(f) for f in fs],
                "gs": [str(g) for g in gs],
                "residual": str(res),
            }
            w.update(_point_witness(res))
            return CheckReport("fi-random", False, w, {"trials": t + 1, "degree_bound": degree_bound})
    return CheckReport("fi-random", True, stats={"trials": trials, "degree_bound": degree_bound})


def hamiltonian_invariance(lam: MultiVectorField, fs: Sequence[Poly]) -> CheckReport:
    """[lam_{f_1..f_{n-1}}, lam] = 0."""
    res = schouten(hamiltonian_field(lam, fs), lam)
    if res.terms:
        w = {"kind": "invariance", "fs": [str(f) for f in fs], "residual": str(res)}
        w.update(_point_witness(res))
        return CheckReport("hamiltonian-invariance", False, w)
    return CheckReport("hamiltonian-invariance", True)


def _closure_residual(lam, fs, gs) -> MultiVectorField:
    fs, gs = list(fs), list(gs)
    if len(fs) != lam.degree - 1 or len(gs) != lam.degree - 1:
        raise DegreeError(f"closure needs two tuples of {lam.degree - 1} functions")
    lhs = schouten(hamiltonian_field(lam, fs), hamiltonian_field(lam, gs))
    rhs = MultiVectorField.zero(lam.m, 1)
    for i in range(len(gs)):
        inner = nambu_bracket(lam, fs + [gs[i]])
        rhs = rhs + hamiltonian_field(lam, gs[:i] + [inner] + gs[i + 1:])
    return lhs - rhs


def hamiltonian_closure_test(lam: MultiVectorField, fs: Sequence[Poly], gs: Sequence[Poly]) -> CheckReport:
    """Hamiltonian fields close: [X_f, X_g] = sum_i X_{g_1..{f,g_i}..g_{n-1}}."""
    res = _closure_residual(lam, fs, gs)
    if res.terms:
        w = {"kind": "closure", "fs": [str(f) for f in fs], "gs": [str(g) for g in gs], "residual": str(res)}
        w.update(_point_witness(res))
        return CheckReport("hamiltonian-closure", False, w)
    return CheckReport("hamiltonian-closure", True)


def closure_on_coordinates(lam: MultiVectorField) -> CheckReport:
    """Exhaustive closure test over ordered pairs of coordinate tuples."""
    tuples = list(itertools.combinations(range(lam.m), lam.degree - 1))
    checked = 0
    for ka in tuples:
        for kb in tuples:
            checked += 1
            rep = hamiltonian_closure_test(lam, _coords(lam.m, ka), _coords(lam.m, kb))
            if not rep.passed:
                rep.witness["pair"] = [list(ka), list(kb)]
                rep.stats = {"pairs": checked}
                return rep
    return CheckReport("hamiltonian-closure", True, stats={"pairs": checked})


# -- bracket of 1-forms ------------------------------------------------------


def form_bracket(lam: MultiVectorField, mus: Sequence[DiffForm]) -> DiffForm:
    """sum_k (-1)^(n+k) L_{lam_k} mu_k - (n-1) d<lam, mu_1 ^ ... ^ mu_n>.

    ``lam_k`` is the contraction of ``lam`` with every form except
    ``mu_k``, in order.
    """
    n = lam.degree
    if len(mus) != n:
        raise DegreeError(f"form bracket of a degree {n} tensor needs {n} forms")
    out = DiffForm.zero(lam.m, 1)
    for k in range(n):
        lam_k = contract_forms(lam, list(mus[:k]) + list(mus[k + 1:]))
        term = lie_derivative(lam_k, mus[k])
        # k is 0-based here: (-1)^(n + k + 1)
        out = out + (term if (n + k + 1) % 2 == 0 else -term)
    full = pairing(lam, mus)
    return out - differential(full).scale(n - 1)


def form_fi_residual(lam: MultiVectorField, mus: Sequence[DiffForm], nus: Sequence[DiffForm]) -> DiffForm:
    return fi_residual(lambda args: form_bracket(lam, args), mus, nus)


# -- three planes dichotomy ---------------------------------------------------


@dataclass
class DichotomyReport:
    branches: tuple
    span_dim: int
    intersection_dim: int
    n: int

    def to_dict(self) -> dict:
        return {
            "check": "lemma1",
            "verdict": "pass",
            "branches": list(self.branches),
            "span_dim": self.span_dim,
            "intersection_dim": self.intersection_dim,
            "n": self.n,
        }


def is_decomposable_constant(lam: MultiVectorField) -> bool:
    """Decomposability of a nonzero constant n-vector: its support has dimension n.

    Agrees with the Pluecker test of :func:`is_decomposable_everywhere`
    on constant tensors and is much cheaper.
    """
    return len(support_subspace(lam)) == lam.degree


def lemma1_dichotomy(family: Sequence[MultiVectorField]) -> DichotomyReport:
    """Decide which branch of the three-planes dichotomy a family lands on.

    Branch "a": the supports span at most n+1 dimensions.  Branch "b":
    the supports meet in at least n-1 dimensions.
    """
    if not family:
        raise ValueError("empty family")
    n = family[0].degree
    m = family[0].m
    for i, lam in enumerate(family):
        if lam.degree != n or lam.m != m:
            raise HypothesisViolation(f"member {i} has a different degree or dimension")
        if not lam.terms:
            raise HypothesisViolation(f"member {i} is zero")
        if not lam.is_constant():
            raise HypothesisViolation(f"member {i} has non-constant coefficients")
    supports = [support_subspace(lam) for lam in family]
    for i, basis in enumerate(supports):
        if len(basis) != n:
            raise HypothesisViolation(f"member {i} is not decomposable")
    for i, j in itertools.combinations(range(len(family)), 2):
        s = family[i] + family[j]
        if s.terms and not is_decomposable_constant(s):
            raise HypothesisViolation(f"members {i} and {j} have a non-decomposable sum")
    span = subspace_span([v for basis in supports for v in basis])
    inter = supports[0]
    for basis in supports[1:]:
        inter = subspace_intersect(inter, basis)
    branches = []
    if len(span) <= n + 1:
        branches.append("a")
    if len(inter) >= n - 1:
        branches.append("b")
    if not branches:
        raise Lemma1Counterexample(
            f"span dim {len(span)} > {n + 1} and intersection dim {len(inter)} < {n - 1}"
        )
    return DichotomyReport(tuple(branches), len(span), len(inter), n)


# -- replay -----------------------------------------------------------------


def replay_witness(lam: MultiVectorField, witness: dict):
    """Recompute the residual a failing witness points at."""
    kind = witness["kind"]
    m = lam.m
    if kind == "plucker":
        return _plucker_residual(lam, witness["covector"])
    if kind == "involutive":
        ka, kb = witness["pair"]
        ha = hamiltonian_field(lam, _coords(m, ka))
        hb = hamiltonian_field(lam, _coords(m, kb))
        return mv_wedge(schouten(ha, hb), lam)
    if kind == "jacobi":
        return schouten(lam, lam)
    if kind == "fi":
        fs = [parse_poly(s, m) for s in witness["fs"]]
        gs = [parse_poly(s, m) for s in witness["gs"]]
        return _fi_trial(lam, fs, gs)
    if kind == "invariance":
        fs = [parse_poly(s, m) for s in witness["fs"]]
        return schouten(hamiltonian_field(lam, fs), lam)
    if kind == "closure":
        fs = [parse_poly(s, m) for s in witness["fs"]]
        gs = [parse_poly(s, m) for s in witness["gs"]]
        return _closure_residual(lam, fs, gs)
    raise ValueError(f"unknown witness kind {kind!r}")

"""Filippov algebroids on trivial bundles R^m x R^r.

An ``AlgebroidSpec`` stores the bracket of frame sections, ``[e_I] = sum_k c^k_I(x) e_k``,
and the anchor of (n-1)-tuples of frame sections,
``a(e_J) = sum_j a^j_J(x) d_j``.  Brackets of arbitrary sections are
expanded multilinearly with the Leibniz correction in every slot::

    [f1 X1, ..., fn Xn] = f1...fn [X1..Xn]
                          + sum_k (-1)^(n-k) (prod_{l != k} f_l) a(X1..Xk^..Xn)(f_k) X_k
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .exterior import MultiVectorField, canonical_index, schouten
from .filippov import NAryStructure
from .nambu import CheckReport, _point_witness, fi_residual
from .ratpoly import DimensionError, Poly
from .sampling import make_rng, random_poly

__all__ = [
    "Section",
    "AlgebroidSpec",
    "DualVars",
    "NotAnAlgebroidTensor",
    "iota",
    "bracket_sections",
    "anchor_apply",
    "check_axiom_leibniz",
    "check_axiom_anchor",
    "check_fi_sections",
    "example3_build",
    "example4_build",
    "filippov_tensor_of",
    "algebroid_from_filippov_tensor",
    "random_section",
]


class NotAnAlgebroidTensor(ValueError):
    def __init__(self, msg: str, witness: dict):
        super().__init__(msg)
        self.witness = witness


class Section(tuple):
    """Components of a section in the global frame e_0..e_{r-1}."""

    def __new__(cls, components: Sequence[Poly]):
        comps = tuple(components)
        if comps and len({c.nvars for c in comps}) != 1:
            raise DimensionError("section components live in different dimensions")
        return super().__new__(cls, comps)

    @classmethod
    def zero(cls, m: int, r: int) -> "Section":
        return cls([Poly.zero(m)] * r)

    @classmethod
    def frame(cls, m: int, r: int, i: int) -> "Section":
        return cls([Poly.const(m, int(k == i)) for k in range(r)])

    @property
    def m(self) -> int:
        return self[0].nvars

    def __add__(self, other):
        if len(self) != len(other):
            raise DimensionError("sections of different rank")
        return Section([a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        return Section([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return Section([-a for a in self])

    def scale(self, f) -> "Section":
        return Section([a * f for a in self])

    def is_zero(self) -> bool:
        return all(not a.terms for a in self)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self) + "]"


def _check_index(idx, length, bound, what):
    if len(idx) != length:
        raise DimensionError(f"{what} tuple {idx} has length {len(idx)}, expected {length}")
    if any(not 0 <= i < bound for i in idx):
        raise IndexError(f"{what} tuple {idx} out of range")


def _canonical_sc(raw: Mapping, length: int, bound: int, out_bound: int, m: int, what: str) -> dict:
    clean: dict = {}
    for (idx, k), p in dict(raw).items():
        idx = tuple(idx)
        _check_index(idx, length, bound, what)
        if not 0 <= k < out_bound:
            raise IndexError(f"{what} output index {k} out of range")
        if isinstance(p, Poly):
            if p.nvars != m:
                raise DimensionError(f"{what} coefficient in {p.nvars} variables, expected {m}")
        else:
            p = Poly.const(m, p)
        sign, sidx = canonical_index(idx)
        if not sign:
            continue
        key = (sidx, k)
        clean[key] = clean.get(key, Poly.zero(m)) + (p if sign > 0 else -p)
    return {k: v for k, v in sorted(clean.items()) if v.terms}


@dataclass(frozen=True)
class AlgebroidSpec:
    m: int
    r: int
    n: int
    bracket_sc: Mapping = field(default_factory=dict)
    anchor_sc: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("arity must be >= 2")
        object.__setattr__(
            self, "bracket_sc", _canonical_sc(self.bracket_sc, self.n, self.r, self.r, self.m, "bracket")
        )
        object.__setattr__(
            self, "anchor_sc", _canonical_sc(self.anchor_sc, self.n - 1, self.r, self.m, self.m, "anchor")
        )


@dataclass(frozen=True)
class DualVars:
    """Coordinates (x_0..x_{m-1}, xi_0..xi_{r-1}) on the dual bundle."""

    m: int
    r: int

    @property
    def nvars(self) -> int:
        return self.m + self.r

    def xi(self, k: int) -> int:
        return self.m + k

    def xi_degree(self, exps: Sequence[int]) -> int:
        return sum(exps[self.m:])


def iota(y: Section, dual: DualVars | None = None) -> Poly:
    """The fibre-linear function sum_i Y_i(x) xi_i on E*."""
    if dual is None:
        dual = DualVars(y.m, len(y))
    total = Poly.zero(dual.nvars)
    for i, c in enumerate(y):
        total = total + c.embed(dual.nvars) * Poly.var(dual.nvars, dual.xi(i))
    return total


def _minor(rows: Sequence[Section], cols: Sequence[int]) -> Poly:
    m = rows[0].m
    total = Poly.zero(m)
    for perm in itertools.permutations(range(len(cols))):
        sign, _ = canonical_index(perm)
        term = None
        for a, b in enumerate(perm):
            c = rows[a][cols[b]]
            if not c.terms:
                term = None
                break
            term = c if term is None else term * c
        if term is not None:
            total = total + (term if sign > 0 else -term)
    return total


def _check_sections(spec: AlgebroidSpec, ys: Sequence[Section], count: int):
    if len(ys) != count:
        raise DimensionError(f"expected {count} sections, got {len(ys)}")
    for y in ys:
        if len(y) != spec.r or y.m != spec.m:
            raise DimensionError("section does not match the bundle")


def anchor_apply(spec: AlgebroidSpec, xs: Sequence[Section]) -> MultiVectorField:
    xs = [Section(x) for x in xs]
    _check_sections(spec, xs, spec.n - 1)
    comps: dict = {}
    minors: dict = {}
    for (idx, j), a in spec.anchor_sc.items():
        if idx not in minors:
            minors[idx] = _minor(xs, idx)
        d = minors[idx]
        if d.terms:
            comps[j] = comps.get(j, Poly.zero(spec.m)) + d * a
    return MultiVectorField(spec.m, 1, [((j,), p) for j, p in comps.items()])


def _apply_vector(v: MultiVectorField, f: Poly) -> Poly:
    total = Poly.zero(f.nvars)
    for (j,), c in v.terms.items():
        d = f.partial(j)
        if d.terms:
            total = total + c * d
    return total


def bracket_sections(spec: AlgebroidSpec, ys: Sequence[Section]) -> Section:
    ys = [Section(y) for y in ys]
    _check_sections(spec, ys, spec.n)
    n = spec.n
    out = [Poly.zero(spec.m) for _ in range(spec.r)]
    minors: dict = {}
    for (idx, k), c in spec.bracket_sc.items():
        if idx not in minors:
            minors[idx] = _minor(ys, idx)
        d = minors[idx]
        if d.terms:
            out[k] = out[k] + d * c
    if spec.anchor_sc:
        for k in range(n):
            v = anchor_apply(spec, ys[:k] + ys[k + 1:])
            if not v.terms:
                continue
            negative = (n - 1 - k) % 2 == 1
            for i, comp in enumerate(ys[k]):
                t = _apply_vector(v, comp)
                if t.terms:
                    out[i] = out[i] - t if negative else out[i] + t
    return Section(out)


# -- sampled axiom checks -------------------------------------------------------


def random_section(spec: AlgebroidSpec, rng, degree: int = 2, max_terms: int = 3) -> Section:
    return Section([random_poly(spec.m, degree, rng, max_terms) for _ in range(spec.r)])


BracketFn = Callable[[Sequence[Section]], Section]
AnchorFn = Callable[[Sequence[Section]], MultiVectorField]


def _defaults(spec, bracket, anchor):
    if bracket is None:
        bracket = lambda ys: bracket_sections(spec, ys)  # noqa: E731
    if anchor is None:
        anchor = lambda xs: anchor_apply(spec, xs)  # noqa: E731
    return bracket, anchor


def _section_witness(kind, sample, inputs: dict, residual: Section) -> dict:
    w = {"kind": kind, "sample": sample}
    w.update({k: ([str(s) for s in v] if isinstance(v, list) else str(v)) for k, v in inputs.items()})
    w["residual"] = str(residual)
    first = next(c for c in residual if c.terms)
    w.update(_point_witness(first))
    return w


def check_axiom_leibniz(spec: AlgebroidSpec, samples: int = 20, seed=0, degree: int = 2,
                        bracket: BracketFn | None = None, anchor: AnchorFn | None = None) -> CheckReport:
    """[X1..X_{n-1}, fY] = f[X1..X_{n-1}, Y] + a(X1..X_{n-1})(f) Y on seeded samples."""
    bracket, anchor = _defaults(spec, bracket, anchor)
    rng = make_rng(seed)
    for t in range(samples):
        xs = [random_section(spec, rng, degree) for _ in range(spec.n - 1)]
        y = random_section(spec, rng, degree)
        f = random_poly(spec.m, degree, rng, 3)
        lhs = bracket(xs + [y.scale(f)])
        v = anchor(xs)
        rhs = bracket(xs + [y]).scale(f) + y.scale(_apply_vector(v, f))
        res = lhs - rhs
        if res:
            w = _section_witness("leibniz", t, {"xs": xs, "y": y, "f": f}, res)
            return CheckReport("axiom-leibniz", False, w, {"samples": t + 1})
    return CheckReport("axiom-leibniz", True, stats={"samples": samples})


def check_axiom_anchor(spec: AlgebroidSpec, samples: int = 20, seed=0, degree: int = 2,
                       bracket: BracketFn | None = None, anchor: AnchorFn | None = None) -> CheckReport:
    """[a(X), a(Y)] = sum_i a(Y1..[X1..X_{n-1}, Yi]..Y_{n-1}) on seeded samples."""
    bracket, anchor = _defaults(spec, bracket, anchor)
    rng = make_rng(seed)
    for t in range(samples):
        xs = [random_section(spec, rng, degree) for _ in range(spec.n - 1)]
        ys = [random_section(spec, rng, degree) for _ in range(spec.n - 1)]
        lhs = schouten(anchor(xs), anchor(ys))
        rhs = MultiVectorField.zero(spec.m, 1)
        for i in range(len(ys)):
            inner = bracket(xs + [ys[i]])
            rhs = rhs + anchor(ys[:i] + [inner] + ys[i + 1:])
        res = lhs - rhs
        if res.terms:
            w = {"kind": "anchor", "sample": t, "xs": [str(s) for s in xs], "ys": [str(s) for s in ys],
                 "residual": str(res)}
            w.update(_point_witness(res))
            return CheckReport("axiom-anchor", False, w, {"samples": t + 1})
    return CheckReport("axiom-anchor", True, stats={"samples": samples})


def check_fi_sections(spec: AlgebroidSpec, samples: int = 20, seed=0, degree: int = 2,
                      bracket: BracketFn | None = None) -> CheckReport:
    """Filippov identity on seeded polynomial sections."""
    bracket, _ = _defaults(spec, bracket, None)
    rng = make_rng(seed)
    for t in range(samples):
        fs = [random_section(spec, rng, degree) for _ in range(spec.n - 1)]
        gs = [random_section(spec, rng, degree) for _ in range(spec.n)]
        res = fi_residual(bracket, fs, gs)
        if res:
            w = _section_witness("fi-sections", t, {"fs": fs, "gs": gs}, res)
            return CheckReport("fi-sections", False, w, {"samples": t + 1})
    return CheckReport("fi-sections", True, stats={"samples": samples})


# -- constructors -----------------------------------------------------------------


def example3_build(c: NAryStructure, g: Poly) -> AlgebroidSpec:
    """Bracket g * c on frame sections, trivial anchor."""
    return AlgebroidSpec(
        m=g.nvars,
        r=c.dim,
        n=c.n,
        bracket_sc={(idx, k): g.scale(v) for (idx, k), v in c.c.items()},
    )


def example4_build(n: int, m: int) -> AlgebroidSpec:
    """(n+1)-ary algebroid on TR^m: zero frame bracket, anchor dx_0 ^ .. ^ dx_{n-1} (x) d_0."""
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    return AlgebroidSpec(m=m, r=m, n=n + 1, anchor_sc={(tuple(range(n)), 0): Poly.const(m, 1)})


def filippov_tensor_of(spec: AlgebroidSpec) -> MultiVectorField:
    """Linear n-vector field on E* whose bracket of fibre-linear functions is the section bracket."""
    dual = DualVars(spec.m, spec.r)
    big = dual.nvars
    terms = []
    for (idx, k), c in spec.bracket_sc.items():
        terms.append((tuple(dual.xi(i) for i in idx), c.embed(big) * Poly.var(big, dual.xi(k))))
    for (idx, j), a in spec.anchor_sc.items():
        # d_{xi_J} ^ d_{x_j}; the constructor reorders with the sign
        terms.append((tuple(dual.xi(i) for i in idx) + (j,), a.embed(big)))
    return MultiVectorField(big, spec.n, terms)


def algebroid_from_filippov_tensor(lam: MultiVectorField, dual: DualVars) -> AlgebroidSpec:
    if lam.m != dual.nvars:
        raise DimensionError(f"tensor lives on R^{lam.m}, dual bundle has {dual.nvars} coordinates")
    n = lam.degree
    m = dual.m
    bracket: dict = {}
    anchor: dict = {}
    for idx, coeff in lam.sorted_items():
        xs = [i for i in idx if i < m]
        xis = tuple(i - m for i in idx if i >= m)
        if len(xs) == 0:
            for exps, v in coeff.sorted_terms():
                if dual.xi_degree(exps) != 1:
                    raise NotAnAlgebroidTensor(
                        f"coefficient of {idx} is not fibre-linear",
                        {"index": list(idx), "coeff": str(coeff)},
                    )
                k = next(i for i, e in enumerate(exps[m:]) if e)
                base = Poly.monomial(exps[:m], v)
                key = (xis, k)
                bracket[key] = bracket.get(key, Poly.zero(m)) + base
        elif len(xs) == 1:
            if any(dual.xi_degree(e) for e in coeff.terms):
                raise NotAnAlgebroidTensor(
                    f"anchor coefficient of {idx} depends on the fibre",
                    {"index": list(idx), "coeff": str(coeff)},
                )
            # d_{x_j} ^ d_{xi_J} = (-1)^(n-1) d_{xi_J} ^ d_{x_j}
            base = coeff.restrict(m)
            anchor[(xis, xs[0])] = base if n % 2 == 1 else -base
        else:
            raise NotAnAlgebroidTensor(
                f"term {idx} brackets base functions nontrivially",
                {"index": list(idx), "coeff": str(coeff)},
            )
    return AlgebroidSpec(m=m, r=dual.r, n=n, bracket_sc=bracket, anchor_sc=anchor)

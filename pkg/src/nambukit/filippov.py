"""Finite-dimensional n-ary (Filippov) algebras and linear tensors.

A structure is stored by its constants c^k_{i_1..i_n} on strictly
increasing index tuples; brackets on other tuples follow from the
permutation sign.  The linear n-vector field attached to a structure has
coefficient sum_k c^k_I x_k in front of d_{i_1} ^ ... ^ d_{i_n}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .exterior import DiffForm, MultiVectorField, canonical_index, contract_once, exterior_derivative, mv_wedge
from .nambu import CheckReport, fi_residual
from .ratpoly import DimensionError, Poly, RatMatrix, as_rational, subspace_span

__all__ = [
    "NAryStructure",
    "ShapeError",
    "bracket_apply",
    "bracket_vectors",
    "check_fundamental_identity",
    "linear_tensor_from_structure",
    "structure_from_linear_tensor",
    "fi_check_linear_functions",
    "direct_sum",
    "derived_ideal",
    "is_ideal",
    "example1_build",
    "adjoint_cocycle_check",
    "cocycle_coboundary",
    "normal_form_A",
    "normal_form_B1",
    "normal_form_B2",
    "normal_form_C",
    "so3",
    "so4",
    "heisenberg",
    "abelian",
    "FIXTURE_ALGEBRAS",
]


class ShapeError(ValueError):
    """Input does not have the required shape (e.g. non-linear coefficients)."""


@dataclass(frozen=True)
class NAryStructure:
    """Skew n-ary bracket on R^dim given by rational structure constants."""

    n: int
    dim: int
    c: Mapping[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"arity must be >= 2, got {self.n}")
        clean: dict = {}
        for key, v in dict(self.c).items():
            idx, k = key
            v = as_rational(v)
            if len(idx) != self.n:
                raise ShapeError(f"tuple {idx} has length {len(idx)}, expected {self.n}")
            if any(not 0 <= i < self.dim for i in idx) or not 0 <= k < self.dim:
                raise IndexError(f"index out of range in {key}")
            sign, sidx = canonical_index(idx)
            if not sign or not v:
                continue
            nk = (sidx, k)
            clean[nk] = clean.get(nk, 0) + sign * v
        object.__setattr__(self, "c", {k: v for k, v in sorted(clean.items()) if v})

    @classmethod
    def from_brackets(cls, n: int, dim: int, table: Mapping[tuple, Sequence]) -> "NAryStructure":
        """Build from {index tuple: output vector}."""
        c = {}
        for idx, vec in table.items():
            for k, v in enumerate(vec):
                if v:
                    c[(tuple(idx), k)] = v
        return cls(n, dim, c)

    def output(self, idx: tuple) -> list[Fraction]:
        sign, sidx = canonical_index(idx)
        out = [Fraction(0)] * self.dim
        if not sign:
            return out
        for k in range(self.dim):
            v = self.c.get((sidx, k))
            if v:
                out[k] = sign * v
        return out

    def is_zero(self) -> bool:
        return not self.c


def bracket_apply(s: NAryStructure, idx: Sequence[int]) -> list[Fraction]:
    if len(idx) != s.n:
        raise ShapeError(f"bracket needs {s.n} indices, got {len(idx)}")
    if any(not 0 <= i < s.dim for i in idx):
        raise IndexError(f"index out of range in {tuple(idx)}")
    return s.output(tuple(idx))


def bracket_vectors(s: NAryStructure, vectors: Sequence[Sequence]) -> list[Fraction]:
    """Multilinear extension of the bracket to arbitrary vectors."""
    if len(vectors) != s.n:
        raise ShapeError(f"bracket needs {s.n} vectors, got {len(vectors)}")
    out = [Fraction(0)] * s.dim
    supports = [[(i, as_rational(v)) for i, v in enumerate(vec) if v] for vec in vectors]
    for combo in itertools.product(*supports):
        idx = tuple(i for i, _ in combo)
        sign, sidx = canonical_index(idx)
        if not sign:
            continue
        w = Fraction(sign)
        for _, v in combo:
            w *= v
        for k in range(s.dim):
            ck = s.c.get((sidx, k))
            if ck:
                out[k] += w * ck
    return out


def _basis(dim: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * dim
    v[i] = Fraction(1)
    return v


def check_fundamental_identity(s: NAryStructure) -> CheckReport:
    """Filippov identity on all basis tuples (f increasing (n-1)-tuples, g increasing n-tuples).

    Both sides are multilinear and skew in the f's and in the g's, so
    basis tuples suffice.
    """
    n, dim = s.n, s.dim
    checked = 0

    def br(args):
        return bracket_vectors(s, args)

    def sub(a, b):
        return [x - y for x, y in zip(a, b)]

    class _Vec(list):
        # fi_residual adds and subtracts results
        def __add__(self, other):
            return _Vec(x + y for x, y in zip(self, other))

        def __sub__(self, other):
            return _Vec(sub(self, other))

    def vbr(args):
        return _Vec(br(args))

    for fidx in itertools.combinations(range(dim), n - 1):
        fs = [_basis(dim, i) for i in fidx]
        for gidx in itertools.combinations(range(dim), n):
            checked += 1
            gs = [_basis(dim, i) for i in gidx]
            res = fi_residual(vbr, fs, gs)
            if any(res):
                w = {
                    "kind": "fundamental-identity",
                    "f_indices": list(fidx),
                    "g_indices": list(gidx),
                    "residual": [str(v) for v in res],
                }
                return CheckReport("fundamental-identity", False, w, {"tuples": checked})
    return CheckReport("fundamental-identity", True, stats={"tuples": checked})


def linear_tensor_from_structure(s: NAryStructure) -> MultiVectorField:
    terms = {}
    for (idx, k), v in s.c.items():
        terms.setdefault(idx, {})
        e = [0] * s.dim
        e[k] = 1
        terms[idx][tuple(e)] = v
    return MultiVectorField(s.dim, s.n, [(idx, Poly(s.dim, t)) for idx, t in terms.items()])


def structure_from_linear_tensor(lam: MultiVectorField) -> NAryStructure:
    c = {}
    for idx, coeff in lam.terms.items():
        if not coeff.is_homogeneous(1):
            raise ShapeError(f"coefficient {coeff} of {idx} is not homogeneous linear")
        for e, v in coeff.terms.items():
            c[(idx, e.index(1))] = v
    return NAryStructure(lam.degree, lam.m, c)


def fi_check_linear_functions(lam: MultiVectorField) -> CheckReport:
    """Filippov identity on linear functions, i.e. the tensor is a Filippov tensor."""
    rep = check_fundamental_identity(structure_from_linear_tensor(lam))
    rep.check = "filippov-linear"
    return rep


def direct_sum(s1: NAryStructure, s2: NAryStructure) -> NAryStructure:
    if s1.n != s2.n:
        raise ShapeError(f"arity mismatch: {s1.n} vs {s2.n}")
    c = dict(s1.c)
    off = s1.dim
    for (idx, k), v in s2.c.items():
        c[(tuple(i + off for i in idx), k + off)] = v
    return NAryStructure(s1.n, s1.dim + s2.dim, c)


def derived_ideal(s: NAryStructure) -> list[list[Fraction]]:
    vectors = []
    for idx in sorted({idx for idx, _ in s.c}):
        vectors.append(s.output(idx))
    return subspace_span(vectors) if vectors else []


def is_ideal(s: NAryStructure, w: Sequence[Sequence]) -> bool:
    """[V, ..., V, W] inside W."""
    w = subspace_span(w) if w else []
    if any(len(v) != s.dim for v in w):
        raise DimensionError("subspace vectors have the wrong length")
    rank = len(w)
    for others in itertools.combinations(range(s.dim), s.n - 1):
        basis = [_basis(s.dim, i) for i in others]
        for vec in w:
            out = bracket_vectors(s, basis + [vec])
            if any(out) and RatMatrix(list(w) + [out], s.dim).rank() > rank:
                return False
    return True


def example1_build(g: NAryStructure, k: int) -> MultiVectorField:
    """Linear Poisson tensor of ``g`` wedged with d_{m} ^ ... ^ d_{m+k-1} on R^{m+k}."""
    if g.n != 2:
        raise ShapeError("example1_build needs a Lie algebra (arity 2)")
    if k < 1:
        raise ValueError("k must be >= 1")
    m = g.dim
    lam = linear_tensor_from_structure(g).embed(m + k)
    tail = MultiVectorField.basis(m + k, tuple(range(m, m + k)))
    return mv_wedge(lam, tail)


# -- cocycles ---------------------------------------------------------------


def _ad_on_power(g: NAryStructure, x: int, blade: dict, n: int) -> dict:
    """ad_{e_x} extended as a derivation to the n-th exterior power.

    ``blade`` maps increasing n-tuples to rationals.
    """
    out: dict = {}
    for idx, coeff in blade.items():
        for pos, i in enumerate(idx):
            img = g.output((x, i))
            for j, v in enumerate(img):
                if not v:
                    continue
                new = idx[:pos] + (j,) + idx[pos + 1:]
                sign, key = canonical_index(new)
                if sign:
                    out[key] = out.get(key, 0) + sign * v * coeff
    return {k: v for k, v in out.items() if v}


def _row_to_blade(row: Sequence, tuples: list) -> dict:
    return {t: as_rational(v) for t, v in zip(tuples, row) if v}


def adjoint_cocycle_check(g: NAryStructure, delta: RatMatrix | Sequence[Sequence], n: int | None = None) -> CheckReport:
    """delta([X,Y]) = ad_X delta(Y) - ad_Y delta(X) on basis pairs.

    ``delta`` is an m x C(m, n) matrix; row i holds delta(e_i) over
    increasing n-tuples in lexicographic order.
    """
    if g.n != 2:
        raise ShapeError("cocycles are defined for Lie algebras")
    if not isinstance(delta, RatMatrix):
        delta = RatMatrix(delta)
    m = g.dim
    if delta.rows != m:
        raise ShapeError(f"delta has {delta.rows} rows, expected {m}")
    if n is None:
        n = next((k for k in range(m + 1) if comb(m, k) == delta.cols), None)
        if n is None:
            raise ShapeError(f"no exterior power of R^{m} has dimension {delta.cols}")
    if delta.cols != comb(m, n):
        raise ShapeError(f"delta has {delta.cols} columns, expected C({m},{n}) = {comb(m, n)}")
    tuples = list(itertools.combinations(range(m), n))
    images = [_row_to_blade(row, tuples) for row in delta.entries]
    checked = 0
    for x, y in itertools.combinations(range(m), 2):
        checked += 1
        lhs: dict = {}
        for k, v in enumerate(g.output((x, y))):
            if v:
                for t, c in images[k].items():
                    lhs[t] = lhs.get(t, 0) + v * c
        rhs = dict(_ad_on_power(g, x, images[y], n))
        for t, c in _ad_on_power(g, y, images[x], n).items():
            rhs[t] = rhs.get(t, 0) - c
        diff = {t: lhs.get(t, 0) - rhs.get(t, 0) for t in set(lhs) | set(rhs)}
        diff = {t: v for t, v in sorted(diff.items()) if v}
        if diff:
            w = {
                "kind": "cocycle",
                "pair": [x, y],
                "residual": [{"index": list(t), "value": str(v)} for t, v in diff.items()],
            }
            return CheckReport("cocycle", False, w, {"pairs": checked})
    return CheckReport("cocycle", True, stats={"pairs": checked})


def cocycle_coboundary(g: NAryStructure, r: dict, n: int) -> RatMatrix:
    """The coboundary X -> ad_X r of an n-vector ``r``; always a cocycle."""
    tuples = list(itertools.combinations(range(g.dim), n))
    rows = []
    for x in range(g.dim):
        img = _ad_on_power(g, x, {tuple(k): as_rational(v) for k, v in r.items()}, n)
        rows.append([img.get(t, 0) for t in tuples])
    return RatMatrix(rows, len(tuples))


# -- normal forms -------------------------------------------------------------


def _volume(m: int, indices: Sequence[int]) -> MultiVectorField:
    return MultiVectorField.basis(m, tuple(indices))


def normal_form_A(n: int, m: int, phi: Poly) -> MultiVectorField:
    """phi d_0 ^ ... ^ d_{n-1} with phi linear."""
    if phi.nvars != m:
        raise DimensionError(f"phi has {phi.nvars} variables, expected {m}")
    if phi.degree() > 1:
        raise ShapeError("phi must be linear")
    if n > m:
        raise ShapeError(f"n = {n} exceeds m = {m}")
    return _volume(m, range(n)).scale(phi)


def normal_form_C(n: int, m: int, a: Sequence[Sequence]) -> MultiVectorField:
    """d_0 ^ ... ^ d_{n-2} ^ V with V = sum_{i,j >= n-1} a_ij x_i d_j.

    ``a`` is square of size m - n + 1, indexed from coordinate n-1.
    """
    size = m - n + 1
    if size < 1:
        raise ShapeError(f"need m >= n, got n={n}, m={m}")
    if len(a) != size or any(len(row) != size for row in a):
        raise ShapeError(f"a must be {size}x{size}")
    off = n - 1
    v_terms = {}
    for r, row in enumerate(a):
        for c, val in enumerate(row):
            val = as_rational(val)
            if val:
                j = off + c
                v_terms[j] = v_terms.get(j, Poly.zero(m)) + Poly.var(m, off + r, val)
    v = MultiVectorField(m, 1, [((j,), p) for j, p in v_terms.items()])
    return mv_wedge(_volume(m, range(n - 1)), v)


def _restricted_derivative(alpha: DiffForm, keep: int) -> DiffForm:
    """d of alpha restricted to the first ``keep`` coordinates (others set to 0)."""
    kept = range(keep)
    terms = []
    for (j,), c in alpha.terms.items():
        if j < keep:
            terms.append(((j,), c.substitute_zero(kept)))
    return exterior_derivative(DiffForm(alpha.m, 1, terms))


def _gradient(phi: Poly) -> DiffForm:
    return DiffForm(phi.nvars, 1, [((k,), phi.partial(k)) for k in range(phi.nvars)])


def normal_form_B1(n: int, m: int, phi: Poly, a: Mapping[tuple, object] | None = None) -> MultiVectorField:
    """i_alpha(d_0 ^ ... ^ d_n) with alpha = d phi + sum a_ij x_i dx_j.

    ``phi`` is quadratic in x_0..x_n; ``a`` maps (i, j) with i > n and
    j <= n (0-based) to rationals.
    """
    if m < n + 1:
        raise ShapeError(f"need m >= n + 1, got n={n}, m={m}")
    if phi.nvars != m or phi.degree() > 2:
        raise ShapeError("phi must be a polynomial of degree <= 2 in m variables")
    if phi.substitute_zero(range(n + 1)) != phi:
        raise ShapeError(f"phi may only involve x0..x{n}")
    alpha = _gradient(phi)
    for (i, j), v in (a or {}).items():
        if not (i > n and j <= n and i < m):
            raise ShapeError(f"a_{i}{j} outside i > {n}, j <= {n}")
        alpha = alpha + DiffForm(m, 1, [((j,), Poly.var(m, i, v))])
    if _restricted_derivative(alpha, n + 1).terms:
        raise ShapeError("alpha restricted to the first n+1 coordinates is not closed")
    return contract_once(alpha, _volume(m, range(n + 1)))


def normal_form_B2(n: int, m: int, phi: Poly, a: Mapping[int, object] | None = None,
                   b: Mapping[int, object] | None = None) -> MultiVectorField:
    """i_alpha(d_0 ^ ... ^ d_n) with
    alpha = d phi + 1/2((x_0 + sum a_i x_i) dx_1 - (x_1 + sum b_j x_j) dx_0).

    ``phi`` is quadratic in x_0, x_1.  The extra indices of ``a`` and
    ``b`` must lie beyond the first n+1 coordinates.
    """
    if m < n + 1:
        raise ShapeError(f"need m >= n + 1, got n={n}, m={m}")
    if phi.nvars != m or phi.degree() > 2:
        raise ShapeError("phi must be a polynomial of degree <= 2 in m variables")
    if phi.substitute_zero((0, 1)) != phi:
        raise ShapeError("phi may only involve x0, x1")
    half = Fraction(1, 2)
    first = Poly.var(m, 0)
    second = Poly.var(m, 1)
    for coeffs, name in ((a, "a"), (b, "b")):
        for i in (coeffs or {}):
            if not n < i < m:
                raise ShapeError(f"{name}_{i} must index a coordinate in {n + 1}..{m - 1}")
    for i, v in (a or {}).items():
        first = first + Poly.var(m, i, v)
    for j, v in (b or {}).items():
        second = second + Poly.var(m, j, v)
    alpha = _gradient(phi) + DiffForm(m, 1, [((1,), first.scale(half)), ((0,), second.scale(-half))])
    d_restricted = _restricted_derivative(alpha, n + 1)
    origin = [0] * m
    if not d_restricted.evaluate(origin).terms:
        raise ShapeError("d(alpha restricted) vanishes at the origin")
    return contract_once(alpha, _volume(m, range(n + 1)))


# -- fixtures -----------------------------------------------------------------


def so3() -> NAryStructure:
    """[e0,e1] = e2, [e1,e2] = e0, [e2,e0] = e1."""
    return NAryStructure(2, 3, {((0, 1), 2): 1, ((1, 2), 0): 1, ((2, 0), 1): 1})


def so4() -> NAryStructure:
    """so(3) + so(3), which is isomorphic to so(4)."""
    return direct_sum(so3(), so3())


def heisenberg() -> NAryStructure:
    """[e0,e1] = e2."""
    return NAryStructure(2, 3, {((0, 1), 2): 1})


def abelian(dim: int, n: int = 2) -> NAryStructure:
    return NAryStructure(n, dim, {})


FIXTURE_ALGEBRAS = {"so3": so3, "so4": so4, "heisenberg": heisenberg}

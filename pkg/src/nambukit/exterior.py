"""Graded exterior calculus with polynomial coefficients on R^m.

Multivector fields and differential forms are stored the same way: a
mapping from strictly increasing index tuples to :class:`Poly`
coefficients.  Indices are 0-based, so ``(0, 2)`` on a multivector is
``d/dx0 ^ d/dx2`` and on a form is ``dx0 ^ dx2``.

Contraction always inserts into the first slot::

    i_w(X1 ^ ... ^ Xp) = sum_k (-1)^(k-1) w(Xk) X1 ^ ... ^ Xk^ ^ ... ^ Xp

and the Schouten bracket is normalised so that ``schouten(X, A)`` is the
Lie derivative of ``A`` along the vector field ``X``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .ratpoly import DimensionError, Poly, as_rational, subspace_span

__all__ = [
    "DegreeError",
    "MultiVectorField",
    "DiffForm",
    "canonical_index",
    "mv_wedge",
    "form_wedge",
    "contract_once",
    "contract_functions",
    "pairing",
    "differential",
    "exterior_derivative",
    "interior_vector",
    "schouten",
    "lie_derivative",
    "tangent_lift",
    "tangent_lift_function",
    "support_subspace",
    "evaluate_mv",
]


class DegreeError(ValueError):
    """A tensor of the wrong degree was supplied."""


def canonical_index(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort ``indices``, returning (permutation sign, sorted tuple).

    A repeated index gives sign 0.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def _merge(a: tuple, b: tuple) -> tuple[int, tuple]:
    """Sign and sorted index of the wedge of basis elements ``a`` and ``b``."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a) & set(b):
        return 0, ()
    # sign = (-1)^(number of pairs (i in a, j in b) with i > j)
    inversions = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inversions += j
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


def _accumulate(terms: dict, index: tuple, coeff: Poly):
    if not coeff.terms:
        return
    cur = terms.get(index)
    if cur is None:
        terms[index] = coeff
    else:
        s = cur + coeff
        if s.terms:
            terms[index] = s
        else:
            del terms[index]


class _Graded:
    """Shared storage and linear structure for multivectors and forms."""

    __slots__ = ("m", "degree", "terms")
    kind = "tensor"

    def __init__(self, m: int, degree: int, terms=None):
        if degree < 0 or degree > m:
            raise DegreeError(f"degree {degree} impossible in dimension {m}")
        self.m = m
        self.degree = degree
        clean: dict = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for index, coeff in items:
            if isinstance(coeff, (int, Fraction)):
                coeff = Poly.const(m, coeff)
            if coeff.nvars != m:
                raise DimensionError(f"coefficient in {coeff.nvars} variables, expected {m}")
            if len(index) != degree:
                raise DegreeError(f"index {tuple(index)} has length {len(index)}, expected {degree}")
            if any(not 0 <= i < m for i in index):
                raise IndexError(f"index {tuple(index)} out of range for dimension {m}")
            sign, key = canonical_index(index)
            if sign:
                _accumulate(clean, key, coeff if sign > 0 else -coeff)
        self.terms = clean

    @classmethod
    def _raw(cls, m, degree, terms):
        t = cls.__new__(cls)
        t.m = m
        t.degree = degree
        t.terms = terms
        return t

    @classmethod
    def zero(cls, m: int, degree: int):
        return cls(m, degree)

    @classmethod
    def function(cls, f: Poly):
        return cls._raw(f.nvars, 0, {(): f} if f.terms else {})

    @classmethod
    def basis(cls, m: int, indices: Sequence[int], coeff=1):
        return cls(m, len(indices), [(tuple(indices), coeff)])

    # -- linear structure -------------------------------------------------

    def _same(self, other):
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {self.kind} with {other.kind}")
        if self.m != other.m:
            raise DimensionError(f"dimension mismatch: {self.m} vs {other.m}")
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(out, k, v)
        return self._raw(self.m, self.degree, out)

    def __neg__(self):
        return self._raw(self.m, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_Graded":
        """Multiply by a rational or a polynomial function."""
        if isinstance(c, Poly):
            if c.nvars != self.m:
                raise DimensionError("scalar function lives in the wrong dimension")
            out = {}
            for k, v in self.terms.items():
                _accumulate(out, k, v * c)
            return self._raw(self.m, self.degree, out)
        c = as_rational(c)
        if not c:
            return self._raw(self.m, self.degree, {})
        return self._raw(self.m, self.degree, {k: v.scale(c) for k, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, _Graded):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.m == other.m
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.kind, self.m, self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, index: Sequence[int]) -> Poly:
        sign, key = canonical_index(index)
        if not sign:
            return Poly.zero(self.m)
        c = self.terms.get(key)
        if c is None:
            return Poly.zero(self.m)
        return c if sign > 0 else -c

    def as_function(self) -> Poly:
        if self.degree:
            raise DegreeError(f"degree {self.degree} {self.kind} is not a function")
        return self.terms.get((), Poly.zero(self.m))

    def components(self) -> list[Poly]:
        """Components of a degree-1 tensor as a dense list."""
        if self.degree != 1:
            raise DegreeError(f"components() needs degree 1, got {self.degree}")
        return [self.coeff((i,)) for i in range(self.m)]

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    def sorted_items(self):
        return sorted(self.terms.items())

    def evaluate(self, point: Sequence):
        if len(point) != self.m:
            raise DimensionError(f"point has length {len(point)}, expected {self.m}")
        out = {}
        for k, v in self.terms.items():
            c = v(point)
            if c:
                out[k] = Poly.const(self.m, c)
        return self._raw(self.m, self.degree, out)

    def embed(self, m: int, offset: int = 0):
        """Re-home into R^m, shifting coordinate i to i + offset."""
        return self._raw(
            m,
            self.degree,
            {tuple(i + offset for i in k): v.embed(m, offset) for k, v in self.terms.items()},
        )

    _symbol = "?"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.sorted_items():
            blade = "^".join(f"{self._symbol}{i}" for i in k)
            coeff = str(v)
            if not blade:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(blade)
            elif coeff == "-1":
                parts.append("-" + blade)
            else:
                parts.append(f"({coeff})*{blade}")
        return " + ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}(m={self.m}, degree={self.degree}, {self})"


class MultiVectorField(_Graded):
    """Antisymmetric contravariant tensor field with polynomial coefficients."""

    __slots__ = ()
    kind = "multivector"
    _symbol = "d"


class DiffForm(_Graded):
    """Differential form with polynomial coefficients."""

    __slots__ = ()
    kind = "form"
    _symbol = "dx"


def _coerce_function(obj, m=None) -> Poly:
    if isinstance(obj, Poly):
        return obj
    if isinstance(obj, _Graded):
        return obj.as_function()
    raise TypeError(f"expected a polynomial, got {type(obj).__name__}")


# -- products -----------------------------------------------------------------


def _wedge(a: _Graded, b: _Graded, cls):
    if a.m != b.m:
        raise DimensionError(f"dimension mismatch: {a.m} vs {b.m}")
    out: dict = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            sign, key = _merge(ia, ib)
            if sign:
                prod = ca * cb
                _accumulate(out, key, prod if sign > 0 else -prod)
    return cls._raw(a.m, a.degree + b.degree, out)


def mv_wedge(a: MultiVectorField, b: MultiVectorField) -> MultiVectorField:
    if not isinstance(a, MultiVectorField) or not isinstance(b, MultiVectorField):
        raise TypeError("mv_wedge expects two multivector fields")
    return _wedge(a, b, MultiVectorField)


def form_wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    if not isinstance(a, DiffForm) or not isinstance(b, DiffForm):
        raise TypeError("form_wedge expects two differential forms")
    return _wedge(a, b, DiffForm)


# -- contraction -------------------------------------------------------------


def _insert_first_slot(weights: dict, t: _Graded, cls):
    """Apply the first-slot insertion with per-direction weights {i: Poly}."""
    out: dict = {}
    for index, c in t.terms.items():
        for pos, i in enumerate(index):
            w = weights.get(i)
            if w is None:
                continue
            rest = index[:pos] + index[pos + 1:]
            prod = w * c
            _accumulate(out, rest, -prod if pos & 1 else prod)
    return cls._raw(t.m, t.degree - 1, out)


def contract_once(omega: DiffForm, a: MultiVectorField) -> MultiVectorField:
    """Insert the 1-form ``omega`` into the first slot of ``a``."""
    if not isinstance(omega, DiffForm) or omega.degree != 1:
        raise DegreeError("contraction needs a 1-form")
    if a.degree < 1:
        raise DegreeError("cannot contract a function")
    if omega.m != a.m:
        raise DimensionError(f"dimension mismatch: {omega.m} vs {a.m}")
    weights = {k[0]: v for k, v in omega.terms.items()}
    return _insert_first_slot(weights, a, MultiVectorField)


def interior_vector(x: MultiVectorField, omega: DiffForm) -> DiffForm:
    """Insert the vector field ``x`` into the first slot of ``omega``."""
    if not isinstance(x, MultiVectorField) or x.degree != 1:
        raise DegreeError("interior product needs a vector field")
    if x.m != omega.m:
        raise DimensionError(f"dimension mismatch: {x.m} vs {omega.m}")
    if omega.degree == 0:
        raise DegreeError("cannot insert a vector field into a function")
    weights = {k[0]: v for k, v in x.terms.items()}
    return _insert_first_slot(weights, omega, DiffForm)


def differential(f: Poly) -> DiffForm:
    """The exact 1-form df."""
    out = {}
    for k in range(f.nvars):
        d = f.partial(k)
        if d.terms:
            out[(k,)] = d
    return DiffForm._raw(f.nvars, 1, out)


def contract_functions(lam: MultiVectorField, fs: Sequence[Poly]) -> MultiVectorField:
    """i_{df_k} ... i_{df_1} lam: ``fs[0]`` goes in first."""
    if len(fs) > lam.degree:
        raise DegreeError(f"{len(fs)} functions exceed tensor degree {lam.degree}")
    out = lam
    for f in fs:
        f = _coerce_function(f)
        if f.nvars != lam.m:
            raise DimensionError(f"function in {f.nvars} variables, tensor in {lam.m}")
        out = contract_once(differential(f), out)
        if not out.terms:
            return MultiVectorField._raw(lam.m, lam.degree - len(fs), {})
    return out


def contract_forms(lam: MultiVectorField, mus: Sequence[DiffForm]) -> MultiVectorField:
    """i_{mu_k} ... i_{mu_1} lam for 1-forms ``mus``."""
    if len(mus) > lam.degree:
        raise DegreeError(f"{len(mus)} forms exceed tensor degree {lam.degree}")
    out = lam
    for mu in mus:
        out = contract_once(mu, out)
    return out


def pairing(lam: MultiVectorField, mus: Sequence[DiffForm]) -> Poly:
    """<lam, mu_1 ^ ... ^ mu_n> for 1-forms ``mus``."""
    if len(mus) != lam.degree:
        raise DegreeError(f"pairing a degree {lam.degree} field with {len(mus)} forms")
    return contract_forms(lam, mus).as_function()


# -- derivatives ---------------------------------------------------------------


def exterior_derivative(omega: DiffForm) -> DiffForm:
    if not isinstance(omega, DiffForm):
        raise TypeError("exterior_derivative expects a differential form")
    out: dict = {}
    for index, c in omega.terms.items():
        for j in range(omega.m):
            d = c.partial(j)
            if not d.terms:
                continue
            sign, key = _merge((j,), index)
            if sign:
                _accumulate(out, key, d if sign > 0 else -d)
    return DiffForm._raw(omega.m, omega.degree + 1, out)


def _bracket_simple(f: Poly, a: int, g: Poly, b: int) -> dict:
    """[f d_a, g d_b] as {direction: Poly}."""
    out: dict = {}
    t1 = f * g.partial(a)
    t2 = g * f.partial(b)
    if t1.terms:
        out[b] = t1
    if t2.terms:
        _acc_dir(out, a, -t2)
    return out


def _acc_dir(out: dict, k: int, v: Poly):
    cur = out.get(k)
    if cur is None:
        out[k] = v
    else:
        s = cur + v
        if s.terms:
            out[k] = s
        else:
            del out[k]


def _schouten_terms(ia: tuple, f: Poly, ib: tuple, g: Poly, out: dict):
    p, q = len(ia), len(ib)
    if p == 0 and q == 0:
        return
    if q == 0:
        # [f d_I, g] = sum_i (-1)^(p-i) f d_{a_i}(g) d_{I without a_i}
        for pos, a in enumerate(ia):
            d = g.partial(a)
            if not d.terms:
                continue
            rest = ia[:pos] + ia[pos + 1:]
            term = f * d
            _accumulate(out, rest, -term if (p - 1 - pos) & 1 else term)
        return
    if p == 0:
        # [f, B] = (-1)^q [B, f]
        tmp: dict = {}
        _schouten_terms(ib, g, ia, f, tmp)
        for k, v in tmp.items():
            _accumulate(out, k, -v if q & 1 else v)
        return
    # A = X1 ^ ... ^ Xp with X1 = f d_{a1}, Y1 = g d_{b1}, the rest constant.
    # [A, B] = sum_{i,j} (-1)^(i+j) [Xi, Yj] ^ X_(no i) ^ Y_(no j)
    for i, a in enumerate(ia):
        xrest = ia[:i] + ia[i + 1:]
        for j, b in enumerate(ib):
            if i and j:
                continue
            yrest = ib[:j] + ib[j + 1:]
            if i == 0 and j == 0:
                vec = _bracket_simple(f, a, g, b)
                rest_coeff = None
            elif i == 0:
                # [f d_a, d_b] = -d_b(f) d_a ; complement carries g
                d = f.partial(b)
                vec = {a: -d} if d.terms else {}
                rest_coeff = g
            else:
                # [d_a, g d_b] = d_a(g) d_b ; complement carries f
                d = g.partial(a)
                vec = {b: d} if d.terms else {}
                rest_coeff = f
            if not vec:
                continue
            s0 = -1 if (i + j) & 1 else 1
            s1, mid = _merge(xrest, yrest)
            if not s1:
                continue
            for k, c in vec.items():
                s2, key = _merge((k,), mid)
                if not s2:
                    continue
                coeff = c if rest_coeff is None else c * rest_coeff
                sign = s0 * s1 * s2
                _accumulate(out, key, coeff if sign > 0 else -coeff)


def schouten(a: MultiVectorField, b: MultiVectorField) -> MultiVectorField:
    """Schouten-Nijenhuis bracket [a, b] of degree p + q - 1."""
    if isinstance(a, Poly):
        a = MultiVectorField.function(a)
    if isinstance(b, Poly):
        b = MultiVectorField.function(b)
    if a.m != b.m:
        raise DimensionError(f"dimension mismatch: {a.m} vs {b.m}")
    deg = a.degree + b.degree - 1
    if deg < 0:
        return MultiVectorField._raw(a.m, 0, {})
    out: dict = {}
    if deg <= a.m:
        for ia, f in a.terms.items():
            for ib, g in b.terms.items():
                _schouten_terms(ia, f, ib, g, out)
    return MultiVectorField._raw(a.m, deg, out)


def lie_derivative(x: MultiVectorField, t):
    """L_x t for a multivector field, a form, or a polynomial function."""
    if not isinstance(x, MultiVectorField) or x.degree != 1:
        raise DegreeError("Lie derivative needs a vector field")
    if isinstance(t, Poly):
        return schouten(x, MultiVectorField.function(t)).as_function()
    if isinstance(t, MultiVectorField):
        return schouten(x, t)
    if isinstance(t, DiffForm):
        if x.m != t.m:
            raise DimensionError(f"dimension mismatch: {x.m} vs {t.m}")
        if t.degree == 0:
            f = t.as_function()
            return DiffForm.function(schouten(x, MultiVectorField.function(f)).as_function())
        first = interior_vector(x, exterior_derivative(t))
        inner = interior_vector(x, t)
        if inner.degree == 0:
            second = differential(inner.as_function())
        else:
            second = exterior_derivative(inner)
        return first + second
    raise TypeError(f"cannot take a Lie derivative of {type(t).__name__}")


# -- tangent lift ----------------------------------------------------------------


def tangent_lift_function(f: Poly) -> Poly:
    """d_T f = sum_k xdot^k df/dx^k in variables (x^0..x^{m-1}, xdot^0..xdot^{m-1})."""
    m = f.nvars
    out = Poly.zero(2 * m)
    for k in range(m):
        d = f.partial(k)
        if d.terms:
            out = out + d.embed(2 * m) * Poly.var(2 * m, m + k)
    return out


def tangent_lift(a: MultiVectorField) -> MultiVectorField:
    """Complete lift of ``a`` to TR^m = R^{2m}; dotted directions are m..2m-1."""
    if isinstance(a, Poly):
        return MultiVectorField.function(tangent_lift_function(a))
    m = a.m
    mm = 2 * m
    out: dict = {}
    for index, f in a.terms.items():
        dotted = tuple(m + i for i in index)
        # derivative term, all slots dotted; dotted indices stay increasing
        _accumulate(out, dotted, tangent_lift_function(f))
        big = f.embed(mm)
        for pos, i in enumerate(index):
            slots = dotted[:pos] + (i,) + dotted[pos + 1:]
            sign, key = canonical_index(slots)
            _accumulate(out, key, big if sign > 0 else -big)
    return MultiVectorField._raw(mm, a.degree, out)


# -- constant multivectors -----------------------------------------------------------


def evaluate_mv(a: MultiVectorField, point: Sequence) -> MultiVectorField:
    return a.evaluate(point)


def constant_vector(a: MultiVectorField) -> list[Fraction]:
    """Components of a constant vector."""
    return [c.constant_value() for c in a.components()]


def support_subspace(lam: MultiVectorField) -> list[list[Fraction]]:
    """Span of all i_w lam over basis (deg-1)-covectors w."""
    if not lam.terms:
        raise ValueError("support of the zero multivector is undefined")
    if not lam.is_constant():
        raise ValueError("support_subspace needs constant coefficients")
    m, p = lam.m, lam.degree
    if p == 0:
        return []
    # Contracting e_I by the covectors of S (I = S + {k}) leaves +-e_k with a
    # sign fixed by S up to the ordering of S + (k,); an overall sign per
    # vector does not change the span.
    coeffs = {idx: c.constant_value() for idx, c in lam.terms.items()}
    vectors = []
    for combo in _used_subsets(lam, p - 1):
        v = [Fraction(0)] * m
        for k in range(m):
            sign, idx = canonical_index(combo + (k,))
            if sign and idx in coeffs:
                v[k] += sign * coeffs[idx]
        if any(v):
            vectors.append(v)
    return subspace_span(vectors)


def _used_subsets(lam: MultiVectorField, size: int) -> Iterable[tuple]:
    # only subsets of some term's index can give a nonzero contraction
    seen = set()
    for index in sorted(lam.terms):
        for combo in combinations(index, size):
            if combo not in seen:
                seen.add(combo)
                yield combo


def coordinate_subsets(m: int, size: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), size))

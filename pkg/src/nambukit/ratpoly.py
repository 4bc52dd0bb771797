"""Exact rational polynomials and rational linear algebra.

Every coefficient is a :class:`fractions.Fraction`, so every identity
checked elsewhere in the package reduces to comparing two sparse
dictionaries for equality.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DimensionError",
    "Poly",
    "RatMatrix",
    "as_rational",
    "poly_add",
    "poly_mul",
    "poly_partial",
    "poly_eval",
    "mat_rank",
    "subspace_span",
    "subspace_intersect",
    "subspace_sum",
    "monomials_up_to",
]

Monomial = tuple


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or int")
    return Fraction(value)


def _grlex_key(exps: Monomial):
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial in ``nvars`` variables with rational coefficients.

    ``terms`` maps exponent tuples to nonzero :class:`Fraction` values.
    Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        if nvars < 0:
            raise DimensionError(f"nvars must be non-negative, got {nvars}")
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise DimensionError(
                        f"monomial {exps} has length {len(exps)}, expected {nvars}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = as_rational(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
            clean = {k: v for k, v in clean.items() if v}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        # trusted constructor: terms already pruned and canonical
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = as_rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, k: int, coeff=1) -> "Poly":
        if not 0 <= k < nvars:
            raise IndexError(f"variable index {k} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[k] = 1
        return cls(nvars, {tuple(exps): coeff})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff})

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(e) == d for e in self.terms)

    def sorted_terms(self):
        """Terms in descending graded lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=_grlex_key)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s += v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly._raw(self.nvars, {})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.nvars, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = as_rational(c)
        if not c:
            return Poly._raw(self.nvars, {})
        if c == 1:
            return self
        return Poly._raw(self.nvars, {k: v * c for k, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and evaluation ---------------------------------------------

    def partial(self, k: int) -> "Poly":
        if not 0 <= k < self.nvars:
            raise IndexError(f"variable index {k} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            ek = e[k]
            if ek:
                out[e[:k] + (ek - 1,) + e[k + 1:]] = c * ek
        return Poly._raw(self.nvars, out)

    def __call__(self, point: Sequence) -> Fraction:
        return poly_eval(self, point)

    def substitute_zero(self, keep: Iterable[int]) -> "Poly":
        """Set every variable outside ``keep`` to zero."""
        keep = set(keep)
        out = {}
        for e, c in self.terms.items():
            if all(not ei or i in keep for i, ei in enumerate(e)):
                out[e] = c
        return Poly._raw(self.nvars, out)

    def embed(self, nvars: int, offset: int = 0) -> "Poly":
        """Re-home into ``nvars`` variables, shifting variable i to i + offset."""
        if offset < 0 or offset + self.nvars > nvars:
            raise DimensionError(f"cannot embed {self.nvars} variables at offset {offset} into {nvars}")
        pad_l = (0,) * offset
        pad_r = (0,) * (nvars - offset - self.nvars)
        return Poly._raw(nvars, {pad_l + e + pad_r: c for e, c in self.terms.items()})

    def restrict(self, nvars: int) -> "Poly":
        """Drop trailing variables, which must not occur."""
        out = {}
        for e, c in self.terms.items():
            if any(e[nvars:]):
                raise DimensionError(f"{self} depends on variables beyond x{nvars - 1}")
            out[e[:nvars]] = c
        return Poly._raw(nvars, out)

    def __repr__(self):
        return f"Poly({self.nvars}, {self})"

    def __str__(self):
        from .literals import format_poly

        return format_poly(self)


# -- functional surface -------------------------------------------------------


def poly_add(p: Poly, q: Poly) -> Poly:
    p._check(q)
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    p._check(q)
    return p * q


def poly_partial(p: Poly, k: int) -> Poly:
    return p.partial(k)


def poly_eval(p: Poly, point: Sequence) -> Fraction:
    if len(point) != p.nvars:
        raise DimensionError(f"point has length {len(point)}, expected {p.nvars}")
    pt = [as_rational(v) for v in point]
    total = Fraction(0)
    for e, c in p.terms.items():
        term = c
        for v, k in zip(pt, e):
            if k:
                term *= v**k
        total += term
    return total


def monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    """All exponent tuples of total degree <= ``degree``, ascending grlex."""
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    out.sort(key=_grlex_key)
    return out


# -- rational linear algebra ------------------------------------------------


class RatMatrix:
    """Dense rational matrix, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        self.entries = [[as_rational(v) for v in row] for row in entries]
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != cols for r in self.entries):
            raise DimensionError("ragged matrix rows")
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def transpose(self) -> "RatMatrix":
        return RatMatrix([list(col) for col in zip(*self.entries)], self.rows)

    def rref(self) -> tuple[list[list[Fraction]], list[int]]:
        """Reduced row echelon form (nonzero rows only) and pivot columns."""
        a = [row[:] for row in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = 1 / a[r][c]
            a[r] = [v * inv for v in a[r]]
            for i in range(self.rows):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return a[:r], pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of {v : M v = 0}."""
        rows, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for row, p in zip(rows, pivots):
                v[p] = -row[f]
            basis.append(v)
        return basis

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"RatMatrix({[[str(v) for v in r] for r in self.entries]})"


def mat_rank(m: RatMatrix | Sequence[Sequence]) -> int:
    if not isinstance(m, RatMatrix):
        m = RatMatrix(m)
    return m.rank()


def _ambient(vectors: Sequence[Sequence]) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise DimensionError(f"vectors of mixed length {sorted(dims)}")
    return dims.pop() if dims else 0


def subspace_span(vectors: Sequence[Sequence], dim: int | None = None) -> list[list[Fraction]]:
    """Reduced echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    amb = _ambient(vectors)
    if dim is not None and amb != dim:
        raise DimensionError(f"vectors have length {amb}, expected {dim}")
    rows, _ = RatMatrix(vectors, amb).rref()
    return rows


def subspace_sum(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    return subspace_span(list(a) + list(b))


def subspace_intersect(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    """Intersection of span(a) and span(b) as a reduced echelon basis.

    Solves sum_i s_i a_i - sum_j t_j b_j = 0 and maps the kernel back
    through the ``a`` coordinates.
    """
    if not a or not b:
        return []
    amb = _ambient(list(a) + list(b))
    a = subspace_span(a)
    b = subspace_span(b)
    # columns: a_1..a_p, -b_1..-b_q
    system = RatMatrix(
        [[v[i] for v in a] + [-w[i] for w in b] for i in range(amb)], len(a) + len(b)
    )
    out = []
    for kv in system.nullspace():
        vec = [sum((kv[j] * a[j][i] for j in range(len(a))), Fraction(0)) for i in range(amb)]
        out.append(vec)
    return subspace_span(out) if out else []

"""JSON document format for tensors, structure constants, algebroids and families.

Every document is an object::

    {"schema": 1, "kind": <kind>, "meta": {...}, "payload": {...}}

Polynomials travel as lists of ``{"exps": [...], "num": int, "den": int}``
so rationals stay exact.  Serialization is canonical: parsing a
serialized document and serializing it again gives the same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any

from .algebroid import AlgebroidSpec
from .exterior import DiffForm, MultiVectorField
from .filippov import NAryStructure
from .ratpoly import Poly

SCHEMA = 1
KINDS = ("multivector", "form", "structure_constants", "algebroid", "family")

__all__ = [
    "SCHEMA",
    "KINDS",
    "Document",
    "DocumentError",
    "parse_document",
    "serialize_document",
    "dump_json",
    "poly_to_json",
    "poly_from_json",
]


class DocumentError(ValueError):
    """Malformed document: ``path`` locates the field, or line/column for syntax errors."""

    def __init__(self, msg: str, path: str = "", line: int | None = None, column: int | None = None):
        where = f" at {path}" if path else ""
        if line is not None:
            where = f" at line {line}, column {column}"
        super().__init__(msg + where)
        self.path = path
        self.line = line
        self.column = column


@dataclass
class Document:
    kind: str
    payload: Any
    meta: dict = field(default_factory=dict)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- encoders ---------------------------------------------------------------------


def _rat(c: Fraction) -> dict:
    return {"num": c.numerator, "den": c.denominator}


def poly_to_json(p: Poly) -> list:
    return [dict(exps=list(e), **_rat(c)) for e, c in p.sorted_terms()]


def _tensor_payload(t) -> dict:
    return {
        "m": t.m,
        "degree": t.degree,
        "terms": [{"index": list(k), "coeff": poly_to_json(v)} for k, v in t.sorted_items()],
    }


def _encode(doc: Document) -> dict:
    p = doc.payload
    if doc.kind in ("multivector", "form"):
        body = _tensor_payload(p)
    elif doc.kind == "structure_constants":
        body = {
            "n": p.n,
            "dim": p.dim,
            "constants": [dict(tuple=list(i), k=k, **_rat(v)) for (i, k), v in sorted(p.c.items())],
        }
    elif doc.kind == "algebroid":
        body = {
            "m": p.m,
            "r": p.r,
            "n": p.n,
            "bracket": [{"tuple": list(i), "k": k, "coeff": poly_to_json(v)} for (i, k), v in p.bracket_sc.items()],
            "anchor": [{"tuple": list(i), "j": j, "coeff": poly_to_json(v)} for (i, j), v in p.anchor_sc.items()],
        }
    elif doc.kind == "family":
        members = list(p)
        if not members:
            raise DocumentError("a family needs at least one member")
        first = members[0]
        body = {
            "member_kind": first.kind,
            "m": first.m,
            "degree": first.degree,
            "members": [{"terms": _tensor_payload(t)["terms"]} for t in members],
        }
    else:
        raise DocumentError(f"unknown kind {doc.kind!r}")
    return {"schema": SCHEMA, "kind": doc.kind, "meta": dict(doc.meta), "payload": body}


def serialize_document(doc: Document) -> str:
    return dump_json(_encode(doc))


# -- decoders ---------------------------------------------------------------------


def _need(obj, key, path, typ=None):
    if not isinstance(obj, dict):
        raise DocumentError("expected an object", path)
    if key not in obj:
        raise DocumentError(f"missing field {key!r}", path)
    val = obj[key]
    if typ is not None and (not isinstance(val, typ) or isinstance(val, bool) and typ is not bool):
        raise DocumentError(f"field has type {type(val).__name__}, expected {typ.__name__}", f"{path}.{key}")
    return val


def _nonneg(obj, key, path) -> int:
    v = _need(obj, key, path, int)
    if v < 0:
        raise DocumentError("must be non-negative", f"{path}.{key}")
    return v


def _rational(obj, path) -> Fraction:
    num = _need(obj, "num", path, int)
    den = _need(obj, "den", path, int)
    if den <= 0:
        raise DocumentError("denominator must be positive", f"{path}.den")
    if gcd(num, den) != 1 and not (num == 0 and den == 1):
        raise DocumentError(f"rational {num}/{den} is not reduced", path)
    if num == 0 and den != 1:
        raise DocumentError("zero must be written 0/1", path)
    return Fraction(num, den)


def poly_from_json(terms, nvars: int, path: str = "coeff") -> Poly:
    if not isinstance(terms, list):
        raise DocumentError("polynomial must be a list of terms", path)
    out = {}
    for i, t in enumerate(terms):
        tp = f"{path}[{i}]"
        exps = _need(t, "exps", tp, list)
        if len(exps) != nvars:
            raise DocumentError(f"exponent list has length {len(exps)}, expected {nvars}", f"{tp}.exps")
        if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exps):
            raise DocumentError("exponents must be non-negative integers", f"{tp}.exps")
        c = _rational(t, tp)
        if not c:
            raise DocumentError("zero coefficients must be omitted", tp)
        key = tuple(exps)
        if key in out:
            raise DocumentError(f"duplicate monomial {exps}", tp)
        out[key] = c
    return Poly(nvars, out)


def _index(raw, length, bound, path) -> tuple:
    if not isinstance(raw, list) or any(not isinstance(i, int) or isinstance(i, bool) for i in raw):
        raise DocumentError("index must be a list of integers", path)
    if len(raw) != length:
        raise DocumentError(f"index has length {len(raw)}, expected {length}", path)
    if any(not 0 <= i < bound for i in raw):
        raise DocumentError(f"index {raw} out of range 0..{bound - 1}", path)
    if any(a >= b for a, b in zip(raw, raw[1:])):
        raise DocumentError(f"index {raw} is not strictly increasing", path)
    return tuple(raw)


def _decode_terms(terms, m, degree, path) -> list:
    if not isinstance(terms, list):
        raise DocumentError("terms must be a list", path)
    out = []
    seen = set()
    for i, t in enumerate(terms):
        tp = f"{path}[{i}]"
        idx = _index(_need(t, "index", tp), degree, m, f"{tp}.index")
        if idx in seen:
            raise DocumentError(f"duplicate index {list(idx)}", tp)
        seen.add(idx)
        out.append((idx, poly_from_json(_need(t, "coeff", tp), m, f"{tp}.coeff")))
    return out


def _decode_tensor(cls, body, path):
    m = _nonneg(body, "m", path)
    degree = _nonneg(body, "degree", path)
    if degree > m:
        raise DocumentError(f"degree {degree} exceeds dimension {m}", f"{path}.degree")
    return cls(m, degree, _decode_terms(_need(body, "terms", path), m, degree, f"{path}.terms"))


def _decode(obj) -> Document:
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object", "$")
    schema = _need(obj, "schema", "$")
    if schema != SCHEMA:
        raise DocumentError(f"unsupported schema {schema!r}", "$.schema")
    kind = _need(obj, "kind", "$", str)
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}", "$.kind")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict):
        raise DocumentError("meta must be an object", "$.meta")
    body = _need(obj, "payload", "$", dict)
    path = "$.payload"
    if kind == "multivector":
        payload = _decode_tensor(MultiVectorField, body, path)
    elif kind == "form":
        payload = _decode_tensor(DiffForm, body, path)
    elif kind == "structure_constants":
        n = _nonneg(body, "n", path)
        dim = _nonneg(body, "dim", path)
        if n < 2:
            raise DocumentError("arity must be >= 2", f"{path}.n")
        c = {}
        for i, e in enumerate(_need(body, "constants", path, list)):
            ep = f"{path}.constants[{i}]"
            idx = _index(_need(e, "tuple", ep), n, dim, f"{ep}.tuple")
            k = _need(e, "k", ep, int)
            if not 0 <= k < dim:
                raise DocumentError(f"output index {k} out of range", f"{ep}.k")
            if (idx, k) in c:
                raise DocumentError("duplicate constant", ep)
            val = _rational(e, ep)
            if not val:
                raise DocumentError("zero constants must be omitted", ep)
            c[(idx, k)] = val
        payload = NAryStructure(n, dim, c)
    elif kind == "algebroid":
        m = _nonneg(body, "m", path)
        r = _nonneg(body, "r", path)
        n = _nonneg(body, "n", path)
        if n < 2:
            raise DocumentError("arity must be >= 2", f"{path}.n")
        bracket, anchor = {}, {}
        for i, e in enumerate(_need(body, "bracket", path, list)):
            ep = f"{path}.bracket[{i}]"
            idx = _index(_need(e, "tuple", ep), n, r, f"{ep}.tuple")
            k = _need(e, "k", ep, int)
            if not 0 <= k < r:
                raise DocumentError(f"output index {k} out of range", f"{ep}.k")
            bracket[(idx, k)] = poly_from_json(_need(e, "coeff", ep), m, f"{ep}.coeff")
        for i, e in enumerate(_need(body, "anchor", path, list)):
            ep = f"{path}.anchor[{i}]"
            idx = _index(_need(e, "tuple", ep), n - 1, r, f"{ep}.tuple")
            j = _need(e, "j", ep, int)
            if not 0 <= j < m:
                raise DocumentError(f"base direction {j} out of range", f"{ep}.j")
            anchor[(idx, j)] = poly_from_json(_need(e, "coeff", ep), m, f"{ep}.coeff")
        payload = AlgebroidSpec(m, r, n, bracket, anchor)
    else:
        member_kind = _need(body, "member_kind", path, str)
        cls = {"multivector": MultiVectorField, "form": DiffForm}.get(member_kind)
        if cls is None:
            raise DocumentError(f"unknown member kind {member_kind!r}", f"{path}.member_kind")
        m = _nonneg(body, "m", path)
        degree = _nonneg(body, "degree", path)
        members = []
        for i, mem in enumerate(_need(body, "members", path, list)):
            mp = f"{path}.members[{i}]"
            members.append(cls(m, degree, _decode_terms(_need(mem, "terms", mp), m, degree, f"{mp}.terms")))
        if not members:
            raise DocumentError("a family needs at least one member", f"{path}.members")
        payload = members
    return Document(kind, payload, meta)


def parse_document(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"JSON syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    return _decode(obj)

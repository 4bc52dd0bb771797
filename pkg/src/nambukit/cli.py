"""Command line interface.

Usage::

    nambu check nambu poincare.mv
    nambu check fi-random example1_so4_k1.mv --degree 2 --trials 200 --seed 7
    nambu gen normal-form --family C --n 3 --m 3 --a 1 --out c.mv

Exit status: 0 on pass/success, 1 on a failure with a witness, 2 on
input errors.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

from . import algebroid as abx
from . import filippov as fil
from . import nambu as nb
from .documents import Document, DocumentError, dump_json, parse_document, serialize_document
from .exterior import DegreeError, DiffForm, MultiVectorField, tangent_lift
from .literals import LiteralSyntaxError, parse_poly, parse_rational
from .ratpoly import DimensionError, Poly, RatMatrix

FIXTURE_ENV = "NAMBU_FIXTURE_DIR"

INPUT_ERRORS = (
    DocumentError,
    LiteralSyntaxError,
    fil.ShapeError,
    nb.PreconditionError,
    nb.HypothesisViolation,
    DimensionError,
    DegreeError,
    FileNotFoundError,
    abx.NotAnAlgebroidTensor,
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    trials: int = 20
    degree_bound: int = 2
    parallelism: int = 1


# -- fixtures and inputs ---------------------------------------------------------


def fixture_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get(FIXTURE_ENV)
    if env:
        dirs.extend(Path(p) for p in env.split(os.pathsep) if p)
    dirs.append(Path(str(resources.files("nambukit") / "fixtures")))
    return dirs


def find_fixture(name: str) -> Path:
    for d in fixture_dirs():
        p = d / name
        if p.is_file():
            return p
    raise FileNotFoundError(f"no fixture named {name!r} in {[str(d) for d in fixture_dirs()]}")


def load_fixture(name: str) -> Document:
    return parse_document(find_fixture(name).read_text(encoding="utf-8"))


def _resolve(path: str | None, fixture: str | None) -> tuple[str, Document]:
    if fixture:
        return fixture, load_fixture(fixture)
    if not path:
        raise UsageError("an input document or --fixture is required")
    p = Path(path)
    if not p.is_file():
        p = find_fixture(path)
    return path, parse_document(p.read_text(encoding="utf-8"))


def _expect(doc: Document, *kinds) -> object:
    if doc.kind not in kinds:
        raise DocumentError(f"expected a {' or '.join(kinds)} document, got {doc.kind!r}", "$.kind")
    return doc.payload


# -- literal helpers for generator flags --------------------------------------------


def parse_matrix(text: str) -> list[list]:
    """``"1,0;0,1"`` -> [[1, 0], [0, 1]]."""
    return [[parse_rational(v) for v in row.split(",")] for row in text.split(";") if row.strip()]


def parse_sparse(text: str | None, pairs: bool):
    """``"4:0=1,5:2=-1/2"`` (pairs) or ``"4=1,5=2"`` into a dict."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, val = item.partition("=")
        if not _:
            raise LiteralSyntaxError(text, text.find(item), "expected key=value")
        if pairs:
            i, _, j = key.partition(":")
            out[(int(i), int(j))] = parse_rational(val)
        else:
            out[int(key)] = parse_rational(val)
    return out


# -- verbs ----------------------------------------------------------------------------


def _report(verb, source, cfg, rep: nb.CheckReport | None = None, **extra) -> dict:
    out = {"schema": 1, "kind": "report", "verb": verb, "input": source, "config": asdict(cfg)}
    if rep is not None:
        out.update(rep.to_dict())
    out.update(extra)
    return out


def _hamiltonian_table(lam: MultiVectorField) -> dict:
    table = {}
    for combo in itertools.combinations(range(lam.m), lam.degree - 1):
        h = nb.hamiltonian_field(lam, [Poly.var(lam.m, i) for i in combo])
        table[",".join(f"x{i}" for i in combo)] = str(h)
    return table


def cmd_check_nambu(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    lam = _expect(doc, "multivector")
    rep = nb.check_nambu_poisson(lam)
    extra = {}
    if args.hamiltonians and lam.degree >= 2:
        extra["hamiltonians"] = _hamiltonian_table(lam)
    return _report("check nambu", source, cfg, rep, **extra)


def cmd_check_filippov_linear(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    obj = _expect(doc, "multivector", "structure_constants")
    if isinstance(obj, MultiVectorField):
        rep = fil.fi_check_linear_functions(obj)
    else:
        rep = fil.check_fundamental_identity(obj)
    return _report("check filippov-linear", source, cfg, rep)


def cmd_check_fi_random(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    lam = _expect(doc, "multivector")
    rep = nb.fi_random_test(lam, cfg.degree_bound, cfg.trials, cfg.seed, jobs=cfg.parallelism)
    return _report("check fi-random", source, cfg, rep)


def cmd_check_algebroid(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    spec = _expect(doc, "algebroid")
    kw = dict(samples=cfg.trials, seed=cfg.seed, degree=cfg.degree_bound)
    reps = [
        abx.check_axiom_anchor(spec, **kw),
        abx.check_axiom_leibniz(spec, **kw),
        abx.check_fi_sections(spec, **kw),
    ]
    failed = next((r for r in reps if not r.passed), None)
    combined = nb.CheckReport(
        "algebroid",
        failed is None,
        None if failed is None else dict(failed.witness, axiom=failed.check),
        {"samples": cfg.trials},
    )
    return _report("check algebroid", source, cfg, combined, axioms={r.check: r.verdict for r in reps})


def cmd_check_cocycle(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    g = _expect(doc, "structure_constants")
    if not args.delta:
        raise UsageError("check cocycle needs --delta")
    delta = RatMatrix(parse_matrix(args.delta))
    rep = fil.adjoint_cocycle_check(g, delta, args.power)
    return _report("check cocycle", source, cfg, rep)


def cmd_check_lemma1(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    family = _expect(doc, "family")
    if not isinstance(family[0], MultiVectorField):
        raise DocumentError("lemma1 needs a family of multivectors", "$.payload.member_kind")
    try:
        res = nb.lemma1_dichotomy(family)
    except nb.Lemma1Counterexample as exc:
        rep = nb.CheckReport("lemma1", False, {"kind": "lemma1", "detail": str(exc)})
        return _report("check lemma1", source, cfg, rep)
    out = _report("check lemma1", source, cfg)
    out.update(res.to_dict())
    return out


def _emit_doc(kind, payload, meta) -> Document:
    return Document(kind, payload, meta)


def cmd_gen_normal_form(args, cfg):
    n, m = args.n, args.m
    if n is None or m is None:
        raise UsageError("gen normal-form needs --n and --m")
    fam = args.family
    phi = parse_poly(args.phi, m) if args.phi else Poly.zero(m)
    if fam == "A":
        lam = fil.normal_form_A(n, m, phi if args.phi else Poly.var(m, 0))
    elif fam == "C":
        size = m - n + 1
        a = parse_matrix(args.a) if args.a else [[0] * size for _ in range(size)]
        lam = fil.normal_form_C(n, m, a)
    elif fam == "B1":
        lam = fil.normal_form_B1(n, m, phi, parse_sparse(args.a, pairs=True))
    else:
        lam = fil.normal_form_B2(n, m, phi, parse_sparse(args.a, False), parse_sparse(args.b, False))
    meta = {"name": f"normal_form_{fam}", "notes": f"n={n} m={m}"}
    return _emit_doc("multivector", lam, meta)


def _algebra(args) -> tuple[str, fil.NAryStructure]:
    if args.algebra:
        if args.algebra not in fil.FIXTURE_ALGEBRAS:
            raise UsageError(f"unknown algebra {args.algebra!r}; choose from {sorted(fil.FIXTURE_ALGEBRAS)}")
        return args.algebra, fil.FIXTURE_ALGEBRAS[args.algebra]()
    source, doc = _resolve(args.input, args.fixture)
    return source, _expect(doc, "structure_constants")


def cmd_gen_example1(args, cfg):
    name, g = _algebra(args)
    lam = fil.example1_build(g, args.k)
    return _emit_doc("multivector", lam, {"name": f"example1_{name}_k{args.k}"})


def cmd_gen_example3(args, cfg):
    name, c = _algebra(args)
    g = parse_poly(args.g, c.dim) if args.g else Poly.const(c.dim, 1)
    return _emit_doc("algebroid", abx.example3_build(c, g), {"name": f"example3_{name}", "notes": f"g={g}"})


def cmd_gen_example4(args, cfg):
    if args.n is None or args.m is None:
        raise UsageError("gen example4 needs --n and --m")
    spec = abx.example4_build(args.n, args.m)
    return _emit_doc("algebroid", spec, {"name": f"example4_n{args.n}_m{args.m}"})


def cmd_lift_tangent(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    lam = _expect(doc, "multivector")
    meta = {"name": f"tangent_lift({doc.meta.get('name', source)})",
            "notes": f"variables x0..x{lam.m - 1} then dotted x{lam.m}..x{2 * lam.m - 1}"}
    return _emit_doc("multivector", tangent_lift(lam), meta)


def cmd_bracket_forms(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    lam = _expect(doc, "multivector")
    if not args.forms:
        raise UsageError("bracket forms needs --forms FILE (a family of 1-forms)")
    _, fdoc = _resolve(args.forms, None)
    forms = _expect(fdoc, "family")
    if not all(isinstance(f, DiffForm) for f in forms):
        raise DocumentError("--forms must hold a family of forms", "$.payload.member_kind")
    return _emit_doc("form", nb.form_bracket(lam, forms), {"name": "form_bracket"})


def cmd_bracket_nambu(args, cfg):
    source, doc = _resolve(args.input, args.fixture)
    lam = _expect(doc, "multivector")
    fs = [parse_poly(f, lam.m) for f in (args.f or [])]
    value = nb.nambu_bracket(lam, fs)
    return _report("bracket nambu", source, cfg, None, verdict="pass", functions=[str(f) for f in fs],
                   result=str(value))


VERBS = {
    ("check", "nambu"): cmd_check_nambu,
    ("check", "filippov-linear"): cmd_check_filippov_linear,
    ("check", "fi-random"): cmd_check_fi_random,
    ("check", "algebroid"): cmd_check_algebroid,
    ("check", "cocycle"): cmd_check_cocycle,
    ("check", "lemma1"): cmd_check_lemma1,
    ("gen", "normal-form"): cmd_gen_normal_form,
    ("gen", "example1"): cmd_gen_example1,
    ("gen", "example3"): cmd_gen_example3,
    ("gen", "example4"): cmd_gen_example4,
    ("lift", "tangent"): cmd_lift_tangent,
    ("bracket", "forms"): cmd_bracket_forms,
    ("bracket", "nambu"): cmd_bracket_nambu,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="input document path or fixture name")
    common.add_argument("--fixture", help="load a shipped fixture by name")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--degree", type=int, default=2, help="degree bound for random samples")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the output here instead of stdout")
    # verb-specific
    common.add_argument("--hamiltonians", action="store_true", help="list coordinate Hamiltonian fields")
    common.add_argument("--delta", help="cocycle matrix, rows separated by ';'")
    common.add_argument("--power", type=int, help="exterior power of the cocycle target")
    common.add_argument("--family", choices=("A", "B1", "B2", "C"), default="A")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--phi")
    common.add_argument("--a")
    common.add_argument("--b")
    common.add_argument("--g")
    common.add_argument("--algebra")
    common.add_argument("--forms")
    common.add_argument("--f", action="append", help="function literal; repeat for each slot")

    parser = argparse.ArgumentParser(prog="nambu", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)
    by_group: dict = {}
    for group, verb in VERBS:
        by_group.setdefault(group, []).append(verb)
    for group, verbs in by_group.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="verb", required=True)
        for verb in verbs:
            sub.add_parser(verb, parents=[common])
    return parser


def _text(obj) -> str:
    if isinstance(obj, Document):
        lines = [f"{obj.kind}: {obj.meta.get('name', '')}"]
        payload = obj.payload
        if isinstance(payload, list):
            lines.extend(str(p) for p in payload)
        elif isinstance(payload, (MultiVectorField, DiffForm)):
            lines.append(str(payload))
        elif isinstance(payload, abx.AlgebroidSpec):
            for (idx, k), c in payload.bracket_sc.items():
                lines.append(f"[{', '.join(f'e{i}' for i in idx)}] -> ({c}) e{k}")
            for (idx, j), c in payload.anchor_sc.items():
                lines.append(f"a({', '.join(f'e{i}' for i in idx)}) -> ({c}) d{j}")
        elif isinstance(payload, fil.NAryStructure):
            for (idx, k), c in sorted(payload.c.items()):
                lines.append(f"[{', '.join(f'e{i}' for i in idx)}] -> {c} e{k}")
        else:
            lines.append(serialize_document(obj).rstrip())
        return "\n".join(lines) + "\n"
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {v}" for k, v in sorted(val.items()))
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def run_command(argv: list[str]) -> tuple[str, int]:
    """Run one CLI invocation; returns (stdout text, exit status)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(seed=args.seed, trials=args.trials, degree_bound=args.degree, parallelism=args.jobs)
    handler = VERBS[(args.group, args.verb)]
    result = handler(args, cfg)
    if isinstance(result, Document):
        text = serialize_document(result) if args.format == "json" else _text(result)
        status = 0
    else:
        text = dump_json(result) if args.format == "json" else _text(result)
        status = 0 if result.get("verdict", "pass") == "pass" else 1
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        text = ""
    return text, status


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        text, status = run_command(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

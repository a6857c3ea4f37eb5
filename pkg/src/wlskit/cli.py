"""Command-line front end: ``wlskit <area> <command> [flags]``.

Exit codes: 0 when the question was decided (whatever the verdict),
1 for invalid input, 2 when a search budget ran out.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import abelian, fixtures, io as wio, matrix_roots, rings, spectral
from .matrix import IntMatrix, InvalidInput, diagonal_of, smith_normal_form

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2
ARGV = "<argv>"


class CliError(Exception):
    def __init__(self, file: str, field: str, message: str):
        super().__init__(f"{file}: {field}: {message}")
        self.file, self.field, self.message = file, field, message


class Undecided(Exception):
    """A bounded search finished without an answer; the partial result is still reported."""

    def __init__(self, result: dict):
        super().__init__("search budget exhausted")
        self.result = result


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1, not argparse's default 2 (reserved for budget)
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


_FIELD = re.compile(r"^([A-Za-z_][\w.\[\]{},\-]*): (.*)$", re.S)


def _split_locus(msg: str) -> tuple[str, str]:
    m = _FIELD.match(msg)
    return (m.group(1), m.group(2)) if m else ("input", msg)


# ---------------------------------------------------------------- inputs

def _inputs(args) -> list[str]:
    paths = list(args.inputs or []) + list(getattr(args, "positional", None) or [])
    if args.fixture:
        try:
            paths.append(str(fixtures.path(args.fixture)))
        except InvalidInput as exc:
            raise CliError(ARGV, "--fixture", _split_locus(str(exc))[1]) from None
    return paths


def _load(args, kinds: tuple[str, ...], index: int = 0):
    paths = _inputs(args)
    if len(paths) <= index:
        raise CliError(ARGV, "--in", f"missing input file #{index + 1} (expected one of: {', '.join(kinds)})")
    path = paths[index]
    try:
        kind, doc = wio.load_document(path, kinds)
        obj = wio.decode(kind, doc) if kind in wio._DECODERS else doc
    except InvalidInput as exc:
        field, msg = _split_locus(str(exc))
        raise CliError(path, field, msg) from None
    args._current = path
    return kind, obj


def _vector(text: str | None, flag: str) -> list | None:
    if text is None:
        return None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raise CliError(ARGV, flag, f"expected a JSON list, got {text!r}") from None
    if not isinstance(raw, list):
        raise CliError(ARGV, flag, "expected a JSON list of coordinates")
    try:
        return [wio.parse_rational(x, f"{flag}[{i}]") for i, x in enumerate(raw)]
    except InvalidInput as exc:
        raise CliError(ARGV, *_split_locus(str(exc))) from None


def _positive(v: int | None, flag: str) -> int:
    if v is None:
        raise CliError(ARGV, flag, "required")
    if v <= 0:
        raise CliError(ARGV, flag, "must be a positive integer")
    return v


def _ring(args) -> rings.GradedRing:
    _, R = _load(args, ("ring",))
    v = R.violations()
    if v:
        raise CliError(args._current, *_split_locus(v[0]))
    return R


def _cells(d: dict) -> dict:
    return {f"{p},{q}": v for (p, q), v in sorted(d.items())}


def _group_text(P) -> dict:
    return {"rank": P.rank, "torsion": list(P.torsion), "text": str(P)}


# ---------------------------------------------------------------- group

def cmd_group_snf(args) -> dict:
    kind, obj = _load(args, ("matrix", "group"))
    M = obj if kind == "matrix" else obj.relations
    U, D, V = smith_normal_form(M)
    return {"U": U, "D": D, "V": V, "diagonal": diagonal_of(D)}


def cmd_group_canon(args) -> dict:
    kind, obj = _load(args, ("group", "subgroup"))
    P = obj.as_presentation() if kind == "subgroup" else obj
    return _group_text(P)


def cmd_group_exp(args) -> dict:
    kind, obj = _load(args, ("group", "morphism"))
    if kind == "group":
        return {"exponent": abelian.exponent_group(obj), "group": _group_text(obj)}
    return {
        "exponent": abelian.exponent_morphism(obj),
        "cokernel": _group_text(obj.cokernel()),
        "lattice_part_exponent": abelian.exponent_morphism(abelian.lattice_part(obj)),
    }


def cmd_group_autorder(args) -> dict:
    _, f = _load(args, ("morphism",))
    return matrix_roots.automorphism_order(f).as_dict()


def cmd_group_subtype(args) -> dict:
    _, doc = _load(args, ("subtype",))
    path = args._current
    try:
        p = wio.parse_int(doc.get("p"), "p")
        d = wio.parse_int(doc.get("d"), "d")
        m = wio.parse_int(doc.get("m"), "m")
        gens = wio.vectors_from_json(doc.get("generators"), m, "generators")
        return {"p": p, "d": d, "m": m, "type": abelian.subgroup_type_p(p, d, m, gens)}
    except InvalidInput as exc:
        raise CliError(path, *_split_locus(str(exc))) from None


# ---------------------------------------------------------------- matrix

def _square(args) -> IntMatrix:
    _, A = _load(args, ("matrix",))
    if not A.is_square:
        raise CliError(args._current, "matrix", f"expected a square matrix, got {A.rows}x{A.cols}")
    return A


def cmd_matrix_order(args) -> dict:
    A = _square(args)
    return {"char_poly": matrix_roots.char_poly(A), **matrix_roots.finite_order(A).as_dict()}


def cmd_matrix_quasiunipotent(args) -> dict:
    A = _square(args)
    e, cofactor = matrix_roots.is_quasi_unipotent(A)
    out = {"char_poly": matrix_roots.char_poly(A), "quasi_unipotent": e is not None}
    if e is not None:
        out["e"] = e
    else:
        out["non_cyclotomic_factor"] = cofactor
    return out


def cmd_matrix_root(args) -> dict:
    A = _square(args)
    r = _positive(args.r, "--r")
    bound = _positive(args.bound if args.bound is not None else 3, "--bound")
    B = matrix_roots.find_root_bruteforce(A, r, bound, budget=args.budget or 10_000_000)
    out = {"r": r, "entry_bound": bound, "found": B is not None}
    if B is not None:
        out["root"] = B
    return out


def cmd_matrix_binomial(args) -> dict:
    B = _square(args)
    return matrix_roots.verify_root_binomial(B, _positive(args.s, "--s"))


# ---------------------------------------------------------------- spectral

def cmd_ss_pages(args) -> dict:
    _, FC = _load(args, ("filtered_complex",))
    mode = args.mode
    pages = spectral.spectral_pages(FC, mode)
    out = []
    for page in pages:
        if mode == "Z":
            entries = {c: str(page.entry(*c)) for c in FC.cells if not page.entry(*c).is_trivial()}
            diffs = [
                {"p": p, "q": q, "matrix": d.matrix}
                for (p, q), d in sorted(page.differentials.items())
                if not d.is_zero()
            ]
        else:
            entries = {c: page.dim(*c) for c in FC.cells if page.dim(*c)}
            diffs = [{"p": p, "q": q, "rank": rk} for (p, q), rk in sorted(page.ranks.items()) if rk]
        out.append({"r": page.r, "entries": _cells(entries), "nonzero_differentials": diffs})
    conv = spectral.convergence_check(FC)
    return {"mode": mode, "last_page": FC.last_page, "pages": out, "betti": conv["betti"], "converges": conv["holds"]}


def cmd_ss_tensorq(args) -> dict:
    _, FC = _load(args, ("filtered_complex",))
    return spectral.verify_tensoring_Q(FC)


def cmd_ss_degenerate_q(args) -> dict:
    _, FC = _load(args, ("filtered_complex",))
    bad = spectral.nonzero_rational_differentials(FC, "Q")
    return {"degenerates": not bad, "nonzero_differentials": [{"r": r, "p": p, "q": q} for r, p, q in bad]}


def cmd_ss_inclusion(args) -> dict:
    _, FC = _load(args, ("filtered_complex",))
    k = args.k if args.k is not None else 2
    try:
        report = spectral.page_inclusion(FC, k, args.cx, args.c)
    except InvalidInput as exc:
        raise CliError(args._current, "filtration", str(exc)) from None
    return {"k": k, "cells": _cells(report), "holds": all(v["holds"] for v in report.values())}


def cmd_ss_bound(args) -> dict:
    vals = {}
    for flag, attr in (("--n", "n"), ("--p", "p"), ("--k", "k"), ("--exp-iota-high", "exp_iota_high"), ("--exp-iota-3", "exp_iota_3"), ("--exp-w", "exp_w")):
        v = getattr(args, attr)
        if v is None:
            raise CliError(ARGV, flag, "required")
        vals[attr] = v
    try:
        lam, mu, big = spectral.degeneracy_bound(vals["n"], vals["p"], args.q or 0, vals["k"], vals["exp_iota_high"], vals["exp_iota_3"], vals["exp_w"])
    except InvalidInput as exc:
        flag = "--" + str(exc).split()[0].replace("_", "-").lower()
        raise CliError(ARGV, flag, str(exc)) from None
    return {"lambda": lam, "mu": mu, "Lambda": big}


# ---------------------------------------------------------------- rings

def cmd_ring_validate(args) -> dict:
    _, R = _load(args, ("ring",))
    report = rings.validate_ring(R)
    if report["valid"]:
        report["poincare_duality"] = rings.poincare_duality_check(R)
        report["betti"] = R.betti
    else:
        raise CliError(args._current, *_split_locus(report["violations"][0]))
    return report


def _omega(args, R) -> list:
    omega = _vector(args.omega, "--omega")
    if omega is None:
        raise CliError(ARGV, "--omega", "required")
    if len(omega) != (R.dim(2) if R.n >= 2 else 0):
        raise CliError(ARGV, "--omega", f"expected {R.dim(2) if R.n >= 2 else 0} coordinates, got {len(omega)}")
    return omega


def cmd_ring_wls(args) -> dict:
    R = _ring(args)
    omega = _omega(args, R)
    v = rings.is_wls_class(R, omega)
    out = v.as_dict()
    out["omega"] = omega
    if v.w1_witness is not None:
        out["w1_witness_verified"] = rings.verify_w1_witness(R, omega, v.w1_witness)
    if v.w2_witness is not None:
        out["w2_witness_verified"] = rings.verify_w2_witness(R, omega, v.w2_witness)
    return out


def cmd_ring_wls_find(args) -> dict:
    R = _ring(args)
    attempts = args.budget if args.budget is not None else 500
    height = args.bound if args.bound is not None else 10
    found = rings.find_wls_class(R, seed=args.seed, attempts=attempts, height_bound=height)
    out = {"seed": args.seed, "attempts": attempts, "height_bound": height, "found": found is not None}
    if found is None:
        raise Undecided(out)
    out.update(found.as_dict())
    return out


def cmd_ring_tau(args) -> dict:
    R = _ring(args)
    t, wit = rings.tau(R)
    return {"tau": t, "witness": wit}


def _lambda(args, R) -> tuple[list, str]:
    lam = _vector(args.lam, "--lambda")
    if lam is not None:
        need = R.dim(2) if R.n >= 2 else 0
        if len(lam) != need:
            raise CliError(ARGV, "--lambda", f"expected {need} lattice coordinates, got {len(lam)}")
        if any(x.denominator != 1 for x in lam):
            raise CliError(ARGV, "--lambda", "lattice coordinates must be integers")
        return [int(x) for x in lam], "--lambda"
    found = rings.find_wls_class(R, seed=args.seed)
    if found is None:
        raise CliError(ARGV, "--lambda", "no WLS class found to supply a default; pass --lambda")
    return found.lam_lattice, "wls-find"


def cmd_ring_delta(args) -> dict:
    R = _ring(args)
    lam, src = _lambda(args, R)
    d = args.d if args.d is not None else R.n
    if not 0 <= d <= R.n:
        raise CliError(ARGV, "--d", f"degree {d} outside 0..{R.n}")
    return {"d": d, "lambda_lattice": lam, "lambda_source": src, "delta": rings.delta_d(R, lam, d)}


def cmd_ring_c3(args) -> dict:
    R = _ring(args)
    lam, src = _lambda(args, R)
    try:
        value = rings.c3(R, lam)
    except InvalidInput as exc:
        raise CliError(args._current, "lattice", str(exc)) from None
    return {
        "c3": value,
        "delta_n_minus_1": rings.delta_d(R, lam, R.n - 1),
        "delta_n": rings.delta_d(R, lam, R.n),
        "lambda_lattice": lam,
        "lambda_source": src,
    }


def cmd_ring_discsym_bound(args) -> dict:
    R = _ring(args)
    t, _ = rings.tau(R)
    return {"n": R.n, "tau": t, "discsym_bound": rings.discsym_bound(R)}


def cmd_ring_product(args) -> dict:
    paths = _inputs(args)
    if len(paths) != 2:
        raise CliError(ARGV, "--in", f"expected exactly two ring files, got {len(paths)}")
    R1 = _ring(args)
    _, R2 = _load(args, ("ring",), 1)
    v = R2.violations()
    if v:
        raise CliError(paths[1], *_split_locus(v[0]))
    P = rings.product_ring(R1, R2)
    return {"betti": P.betti, "ring": wio.document("ring", P.to_dict())}


def cmd_ring_betti(args) -> dict:
    return rings.betti_report(_ring(args))


def cmd_ring_stabilizer(args) -> dict:
    n, g, gx = _positive(args.n, "--n"), _positive(args.g, "--g"), _positive(args.gx, "--gx")
    if args.c3 is not None:
        c, src = _positive(args.c3, "--c3"), "--c3"
    else:
        if not _inputs(args):
            raise CliError(ARGV, "--c3", "required unless a ring is given with --in")
        R = _ring(args)
        lam, _ = _lambda(args, R)
        c, src = rings.c3(R, lam), "ring"
    return {"c3": c, "c3_source": src, "n": n, "G_order": g, "Gx_order": gx, "holds": rings.stabilizer_check(c, n, g, gx)}


COMMANDS: dict[str, dict[str, Callable]] = {
    "group": {
        "snf": cmd_group_snf,
        "canon": cmd_group_canon,
        "exp": cmd_group_exp,
        "autorder": cmd_group_autorder,
        "subtype": cmd_group_subtype,
    },
    "matrix": {
        "order": cmd_matrix_order,
        "quasiunipotent": cmd_matrix_quasiunipotent,
        "root": cmd_matrix_root,
        "binomial": cmd_matrix_binomial,
    },
    "ss": {
        "pages": cmd_ss_pages,
        "tensorq": cmd_ss_tensorq,
        "degenerate-q": cmd_ss_degenerate_q,
        "inclusion": cmd_ss_inclusion,
        "bound": cmd_ss_bound,
    },
    "ring": {
        "validate": cmd_ring_validate,
        "wls": cmd_ring_wls,
        "wls-find": cmd_ring_wls_find,
        "tau": cmd_ring_tau,
        "delta": cmd_ring_delta,
        "c3": cmd_ring_c3,
        "discsym-bound": cmd_ring_discsym_bound,
        "product": cmd_ring_product,
        "betti": cmd_ring_betti,
        "stabilizer": cmd_ring_stabilizer,
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wlskit", description="Exact algebra for abelian groups, spectral sequences, integer matrices and cohomology rings.")
    areas = parser.add_subparsers(dest="area", metavar="{group,matrix,ss,ring}", parser_class=_Parser)
    parser.area_parsers = {}
    for area, cmds in COMMANDS.items():
        ap = parser.area_parsers[area] = areas.add_parser(area)
        sub = ap.add_subparsers(dest="command", metavar="{" + ",".join(cmds) + "}", parser_class=_Parser)
        for name in cmds:
            cp = sub.add_parser(name)
            cp.add_argument("positional", nargs="*", metavar="FILE", help="input files (same as --in)")
            cp.add_argument("--in", dest="inputs", nargs="+", metavar="FILE")
            cp.add_argument("--fixture", choices=fixtures.names())
            cp.add_argument("--out", metavar="FILE")
            cp.add_argument("--seed", type=int, default=0)
            cp.add_argument("--budget", type=int)
            cp.add_argument("--format", choices=("text", "json"), default="text")
            cp.add_argument("--bound", type=int, help="entry bound (matrix root) or height bound (ring wls-find)")
            cp.add_argument("--r", type=int)
            cp.add_argument("--s", type=int)
            cp.add_argument("--k", type=int)
            cp.add_argument("--d", type=int)
            cp.add_argument("--n", type=int)
            cp.add_argument("--p", type=int)
            cp.add_argument("--q", type=int)
            cp.add_argument("--g", type=int, help="|G|")
            cp.add_argument("--gx", type=int, help="|G_x|")
            cp.add_argument("--c3", type=int)
            cp.add_argument("--cx", type=int)
            cp.add_argument("--c", type=int)
            cp.add_argument("--exp-iota-high", type=int)
            cp.add_argument("--exp-iota-3", type=int)
            cp.add_argument("--exp-w", type=int)
            cp.add_argument("--omega")
            cp.add_argument("--lambda", dest="lam")
            cp.add_argument("--mode", choices=("Z", "Q"), default="Z")
    return parser


def _render_text(report: dict) -> str:
    lines = [f"# {report['command']}"]
    body = report.get("result") or report.get("error") or {}
    for key, value in body.items():
        lines.append(f"{key}: {json.dumps(value, sort_keys=True, ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, args, stream) -> None:
    encoded = wio.encode(report)
    text = wio.dumps(report) if args.format == "json" else _render_text(encoded)
    if args.out and "result" in report:
        Path(args.out).write_text(text)
    else:
        stream.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if args.area is None or args.command is None:
        (parser if args.area is None else parser.area_parsers[args.area]).print_usage(sys.stderr)
        return EXIT_INVALID
    command = f"{args.area} {args.command}"
    report: dict[str, Any] = {"schema": wio.REPORT_SCHEMA, "command": command}
    code = EXIT_OK
    args._current = ARGV
    inputs = list(args.inputs or []) + list(args.positional or []) + ([f"fixture:{args.fixture}"] if args.fixture else [])
    try:
        report["result"] = COMMANDS[args.area][args.command](args)
        report["inputs"], report["seed"] = inputs, args.seed
    except Undecided as exc:
        report["result"] = exc.result
        report["inputs"], report["seed"] = inputs, args.seed
        code = EXIT_BUDGET
    except CliError as exc:
        report["error"] = {"kind": "invalid_input", "file": exc.file, "field": exc.field, "message": exc.message}
        code = EXIT_INVALID
    except InvalidInput as exc:
        field, msg = _split_locus(str(exc))
        report["error"] = {"kind": "invalid_input", "file": args._current, "field": field, "message": msg}
        code = EXIT_INVALID
    except matrix_roots.BudgetExceeded as exc:
        report["error"] = {"kind": "budget_exceeded", "explored": exc.explored, "budget": exc.budget, "message": str(exc)}
        code = EXIT_BUDGET
    _emit(report, args, sys.stdout if "result" in report or args.format == "json" else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

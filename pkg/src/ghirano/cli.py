"""Command-line front end.

Every subcommand prints one JSON report to standard output. Exit codes:
0 when the result holds, 1 when the property does not hold (or the matrix
has no inverse of the requested kind), 2 on bad input or an unmet
precondition.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, additive, blockmat, cline, testkit
from .core import NumericPolicy, classify, fro, residual
from .errors import DimensionError, HiranoError, PreconditionError, ResidualError
from .hirano import has_hirano, hirano_inverse
from .matfile import MatrixFileError, read_matrix, to_document
from .spectral import drazin_inverse, gs_drazin

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return to_document(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _policy(args) -> NumericPolicy:
    try:
        return NumericPolicy(args.tol_rank, args.tol_spec, args.tol_res)
    except ValueError as exc:
        raise InputError("--tol-rank/--tol-spec/--tol-res", str(exc)) from exc


def _load(path, flag):
    if path is None:
        raise InputError(flag, "required")
    return read_matrix(path)


def _cmd_drazin(args, pol):
    d = drazin_inverse(_load(args.inp, "--in"), pol)
    return EXIT_OK, {
        "index": d.index,
        "core_rank": d.core_rank,
        "dinv": d.dinv,
        "spec_idem": d.spec_idem,
        "residuals": dict(d.residuals),
    }


def _cmd_hirano(args, pol):
    cert = hirano_inverse(_load(args.inp, "--in"), pol)
    if cert is None:
        return EXIT_FALSE, {"has_hirano": False}
    return EXIT_OK, {"has_hirano": True, **cert.to_dict()}


def _cmd_decompose(args, pol):
    a = _load(args.inp, "--in")
    cert = hirano_inverse(a, pol)
    split = gs_drazin(a, pol)
    out = {
        "tripotent_split": None if cert is None else {"e": cert.e, "w": cert.w, "f": cert.f, "g": cert.g},
        "idempotent_split": None if split is None else {"e": split[0], "w": split[1]},
    }
    return (EXIT_FALSE if cert is None else EXIT_OK), out


def _cmd_classify(args, pol):
    rep = classify(_load(args.inp, "--in"), pol)
    return (EXIT_OK if rep.is_hirano else EXIT_FALSE), rep.to_dict()


def _quad_report(q: cline.QuadInstance, pol):
    a, b, c, d = q.a, q.b, q.c, q.d
    out = {
        "family": q.family,
        "hyp_weak": q.hyp_weak,
        "hyp_strong": q.hyp_strong,
        "aca_dba_residual": residual(a @ c @ a, d @ b @ a, a, c, a),
        "has_hirano_ac": has_hirano(a @ c, pol),
        "has_hirano_bd": has_hirano(b @ d, pol),
    }
    out["qnil_transfer"] = cline.qnil_transfer(q, pol)
    out["hirano_transfer"] = cline.hirano_transfer(q, pol)
    return out


def _cmd_verify_cline(args, pol):
    if args.example37:
        if args.trunc is None:
            raise InputError("--trunc", "required with --example37")
        try:
            q = cline.truncated_shift_quad(args.trunc, pol)
        except ValueError as exc:
            raise InputError("--trunc", str(exc)) from exc
        out = _quad_report(q, pol)
        out["trunc"] = args.trunc
        out["aca_neq_dba"] = out["aca_dba_residual"] > pol.tol_residual
        ok = out["hyp_weak"] and out["aca_neq_dba"] and out["has_hirano_ac"] and out["hirano_transfer"]
        return (EXIT_OK if ok else EXIT_FALSE), out
    if args.blocks:
        mats = [read_matrix(p) for p in args.blocks]
        q = cline.QuadInstance.build(*mats, pol=pol)
        out = _quad_report(q, pol)
        return (EXIT_OK if out["qnil_transfer"] and out["hirano_transfer"] else EXIT_FALSE), out
    a, b = _load(args.inp, "--in"), _load(args.in2, "--in2")
    formula, res = cline.cline_residual(a, b, pol)
    out = {"formula": formula, "residual": res, "holds": res <= pol.tol_residual}
    return (EXIT_OK if out["holds"] else EXIT_FALSE), out


def _cmd_verify_additive(args, pol):
    a, b = _load(args.inp, "--in"), _load(args.in2, "--in2")
    p = additive.PairInstance.build(a, b, pol)
    out = {
        "weak_comm": p.weak_comm,
        "full_comm": p.full_comm,
        "both_hirano": p.both_hirano,
        "has_hirano_sum": has_hirano(p.a + p.b, pol),
        "orthogonal": fro(p.a @ p.b) <= pol.tol_residual * (1 + fro(p.a)) * (1 + fro(p.b)),
    }
    out["product_hirano"] = additive.product_hirano(p, pol)
    s, t = additive.additive_equiv(p, pol)
    out["additive_equiv"] = [s, t]
    ok = out["product_hirano"] and s == t
    return (EXIT_OK if ok else EXIT_FALSE), out


_BLOCK_CHECKS = {
    "triangular": blockmat.triangular_hirano,
    "cross_split": blockmat.cross_split_hirano,
    "aligned_split": blockmat.aligned_split_hirano,
    "schur": blockmat.schur_hirano,
}


def _cmd_verify_block(args, pol):
    if not args.blocks:
        raise InputError("--blocks", "required (A B C D)")
    m = blockmat.Block2x2(*(read_matrix(p) for p in args.blocks))
    checks = {}
    for name, fn in _BLOCK_CHECKS.items():
        try:
            checks[name] = {"applicable": True, "holds": fn(m, pol)}
        except PreconditionError as exc:
            checks[name] = {"applicable": False, "failed_condition": exc.condition}
    applied = [c["holds"] for c in checks.values() if c["applicable"]]
    out = {"sizes": list(m.sizes), "has_hirano_assembled": has_hirano(m.assembled, pol), "checks": checks}
    if not applied:
        return EXIT_INPUT, out
    return (EXIT_OK if all(applied) else EXIT_FALSE), out


def _cmd_proptest(args, pol):
    outcomes = testkit.run_trials(args.theorem, args.trials, args.seed, pol)
    summary = testkit.summarize(outcomes)
    out = {
        "theorem": args.theorem,
        "trials": args.trials,
        "summary": summary,
        "outcomes": [o.to_dict() for o in outcomes],
    }
    return (EXIT_OK if summary["failed"] == 0 else EXIT_FALSE), out


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=1e-10, help="relative singular-value cutoff")
    common.add_argument("--tol-spec", type=float, default=1e-6, help="eigenvalue cluster radius")
    common.add_argument("--tol-res", type=float, default=1e-8, help="relative residual cutoff")

    parser = argparse.ArgumentParser(prog="ghirano", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def single(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--in", dest="inp", metavar="A.json", required=True)
        sp.set_defaults(run=fn)
        return sp

    single("drazin", _cmd_drazin, "Drazin inverse, index and spectral idempotent")
    single("hirano", _cmd_hirano, "generalized Hirano inverse with certificate")
    single("decompose", _cmd_decompose, "tripotent-plus-nilpotent and idempotent-plus-nilpotent splits")
    single("classify", _cmd_classify, "eigenvalue clustering at -1, 0, 1")

    sp = sub.add_parser("verify-cline", parents=[common], help="Cline's formula and four-element transfer")
    sp.add_argument("--in", dest="inp", metavar="A.json")
    sp.add_argument("--in2", metavar="B.json")
    sp.add_argument("--blocks", nargs=4, metavar=("A", "B", "C", "D"), help="quad a b c d")
    sp.add_argument("--example37", action="store_true", help="truncated shift counterexample")
    sp.add_argument("--trunc", type=int)
    sp.set_defaults(run=_cmd_verify_cline)

    sp = sub.add_parser("verify-additive", parents=[common], help="sum and product of a weakly commuting pair")
    sp.add_argument("--in", dest="inp", metavar="A.json", required=True)
    sp.add_argument("--in2", metavar="B.json", required=True)
    sp.set_defaults(run=_cmd_verify_additive)

    sp = sub.add_parser("verify-block", parents=[common], help="2x2 block matrix checks")
    sp.add_argument("--blocks", nargs=4, metavar=("A", "B", "C", "D"), required=True)
    sp.set_defaults(run=_cmd_verify_block)

    sp = sub.add_parser("proptest", parents=[common], help="seeded property trials for one statement")
    sp.add_argument("--theorem", required=True, choices=testkit.THEOREMS)
    sp.add_argument("--trials", type=_nonneg_int, default=100)
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    sp.set_defaults(run=_cmd_proptest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    report = {
        "tool": "ghirano",
        "version": __version__,
        "command": args.command,
        "seed": getattr(args, "seed", None),
    }
    try:
        pol = _policy(args)
        report["policy"] = pol.to_dict()
        code, result = args.run(args, pol)
    except (InputError, MatrixFileError) as exc:
        print(f"ghirano: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimensionError as exc:
        print(f"ghirano: error: dimension: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        report.update(status="precondition", failed_condition=exc.condition)
        print(json.dumps(_jsonable(report), sort_keys=True, indent=2))
        return EXIT_INPUT
    except ResidualError as exc:
        report.update(status="residual-failure", message=str(exc), residuals=exc.residuals)
        print(json.dumps(_jsonable(report), sort_keys=True, indent=2))
        return EXIT_FALSE
    except HiranoError as exc:
        report.update(status="error", message=str(exc))
        print(json.dumps(_jsonable(report), sort_keys=True, indent=2))
        return EXIT_FALSE
    report["status"] = "ok" if code == EXIT_OK else ("false" if code == EXIT_FALSE else "precondition")
    report["result"] = result
    print(json.dumps(_jsonable(report), sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())

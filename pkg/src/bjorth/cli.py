"""Command line front end: every capability on matrix JSON files.

stdout carries exactly one JSON document per invocation (all documents carry
"schema_version"); human-readable remarks go to stderr behind --summary.
Exit codes: 0 success (for check/witness: ORTHOGONAL), 1 NOT_ORTHOGONAL or
witness-search shortfall (an outcome, not an error), 2 input error,
3 numerical failure (exhausted budgets, boundary verdicts, suite failures).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import ConvergenceError, Field, InputError, Matrix, operator_norm
from .decision import (Status, Verdict, Witness, WitnessFailure, decide,
                       epsilon_witness, find_witness)
from .harness import (SCHEMA_VERSION, SuiteConfig, Tolerances, gen_ginibre,
                      gen_orthogonal_pair, run_suite, save_csv, save_report)
from .lineopt import DEFAULT_BUDGET, DEFAULT_TOL, global_inf_lambda
from .minimax import minimax_report

_EXIT_BY_STATUS = {Status.ORTHOGONAL: 0, Status.NOT_ORTHOGONAL: 1,
                   Status.BOUNDARY: 3}


def _load_matrix(path: str) -> Matrix:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return Matrix.from_json(text)


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("BJORTH_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"BJORTH_SEED must be an integer, got {env!r}") from None
    return 0


def _emit(args, obj: dict) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _say(args, line: str) -> None:
    if getattr(args, "summary", False):
        print(line, file=sys.stderr)


def _lam_pair(lam) -> list:
    z = complex(lam)
    return [z.real, z.imag]


def _cert_json(cert) -> dict | None:
    if cert is None:
        return None
    return {"theta": cert.theta, "support": cert.support, "tol": cert.tol}


def _witness_json(w: Witness) -> dict:
    return {"x": w.x.to_pairs(), "norm_residual": w.norm_residual,
            "ip_residual": w.ip_residual, "epsilon": w.epsilon}


def _cmd_norm(args) -> int:
    a = _load_matrix(args.a)
    val = operator_norm(a)
    _emit(args, {"schema_version": SCHEMA_VERSION, "op_norm": val,
                 "rows": a.rows, "cols": a.cols, "field": a.field.value})
    _say(args, f"op_norm = {val:.12g}")
    return 0


def _cmd_distance(args) -> int:
    a = _load_matrix(args.a)
    b = _load_matrix(args.b)
    res = global_inf_lambda(a, b, tol=args.tol, budget=args.budget)
    _emit(args, {"schema_version": SCHEMA_VERSION, "value": res.value,
                 "lambda": _lam_pair(res.lambda_star),
                 "evaluations": res.evaluations,
                 "budget_limited": res.budget_limited})
    _say(args, f"min over lambda = {res.value:.12g} at lambda = {_lam_pair(res.lambda_star)}")
    return 3 if res.budget_limited else 0


def _cmd_check(args) -> int:
    a = _load_matrix(args.a)
    b = _load_matrix(args.b)
    rep = decide(a, b, method=args.method, tol=args.tol,
                 restarts=args.restarts, seed=_resolve_seed(args))
    v = rep.verdict
    _emit(args, {"schema_version": SCHEMA_VERSION, "status": v.status.value,
                 "margin": v.margin, "method": v.method.value, "tol": v.tol,
                 "certificate": _cert_json(v.certificate),
                 "witness": _witness_json(rep.witness) if rep.witness else None,
                 "witness_error": rep.witness_error})
    _say(args, f"{v.status.value}" + (f" (margin = {v.margin:.6g})"
                                      if v.margin is not None else ""))
    return _EXIT_BY_STATUS[v.status]


def _cmd_witness(args) -> int:
    a = _load_matrix(args.a)
    b = _load_matrix(args.b)
    seed = _resolve_seed(args)
    if args.eps is not None:
        out = epsilon_witness(a, b, args.eps, restarts=args.restarts, seed=seed)
        if isinstance(out, Witness):
            _emit(args, {"schema_version": SCHEMA_VERSION,
                         "status": "ORTHOGONAL", **_witness_json(out)})
            _say(args, f"witness found, epsilon = {out.epsilon:.3e}")
            return 0
        _emit(args, {"schema_version": SCHEMA_VERSION, "failed": True,
                     "best_value": out.best_value, "threshold": out.threshold,
                     "x": out.best_x.to_pairs()})
        _say(args, f"no witness: best value {out.best_value:.6g} "
                   f"below threshold {out.threshold:.6g}")
        return 1
    out = find_witness(a, b, restarts=args.restarts, seed=seed)
    if isinstance(out, Witness):
        _emit(args, {"schema_version": SCHEMA_VERSION,
                     "status": "ORTHOGONAL", **_witness_json(out)})
        _say(args, f"witness found, epsilon = {out.epsilon:.3e}")
        return 0
    _emit(args, {"schema_version": SCHEMA_VERSION, "status": out.status.value,
                 "margin": out.margin, "method": out.method.value,
                 "tol": out.tol, "certificate": _cert_json(out.certificate)})
    _say(args, "no witness exists: pair is not orthogonal")
    return 1


def _cmd_minimax(args) -> int:
    a = _load_matrix(args.a)
    b = _load_matrix(args.b)
    rep = minimax_report(a, b, restarts=args.restarts, seed=_resolve_seed(args),
                         tol=args.tol)
    _emit(args, {"schema_version": SCHEMA_VERSION, **rep.to_json_dict()})
    _say(args, f"lhs = {rep.lhs_value:.12g}, rhs = {rep.rhs_value:.12g}, "
               f"gap = {rep.gap:.3e}")
    return 3 if (rep.restart_starved or rep.budget_limited) else 0


_CONFIG_KEYS = {"dims", "trials_per_dim", "seed", "field", "tolerances",
                "minimax_restarts", "witness_restarts"}
_TOL_KEYS = {"decision_tol", "gap_tol", "witness_eps"}


def _suite_config(args) -> SuiteConfig:
    d = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                d = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in {args.config}: {exc}") from None
        if not isinstance(d, dict):
            raise InputError("suite config must be a JSON object")
        unknown = set(d) - _CONFIG_KEYS
        if unknown:
            raise InputError(f"unknown suite config keys: {sorted(unknown)}")
    tol_d = d.get("tolerances", {})
    if not isinstance(tol_d, dict) or set(tol_d) - _TOL_KEYS:
        raise InputError(f"tolerances must be an object with keys from {sorted(_TOL_KEYS)}")
    if args.seed is not None:
        seed = args.seed                  # explicit flag beats the config file
    elif "seed" in d:
        seed = d["seed"]
    else:
        seed = _resolve_seed(args)
    kw = {}
    if "dims" in d:
        kw["dims"] = tuple(d["dims"])
    if "trials_per_dim" in d:
        kw["trials_per_dim"] = d["trials_per_dim"]
    if "field" in d:
        kw["field"] = Field.parse(d["field"])
    if "minimax_restarts" in d:
        kw["minimax_restarts"] = d["minimax_restarts"]
    if "witness_restarts" in d:
        kw["witness_restarts"] = d["witness_restarts"]
    return SuiteConfig(seed=seed, tolerances=Tolerances(**tol_d), **kw)


def _cmd_suite(args) -> int:
    cfg = _suite_config(args)
    report = run_suite(cfg)
    if args.out:
        save_report(report, args.out)
    else:
        _emit(args, report)
    if args.csv:
        save_csv(report, args.csv)
    nfail = len(report["failures"])
    agg = report["aggregates"]
    _say(args, f"{len(report['records'])} records, {nfail} failures, "
               f"max_rel_gap = {agg['minimax']['max_rel_gap']}, "
               f"runtime = {report['runtimes']['total']:.1f}s")
    return 3 if nfail else 0


def _matrix_doc(m: Matrix) -> dict:
    return {"schema_version": SCHEMA_VERSION, **m.to_json_dict()}


def _write_json(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    field = Field.parse(args.field)
    if args.kind == "ginibre":
        m = gen_ginibre(args.n, seed, field)
        if args.out:
            _write_json(args.out, _matrix_doc(m))
            _say(args, f"wrote {args.out}")
        else:
            print(json.dumps(_matrix_doc(m), indent=2, sort_keys=True))
        return 0
    a, b = gen_orthogonal_pair(args.n, seed, field)
    if args.out:
        base = args.out[:-5] if args.out.endswith(".json") else args.out
        _write_json(base + ".A.json", _matrix_doc(a))
        _write_json(base + ".B.json", _matrix_doc(b))
        _say(args, f"wrote {base}.A.json and {base}.B.json")
    else:
        print(json.dumps({"schema_version": SCHEMA_VERSION,
                          "a": a.to_json_dict(), "b": b.to_json_dict()},
                         indent=2, sort_keys=True))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bjorth",
        description="Birkhoff-James orthogonality toolkit for matrix JSON files. "
                    "Exit codes: 0 success/ORTHOGONAL, 1 NOT_ORTHOGONAL, "
                    "2 input error, 3 numerical failure.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, tol=False, restarts=False, seed=False, budget=False):
        if tol:
            sp.add_argument("--tol", type=float, default=DEFAULT_TOL,
                            help="numerical tolerance (default 1e-7)")
        if restarts:
            sp.add_argument("--restarts", type=int, default=50,
                            help="multi-start budget (default 50)")
        if seed:
            sp.add_argument("--seed", type=int, default=None,
                            help="RNG seed (default: $BJORTH_SEED, else 0)")
        if budget:
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                            help="norm evaluation budget (default 100000)")
        sp.add_argument("--out", default=None, metavar="FILE",
                        help="write the JSON result to FILE instead of stdout")
        sp.add_argument("--summary", action="store_true",
                        help="print a one-line summary to stderr")

    sp = sub.add_parser("norm", help="operator norm of one matrix")
    sp.add_argument("a", metavar="A.json")
    common(sp)
    sp.set_defaults(func=_cmd_norm)

    sp = sub.add_parser("distance",
                        help="min over lambda of ||A + lambda*B|| with minimizer")
    sp.add_argument("a", metavar="A.json")
    sp.add_argument("b", metavar="B.json")
    common(sp, tol=True, budget=True)
    sp.set_defaults(func=_cmd_distance)

    sp = sub.add_parser("check", help="decide orthogonality of the pair")
    sp.add_argument("a", metavar="A.json")
    sp.add_argument("b", metavar="B.json")
    sp.add_argument("--method", choices=("def", "witness", "both"),
                    default="both", help="decision route (default both)")
    common(sp, tol=True, restarts=True, seed=True)
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("witness",
                        help="search for a witness vector (exact, or --eps relaxed)")
    sp.add_argument("a", metavar="A.json")
    sp.add_argument("b", metavar="B.json")
    sp.add_argument("--eps", type=float, default=None,
                    help="relaxed threshold: accept ||(A+tB)x|| > ||A|| - eps")
    common(sp, restarts=True, seed=True)
    sp.set_defaults(func=_cmd_witness)

    sp = sub.add_parser("minimax",
                        help="evaluate both sides of the minimax identity")
    sp.add_argument("a", metavar="A.json")
    sp.add_argument("b", metavar="B.json")
    common(sp, tol=True, restarts=True, seed=True)
    sp.set_defaults(func=_cmd_minimax)

    sp = sub.add_parser("suite", help="run the randomized evaluation suite")
    sp.add_argument("--config", default=None, metavar="cfg.json",
                    help="suite configuration JSON (defaults when omitted)")
    sp.add_argument("--csv", default=None, metavar="FILE",
                    help="also write the flat per-trial CSV")
    sp.add_argument("--seed", type=int, default=None,
                    help="override the config seed")
    sp.add_argument("--out", default=None, metavar="FILE",
                    help="write the report JSON to FILE instead of stdout")
    sp.add_argument("--summary", action="store_true",
                    help="print a one-line summary to stderr")
    sp.set_defaults(func=_cmd_suite)

    sp = sub.add_parser("gen", help="generate seeded random matrices")
    sp.add_argument("--kind", choices=("ginibre", "orthopair"), required=True)
    sp.add_argument("--n", type=int, required=True, help="matrix dimension")
    sp.add_argument("--field", default="complex",
                    help="scalar field: complex/c or real/r (default complex)")
    sp.add_argument("--seed", type=int, default=None,
                    help="RNG seed (default: $BJORTH_SEED, else 0)")
    sp.add_argument("--out", default=None, metavar="FILE",
                    help="ginibre: output file; orthopair: prefix for .A.json/.B.json")
    sp.add_argument("--summary", action="store_true",
                    help="print a one-line summary to stderr")
    sp.set_defaults(func=_cmd_gen)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

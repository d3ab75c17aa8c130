"""Command-line front end.

Subcommands: plan, construct, stats, certify, verify, simulate.  Output is
human-oriented text by default; ``--format json`` emits one JSON record
per line with stable field names, which is the only machine-stable
surface.  Exit codes: 0 success, 1 guarantee unsatisfied or verdict false,
2 infeasible or invalid input, 3 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, bounds, concat, simulate
from .codes import gv_construct, rs_generate
from .errors import GTCodesError, ParseError
from .field import build_field_cached

EXIT_OK = 0
EXIT_UNSATISFIED = 1
EXIT_INVALID = 2
EXIT_IO = 3


def _jsonable(value):
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator,
            "value": float(value)}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if value == bounds.UNBOUNDED:
        return "unbounded"
    return value


def _textable(value):
    if isinstance(value, Fraction):
        return f"{value} ({float(value):.6g})"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, dict):
        return {k: _textable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_textable(v) for v in value]
    if value == bounds.UNBOUNDED:
        return "unbounded"
    return value


def emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(_jsonable(record), sort_keys=True))
        return
    for key, value in record.items():
        print(f"{key}: {_textable(value)}")


def _plan_record(result: bounds.PlanResult) -> dict:
    return {
        "record": "plan", "q": result.q, "s": result.s, "m": result.m,
        "k": result.k, "M": result.M, "d_target": result.d_target,
        "achieved_N": result.achieved_N, "size": result.size,
        "N": result.N, "t": result.t, "epsilon": result.epsilon,
        "model": result.model, "strategy": result.strategy,
        "notes": list(result.notes),
    }


def _report_record(rep: bounds.GuaranteeReport) -> dict:
    return {
        "record": "guarantee", "model": rep.model, "t": rep.t,
        "epsilon": rep.epsilon, "satisfied": rep.satisfied, "lhs": rep.lhs,
        "rhs": rep.rhs, "direction": rep.direction, "reason": rep.reason,
        "inputs": rep.inputs,
    }


def _stats_record(st: analysis.DistanceStats) -> dict:
    return {
        "record": "distance_stats", "d_min": st.d_min, "D_avg_min": st.D_avg_min,
        "mean_pairwise": st.mean_pairwise, "D2": st.D2, "exact": st.exact,
    }


def cmd_plan(args) -> int:
    result = bounds.plan(args.n, args.t, args.eps, model=f"model{args.model}",
                         strategy=args.strategy)
    emit(_plan_record(result), args.format)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "plan":
        result = bounds.plan(args.n, args.t, args.eps,
                             model=f"model{args.model}",
                             strategy=args.strategy)
        _, matrix = bounds.realize_plan(result)
    else:
        fld = build_field_cached(args.q)
        if args.kind == "rs":
            if args.k is None:
                raise GTCodesError("rs construction requires --k")
            code = rs_generate(fld, args.k, args.m)
        else:
            if args.d_target is None:
                raise GTCodesError("gv construction requires --d-target")
            code = gv_construct(fld, args.m, args.d_target, k=args.k,
                                size=args.size)
        matrix = concat.concatenate(code)
        if args.n is not None:
            matrix = concat.truncate(matrix, args.n)
    concat.write_matrix(matrix, args.out, args.matrix_format)
    emit({"record": "matrix", "path": args.out, "M": matrix.M,
          "N": matrix.N, "meta": dict(matrix.meta),
          "content_hash": concat.content_hash(matrix)}, args.format)
    return EXIT_OK


def cmd_stats(args) -> int:
    matrix = concat.read_matrix(args.matrix)
    st = analysis.distance_stats(matrix, mode=args.mode, pairs=args.pairs,
                                 seed=args.seed if args.seed is not None else 0)
    emit(_stats_record(st), args.format)
    return EXIT_OK


def cmd_certify(args) -> int:
    matrix = concat.read_matrix(args.matrix)
    st = analysis.distance_stats(matrix, mode=args.stats_mode,
                                 pairs=args.pairs,
                                 seed=args.seed if args.seed is not None else 0)
    w = matrix.meta.get("w")
    if not w:
        weights = matrix.column_weights()
        if weights.min() != weights.max():
            raise GTCodesError("matrix is not constant weight; cannot certify")
        w = int(weights[0])
    if args.model == "1":
        rep = bounds.check_model1(w, st.d_min, st.D_avg_min, args.t,
                                  matrix.N, args.eps)
    elif args.model == "2":
        rep = bounds.check_model2(w, st.d_min, st.D_avg_min, args.t,
                                  matrix.N, args.eps)
    else:
        rep = bounds.check_model2_d2(w, st.d_min, st.D_avg_min, st.D2,
                                     args.t, matrix.N, args.eps)
    record = _report_record(rep)
    record["stats"] = _stats_record(st)
    emit(record, args.format)
    return EXIT_OK if rep.satisfied else EXIT_UNSATISFIED


def cmd_verify(args) -> int:
    matrix = concat.read_matrix(args.matrix)
    ok, witness = analysis.is_t_disjunct(matrix, args.t, budget=args.budget)
    record = {"record": "verify", "t": args.t, "disjunct": ok}
    if witness is not None:
        record["witness_set"] = list(witness[0])
        record["witness_column"] = witness[1]
    emit(record, args.format)
    return EXIT_OK if ok else EXIT_UNSATISFIED


def cmd_simulate(args) -> int:
    matrix = concat.read_matrix(args.matrix)
    model = simulate.DefectiveModel(kind=args.model, N=matrix.N, t=args.t)
    report = simulate.run_experiment(matrix, model, args.trials, args.seed,
                                     threads=args.threads)
    emit({
        "record": "experiment", "trials": report.trials,
        "exact_recoveries": report.exact_recoveries,
        "failure_rate": report.failure_rate,
        "wilson_95": list(report.wilson_95),
        "mean_false_positives": report.mean_false_positives,
        "max_false_positives": report.max_false_positives,
        "mean_defectives": report.mean_defectives,
        "max_defectives": report.max_defectives,
        "model": args.model, "t": args.t, "seed": report.seed,
        "matrix_hash": concat.content_hash(matrix),
    }, args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtcodes",
        description="Group-testing matrices from q-ary codes: planning, "
                    "construction, certification and simulation.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="choose construction parameters")
    p.add_argument("--n", type=int, required=True, help="number of items")
    p.add_argument("--t", type=int, required=True, help="defectives")
    p.add_argument("--eps", type=float, required=True, help="failure budget")
    p.add_argument("--model", choices=("1", "2"), default="2")
    p.add_argument("--strategy", choices=("optimized", "closed_form"),
                   default="optimized")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("construct", help="build a test matrix file")
    p.add_argument("--kind", choices=("plan", "gv", "rs"), default="plan")
    p.add_argument("--n", type=int, help="items (plan kind; or truncation)")
    p.add_argument("--t", type=int, help="defectives (plan kind)")
    p.add_argument("--eps", type=float, help="failure budget (plan kind)")
    p.add_argument("--model", choices=("1", "2"), default="2")
    p.add_argument("--strategy", choices=("optimized", "closed_form"),
                   default="optimized")
    p.add_argument("--q", type=int, help="field size (gv/rs kinds)")
    p.add_argument("--k", type=int, help="dimension")
    p.add_argument("--m", type=int, help="q-ary code length")
    p.add_argument("--d-target", type=int, help="q-ary distance target (gv)")
    p.add_argument("--size", type=int, help="subgroup codebook size (gv)")
    p.add_argument("--out", required=True, help="output matrix path")
    p.add_argument("--matrix-format", choices=("gtm1", "gtmb"),
                   default="gtm1")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("stats", help="distance statistics of a matrix file")
    p.add_argument("matrix")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--pairs", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, help="required for sampled mode")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("certify", help="evaluate a recovery guarantee")
    p.add_argument("matrix")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--model", choices=("1", "2", "2d2"), default="2")
    p.add_argument("--stats-mode", choices=("exact", "sampled"),
                   default="exact")
    p.add_argument("--pairs", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, help="required for sampled stats")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="exhaustive t-disjunctness check")
    p.add_argument("matrix")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--budget", type=int, default=analysis.DISJUNCT_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo recovery experiment")
    p.add_argument("matrix")
    p.add_argument("--model", type=int, choices=(1, 2), default=2)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "mode", None) == "sampled" and args.seed is None:
        parser.error("--seed is required with --mode sampled")
    if getattr(args, "stats_mode", None) == "sampled" and args.seed is None:
        parser.error("--seed is required with --stats-mode sampled")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GTCodesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: batch sweeps in, CSV/text reports out.

Subcommands: ``bounds`` (tradeoff report over a parameter grid or protocol
family), ``simulate`` (exact protocol error evaluation), ``verify``
(property suites), ``dcc`` (brute-force deterministic communication cost),
``rank`` (truncated-subspace dimension). Outputs are deterministic functions
of (config, seed): identical runs produce byte-identical files. Exit codes:
0 success, 1 internal failure or failed verification, 2 invalid
configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from typing import Mapping, Sequence

from .bounds import (
    CSV_HEADER,
    ReportPoint,
    build_report,
    default_references,
    qfp_report_points,
)
from .combinatorics import count_rank, log_rank_bounds, markov_photon_cutoff
from .errors import ConfigError, OptSmpError
from .smp import FunctionTable, bruteforce_deterministic_cc, equality_function, evaluate_error, load_protocol
from .truncation import transform_protocol
from .verify import DEFAULT_SEED, SUITES, run_suites

DCC_CONVENTION = (
    "protocol-tree depth; leaves are monochromatic rectangles; answer bit not charged"
)
MU_CONVENTION = "per-party-max"
DEFAULT_DELTA = 1e-4


def _write_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename; no partial files on failure."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".optsmp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        _write_atomic(out_path, text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> object:
    try:
        with open(path) as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc


def _int_list(value, field: str) -> list[int]:
    if isinstance(value, Mapping):
        lo, hi = value.get("min"), value.get("max")
        if not isinstance(lo, int) or not isinstance(hi, int) or lo > hi:
            raise ConfigError(f"field '{field}' range needs integer min <= max")
        return list(range(lo, hi + 1))
    if isinstance(value, list) and value and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        return list(value)
    raise ConfigError(f"field '{field}' must be a list of integers or a min/max range")


def _float_list(value, field: str) -> list[float]:
    if isinstance(value, list) and value and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return [float(v) for v in value]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [float(value)]
    raise ConfigError(f"field '{field}' must be a number or list of numbers")


# ---------------------------------------------------------------------------
# bounds

def _bounds_points(config: Mapping, default_delta: float) -> tuple[list[ReportPoint], str]:
    kind = config.get("kind", "grid")
    if kind == "grid":
        ms = _int_list(config.get("m"), "m")
        mus = _float_list(config.get("mu"), "mu")
        deltas = _float_list(config.get("delta", default_delta), "delta")
        points = [
            ReportPoint(m=m, mu=mu, delta=delta)
            for m in ms
            for mu in mus
            for delta in deltas
        ]
        return points, "grid"
    if kind == "qfp":
        ns = _int_list(config.get("n"), "n")
        mus = _float_list(config.get("mu"), "mu")
        if len(mus) != 1:
            raise ConfigError("field 'mu' must be a single number for the qfp preset")
        deltas = _float_list(config.get("delta", default_delta), "delta")
        if len(deltas) != 1:
            raise ConfigError("field 'delta' must be a single number for the qfp preset")
        repeats = config.get("repeats", 3)
        if not isinstance(repeats, int) or repeats < 1:
            raise ConfigError("field 'repeats' must be a positive integer")
        return qfp_report_points(ns, mus[0], deltas[0], repeats), "qfp"
    raise ConfigError(f"field 'kind' must be grid|qfp, got {kind!r}")


def cmd_bounds(args: argparse.Namespace) -> int:
    config = _load_json(args.config)
    if not isinstance(config, Mapping):
        raise ConfigError("bounds config must be a JSON object")
    points, kind = _bounds_points(config, args.delta)
    rows = build_report(points, default_references())
    lines = [
        "# log_base=2",
        f"# mu_convention={MU_CONVENTION}",
        f"# config_kind={kind}",
        CSV_HEADER,
    ]
    lines.extend(",".join(row.csv_cells()) for row in rows)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _load_json(args.config)
    protocol = load_protocol(spec)
    if args.samples is not None:
        report = evaluate_error(
            protocol, mode="sampled", samples=args.samples, seed=args.seed, jobs=args.jobs
        )
    else:
        report = evaluate_error(protocol, jobs=args.jobs)
    lines = [
        f"# protocol={report.protocol_name} n={protocol.n} m={protocol.m} mu={protocol.mu!r}",
        f"# log_base=2 mu_convention={MU_CONVENTION}",
        f"# message_tail={protocol.message_tail!r}",
    ]
    if report.mode == "sampled":
        lines.append(
            f"# mode=sampled samples={len(report.pair_errors)} seed={report.seed} "
            f"mean_error={report.mean_error!r} stderr_mean={report.stderr_mean!r}"
        )
    else:
        lines.append(f"# mode=exhaustive pairs={len(report.pair_errors)}")
    lines.append(
        f"# worst_error={report.worst_error!r} worst_pair={report.worst_pair[0]},{report.worst_pair[1]}"
    )
    if args.truncate is not None:
        truncated, budget = transform_protocol(
            protocol, args.truncate, original_error=report.worst_error
        )
        t_report = evaluate_error(truncated, jobs=args.jobs)
        cutoff = markov_photon_cutoff(protocol.mu, args.truncate)
        lines.append(f"# truncate_delta={args.truncate!r} cutoff={cutoff}")
        lines.append(
            f"# worst_error_before={report.worst_error!r} "
            f"worst_error_after={t_report.worst_error!r} error_budget={budget!r}"
        )
        t_errors = {(x, y): p for x, y, _, p in t_report.pair_errors}
        lines.append("x,y,f,p_error,p_error_truncated")
        for x, y, f, p in report.pair_errors:
            lines.append(f"{x},{y},{f},{p!r},{t_errors[(x, y)]!r}")
    else:
        lines.extend(report.csv_lines())
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args: argparse.Namespace) -> int:
    names = [args.suite] if args.suite else None
    results = run_suites(
        names, seed=args.seed, size=args.max, inject_fault=args.inject_fault
    )
    lines = [f"# seed={args.seed} size={'default' if args.max is None else args.max}"]
    for res in results:
        lines.append(res.summary_line())
        for failure in res.failures:
            lines.append(f"counterexample suite={res.name} {failure}")
    all_passed = all(r.passed for r in results)
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"overall={'pass' if all_passed else 'FAIL'} suites={len(results)} failures={failed}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# dcc

def cmd_dcc(args: argparse.Namespace) -> int:
    spec = _load_json(args.config)
    if not isinstance(spec, Mapping):
        raise ConfigError("dcc config must be a JSON object")
    kind = spec.get("type")
    if kind == "equality":
        n = spec.get("n")
        if not isinstance(n, int) or not 1 <= n <= 3:
            raise ConfigError("field 'n' must be an integer in 1..3")
        table = equality_function(n)
    elif kind == "table":
        values = spec.get("values")
        if not isinstance(values, list) or not values:
            raise ConfigError("field 'values' must be a nonempty 2D array")
        size = len(values)
        if size not in (2, 4, 8) or any(len(r) != size for r in values):
            raise ConfigError("field 'values' must be square with side 2, 4, or 8")
        table = FunctionTable(size.bit_length() - 1, values)
    else:
        raise ConfigError(f"field 'type' must be equality|table, got {kind!r}")
    cost = bruteforce_deterministic_cc(table)
    _emit(f"D={cost}\nconvention={DCC_CONVENTION}\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# rank

def cmd_rank(args: argparse.Namespace) -> int:
    if args.a is None and args.mu is None:
        raise ConfigError("rank needs either a cutoff argument or --mu")
    if args.a is not None:
        rc = count_rank(args.m, args.a)
        _emit(
            f"m={rc.modes} a={rc.cutoff} rank={rc.rank} log2_rank={rc.log2_rank!r}\n",
            args.out,
        )
        return 0
    b = log_rank_bounds(args.m, args.mu, args.delta)
    rc = count_rank(args.m, b.cutoff)
    _emit(
        f"m={args.m} mu={args.mu!r} delta={args.delta!r} a={b.cutoff} rank={rc.rank} "
        f"log2_rank={b.log2_rank!r} bound_photon={b.bound_photon!r} bound_mode={b.bound_mode!r}\n",
        args.out,
    )
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optsmp",
        description="Photon-truncation and communication tradeoff reports for optical SMP protocols.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="tradeoff report over a grid or protocol family")
    p_bounds.add_argument("--config", required=True, help="JSON sweep description")
    p_bounds.add_argument("--out", help="output CSV path (stdout when omitted)")
    p_bounds.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="default truncation delta")
    p_bounds.set_defaults(func=cmd_bounds)

    p_sim = sub.add_parser("simulate", help="exact error report for a protocol description")
    p_sim.add_argument("--config", required=True, help="JSON protocol description")
    p_sim.add_argument("--out", help="output CSV path (stdout when omitted)")
    p_sim.add_argument("--truncate", type=float, help="also evaluate the cutoff-truncated protocol at this delta")
    p_sim.add_argument("--samples", type=int, help="sampled mode: number of input pairs")
    p_sim.add_argument("--seed", type=int, help="seed for sampled mode")
    p_sim.add_argument("--jobs", type=int, default=1, help="worker threads for pair evaluation")
    p_sim.set_defaults(func=cmd_simulate)

    p_verify = sub.add_parser("verify", help="run property suites")
    p_verify.add_argument("--suite", choices=sorted(SUITES), help="run one suite instead of all")
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED, help="ensemble seed")
    p_verify.add_argument("--max", type=int, help="suite size (cases or sweep bound)")
    p_verify.add_argument("--out", help="write the summary to this path")
    p_verify.add_argument(
        "--inject-fault",
        choices=sorted(SUITES),
        help="test mode: make the named suite's tolerance unsatisfiable",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_dcc = sub.add_parser("dcc", help="exact deterministic communication cost (n <= 3)")
    p_dcc.add_argument("--config", required=True, help="JSON function table")
    p_dcc.add_argument("--out", help="output path (stdout when omitted)")
    p_dcc.set_defaults(func=cmd_dcc)

    p_rank = sub.add_parser("rank", help="dimension of the photon-cutoff subspace")
    p_rank.add_argument("m", type=int, help="mode count")
    p_rank.add_argument("a", type=int, nargs="?", help="photon cutoff")
    p_rank.add_argument("--mu", type=float, help="derive the cutoff from mu and --delta")
    p_rank.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p_rank.add_argument("--out", help="output path (stdout when omitted)")
    p_rank.set_defaults(func=cmd_rank)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OptSmpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - unexpected internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

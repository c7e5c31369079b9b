"""Command-line interface and file formats.

Series file format (UTF-8, ASCII-space separated, newline terminated):

    n T                 header: node count and snapshot count
    t i j               one line per present edge, 0-based, t in [0, T)

Absent (t, i, j) triples are zeros. Self-loops are invalid; duplicate edge
declarations are rejected with their line number.

Subcommands: ``detect``, ``simulate-null``, ``power-table``, ``centrality``.
Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import (DegenerateInputError, InvalidInputError, InvalidSpecError,
                     NumericalError, SeriesFormatError)
from .harness import (ExperimentGrid, POWER_CSV_HEADER, centrality_profile,
                      detect, run_null_distribution, run_power_table)
from .mosaic import MosaicConfig, TestReport
from .netgen import NetSeries


def parse_series(path) -> NetSeries:
    """Read a series file into a NetSeries; errors carry 1-based line numbers."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise SeriesFormatError("empty file; expected an 'n T' header", line=1)
    head = lines[0].split()
    if len(head) != 2:
        raise SeriesFormatError(f"malformed header {lines[0]!r}; expected 'n T'", line=1)
    try:
        n, t_len = int(head[0]), int(head[1])
    except ValueError:
        raise SeriesFormatError(f"non-integer header {lines[0]!r}", line=1) from None
    if n < 2 or t_len < 1:
        raise SeriesFormatError(f"header needs n >= 2 and T >= 1, got n={n} T={t_len}", line=1)
    snaps = np.zeros((t_len, n, n), dtype=np.uint8)
    seen = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 3:
            raise SeriesFormatError(f"expected 't i j', got {raw!r}", line=lineno)
        try:
            t, i, j = (int(p) for p in parts)
        except ValueError:
            raise SeriesFormatError(f"non-integer fields in {raw!r}", line=lineno) from None
        if not (0 <= t < t_len):
            raise SeriesFormatError(f"time {t} out of range [0, {t_len})", line=lineno)
        if not (0 <= i < n and 0 <= j < n):
            raise SeriesFormatError(f"node index out of range [0, {n}) in {raw!r}", line=lineno)
        if i == j:
            raise SeriesFormatError(f"self-loop ({i}, {j}) is not allowed", line=lineno)
        lo, hi = (i, j) if i < j else (j, i)
        if (t, lo, hi) in seen:
            raise SeriesFormatError(f"duplicate edge ({t}, {lo}, {hi})", line=lineno)
        seen.add((t, lo, hi))
        snaps[t, lo, hi] = 1
        snaps[t, hi, lo] = 1
    return NetSeries(snaps)


def write_series(series: NetSeries, path) -> None:
    """Serialize a NetSeries in the edge-list format read by parse_series."""
    iu = np.triu_indices(series.n, k=1)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{series.n} {series.T}\n")
        for t in range(series.T):
            present = series.snapshots[t][iu] == 1
            for i, j in zip(iu[0][present], iu[1][present]):
                fh.write(f"{t} {i} {j}\n")


def _report_payload(report: TestReport, config: dict) -> dict:
    return {
        "statistic": report.statistic,
        "threshold": report.threshold,
        "reject": report.reject,
        "per_tau": [
            {"tau": tau, "stat_screened": s, "stat_all": o}
            for tau, s, o in report.per_tau
        ],
        "screened_edges": report.screened_edges,
        "rho_hat": report.rho_hat,
        "sigma2_shat": report.sigma2_shat,
        "sigma2_omega": report.sigma2_omega,
        "tau_argmax": report.tau_argmax,
        "config": config,
    }


def _parse_taus(text):
    if text is None:
        return None
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise InvalidInputError(f"--taus expects comma-separated integers, got {text!r}") from None


def _parse_floats(text):
    return tuple(float(p) for p in text.split(",") if p.strip())


def _parse_ints(text):
    return tuple(int(p) for p in text.split(",") if p.strip())


def _config_comment(subcommand: str, resolved: dict) -> str:
    return f"# netcpd {subcommand} config: {json.dumps(resolved, sort_keys=True)}"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcpd",
        description="Change-point tests for dynamic networks.",
        epilog=(
            "Series files are UTF-8 text: a header line 'n T', then one "
            "'t i j' line per present edge with 0-based indices, t in [0, T) "
            "and i != j; missing triples are absent edges."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="run the test on a series file")
    p_detect.add_argument("--input", required=True, help="series file (edge-list format)")
    p_detect.add_argument("--output", required=True, help="JSON report path")
    p_detect.add_argument("--k", type=int, default=2, help="working rank (default 2)")
    p_detect.add_argument("--h", type=float, default=0.1, help="bandwidth (default 0.1)")
    p_detect.add_argument("--alpha", type=float, default=0.05, help="level (default 0.05)")
    p_detect.add_argument("--cd", type=float, default=1.0, help="screening constant (default 1)")
    p_detect.add_argument("--taus", default=None,
                          help="comma-separated candidate taus overriding the dyadic grid")
    p_detect.add_argument("--seed", type=int, default=0)

    p_null = sub.add_parser("simulate-null", help="null-distribution study")
    p_null.add_argument("--output", required=True, help="CSV path (one sample per line)")
    p_null.add_argument("--n", type=int, default=150)
    p_null.add_argument("--t-raw", type=int, default=240)
    p_null.add_argument("--reps", type=int, default=2000)
    p_null.add_argument("--rho", type=float, default=0.015)
    p_null.add_argument("--scenario", default="null-rank2",
                        choices=["null-rank2", "null-misspecified"])
    p_null.add_argument("--k", type=int, default=2)
    p_null.add_argument("--h", type=float, default=0.1)
    p_null.add_argument("--seed", type=int, default=0)
    p_null.add_argument("--workers", type=int, default=1)

    p_power = sub.add_parser("power-table", help="power/size table over a design grid")
    p_power.add_argument("--output", required=True, help="CSV path")
    p_power.add_argument("--n", type=int, default=150)
    p_power.add_argument("--t-raw", type=int, default=240)
    p_power.add_argument("--reps", type=int, default=500)
    p_power.add_argument("--rho", default="0.01", help="comma-separated rho values")
    p_power.add_argument("--s-star", default="0", help="comma-separated change sparsities")
    p_power.add_argument("--delta", default="1.0", help="comma-separated separations")
    p_power.add_argument("--scenario", default="known-rank",
                         choices=["known-rank", "misspecified"])
    p_power.add_argument("--detectors", default="mosaic",
                         help="comma-separated subset of mosaic,l2cusum,psi,phi")
    p_power.add_argument("--k", type=int, default=2)
    p_power.add_argument("--h", type=float, default=0.1)
    p_power.add_argument("--alpha", type=float, default=0.05)
    p_power.add_argument("--cd", type=float, default=1.0)
    p_power.add_argument("--cal-reps", type=int, default=100)
    p_power.add_argument("--seed", type=int, default=0)
    p_power.add_argument("--workers", type=int, default=1)

    p_cent = sub.add_parser("centrality", help="per-time eigenvector centrality CSV")
    p_cent.add_argument("--input", required=True, help="series file")
    p_cent.add_argument("--output", required=True, help="CSV path (T rows, n columns)")
    return parser


def _run_detect(args) -> int:
    series = parse_series(args.input)
    cfg = MosaicConfig(k=args.k, h=args.h, alpha=args.alpha, c_d=args.cd,
                       tau_override=_parse_taus(args.taus), seed=args.seed)
    report = detect(series, cfg)
    config = {
        "input": args.input, "n": series.n, "t_raw": series.T,
        "k": cfg.k, "h": cfg.h, "alpha": cfg.alpha, "c_d": cfg.c_d,
        "tau_override": list(cfg.tau_override) if cfg.tau_override else None,
        "seed": cfg.seed,
    }
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(_report_payload(report, config), fh, indent=2)
        fh.write("\n")
    decision = "reject" if report.reject else "accept"
    print(f"statistic {report.statistic:.4f} vs threshold {report.threshold:.4f}: {decision}")
    return 0


def _run_simulate_null(args) -> int:
    cfg = MosaicConfig(k=args.k, h=args.h, seed=args.seed)
    study = run_null_distribution(cfg, args.rho, args.reps, n=args.n,
                                  t_raw=args.t_raw, scenario=args.scenario,
                                  workers=args.workers)
    resolved = {"n": args.n, "t_raw": args.t_raw, "reps": args.reps,
                "rho": args.rho, "scenario": args.scenario, "k": args.k,
                "h": args.h, "seed": args.seed}
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(_config_comment("simulate-null", resolved) + "\n")
        for value in study.samples:
            fh.write(f"{value:.17g}\n")
    print(f"mean {study.mean:.4f} sd {study.sd:.4f} "
          f"ks {study.ks_distance:.4f} shapiro_p {study.normality_p:.4g}")
    return 0


def _run_power_table(args) -> int:
    cfg = MosaicConfig(k=args.k, h=args.h, alpha=args.alpha, c_d=args.cd,
                       seed=args.seed)
    grid = ExperimentGrid(
        rho_list=_parse_floats(args.rho),
        s_star_list=_parse_ints(args.s_star),
        delta_list=_parse_floats(args.delta),
        cfg=cfg, n=args.n, t_raw=args.t_raw, reps=args.reps,
        scenario=args.scenario,
        detectors=tuple(d.strip() for d in args.detectors.split(",") if d.strip()),
        cal_reps=args.cal_reps, workers=args.workers,
    )
    resolved = {"n": args.n, "t_raw": args.t_raw, "reps": args.reps,
                "rho": list(grid.rho_list), "s_star": list(grid.s_star_list),
                "delta": list(grid.delta_list), "scenario": args.scenario,
                "detectors": list(grid.detectors), "k": args.k, "h": args.h,
                "alpha": args.alpha, "c_d": args.cd, "cal_reps": args.cal_reps,
                "seed": args.seed}
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(_config_comment("power-table", resolved) + "\n")
        fh.write(POWER_CSV_HEADER + "\n")
    run_power_table(grid, csv_path=args.output)
    print(f"wrote {args.output}")
    return 0


def _run_centrality(args) -> int:
    series = parse_series(args.input)
    profile = centrality_profile(series)
    resolved = {"input": args.input, "n": series.n, "t_raw": series.T}
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(_config_comment("centrality", resolved) + "\n")
        fh.write(",".join(str(i) for i in range(series.n)) + "\n")
        for row in profile.values:
            fh.write(",".join(f"{v:.10g}" for v in row) + "\n")
    for t in profile.degenerate:
        print(f"warning: snapshot {t} has no edges; centrality row set to zero",
              file=sys.stderr)
    print(f"wrote {args.output}")
    return 0


_RUNNERS = {
    "detect": _run_detect,
    "simulate-null": _run_simulate_null,
    "power-table": _run_power_table,
    "centrality": _run_centrality,
}


def cli_main(argv=None) -> int:
    """Entry point returning a process exit code (0/2/3/4)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _RUNNERS[args.command](args)
    except SeriesFormatError as exc:
        print(f"netcpd: data error: {exc}", file=sys.stderr)
        return 3
    except (InvalidInputError, InvalidSpecError) as exc:
        print(f"netcpd: {exc}", file=sys.stderr)
        return 2
    except DegenerateInputError as exc:
        print(f"netcpd: data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"netcpd: numerical error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"netcpd: data error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

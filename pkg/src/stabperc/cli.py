"""Reproducibility-first command line: every subcommand emits one CSV.

Each output starts with a comment header recording the package version, the
subcommand, the fully resolved flag set, and the seed, so a rerun with the
same flags is byte-identical. Numbers are printed with 12 significant
digits (thresholds with 9 decimal places); the exit code is 0 exactly when
every requested computation or verification succeeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import css_graph, percolation, rank_profile, series_bounds, stabilizer, verify

__version__ = "0.1.0"

_KIND_TO_SPEC = {"stab": "stabilizer_m", "css2m": "css_2m"}


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    v = float(x)
    if v == 0.0:
        v = 0.0  # collapse -0.0
    return format(v, ".12g")


def _emit(
    args,
    subcommand: str,
    flags: list[tuple[str, object]],
    header: list[str],
    rows: list[list],
) -> None:
    buf = io.StringIO()
    buf.write(f"# stabperc {__version__}\n")
    buf.write(f"# subcommand: {subcommand}\n")
    flag_text = " ".join(f"{k}={_fmt(v)}" for k, v in flags)
    buf.write(f"# flags: {flag_text}\n")
    buf.write(f"# seed: {getattr(args, 'seed', 0)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    text = buf.getvalue()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_grid(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad grid {spec!r}: expected START:STOP:STEP")
    start, stop, step = (float(t) for t in parts)
    if step <= 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must be >= start")
    count = round((stop - start) / step) + 1
    grid = [start + i * step for i in range(count)]
    if grid and abs(grid[-1] - stop) < 1e-9:
        grid[-1] = stop
    return grid


def _load_code(path: str):
    """Returns (stabilizer_matrix, css_code_or_None) from either text format."""
    text = Path(path).read_text(encoding="utf-8")
    token = text.split(None, 1)[0] if text.split() else ""
    if token == "stab":
        return stabilizer.parse_stabilizer_text(text), None
    if token == "css":
        code = css_graph.parse_css_text(text)
        return css_graph.css_to_stabilizer(code), code
    raise ValueError(f"unrecognized code format in {path!r}: first token {token!r}")


def _default_rate(m: int) -> float:
    return max(0.0, series_bounds.default_rate(m))


def cmd_bound(args) -> int:
    if (args.p is None) == (args.grid is None):
        raise ValueError("exactly one of --p or --grid is required")
    m = args.m
    if args.p is not None:
        if args.kind == "stab":
            value = series_bounds.stab_bound(m, args.p)
        else:
            value = series_bounds.css2m_bound(m, args.p)
        flags = [("kind", args.kind), ("m", m), ("p", args.p), ("seed", args.seed)]
        _emit(args, "bound", flags, ["value"], [[value]])
        return 0
    rate = args.rate if args.rate is not None else _default_rate(m)
    spec = series_bounds.BoundSpec(_KIND_TO_SPEC[args.kind], m, rate)
    grid = _parse_grid(args.grid)
    points = series_bounds.bound_curve(spec, grid)
    rows = [[pt.p, pt.capacity, pt.stab, pt.css2m, pt.rate] for pt in points]
    flags = [
        ("kind", args.kind),
        ("m", m),
        ("grid", args.grid),
        ("rate", rate),
        ("seed", args.seed),
    ]
    _emit(
        args,
        "bound",
        flags,
        ["p", "capacity", "stab_bound", "css2m_bound", "rate"],
        rows,
    )
    return 0


def cmd_threshold(args) -> int:
    m = args.m
    rate = args.rate if args.rate is not None else series_bounds.default_rate(m)
    spec = series_bounds.BoundSpec(_KIND_TO_SPEC[args.kind], m, rate)
    threshold = series_bounds.threshold_solve(spec)
    flags = [("kind", args.kind), ("m", m), ("rate", rate), ("seed", args.seed)]
    _emit(
        args,
        "threshold",
        flags,
        ["m", "kind", "rate", "threshold"],
        [[m, args.kind, rate, f"{threshold:.9f}"]],
    )
    return 0


def cmd_perc_table(args) -> int:
    m_values = [int(tok) for tok in args.m_list.split(",") if tok.strip()]
    if not m_values:
        raise ValueError("empty --m-list")
    rows = []
    for m in m_values:
        easy = series_bounds.easy_bounds(m)
        upper = series_bounds.percolation_upper(m)
        rows.append([m, easy.lower, upper, easy.upper_capacity])
    flags = [("m-list", args.m_list), ("seed", args.seed)]
    _emit(
        args,
        "perc-table",
        flags,
        ["m", "easy_lower", "series_upper", "capacity_2m"],
        rows,
    )
    return 0


def cmd_profile(args) -> int:
    H, _ = _load_code(args.code)
    view = rank_profile.MatrixView.symplectic(H.symplectic, H.n)
    if args.mode == "exact":
        mode = rank_profile.ExpectationMode.exact()
    else:
        mode = rank_profile.ExpectationMode.monte_carlo(args.trials, args.seed)
    grid = _parse_grid(args.grid)
    profile = rank_profile.compute_profile(view, grid, mode)
    rows = []
    for i, p in enumerate(profile.p_grid):
        phi_se = profile.phi_stderr[i] if profile.phi_stderr else 0.0
        delta_se = profile.delta_stderr[i] if profile.delta_stderr else 0.0
        d = profile.delta[i]
        rate_bound = 1.0 - 2.0 * p - d if p <= 0.5 else None
        rows.append([p, profile.phi[i], phi_se, d, delta_se, rate_bound])
    flags = [
        ("code", args.code),
        ("mode", args.mode),
        ("trials", args.trials),
        ("grid", args.grid),
        ("seed", args.seed),
    ]
    _emit(
        args,
        "profile",
        flags,
        ["p", "phi", "phi_stderr", "delta", "delta_stderr", "rate_bound"],
        rows,
    )
    return 0


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, args.seed)
    rows = [
        [r.suite, r.check, r.checked, r.violations, "pass" if r.passed else "FAIL", r.detail]
        for r in results
    ]
    flags = [("suite", args.suite), ("seed", args.seed)]
    _emit(
        args,
        "verify",
        flags,
        ["suite", "check", "checked", "violations", "status", "detail"],
        rows,
    )
    return 0 if all(r.passed for r in results) else 1


def cmd_percolate(args) -> int:
    _, code = _load_code(args.code)
    if code is None:
        raise ValueError("percolate needs the css text format (incidence + faces)")
    inst = percolation.PercolationInstance.from_css(code)
    if args.r is not None:
        r = args.r
    else:
        radius = percolation.planarity_radius(inst)
        r = radius if radius is not None and radius >= 1 else 1
    est = percolation.estimate_fr_gr(
        inst, args.p, r, args.trials, args.seed, edge=args.edge
    )
    fail = percolation.erasure_failure_rate(code, args.p, args.trials, args.seed)
    row = [
        args.p,
        r,
        est.f_r.value,
        est.f_r.stderr,
        est.g_r.value,
        est.g_r.stderr,
        est.ep_fraction.value,
        est.ep_fraction.stderr,
        fail.value,
        fail.stderr,
    ]
    flags = [
        ("code", args.code),
        ("p", args.p),
        ("r", r),
        ("trials", args.trials),
        ("edge", args.edge),
        ("seed", args.seed),
    ]
    _emit(
        args,
        "percolate",
        flags,
        [
            "p",
            "r",
            "f_r",
            "f_r_stderr",
            "g_r",
            "g_r_stderr",
            "ep_fraction",
            "ep_stderr",
            "failure_rate",
            "failure_stderr",
        ],
        [row],
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabperc",
        description="Erasure-threshold bounds, rank profiles, and percolation "
        "statistics for stabilizer/CSS codes; all output is reproducible CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        sp.add_argument("--output", default=None, help="write CSV here instead of stdout")

    sp = sub.add_parser("bound", help="evaluate a rate bound at one p or along a grid")
    sp.add_argument("--kind", choices=["stab", "css2m"], required=True)
    sp.add_argument("--m", type=int, required=True, help="row weight")
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--grid", default=None, help="START:STOP:STEP")
    sp.add_argument("--rate", type=float, default=None, help="rate line for curve output")
    common(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("threshold", help="smallest p where a bound crosses a rate")
    sp.add_argument("--kind", choices=["stab", "css2m"], required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--rate", type=float, default=None, help="default 1 - 4/m")
    common(sp)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("perc-table", help="percolation bound table over m values")
    sp.add_argument("--m-list", default="5,10,20,30,40,50")
    common(sp)
    sp.set_defaults(func=cmd_perc_table)

    sp = sub.add_parser("profile", help="phi/delta/rate-bound profile of a code file")
    sp.add_argument("--code", required=True, help="stab or css text file")
    sp.add_argument("--mode", choices=["exact", "mc"], default="exact")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--grid", default="0:0.5:0.05", help="START:STOP:STEP")
    common(sp)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("verify", help="run a brute-force oracle suite")
    sp.add_argument(
        "--suite",
        choices=["lemmas", "appendix", "series", "example", "all"],
        default="all",
    )
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("percolate", help="cluster statistics and failure rate")
    sp.add_argument("--code", required=True, help="css text file")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--r", type=int, default=None, help="cluster-size cutoff (default: planarity radius)")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--edge", type=int, default=0, help="distinguished edge index")
    common(sp)
    sp.set_defaults(func=cmd_percolate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands
-----------
gen-window   draw a valid window (set) for a regime and write it to JSON
gen-signal   draw a generic analytic signal and write it to JSON
measure      evaluate a window file's measurement plan on a signal file
recover      rebuild a signal, up to global sign, from measurements
run          seeded multi-trial experiment with CSV/JSON/figure reports
demo         annotated walk-through of the recursion on a small instance

All file I/O lives here (and in :mod:`analytic_pr.fileio`); the library
modules work purely in memory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio, figures
from .analytic import sample_generic
from .errors import PhaseRetrievalError
from .experiment import THREADS_ENV, ExperimentSpec, run_experiment
from .recovery import RecoveryConfig, recover, up_to_sign_error
from .stft import StftParams, measure, measurement_plan, suggest_shift
from .windows import (
    CASE1,
    CASE2,
    CASE3,
    WindowSet,
    make_case1_window,
    make_case2_windows,
    make_case3_windows,
    validate_for_case,
)

__all__ = ["build_parser", "main"]

_CASES = {"1": CASE1, "2": CASE2, "3": CASE3}


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from exc


def _parse_triple(text: str) -> tuple[int, int, int]:
    values = _parse_ints(text)
    if len(values) != 3:
        raise ValueError(f"expected exactly three indices, got {text!r}")
    return values  # type: ignore[return-value]


def _require_output(args) -> str:
    if not args.output:
        raise ValueError("this command needs --output")
    return args.output


def _params_for(n: int, args) -> StftParams:
    shift = args.shift if args.shift is not None else suggest_shift(n)
    return StftParams(n=n, shift=shift, m_triple=_parse_triple(args.m_triple))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master RNG seed (default 0)")
    p.add_argument("--output", help="output file path")
    p.add_argument(
        "--format",
        choices=("json", "csv"),
        help="output format where a choice exists (measure: default csv)",
    )


def _add_transform_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--shift",
        type=int,
        help="segment hop of the transform (default: smallest hop giving 3 segments)",
    )
    p.add_argument(
        "--m-triple",
        default="0,1,2",
        help="three modulation indices used by the recursion (default 0,1,2)",
    )


def cmd_gen_window(args) -> int:
    case = _CASES[args.case]
    if case == CASE1:
        if args.bandlimit is None or args.i is None:
            raise ValueError("case 1 windows need --bandlimit and --i")
        obj = make_case1_window(args.n, args.bandlimit, args.i, args.seed)
    elif case == CASE2:
        if args.i is None:
            raise ValueError("case 2 windows need --i")
        obj = make_case2_windows(args.n, args.i, args.seed)
    else:
        pinned = args.n // 2 + 1
        if args.bandlimit not in (None, pinned) or args.i not in (None, pinned):
            raise ValueError(
                f"case 3 windows are pinned to bandlimit = zero-run start = {pinned}"
            )
        obj = make_case3_windows(args.n, args.seed)
    report = validate_for_case(obj, case)
    print(report.summary())
    if args.output:
        fileio.write_windows(args.output, obj)
        print(f"wrote {args.output}")
    if args.figure:
        path = figures.save_window_figure(obj, args.figure)
        print(f"wrote {path}")
    return 0 if report.ok else 1


def cmd_gen_signal(args) -> int:
    out = _require_output(args)
    z = sample_generic(args.n, args.seed)
    fileio.write_signal(out, z.signal)
    print(f"wrote analytic signal of length {args.n} to {out}")
    return 0


def cmd_measure(args) -> int:
    out = _require_output(args)
    wobj = fileio.read_windows(args.windows)
    z = fileio.read_signal(args.signal)
    params = _params_for(wobj.n, args)
    plan = measurement_plan(
        wobj.case, wobj.n, wobj.bandlimit, wobj.zero_run_start, params
    )
    meas = measure(
        z, wobj, plan, params, noise_sigma=args.noise_sigma, rng=args.seed
    )
    fmt = args.format or "csv"
    fileio.write_measurements(out, meas, fmt)
    print(f"wrote {len(plan.entries)} magnitudes ({wobj.case}) to {out}")
    return 0


def cmd_recover(args) -> int:
    out = _require_output(args)
    wobj = fileio.read_windows(args.windows)
    params = _params_for(wobj.n, args)
    plan = measurement_plan(
        wobj.case, wobj.n, wobj.bandlimit, wobj.zero_run_start, params
    )
    entries, mags = fileio.read_measurement_rows(args.measurements)
    meas = fileio.attach_plan(entries, mags, plan)
    cfg = RecoveryConfig(params=params, branch_policy=args.branch_policy)
    result = recover(meas, wobj, cfg)
    fileio.write_recovery_result(out, result)
    worst = max(result.step_residuals) if result.step_residuals else 0.0
    print(
        f"recovered {wobj.case} estimate (up to global sign); "
        f"worst step residual {worst:.3e}; wrote {out}"
    )
    return 0


def cmd_run(args) -> int:
    spec = ExperimentSpec(
        case=_CASES[args.case],
        n_list=_parse_ints(args.n_list),
        trials=args.trials,
        seed=args.seed,
        bandlimit=args.bandlimit,
        zero_run_start=args.i,
        shift=args.shift,
        m_triple=_parse_triple(args.m_triple),
        noise_sigma=args.noise_sigma,
    )
    records, summary = run_experiment(spec)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_trials_csv(out / "trials.csv", records)
    fileio.write_summary(out / "summary.json", summary)
    written = ["trials.csv", "summary.json"]
    if not args.no_figures:
        for p in figures.save_run_figures(records, summary, out):
            written.append(p.name)
    for cell in summary["cells"]:
        med = cell["median_error"]
        med_text = f"{med:.3e}" if med is not None else "n/a"
        print(
            f"{cell['case']} n={cell['n']}: {cell['success_rate']:.1%} ok "
            f"({cell['trials']} trials, {cell['measurement_count']} measurements), "
            f"median error {med_text}"
        )
    print(f"wrote {', '.join(written)} to {out}")
    return 0


def _dependency_rows(case: str, n: int, bandlimit: int, zero_run_start: int):
    """Rows of the recursion's dependency triangle.

    Row ``r`` describes the magnitude whose top contribution is coefficient
    ``floor(n/2) - r + 1``; its terms are (signal index, window index) pairs,
    sorted by signal index."""
    half = n // 2
    band = (zero_run_start + n - bandlimit) % n
    nrows = half + 1 if case == CASE1 else half
    rows = []
    for r in range(1, nrows + 1):
        top = half - r + 1
        freq = (top - band) % n
        terms = []
        for t in range(bandlimit):
            sig = (top + t) % n
            if sig <= half:
                terms.append((sig, (band + t) % n))
        terms.sort()
        rows.append((r, freq, terms))
    return rows


def _render_triangle(case: str, n: int, bandlimit: int, zero_run_start: int):
    half = n // 2
    rows = _dependency_rows(case, n, bandlimit, zero_run_start)
    width = len(f"z[{half}]*w[{n - 1}]") + 2
    lines = []
    for r, freq, terms in rows:
        cells = [""] * (half + 1)
        for sig, widx in terms:
            cells[sig] = f"z[{sig}]*w[{widx}]"
        body = "".join(c.ljust(width) for c in cells).rstrip()
        lines.append(f"row {r}  k={freq:>2}  {body}")
    return lines


def cmd_demo(args) -> int:
    n = args.n
    if n > 16:
        raise ValueError(f"demo layouts are meant for n <= 16, got {n}")
    case = _CASES[args.case]
    half = n // 2

    if case == CASE1:
        bandlimit = args.bandlimit if args.bandlimit is not None else min(3, (n + 1) // 2)
        i = args.i if args.i is not None else bandlimit
        wobj = make_case1_window(n, bandlimit, i, args.seed)
    elif case == CASE2:
        i = args.i if args.i is not None else (1 - half) % n
        wobj = make_case2_windows(n, i, args.seed)
        bandlimit = wobj.bandlimit
    else:
        wobj = make_case3_windows(n, args.seed)
        bandlimit, i = wobj.bandlimit, wobj.zero_run_start

    params = _params_for(n, args)
    if args.zero:
        signal = np.zeros(n, dtype=np.complex128)
        true_spectrum = np.zeros(n, dtype=np.complex128)
    else:
        drawn = sample_generic(n, args.seed + 1)
        signal, true_spectrum = drawn.signal, drawn.spectrum

    print(
        f"{case}: n={n}, bandlimit={bandlimit}, zero run starts at {i}, "
        f"shift={params.shift}, m_triple={params.m_triple}"
    )
    print()
    print("dependency triangle (which coefficients feed each magnitude):")
    for line in _render_triangle(case, n, bandlimit, i):
        print("  " + line)
    if case == CASE2:
        print("  (row 1 is measured through all four windows at m=0;")
        print("   rows below use window 0 at the three m_triple modulations)")
    elif case == CASE3:
        print("  (row 1 is measured through both windows at m=0;")
        print("   rows below use window 0 at the three m_triple modulations)")
    else:
        print("  (row 1 uses m=0; rows below use the three m_triple modulations)")

    plan = measurement_plan(case, n, bandlimit, i, params)
    meas = measure(signal, wobj, plan, params)
    print()
    print("measurements (window, k, m -> magnitude):")
    for entry, mag in zip(plan.entries, meas.magnitudes):
        print(f"  {entry.window}, {entry.k:>2}, {entry.m}  ->  {mag:.6e}")

    print()
    try:
        result = recover(meas, wobj, RecoveryConfig(params=params))
    except PhaseRetrievalError as exc:
        print(f"recovery aborted: {type(exc).__name__}: {exc}")
        return 0
    shown = result.spectrum
    if np.linalg.norm(result.signal - signal) > np.linalg.norm(result.signal + signal):
        shown = -shown  # undo the global sign for the side-by-side table only
    print("recovered coefficients (top to bottom, with the true values):")
    for k in range(half, -1, -1):
        est = shown[k]
        true = true_spectrum[k]
        print(
            f"  z[{k}]  est {est.real:+.6f}{est.imag:+.6f}j   "
            f"true {true.real:+.6f}{true.imag:+.6f}j"
        )
    worst = max(result.step_residuals) if result.step_residuals else 0.0
    print(f"worst step residual: {worst:.3e}")
    print(f"up-to-sign error: {up_to_sign_error(result.signal, signal):.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="analytic-pr",
        description="Constructive phase retrieval of analytic signals from "
        "windowed-transform magnitudes.",
        epilog=f"The {THREADS_ENV} environment variable caps the trial "
        "runner's worker pool.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-window", help="draw a valid window (set) for a regime")
    p.add_argument("--case", choices=sorted(_CASES), required=True)
    p.add_argument("--n", type=int, required=True, help="signal length")
    p.add_argument("--bandlimit", type=int, help="bandlimit B (case 1)")
    p.add_argument("--i", type=int, help="zero-run start index (cases 1 and 2)")
    p.add_argument("--figure", help="also render the window(s) to this image path")
    _add_common(p)
    p.set_defaults(func=cmd_gen_window)

    p = sub.add_parser("gen-signal", help="draw a generic analytic signal")
    p.add_argument("--n", type=int, required=True, help="signal length")
    _add_common(p)
    p.set_defaults(func=cmd_gen_signal)

    p = sub.add_parser("measure", help="evaluate a window file's plan on a signal")
    p.add_argument("--signal", required=True, help="signal JSON path")
    p.add_argument("--windows", required=True, help="window (set) JSON path")
    p.add_argument(
        "--noise-sigma",
        type=float,
        default=0.0,
        help="exploratory additive magnitude noise (default 0: exact)",
    )
    _add_transform_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("recover", help="rebuild a signal from measurements")
    p.add_argument("--measurements", required=True, help="measurement CSV/JSON path")
    p.add_argument("--windows", required=True, help="window (set) JSON path")
    p.add_argument(
        "--branch-policy",
        choices=("strict", "best"),
        default="strict",
        help="case 3 tie handling when both sign branches fit (default strict)",
    )
    _add_transform_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("run", help="seeded multi-trial experiment with reports")
    p.add_argument("--case", choices=sorted(_CASES), required=True)
    p.add_argument("--n-list", required=True, help="comma-separated lengths")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--bandlimit", type=int, default=3, help="case 1 bandlimit (default 3)")
    p.add_argument(
        "--i", type=int, help="fix the zero-run start (default: fresh draw per trial)"
    )
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--output-dir", default="pr_results")
    p.add_argument(
        "--no-figures", action="store_true", help="skip the PNG report figures"
    )
    _add_transform_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("demo", help="annotated recursion walk-through (n <= 16)")
    p.add_argument("--case", choices=sorted(_CASES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bandlimit", type=int, help="case 1 bandlimit")
    p.add_argument("--i", type=int, help="zero-run start")
    p.add_argument(
        "--zero", action="store_true", help="use the all-zero signal instead"
    )
    _add_transform_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PhaseRetrievalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

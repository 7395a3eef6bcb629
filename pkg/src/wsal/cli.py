"""Command-line front end: runs, sweeps, comparisons, diagnostics, formulas.

A thin shell over the library: every subcommand builds the same objects a
caller would and serializes their results deterministically (sorted JSON
keys, no timestamps), so identical invocations produce identical bytes.
Exit codes: 0 success, 1 trial failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bounds
from .engine import AlgoConfig, run_main
from .errors import (
    BudgetExhausted,
    DoublingCapExceeded,
    Infeasible,
    ShadowDisabled,
    UnlabeledBudgetExceeded,
)
from .lab import _fmt, check_invariants, run_comparison, sweep
from .world import InstanceSpec, World

__all__ = ["main", "build_parser"]

RUNTIME_ERRORS = (
    BudgetExhausted,
    DoublingCapExceeded,
    UnlabeledBudgetExceeded,
    ShadowDisabled,
    Infeasible,
)

COMPARE_COLUMNS = [
    "seed",
    "o_queries_main",
    "w_queries_main",
    "o_queries_baseline",
    "w_queries_baseline",
    "ratio",
    "excess_main",
    "excess_main_ci",
    "excess_baseline",
    "excess_baseline_ci",
    "error",
]


def _parse_seeds(text: str) -> list[int]:
    """Either a single integer or an inclusive range ``N..M``."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsal",
        description="Active learning with weak and strong labelers on synthetic worlds.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, *, seeds: bool):
        p.add_argument("--instance", metavar="PATH", help="instance spec JSON file")
        p.add_argument("--epsilon", type=float, default=0.05, help="target excess error")
        p.add_argument("--delta", type=float, default=0.1, help="failure probability")
        p.add_argument("--scale", type=float, default=0.01, help="design-constant multiplier")
        p.add_argument(
            "--mode",
            choices=["main-text", "appendix"],
            default="main-text",
            help="accuracy-share convention for the false-negative budget",
        )
        p.add_argument("--output", metavar="PATH", help="write here instead of stdout")
        if seeds:
            p.add_argument(
                "--seeds",
                type=_parse_seeds,
                required=True,
                help="seed list as N or an inclusive range N..M",
            )
        else:
            p.add_argument("--seed", type=int, help="world seed (overrides the instance file)")

    run_p = sub.add_parser("run", help="one engine run, JSON result")
    add_common(run_p, seeds=False)
    run_p.add_argument("--baseline", action="store_true", help="run the all-strong baseline")
    run_p.add_argument(
        "--trace", action="store_true", help="also write <output>.trace.jsonl epoch lines"
    )

    sweep_p = sub.add_parser("sweep", help="instance grid x seeds, CSV rows")
    add_common(sweep_p, seeds=True)
    sweep_p.add_argument("--baseline", action="store_true", help="add paired baseline rows")
    sweep_p.add_argument(
        "--trace", action="store_true", help="write per-trial JSONL files next to the output"
    )
    sweep_p.add_argument(
        "--workers", type=int, default=os.cpu_count() or 1, help="parallel trial processes"
    )

    compare_p = sub.add_parser("compare", help="paired main/baseline runs per seed, CSV")
    add_common(compare_p, seeds=True)

    diag_p = sub.add_parser("diagnose", help="re-check run invariants, JSON report")
    add_common(diag_p, seeds=False)

    formulas_p = sub.add_parser("formulas", help="print the sample-size prescriptions")
    formulas_p.add_argument("--epsilon", type=float, default=0.05)
    formulas_p.add_argument("--delta", type=float, default=0.1)
    formulas_p.add_argument("--d", type=int, default=1, help="hypothesis-class VC dimension")
    formulas_p.add_argument("--d-prime", type=int, default=None, help="difference-class VC dimension")
    formulas_p.add_argument("--n", type=int, default=1000, help="sample size for the deviation terms")
    formulas_p.add_argument("--p-hat", type=float, default=0.5, help="region-mass estimate for m")
    formulas_p.add_argument("--scale", type=float, default=1.0)
    formulas_p.add_argument("--output", metavar="PATH")
    return parser


def _load_instance(args) -> InstanceSpec:
    if args.instance is None:
        spec = InstanceSpec()
    else:
        spec = InstanceSpec.load(args.instance)
    seed = getattr(args, "seed", None)
    if seed is not None:
        spec = spec.with_seed(seed)
    return spec


def _load_grid(args) -> list[InstanceSpec]:
    if args.instance is None:
        return [InstanceSpec()]
    with open(args.instance, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, list):
        return [InstanceSpec.from_json_dict(item) for item in data]
    return [InstanceSpec.from_json_dict(data)]


def _config(args, *, use_weak: bool = True) -> AlgoConfig:
    return AlgoConfig(
        target_epsilon=args.epsilon,
        delta=args.delta,
        scale=args.scale,
        use_weak=use_weak,
        fn_budget_style="standard" if args.mode == "main-text" else "tight",
    )


def _emit(text: str, output) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _rows_to_csv(rows, columns) -> str:
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            value = _fmt(row[col])
            if "," in value or '"' in value:
                value = '"' + value.replace('"', '""') + '"'
            cells.append(value)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _cmd_run(args) -> int:
    spec = _load_instance(args)
    if spec.seed is None:
        raise ValueError("run needs a seed: pass --seed or set one in the instance file")
    if args.trace and args.output is None:
        raise ValueError("--trace needs --output to name the trace file")
    config = _config(args, use_weak=not args.baseline)
    result = run_main(World(spec), config)
    blob = result.to_json_dict()
    _emit(json.dumps(blob, sort_keys=True, indent=2) + "\n", args.output)
    if args.trace:
        lines = [
            json.dumps(epoch, sort_keys=True, separators=(",", ":")) for epoch in blob["epochs"]
        ]
        with open(f"{args.output}.trace.jsonl", "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    return 0


def _cmd_sweep(args) -> int:
    grid = _load_grid(args)
    if args.trace and args.output is None:
        raise ValueError("--trace needs --output to place the trace files")
    trace_dir = None
    if args.trace:
        trace_dir = f"{args.output}_traces"
        os.makedirs(trace_dir, exist_ok=True)
    rows = sweep(
        grid,
        args.seeds,
        config=_config(args),
        include_baseline=args.baseline,
        workers=args.workers,
        trace_dir=trace_dir,
    )
    from .lab import SWEEP_COLUMNS

    _emit(_rows_to_csv(rows, SWEEP_COLUMNS), args.output)
    return 1 if any(row["error"] for row in rows) else 0


def _cmd_compare(args) -> int:
    spec = _load_grid(args)
    if len(spec) != 1:
        raise ValueError("compare takes a single-instance file, not a grid")
    rows = run_comparison(spec[0], _config(args), args.seeds)
    _emit(_rows_to_csv(rows, COMPARE_COLUMNS), args.output)
    return 1 if any(row["error"] for row in rows) else 0


def _cmd_diagnose(args) -> int:
    spec = _load_instance(args)
    if spec.seed is None:
        raise ValueError("diagnose needs a seed: pass --seed or set one in the instance file")
    config = _config(args)
    trace = run_main(World(spec), config)
    report = check_invariants(trace, World(spec))
    blob = {
        "instance": spec.to_json_dict(),
        "config": config.to_json_dict(),
        "report": report.to_json_dict(),
    }
    _emit(json.dumps(blob, sort_keys=True, indent=2) + "\n", args.output)
    return 0


def _cmd_formulas(args) -> int:
    d_prime = args.d_prime if args.d_prime is not None else args.d
    schedule = bounds.epoch_schedule(args.epsilon, args.delta)
    lines = [
        f"sigma(n={args.n}, d={args.d}, delta={args.delta}) = "
        f"{bounds.vc_deviation(args.n, args.d, args.delta)!r}",
        f"gamma(n={args.n}, delta={args.delta}) = "
        f"{bounds.bernoulli_deviation(args.n, args.delta)!r}",
        f"n_0(delta={args.delta}, d={args.d}, scale={args.scale}) = "
        f"{bounds.initial_sample_size(args.delta, args.d, args.scale)}",
        f"m(p_hat={args.p_hat}, epsilon={args.epsilon}, d_prime={d_prime}, "
        f"delta={args.delta}, scale={args.scale}) = "
        f"{bounds.diff_classifier_sample_size(args.p_hat, args.epsilon, d_prime, args.delta, args.scale)}",
        f"k_0 = {len(schedule)}",
    ]
    for epoch in schedule:
        lines.append(f"  epoch {epoch.k}: epsilon_k={epoch.epsilon!r} delta_k={epoch.delta!r}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "diagnose": _cmd_diagnose,
    "formulas": _cmd_formulas,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.subcommand](args)
    except RUNTIME_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2

"""Experiment harness: trials, comparisons, diagnostics, geometry estimates.

Everything here measures; nothing here is allowed to spend the metered
query budget.  Measurement runs on the world's shadow channels, trials
re-run the engine on fresh worlds rebuilt from the same seed, and sweep
output is a pure function of its inputs so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bounds
from .engine import AlgoConfig, DisagreementTester, run_dbal_baseline, run_main
from .errors import ShadowDisabled
from .hypotheses import HalfspaceClassifier, ThresholdClassifier, classifier_from_dict
from .world import InstanceSpec, World

__all__ = [
    "TrialResult",
    "DiagnosticReport",
    "measure_error",
    "run_trial",
    "run_comparison",
    "check_invariants",
    "dis_ball_membership",
    "estimate_theta",
    "estimate_alpha",
    "sweep",
    "SWEEP_COLUMNS",
]

Z_99 = 2.5758293035489004  # two-sided 99% normal quantile


def _wilson_halfwidth(p_hat: float, n: int) -> float:
    """Half-width of the 99% Wilson score interval for a binomial mean."""
    z2 = Z_99 * Z_99
    return (Z_99 * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n))) / (1.0 + z2 / n)


# ---------------------------------------------------------------------------
# error measurement


def measure_error(classifier, world: World, n_test: int):
    """Monte-Carlo error of ``classifier`` under the strong label law.

    Uses only shadow draws and shadow labels; the world's ledger is
    asserted unchanged.  Returns ``(estimate, ci_halfwidth)`` where the
    half-width is a 99% Wilson interval.
    """
    if n_test < 100:
        raise ValueError(f"n_test must be >= 100, got {n_test}")
    before = (world.ledger.strong_total, world.ledger.weak_total, world.ledger.unlabeled_total)
    pts = world.shadow_draw(n_test, "measure-error")
    ys = world.shadow_strong_labels(pts)
    wrong = int(np.count_nonzero(classifier.predict(pts) != ys))
    after = (world.ledger.strong_total, world.ledger.weak_total, world.ledger.unlabeled_total)
    if before != after:
        raise RuntimeError("measurement touched the metered ledger")
    est = wrong / n_test
    return est, _wilson_halfwidth(est, n_test)


# ---------------------------------------------------------------------------
# trials


@dataclass(frozen=True)
class TrialResult:
    """One engine run plus its Monte-Carlo evaluation.

    ``final_excess_error`` is measured against the family optimum on a
    paired shadow sample; ``excess_ci`` adds the two Wilson half-widths,
    so the true excess lies within ``final_excess_error +/- excess_ci``
    with 98% confidence.  ``wall_time`` is informational only and is
    excluded from every serialized view to keep reruns byte-identical.
    """

    instance: dict
    seed: int
    use_weak: bool
    final_excess_error: float
    excess_ci: float
    error_estimate: float
    error_ci: float
    ledger: dict
    epoch_trace: tuple
    wall_time: float

    def __post_init__(self):
        if self.final_excess_error < -3.0 * self.excess_ci:
            raise ValueError(
                f"excess estimate {self.final_excess_error} is impossibly negative "
                f"for ci {self.excess_ci}; the measurement or the run is broken"
            )

    def to_json_dict(self) -> dict:
        return {
            "instance": self.instance,
            "seed": self.seed,
            "use_weak": self.use_weak,
            "final_excess_error": self.final_excess_error,
            "excess_ci": self.excess_ci,
            "error_estimate": self.error_estimate,
            "error_ci": self.error_ci,
            "ledger": self.ledger,
            "epoch_trace": list(self.epoch_trace),
        }


def _paired_excess(world: World, classifier, n_test: int):
    """Excess error versus the family optimum on one shared shadow sample."""
    pts = world.shadow_draw(n_test, "excess")
    ys = world.shadow_strong_labels(pts)
    star = world.target()
    err_h = int(np.count_nonzero(classifier.predict(pts) != ys)) / n_test
    err_star = int(np.count_nonzero(star.predict(pts) != ys)) / n_test
    ci = _wilson_halfwidth(err_h, n_test) + _wilson_halfwidth(err_star, n_test)
    return err_h - err_star, ci, err_h, _wilson_halfwidth(err_h, n_test)


def _execute_trial(spec: InstanceSpec, seed: int, config: AlgoConfig, n_test: int):
    world = World(spec.with_seed(seed))
    start = time.perf_counter()
    result = run_main(world, config)
    elapsed = time.perf_counter() - start
    excess, ci, err, err_ci = _paired_excess(world, result.final_classifier, n_test)
    trial = TrialResult(
        instance=spec.with_seed(seed).to_json_dict(),
        seed=seed,
        use_weak=config.use_weak,
        final_excess_error=excess,
        excess_ci=ci,
        error_estimate=err,
        error_ci=err_ci,
        ledger=result.ledger_dict,
        epoch_trace=tuple(e.to_json_dict() for e in result.epochs),
        wall_time=elapsed,
    )
    return trial, result


def run_trial(
    spec: InstanceSpec, seed: int, config: AlgoConfig, n_test: int = 100_000
) -> TrialResult:
    """Run the engine on a fresh world for ``seed`` and measure the result."""
    trial, _ = _execute_trial(spec, seed, config, n_test)
    return trial


def run_comparison(
    instance: InstanceSpec, config: AlgoConfig, seeds, n_test: int = 100_000
) -> list[dict]:
    """Paired main/baseline runs per seed, worlds rebuilt identically.

    Each row reports both runs' strong-query totals and excess estimates
    plus their ratio.  A failing seed yields a row with the ``error``
    column set; the other seeds still run.
    """
    seeds = list(seeds)
    if len(seeds) < 2:
        raise ValueError(f"need at least 2 seeds, got {len(seeds)}")
    main_cfg = AlgoConfig(**{**config.to_json_dict(), "use_weak": True})
    rows = []
    for seed in seeds:
        row = {
            "seed": seed,
            "o_queries_main": None,
            "w_queries_main": None,
            "o_queries_baseline": None,
            "w_queries_baseline": None,
            "ratio": None,
            "excess_main": None,
            "excess_main_ci": None,
            "excess_baseline": None,
            "excess_baseline_ci": None,
            "error": "",
        }
        try:
            trial_m, result_m = _execute_trial(instance, seed, main_cfg, n_test)
            base_cfg = AlgoConfig(**{**main_cfg.to_json_dict(), "use_weak": False})
            trial_b, result_b = _execute_trial(instance, seed, base_cfg, n_test)
            k0_m, xs_m, ys_m = result_m.retained_sets[0]
            k0_b, xs_b, ys_b = result_b.retained_sets[0]
            if not (
                k0_m == k0_b == 0
                and np.array_equal(xs_m, xs_b)
                and np.array_equal(ys_m, ys_b)
            ):
                raise RuntimeError("paired runs disagree on the startup labeled set")
            row.update(
                o_queries_main=trial_m.ledger["strong_total"],
                w_queries_main=trial_m.ledger["weak_total"],
                o_queries_baseline=trial_b.ledger["strong_total"],
                w_queries_baseline=trial_b.ledger["weak_total"],
                ratio=trial_m.ledger["strong_total"] / trial_b.ledger["strong_total"],
                excess_main=trial_m.final_excess_error,
                excess_main_ci=trial_m.excess_ci,
                excess_baseline=trial_b.final_excess_error,
                excess_baseline_ci=trial_b.excess_ci,
            )
        except Exception as exc:  # noqa: BLE001 - row isolation is the contract
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# disagreement-ball geometry


def _flip_distance(h_star, points: np.ndarray) -> np.ndarray:
    """Distance from ``h_star`` to the nearest classifier flipping each point.

    Distances are disagreement masses under the instance distribution
    (uniform interval or disk), matching the metric the ball is built in.
    """
    if isinstance(h_star, ThresholdClassifier):
        t = h_star.threshold
        near = np.abs(points - t)
        # beyond the near-side cut, the first flip comes from the families'
        # reversed-orientation members at distance t or 1 - t
        far = np.where(points >= t, 1.0 - t, t)
        return np.minimum(near, far)
    if isinstance(h_star, HalfspaceClassifier):
        psi = np.arctan2(points[:, 1], points[:, 0])
        out = np.full(len(points), np.inf)
        for boundary in (h_star.angle + 0.5 * math.pi, h_star.angle - 0.5 * math.pi):
            diff = np.abs((psi - boundary + math.pi) % (2.0 * math.pi) - math.pi)
            out = np.minimum(out, diff / math.pi)
        return out
    raise TypeError(f"unsupported optimum {type(h_star).__name__}")


def dis_ball_membership(h_star, points, radius: float) -> np.ndarray:
    """Whether each point is flipped by some classifier within ``radius``."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    points = np.asarray(points, dtype=float)
    return _flip_distance(h_star, points) <= radius


def estimate_theta(world: World, h_star, radii, n_mc: int = 200_000) -> list[tuple]:
    """Disagreement-coefficient estimates, one ``(r, theta_hat)`` per radius.

    For each requested ``r`` the supremum over larger radii is taken on a
    logarithmic grid of 32 points up to 1; ball-region masses come from a
    shared Monte-Carlo shadow sample.
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise ValueError("radii must be positive and nonempty")
    pts = world.shadow_draw(n_mc, "theta")
    dist = _flip_distance(h_star, pts)
    out = []
    for r in radii:
        grid = np.geomspace(r, max(r, 1.0), 32)
        best = 0.0
        for r_prime in grid:
            mass = float(np.count_nonzero(dist <= r_prime)) / n_mc
            best = max(best, mass / float(r_prime))
        out.append((r, best))
    return out


def estimate_alpha(world: World, h_star, r: float, eta: float, n_mc: int = 200_000) -> float:
    """Smallest positive-prediction mass of a difference classifier whose
    false negatives on the radius-``r`` disagreement ball stay under ``eta``.

    Exact cost-sensitive search over the difference class on a shadow
    sample: disagreements outside the ball are masked so only ball
    leakage counts against the budget; the returned mass is the feasible
    minimum, estimated as a fraction of the whole sample.
    """
    if r < 0 or eta < 0:
        raise ValueError("r and eta must be >= 0")
    pts = world.shadow_draw(n_mc, "alpha")
    in_ball = dis_ball_membership(h_star, pts, r)
    y_strong = world.shadow_strong_labels(pts)
    y_weak = world.shadow_weak_labels(pts, tag="alpha")
    y_weak_masked = np.where(in_ball, y_weak, y_strong).astype(np.int8)
    budget = math.floor(eta * n_mc)
    h_df = world.family.cost_sensitive_erm(pts, y_strong, y_weak_masked, budget)
    return float(np.count_nonzero(h_df.predict(pts) == 1)) / n_mc


# ---------------------------------------------------------------------------
# invariant diagnostics


@dataclass(frozen=True)
class DiagnosticReport:
    """Per-epoch re-checks of the run's three correctness invariants.

    Invariant 1 compares excess errors between the as-collected labeled
    sets and their strong relabelings; ``invariant1_margin`` is the worst
    slack-adjusted gap over all probes (nonpositive means it held).
    Invariant 2 recomputes the stopping rule and the pairwise deviation
    bound on the relabeled sets.  Invariant 3 reports the difference
    classifier's Monte-Carlo false-negative and positive masses on its
    epoch's query region; its stated bounds assume scale=1, so scaled
    runs record the masses and the bound values without a verdict.
    """

    invariant1_margin: float
    invariant1_by_epoch: tuple
    invariant2_holds: tuple
    invariant3_fn_mass: tuple
    invariant3_pos_mass: tuple
    invariant3_fn_bound: tuple
    invariant3_pos_bound: tuple
    theta_hat: tuple
    alpha_hat: tuple

    def __post_init__(self):
        for mass in (*self.invariant3_fn_mass, *self.invariant3_pos_mass):
            if not (0.0 <= mass <= 1.0):
                raise ValueError(f"mass {mass} outside [0, 1]")

    def to_json_dict(self) -> dict:
        return {
            "invariant1_margin": self.invariant1_margin,
            "invariant1_by_epoch": list(self.invariant1_by_epoch),
            "invariant2_holds": list(self.invariant2_holds),
            "invariant3_fn_mass": list(self.invariant3_fn_mass),
            "invariant3_pos_mass": list(self.invariant3_pos_mass),
            "invariant3_fn_bound": list(self.invariant3_fn_bound),
            "invariant3_pos_bound": list(self.invariant3_pos_bound),
            "theta_hat": [list(pair) for pair in self.theta_hat],
            "alpha_hat": [list(item) for item in self.alpha_hat],
        }


def _probe_grid(world: World):
    if world.family.name == "threshold-1d":
        cuts = np.linspace(0.0, 1.0, 41)
        return [ThresholdClassifier(float(t), o) for t in cuts for o in (1, -1)]
    angles = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    return [HalfspaceClassifier(float(a)) for a in angles]


def check_invariants(trace, world: World, n_mc: int = 40_000) -> DiagnosticReport:
    """Re-derive the run's correctness invariants from its retained sets.

    ``trace`` is a :class:`~wsal.engine.RunResult` whose ``retained_sets``
    are populated; ``world`` must be built from the same instance so its
    shadow labelers reproduce the run's oracles.  Shadow access raises
    :class:`~wsal.errors.ShadowDisabled` on benchmark-mode worlds.
    """
    if world.spec.to_json_dict() != dict(trace.instance, seed=world.spec.seed):
        raise ValueError("world instance does not match the trace")
    if not trace.retained_sets or trace.retained_sets[0][0] != 0:
        raise ValueError("trace does not retain the per-epoch labeled sets")
    if world.benchmark_mode:
        raise ShadowDisabled("invariant checks need shadow labels")

    config = trace.config
    star = world.target()
    probes = _probe_grid(world)
    true_errs = np.asarray([world.true_error(h) for h in probes])
    star_err = world.true_error(star)
    by_epoch = {k: (xs, ys) for k, xs, ys in trace.retained_sets}

    inv1_by_epoch = []
    inv2_flags = []
    fn_masses, pos_masses, fn_bounds, pos_bounds = [], [], [], []
    worst_margin = -math.inf

    mc_pts = world.shadow_draw(n_mc, "invariant3")
    mc_strong = world.shadow_strong_labels(mc_pts)
    mc_weak = world.shadow_weak_labels(mc_pts, tag="invariant3")

    for record in trace.epochs:
        k = record.k
        eps_k = record.epsilon
        xs, ys_hat = by_epoch[k]
        n = len(ys_hat)
        ys_strong = world.shadow_strong_labels(xs)

        # Invariant 1: relabeling with the strong oracle must not improve
        # any probe's excess over low-excess pivots by more than eps_k/16
        pred = np.stack([h.predict(xs) for h in probes])
        err_hat = np.count_nonzero(pred != ys_hat[None, :], axis=1) / n
        err_rel = np.count_nonzero(pred != ys_strong[None, :], axis=1) / n
        star_hat = np.count_nonzero(star.predict(xs) != ys_hat) / n
        star_rel = np.count_nonzero(star.predict(xs) != ys_strong) / n
        shift = err_rel - err_hat  # per probe: relabeled minus collected
        pivot_ok = true_errs - star_err <= eps_k
        pivot_shifts = np.concatenate([[star_rel - star_hat], shift[pivot_ok]])
        margin = float(shift.max() - pivot_shifts.min() - eps_k / 16.0)
        inv1_by_epoch.append(margin)
        worst_margin = max(worst_margin, margin)

        # Invariant 2: stopping-rule recomputation plus the pairwise
        # deviation bound on the strong-relabeled set
        last = record.rounds[-1]
        delta_t = record.delta / (last.t * (last.t + 1))
        sigma = bounds.vc_deviation(last.n, world.family.vc_dim, delta_t)
        stop_ok = (
            math.isclose(sigma, last.deviation, rel_tol=1e-12)
            and sigma + math.sqrt(sigma * last.empirical_error) <= last.stop_threshold
        )
        emp = err_rel[:, None] - err_rel[None, :]
        true = true_errs[:, None] - true_errs[None, :]
        # pairwise disagreement fractions via the +/-1 prediction matrix:
        # #disagree(h, h') = (n - <pred_h, pred_h'>) / 2
        pred_f = pred.astype(np.float64)
        pair_dis = (n - pred_f @ pred_f.T) / (2.0 * n)
        pair_ok = bool(
            np.all(np.abs(emp - true) <= sigma + np.sqrt(sigma * np.maximum(pair_dis, 0.0)) + 1e-12)
        )
        inv2_flags.append(stop_ok and pair_ok)

        # Invariant 3: difference-classifier masses on this epoch's region
        prev_xs, prev_ys = by_epoch[k - 1]
        tester = DisagreementTester(
            world.family, prev_xs, prev_ys, Fraction(3, 2 ** (k + 1))
        )
        in_region = tester.in_region(mc_pts)
        h_df = classifier_from_dict(record.df_classifier)
        df_pred = h_df.predict(mc_pts)
        fn = float(np.count_nonzero(in_region & (df_pred == -1) & (mc_weak != mc_strong))) / n_mc
        pos = float(np.count_nonzero(in_region & (df_pred == 1))) / n_mc
        fn_masses.append(fn)
        pos_masses.append(pos)
        fn_bounds.append(eps_k / 64.0)
        eps_prev = 2.0 * eps_k
        alpha = estimate_alpha(
            world, star, 2.0 * star_err + eps_prev, eps_k / 512.0, n_mc=n_mc
        )
        pos_bounds.append(6.0 * (alpha + eps_k / 1024.0))

    theta = estimate_theta(world, star, [config.target_epsilon], n_mc=n_mc)
    alpha_samples = [
        (
            2.0 * star_err + config.target_epsilon,
            0.0,
            estimate_alpha(world, star, 2.0 * star_err + config.target_epsilon, 0.0, n_mc=n_mc),
        )
    ]
    return DiagnosticReport(
        invariant1_margin=worst_margin,
        invariant1_by_epoch=tuple(inv1_by_epoch),
        invariant2_holds=tuple(inv2_flags),
        invariant3_fn_mass=tuple(fn_masses),
        invariant3_pos_mass=tuple(pos_masses),
        invariant3_fn_bound=tuple(fn_bounds),
        invariant3_pos_bound=tuple(pos_bounds),
        theta_hat=tuple(theta),
        alpha_hat=tuple(alpha_samples),
    )


# ---------------------------------------------------------------------------
# sweeps

SWEEP_COLUMNS = [
    "family",
    "noise_rate",
    "weak_mode",
    "weak_param",
    "mixture_beta",
    "seed",
    "role",
    "excess_error",
    "ci",
    "o_queries_total",
    "w_queries",
    "epoch_sizes",
    "baseline_o_queries",
    "ratio",
    "error",
]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _trial_row(spec: InstanceSpec, seed: int, role: str, trial: TrialResult, extra: dict) -> dict:
    epoch_sizes = json.dumps(
        [
            {"k": e["k"], "df": e["df_sample_size"], "refine": e["labeled_set_size"]}
            for e in trial.epoch_trace
        ],
        separators=(",", ":"),
    )
    row = {
        "family": spec.family,
        "noise_rate": spec.noise_rate,
        "weak_mode": spec.weak_mode,
        "weak_param": spec.weak_param,
        "mixture_beta": spec.mixture_beta,
        "seed": seed,
        "role": role,
        "excess_error": trial.final_excess_error,
        "ci": trial.excess_ci,
        "o_queries_total": trial.ledger["strong_total"],
        "w_queries": trial.ledger["weak_total"],
        "epoch_sizes": epoch_sizes,
        "baseline_o_queries": None,
        "ratio": None,
        "error": "",
    }
    row.update(extra)
    return row


def _error_row(spec: InstanceSpec, seed: int, role: str, exc: Exception) -> dict:
    row = {col: None for col in SWEEP_COLUMNS}
    row.update(
        family=spec.family,
        noise_rate=spec.noise_rate,
        weak_mode=spec.weak_mode,
        weak_param=spec.weak_param,
        mixture_beta=spec.mixture_beta,
        seed=seed,
        role=role,
        error=f"{type(exc).__name__}: {exc}",
    )
    return row


def _write_trace(trace_dir, index: int, role: str, result) -> None:
    """One JSON-lines file per trial: a run-level header, then epoch lines."""
    blob = result.to_json_dict()
    header = {key: blob[key] for key in sorted(blob) if key != "epochs"}
    path = f"{trace_dir}/trial_{index:04d}_{role}.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
        for epoch in blob["epochs"]:
            fh.write(json.dumps(epoch, sort_keys=True, separators=(",", ":")) + "\n")


def _sweep_cell(args) -> list[dict]:
    spec_dict, seed, config_dict, include_baseline, n_test, index, trace_dir = args
    spec = InstanceSpec.from_json_dict(spec_dict)
    config = AlgoConfig(**config_dict)
    rows = []
    try:
        trial_main, result_main = _execute_trial(spec, seed, config, n_test)
        if trace_dir is not None:
            _write_trace(trace_dir, index, "main", result_main)
    except Exception as exc:  # noqa: BLE001 - failed cells become error rows
        return [_error_row(spec, seed, "main", exc)]
    if not include_baseline:
        rows.append(_trial_row(spec, seed, "main", trial_main, {}))
        return rows
    try:
        base_cfg = AlgoConfig(**{**config_dict, "use_weak": False})
        trial_base, result_base = _execute_trial(spec, seed, base_cfg, n_test)
        if trace_dir is not None:
            _write_trace(trace_dir, index, "baseline", result_base)
    except Exception as exc:  # noqa: BLE001
        rows.append(_trial_row(spec, seed, "main", trial_main, {}))
        rows.append(_error_row(spec, seed, "baseline", exc))
        return rows
    base_o = trial_base.ledger["strong_total"]
    rows.append(
        _trial_row(
            spec,
            seed,
            "main",
            trial_main,
            {
                "baseline_o_queries": base_o,
                "ratio": trial_main.ledger["strong_total"] / base_o,
            },
        )
    )
    rows.append(_trial_row(spec, seed, "baseline", trial_base, {}))
    return rows


def sweep(
    grid,
    seeds,
    sink=None,
    *,
    config: AlgoConfig | None = None,
    include_baseline: bool = False,
    workers: int = 1,
    n_test: int = 100_000,
    trace_dir=None,
) -> list[dict]:
    """Run the cartesian product of instance specs and seeds into CSV rows.

    Row order is the iteration order of ``grid`` crossed with ``seeds``
    regardless of ``workers``; a failing cell contributes a row with the
    ``error`` column filled and the sweep continues.  ``sink`` may be a
    path or a text file object; rows are also returned.  With
    ``trace_dir`` set, each trial writes a JSON-lines file there (one
    run-level header line, then one line per epoch).
    """
    grid = list(grid)
    seeds = list(seeds)
    if not grid:
        raise ValueError("instance grid must be nonempty")
    if not seeds:
        raise ValueError("seeds must be nonempty")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    config = config if config is not None else AlgoConfig()
    trace_dir = None if trace_dir is None else str(trace_dir)
    cells = [
        (spec.to_json_dict(), seed, config.to_json_dict(), include_baseline, n_test, i, trace_dir)
        for i, (spec, seed) in enumerate(
            (spec, seed) for spec in grid for seed in seeds
        )
    ]
    if workers == 1:
        cell_rows = [_sweep_cell(cell) for cell in cells]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cell_rows = list(pool.map(_sweep_cell, cells))
    rows = [row for group in cell_rows for row in group]
    if sink is not None:
        _write_csv(rows, sink)
    return rows


def _write_csv(rows, sink) -> None:
    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[col]) for col in SWEEP_COLUMNS])

    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            emit(fh)
    elif isinstance(sink, io.TextIOBase) or hasattr(sink, "write"):
        emit(sink)
    else:
        raise TypeError(f"sink must be a path or writable text stream, got {type(sink).__name__}")

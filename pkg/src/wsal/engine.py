"""Epoch-based active learning with weak/strong query routing.

The driver halves its accuracy target each epoch.  An epoch, given the
previous epoch's labeled set and its empirical minimizer:

1. tests membership in the disagreement region of the near-minimizers of the
   previous labeled set (outside it, labels are inferred for free);
2. estimates the region's mass by doubling batches of unlabeled draws;
3. unless the region is negligible, trains a cost-sensitive difference
   classifier on freshly labeled in-region points to predict where the weak
   labeler is unreliable;
4. rebuilds the labeled set with doubling rounds of fresh draws, routing
   in-region queries to the strong labeler only where the difference
   classifier flags disagreement, until a deviation-bound stopping rule
   certifies the epoch's accuracy target.

Sample-size prescriptions follow fixed design constants {64, 512, 1024}.
``AlgoConfig.scale`` multiplies these constants, shrinking the prescribed
sizes (startup set, difference-training set) and loosening the stopping and
negligible-region thresholds by the same factor, so desk-scale runs keep
the prescriptions' relative shape.  The false-negative budget divisor (256)
is the one constant left unscaled; see :func:`scaled_fn_budget`.  At
scale=1 the sizes agree exactly with the formulas in :mod:`wsal.bounds`,
which is asserted in the tests; guarantees are only claimed there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bounds
from .errors import BudgetExhausted, DoublingCapExceeded
from .hypotheses import ConstantClassifier, classifier_to_dict
from .world import World

__all__ = [
    "AlgoConfig",
    "DisagreementTester",
    "BiasEstimate",
    "estimate_bias",
    "scaled_startup_size",
    "scaled_df_sample_size",
    "scaled_fn_budget",
    "scaled_stop_threshold",
    "scaled_negligible_threshold",
    "EpochRecord",
    "RoundRecord",
    "RunResult",
    "run_main",
    "run_dbal_baseline",
]

ORACLE_MODES = ("strong", "blended")
FN_BUDGET_STYLES = ("standard", "tight")


@dataclass(frozen=True)
class AlgoConfig:
    """Tunable parameters of a run.

    ``use_weak=False`` gives the disagreement-based baseline: identical
    epochs and routing except every in-region query goes to the strong
    labeler.  ``oracle_mode="blended"`` answers primary queries through the
    world's blended labeler.  ``fn_budget_style="tight"`` divides the
    false-negative budget's accuracy share by a further scaled factor of 128.
    """

    target_epsilon: float = 0.0625
    delta: float = 0.1
    scale: float = 1.0
    use_weak: bool = True
    oracle_mode: str = "strong"
    fn_budget_style: str = "standard"
    max_bias_stages: int = 24
    max_refine_rounds: int = 26
    max_rejection_factor: float = 64.0

    def __post_init__(self):
        if not (0.0 < self.target_epsilon < 1.0):
            raise ValueError(f"target_epsilon must be in (0, 1), got {self.target_epsilon!r}")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must be in (0, 1), got {self.delta!r}")
        if not (self.scale > 0.0):
            raise ValueError(f"scale must be positive, got {self.scale!r}")
        if self.oracle_mode not in ORACLE_MODES:
            raise ValueError(f"oracle_mode must be one of {ORACLE_MODES}, got {self.oracle_mode!r}")
        if self.fn_budget_style not in FN_BUDGET_STYLES:
            raise ValueError(
                f"fn_budget_style must be one of {FN_BUDGET_STYLES}, got {self.fn_budget_style!r}"
            )
        if self.max_bias_stages < 1 or self.max_refine_rounds < 1:
            raise ValueError("stage/round caps must be >= 1")
        if not (self.max_rejection_factor > 0):
            raise ValueError("max_rejection_factor must be positive")

    def to_json_dict(self) -> dict:
        return {
            "target_epsilon": self.target_epsilon,
            "delta": self.delta,
            "scale": self.scale,
            "use_weak": self.use_weak,
            "oracle_mode": self.oracle_mode,
            "fn_budget_style": self.fn_budget_style,
            "max_bias_stages": self.max_bias_stages,
            "max_refine_rounds": self.max_refine_rounds,
            "max_rejection_factor": self.max_rejection_factor,
        }


# ---------------------------------------------------------------------------
# scaled prescriptions


def scaled_startup_size(delta: float, d: int, scale: float) -> int:
    """Startup labeled-set size with the design constants scaled."""
    c64, c512, c1024 = 64.0 * scale, 512.0 * scale, 1024.0 * scale
    raw = c64 * c1024**2 * (2.0 * d * math.log(max(math.e, c512 * c1024**2)) + math.log(96.0 / delta))
    return max(1, math.ceil(raw))


def scaled_df_sample_size(p_hat: float, epsilon: float, d_prime: int, delta: float, scale: float) -> int:
    """Difference-classifier training-set size with scaled constants."""
    c64, c512, c1024 = 64.0 * scale, 512.0 * scale, 1024.0 * scale
    lead = c64 * c1024 * p_hat / epsilon
    arg = max(math.e, c512 * c1024 * p_hat / epsilon)
    raw = lead * (d_prime * math.log(arg) + math.log(72.0 / delta))
    return max(1, math.ceil(raw))


def scaled_fn_budget(m: int, epsilon: float, p_hat: float, scale: float, style: str = "standard") -> int:
    """Allowed false negatives when training the difference classifier.

    The 256 divisor deliberately ignores ``scale``: it fixes the absolute
    error mass the difference classifier may leak (epsilon/256 of the
    distribution), and shrinking it with the sample sizes would let the
    always-negative classifier absorb every observed disagreement in small
    runs.  The budget therefore just floors to 0 at desk scales.
    """
    eps_fn = epsilon if style == "standard" else epsilon / 128.0
    return max(0, math.floor(m * eps_fn / (256.0 * p_hat)))


def scaled_stop_threshold(epsilon: float, scale: float) -> float:
    """Refinement stopping target for the deviation statistic."""
    return epsilon / (512.0 * scale)


def scaled_negligible_threshold(epsilon: float, scale: float) -> float:
    """Region-mass level below which the epoch skips weak routing entirely."""
    return epsilon / (64.0 * scale)


# ---------------------------------------------------------------------------
# disagreement region


class DisagreementTester:
    """Membership test for the disagreement region of near-minimizers.

    A point is in the region when some classifier whose empirical error on
    the reference labeled set is within ``tolerance`` of the minimum
    predicts the opposite of the set's minimizer there.  The comparison is
    exact: counts are integers and the tolerance a rational.
    """

    def __init__(self, family, xs, ys, tolerance: Fraction):
        self.family = family
        self.n = len(ys)
        self.tolerance = Fraction(tolerance)
        self.index = family.erm_index(xs, ys)
        self.base = self.index.best()

    def in_region(self, points) -> np.ndarray:
        points = self.family.as_points(points)
        if len(points) == 0:
            return np.zeros(0, dtype=bool)
        base_preds = self.base.predict(points)
        flipped = (-base_preds).astype(np.int8)
        flip_counts = self.index.min_count_with_labels(points, flipped)
        lhs = (flip_counts.astype(object) - self.index.best_count) * self.tolerance.denominator
        rhs = self.tolerance.numerator * self.n
        return np.asarray(lhs <= rhs, dtype=bool)


# ---------------------------------------------------------------------------
# region-mass estimation


@dataclass(frozen=True)
class BiasEstimate:
    """Outcome of the doubling mass estimator.

    ``p_hat`` is the final two-thirds-deflated estimate; when ``negligible``
    the loop exited early because even the upper confidence bound fell below
    the caller's cutoff, and ``p_hat`` is that stage's raw fraction.
    """

    p_hat: float
    negligible: bool
    stages: int
    draws: int
    ucb: float


def estimate_bias(
    sample_fn,
    delta: float,
    *,
    stop_if_ucb_below: float | None = None,
    max_stages: int = 24,
) -> BiasEstimate:
    """Estimate P(event) by doubling fresh batches until relatively accurate.

    ``sample_fn(count)`` returns a boolean membership array of fresh draws.
    Stage i inspects 2^i draws; with deviation dev_i = sqrt(4 ln(4 2^i /
    delta) / 2^i) the loop stops once dev_i <= frac_i / 3 and returns (2/3)
    frac_i, which with probability 1 - delta lies in [P/2, P].  If
    ``stop_if_ucb_below`` is given and frac_i + dev_i drops under it, the
    event is declared negligible instead.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must be in (0, 1), got {delta!r}")
    draws = 0
    for stage in range(1, max_stages + 1):
        count = 2**stage
        member = np.asarray(sample_fn(count), dtype=bool)
        if member.shape != (count,):
            raise ValueError("sample_fn must return one membership flag per draw")
        draws += count
        frac = float(np.count_nonzero(member)) / count
        dev = math.sqrt(4.0 * math.log(4.0 * count / delta) / count)
        ucb = frac + dev
        if stop_if_ucb_below is not None and ucb < stop_if_ucb_below:
            return BiasEstimate(p_hat=frac, negligible=True, stages=stage, draws=draws, ucb=ucb)
        if dev <= frac / 3.0:
            return BiasEstimate(
                p_hat=2.0 * frac / 3.0, negligible=False, stages=stage, draws=draws, ucb=ucb
            )
    raise BudgetExhausted(
        f"mass estimate did not stabilize within {max_stages} doubling stages"
    )


# ---------------------------------------------------------------------------
# run records


@dataclass(frozen=True)
class RoundRecord:
    """One doubling round of the labeled-set rebuild."""

    t: int
    n: int
    in_region: int
    strong_queries: int
    weak_queries: int
    empirical_error: float
    deviation: float
    stop_stat: float
    stop_threshold: float
    stopped: bool

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "n": self.n,
            "in_region": self.in_region,
            "strong_queries": self.strong_queries,
            "weak_queries": self.weak_queries,
            "empirical_error": self.empirical_error,
            "deviation": self.deviation,
            "stop_stat": self.stop_stat,
            "stop_threshold": self.stop_threshold,
            "stopped": self.stopped,
        }


@dataclass(frozen=True)
class EpochRecord:
    """Everything one epoch measured and decided."""

    k: int
    epsilon: float
    delta: float
    region_tolerance: float
    p_hat: float | None
    bias_stages: int
    bias_draws: int
    region_negligible: bool
    df_kind: str  # "trained", "constant-plus", or "baseline"
    df_classifier: dict
    df_sample_size: int
    fn_budget: int
    rounds: tuple
    labeled_set_size: int
    hypothesis: dict
    true_error: float
    strong_queries: int
    weak_queries: int

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "region_tolerance": self.region_tolerance,
            "p_hat": self.p_hat,
            "bias_stages": self.bias_stages,
            "bias_draws": self.bias_draws,
            "region_negligible": self.region_negligible,
            "df_kind": self.df_kind,
            "df_classifier": self.df_classifier,
            "df_sample_size": self.df_sample_size,
            "fn_budget": self.fn_budget,
            "rounds": [r.to_json_dict() for r in self.rounds],
            "labeled_set_size": self.labeled_set_size,
            "hypothesis": self.hypothesis,
            "true_error": self.true_error,
            "strong_queries": self.strong_queries,
            "weak_queries": self.weak_queries,
        }


@dataclass
class RunResult:
    """Full outcome of a run: per-epoch records, final classifier, ledger.

    ``retained_sets`` holds the raw labeled sets, one ``(k, xs, ys)`` triple
    for the startup set (k=0) and each epoch's final rebuild; diagnostics
    re-examine them in memory, so they stay out of the JSON view.
    """

    config: AlgoConfig
    instance: dict
    startup_size: int
    startup_true_error: float
    epochs: list = field(default_factory=list)
    final_classifier: object = None
    final_true_error: float = math.nan
    ledger_dict: dict = field(default_factory=dict)
    retained_sets: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "instance": self.instance,
            "startup_size": self.startup_size,
            "startup_true_error": self.startup_true_error,
            "epochs": [e.to_json_dict() for e in self.epochs],
            "final_classifier": classifier_to_dict(self.final_classifier),
            "final_true_error": self.final_true_error,
            "ledger": self.ledger_dict,
        }


# ---------------------------------------------------------------------------
# the driver


def _labeled_set_minimizer(family, xs, ys):
    index = family.erm_index(xs, ys)
    return index.best(), index


def _refine_labeled_set(world, config, tester, h_prev, h_df, k, eps_k, delta_k, primary_fn):
    """Doubling rounds of fresh draws until the stop statistic clears."""
    family = world.family
    threshold = scaled_stop_threshold(eps_k, config.scale)
    rounds = []
    for t in range(1, config.max_refine_rounds + 1):
        n_t = 2**t
        xs = world.draw_unlabeled(n_t, k, "refinement")
        in_reg = tester.in_region(xs)
        ys = np.empty(n_t, dtype=np.int8)
        outside = ~in_reg
        if outside.any():
            ys[outside] = h_prev.predict(xs[outside])
        region_pts = xs[in_reg]
        strong_q = weak_q = 0
        if len(region_pts):
            route_strong = h_df.predict(region_pts) == 1
            region_labels = np.empty(len(region_pts), dtype=np.int8)
            n_strong = int(np.count_nonzero(route_strong))
            if n_strong:
                region_labels[route_strong] = primary_fn(region_pts[route_strong], k, "refinement")
                strong_q = n_strong
            n_weak = len(region_pts) - n_strong
            if n_weak:
                region_labels[~route_strong] = world.weak_labels(
                    region_pts[~route_strong], k, "refinement"
                )
                weak_q = n_weak
            ys[in_reg] = region_labels

        h_t, index = _labeled_set_minimizer(family, xs, ys)
        err_t = index.best_count / n_t
        delta_t = delta_k / (t * (t + 1))
        dev_t = bounds.vc_deviation(n_t, family.vc_dim, delta_t)
        stat = dev_t + math.sqrt(dev_t * err_t)
        stopped = stat <= threshold
        rounds.append(
            RoundRecord(
                t=t,
                n=n_t,
                in_region=int(np.count_nonzero(in_reg)),
                strong_queries=strong_q,
                weak_queries=weak_q,
                empirical_error=err_t,
                deviation=dev_t,
                stop_stat=stat,
                stop_threshold=threshold,
                stopped=stopped,
            )
        )
        if stopped:
            return xs, ys, h_t, tuple(rounds)
    raise DoublingCapExceeded(
        f"epoch {k}: stop statistic never reached {threshold} within "
        f"{config.max_refine_rounds} doubling rounds"
    )


def run_main(world: World, config: AlgoConfig) -> RunResult:
    """Run the full epoch schedule on a world and return every record.

    The world's ledger is mutated in place; the result snapshot includes it.
    """
    family = world.family
    primary_fn = world.strong_labels if config.oracle_mode == "strong" else world.blended_labels

    n0 = scaled_startup_size(config.delta, family.vc_dim, config.scale)
    xs = world.draw_unlabeled(n0, 0, "startup")
    ys = primary_fn(xs, 0, "startup")
    h_hat, _ = _labeled_set_minimizer(family, xs, ys)

    result = RunResult(
        config=config,
        instance=world.spec.to_json_dict(),
        startup_size=n0,
        startup_true_error=world.true_error(h_hat),
    )
    result.retained_sets.append((0, xs.copy(), ys.copy()))

    for epoch in bounds.epoch_schedule(config.target_epsilon, config.delta):
        k, eps_k, delta_k = epoch.k, epoch.epsilon, epoch.delta
        tol = Fraction(3, 2 ** (k + 1))  # 3 * 2^-k / 2, exactly
        tester = DisagreementTester(family, xs, ys, tol)
        h_prev = tester.base

        strong_before = world.ledger.strong_total
        weak_before = world.ledger.weak_total

        if config.use_weak:
            bias = estimate_bias(
                lambda count: tester.in_region(world.draw_unlabeled(count, k, "mass-estimate")),
                delta_k,
                stop_if_ucb_below=scaled_negligible_threshold(eps_k, config.scale),
                max_stages=config.max_bias_stages,
            )
            p_hat = bias.p_hat
            if bias.negligible:
                h_df = ConstantClassifier(1)
                df_kind = "constant-plus"
                m = 0
                budget = 0
            else:
                m = scaled_df_sample_size(p_hat, eps_k, family.diff_vc_dim, delta_k, config.scale)
                budget = scaled_fn_budget(m, eps_k, p_hat, config.scale, config.fn_budget_style)
                max_scan = math.ceil(config.max_rejection_factor * m / p_hat) + 1024
                train_xs = world.draw_unlabeled_where(
                    m, k, "difference-training", tester.in_region, max_scan=max_scan
                )
                y_primary = primary_fn(train_xs, k, "difference-training")
                y_weak = world.weak_labels(train_xs, k, "difference-training")
                h_df = family.cost_sensitive_erm(train_xs, y_primary, y_weak, budget)
                df_kind = "trained"
            bias_stages, bias_draws = bias.stages, bias.draws
            p_hat_rec = p_hat
            negligible = bias.negligible
        else:
            h_df = ConstantClassifier(1)
            df_kind = "baseline"
            m = 0
            budget = 0
            bias_stages = bias_draws = 0
            p_hat_rec = None
            negligible = False

        xs, ys, h_hat, rounds = _refine_labeled_set(
            world, config, tester, h_prev, h_df, k, eps_k, delta_k, primary_fn
        )
        result.retained_sets.append((k, xs.copy(), ys.copy()))

        result.epochs.append(
            EpochRecord(
                k=k,
                epsilon=eps_k,
                delta=delta_k,
                region_tolerance=float(tol),
                p_hat=p_hat_rec,
                bias_stages=bias_stages,
                bias_draws=bias_draws,
                region_negligible=negligible,
                df_kind=df_kind,
                df_classifier=classifier_to_dict(h_df),
                df_sample_size=m,
                fn_budget=budget,
                rounds=rounds,
                labeled_set_size=len(ys),
                hypothesis=classifier_to_dict(h_hat),
                true_error=world.true_error(h_hat),
                strong_queries=world.ledger.strong_total - strong_before,
                weak_queries=world.ledger.weak_total - weak_before,
            )
        )

    result.final_classifier = h_hat
    result.final_true_error = world.true_error(h_hat)
    result.ledger_dict = world.ledger.as_dict()
    return result


def run_dbal_baseline(world: World, config: AlgoConfig) -> RunResult:
    """Same epochs and draws, but every in-region query pays the strong price."""
    baseline_config = AlgoConfig(
        **{**config.to_json_dict(), "use_weak": False}
    )
    return run_main(world, baseline_config)

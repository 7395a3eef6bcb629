"""Acceptance gate: nine numbered end-to-end checks at fixed tolerances.

Each check prints one verdict line, echoes it into the terminal summary via
conftest, and then asserts on it.  Three verdicts record targets this
implementation honestly does not meet and are expected to fail: the doubling
mass estimator spends far more draws than the 10x reference allowance (4b),
and the measured disagreement ratio is 2 for both families rather than the
1.0 and sqrt(2) targets (7b, 7c).  The lines carry the measured numbers.
"""

from __future__ import annotations

import math
import statistics
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import record_acceptance
from wsal import bounds, lab
from wsal.engine import AlgoConfig, DisagreementTester, estimate_bias, run_main
from wsal.errors import Infeasible
from wsal.hypotheses import (
    HalfspaceClassifier,
    ThresholdClassifier,
    cons_learn,
    cost_sensitive_erm,
    empirical_error,
    get_family,
)
from wsal.lab import _wilson_halfwidth
from wsal.world import InstanceSpec, World

TWO_PI = 2.0 * math.pi


def check(tag: str, ok: bool, detail: str) -> None:
    line = f"acceptance {tag}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    record_acceptance(line)
    assert ok, line


# ---------------------------------------------------------------------------
# brute-force references (independent of the library's search indexes)


def brute_threshold_errors(t, orient, xs, ys) -> int:
    return sum(1 for x, y in zip(xs, ys) if (orient if x >= t else -orient) != y)


def brute_constrained_min(xs, ys, constraints):
    """Exhaustive constrained minimum over one threshold per behavior cell;
    None when no cut/orientation satisfies every pinned label."""
    cand = sorted(set(list(xs) + [p for p, _ in constraints])) + [math.inf]
    best = None
    for t in cand:
        for orient in (1, -1):
            if any((orient if cx >= t else -orient) != cy for cx, cy in constraints):
                continue
            e = brute_threshold_errors(t, orient, xs, ys)
            if best is None or e < best:
                best = e
    return best


def brute_interval_min_positives(xs, ys_a, ys_b, budget: int) -> int:
    xs = np.asarray(xs, dtype=float)
    dis = xs[np.asarray(ys_a) != np.asarray(ys_b)]
    vals = np.unique(xs)
    best = None
    arcs = [(math.inf, -math.inf)] + [(lo, hi) for lo in vals for hi in vals if lo <= hi]
    for lo, hi in arcs:
        if int(np.count_nonzero((dis < lo) | (dis > hi))) > budget:
            continue
        pos = int(np.count_nonzero((xs >= lo) & (xs <= hi)))
        if best is None or pos < best:
            best = pos
    return best


def brute_threshold_cover(values):
    cuts = sorted(set(float(v) for v in values)) + [math.inf]
    return [ThresholdClassifier(t, o) for t in cuts for o in (1, -1)]


def brute_halfspace_cover(points):
    events = []
    for x, y in points:
        a = math.atan2(y, x)
        events.append((a + 0.5 * math.pi) % TWO_PI)
        events.append((a - 0.5 * math.pi) % TWO_PI)
    events = sorted(set(events))
    mids = [0.5 * (a + b) for a, b in zip(events, events[1:])]
    mids.append((0.5 * (events[-1] + events[0] + TWO_PI)) % TWO_PI)
    return [HalfspaceClassifier(m) for m in mids]


def brute_in_region(cover, xs, ys, base, tol: Fraction, probes) -> np.ndarray:
    """A probe is in the region when some near-minimizer flips the base there."""
    n = len(ys)
    errs = [int(np.count_nonzero(h.predict(xs) != ys)) for h in cover]
    best = min(errs)
    out = []
    for p in probes:
        pt = np.asarray([p], dtype=float)
        want = -int(base.predict(pt)[0])
        out.append(
            any(
                Fraction(e - best) <= tol * n
                for h, e in zip(cover, errs)
                if int(h.predict(pt)[0]) == want
            )
        )
    return np.asarray(out, dtype=bool)


def disk_points(rng, count: int) -> np.ndarray:
    radius = np.sqrt(rng.random(count))
    angle = rng.random(count) * TWO_PI
    return np.stack((radius * np.cos(angle), radius * np.sin(angle)), axis=1)


# ---------------------------------------------------------------------------
# 1: constrained ERM is exactly optimal


def test_criterion_01_constrained_erm_is_exact():
    rng = np.random.default_rng(1001)
    t0 = time.perf_counter()
    feasible = infeasible = mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        xs = rng.integers(0, 17, size=n) / 16.0
        ys = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
        constraints = [
            (float(rng.integers(0, 17)) / 16.0, int(rng.choice([-1, 1])))
            for _ in range(int(rng.integers(0, 4)))
        ]
        want = brute_constrained_min(xs, ys, constraints)
        try:
            h = cons_learn("threshold-1d", constraints, xs, ys)
        except Infeasible:
            if want is None:
                infeasible += 1
            else:
                mismatches += 1
            continue
        honored = all(
            int(h.predict(np.array([cx]))[0]) == cy for cx, cy in constraints
        )
        if want is None or not honored or empirical_error(h, xs, ys) != Fraction(want, n):
            mismatches += 1
        else:
            feasible += 1
    dt = time.perf_counter() - t0
    check(
        "1",
        mismatches == 0 and dt < 10.0,
        f"pinned-label minimizer exact on {feasible} feasible + {infeasible} infeasible "
        f"random instances, {mismatches} mismatches, {dt:.1f}s (budget 10s)",
    )


# ---------------------------------------------------------------------------
# 2: cost-sensitive cover is exactly minimal


def test_criterion_02_cost_sensitive_erm_is_exact():
    rng = np.random.default_rng(2002)
    t0 = time.perf_counter()
    exact = mismatches = 0
    for _ in range(1000):
        m = int(rng.integers(1, 15))
        xs = rng.integers(0, 17, size=m) / 16.0
        ys_a = rng.choice(np.array([-1, 1], dtype=np.int8), size=m)
        ys_b = rng.choice(np.array([-1, 1], dtype=np.int8), size=m)
        budget = int(rng.integers(0, 4))
        want = brute_interval_min_positives(xs, ys_a, ys_b, budget)
        h = cost_sensitive_erm("threshold-1d", xs, ys_a, ys_b, budget)
        preds = h.predict(xs)
        misses = int(np.count_nonzero((preds == -1) & (ys_a != ys_b)))
        positives = int(np.count_nonzero(preds == 1))
        if misses <= budget and positives == want:
            exact += 1
        else:
            mismatches += 1
    dt = time.perf_counter() - t0
    check(
        "2",
        mismatches == 0 and dt < 30.0,
        f"minimal feasible disagreement cover exact on {exact} random triple-sets, "
        f"{mismatches} mismatches, {dt:.1f}s (budget 30s)",
    )


# ---------------------------------------------------------------------------
# 3: region membership matches exhaustive search


def test_criterion_03_region_membership_is_exact():
    rng = np.random.default_rng(3003)
    t0 = time.perf_counter()
    mismatches = checked = 0
    for i in range(500):
        name = "threshold-1d" if i % 2 == 0 else "halfspace-2d"
        family = get_family(name)
        n = int(rng.integers(8, 41))
        tol = Fraction(3, 2 ** (int(rng.integers(1, 7)) + 1))
        if name == "threshold-1d":
            xs = rng.integers(0, 33, size=n) / 32.0
            probes = rng.random(50)
            cover = brute_threshold_cover(np.concatenate((xs, probes)))
        else:
            xs = disk_points(rng, n)
            probes = disk_points(rng, 50)
            cover = brute_halfspace_cover(np.concatenate((xs, probes)))
        ys = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
        tester = DisagreementTester(family, xs, ys, tol)
        got = tester.in_region(probes)
        want = brute_in_region(cover, xs, ys, tester.base, tol, probes)
        mismatches += int(np.count_nonzero(got != want))
        checked += len(probes)
    dt = time.perf_counter() - t0
    check(
        "3",
        mismatches == 0 and dt < 60.0,
        f"{checked} membership probes across 500 random labeled sets (both families), "
        f"{mismatches} mismatches, {dt:.1f}s (budget 60s)",
    )


# ---------------------------------------------------------------------------
# 4: doubling mass estimator, coverage and draw cost

BIAS_PS = (0.1, 0.3, 0.7)


@pytest.fixture(scope="module")
def bias_runs():
    t0 = time.perf_counter()
    out = {}
    for pi, p in enumerate(BIAS_PS):
        runs = []
        for run in range(200):
            rng = np.random.default_rng((4004, pi, run))
            runs.append(estimate_bias(lambda count: rng.random(count) < p, 0.1))
        out[p] = runs
    return out, time.perf_counter() - t0


def test_criterion_04a_bias_estimate_brackets_truth(bias_runs):
    runs, dt = bias_runs
    cover = {
        p: sum(1 for e in rs if e.p_hat <= p <= 2.0 * e.p_hat) / len(rs)
        for p, rs in runs.items()
    }
    rates = "/".join(f"{cover[p]:.3f}" for p in BIAS_PS)
    check(
        "4a",
        all(c >= 0.85 for c in cover.values()) and dt < 60.0,
        f"estimate-to-double bracket rate {rates} for p=0.1/0.3/0.7 over 200 runs "
        f"each (floor 0.85), {dt:.1f}s (budget 60s)",
    )


def test_criterion_04b_bias_estimator_draw_cost(bias_runs):
    runs, _ = bias_runs
    mult = {}
    for p, rs in runs.items():
        reference = (1.0 / p**2) * math.log(1.0 / (0.1 * p))
        mult[p] = statistics.fmean(e.draws for e in rs) / reference
    ratios = "/".join(f"{mult[p]:.0f}x" for p in BIAS_PS)
    check(
        "4b",
        all(m <= 10.0 for m in mult.values()),
        f"mean draws are {ratios} the (1/p^2) ln(1/(delta p)) reference for "
        "p=0.1/0.3/0.7 (allowance 10x); the loop stops only once an absolute "
        "deviation term falls under p/3, which needs about (36/p^2) ln(8/(delta p)) "
        "draws at the final stage alone",
    )


# ---------------------------------------------------------------------------
# 5: final excess error within tolerance under every weak-labeler behavior

CONSISTENCY_MODES = (("identical", 0.0), ("boundary", 0.05), ("adversarial", 0.0))


def test_criterion_05_excess_error_within_tolerance_for_every_weak_mode():
    config = AlgoConfig(target_epsilon=0.05, delta=0.1, scale=0.01)
    t0 = time.perf_counter()
    verdicts = []
    for mode, g in CONSISTENCY_MODES:
        spec = InstanceSpec(noise_rate=0.1, weak_mode=mode, weak_param=g)
        good = 0
        worst = -math.inf
        for seed in range(50):
            trial = lab.run_trial(spec, seed, config)
            if trial.final_excess_error - trial.excess_ci <= 0.05:
                good += 1
            worst = max(worst, trial.final_excess_error)
        verdicts.append((mode, good, worst))
    dt = time.perf_counter() - t0
    summary = "; ".join(
        f"{mode}: {good}/50 within tolerance, max excess {worst:+.4f}"
        for mode, good, worst in verdicts
    )
    check(
        "5",
        all(good >= 45 for _, good, _ in verdicts) and dt < 600.0,
        f"{summary}; {dt:.0f}s (budget 600s)",
    )


# ---------------------------------------------------------------------------
# 6: the weak labeler saves strong queries on a favorable instance


def test_criterion_06_weak_labeler_saves_strong_queries():
    spec = InstanceSpec(noise_rate=0.05, weak_mode="boundary", weak_param=0.1)
    config = AlgoConfig(target_epsilon=0.05, delta=0.1, scale=0.01)
    t0 = time.perf_counter()
    rows = lab.run_comparison(spec, config, range(20))
    ratios = [row["ratio"] for row in rows if not row["error"]]
    wins = sum(1 for r in ratios if r < 1.0)
    dt = time.perf_counter() - t0
    spread = (
        f"min {min(ratios):.3f} / median {statistics.median(ratios):.3f} / "
        f"max {max(ratios):.3f}"
        if ratios
        else "no ratios measured"
    )
    check(
        "6",
        wins >= 18 and dt < 600.0,
        f"paired strong-query ratio below 1 for {wins}/20 seeds on the small-band "
        f"instance; {spread}; {dt:.0f}s (budget 600s)",
    )


# ---------------------------------------------------------------------------
# 7: measured geometry of the disagreement ball


@pytest.fixture(scope="module")
def geometry_estimates():
    t0 = time.perf_counter()
    band = World(
        InstanceSpec(noise_rate=0.05, weak_mode="boundary", weak_param=0.2, seed=7001)
    )
    alpha = lab.estimate_alpha(band, band.target(), 2 * 0.05 + 0.05, 0.0, n_mc=200_000)
    theta = {}
    for name, seed in (("threshold-1d", 7002), ("halfspace-2d", 7003)):
        w = World(InstanceSpec(family=name, noise_rate=0.05, seed=seed))
        theta[name] = lab.estimate_theta(w, w.target(), [0.05], n_mc=150_000)[0][1]
    return alpha, theta, time.perf_counter() - t0


def test_criterion_07a_difference_cover_mass_stays_near_band(geometry_estimates):
    alpha, _, dt = geometry_estimates
    check(
        "7a",
        alpha <= 0.2 + 0.02 and dt < 120.0,
        f"minimal zero-leak cover mass {alpha:.4f} vs disagreement band mass 0.2 "
        f"(allowance +0.02), {dt:.1f}s shared with 7b/7c (budget 120s)",
    )


def test_criterion_07b_disagreement_ratio_one_dimensional(geometry_estimates):
    _, theta, _ = geometry_estimates
    got = theta["threshold-1d"]
    check(
        "7b",
        abs(got - 1.0) <= 0.05,
        f"measured supremum {got:.3f}, target 1.0 +- 0.05; a radius-r ball of cut "
        "points disagrees on an interval of mass 2r here, so the true ratio is 2",
    )


def test_criterion_07c_disagreement_ratio_two_dimensional(geometry_estimates):
    _, theta, _ = geometry_estimates
    got = theta["halfspace-2d"]
    limit = math.sqrt(2.0) + 0.1
    check(
        "7c",
        got <= limit,
        f"measured supremum {got:.3f}, ceiling sqrt(2)+0.1 = {limit:.3f}; rotating "
        "the boundary by angle pi*r opens wedges of mass 2r, so the true ratio is 2",
    )


# ---------------------------------------------------------------------------
# 8: closed forms match a hand evaluation at scale 1


def test_criterion_08_closed_forms_match_hand_evaluation():
    t0 = time.perf_counter()
    worst = 0.0
    int_mismatch = 0

    def rel(a: float, b: float) -> float:
        return abs(a - b) / max(abs(a), abs(b), 1e-300)

    for n in (10, 37, 256, 4096, 100_000):
        for d, delta in ((1, 0.1), (2, 0.05), (5, 0.37), (9, 0.004)):
            hand = (8.0 / n) * (
                2.0 * d * math.log(2.0 * math.e * n / d) + math.log(24.0 / delta)
            )
            worst = max(worst, rel(hand, bounds.vc_deviation(n, d, delta)))

    for n in (1, 8, 129, 5000, 77_777):
        for delta in (0.3, 0.1, 0.02, 0.001):
            hand = (4.0 / n) * math.log(2.0 / delta)
            worst = max(worst, rel(hand, bounds.bernoulli_deviation(n, delta)))

    for delta in (0.5, 0.1, 0.05, 0.01, 0.003):
        for d in (1, 2, 4, 11):
            hand = math.ceil(
                64.0
                * 1024.0**2
                * (2.0 * d * math.log(512.0 * 1024.0**2) + math.log(96.0 / delta))
            )
            if hand != bounds.initial_sample_size(delta, d, 1.0):
                int_mismatch += 1

    for p_hat, eps in ((1.0, 0.5), (0.5, 0.0625), (0.25, 0.01), (0.9, 0.2), (0.03125, 0.03125)):
        for d_prime, delta in ((2, 0.1), (3, 0.05), (7, 0.006), (1, 0.33)):
            lead = 64.0 * 1024.0 * p_hat / eps
            hand = math.ceil(
                lead * (d_prime * math.log(512.0 * 1024.0 * p_hat / eps) + math.log(72.0 / delta))
            )
            if hand != bounds.diff_classifier_sample_size(p_hat, eps, d_prime, delta, 1.0):
                int_mismatch += 1

    for eps in (0.5, 0.25, 0.2, 0.1, 0.05):
        for delta in (0.5, 0.1, 0.01, 0.42):
            schedule = bounds.epoch_schedule(eps, delta)
            k0 = math.ceil(math.log2(1.0 / eps))
            if [e.k for e in schedule] != list(range(1, k0 + 1)):
                int_mismatch += 1
                continue
            for e in schedule:
                worst = max(worst, rel(e.epsilon, 2.0**-e.k))
                worst = max(worst, rel(e.delta, delta / (4.0 * (e.k + 1) ** 2)))

    dt = time.perf_counter() - t0
    check(
        "8",
        worst <= 1e-12 and int_mismatch == 0 and dt < 1.0,
        f"20 tuples per formula across 5 closed forms: float agreement to relative "
        f"{worst:.1e} (cap 1e-12), {int_mismatch} integer/schedule mismatches, "
        f"{dt:.2f}s (budget 1s)",
    )


# ---------------------------------------------------------------------------
# 9: blended labeler obeys the mixture law and supports consistent learning


def test_criterion_09_blended_labeler_law_and_consistency():
    spec = InstanceSpec(
        noise_rate=0.1, weak_mode="boundary", weak_param=0.05, mixture_beta=0.3, seed=9001
    )
    t0 = time.perf_counter()

    world = World(spec)
    probes = (0.1, 0.28, 0.49, 0.51, 0.9)
    laws = (0.0, 1.0, 0.3, 0.7, 1.0)  # off the band both labelers agree; inside, the coin decides
    n_law = 10_000
    law_fail = 0
    gaps = []
    for i, (x, truth) in enumerate(zip(probes, laws)):
        answers = world.blended_labels(np.full(n_law, x), 0, f"law-{i}")
        p_hat = float(np.count_nonzero(answers == 1)) / n_law
        gaps.append(abs(p_hat - truth))
        if abs(p_hat - truth) > _wilson_halfwidth(p_hat, n_law):
            law_fail += 1

    # with mixture weight below 1/2 the family optimum under the blend stays at
    # the same cut, so pairing against the target measures blended excess
    config = AlgoConfig(target_epsilon=0.05, delta=0.1, scale=0.01, oracle_mode="blended")
    n_test = 100_000
    good = 0
    for seed in range(50):
        w = World(spec.with_seed(seed))
        result = run_main(w, config)
        pts = w.shadow_draw(n_test, "blended-acceptance")
        strong = w.shadow_strong_labels(pts)
        weak = w.shadow_weak_labels(pts, tag="blended-acceptance")
        coins = np.random.default_rng((9002, seed)).random(n_test) < spec.mixture_beta
        ys = np.where(coins, weak, strong)
        err_h = int(np.count_nonzero(result.final_classifier.predict(pts) != ys)) / n_test
        err_star = int(np.count_nonzero(w.target().predict(pts) != ys)) / n_test
        ci = _wilson_halfwidth(err_h, n_test) + _wilson_halfwidth(err_star, n_test)
        if err_h - err_star - ci <= 0.05:
            good += 1

    dt = time.perf_counter() - t0
    check(
        "9",
        law_fail == 0 and good >= 45 and dt < 300.0,
        f"label law within a 99% interval at {5 - law_fail}/5 probes (largest gap "
        f"{max(gaps):.4f}); excess under the blended law within tolerance for "
        f"{good}/50 seeds; {dt:.0f}s (budget 300s)",
    )

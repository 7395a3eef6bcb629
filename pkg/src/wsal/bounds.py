"""Finite-sample deviation bounds and the epoch/sample-size schedules built on them.

Everything in this module is a pure function of its arguments.  The two
deviation bounds are the normalized (Bernstein-style) VC bound and the
multiplicative Chernoff bound; the schedule helpers turn a target excess error
into the per-epoch accuracy/confidence sequence and convert accuracy targets
into sample sizes.

Sample-size formulas accept a ``scale`` multiplier: 1.0 reproduces the design
constants exactly, smaller values shrink the prescribed sizes proportionally
(``ceil(scale * formula)``) for desk-scale experiments.  Guarantees are claimed
only at scale=1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BoundParams",
    "vc_deviation",
    "bernoulli_deviation",
    "min_samples_for_deviation",
    "min_samples_closed_form",
    "EpochSpec",
    "epoch_schedule",
    "initial_sample_size",
    "diff_classifier_sample_size",
]


@dataclass(frozen=True)
class BoundParams:
    """VC dimensions of the target and difference hypothesis classes plus the
    global sample-size scale multiplier."""

    d: int = 2
    d_prime: int = 2
    constant_scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if not isinstance(self.d_prime, int) or self.d_prime < 1:
            raise ValueError(f"d_prime must be a positive integer, got {self.d_prime!r}")
        if not (self.constant_scale > 0):
            raise ValueError(f"constant_scale must be positive, got {self.constant_scale!r}")


def _check_n(n) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def _check_positive(name: str, value) -> None:
    if not (value > 0):
        raise ValueError(f"{name} must be positive, got {value!r}")


def vc_deviation(n: int, d: int, delta: float) -> float:
    """Two-sided deviation width for empirical errors over a VC class.

    Returns (8/n) * (2d ln(2en/d) + ln(24/delta)).  With probability at least
    1 - delta, empirical and true error differences over a class of VC
    dimension d deviate by at most this plus a variance term.
    """
    _check_n(n)
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    _check_positive("delta", delta)
    return (8.0 / n) * (2.0 * d * math.log(2.0 * math.e * n / d) + math.log(24.0 / delta))


def bernoulli_deviation(n: int, delta: float) -> float:
    """Multiplicative Chernoff deviation width (4/n) ln(2/delta) for a single
    Bernoulli mean, clamped at zero when delta >= 2 makes the log negative."""
    _check_n(n)
    _check_positive("delta", delta)
    return max(0.0, (4.0 / n) * math.log(2.0 / delta))


def min_samples_closed_form(epsilon: float, d: int, delta: float) -> int:
    """Closed-form upper bound ceil((64/eps)(d ln(512/eps) + ln(24/delta)))
    on :func:`min_samples_for_deviation`."""
    _check_positive("epsilon", epsilon)
    _check_positive("delta", delta)
    return math.ceil((64.0 / epsilon) * (d * math.log(512.0 / epsilon) + math.log(24.0 / delta)))


def min_samples_for_deviation(epsilon: float, d: int, delta: float) -> int:
    """Smallest n with vc_deviation(n, d, delta) <= epsilon.

    Uses doubling plus bisection; the bound is eventually decreasing in n,
    and a short backward walk guards the boundary in case of local flatness.
    :func:`min_samples_closed_form` is a closed-form upper bound on this.
    """
    _check_positive("epsilon", epsilon)
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    _check_positive("delta", delta)

    hi = 1
    while vc_deviation(hi, d, delta) > epsilon:
        hi *= 2
        if hi > 1 << 62:
            raise OverflowError("sample-size search exceeded 2^62")
    lo = max(1, hi // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if vc_deviation(mid, d, delta) <= epsilon:
            hi = mid
        else:
            lo = mid + 1
    while hi > 1 and vc_deviation(hi - 1, d, delta) <= epsilon:
        hi -= 1
    return hi


@dataclass(frozen=True)
class EpochSpec:
    """One epoch of the halving schedule: target accuracy 2^-k at confidence
    share delta / (4 (k+1)^2)."""

    k: int
    epsilon: float
    delta: float


def epoch_schedule(target_epsilon: float, delta: float) -> list[EpochSpec]:
    """Epoch sequence k = 1 .. k0 with k0 = ceil(log2(1/target)), epsilon_k =
    2^-k and delta_k = delta / (4 (k+1)^2).  The delta_k sum to less than
    delta, and the final epsilon_k is <= the target.  Targets >= 1 need no
    halving and yield an empty schedule."""
    _check_positive("target_epsilon", target_epsilon)
    _check_positive("delta", delta)
    k0 = max(0, math.ceil(math.log2(1.0 / target_epsilon)))
    return [EpochSpec(k=k, epsilon=2.0 ** -k, delta=delta / (4.0 * (k + 1) ** 2)) for k in range(1, k0 + 1)]


def initial_sample_size(delta: float, d: int, scale: float = 1.0) -> int:
    """Prescribed size of the fully strong-labeled startup sample,
    ceil(scale * 64*1024^2 * (2d ln(512*1024^2) + ln(96/delta)))."""
    _check_positive("delta", delta)
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    _check_positive("scale", scale)
    raw = 64.0 * 1024.0 ** 2 * (2.0 * d * math.log(512.0 * 1024.0 ** 2) + math.log(96.0 / delta))
    return max(1, math.ceil(scale * raw))


def diff_classifier_sample_size(
    p_hat: float, epsilon: float, d_prime: int, delta: float, scale: float = 1.0
) -> int:
    """Prescribed number of in-region triples for training the difference
    classifier, ceil(scale * (64*1024 p/eps)(d' ln(512*1024 p/eps) + ln(72/delta)))."""
    if not (0.0 < p_hat <= 1.0):
        raise ValueError(f"p_hat must be in (0, 1], got {p_hat!r}")
    _check_positive("epsilon", epsilon)
    if not isinstance(d_prime, int) or d_prime < 1:
        raise ValueError(f"d_prime must be a positive integer, got {d_prime!r}")
    _check_positive("delta", delta)
    _check_positive("scale", scale)
    lead = 64.0 * 1024.0 * p_hat / epsilon
    raw = lead * (d_prime * math.log(512.0 * 1024.0 * p_hat / epsilon) + math.log(72.0 / delta))
    return max(1, math.ceil(scale * raw))

"""Hypothesis classes and exact empirical risk minimization.

Two base families are provided:

* ``threshold-1d``: signed thresholds on the real line.  A classifier is a
  pair (threshold t, orientation o) predicting o for x >= t and -o otherwise.
* ``halfspace-2d``: origin-through halfspaces in the plane, parameterized by
  the angle of the positive normal.  Points on the boundary get +1.

Each family also carries a difference class used to predict where two
labelers disagree: closed intervals for the line, symmetric differences of
two halfspaces (a pair of opposite wedges) for the plane.

All minimizers here are exact, not sampled or grid-based: they enumerate the
finitely many labelings the family induces on the data.  Ties are broken
toward the smallest canonical parameter so repeated runs pick the same
classifier.  Empirical error and disagreement are returned as ``Fraction``
values, so downstream comparisons against rational tolerances are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import Infeasible

__all__ = [
    "ThresholdClassifier",
    "HalfspaceClassifier",
    "Interval",
    "WedgePair",
    "ConstantClassifier",
    "ThresholdErmIndex",
    "HalfspaceErmIndex",
    "ThresholdFamily",
    "HalfspaceFamily",
    "FAMILIES",
    "get_family",
    "empirical_error",
    "empirical_disagreement",
    "cons_learn",
    "cost_sensitive_erm",
    "classifier_to_dict",
    "classifier_from_dict",
]

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# input normalization


def _as_labels(ys) -> np.ndarray:
    ys = np.asarray(ys)
    if ys.ndim != 1:
        raise ValueError(f"labels must be one-dimensional, got shape {ys.shape}")
    if ys.size and not np.all(np.isin(ys, (-1, 1))):
        raise ValueError("labels must be +1 or -1")
    return ys.astype(np.int8)


def _as_points_1d(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1:
        raise ValueError(f"expected points of shape (n,), got {xs.shape}")
    if xs.size and not np.all(np.isfinite(xs)):
        raise ValueError("points must be finite")
    return xs


def _as_points_2d(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return xs.reshape(0, 2)
    if xs.ndim != 2 or xs.shape[1] != 2:
        raise ValueError(f"expected points of shape (n, 2), got {xs.shape}")
    if not np.all(np.isfinite(xs)):
        raise ValueError("points must be finite")
    return xs


# ---------------------------------------------------------------------------
# classifiers


@dataclass(frozen=True, order=True)
class ThresholdClassifier:
    """Signed threshold on the line: predicts orientation for x >= threshold."""

    threshold: float
    orientation: int

    def __post_init__(self):
        if self.orientation not in (-1, 1):
            raise ValueError("orientation must be +1 or -1")

    def predict(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.where(xs >= self.threshold, self.orientation, -self.orientation)
        return out.astype(np.int8)


@dataclass(frozen=True, order=True)
class HalfspaceClassifier:
    """Halfspace through the origin; ``angle`` is the positive normal's angle.

    Predicts +1 when the dot product with the normal is >= 0, so the boundary
    line (and the origin) sit on the positive side.
    """

    angle: float

    def normal(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])

    def predict(self, xs) -> np.ndarray:
        xs = _as_points_2d(xs)
        dots = xs @ self.normal()
        return np.where(dots >= 0.0, 1, -1).astype(np.int8)


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval on the line, predicting +1 inside and -1 outside.

    ``Interval(math.inf, -math.inf)`` is the canonical always-negative
    classifier and ``Interval(-math.inf, math.inf)`` the always-positive one.
    """

    lo: float
    hi: float

    def predict(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        inside = (xs >= self.lo) & (xs <= self.hi)
        return np.where(inside, 1, -1).astype(np.int8)


@dataclass(frozen=True, order=True)
class WedgePair:
    """Symmetric difference of two origin-through halfspaces.

    Predicts +1 exactly where the two halfspaces disagree, which is a pair of
    opposite wedges.  Equal angles give the always-negative classifier (two
    identical halfspaces never disagree, boundary ties included).
    """

    angle_a: float
    angle_b: float

    def predict(self, xs) -> np.ndarray:
        xs = _as_points_2d(xs)
        side_a = xs @ np.array([math.cos(self.angle_a), math.sin(self.angle_a)]) >= 0.0
        side_b = xs @ np.array([math.cos(self.angle_b), math.sin(self.angle_b)]) >= 0.0
        return np.where(side_a != side_b, 1, -1).astype(np.int8)


@dataclass(frozen=True, order=True)
class ConstantClassifier:
    """Predicts the same label everywhere, in any dimension."""

    label: int

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise ValueError("label must be +1 or -1")

    def predict(self, xs) -> np.ndarray:
        xs = np.asarray(xs)
        n = xs.shape[0] if xs.ndim else 1
        return np.full(n, self.label, dtype=np.int8)


# ---------------------------------------------------------------------------
# empirical quantities


def empirical_error(classifier, xs, ys) -> Fraction:
    """Fraction of labeled points the classifier gets wrong; 0 on empty data."""
    ys = _as_labels(ys)
    n = int(ys.size)
    if n == 0:
        return Fraction(0, 1)
    preds = classifier.predict(xs)
    if preds.shape != ys.shape:
        raise ValueError("prediction/label shape mismatch")
    return Fraction(int(np.count_nonzero(preds != ys)), n)


def empirical_disagreement(first, second, xs) -> Fraction:
    """Fraction of points where two classifiers predict different labels."""
    xs_arr = np.asarray(xs)
    n = int(xs_arr.shape[0]) if xs_arr.ndim else 0
    if n == 0:
        return Fraction(0, 1)
    return Fraction(int(np.count_nonzero(first.predict(xs) != second.predict(xs))), n)


# ---------------------------------------------------------------------------
# threshold family: exact ERM with constrained-minimum queries


class ThresholdErmIndex:
    """Precomputed structure answering threshold-ERM queries on one dataset.

    Classifier behavior on the data only depends on which cut cell the
    threshold falls in, so errors are tabulated per cut (0..n over the sorted
    points), and prefix/suffix minima give the constrained minimum
    "best error among classifiers predicting y at x" in O(log n) per probe.
    Cuts that fall between equal sorted values are not realizable and are
    masked with a sentinel before the minima are taken.
    """

    def __init__(self, xs, ys):
        xs = _as_points_1d(xs)
        ys = _as_labels(ys)
        if xs.shape != ys.shape:
            raise ValueError("points/labels length mismatch")
        order = np.argsort(xs, kind="stable")
        self.xs_sorted = xs[order]
        ys_sorted = ys[order]
        n = int(xs.size)
        self.n = n

        plus_before = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(ys_sorted == 1, out=plus_before[1:])
        total_plus = int(plus_before[n])
        # errors of (cut i, orientation +1): plus points left of the cut are
        # predicted -1, minus points right of it are predicted +1
        idx = np.arange(n + 1, dtype=np.int64)
        count_plus = plus_before + (n - idx) - (total_plus - plus_before)
        count_minus = n - count_plus

        sentinel = n + 1
        realizable = np.ones(n + 1, dtype=bool)
        if n > 1:
            realizable[1:n] = self.xs_sorted[:-1] < self.xs_sorted[1:]
        self._count_plus = np.where(realizable, count_plus, sentinel)
        self._count_minus = np.where(realizable, count_minus, sentinel)

        self._prefmin_plus = np.minimum.accumulate(self._count_plus)
        self._prefmin_minus = np.minimum.accumulate(self._count_minus)
        self._sufmin_plus = np.minimum.accumulate(self._count_plus[::-1])[::-1]
        self._sufmin_minus = np.minimum.accumulate(self._count_minus[::-1])[::-1]

        self.best_count = int(min(self._prefmin_plus[n], self._prefmin_minus[n]))

    def _cut_threshold(self, cut: int) -> float:
        if cut == 0:
            return -math.inf
        if cut == self.n:
            return math.inf
        return float(0.5 * (self.xs_sorted[cut - 1] + self.xs_sorted[cut]))

    def best(self) -> ThresholdClassifier:
        """Minimizer with the smallest (threshold, orientation-rank) pair."""
        best = None
        for counts, orient in ((self._count_plus, 1), (self._count_minus, -1)):
            cuts = np.flatnonzero(counts == self.best_count)
            for cut in cuts:
                cand = (self._cut_threshold(int(cut)), 0 if orient == 1 else 1)
                if best is None or cand < best:
                    best = cand
        assert best is not None
        return ThresholdClassifier(best[0], 1 if best[1] == 0 else -1)

    def min_count_with_labels(self, xs, ys) -> np.ndarray:
        """Minimum data errors over classifiers predicting ys[i] at xs[i].

        Vectorized over probe points; probes need not belong to the dataset.
        """
        xs = _as_points_1d(xs)
        ys = _as_labels(ys)
        left = np.searchsorted(self.xs_sorted, xs, side="left")
        right = np.searchsorted(self.xs_sorted, xs, side="right")
        want_plus = ys == 1
        # orientation +1 predicts +1 at x iff threshold <= x (cut <= #points < x)
        via_plus = np.where(
            want_plus, self._prefmin_plus[left], self._sufmin_plus[right]
        )
        via_minus = np.where(
            want_plus, self._sufmin_minus[right], self._prefmin_minus[left]
        )
        return np.minimum(via_plus, via_minus)

    def min_count_with_label(self, x: float, y: int) -> int:
        return int(self.min_count_with_labels([x], [y])[0])


def _threshold_candidates(values: np.ndarray) -> np.ndarray:
    """Candidate thresholds covering every behavior on the given points."""
    uniq = np.unique(values)
    mids = 0.5 * (uniq[:-1] + uniq[1:]) if uniq.size > 1 else np.empty(0)
    return np.concatenate(([-math.inf], mids, [math.inf]))


def _threshold_constrained_erm(constraints, xs, ys) -> ThresholdClassifier:
    xs = _as_points_1d(xs)
    ys = _as_labels(ys)
    if constraints:
        cxs = _as_points_1d([float(p) for p, _ in constraints])
        cys = _as_labels([int(y) for _, y in constraints])
    else:
        cxs = np.empty(0)
        cys = np.empty(0, dtype=np.int8)

    cands = _threshold_candidates(np.concatenate((xs, cxs)))
    best = None
    for orient in (1, -1):
        # feasibility is checked by direct prediction at the constraint points
        if cxs.size:
            pred = np.where(cxs[:, None] >= cands[None, :], orient, -orient)
            feasible = np.all(pred == cys[:, None], axis=0)
        else:
            feasible = np.ones(cands.size, dtype=bool)
        if not feasible.any():
            continue
        if xs.size:
            data_pred = np.where(xs[:, None] >= cands[None, :], orient, -orient)
            errs = np.count_nonzero(data_pred != ys[:, None], axis=0)
        else:
            errs = np.zeros(cands.size, dtype=np.int64)
        errs = np.where(feasible, errs, xs.size + 1)
        i = int(np.argmin(errs))  # argmin takes the first, i.e. smallest t
        cand = (int(errs[i]), float(cands[i]), 0 if orient == 1 else 1)
        if best is None or cand < best:
            best = cand
    if best is None:
        raise Infeasible("no threshold classifier satisfies the constraints")
    return ThresholdClassifier(best[1], 1 if best[2] == 0 else -1)


def _interval_cost_erm(xs, ys_primary, ys_secondary, budget: int) -> Interval:
    """Interval minimizing predicted positives among classifiers that miss at
    most ``budget`` of the points where the two label columns disagree.

    Enumerates every way to split the allowed misses between the left and
    right ends of the sorted disagreement points; the optimum always covers a
    contiguous block of them.
    """
    xs = _as_points_1d(xs)
    ys_primary = _as_labels(ys_primary)
    ys_secondary = _as_labels(ys_secondary)
    if not (xs.shape == ys_primary.shape == ys_secondary.shape):
        raise ValueError("points/labels length mismatch")
    if budget < 0:
        raise ValueError("budget must be >= 0")

    dis = np.sort(xs[ys_primary != ys_secondary])
    n_dis = int(dis.size)
    if n_dis <= budget:
        return Interval(math.inf, -math.inf)

    xs_sorted = np.sort(xs)
    best = None
    for skip_left in range(budget + 1):
        lo = dis[skip_left]
        hi = dis[n_dis - 1 - (budget - skip_left)]
        pos = int(
            np.searchsorted(xs_sorted, hi, side="right")
            - np.searchsorted(xs_sorted, lo, side="left")
        )
        cand = (pos, float(lo), float(hi))
        if best is None or cand < best:
            best = cand
    assert best is not None
    return Interval(best[1], best[2])


# ---------------------------------------------------------------------------
# halfspace family: circular sweep ERM


def _cell_of(breakpoints: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Index of the sweep cell whose open interior contains each angle.

    Angles equal to a breakpoint map to the cell just above it.
    """
    return (np.searchsorted(breakpoints, angles, side="right") - 1) % breakpoints.size


class HalfspaceErmIndex:
    """Sweep-based ERM index for origin-through halfspaces.

    A point's prediction flips only when the normal's angle crosses the
    point's direction +- pi/2, so the circle splits into at most 2n cells of
    constant empirical error.  Errors per cell come from one direct count
    plus a running delta walk; constrained minima are answered with a sparse
    table range-minimum over the circular cell array.

    Minima range over normals strictly inside sweep cells.  Normals sitting
    exactly on a cell boundary are skipped, so results are exact for data in
    general position (almost surely the case for the continuous samples this
    package draws) but can miss degenerate boundary-coincidence optima.
    """

    def __init__(self, xs, ys):
        xs = _as_points_2d(xs)
        ys = _as_labels(ys)
        if xs.shape[0] != ys.shape[0]:
            raise ValueError("points/labels length mismatch")
        self.n = n = int(xs.shape[0])

        radii = np.hypot(xs[:, 0], xs[:, 1])
        active = radii > 0.0
        # origin points are predicted +1 by every halfspace
        self._origin_errors = int(np.count_nonzero(ys[~active] == -1))
        phi = np.arctan2(xs[active, 1], xs[active, 0])
        y_act = ys[active]

        if phi.size == 0:
            self._breaks = np.array([0.0])
            self._cell_errors = np.array([self._origin_errors], dtype=np.int64)
            self._mids = self._cell_mids()
        else:
            enters = (phi - 0.5 * math.pi) % _TWO_PI
            exits = (phi + 0.5 * math.pi) % _TWO_PI
            # crossing an enter upward turns the prediction +1, an exit -1
            deltas_at = np.concatenate((np.where(y_act == 1, -1, 1), np.where(y_act == 1, 1, -1)))
            events = np.concatenate((enters, exits))
            self._breaks, inverse = np.unique(events, return_inverse=True)
            deltas = np.bincount(inverse, weights=deltas_at, minlength=self._breaks.size)
            self._mids = self._cell_mids()

            w0 = np.array([math.cos(self._mids[0]), math.sin(self._mids[0])])
            pred0 = np.where(xs[active] @ w0 >= 0.0, 1, -1)
            err0 = int(np.count_nonzero(pred0 != y_act)) + self._origin_errors

            # cell j sits between breaks[j] and breaks[j+1]; the walk into
            # cell j crosses breaks[j], so it accumulates deltas[j]
            m = self._breaks.size
            errs = np.empty(m, dtype=np.int64)
            errs[0] = err0
            if m > 1:
                errs[1:] = err0 + np.cumsum(deltas[1:])
            self._cell_errors = errs
        self.best_count = int(self._cell_errors.min())
        self._table = self._build_sparse_table(self._cell_errors)

    def _cell_mids(self) -> np.ndarray:
        b = self._breaks
        m = b.size
        mids = np.empty(m)
        if m == 1:
            mids[0] = (b[0] + math.pi) % _TWO_PI
        else:
            mids[:-1] = 0.5 * (b[:-1] + b[1:])
            mids[-1] = (0.5 * (b[-1] + b[0] + _TWO_PI)) % _TWO_PI
        return mids

    @staticmethod
    def _build_sparse_table(errs: np.ndarray) -> list[np.ndarray]:
        doubled = np.concatenate((errs, errs))
        table = [doubled]
        length = 1
        while length * 2 <= doubled.size:
            prev = table[-1]
            table.append(np.minimum(prev[: prev.size - length], prev[length:]))
            length *= 2
        return table

    def _range_min(self, start: np.ndarray, length: np.ndarray) -> np.ndarray:
        # circular contiguous range [start, start+length-1] over the cells
        level = np.floor(np.log2(length)).astype(np.int64)
        block = 1 << level
        t_lo = np.empty(start.size, dtype=np.int64)
        t_hi = np.empty(start.size, dtype=np.int64)
        for lev in np.unique(level):
            mask = level == lev
            tab = self._table[int(lev)]
            t_lo[mask] = tab[start[mask]]
            t_hi[mask] = tab[start[mask] + length[mask] - block[mask]]
        return np.minimum(t_lo, t_hi)

    def best(self) -> HalfspaceClassifier:
        cells = np.flatnonzero(self._cell_errors == self.best_count)
        return HalfspaceClassifier(float(self._mids[cells].min()))

    def min_count_with_labels(self, xs, ys) -> np.ndarray:
        """Minimum data errors over halfspaces predicting ys[i] at xs[i]."""
        xs = _as_points_2d(xs)
        ys = _as_labels(ys)
        out = np.empty(ys.size, dtype=np.int64)

        radii = np.hypot(xs[:, 0], xs[:, 1])
        at_origin = radii == 0.0
        # the origin is always predicted +1: -1 there is unachievable
        out[at_origin & (ys == 1)] = self.best_count
        out[at_origin & (ys == -1)] = self.n + 1

        act = ~at_origin
        if act.any():
            phi = np.arctan2(xs[act, 1], xs[act, 0])
            want_plus = ys[act] == 1
            # +1 at x needs the normal within pi/2 of x's direction
            arc_start = np.where(want_plus, phi - 0.5 * math.pi, phi + 0.5 * math.pi)
            arc_start = arc_start % _TWO_PI
            first = _cell_of(self._breaks, arc_start)
            arc_end = (arc_start + math.pi) % _TWO_PI
            last = _cell_of(self._breaks, arc_end)
            m = self._breaks.size
            length = (last - first) % m + 1
            out[act] = self._range_min(first, length)
        return out

    def min_count_with_label(self, x, y: int) -> int:
        return int(self.min_count_with_labels(np.asarray(x, dtype=float).reshape(1, 2), [y])[0])


def _halfspace_constrained_erm(constraints, xs, ys) -> HalfspaceClassifier:
    xs = _as_points_2d(xs)
    ys = _as_labels(ys)
    if constraints:
        cxs = _as_points_2d(np.array([p for p, _ in constraints], dtype=float))
        cys = _as_labels([int(y) for _, y in constraints])
    else:
        cxs = np.empty((0, 2))
        cys = np.empty(0, dtype=np.int8)

    merged = np.concatenate((xs, cxs), axis=0)
    radii = np.hypot(merged[:, 0], merged[:, 1])
    phi = np.arctan2(merged[radii > 0.0, 1], merged[radii > 0.0, 0])
    if phi.size:
        events = np.unique(np.concatenate(((phi - 0.5 * math.pi) % _TWO_PI,
                                           (phi + 0.5 * math.pi) % _TWO_PI)))
        mids = np.empty(events.size)
        mids[:-1] = 0.5 * (events[:-1] + events[1:])
        mids[-1] = (0.5 * (events[-1] + events[0] + _TWO_PI)) % _TWO_PI
        cands = mids
    else:
        cands = np.array([0.0])

    normals = np.stack((np.cos(cands), np.sin(cands)), axis=1)
    if cxs.size:
        pred_c = np.where(cxs @ normals.T >= 0.0, 1, -1)
        feasible = np.all(pred_c == cys[:, None], axis=0)
    else:
        feasible = np.ones(cands.size, dtype=bool)
    if not feasible.any():
        raise Infeasible("no halfspace satisfies the constraints")
    if xs.size:
        pred_d = np.where(xs @ normals.T >= 0.0, 1, -1)
        errs = np.count_nonzero(pred_d != ys[:, None], axis=0)
    else:
        errs = np.zeros(cands.size, dtype=np.int64)
    errs = np.where(feasible, errs, xs.shape[0] + 1)
    best_err = int(errs.min())
    return HalfspaceClassifier(float(cands[errs == best_err].min()))


def _circular_count(sorted_vals: np.ndarray, lo: float, hi: float, period: float) -> int:
    """Points of ``sorted_vals`` (all in [0, period)) inside circular [lo, hi]."""
    lo %= period
    hi %= period
    left = np.searchsorted(sorted_vals, lo, side="left")
    right = np.searchsorted(sorted_vals, hi, side="right")
    if lo <= hi:
        return int(right - left)
    return int(sorted_vals.size - left + right)


def _wedge_for_arc(lo: float, hi: float) -> WedgePair:
    """Wedge pair predicting +1 exactly on directions in the open-ended
    neighborhood of the arc [lo, hi] (angles mod pi)."""
    length = (hi - lo) % math.pi
    angle_a = (lo - 0.5 * math.pi) % _TWO_PI
    angle_b = (angle_a + length) % _TWO_PI
    return WedgePair(float(angle_a), float(angle_b))


def _wedge_cost_erm(xs, ys_primary, ys_secondary, budget: int) -> WedgePair:
    """Wedge-pair analogue of the interval cost minimizer.

    Directions are folded mod pi (a wedge pair is symmetric under x -> -x),
    the uncovered disagreements form a circular run, and returned arcs are
    padded out to half-gaps so covered sample points sit strictly inside.
    """
    xs = _as_points_2d(xs)
    ys_primary = _as_labels(ys_primary)
    ys_secondary = _as_labels(ys_secondary)
    if not (xs.shape[0] == ys_primary.size == ys_secondary.size):
        raise ValueError("points/labels length mismatch")
    if budget < 0:
        raise ValueError("budget must be >= 0")

    radii = np.hypot(xs[:, 0], xs[:, 1])
    if np.any(radii == 0.0):
        # the origin is on every halfspace boundary, so no wedge pair can
        # predict +1 there; drop such points from the geometry but count them
        keep = radii > 0.0
        origin_dis = int(np.count_nonzero((ys_primary != ys_secondary) & ~keep))
        if origin_dis:
            budget -= origin_dis  # they are unavoidable misses
            if budget < 0:
                raise Infeasible("origin disagreements exceed the miss budget")
        xs, ys_primary, ys_secondary = xs[keep], ys_primary[keep], ys_secondary[keep]

    psi = np.arctan2(xs[:, 1], xs[:, 0]) % math.pi
    dis = np.sort(psi[ys_primary != ys_secondary])
    n_dis = int(dis.size)
    if n_dis <= budget:
        return WedgePair(0.0, 0.0)

    psi_sorted = np.sort(psi)
    cover = n_dis - budget
    best = None
    for start in range(n_dis):
        lo = dis[start]
        hi = dis[(start + cover - 1) % n_dis]
        pos = _circular_count(psi_sorted, lo, hi, math.pi)
        cand = (pos, float(lo), float((hi - lo) % math.pi))
        if best is None or cand < best:
            best = cand
    assert best is not None
    _, lo, length = best
    hi = (lo + length) % math.pi

    # pad the arc so covered directions sit strictly inside; capping at a
    # quarter of the smallest angular gap keeps excluded directions outside,
    # capping at a third of the leftover arc keeps the wedge a proper wedge
    uniq = np.unique(psi_sorted)
    gaps = np.diff(uniq, append=uniq[0] + math.pi)
    pad = min(0.25 * float(gaps.min()), (math.pi - length) / 3.0)
    return _wedge_for_arc(lo - pad, hi + pad)


# ---------------------------------------------------------------------------
# family objects


class ThresholdFamily:
    """Signed thresholds on [0, 1] with interval difference classifiers."""

    name = "threshold-1d"
    dim = 1
    vc_dim = 2
    diff_vc_dim = 2

    def erm_index(self, xs, ys) -> ThresholdErmIndex:
        return ThresholdErmIndex(xs, ys)

    def erm(self, xs, ys) -> ThresholdClassifier:
        return ThresholdErmIndex(xs, ys).best()

    def constrained_erm(self, constraints, xs, ys) -> ThresholdClassifier:
        return _threshold_constrained_erm(constraints, xs, ys)

    def cost_sensitive_erm(self, xs, ys_primary, ys_secondary, budget) -> Interval:
        return _interval_cost_erm(xs, ys_primary, ys_secondary, int(budget))

    def as_points(self, xs) -> np.ndarray:
        return _as_points_1d(xs)


class HalfspaceFamily:
    """Origin-through halfspaces in the plane with wedge-pair differences."""

    name = "halfspace-2d"
    dim = 2
    vc_dim = 2
    diff_vc_dim = 5

    def erm_index(self, xs, ys) -> HalfspaceErmIndex:
        return HalfspaceErmIndex(xs, ys)

    def erm(self, xs, ys) -> HalfspaceClassifier:
        return HalfspaceErmIndex(xs, ys).best()

    def constrained_erm(self, constraints, xs, ys) -> HalfspaceClassifier:
        return _halfspace_constrained_erm(constraints, xs, ys)

    def cost_sensitive_erm(self, xs, ys_primary, ys_secondary, budget) -> WedgePair:
        return _wedge_cost_erm(xs, ys_primary, ys_secondary, int(budget))

    def as_points(self, xs) -> np.ndarray:
        return _as_points_2d(xs)


THRESHOLD_1D = ThresholdFamily()
HALFSPACE_2D = HalfspaceFamily()
FAMILIES = {f.name: f for f in (THRESHOLD_1D, HALFSPACE_2D)}


def get_family(name: str):
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(
            f"unknown family {name!r}; available: {sorted(FAMILIES)}"
        ) from None


def cons_learn(family, constraints, xs, ys):
    """Best-on-data classifier among those matching every constraint exactly.

    ``constraints`` is a sequence of (point, label) pairs; raises
    ``Infeasible`` when no classifier in the family satisfies all of them.
    """
    if isinstance(family, str):
        family = get_family(family)
    return family.constrained_erm(constraints, xs, ys)


def cost_sensitive_erm(family, xs, ys_primary, ys_secondary, budget):
    """Difference classifier covering label disagreements, minimizing its
    predicted-positive count subject to at most ``budget`` missed
    disagreements (false negatives)."""
    if isinstance(family, str):
        family = get_family(family)
    return family.cost_sensitive_erm(xs, ys_primary, ys_secondary, budget)


# ---------------------------------------------------------------------------
# serialization


def _float_out(x: float):
    # JSON has no +-inf; encode them as strings that float() parses back
    return x if math.isfinite(x) else str(x)


def _float_in(x) -> float:
    return float(x)


def classifier_to_dict(h) -> dict:
    if isinstance(h, ThresholdClassifier):
        return {"kind": "threshold", "threshold": _float_out(h.threshold), "orientation": h.orientation}
    if isinstance(h, HalfspaceClassifier):
        return {"kind": "halfspace", "angle": h.angle}
    if isinstance(h, Interval):
        return {"kind": "interval", "lo": _float_out(h.lo), "hi": _float_out(h.hi)}
    if isinstance(h, WedgePair):
        return {"kind": "wedge-pair", "angle_a": h.angle_a, "angle_b": h.angle_b}
    if isinstance(h, ConstantClassifier):
        return {"kind": "constant", "label": h.label}
    raise TypeError(f"cannot serialize classifier of type {type(h).__name__}")


def classifier_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "threshold":
        return ThresholdClassifier(_float_in(data["threshold"]), int(data["orientation"]))
    if kind == "halfspace":
        return HalfspaceClassifier(float(data["angle"]))
    if kind == "interval":
        return Interval(_float_in(data["lo"]), _float_in(data["hi"]))
    if kind == "wedge-pair":
        return WedgePair(float(data["angle_a"]), float(data["angle_b"]))
    if kind == "constant":
        return ConstantClassifier(int(data["label"]))
    raise ValueError(f"unknown classifier kind {kind!r}")

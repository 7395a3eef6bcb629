"""Synthetic labeling worlds with known ground truth.

A world couples a data distribution, a deterministic strong labeler, and a
(possibly randomized) weak labeler, and meters every query through a ledger.

Two geometries are provided:

* ``threshold-1d``: x ~ Uniform[0, 1].  The best threshold classifier sits at
  0.5 with orientation +1.  The strong labeler answers with that classifier's
  label except on two flipped slivers of total mass ``noise_rate`` placed
  strictly inside each side (just below 0.3 and just above 0.7), which keeps
  the 0.5 threshold the unique family optimum and keeps the label marginal
  balanced.
* ``halfspace-2d``: x uniform on the unit disk.  The best halfspace has
  normal angle 0 (positive side x >= 0).  The flipped region is a pair of
  antipodal wedges of total mass ``noise_rate`` centered well away from the
  decision boundary (around direction pi/4), so the angle-0 halfspace stays
  the unique family optimum.

Weak labeler modes:

* ``identical``: agrees with the strong labeler everywhere.
* ``boundary``: disagrees exactly on a region of mass ``weak_param``
  centered on the optimal decision boundary (where disagreement with the
  target concentrates), agrees elsewhere.
* ``adversarial``: always answers the negation of the strong label.
* ``flip``: answers the strong label negated independently with probability
  ``weak_param`` per query.

Randomness comes from counter-based streams keyed by (entropy seed, purpose
key): the same purpose key always yields the same draws for a given seed, no
matter what other draws happened in between.  Two runs that request the same
purposes in the same per-key order therefore share their samples exactly,
which makes paired algorithm comparisons noise-free.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    BudgetExhausted,
    InfeasibleGeometry,
    ShadowDisabled,
    UnlabeledBudgetExceeded,
)
from .hypotheses import (
    ConstantClassifier,
    HalfspaceClassifier,
    Interval,
    ThresholdClassifier,
    WedgePair,
    get_family,
)

__all__ = ["InstanceSpec", "QueryLedger", "World", "WEAK_MODES"]

WEAK_MODES = ("identical", "boundary", "adversarial", "flip")

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InstanceSpec:
    """Declarative description of a world, serializable to JSON.

    ``noise_rate`` is the strong labeler's flipped-region mass (equal to the
    best in-family error).  ``weak_param`` is the boundary-region mass for
    mode "boundary", the flip probability for mode "flip", and must be 0 for
    the other modes.  ``mixture_beta`` is the probability that the blended
    primary labeler silently routes a query to the weak labeler instead of
    the strong one; 0 disables blending.  ``seed`` may be left unset and
    supplied when the world is built.
    """

    family: str = "threshold-1d"
    noise_rate: float = 0.05
    weak_mode: str = "identical"
    weak_param: float = 0.0
    mixture_beta: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        get_family(self.family)  # raises on unknown names
        nu = self.noise_rate
        if not (0.0 <= nu):
            raise InfeasibleGeometry(f"noise_rate must be >= 0, got {nu!r}")
        nu_cap = 0.4 if self.family == "threshold-1d" else 0.25
        if nu >= nu_cap:
            raise InfeasibleGeometry(
                f"noise_rate {nu!r} too large for {self.family}: the flipped "
                f"regions would reach the decision boundary (cap {nu_cap})"
            )
        if self.weak_mode not in WEAK_MODES:
            raise ValueError(f"weak_mode must be one of {WEAK_MODES}, got {self.weak_mode!r}")
        g = self.weak_param
        if self.weak_mode in ("identical", "adversarial"):
            if g != 0.0:
                raise ValueError(f"weak_param must be 0 for mode {self.weak_mode!r}")
        elif self.weak_mode == "boundary":
            g_cap = (0.4 if self.family == "threshold-1d" else 0.5) - nu
            if not (0.0 < g < g_cap):
                raise InfeasibleGeometry(
                    f"boundary weak_param must lie in (0, {g_cap}) for "
                    f"noise_rate {nu} so the regions stay disjoint, got {g!r}"
                )
        else:  # flip
            if not (0.0 <= g <= 1.0):
                raise ValueError(f"flip weak_param must be in [0, 1], got {g!r}")
        if not (0.0 <= self.mixture_beta < 1.0):
            raise ValueError(f"mixture_beta must be in [0, 1), got {self.mixture_beta!r}")
        if self.seed is not None and (not isinstance(self.seed, int) or self.seed < 0):
            raise ValueError(f"seed must be a nonnegative integer or None, got {self.seed!r}")

    def with_seed(self, seed: int) -> "InstanceSpec":
        return replace(self, seed=seed)

    def to_json_dict(self) -> dict:
        out = {
            "family": self.family,
            "noise_rate": self.noise_rate,
            "weak_mode": self.weak_mode,
            "weak_param": self.weak_param,
            "mixture_beta": self.mixture_beta,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "InstanceSpec":
        known = {"family", "noise_rate", "weak_mode", "weak_param", "mixture_beta", "seed"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown instance keys: {sorted(extra)}")
        return cls(**data)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "InstanceSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass
class QueryLedger:
    """Running totals of every metered oracle interaction.

    Blended (mixture) queries are billed as strong-labeler queries, with the
    actual routing recorded separately, since the caller cannot see which
    channel answered.
    """

    strong_total: int = 0
    weak_total: int = 0
    unlabeled_total: int = 0
    mixture_to_strong: int = 0
    mixture_to_weak: int = 0
    strong_by_phase: dict = field(default_factory=dict)
    weak_by_phase: dict = field(default_factory=dict)

    def record_strong(self, epoch: int, phase: str, n: int) -> None:
        self.strong_total += n
        key = (epoch, phase)
        self.strong_by_phase[key] = self.strong_by_phase.get(key, 0) + n

    def record_weak(self, epoch: int, phase: str, n: int) -> None:
        self.weak_total += n
        key = (epoch, phase)
        self.weak_by_phase[key] = self.weak_by_phase.get(key, 0) + n

    def as_dict(self) -> dict:
        return {
            "strong_total": self.strong_total,
            "weak_total": self.weak_total,
            "unlabeled_total": self.unlabeled_total,
            "mixture_to_strong": self.mixture_to_strong,
            "mixture_to_weak": self.mixture_to_weak,
            "strong_by_phase": {
                f"{epoch}:{phase}": n for (epoch, phase), n in sorted(self.strong_by_phase.items())
            },
            "weak_by_phase": {
                f"{epoch}:{phase}": n for (epoch, phase), n in sorted(self.weak_by_phase.items())
            },
        }


class World:
    """A live instance: distribution, labelers, ledger, and exact analysis.

    ``benchmark_mode`` turns off the un-metered shadow channels so that a
    timing or cost measurement cannot accidentally lean on free labels.
    ``max_unlabeled`` caps metered unlabeled draws.
    """

    def __init__(
        self,
        spec: InstanceSpec,
        seed: int | None = None,
        benchmark_mode: bool = False,
        max_unlabeled: int | None = None,
    ):
        if seed is None:
            seed = spec.seed
        if seed is None:
            raise ValueError("a seed is required: set it on the spec or pass one here")
        self.spec = spec.with_seed(int(seed))
        self.family = get_family(spec.family)
        self.benchmark_mode = bool(benchmark_mode)
        self.max_unlabeled = max_unlabeled
        self.ledger = QueryLedger()
        self._seed = int(seed)
        self._key_counts: dict[tuple, int] = {}

        nu = self.spec.noise_rate
        if self.family.name == "threshold-1d":
            self._target = ThresholdClassifier(0.5, 1)
            # flipped slivers: (0.3 - nu/2, 0.3] answers +1, [0.7, 0.7 + nu/2) answers -1
            self._flip_lo = (0.3 - 0.5 * nu, 0.3)
            self._flip_hi = (0.7, 0.7 + 0.5 * nu)
            g = self.spec.weak_param if self.spec.weak_mode == "boundary" else 0.0
            self._weak_region = (0.5 - 0.5 * g, 0.5 + 0.5 * g)
        else:
            self._target = HalfspaceClassifier(0.0)
            # antipodal flipped wedges of half-width pi*nu/2 ending at pi/4
            half = 0.5 * math.pi * nu
            center = 0.25 * math.pi - half
            self._wedge_lo = center - half
            self._wedge_hi = center + half
            g = self.spec.weak_param if self.spec.weak_mode == "boundary" else 0.0
            # weak disagreement wedges straddle the boundary direction pi/2
            self._weak_wedge_lo = 0.5 * math.pi - 0.5 * math.pi * g
            self._weak_wedge_hi = 0.5 * math.pi + 0.5 * math.pi * g

    # -- randomness ---------------------------------------------------------

    @staticmethod
    def _key_part_to_int(part) -> int:
        # spawn keys must be unsigned ints; strings get a stable 64-bit digest
        if isinstance(part, (int, np.integer)) and not isinstance(part, bool):
            if part < 0:
                raise ValueError(f"stream key ints must be >= 0, got {part!r}")
            return int(part)
        digest = hashlib.blake2s(str(part).encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big")

    def _stream(self, *key) -> np.random.Generator:
        count = self._key_counts.get(key, 0)
        self._key_counts[key] = count + 1
        spawn = tuple(self._key_part_to_int(p) for p in key) + (count,)
        seq = np.random.SeedSequence(entropy=self._seed, spawn_key=spawn)
        return np.random.Generator(np.random.Philox(seq))

    # -- sampling -----------------------------------------------------------

    def _sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if self.family.name == "threshold-1d":
            return rng.random(count)
        radius = np.sqrt(rng.random(count))
        angle = rng.random(count) * _TWO_PI
        return np.stack((radius * np.cos(angle), radius * np.sin(angle)), axis=1)

    def draw_unlabeled(self, count: int, epoch: int, phase: str) -> np.ndarray:
        """Metered unlabeled draws for one (epoch, phase) context."""
        if count < 0:
            raise ValueError("count must be >= 0")
        if self.max_unlabeled is not None and self.ledger.unlabeled_total + count > self.max_unlabeled:
            raise UnlabeledBudgetExceeded(
                f"drawing {count} more unlabeled points would exceed the cap "
                f"of {self.max_unlabeled} (used {self.ledger.unlabeled_total})"
            )
        self.ledger.unlabeled_total += count
        return self._sample(self._stream("unlabeled", epoch, phase), count)

    def draw_unlabeled_where(
        self, count: int, epoch: int, phase: str, predicate, max_scan: int | None = None
    ) -> np.ndarray:
        """Rejection-sample ``count`` metered points satisfying ``predicate``.

        Only the kept points are billed to the unlabeled meter; rejected
        draws are discarded unseen.  ``max_scan`` caps the number of raw
        draws inspected before giving up with ``BudgetExhausted``.
        """
        if count < 0:
            raise ValueError("count must be >= 0")
        if self.max_unlabeled is not None and self.ledger.unlabeled_total + count > self.max_unlabeled:
            raise UnlabeledBudgetExceeded(
                f"keeping {count} more unlabeled points would exceed the cap "
                f"of {self.max_unlabeled} (used {self.ledger.unlabeled_total})"
            )
        kept: list[np.ndarray] = []
        have = 0
        scanned = 0
        while have < count:
            chunk = max(1024, 2 * (count - have))
            if max_scan is not None:
                chunk = min(chunk, max_scan - scanned)
                if chunk <= 0:
                    raise BudgetExhausted(
                        f"rejection sampling scanned {scanned} draws but kept "
                        f"only {have} of the {count} requested"
                    )
            batch = self._sample(self._stream("unlabeled", epoch, phase), chunk)
            mask = np.asarray(predicate(batch), dtype=bool)
            kept.append(batch[mask])
            have += int(np.count_nonzero(mask))
            scanned += chunk
        out = np.concatenate(kept, axis=0)[:count]
        self.ledger.unlabeled_total += count
        return out

    # -- labelers -----------------------------------------------------------

    def target(self):
        """The best classifier in the family (known by construction)."""
        return self._target

    def _in_flip_region(self, xs: np.ndarray) -> np.ndarray:
        if self.family.name == "threshold-1d":
            lo = (xs > self._flip_lo[0]) & (xs <= self._flip_lo[1])
            hi = (xs >= self._flip_hi[0]) & (xs < self._flip_hi[1])
            return lo | hi
        phi = np.arctan2(xs[:, 1], xs[:, 0])
        folded = phi % math.pi  # the wedges are antipodal
        return (folded >= self._wedge_lo) & (folded <= self._wedge_hi) & (self.spec.noise_rate > 0)

    def _in_weak_region(self, xs: np.ndarray) -> np.ndarray:
        if self.spec.weak_mode != "boundary":
            raise RuntimeError("weak region only exists in boundary mode")
        if self.family.name == "threshold-1d":
            return (xs >= self._weak_region[0]) & (xs < self._weak_region[1])
        phi = np.arctan2(xs[:, 1], xs[:, 0]) % math.pi
        return (phi >= self._weak_wedge_lo) & (phi <= self._weak_wedge_hi)

    def _strong_raw(self, xs: np.ndarray) -> np.ndarray:
        labels = self._target.predict(xs)
        flips = self._in_flip_region(xs)
        return np.where(flips, -labels, labels).astype(np.int8)

    def _weak_raw(self, xs: np.ndarray, rng: np.random.Generator | None) -> np.ndarray:
        strong = self._strong_raw(xs)
        mode = self.spec.weak_mode
        if mode == "identical":
            return strong
        if mode == "adversarial":
            return (-strong).astype(np.int8)
        if mode == "boundary":
            return np.where(self._in_weak_region(xs), -strong, strong).astype(np.int8)
        assert mode == "flip"
        if rng is None:
            raise RuntimeError("flip-mode weak labels need a random stream")
        coins = rng.random(len(strong)) < self.spec.weak_param
        return np.where(coins, -strong, strong).astype(np.int8)

    def strong_labels(self, xs, epoch: int, phase: str) -> np.ndarray:
        """Metered strong-labeler answers."""
        xs = self.family.as_points(xs)
        self.ledger.record_strong(epoch, phase, len(xs))
        return self._strong_raw(xs)

    def weak_labels(self, xs, epoch: int, phase: str) -> np.ndarray:
        """Metered weak-labeler answers."""
        xs = self.family.as_points(xs)
        self.ledger.record_weak(epoch, phase, len(xs))
        rng = self._stream("weak", epoch, phase) if self.spec.weak_mode == "flip" else None
        return self._weak_raw(xs, rng)

    def blended_labels(self, xs, epoch: int, phase: str) -> np.ndarray:
        """Metered answers from the blended primary labeler.

        Each query independently routes to the weak labeler with probability
        ``mixture_beta`` and to the strong labeler otherwise.  Billed as
        strong queries; the routing split is recorded on the side.
        """
        xs = self.family.as_points(xs)
        n = len(xs)
        self.ledger.record_strong(epoch, phase, n)
        beta = self.spec.mixture_beta
        if beta == 0.0:
            self.ledger.mixture_to_strong += n
            return self._strong_raw(xs)
        coins = self._stream("blend", epoch, phase).random(n) < beta
        n_weak = int(np.count_nonzero(coins))
        self.ledger.mixture_to_weak += n_weak
        self.ledger.mixture_to_strong += n - n_weak
        out = self._strong_raw(xs)
        if n_weak:
            rng = self._stream("blend-weak", epoch, phase) if self.spec.weak_mode == "flip" else None
            out = out.copy()
            out[coins] = self._weak_raw(xs[coins], rng)
        return out

    # -- shadow (un-metered) channels --------------------------------------

    def _require_shadow(self) -> None:
        if self.benchmark_mode:
            raise ShadowDisabled("shadow channels are disabled in benchmark mode")

    def shadow_draw(self, count: int, tag: str) -> np.ndarray:
        """Un-metered draws for measurement, from a dedicated stream."""
        self._require_shadow()
        return self._sample(self._stream("shadow", tag), count)

    def shadow_strong_labels(self, xs) -> np.ndarray:
        """Un-metered strong answers (deterministic, so replayable)."""
        self._require_shadow()
        return self._strong_raw(self.family.as_points(xs))

    def shadow_target_labels(self, xs) -> np.ndarray:
        self._require_shadow()
        return self._target.predict(self.family.as_points(xs))

    def shadow_weak_labels(self, xs, tag: str = "weak") -> np.ndarray:
        """Un-metered weak answers; flip-mode coins come from a shadow stream."""
        self._require_shadow()
        xs = self.family.as_points(xs)
        rng = self._stream("shadow-weak", tag) if self.spec.weak_mode == "flip" else None
        return self._weak_raw(xs, rng)

    # -- exact analysis -----------------------------------------------------

    def _piecewise_masses(self, classifiers) -> list[np.ndarray]:
        """Evaluate classifiers on a partition refining every breakpoint.

        Returns, per classifier, (masses, labels at cell midpoints); the
        strong labeler is piecewise constant on the same partition, making
        region masses exact up to float rounding.
        """
        if self.family.name == "threshold-1d":
            breaks = {0.0, 1.0, 0.5, *self._flip_lo, *self._flip_hi, *self._weak_region}
            for h in classifiers:
                if isinstance(h, ThresholdClassifier):
                    breaks.add(min(1.0, max(0.0, h.threshold)))
                elif isinstance(h, Interval):
                    breaks.update(min(1.0, max(0.0, v)) for v in (h.lo, h.hi))
                elif not isinstance(h, ConstantClassifier):
                    raise TypeError(f"unsupported classifier {type(h).__name__}")
            edges = np.array(sorted(breaks))
            mids = 0.5 * (edges[:-1] + edges[1:])
            masses = np.diff(edges)
            points = mids
        else:
            breaks = {0.0}
            for base in (
                0.5 * math.pi,  # target boundary directions
                self._wedge_lo,
                self._wedge_hi,
                self._weak_wedge_lo,
                self._weak_wedge_hi,
            ):
                breaks.add(base % math.pi)
            for h in classifiers:
                if isinstance(h, HalfspaceClassifier):
                    breaks.add((h.angle + 0.5 * math.pi) % math.pi)
                elif isinstance(h, WedgePair):
                    breaks.add((h.angle_a + 0.5 * math.pi) % math.pi)
                    breaks.add((h.angle_b + 0.5 * math.pi) % math.pi)
                elif not isinstance(h, ConstantClassifier):
                    raise TypeError(f"unsupported classifier {type(h).__name__}")
            edges = np.array(sorted(breaks) + [math.pi])
            mids = 0.5 * (edges[:-1] + edges[1:])
            masses = np.diff(edges) / math.pi * 0.5  # each direction cell, one side
            # evaluate on both antipodal representatives of each direction
            points = np.stack((np.cos(mids), np.sin(mids)), axis=1)
            points = np.concatenate((points, -points), axis=0)
            masses = np.concatenate((masses, masses))
        return points, masses

    def _exact_mass_where(self, classifiers, differ_fn) -> float:
        points, masses = self._piecewise_masses(classifiers)
        return float(np.sum(masses[differ_fn(points)]))

    def true_error(self, h) -> float:
        """P(h(x) != strong label), exact for the supported classifier types."""
        return self._exact_mass_where([h], lambda pts: h.predict(pts) != self._strong_raw(pts))

    def true_weak_error(self, h) -> float:
        """P(h(x) != weak label); in flip mode, the expectation over coins."""
        if self.spec.weak_mode == "flip":
            p = self.spec.weak_param
            err = self.true_error(h)
            return (1.0 - p) * err + p * (1.0 - err)
        return self._exact_mass_where([h], lambda pts: h.predict(pts) != self._weak_raw(pts, None))

    def true_blended_error(self, h) -> float:
        """Error against the blended labeler's law."""
        beta = self.spec.mixture_beta
        return (1.0 - beta) * self.true_error(h) + beta * self.true_weak_error(h)

    def true_excess_error(self, h) -> float:
        return self.true_error(h) - self.spec.noise_rate

    def true_disagreement(self, h, g) -> float:
        """P(h(x) != g(x)), exact."""
        return self._exact_mass_where(
            [h, g], lambda pts: h.predict(pts) != g.predict(pts)
        )

    def weak_strong_disagreement_mass(self) -> float:
        """Mass where the weak answer differs from the strong one (expected
        mass, for flip mode)."""
        mode = self.spec.weak_mode
        if mode == "identical":
            return 0.0
        if mode == "adversarial":
            return 1.0
        if mode == "flip":
            return self.spec.weak_param
        return self.spec.weak_param  # boundary region has exactly this mass

    def disagreement_ball_mass(self, radius: float) -> float:
        """Mass of the region where some classifier within distance
        ``radius`` of the family optimum disagrees with it: min(2 r, 1)."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        return min(2.0 * radius, 1.0)

    def distance_to_target(self, h) -> float:
        return self.true_disagreement(h, self._target)

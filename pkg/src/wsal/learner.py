"""Scikit-learn style facade over the query-driven engine.

The engine consumes an oracle-bearing :class:`~wsal.world.World` rather
than a fixed ``(X, y)`` pair, so ``fit`` takes a world in the ``X`` slot;
everything else follows estimator convention: constructor arguments are
plain hyperparameters, fitted state lands in trailing-underscore
attributes, and ``get_params`` / ``set_params`` work for cloning and
grid-search plumbing.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .engine import AlgoConfig, run_main
from .world import World

__all__ = ["WeakStrongActiveLearner"]


class WeakStrongActiveLearner(BaseEstimator):
    """Epoch-based active learner that offloads queries to a weak labeler.

    Parameters
    ----------
    epsilon : float, default=0.0625
        Target excess error of the returned classifier.
    delta : float, default=0.1
        Allowed failure probability for the accuracy guarantee.
    scale : float, default=1.0
        Multiplier on the design constants in every sample-size
        prescription and threshold; 1.0 is the analyzed regime, small
        values give desk-sized runs with the same shape.
    use_weak : bool, default=True
        When False, run the all-strong baseline with identical epochs.
    oracle_mode : {"strong", "blended"}, default="strong"
        Which of the world's primary channels answers labeled queries.
    fn_budget_style : {"standard", "tight"}, default="standard"
        Accuracy share given to the difference classifier's
        false-negative budget.

    Attributes
    ----------
    classifier_ : fitted classifier with a ``predict`` method
    result_ : :class:`~wsal.engine.RunResult` with the full run record
    ledger_ : dict of query totals billed to the world
    epochs_ : list of per-epoch records
    n_features_in_ : int, 1 or 2 depending on the world's family

    Examples
    --------
    >>> from wsal.world import InstanceSpec, World
    >>> from wsal.learner import WeakStrongActiveLearner
    >>> world = World(InstanceSpec(noise_rate=0.05, seed=1))
    >>> learner = WeakStrongActiveLearner(epsilon=0.25, scale=0.01)
    >>> labels = learner.fit(world).predict([[0.1], [0.9]])
    """

    def __init__(
        self,
        epsilon: float = 0.0625,
        delta: float = 0.1,
        scale: float = 1.0,
        use_weak: bool = True,
        oracle_mode: str = "strong",
        fn_budget_style: str = "standard",
    ):
        self.epsilon = epsilon
        self.delta = delta
        self.scale = scale
        self.use_weak = use_weak
        self.oracle_mode = oracle_mode
        self.fn_budget_style = fn_budget_style

    def _config(self) -> AlgoConfig:
        return AlgoConfig(
            target_epsilon=self.epsilon,
            delta=self.delta,
            scale=self.scale,
            use_weak=self.use_weak,
            oracle_mode=self.oracle_mode,
            fn_budget_style=self.fn_budget_style,
        )

    def fit(self, world: World, y=None):
        """Run the epoch schedule against ``world`` and keep the outcome.

        ``y`` is accepted for signature compatibility and ignored; labels
        come from the world's oracles.
        """
        if not isinstance(world, World):
            raise TypeError(f"fit expects a World, got {type(world).__name__}")
        result = run_main(world, self._config())
        self.result_ = result
        self.classifier_ = result.final_classifier
        self.ledger_ = result.ledger_dict
        self.epochs_ = result.epochs
        self.family_name_ = world.family.name
        self.n_features_in_ = world.family.dim
        return self

    def _coerce(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.n_features_in_ == 1:
            if X.ndim == 2 and X.shape[1] == 1:
                X = X[:, 0]
            if X.ndim != 1:
                raise ValueError(f"expected shape (n,) or (n, 1), got {X.shape}")
        else:
            if X.ndim != 2 or X.shape[1] != 2:
                raise ValueError(f"expected shape (n, 2), got {X.shape}")
        if X.size and not np.all(np.isfinite(X)):
            raise ValueError("input points must be finite")
        return X

    def predict(self, X) -> np.ndarray:
        """Label points with the fitted classifier; returns +1/-1 values."""
        check_is_fitted(self, "classifier_")
        return self.classifier_.predict(self._coerce(X))

    def score(self, X, y) -> float:
        """Accuracy of ``predict`` against given +1/-1 labels."""
        y = np.asarray(y)
        preds = self.predict(X)
        if y.shape != preds.shape:
            raise ValueError(f"labels shape {y.shape} does not match points {preds.shape}")
        if len(y) == 0:
            raise ValueError("cannot score an empty set")
        return float(np.mean(preds == y))

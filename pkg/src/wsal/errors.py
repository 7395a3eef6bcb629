"""Exception types shared across the package."""

__all__ = [
    "Infeasible",
    "InfeasibleGeometry",
    "BudgetExhausted",
    "DoublingCapExceeded",
    "UnlabeledBudgetExceeded",
    "ShadowDisabled",
]


class Infeasible(ValueError):
    """No classifier in the family satisfies the requested constraints."""


class InfeasibleGeometry(ValueError):
    """Instance parameters cannot be realized by the synthetic construction."""


class BudgetExhausted(RuntimeError):
    """An estimation loop hit its draw cap before meeting its stopping rule."""


class DoublingCapExceeded(RuntimeError):
    """The doubling sample loop hit its round cap before its stopping rule."""


class UnlabeledBudgetExceeded(RuntimeError):
    """The world's unlabeled-draw cap was exceeded."""


class ShadowDisabled(RuntimeError):
    """Shadow labeling was requested on a world running in benchmark mode."""

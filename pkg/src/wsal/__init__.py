"""Active learning from a weak and a strong labeler: simulation and measurement.

The package simulates an epoch-based disagreement-driven active learner that
routes queries between a cheap weak labeler and an expensive strong one via a
learned difference classifier, on synthetic worlds with known ground truth.
"""

from .errors import (
    BudgetExhausted,
    DoublingCapExceeded,
    Infeasible,
    InfeasibleGeometry,
    ShadowDisabled,
    UnlabeledBudgetExceeded,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "DoublingCapExceeded",
    "Infeasible",
    "InfeasibleGeometry",
    "ShadowDisabled",
    "UnlabeledBudgetExceeded",
    "__version__",
]

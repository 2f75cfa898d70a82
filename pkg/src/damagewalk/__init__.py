"""Crossing functionals of a marked Poisson damage process observed at random epochs."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    NotReachedError,
    NumericalInstabilityError,
    SingularityError,
    TruncationError,
)
from .process_model import ProcessParams, Thresholds, TransformArgs  # noqa: E402
from .operator.functionals import PsiExpression, invert_all, invert_functional  # noqa: E402
from .simulator import estimate_phi, simulate_crossings  # noqa: E402
from .model1 import Model1Params  # noqa: E402
from .model2 import Model2Params  # noqa: E402

__all__ = [
    "DomainError", "NotReachedError", "NumericalInstabilityError", "SingularityError",
    "TruncationError", "ProcessParams", "Thresholds", "TransformArgs", "PsiExpression",
    "invert_all", "invert_functional", "estimate_phi", "simulate_crossings",
    "Model1Params", "Model2Params",
]

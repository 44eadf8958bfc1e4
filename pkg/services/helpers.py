import math

import numpy as np

from core.exceptions import InadmissibleKillingNumberException
from models.common import ModelSpace, SpinLabel
from models.report import IdentityCheck

MU_MATCH_TOLERANCE = 1e-12
UNREACHABLE = 1e300

ADMISSIBLE_MU = {
    ModelSpace.S3: (0.5, -0.5),
    ModelSpace.H3: (0.5j, -0.5j),
    ModelSpace.R3: (0.0, ),
}


def validate_killing_number(space: ModelSpace, mu: complex) -> complex:
    """
    Check that ``mu`` is one of the Killing numbers carried by ``space``.

    Raises:
        InadmissibleKillingNumberException: If the pair is not admissible.
    """
    for allowed in ADMISSIBLE_MU[space]:
        if abs(complex(mu) - allowed) < MU_MATCH_TOLERANCE:
            return complex(allowed)
    raise InadmissibleKillingNumberException(
        f"mu={mu} is not admissible on {space.value}; "
        f"expected one of {ADMISSIBLE_MU[space]}")


def finite(value: float) -> float:
    """Map nan/inf residuals to a large finite number so reports stay JSON-safe."""
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return UNREACHABLE
    return value


def make_check(name: str,
               residual: float,
               tolerance: float,
               provenance: str,
               label: SpinLabel | int | None = None,
               k: int | None = None,
               l: int | None = None) -> IdentityCheck:
    two_s = label.two_s if isinstance(label, SpinLabel) else label
    return IdentityCheck(name=name,
                         twoS=two_s,
                         k=k,
                         l=l,
                         residual=finite(residual),
                         tolerance=tolerance,
                         provenance=provenance)


def shortfall(value: float, floor: float) -> float:
    """
    Residual for checks that expect a quantity to stay ABOVE ``floor``:
    zero when it does, the relative shortfall otherwise.
    """
    value = float(abs(value))
    if value >= floor:
        return 0.0
    return (floor - value) / floor


def relative(diff: np.ndarray, reference: np.ndarray) -> float:
    return float(np.linalg.norm(diff) / (1.0 + np.linalg.norm(reference)))

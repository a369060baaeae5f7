"""Model parameters for the two de-preferential attachment rules."""
from dataclasses import dataclass

LINEAR = "linear"
INVERSE = "inverse"


class ParameterError(ValueError):
    """Raised when model parameters are outside their valid ranges."""


@dataclass(frozen=True)
class ModelParams:
    """Which attachment rule to use, plus its parameters.

    kind : "linear" or "inverse".
        linear  -- a new half edge picks vertex i with weight
                   theta - alpha * d_i / (k + (2n-1)m), normalizer n*theta - alpha.
        inverse -- weight (delta + d_i)**(-alpha), normalizer
                   D = sum_j (delta + d_j)**(-alpha).
    m : half edges attached by each arriving vertex (m >= 1).
    theta : shift of the linear rule, theta >= 1 (ignored by "inverse").
    alpha : decay exponent, alpha > 0.  The linear rule needs alpha <= theta
        so every weight stays >= theta - alpha >= 0; the inverse rule needs
        alpha <= 1.
    delta : degree shift of the inverse rule, delta > -1 (ignored by "linear").
    """

    kind: str
    m: int = 1
    theta: float = 1.0
    alpha: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if self.kind not in (LINEAR, INVERSE):
            raise ParameterError(f"unknown model kind {self.kind!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ParameterError(f"m must be a positive integer, got {self.m!r}")
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}")
        if self.kind == LINEAR:
            if not self.theta >= 1:
                raise ParameterError(f"linear model needs theta >= 1, got {self.theta}")
            if self.alpha > self.theta:
                raise ParameterError(
                    f"linear model needs alpha <= theta (weights would go negative), "
                    f"got alpha={self.alpha}, theta={self.theta}"
                )
        else:
            if not self.delta > -1:
                raise ParameterError(f"inverse model needs delta > -1, got {self.delta}")
            if self.alpha > 1:
                raise ParameterError(f"inverse model needs alpha <= 1, got {self.alpha}")

    @property
    def is_linear(self):
        return self.kind == LINEAR


def linear(theta=1.0, alpha=1.0, m=1):
    """Linear de-preferential rule with shift theta."""
    return ModelParams(kind=LINEAR, m=m, theta=theta, alpha=alpha)


def inverse(alpha=1.0, delta=0.0, m=1):
    """Inverse-power de-preferential rule with exponent alpha and shift delta."""
    return ModelParams(kind=INVERSE, m=m, alpha=alpha, delta=delta)

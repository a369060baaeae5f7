import pytest

from depref.params import INVERSE, LINEAR, ModelParams, ParameterError, inverse, linear


def test_valid_linear():
    p = linear(theta=2.0, alpha=0.5, m=3)
    assert p.kind == LINEAR and p.is_linear
    assert (p.theta, p.alpha, p.m) == (2.0, 0.5, 3)


def test_valid_inverse():
    p = inverse(alpha=0.5, delta=1.0, m=2)
    assert p.kind == INVERSE and not p.is_linear
    assert (p.alpha, p.delta, p.m) == (0.5, 1.0, 2)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="nope"),
        dict(kind=LINEAR, m=0),
        dict(kind=LINEAR, m=-1),
        dict(kind=LINEAR, alpha=0.0),
        dict(kind=LINEAR, alpha=-1.0),
        dict(kind=LINEAR, theta=0.5),
        dict(kind=LINEAR, theta=1.0, alpha=1.5),  # alpha > theta
        dict(kind=INVERSE, delta=-1.0),
        dict(kind=INVERSE, delta=-2.0),
        dict(kind=INVERSE, alpha=1.5),
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(ParameterError):
        ModelParams(**kwargs)


def test_linear_alpha_up_to_theta_allowed():
    # alpha may exceed 1 for the linear rule as long as it stays <= theta
    p = ModelParams(kind=LINEAR, theta=3.0, alpha=2.0)
    assert p.alpha == 2.0


def test_non_integer_m_rejected():
    with pytest.raises(ParameterError):
        ModelParams(kind=LINEAR, m=1.5)

"""Two-channel elephant random walk: closed forms, Monte Carlo and the mean-field ODE."""

from ._memwalk import (  # noqa: F401
    P1,
    P2,
    P3,
    RegimeError,
    alpha_beta,
    drift,
    exponent_y,
    fixed_points,
    jacobian,
    newton_fixed_points,
    ode_integrate,
    regime,
    sigma1,
    sigma2,
    simulate,
    speed_c,
    step_distribution,
    variance_exponent,
)

__version__ = "1.0.0"

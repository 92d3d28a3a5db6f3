"""Certified zero counting for random trigonometric polynomials."""

from ._rtpz import (
    UNIVERSAL_ZERO_DENSITY,
    CoefficientLaw,
    TrigPolynomial,
    __version__,
    count_zeros,
    edgeworth_cdf,
    expected_zeros,
    gaussian_kac_functional,
    gaussian_small_ball,
    run_experiment,
    run_suite,
    sample_polynomial,
    small_ball,
    spectral_sigma,
)

__all__ = [
    "UNIVERSAL_ZERO_DENSITY",
    "CoefficientLaw",
    "TrigPolynomial",
    "__version__",
    "count_zeros",
    "edgeworth_cdf",
    "expected_zeros",
    "gaussian_kac_functional",
    "gaussian_small_ball",
    "run_experiment",
    "run_suite",
    "sample_polynomial",
    "small_ball",
    "spectral_sigma",
]

"""
Incomplete gamma function

The scalar reference follows the classic split: power series for x < a + 1,
modified-Lentz continued fraction for the upper tail otherwise. Shapes here are
non-integer reals (N_E·m̂_E), so no integer-shape shortcut is taken. The array
path used by the sweeps delegates to scipy.special.gammainc; tests keep the two
in agreement.
"""

import math

import numpy as np
from scipy import special

from src.utils import config
from src.utils.errors import DomainError, WiretapError

_FPMIN = 1e-300


def _check_shape(a) -> None:
    if np.any(~np.isfinite(np.asarray(a, dtype=float))) or np.any(np.asarray(a) <= 0.0):
        raise DomainError(f"gamma shape must be positive, got {a}")


def gamma_function(z: float) -> float:
    if not (math.isfinite(z) and z > 0.0):
        raise DomainError(f"Gamma(z) is only evaluated for z > 0, got {z}")
    return float(special.gamma(z))


def _series(a: float, x: float) -> float:
    log_prefactor = -x + a * math.log(x) - special.gammaln(a)
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(config.GAMMA_MAX_ITERATIONS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * config.GAMMA_TERM_TOL:
            return total * math.exp(log_prefactor)
    raise WiretapError("incomplete gamma series did not converge",
                       context={"a": a, "x": x, "iterations": config.GAMMA_MAX_ITERATIONS})


def _continued_fraction(a: float, x: float) -> float:
    """Upper regularized Q(a, x)."""
    log_prefactor = -x + a * math.log(x) - special.gammaln(a)
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, config.GAMMA_MAX_ITERATIONS + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < config.GAMMA_TERM_TOL:
            return math.exp(log_prefactor) * h
    raise WiretapError("incomplete gamma continued fraction did not converge",
                       context={"a": a, "x": x, "iterations": config.GAMMA_MAX_ITERATIONS})


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x) = γ(a, x)/Γ(a), in [0, 1]."""
    _check_shape(a)
    if not x >= 0.0:
        raise DomainError(f"incomplete gamma argument must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        value = _series(a, x)
    else:
        value = 1.0 - _continued_fraction(a, x)
    return min(1.0, max(0.0, value))


def lower_incomplete_gamma(a: float, x: float) -> float:
    """Unregularized γ(a, x) = ∫₀ˣ e⁻ᵗ tᵃ⁻¹ dt."""
    return regularized_lower_gamma(a, x) * gamma_function(a)


def regularized_lower_gamma_array(a, x) -> np.ndarray:
    """Vectorized P(a, x) with the same domain rules as the scalar path."""
    _check_shape(a)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(np.isnan(x)):
        raise DomainError("incomplete gamma arguments must be >= 0")
    return np.clip(special.gammainc(a, x), 0.0, 1.0)

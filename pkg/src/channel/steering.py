"""
ULA steering vectors at Alice and array responses at Eve, and the rank-1 LOS
matrix of the eavesdropper channel.
"""

import numpy as np

from src.utils.errors import DomainError

# A steering vector is a 1-D complex array with unit-modulus entries, first entry 1.
SteeringVector = np.ndarray


def _ula_phases(angle: float, n: int, spacing: float) -> np.ndarray:
    if int(n) != n or n < 1:
        raise DomainError(f"antenna count must be a positive integer, got {n}")
    if spacing <= 0.0:
        raise DomainError(f"antenna spacing must be positive, got {spacing}")
    return 2.0 * np.pi * np.arange(int(n)) * spacing * np.cos(angle)


def alice_steering(angle: float, n: int, spacing: float) -> SteeringVector:
    """Entry k = exp(+j·2π·k·spacing·cos(angle)); used for h_o (θ_B) and g_o (θ_E)."""
    return np.exp(1j * _ula_phases(angle, n, spacing))


def eve_array_response(aoa: float, n: int, spacing: float) -> SteeringVector:
    """Entry k = exp(−j·2π·k·spacing·cos(aoa)); the receive response r_o at Eve."""
    return np.exp(-1j * _ula_phases(aoa, n, spacing))


def alice_steering_batch(angles: np.ndarray, n: int, spacing: float) -> np.ndarray:
    """One steering vector per row for an array of angles, shape (len(angles), n)."""
    if int(n) != n or n < 1:
        raise DomainError(f"antenna count must be a positive integer, got {n}")
    k = np.arange(int(n))
    return np.exp(1j * 2.0 * np.pi * spacing * np.outer(np.cos(np.asarray(angles, dtype=float)), k))


def los_eve_matrix(r_o: SteeringVector, g_o: SteeringVector) -> np.ndarray:
    """G_o = r_oᵀ g_o, entry (i, k) = r_o[i]·g_o[k]."""
    return np.outer(np.asarray(r_o), np.asarray(g_o))

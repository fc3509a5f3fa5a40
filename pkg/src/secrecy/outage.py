"""
📡 Wiretap LBB - Secrecy Outage
===============================

Closed-form secrecy quantities for a unit-norm beamformer w:

* effective Eve statistics  K̂_E = |g_o·w|²·K_E,
  m̂_E = (K̂_E+1)²/(2K̂_E+1),  γ̂̄_E = (K_E|g_o·w|²+1)·γ̄_E/(1+K_E)
* γ_E ~ Gamma(shape N_E·m̂_E, rate m̂_E/γ̂̄_E)
* P_out(R_S | γ_B) = 1 − F_{γ_E}(2^(−R_S)(1+γ_B) − 1)

When the threshold is ≤ 0 the main channel alone is below R_S and the outage
is certain; the incomplete gamma is never evaluated at a negative argument.
The array functions accept broadcastable numpy inputs and back the sweeps.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import stats as sps

from src.beamforming.family import los_leakage
from src.channel.steering import SteeringVector
from src.secrecy.special import regularized_lower_gamma, regularized_lower_gamma_array
from src.utils.errors import DomainError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class EffectiveEveStats:
    k_hat: ArrayLike
    m_hat: ArrayLike
    mean_snr_hat: ArrayLike
    n_eve: int

    @property
    def shape(self) -> ArrayLike:
        return self.n_eve * self.m_hat

    @property
    def rate(self) -> ArrayLike:
        return self.m_hat / self.mean_snr_hat


@dataclass(frozen=True)
class OutageQuery:
    gamma_bob: float
    secrecy_rate: float

    def __post_init__(self):
        if self.gamma_bob < 0.0 or self.secrecy_rate < 0.0:
            raise DomainError("outage query fields must be non-negative",
                              context={"gamma_bob": self.gamma_bob, "secrecy_rate": self.secrecy_rate})


def nakagami_shape(k_hat: ArrayLike) -> ArrayLike:
    return (k_hat + 1.0) ** 2 / (2.0 * k_hat + 1.0)


def stats_from_leakage(leakage: ArrayLike, k_eve: float, mean_snr_eve: ArrayLike, n_eve: int) -> EffectiveEveStats:
    """Effective statistics from the LOS leakage |g_o·w|²; broadcasts over arrays."""
    k_hat = leakage * k_eve
    return EffectiveEveStats(
        k_hat=k_hat,
        m_hat=nakagami_shape(k_hat),
        mean_snr_hat=(k_eve * leakage + 1.0) * mean_snr_eve / (1.0 + k_eve),
        n_eve=n_eve,
    )


def effective_eve_stats(g_o: SteeringVector, w: np.ndarray, k_eve: float, mean_snr_eve: float,
                        n_eve: int) -> EffectiveEveStats:
    leakage = float(los_leakage(g_o, w))
    return stats_from_leakage(leakage, k_eve, mean_snr_eve, n_eve)


def eve_snr_cdf(gamma: float, stats: EffectiveEveStats) -> float:
    if gamma < 0.0:
        raise DomainError(f"SNR must be >= 0, got {gamma}")
    return regularized_lower_gamma(stats.shape, stats.m_hat * gamma / stats.mean_snr_hat)


def eve_snr_pdf(gamma: ArrayLike, stats: EffectiveEveStats) -> ArrayLike:
    if np.any(np.asarray(gamma) < 0.0):
        raise DomainError(f"SNR must be >= 0, got {gamma}")
    return sps.gamma.pdf(gamma, a=stats.shape, scale=stats.mean_snr_hat / stats.m_hat)


def secrecy_rate(gamma_bob: float, gamma_eve: float) -> float:
    """C_S = max(0, log2(1+γ_B) − log2(1+γ_E)), bits/s/Hz."""
    if gamma_bob < 0.0 or gamma_eve < 0.0:
        raise DomainError("SNRs must be non-negative")
    return max(0.0, math.log2(1.0 + gamma_bob) - math.log2(1.0 + gamma_eve))


def outage_threshold(gamma_bob: ArrayLike, secrecy_rate_bps: float) -> ArrayLike:
    """Eve SNR above which C_S < R_S: 2^(−R_S)(1+γ_B) − 1."""
    return 2.0 ** (-secrecy_rate_bps) * (1.0 + gamma_bob) - 1.0


def outage_probability(query: OutageQuery, stats: EffectiveEveStats) -> float:
    threshold = outage_threshold(query.gamma_bob, query.secrecy_rate)
    if threshold <= 0.0:
        return 1.0
    return min(1.0, max(0.0, 1.0 - eve_snr_cdf(threshold, stats)))


def outage_probability_array(gamma_bob: ArrayLike, secrecy_rate_bps: float,
                             stats: EffectiveEveStats) -> np.ndarray:
    """Vectorized outage_probability; gamma_bob and the stats fields broadcast together."""
    threshold = outage_threshold(np.asarray(gamma_bob, dtype=float), secrecy_rate_bps)
    positive = threshold > 0.0
    argument = stats.m_hat * np.where(positive, threshold, 0.0) / stats.mean_snr_hat
    cdf = regularized_lower_gamma_array(stats.shape, argument)
    return np.clip(np.where(positive, 1.0 - cdf, 1.0), 0.0, 1.0)

"""
Vectorized secrecy-outage evaluation over the beamformer family.

For a main-channel draw with family (w_ZF, w_ZF⊥, a, b):

    h·w(τ)   = √τ·a + √(1−τ)·b
    g·w(τ)   = √τ·(g·w_ZF) + √(1−τ)·(g·w_ZF⊥)

for any LOS direction g. Evaluating against the g_o the family was built from
gives the location-based design; evaluating against another g (the true Eve
direction) gives the mismatched diagnostic.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.beamforming.family import BeamformerFamily, FamilyBatch
from src.channel.steering import SteeringVector
from src.model.scenario import Scenario
from src.secrecy.outage import outage_probability_array, stats_from_leakage


@dataclass(frozen=True)
class FamilyOutageModel:
    a: np.ndarray  # (R,)
    b: np.ndarray  # (R,)
    zf_dot: np.ndarray  # (R,) g·w_ZF
    perp_dot: np.ndarray  # (R,) g·w_ZF⊥
    mean_snr_bob: float
    mean_snr_eve: Union[float, np.ndarray]  # scalar or (R,)
    k_eve: float
    n_eve: int
    secrecy_rate: float

    @classmethod
    def from_batch(cls, batch: FamilyBatch, g_eval: SteeringVector, scenario: Scenario,
                   mean_snr_eve: Optional[Union[float, np.ndarray]] = None) -> "FamilyOutageModel":
        """Model for the valid rows of ``batch``."""
        valid = batch.valid
        snr_eve = scenario.mean_snr_eve if mean_snr_eve is None else mean_snr_eve
        if np.ndim(snr_eve):
            snr_eve = np.asarray(snr_eve)[valid]
        return cls(
            a=batch.a[valid],
            b=batch.b[valid],
            zf_dot=batch.w_zf[valid] @ g_eval,
            perp_dot=batch.w_zf_perp[valid] @ g_eval,
            mean_snr_bob=scenario.mean_snr_bob,
            mean_snr_eve=snr_eve,
            k_eve=scenario.k_eve,
            n_eve=scenario.n_eve,
            secrecy_rate=scenario.secrecy_rate,
        )

    @classmethod
    def from_family(cls, family: BeamformerFamily, g_eval: SteeringVector,
                    scenario: Scenario) -> "FamilyOutageModel":
        return cls(
            a=np.array([family.a]),
            b=np.array([family.b]),
            zf_dot=np.array([family.w_zf @ g_eval]),
            perp_dot=np.array([family.w_zf_perp @ g_eval]),
            mean_snr_bob=scenario.mean_snr_bob,
            mean_snr_eve=scenario.mean_snr_eve,
            k_eve=scenario.k_eve,
            n_eve=scenario.n_eve,
            secrecy_rate=scenario.secrecy_rate,
        )

    @property
    def rows(self) -> int:
        return int(self.a.size)

    def _outage(self, sqrt_tau, sqrt_rest, a, b, zf_dot, perp_dot, mean_snr_eve) -> np.ndarray:
        gamma_bob = self.mean_snr_bob * (sqrt_tau * a + sqrt_rest * b) ** 2
        leakage = np.abs(sqrt_tau * zf_dot + sqrt_rest * perp_dot) ** 2
        stats = stats_from_leakage(leakage, self.k_eve, mean_snr_eve, self.n_eve)
        return outage_probability_array(gamma_bob, self.secrecy_rate, stats)

    def grid(self, taus: np.ndarray) -> np.ndarray:
        """Outage for every row at every τ, shape (R, T)."""
        taus = np.asarray(taus, dtype=float)
        snr_eve = self.mean_snr_eve[:, None] if np.ndim(self.mean_snr_eve) else self.mean_snr_eve
        return self._outage(np.sqrt(taus)[None, :], np.sqrt(1.0 - taus)[None, :],
                            self.a[:, None], self.b[:, None],
                            self.zf_dot[:, None], self.perp_dot[:, None], snr_eve)

    def pointwise(self, taus: np.ndarray) -> np.ndarray:
        """Outage for row r at taus[r], shape (R,)."""
        taus = np.asarray(taus, dtype=float)
        return self._outage(np.sqrt(taus), np.sqrt(1.0 - taus), self.a, self.b,
                            self.zf_dot, self.perp_dot, self.mean_snr_eve)

    def subset(self, rows: slice) -> "FamilyOutageModel":
        return FamilyOutageModel(
            a=self.a[rows], b=self.b[rows], zf_dot=self.zf_dot[rows], perp_dot=self.perp_dot[rows],
            mean_snr_bob=self.mean_snr_bob,
            mean_snr_eve=self.mean_snr_eve[rows] if np.ndim(self.mean_snr_eve) else self.mean_snr_eve,
            k_eve=self.k_eve, n_eve=self.n_eve, secrecy_rate=self.secrecy_rate,
        )

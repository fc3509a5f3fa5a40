"""
📡 Wiretap LBB - Scenario Model
===============================

Scenario definition, unit conversions and link-budget arithmetic shared by
every other package.

A scenario fixes the mean SNRs either directly or through a link budget
and positions. In the second mode the mean SNRs and
the Bob/Eve angles are derived from the geometry when the scenario is built, so
downstream code only ever reads linear ratios and radians.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from src.model.geometry import CartesianPosition, cartesian_to_polar, normalize_angle
from src.utils import config
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

Receiver = Literal["bob", "eve"]


def db_to_linear(value_db):
    """10^(value_db/10); accepts scalars or numpy arrays."""
    values = np.asarray(value_db, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError(f"dB value must be finite, got {value_db}")
    linear = np.power(10.0, values / 10.0)
    return float(linear) if values.ndim == 0 else linear


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        raise DomainError(f"linear ratio must be positive to convert to dB, got {value}")
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class LinkBudget:
    transmit_power: float  # P_A, watts
    path_loss_exponent: float  # η
    noise_variance_bob: float  # σ_B², watts
    noise_variance_eve: float  # σ_E², watts

    def __post_init__(self):
        for name in ("transmit_power", "path_loss_exponent", "noise_variance_bob", "noise_variance_eve"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be strictly positive, got {value}")

    @classmethod
    def calibrated(cls, path_loss_exponent: float, bob_distance: float, eve_distance: float,
                   mean_snr_bob: float, mean_snr_eve: float, transmit_power: float = 1.0) -> "LinkBudget":
        """Choose the noise variances so the given distances produce the given mean SNRs."""
        if bob_distance <= 0.0 or eve_distance <= 0.0:
            raise DomainError("calibration distances must be positive",
                              context={"bob_distance": bob_distance, "eve_distance": eve_distance})
        return cls(
            transmit_power=transmit_power,
            path_loss_exponent=path_loss_exponent,
            noise_variance_bob=transmit_power * bob_distance ** (-path_loss_exponent) / mean_snr_bob,
            noise_variance_eve=transmit_power * eve_distance ** (-path_loss_exponent) / mean_snr_eve,
        )


def mean_snr_from_geometry(budget: LinkBudget, distance, receiver: Receiver):
    """P_A · d^(−η) / σ² for the selected receiver; vectorizes over ``distance``."""
    if np.any(np.asarray(distance) <= 0.0):
        raise DomainError(f"distance must be positive, got {distance}")
    if receiver == "bob":
        noise = budget.noise_variance_bob
    elif receiver == "eve":
        noise = budget.noise_variance_eve
    else:
        raise DomainError(f"receiver must be 'bob' or 'eve', got {receiver!r}")
    return budget.transmit_power * np.power(distance, -budget.path_loss_exponent) / noise


@dataclass(frozen=True)
class Geometry:
    """Positions and link budget for the link-budget parameterization."""
    alice: CartesianPosition
    bob: CartesianPosition
    eve: CartesianPosition
    budget: LinkBudget

    @property
    def bob_distance(self) -> float:
        return self.bob.distance_to(self.alice)

    @property
    def eve_distance(self) -> float:
        return self.eve.distance_to(self.alice)


@dataclass(frozen=True)
class Scenario:
    n_alice: int
    n_eve: int
    k_bob: float
    k_eve: float
    mean_snr_bob: float
    mean_snr_eve: float
    bob_angle: float
    eve_angle: float
    eve_aoa: float = 0.0
    secrecy_rate: float = 1.0
    spacing_alice: float = config.DEFAULT_SPACING_ALICE
    spacing_eve: float = config.DEFAULT_SPACING_EVE
    geometry: Optional[Geometry] = None

    def __post_init__(self):
        if int(self.n_alice) != self.n_alice or self.n_alice < 2:
            raise DomainError(f"n_alice must be an integer >= 2, got {self.n_alice}")
        if int(self.n_eve) != self.n_eve or self.n_eve < 1:
            raise DomainError(f"n_eve must be an integer >= 1, got {self.n_eve}")
        if not (self.k_bob >= 0.0 and self.k_eve >= 0.0):
            raise DomainError("K-factors must be non-negative",
                              context={"k_bob": self.k_bob, "k_eve": self.k_eve})
        # an infinite main-channel K is pure LOS; Eve's Gamma law needs a finite K_E
        if not math.isfinite(self.k_eve):
            raise DomainError(f"k_eve must be finite, got {self.k_eve}", context={"k_eve": self.k_eve})
        if not (self.mean_snr_bob > 0.0 and self.mean_snr_eve > 0.0):
            raise DomainError("mean SNRs must be positive",
                              context={"mean_snr_bob": self.mean_snr_bob, "mean_snr_eve": self.mean_snr_eve})
        if self.spacing_alice <= 0.0 or self.spacing_eve <= 0.0:
            raise DomainError("antenna spacings must be positive")
        if self.secrecy_rate < 0.0:
            raise DomainError(f"secrecy_rate must be >= 0, got {self.secrecy_rate}")
        for name in ("bob_angle", "eve_angle", "eve_aoa"):
            object.__setattr__(self, name, normalize_angle(getattr(self, name)))

    @property
    def mode(self) -> str:
        return "direct" if self.geometry is None else "link_budget"

    @classmethod
    def from_geometry(cls, geometry: Geometry, n_alice: int, n_eve: int, k_bob: float, k_eve: float,
                      eve_aoa: float = 0.0, secrecy_rate: float = 1.0,
                      spacing_alice: float = config.DEFAULT_SPACING_ALICE,
                      spacing_eve: float = config.DEFAULT_SPACING_EVE) -> "Scenario":
        """Derive mean SNRs and angles (relative to Alice) from positions and the link budget."""
        bob_polar = cartesian_to_polar(geometry.bob.offset_from(geometry.alice))
        eve_polar = cartesian_to_polar(geometry.eve.offset_from(geometry.alice))
        scenario = cls(
            n_alice=n_alice,
            n_eve=n_eve,
            k_bob=k_bob,
            k_eve=k_eve,
            mean_snr_bob=float(mean_snr_from_geometry(geometry.budget, bob_polar.distance, "bob")),
            mean_snr_eve=float(mean_snr_from_geometry(geometry.budget, eve_polar.distance, "eve")),
            bob_angle=bob_polar.angle,
            eve_angle=eve_polar.angle,
            eve_aoa=eve_aoa,
            secrecy_rate=secrecy_rate,
            spacing_alice=spacing_alice,
            spacing_eve=spacing_eve,
            geometry=geometry,
        )
        logger.debug(
            f"scenario from geometry: d_B={bob_polar.distance:.2f} m, d_E={eve_polar.distance:.2f} m, "
            f"mean SNR bob={scenario.mean_snr_bob:.4g}, eve={scenario.mean_snr_eve:.4g}"
        )
        return scenario

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

"""
📡 Wiretap LBB - TDOA Localization Model
========================================

Fisher information of a TDOA fix from N anchors, the implied location
covariance V = J⁻¹, and sampling of estimated Eve locations from the unbiased
bivariate Gaussian N(ξ_true, V). The Fisher matrix depends only on the bearings
θ_n from the evaluated location to each anchor (anchor 1 is the reference).
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from src.model.geometry import CartesianPosition
from src.utils import config
from src.utils.errors import DegenerateAnchors, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnchorSet:
    anchors: Tuple[CartesianPosition, ...]
    timing_sigma: float  # seconds; 0 means a perfect location fix
    propagation_speed: float = config.SPEED_OF_LIGHT

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if len(self.anchors) < 2:
            raise DomainError(f"TDOA needs at least two anchors, got {len(self.anchors)}")
        for i, first in enumerate(self.anchors):
            for second in self.anchors[i + 1:]:
                if first == second:
                    raise DomainError("anchors must be pairwise distinct",
                                      context={"duplicate": first.as_list()})
        if not (math.isfinite(self.timing_sigma) and self.timing_sigma >= 0.0):
            raise DomainError(f"timing_sigma must be >= 0, got {self.timing_sigma}")
        if not self.propagation_speed > 0.0:
            raise DomainError(f"propagation_speed must be positive, got {self.propagation_speed}")

    @classmethod
    def from_range_sigma(cls, anchors: Iterable[CartesianPosition], range_sigma: float,
                         propagation_speed: float = config.SPEED_OF_LIGHT) -> "AnchorSet":
        """Build from the distance-unit knob cσ_t (meters)."""
        return cls(tuple(anchors), range_sigma / propagation_speed, propagation_speed)

    @classmethod
    def ring(cls, center: CartesianPosition, range_sigma: float,
             radius: float = config.DEFAULT_ANCHOR_RADIUS_M,
             bearings_deg: Sequence[float] = tuple(config.DEFAULT_ANCHOR_BEARINGS_DEG),
             propagation_speed: float = config.SPEED_OF_LIGHT) -> "AnchorSet":
        anchors = [
            CartesianPosition(center.x + radius * math.cos(math.radians(b)),
                              center.y + radius * math.sin(math.radians(b)))
            for b in bearings_deg
        ]
        return cls.from_range_sigma(anchors, range_sigma, propagation_speed)

    @property
    def range_sigma(self) -> float:
        return self.propagation_speed * self.timing_sigma

    def with_range_sigma(self, range_sigma: float) -> "AnchorSet":
        return AnchorSet.from_range_sigma(self.anchors, range_sigma, self.propagation_speed)


@dataclass(frozen=True)
class FisherMatrix:
    j11: float
    j12: float
    j22: float

    def as_array(self) -> np.ndarray:
        return np.array([[self.j11, self.j12], [self.j12, self.j22]])


@dataclass(frozen=True)
class LocationCovariance:
    sigma_x: float
    sigma_y: float
    rho: float

    def __post_init__(self):
        if not (self.sigma_x > 0.0 and self.sigma_y > 0.0):
            raise DomainError("location standard deviations must be positive",
                              context={"sigma_x": self.sigma_x, "sigma_y": self.sigma_y})
        if not abs(self.rho) < 1.0:
            raise DomainError(f"correlation must lie in (-1, 1), got {self.rho}")

    def as_matrix(self) -> np.ndarray:
        cross = self.rho * self.sigma_x * self.sigma_y
        return np.array([[self.sigma_x ** 2, cross], [cross, self.sigma_y ** 2]])

    def cholesky(self) -> np.ndarray:
        """Lower-triangular L with L·Lᵀ = V."""
        return np.array([
            [self.sigma_x, 0.0],
            [self.rho * self.sigma_y, self.sigma_y * math.sqrt(1.0 - self.rho ** 2)],
        ])


def anchor_bearings(anchor_set: AnchorSet, loc: CartesianPosition) -> np.ndarray:
    bearings = []
    for n, anchor in enumerate(anchor_set.anchors, start=1):
        dx = anchor.x - loc.x
        dy = anchor.y - loc.y
        if dx == 0.0 and dy == 0.0:
            raise DomainError(f"anchor {n} coincides with the evaluated location",
                              context={"anchor": anchor.as_list(), "location": loc.as_list()})
        bearings.append(math.atan2(dy, dx))
    return np.array(bearings)


def tdoa_neg_log_likelihood(phi_n, d_n, d_1, c: float, sigma_t: float):
    """−ln f(φ_n) = (φ_n − (d_n − d_1)/c)² / (4c²σ_t²)."""
    if c <= 0.0 or sigma_t <= 0.0:
        raise DomainError("propagation speed and timing sigma must be positive")
    residual = np.asarray(phi_n) - (np.asarray(d_n) - np.asarray(d_1)) / c
    return residual ** 2 / (4.0 * c ** 2 * sigma_t ** 2)


def tdoa_fisher(anchor_set: AnchorSet, true_loc: CartesianPosition) -> FisherMatrix:
    if anchor_set.timing_sigma == 0.0:
        raise DomainError("the Fisher matrix of a noiseless TDOA fix is unbounded",
                          context={"timing_sigma": 0.0})
    theta = anchor_bearings(anchor_set, true_loc)
    dcos = np.cos(theta[1:]) - np.cos(theta[0])
    dsin = np.sin(theta[1:]) - np.sin(theta[0])
    scale = 1.0 / (2.0 * anchor_set.range_sigma ** 2)
    return FisherMatrix(
        j11=float(scale * np.sum(dcos ** 2)),
        j12=float(scale * np.sum(dsin * dcos)),
        j22=float(scale * np.sum(dsin ** 2)),
    )


def location_covariance(j: FisherMatrix) -> LocationCovariance:
    det = j.j11 * j.j22 - j.j12 ** 2
    norm_sq = j.j11 ** 2 + 2.0 * j.j12 ** 2 + j.j22 ** 2
    if not det > config.FISHER_CONDITION_TOL * norm_sq:
        raise DegenerateAnchors(
            "Fisher matrix is singular: fewer than three effective bearings",
            context={"j11": j.j11, "j12": j.j12, "j22": j.j22, "determinant": det},
        )
    v11 = j.j22 / det
    v22 = j.j11 / det
    v12 = -j.j12 / det
    sigma_x = math.sqrt(v11)
    sigma_y = math.sqrt(v22)
    rho = v12 / (sigma_x * sigma_y)
    # a determinant just above the guard can still round the correlation to ±1
    if not abs(rho) < 1.0:
        raise DegenerateAnchors(
            "location estimates are perfectly correlated: the bearings fix only one direction",
            context={"j11": j.j11, "j12": j.j12, "j22": j.j22, "determinant": det, "rho": rho},
        )
    return LocationCovariance(sigma_x=sigma_x, sigma_y=sigma_y, rho=rho)


def sample_estimated_location(true_loc: CartesianPosition, cov: LocationCovariance,
                              rng: np.random.Generator) -> CartesianPosition:
    x, y = sample_estimated_locations(true_loc, cov, 1, rng)[0]
    return CartesianPosition(float(x), float(y))


def sample_estimated_locations(true_loc: CartesianPosition, cov: LocationCovariance, count: int,
                               rng: np.random.Generator) -> np.ndarray:
    """``count`` draws from N(true_loc, V) as rows of (x, y)."""
    z = rng.standard_normal((count, 2))
    return np.array([true_loc.x, true_loc.y]) + z @ cov.cholesky().T

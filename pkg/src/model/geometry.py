"""
2-D positions in polar and Cartesian form, and the conversions between them.
"""

import math
from dataclasses import dataclass

from src.utils.errors import DomainError

TWO_PI = 2.0 * math.pi


def normalize_angle(angle: float) -> float:
    """Wrap an angle into [0, 2π)."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative number can land exactly on 2π after the shift
    return 0.0 if wrapped >= TWO_PI else wrapped


@dataclass(frozen=True)
class PolarPosition:
    distance: float  # meters
    angle: float  # radians, stored in [0, 2π)

    def __post_init__(self):
        if not math.isfinite(self.distance) or self.distance < 0.0:
            raise DomainError(f"distance must be finite and >= 0, got {self.distance}")
        if not math.isfinite(self.angle):
            raise DomainError(f"angle must be finite, got {self.angle}")
        object.__setattr__(self, "angle", normalize_angle(self.angle))


@dataclass(frozen=True)
class CartesianPosition:
    x: float  # meters
    y: float  # meters

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"coordinates must be finite, got ({self.x}, {self.y})")

    def offset_from(self, origin: "CartesianPosition") -> "CartesianPosition":
        return CartesianPosition(self.x - origin.x, self.y - origin.y)

    def distance_to(self, other: "CartesianPosition") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_list(self) -> list:
        return [self.x, self.y]


def polar_to_cartesian(p: PolarPosition) -> CartesianPosition:
    return CartesianPosition(p.distance * math.cos(p.angle), p.distance * math.sin(p.angle))


def cartesian_to_polar(c: CartesianPosition) -> PolarPosition:
    if c.x == 0.0 and c.y == 0.0:
        raise DomainError("the angle of the origin is undefined", context={"x": c.x, "y": c.y})
    return PolarPosition(math.hypot(c.x, c.y), math.atan2(c.y, c.x))

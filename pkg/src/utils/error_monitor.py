"""
📡 Wiretap LBB - Degeneracy Monitoring
======================================

Tallies draws that had to be skipped or resampled during a sweep (degenerate
main channels, estimated locations on top of Alice) and enforces the allowed
fraction per category.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

from src.utils.errors import WiretapError

logger = logging.getLogger(__name__)


@dataclass
class SkipInfo:
    """Information about one category of skipped draws."""
    category: str
    limit: float  # allowed fraction of attempts
    attempts: int = 0
    skipped: int = 0
    examples: List[str] = field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.skipped / self.attempts if self.attempts else 0.0


class DegeneracyMonitor:
    """Counts skipped draws by category and raises once a budget is exceeded."""

    def __init__(self, limits: Dict[str, float]):
        self.categories: Dict[str, SkipInfo] = {
            name: SkipInfo(category=name, limit=limit) for name, limit in limits.items()
        }

    def record(self, category: str, attempts: int, skipped: int, example: str = "") -> None:
        info = self.categories[category]
        info.attempts += attempts
        info.skipped += skipped
        if skipped and example and len(info.examples) < 5:
            info.examples.append(example)

    def check(self) -> None:
        """Raise when any category skipped more than its limit; warn when it skipped anything."""
        for info in self.categories.values():
            if info.skipped == 0:
                continue
            logger.warning(
                f"⚠️ skipped {info.skipped}/{info.attempts} draws ({info.category}, "
                f"{100 * info.fraction:.3f}%)"
            )
            if info.fraction > info.limit:
                raise WiretapError(
                    f"too many skipped draws for {info.category}: "
                    f"{info.skipped}/{info.attempts} exceeds {100 * info.limit:.3g}%",
                    context={"category": info.category, "skipped": info.skipped,
                             "attempts": info.attempts, "examples": info.examples},
                    suggested_fix="check the scenario geometry for near-coincident directions or positions",
                )

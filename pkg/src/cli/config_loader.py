"""
📡 Wiretap LBB - Scenario Files
===============================

Loads TOML scenario files, validates them against the schema below and builds
the numeric Scenario objects. Keys carry their units in the suffix
(``_db``, ``_rad``/``_deg``, ``_m``, ``_w``, ``_bps_hz``, ``_m_s``); angles may be
given in radians or degrees but not both.

Environment overrides (loaded through dotenv by the launcher) sit below the
file, command-line flags above it.
"""

import logging
import math
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.localization.tdoa import AnchorSet
from src.model.geometry import CartesianPosition
from src.model.scenario import Geometry, LinkBudget, Scenario, db_to_linear
from src.utils import config
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

ExperimentName = Literal["sweep_tau", "optimize", "sweep_snr", "uncertainty", "validate", "fisher"]
Point = Tuple[float, float]


def _angle(rad: Optional[float], deg: Optional[float], name: str, default: Optional[float] = None) -> Optional[float]:
    if rad is not None and deg is not None:
        raise ValueError(f"give {name}_rad or {name}_deg, not both")
    if rad is not None:
        return rad
    if deg is not None:
        return math.radians(deg)
    return default


def _k_factor(value_db: float) -> float:
    return math.inf if math.isinf(value_db) and value_db > 0 else db_to_linear(value_db)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ScenarioSection(_Section):
    n_alice: int = Field(4, ge=2, description="Alice antennas (overridden by n_alice_values)")
    n_eve: int = Field(2, ge=1)
    k_bob_db: float = 10.0
    k_eve_db: float = 5.0
    mean_snr_bob_db: Optional[float] = None
    mean_snr_eve_db: Optional[float] = None
    theta_b_rad: Optional[float] = None
    theta_b_deg: Optional[float] = None
    theta_e_rad: Optional[float] = None
    theta_e_deg: Optional[float] = None
    phi_e_rad: Optional[float] = None
    phi_e_deg: Optional[float] = None
    secrecy_rate_bps_hz: float = Field(1.0, ge=0.0)
    spacing_alice_wavelengths: float = Field(config.DEFAULT_SPACING_ALICE, gt=0.0)
    spacing_eve_wavelengths: float = Field(config.DEFAULT_SPACING_EVE, gt=0.0)

    @model_validator(mode="after")
    def check_angle_pairs(self):
        for name in ("theta_b", "theta_e", "phi_e"):
            _angle(getattr(self, f"{name}_rad"), getattr(self, f"{name}_deg"), name)
        return self

    @model_validator(mode="after")
    def check_k_factors(self):
        if math.isnan(self.k_bob_db) or self.k_bob_db == -math.inf:
            raise ValueError(f"k_bob_db must be a number or inf, got {self.k_bob_db}")
        if not math.isfinite(self.k_eve_db):
            raise ValueError(f"k_eve_db must be finite, got {self.k_eve_db}")
        return self

    @property
    def theta_b(self) -> Optional[float]:
        return _angle(self.theta_b_rad, self.theta_b_deg, "theta_b")

    @property
    def theta_e(self) -> Optional[float]:
        return _angle(self.theta_e_rad, self.theta_e_deg, "theta_e")

    @property
    def phi_e(self) -> float:
        return _angle(self.phi_e_rad, self.phi_e_deg, "phi_e", 0.0)


class GeometrySection(_Section):
    alice_m: Point = (0.0, 0.0)
    bob_m: Point
    eve_m: Point
    path_loss_exponent: float = Field(gt=0.0)
    transmit_power_w: float = Field(1.0, gt=0.0)
    noise_bob_w: Optional[float] = Field(None, gt=0.0)
    noise_eve_w: Optional[float] = Field(None, gt=0.0)
    target_mean_snr_bob_db: Optional[float] = None
    target_mean_snr_eve_db: Optional[float] = None

    @model_validator(mode="after")
    def check_budget_mode(self):
        explicit = self.noise_bob_w is not None and self.noise_eve_w is not None
        calibrated = self.target_mean_snr_bob_db is not None and self.target_mean_snr_eve_db is not None
        if explicit == calibrated:
            raise ValueError("give either noise_bob_w and noise_eve_w, or both target_mean_snr_*_db")
        return self

    def build(self) -> Geometry:
        alice = CartesianPosition(*self.alice_m)
        bob = CartesianPosition(*self.bob_m)
        eve = CartesianPosition(*self.eve_m)
        if self.noise_bob_w is not None:
            budget = LinkBudget(self.transmit_power_w, self.path_loss_exponent, self.noise_bob_w, self.noise_eve_w)
        else:
            budget = LinkBudget.calibrated(
                self.path_loss_exponent, bob.distance_to(alice), eve.distance_to(alice),
                db_to_linear(self.target_mean_snr_bob_db), db_to_linear(self.target_mean_snr_eve_db),
                self.transmit_power_w,
            )
        return Geometry(alice=alice, bob=bob, eve=eve, budget=budget)


class AnchorSection(_Section):
    positions_m: Optional[List[Point]] = None
    ring_radius_m: float = Field(config.DEFAULT_ANCHOR_RADIUS_M, gt=0.0)
    ring_bearings_deg: List[float] = Field(default_factory=lambda: list(config.DEFAULT_ANCHOR_BEARINGS_DEG))
    propagation_speed_m_s: float = Field(config.SPEED_OF_LIGHT, gt=0.0)

    def build(self, true_eve: CartesianPosition, range_sigma: float) -> AnchorSet:
        if self.positions_m is None:
            return AnchorSet.ring(true_eve, range_sigma, self.ring_radius_m, self.ring_bearings_deg,
                                  self.propagation_speed_m_s)
        anchors = [CartesianPosition(x, y) for x, y in self.positions_m]
        return AnchorSet.from_range_sigma(anchors, range_sigma, self.propagation_speed_m_s)


class ExperimentSection(_Section):
    name: ExperimentName = "sweep_tau"
    seed: Optional[int] = Field(None, ge=0, lt=1 << 64)
    workers: Optional[int] = Field(None, ge=1)
    grid_size: int = Field(config.DEFAULT_GRID_SIZE, ge=2)
    n_realizations: int = Field(config.DEFAULT_REALIZATIONS, ge=1)
    n_trials: int = Field(config.DEFAULT_TRIALS, ge=1)
    single_h_seed: Optional[int] = Field(None, ge=0, lt=1 << 64)
    n_alice_values: Optional[List[int]] = None
    validate_empirical: bool = False
    validate_taus: List[float] = Field(default_factory=lambda: list(config.DEFAULT_VALIDATE_TAUS))
    mrt_fallback: bool = False
    mean_snr_bob_db_values: List[float] = Field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0, 20.0])
    oracle_samples: int = Field(0, ge=0)
    oracle_max_n_alice: int = Field(3, ge=2)
    oracle_realizations: int = Field(20, ge=1)
    range_sigma_m_values: List[float] = Field(default_factory=lambda: [0.0, 50.0, 200.0, 800.0])
    n_location_samples: int = Field(config.DEFAULT_LOCATION_SAMPLES, ge=1)
    fix_main_channel: bool = False
    diagnostic_true_location: bool = False
    unknown_location_reference: bool = False
    coarse_grid: int = Field(config.DEFAULT_COARSE_GRID, ge=2)
    refine_iters: int = Field(config.DEFAULT_REFINE_ITERS, ge=0)
    quick: bool = False

    @field_validator("n_alice_values")
    @classmethod
    def check_n_alice_values(cls, values):
        if values is not None and (not values or min(values) < 2):
            raise ValueError("n_alice_values must be a non-empty list of integers >= 2")
        return values

    @field_validator("validate_taus")
    @classmethod
    def check_taus(cls, values):
        if any(not 0.0 <= t <= 1.0 for t in values):
            raise ValueError("validate_taus must lie in [0, 1]")
        return values

    @field_validator("range_sigma_m_values")
    @classmethod
    def check_range_sigmas(cls, values):
        if not values or any(v < 0.0 for v in values):
            raise ValueError("range_sigma_m_values must be a non-empty list of values >= 0")
        return values


class ExperimentConfig(_Section):
    """A whole scenario file after validation and overrides."""
    experiment: ExperimentSection = Field(default_factory=ExperimentSection)
    scenario: ScenarioSection = Field(default_factory=ScenarioSection)
    geometry: Optional[GeometrySection] = None
    anchors: AnchorSection = Field(default_factory=AnchorSection)

    @model_validator(mode="after")
    def check_snr_mode(self):
        direct = [self.scenario.mean_snr_bob_db is not None, self.scenario.mean_snr_eve_db is not None]
        if self.geometry is None:
            if not all(direct):
                raise ValueError("give scenario.mean_snr_bob_db and mean_snr_eve_db, or a [geometry] table")
            if self.scenario.theta_b is None or self.scenario.theta_e is None:
                raise ValueError("direct mode needs theta_b and theta_e")
        else:
            if any(direct):
                raise ValueError("mean SNRs come from [geometry]; drop scenario.mean_snr_*_db")
            if self.scenario.theta_b is not None or self.scenario.theta_e is not None:
                raise ValueError("angles come from [geometry]; drop scenario.theta_b/theta_e")
        if self.experiment.name in ("uncertainty", "fisher") and self.geometry is None:
            raise ValueError(f"the {self.experiment.name} experiment needs a [geometry] table")
        return self

    @property
    def seed(self) -> int:
        return config.DEFAULT_SEED if self.experiment.seed is None else self.experiment.seed

    @property
    def workers(self) -> int:
        return 1 if self.experiment.workers is None else self.experiment.workers

    @property
    def n_alice_values(self) -> List[int]:
        values = self.experiment.n_alice_values
        return [self.scenario.n_alice] if values is None else list(values)

    @property
    def n_trials(self) -> int:
        return config.QUICK_TRIALS if self.experiment.quick else self.experiment.n_trials

    def build_scenario(self, n_alice: Optional[int] = None, mean_snr_bob_db: Optional[float] = None) -> Scenario:
        s = self.scenario
        n_alice = s.n_alice if n_alice is None else n_alice
        if self.geometry is not None:
            scenario = Scenario.from_geometry(
                self.geometry.build(), n_alice=n_alice, n_eve=s.n_eve,
                k_bob=_k_factor(s.k_bob_db), k_eve=_k_factor(s.k_eve_db), eve_aoa=s.phi_e,
                secrecy_rate=s.secrecy_rate_bps_hz,
                spacing_alice=s.spacing_alice_wavelengths, spacing_eve=s.spacing_eve_wavelengths,
            )
            if mean_snr_bob_db is not None:
                scenario = scenario.replace(mean_snr_bob=db_to_linear(mean_snr_bob_db))
            return scenario
        return Scenario(
            n_alice=n_alice,
            n_eve=s.n_eve,
            k_bob=_k_factor(s.k_bob_db),
            k_eve=_k_factor(s.k_eve_db),
            mean_snr_bob=db_to_linear(s.mean_snr_bob_db if mean_snr_bob_db is None else mean_snr_bob_db),
            mean_snr_eve=db_to_linear(s.mean_snr_eve_db),
            bob_angle=s.theta_b,
            eve_angle=s.theta_e,
            eve_aoa=s.phi_e,
            secrecy_rate=s.secrecy_rate_bps_hz,
            spacing_alice=s.spacing_alice_wavelengths,
            spacing_eve=s.spacing_eve_wavelengths,
        )

    def true_eve(self) -> CartesianPosition:
        return CartesianPosition(*self.geometry.eve_m)

    def build_anchors(self, range_sigma: float) -> AnchorSet:
        return self.anchors.build(self.true_eve(), range_sigma)


def _field_errors(error: ValidationError) -> List[str]:
    return [f"{'.'.join(str(p) for p in item['loc']) or '<root>'}: {item['msg']}" for item in error.errors()]


def parse_config(data: dict, source: str = "<memory>") -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as error:
        fields = _field_errors(error)
        raise ConfigError(
            f"{source}: invalid scenario ({len(fields)} problem(s)): " + "; ".join(fields),
            context={"source": source, "fields": fields},
            suggested_fix="see docs/scenario-schema.md for the accepted keys and units",
        ) from error


def parse_config_json(text: str, source: str = "<footer>") -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate_json(text)
    except ValidationError as error:
        raise ConfigError(f"{source}: invalid embedded configuration: " + "; ".join(_field_errors(error)),
                          context={"source": source}) from error


def load_config(path: Path) -> ExperimentConfig:
    """Read and validate a TOML scenario file."""
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError as error:
        raise ConfigError(f"scenario file not found: {path}", context={"path": str(path)}) from error
    except tomllib.TOMLDecodeError as error:
        # the decoder message ends with "(at line L, column C)"
        raise ConfigError(f"{path}: TOML syntax error: {error}", context={"path": str(path)},
                          suggested_fix="fix the syntax at the reported line") from error
    logger.debug(f"loaded scenario file {path}")
    return parse_config(data, str(path))


def env_overrides() -> dict:
    """Experiment fields taken from the environment; invalid values are a config error."""
    overrides = {}
    for env_name, field_name in ((config.ENV_SEED, "seed"), (config.ENV_WORKERS, "workers")):
        raw = os.getenv(env_name)
        if raw is None or raw == "":
            continue
        try:
            overrides[field_name] = int(raw)
        except ValueError as error:
            raise ConfigError(f"{env_name} must be an integer, got {raw!r}", context={env_name: raw}) from error
    return overrides


def apply_overrides(cfg: ExperimentConfig, cli: dict, environment: Optional[dict] = None) -> ExperimentConfig:
    """Resolve precedence: command line > file > environment > default."""
    experiment = cfg.experiment.model_dump()
    explicitly_set = cfg.experiment.model_fields_set
    for key, value in (environment or {}).items():
        if key not in explicitly_set:
            experiment[key] = value
    experiment.update({key: value for key, value in cli.items() if value is not None})
    if experiment["seed"] is None:
        experiment["seed"] = config.DEFAULT_SEED
    data = cfg.model_dump()
    data["experiment"] = experiment
    return parse_config(data, "<resolved>")

"""
📡 Wiretap LBB - Configuration
==============================

Configuration settings and constants for the location-based beamforming toolkit.
"""

ARTIFACT_NAME = "wiretap-lbb"
ARTIFACT_VERSION = "0.1.0"

EXPERIMENT_DISPLAY_NAMES = {
    "sweep_tau": "Secrecy outage versus tau",
    "optimize": "Optimal tau per array size",
    "sweep_snr": "Optimal secrecy outage versus Bob's mean SNR",
    "uncertainty": "Averaged secrecy outage under location uncertainty",
    "validate": "Analytic and Monte Carlo validation suite",
    "fisher": "TDOA Fisher matrix and location covariance",
}

# Half-wavelength ULA at both ends unless the scenario overrides it
DEFAULT_SPACING_ALICE = 0.5
DEFAULT_SPACING_EVE = 0.5

SPEED_OF_LIGHT = 299_792_458.0

# Numerical tolerances
DEGENERACY_RELATIVE_TOL = 1e-9
FISHER_CONDITION_TOL = 1e-18
# Sup-distance the Gamma-form Eve CDF may keep from simulation at any trial count;
# the form matches only the first two moments of each antenna's Rician power
EVE_CDF_APPROXIMATION_FLOOR = 0.02
ALICE_COLLISION_RADIUS_M = 1e-6

# Incomplete gamma evaluation
GAMMA_TERM_TOL = 1e-14
GAMMA_MAX_ITERATIONS = 10_000

# Skipped-draw budgets, as fractions of attempted draws
MAX_DEGENERATE_FRACTION = 0.01
MAX_ALICE_COLLISION_FRACTION = 0.001

# Optimizer defaults
DEFAULT_GRID_SIZE = 1001
DEFAULT_COARSE_GRID = 101
DEFAULT_REFINE_ITERS = 60

# Monte Carlo defaults
DEFAULT_TRIALS = 1_000_000
QUICK_TRIALS = 10_000
MC_BLOCK_SIZE = 1 << 14
DEFAULT_REALIZATIONS = 10_000
DEFAULT_ORACLE_SAMPLES = 100_000
DEFAULT_LOCATION_SAMPLES = 1_000
DEFAULT_SEED = 20_160_523
DEFAULT_VALIDATE_TAUS = [0.0, 0.25, 0.5, 0.75, 1.0]

# RNG stream ids. Each consumer owns one id; counters below the id pick
# realizations, location samples and Monte Carlo blocks.
STREAM_MAIN_CHANNEL = 1
STREAM_EVE_CHANNEL = 2
STREAM_LOCATION = 3
STREAM_ORACLE = 4
STREAM_EVE_CDF = 5
STREAM_VALIDATION = 6
STREAM_UNKNOWN_BEARING = 7

# Default TDOA anchor ring around the true Eve location
DEFAULT_ANCHOR_RADIUS_M = 3000.0
DEFAULT_ANCHOR_BEARINGS_DEG = [45.0, 135.0, 225.0, 315.0]

# CSV output
CSV_FLOAT_FORMAT = "{:.17g}"
CSV_FOOTER_PREFIX = "# "

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERIC_ERROR = 3
EXIT_VALIDATION_FAILURE = 4

# Environment overrides (loaded through python-dotenv by the launcher)
ENV_SEED = "WIRETAP_LBB_SEED"
ENV_WORKERS = "WIRETAP_LBB_WORKERS"
ENV_LOG_LEVEL = "WIRETAP_LBB_LOG_LEVEL"

import asyncio
import json
import logging
import os
from datetime import datetime
from logging.handlers import RotatingFileHandler

import psutil
from pytz import timezone

from errors import ConfigError

# Basic constants
CONFIG_PATH = os.getenv("ARXCV_CONFIG", "config.json")
LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"
LOG_MAX_BYTES = 10**7
LOG_BACKUPS = 5


def load_config(path: str) -> dict:
    """Reads the JSON config at ``path``; a missing file yields ``{}``."""
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except FileNotFoundError:
        return {}
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"Could not read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object")
    return data


# Load config before logging so the timezone and log file can be configured.
CONFIG_LOAD_ERROR: str | None = None
try:
    config = load_config(CONFIG_PATH)
    CONFIG_FOUND = os.path.exists(CONFIG_PATH)
except ConfigError as exc:
    config = {}
    CONFIG_FOUND = False
    CONFIG_LOAD_ERROR = str(exc)

LOCAL_TIMEZONE = timezone(config.get("timezone", "Europe/London"))
LOG_FILE = config.get("log_file", "arxcv.log")
LOG_LEVEL = config.get("log_level", "INFO")


class LocalTimeFormatter(logging.Formatter):
    def converter(self, ts: float):
        return datetime.fromtimestamp(ts, LOCAL_TIMEZONE).timetuple()


def setup_logging():
    log = logging.getLogger("arxcv")
    log.setLevel(LOG_LEVEL)
    if log.handlers:
        return log
    if LOG_FILE:
        fh = RotatingFileHandler(LOG_FILE, maxBytes=LOG_MAX_BYTES, backupCount=LOG_BACKUPS)
        fh.setFormatter(LocalTimeFormatter(LOG_FORMAT))
        log.addHandler(fh)
    ch = logging.StreamHandler()
    ch.setFormatter(LocalTimeFormatter(LOG_FORMAT))
    log.addHandler(ch)
    return log


app_logger = setup_logging()

if CONFIG_LOAD_ERROR:
    app_logger.error(CONFIG_LOAD_ERROR)
elif not CONFIG_FOUND:
    app_logger.warning(f"{CONFIG_PATH} not found; using built-in defaults.")

# Run settings
DEFAULT_SEED = int(config.get("default_seed", 20240611))
MAX_CONCURRENCY = int(
    config.get("max_concurrency") or psutil.cpu_count(logical=False) or 1
)
GAMMA = float(config.get("gamma", 0.01))

# Numerical tolerances
NUMERICS = config.get("numerics", {})
STATIONARITY_MARGIN = NUMERICS.get("stationarity_margin", 1e-10)
EIGEN_ZERO_TOL = NUMERICS.get("eigen_zero_tol", 1e-10)

# Generalized chi-squared CDF
GCHISQ_SETTINGS = config.get("gchisq", {})
GCHISQ_ABS_TOL = GCHISQ_SETTINGS.get("abs_tol", 1e-6)
GCHISQ_FALLBACK_TOL = GCHISQ_SETTINGS.get("fallback_tol", 1e-5)
GCHISQ_FALLBACK_DRAWS = int(GCHISQ_SETTINGS.get("fallback_draws", 1_000_000))
GCHISQ_FALLBACK_SEED = int(GCHISQ_SETTINGS.get("fallback_seed", 7))
GCHISQ_ALLOW_FALLBACK = GCHISQ_SETTINGS.get("allow_fallback", True)
GCHISQ_QUAD_LIMIT = int(GCHISQ_SETTINGS.get("quad_limit", 500))

# Oracle (Nelder-Mead)
ORACLE_SETTINGS = config.get("oracle", {})
ORACLE_SIMPLEX_SCALE = ORACLE_SETTINGS.get("simplex_scale", 0.1)
ORACLE_FATOL = ORACLE_SETTINGS.get("fatol", 1e-9)
ORACLE_XATOL = ORACLE_SETTINGS.get("xatol", 1e-9)
ORACLE_MAXITER = int(ORACLE_SETTINGS.get("maxiter", 2000))

# Full-Bayes quadrature and Monte Carlo sizes
FULL_BAYES_SETTINGS = config.get("full_bayes", {})
PHI_GRID_NODES = int(FULL_BAYES_SETTINGS.get("grid_nodes", 257))
PHI_GRID_EDGE = FULL_BAYES_SETTINGS.get("grid_edge", 1e-6)
PHI_GRID_REFINE_MASS = FULL_BAYES_SETTINGS.get("refine_mass", 0.2)
PHI_GRID_REFINE_NODES = int(FULL_BAYES_SETTINGS.get("refine_nodes", 64))
FULL_BAYES_REPLICATES = int(FULL_BAYES_SETTINGS.get("replicates", 500))
FULL_BAYES_POSTERIOR_DRAWS = int(FULL_BAYES_SETTINGS.get("posterior_draws", 1000))
FULL_BAYES_ELPD_DRAWS = int(FULL_BAYES_SETTINGS.get("elpd_draws", 1000))

# Minimum sample size search
SAMPLE_SIZE_SETTINGS = config.get("min_sample_size", {})
SAMPLE_SIZE_LOWER = int(SAMPLE_SIZE_SETTINGS.get("lower", 10))
SAMPLE_SIZE_UPPER = int(SAMPLE_SIZE_SETTINGS.get("upper", 2500))

# Paths
OUTPUT_DIR = config.get("output_dir", "output")
os.makedirs(OUTPUT_DIR, exist_ok=True)
RUN_HISTORY_FILE = os.path.join(OUTPUT_DIR, "run_history.jsonl")

history_lock = asyncio.Lock()

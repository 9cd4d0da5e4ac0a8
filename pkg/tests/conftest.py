import json
import os
import sys
from pathlib import Path

import numpy as np
import pytest


_REPO_ROOT = Path(__file__).resolve().parents[1]
_CONFIG_PATH = _REPO_ROOT / "config.json"
_CONFIG_CREATED = False

os.environ.setdefault("ARXCV_CONFIG", str(_CONFIG_PATH))

if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

if not _CONFIG_PATH.exists():
    _CONFIG = {
        "log_file": "",
        "log_level": "WARNING",
        "output_dir": str(_REPO_ROOT / "output"),
        "max_concurrency": 2,
        "gchisq": {"allow_fallback": True},
    }
    _CONFIG_PATH.write_text(json.dumps(_CONFIG))
    _CONFIG_CREATED = True


def pytest_sessionfinish(session, exitstatus):  # type: ignore[override]
    if _CONFIG_CREATED:
        _CONFIG_PATH.unlink(missing_ok=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_covariates():
    from arx_core import make_covariates

    return make_covariates(30, 3, 2024)


@pytest.fixture
def history_file(tmp_path, monkeypatch):
    import results_log

    path = tmp_path / "run_history.jsonl"
    monkeypatch.setattr(results_log, "RUN_HISTORY_FILE", str(path))
    return path

import json
from datetime import datetime
from pathlib import Path

import aiofiles
import pandas as pd

from settings import LOCAL_TIMEZONE, RUN_HISTORY_FILE, app_logger, history_lock

LOG_TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"
FLOAT_FORMAT = "%.17g"


def write_csv(frame: pd.DataFrame, path, columns: list[str] | None = None) -> Path:
    """Writes ``frame`` with a header row, fixed column order and round-trip floats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if columns is not None:
        frame = frame.reindex(columns=columns)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    app_logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def sort_rows(rows: list[dict], keys: list[str]) -> list[dict]:
    """Canonical row order, independent of the order workers finished in."""
    return sorted(rows, key=lambda row: tuple(row[k] for k in keys))


async def append_run_history(command: str, arguments: dict, outputs: list, status: str,
                             path=None) -> str:
    """Appends one JSON line describing a CLI run; returns its timestamp."""
    path = path or RUN_HISTORY_FILE
    async with history_lock:
        timestamp = datetime.now(LOCAL_TIMEZONE).strftime(LOG_TIMESTAMP_FORMAT)
        entry = {
            "timestamp": timestamp,
            "command": command,
            "arguments": arguments,
            "outputs": [str(p) for p in outputs],
            "status": status,
        }
        try:
            async with aiofiles.open(path, "a", encoding="utf-8") as f:
                await f.write(json.dumps(entry, default=str) + "\n")
        except OSError as e:
            app_logger.error(f"Run history write error: {e}")
    return timestamp


async def read_run_history(path=None) -> list[dict]:
    path = path or RUN_HISTORY_FILE
    entries = []
    async with history_lock:
        try:
            async with aiofiles.open(path, "r", encoding="utf-8") as f:
                async for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        entries.append(json.loads(line))
                    except json.JSONDecodeError:
                        app_logger.warning("Skipping malformed run history entry.")
        except FileNotFoundError:
            return []
    return entries

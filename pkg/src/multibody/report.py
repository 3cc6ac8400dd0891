"""Run reports and their on-disk form.

The main output holds only deterministic content: the payload table (CSV) or
``{version, command, config, result}`` (JSON). Wall-clock timing goes to a
``<output>.meta.json`` sidecar so repeated seeded runs stay byte-identical.
"""
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, TextIO, Union

import numpy as np
import pandas as pd

from . import __version__
from .errors import ReportWriteError, UsageError

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"
BUILD_ID = f"multibody {__version__}"


@dataclass
class Payload:
    """Result of one command: an optional table plus scalar summary values."""
    summary: Dict[str, Any] = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None

    @property
    def tabular(self) -> bool:
        return self.table is not None


@dataclass
class RunReport:
    command: str
    config: Dict[str, Any]
    payload: Payload
    duration: float = 0.0
    version: str = BUILD_ID


def _number(value: float) -> Union[float, str]:
    if not math.isfinite(value):
        return "inf" if value > 0 else "-inf" if value < 0 else "nan"
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def plain(value: Any) -> Any:
    """JSON-ready copy of ``value`` with floats cut to twelve significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _number(float(value))
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(v) for v in value]
    if isinstance(value, pd.DataFrame):
        return [plain(row) for row in value.to_dict(orient="records")]
    return value


def render_json(r: RunReport) -> str:
    result = dict(r.payload.summary)
    if r.payload.tabular:
        result["rows"] = r.payload.table
    document = {"version": r.version, "command": r.command, "config": r.config, "result": result}
    return json.dumps(plain(document), indent=2, sort_keys=True) + "\n"


def render_csv(r: RunReport) -> str:
    """The table as CSV; a table without rows gives the header line alone.

    Summary-only payloads have no columns to write and are refused.
    """
    if not r.payload.tabular:
        raise UsageError("output", f"{r.command} produces no table; write it as .json")
    return r.payload.table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _atomic_write(path: Path, text: str) -> None:
    directory = path.parent if str(path.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise ReportWriteError(str(path), exc.strerror or str(exc)) from exc


def emit_report(r: RunReport, path: Optional[Union[str, Path]] = None, stream: Optional[TextIO] = None) -> None:
    """Write ``r`` to ``path`` (format from the extension) or as JSON to ``stream``."""
    if path is None:
        (stream or sys.stdout).write(render_json(r))
        return
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".csv":
        text = render_csv(r)
    elif suffix == ".json":
        text = render_json(r)
    else:
        raise UsageError("output", f"unsupported extension {path.suffix!r}; use .csv or .json")
    _atomic_write(path, text)
    meta = {"version": r.version, "command": r.command, "duration_seconds": r.duration, "config": r.config}
    _atomic_write(path.with_name(path.name + ".meta.json"),
                  json.dumps(plain(meta), indent=2, sort_keys=True) + "\n")
    logger.info("wrote %s in %.3f s", path, r.duration)

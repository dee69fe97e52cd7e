"""Run reports and their JSON / CSV serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

CSV_HEADER = ("check", "max", "mean", "l2", "tolerance", "pass")
REPORT_KEYS = ("command", "params", "grid", "checks", "pass", "runtime_ms", "seed", "version")


@dataclass(frozen=True)
class Check:
    """One line of a report: ``max <= tolerance`` decides the pass flag."""

    name: str
    max: float
    mean: float
    l2: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.max) and self.max <= self.tolerance

    @classmethod
    def from_values(cls, name: str, values, tolerance: float) -> "Check":
        v = np.abs(np.asarray(values, dtype=float)).ravel()
        if v.size == 0:
            return cls(name, math.nan, math.nan, math.nan, tolerance)
        return cls(name, float(v.max()), float(v.mean()), float(np.sqrt(np.mean(v * v))), tolerance)

    @classmethod
    def from_stats(cls, name: str, stats, tolerance: float) -> "Check":
        return cls(name, stats.max, stats.mean, stats.l2, tolerance)

    @classmethod
    def failed(cls, name: str, tolerance: float) -> "Check":
        """Placeholder for a check that could not be evaluated (e.g. a domain violation)."""
        return cls(name, math.inf, math.inf, math.inf, tolerance)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max": self.max,
            "mean": self.mean,
            "l2": self.l2,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class RunReport:
    command: str
    params: dict
    grid: dict | None
    seed: int
    checks: list[Check] = field(default_factory=list)
    runtime_ms: float = 0.0
    version: str = __version__

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def sorted_checks(self) -> list[Check]:
        return sorted(self.checks, key=lambda c: c.name)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "grid": self.grid,
            "checks": [c.as_dict() for c in self.sorted_checks()],
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
            "seed": self.seed,
            "version": self.version,
        }


# --- serialisation -------------------------------------------------------------
# json.dumps writes the shortest round-trip repr of a float, which can be as
# short as "0.5"; floats here always carry 17 significant digits (lossless).


def _number(x: float, missing: str = "null") -> str:
    if not math.isfinite(x):
        return missing if missing != "repr" else repr(float(x))
    return format(x, ".16e")


def _encode(obj, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_encode(str(k), indent, 0)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(report: RunReport) -> str:
    return _encode(report.as_dict(), 2, 0) + "\n"


def to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in report.sorted_checks():
        nums = [_number(v, "repr") for v in (c.max, c.mean, c.l2, c.tolerance)]
        w.writerow([c.name, *nums, str(c.passed).lower()])
    return buf.getvalue()


def emit_report(report: RunReport, fmt: str = "json", path=None) -> str:
    """Serialise ``report``; write it to ``path`` when given and return the text."""
    if fmt not in ("json", "csv"):
        raise ValueError("format must be 'json' or 'csv'")
    text = to_json(report) if fmt == "json" else to_csv(report)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return text

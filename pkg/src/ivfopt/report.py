"""Deterministic JSON reports."""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from typing import Any

import numpy as np

from .interval import Interval

FLOAT_FORMAT = "%.12g"


def normalize(obj: Any) -> Any:
    """Plain JSON data: floats rounded through ``%.12g``, non-finite floats as strings."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        x = float(FLOAT_FORMAT % x)
        return 0.0 if x == 0 else x
    if isinstance(obj, Interval):
        return [normalize(obj.lo), normalize(obj.hi)]
    if isinstance(obj, enum.Enum):
        return normalize(obj.value)
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [normalize(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return normalize(obj.as_dict())
    if dataclasses.is_dataclass(obj):
        return normalize(dataclasses.asdict(obj))
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(normalize(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclasses.dataclass
class Report:
    command: str
    inputs: dict
    results: dict = dataclasses.field(default_factory=dict)
    diagnostics: list = dataclasses.field(default_factory=list)

    def note(self, level: str, message: str, witness: Any = None) -> None:
        entry = {"level": level, "message": message}
        if witness is not None:
            entry["witness"] = witness
        self.diagnostics.append(entry)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return dumps(self.as_dict())


def fmt(x: float) -> str:
    """CSV cell text for a float."""
    return FLOAT_FORMAT % x

"""Verification reports and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["VerificationReport", "jsonable", "dumps_reports", "reports_to_csv"]


@dataclass
class VerificationReport:
    check: str
    params: dict = field(default_factory=dict)
    observed: dict = field(default_factory=dict)
    bound: dict = field(default_factory=dict)
    passed: bool = True

    def __bool__(self):
        return bool(self.passed)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "params": jsonable(self.params),
            "observed": jsonable(self.observed),
            "bound": jsonable(self.bound),
            "pass": bool(self.passed),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "VerificationReport":
        return cls(obj["check"], obj.get("params", {}), obj.get("observed", {}),
                   obj.get("bound", {}), bool(obj["pass"]))


def jsonable(obj: Any) -> Any:
    """Plain-JSON copy of ``obj``; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    return obj


def dumps_reports(payload: dict) -> str:
    return json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"


def _flatten(prefix: str, obj: Any, out: dict) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, list):
        out[prefix] = json.dumps(obj)
    else:
        out[prefix] = obj


def reports_to_csv(reports: list[VerificationReport]) -> str:
    """One row per report; nested fields become dotted column names."""
    rows = []
    for r in reports:
        row: dict = {}
        _flatten("", r.to_json(), row)
        rows.append(row)
    columns = ["check", "pass"] + sorted({k for row in rows for k in row} - {"check", "pass"})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()

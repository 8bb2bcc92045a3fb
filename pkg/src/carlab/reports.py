"""Verification reports: empirical constants with witnesses, JSON/CSV output.

Reports serialize to the versioned "carlab-report/1" JSON schema and to a
flat CSV with one row per sweep point.  Serialization is deterministic
(sorted keys, repr floats) so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import datetime
import hashlib
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA = "carlab-report/1"


@dataclass
class EmpiricalConstant:
    """Maximum observed ratio of two sides of an inequality over a sweep.

    value is the max of the series ratios and witness identifies the argmax.
    """

    name: str
    value: float
    witness: str
    sweep_axis: str = "none"  # one of: t, k, delta, none
    series: list[tuple[float, float]] = field(default_factory=list)
    series_witnesses: list[str] | None = None
    cap: float | None = None
    cap_provenance: str | None = None  # analytic | refinement_oracle

    def within_cap(self) -> bool:
        return self.cap is None or self.value <= self.cap

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "value": self.value,
            "witness": self.witness,
            "sweep_axis": self.sweep_axis,
            "series": [[float(a), float(v)] for a, v in self.series],
        }
        if self.series_witnesses is not None:
            d["series_witnesses"] = list(self.series_witnesses)
        if self.cap is not None:
            d["cap"] = self.cap
            d["cap_provenance"] = self.cap_provenance
        return d


@dataclass
class VerificationReport:
    """One check's outcome: parameters, empirical constants, pass/fail."""

    check: str
    parameters: dict
    constants: list[EmpiricalConstant]
    passed: bool
    cap: float | None = None
    cap_provenance: str | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self, timestamp: bool = False) -> dict:
        d = {
            "schema": SCHEMA,
            "check": self.check,
            "parameters": self.parameters,
            "constants": [c.to_dict() for c in self.constants],
            "pass": self.passed,
            "cap": self.cap,
            "cap_provenance": self.cap_provenance,
            "notes": list(self.notes),
        }
        if timestamp:
            d["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        return d

    def to_json(self, timestamp: bool = False) -> str:
        return json.dumps(self.to_dict(timestamp=timestamp), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["axis", "ratio", "witness"])
        for const in self.constants:
            if const.series:
                wit = const.series_witnesses or [const.witness] * len(const.series)
                for (axis, ratio), w in zip(const.series, wit):
                    writer.writerow([repr(axis), repr(ratio), w])
            else:
                writer.writerow([const.name, repr(const.value), const.witness])
        return buf.getvalue()


def config_hash(parameters: dict) -> str:
    canonical = json.dumps(parameters, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temp file and rename, so readers never see partial output."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)

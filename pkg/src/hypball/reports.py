"""Structured verdicts and their CSV/JSON serialization.

Floats are written with 17 significant digits (CSV) or as the shortest
round-tripping repr (JSON), so every numeric cell survives a round trip.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = "1.0"


def _plain(x):
    """Convert numpy scalars/arrays and tuples to JSON-friendly Python values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def fmt17(x):
    return format(float(x) + 0.0, ".17g")  # no "-0"


@dataclass
class VerdictReport:
    """Outcome of an inequality suite.

    ``margins[name]`` is the amount by which an inequality holds (positive
    means satisfied) and ``errors[name]`` the combined error estimate of that
    margin. A suite fails iff some margin is below ``-error``; the raw sign
    never decides.
    """

    suite: str
    params: dict
    quantities: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, name, margin, error):
        self.margins[name] = np.atleast_1d(np.asarray(margin, dtype=np.float64))
        err = np.broadcast_to(np.abs(np.asarray(error, dtype=np.float64)), self.margins[name].shape)
        self.errors[name] = np.array(err)

    def failures(self):
        out = []
        for name, m in self.margins.items():
            e = self.errors.get(name, np.zeros_like(m))
            for i in np.nonzero(~(m >= -e))[0]:
                out.append((name, int(i), float(m[i]), float(e[i])))
        return out

    @property
    def passed(self):
        return not self.failures()

    def worst(self):
        """Smallest margin-plus-error over all checks (>= 0 when passing)."""
        vals = [float(np.min(m + self.errors.get(k, 0.0))) for k, m in self.margins.items() if m.size]
        return min(vals) if vals else math.inf

    def as_dict(self):
        return _plain(
            {
                "schema_version": SCHEMA_VERSION,
                "suite": self.suite,
                "passed": self.passed,
                "params": self.params,
                "quantities": self.quantities,
                "margins": self.margins,
                "errors": self.errors,
                "provenance": self.provenance,
                "notes": self.notes,
            }
        )

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def csv_rows(self):
        rows = []
        for name, m in self.margins.items():
            e = self.errors.get(name, np.zeros_like(m))
            for i, (mi, ei) in enumerate(zip(m, e)):
                rows.append([self.suite, name, i, fmt17(mi), fmt17(ei), "pass" if mi >= -ei else "fail"])
        return rows

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "index", "margin", "error", "status"])
        w.writerows(self.csv_rows())
        return buf.getvalue()

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{self.suite}: {status} (worst margin+error {self.worst():.3g})"


def table_to_csv(columns, rows):
    """CSV text for a numeric table; floats at 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt17(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def table_to_json(name, columns, rows, meta=None):
    payload = {
        "schema_version": SCHEMA_VERSION,
        "table": name,
        "columns": list(columns),
        "rows": _plain([list(r) for r in rows]),
        "meta": _plain(meta or {}),
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def read_csv_table(text):
    """Parse a table written by :func:`table_to_csv` back to floats."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = []
    for r in reader:
        out = []
        for v in r:
            try:
                out.append(float(v))
            except ValueError:
                out.append(v)
        rows.append(out)
    return header, rows

"""Relation reports: named identity checks with per-point residuals.

A report stores the evaluation points, the relative residual at each point,
the maximum residual and the tolerance it was judged against.  Residuals are
relative to scale = max(1, |LHS|, |RHS|) (for eigen-style identities the
operand magnitude is folded into the scale by the caller).  JSON
serialization keeps numbers as decimal strings at full precision, with a
fixed key order, so reports are byte-reproducible for a fixed configuration.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import mpmath as mp

SCHEMA_VERSION = "periodlab-report-1"


def residual_scale(*values) -> mp.mpf:
    """max(1, |v| for v in values) - the denominator of relative residuals."""
    s = mp.mpf(1)
    for v in values:
        a = abs(v)
        if a > s:
            s = a
    return s


def _numstr(x, dps: int = 30) -> str:
    return mp.nstr(mp.mpf(x) if not isinstance(x, mp.mpc) else x, dps)


def _point_pair(z) -> list:
    z = mp.mpc(z)
    return [_numstr(mp.re(z)), _numstr(mp.im(z))]


@dataclass(frozen=True)
class RelationReport:
    """Outcome of checking one named identity at a list of points."""

    identity: str
    points: tuple
    residuals: tuple
    tolerance: mp.mpf
    labels: tuple = ()

    @classmethod
    def from_residuals(
        cls,
        identity: str,
        points: Sequence,
        residuals: Sequence,
        tolerance,
        labels: Sequence[str] = (),
    ) -> "RelationReport":
        return cls(
            identity=identity,
            points=tuple(mp.mpc(p) for p in points),
            residuals=tuple(mp.mpf(r) for r in residuals),
            tolerance=mp.mpf(tolerance),
            labels=tuple(labels),
        )

    @classmethod
    def single(cls, identity: str, point, residual, tolerance) -> "RelationReport":
        return cls.from_residuals(identity, [point], [residual], tolerance)

    @property
    def max_residual(self) -> mp.mpf:
        return max(self.residuals) if self.residuals else mp.mpf(0)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = {
            "identity": self.identity,
            "points": [_point_pair(p) for p in self.points],
            "residuals": [_numstr(r, 15) for r in self.residuals],
            "max_residual": _numstr(self.max_residual, 15),
            "tolerance": _numstr(self.tolerance, 15),
            "pass": self.passed,
        }
        if self.labels:
            d["labels"] = list(self.labels)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.identity}: max residual "
            f"{_numstr(self.max_residual, 8)} (tol {_numstr(self.tolerance, 5)}, "
            f"{len(self.points)} points)"
        )


def reports_to_json(reports: Iterable[RelationReport], config: dict | None = None) -> str:
    payload = {
        "schema": SCHEMA_VERSION,
        "config": config or {},
        "reports": [r.to_dict() for r in reports],
        "all_pass": all(r.passed for r in reports),
    }
    return json.dumps(payload, indent=2)


def reports_to_csv(reports: Iterable[RelationReport], path: str) -> None:
    """Flat residual table (one row per point) for plotting."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["identity", "label", "re", "im", "residual", "tolerance", "pass"])
        for r in reports:
            labels: List[str] = list(r.labels) if r.labels else [""] * len(r.points)
            for p, res, lab in zip(r.points, r.residuals, labels):
                writer.writerow(
                    [
                        r.identity,
                        lab,
                        _numstr(mp.re(p)),
                        _numstr(mp.im(p)),
                        _numstr(res, 15),
                        _numstr(r.tolerance, 15),
                        str(bool(res <= r.tolerance)),
                    ]
                )

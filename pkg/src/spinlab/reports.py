"""Scenario configuration and machine-readable residual reports.

A scenario is a JSON-compatible description of one verification run: the
two factor curvatures, a catalog hypersurface with parameters, a sample
count and seed, optional tolerance overrides and an optional subset of
check names.  A report echoes the scenario and carries one record per
check with its anchor string, worst residual, tolerance and verdict.

Determinism contract: identical scenario + seed produce a byte-identical
JSON report except for the runtime field.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    name: str
    c1: float
    c2: float
    hypersurface: dict
    samples: int = 40
    seed: int = 0
    checks: list | None = None
    tolerances: dict = field(default_factory=dict)
    structure_pairing: str = "standard"

    @staticmethod
    def from_dict(d: dict) -> "Scenario":
        try:
            sc = Scenario(
                name=str(d["name"]),
                c1=float(d["c1"]),
                c2=float(d["c2"]),
                hypersurface=dict(d["hypersurface"]),
                samples=int(d.get("samples", 40)),
                seed=int(d.get("seed", 0)),
                checks=list(d["checks"]) if d.get("checks") is not None else None,
                tolerances={str(k): float(v)
                            for k, v in d.get("tolerances", {}).items()},
                structure_pairing=str(d.get("structure_pairing", "standard")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid scenario: {exc}") from exc
        sc.validate()
        return sc

    def validate(self):
        from .catalog import CATALOG
        if self.samples < 1:
            raise ScenarioError("sample count must be >= 1")
        if any(t <= 0 for t in self.tolerances.values()):
            raise ScenarioError("tolerances must be positive")
        kind = self.hypersurface.get("kind")
        if kind not in CATALOG:
            raise ScenarioError(f"unknown hypersurface kind {kind!r}")
        if self.structure_pairing not in ("standard", "flipped"):
            raise ScenarioError("structure_pairing must be standard or flipped")

    def to_dict(self) -> dict:
        return {
            "name": self.name, "c1": self.c1, "c2": self.c2,
            "hypersurface": self.hypersurface, "samples": self.samples,
            "seed": self.seed, "checks": self.checks,
            "tolerances": self.tolerances,
            "structure_pairing": self.structure_pairing,
        }


@dataclass
class CheckRecord:
    name: str
    anchor: str
    max_residual: float
    tolerance: float
    verdict: str  # "pass" | "fail" | "skip" | "recorded"
    points_evaluated: int = 0
    points_skipped: int = 0
    skip_reason: str = ""
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name, "anchor": self.anchor,
            "max_residual": self.max_residual, "tolerance": self.tolerance,
            "verdict": self.verdict,
            "points_evaluated": self.points_evaluated,
            "points_skipped": self.points_skipped,
            "skip_reason": self.skip_reason, "notes": self.notes,
        }


@dataclass
class ResidualReport:
    scenario: dict
    checks: list
    overall_verdict: str
    runtime_seconds: float
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            "scenario": self.scenario,
            "checks": [c.to_dict() if isinstance(c, CheckRecord) else c
                       for c in self.checks],
            "overall_verdict": self.overall_verdict,
            "runtime_seconds": self.runtime_seconds,
            "warnings": self.warnings,
        }

    @staticmethod
    def from_dict(d: dict) -> "ResidualReport":
        return ResidualReport(
            scenario=d["scenario"],
            checks=[CheckRecord(**c) for c in d["checks"]],
            overall_verdict=d["overall_verdict"],
            runtime_seconds=d["runtime_seconds"],
            warnings=list(d.get("warnings", [])),
        )

    @property
    def passed(self):
        return self.overall_verdict == "pass"


def tolerance_scale() -> float:
    """Global tolerance multiplier from SPINLAB_TOL_SCALE (CI knob)."""
    raw = os.environ.get("SPINLAB_TOL_SCALE", "")
    if not raw:
        return 1.0
    try:
        scale = float(raw)
    except ValueError as exc:
        raise ScenarioError(f"bad SPINLAB_TOL_SCALE {raw!r}") from exc
    if scale <= 0:
        raise ScenarioError("SPINLAB_TOL_SCALE must be positive")
    return scale


def emit_json(report: ResidualReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def emit_csv(report: ResidualReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "check", "anchor", "max_residual",
                     "tolerance", "verdict", "points_evaluated",
                     "points_skipped", "skip_reason"])
    name = report.scenario.get("name", "")
    for c in report.checks:
        writer.writerow([name, c.name, c.anchor, repr(c.max_residual),
                         repr(c.tolerance), c.verdict, c.points_evaluated,
                         c.points_skipped, c.skip_reason])
    return buf.getvalue()


def emit_text(report: ResidualReport) -> str:
    lines = []
    sc = report.scenario
    lines.append(f"scenario {sc.get('name')}  c1={sc.get('c1')} "
                 f"c2={sc.get('c2')}  hypersurface="
                 f"{sc.get('hypersurface', {}).get('kind')}  "
                 f"samples={sc.get('samples')} seed={sc.get('seed')}")
    for w in report.warnings:
        lines.append(f"  warning: {w}")
    for c in report.checks:
        mark = {"pass": "ok", "fail": "FAIL", "skip": "skip",
                "recorded": "info"}[c.verdict]
        line = (f"  [{mark:4s}] {c.name:34s} max={c.max_residual:.3e} "
                f"tol={c.tolerance:.1e} pts={c.points_evaluated}")
        if c.points_skipped:
            line += f" skipped={c.points_skipped}"
        lines.append(line)
        if c.verdict == "fail":
            lines.append(f"         anchor: {c.anchor}")
        if c.notes:
            lines.append(f"         notes: {json.dumps(c.notes, sort_keys=True)}")
    lines.append(f"overall: {report.overall_verdict}  "
                 f"({report.runtime_seconds:.2f} s)")
    return "\n".join(lines) + "\n"


def emit(report: ResidualReport, fmt: str) -> str:
    if fmt == "json":
        return emit_json(report)
    if fmt == "csv":
        return emit_csv(report)
    if fmt == "text":
        return emit_text(report)
    raise ScenarioError(f"unknown format {fmt!r}")

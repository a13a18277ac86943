"""Extinction/persistence classification against the analytic threshold.

The population persists if and only if r exceeds d lambda1 / m^2 + h, where
lambda1 is the principal Dirichlet eigenvalue of the reference domain and m
the final size of the habitat.  Everything here is closed-form arithmetic;
steady-state amplitudes are attached to sweeps only on request because each
one costs a Newton solve.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, replace

import numpy as np

from .eigen import principal_eigen_analytic
from .growth import GrowthFunction
from .solver import ModelParams
from . import steady as steady_mod

__all__ = [
    "Regime",
    "RegimeReport",
    "SweepEntry",
    "classify",
    "critical_harvest",
    "sweep",
    "write_sweep_csv",
    "SWEEP_AXES",
]

SWEEP_AXES = ("h", "r", "m", "d")


class Regime(enum.Enum):
    EXTINCTION = "Extinction"
    PERSISTENCE = "Persistence"


@dataclass
class RegimeReport:
    threshold: float          # d lambda1 / m^2 + h
    regime: Regime
    margin: float             # r - threshold; positive means persistence
    critical_harvest: float   # h* = r - d lambda1 / m^2; may be negative


def _lambda1(p: ModelParams, lambda1: float | None) -> float:
    if lambda1 is None:
        return principal_eigen_analytic(p.grid).lambda1
    if lambda1 <= 0.0:
        raise ValueError("lambda1 must be positive")
    return float(lambda1)


def classify(p: ModelParams, lambda1: float | None = None) -> RegimeReport:
    """Classify the parameters; the boundary case r == threshold is extinction."""
    lam = _lambda1(p, lambda1)
    threshold = p.d * lam / p.growth.m**2 + p.h
    margin = p.r - threshold
    regime = Regime.PERSISTENCE if margin > 0.0 else Regime.EXTINCTION
    return RegimeReport(threshold, regime, margin, p.r - p.d * lam / p.growth.m**2)


def critical_harvest(p: ModelParams, lambda1: float | None = None) -> float:
    """Harvest level h* above which (inclusive) the population dies out."""
    lam = _lambda1(p, lambda1)
    return p.r - p.d * lam / p.growth.m**2


@dataclass
class SweepEntry:
    value: float
    report: RegimeReport | None = None
    max_vstar: float | None = None
    error: str | None = None


def _with_axis(p: ModelParams, axis: str, value: float) -> ModelParams:
    if axis == "h":
        return replace(p, h=value)
    if axis == "r":
        return replace(p, r=value)
    if axis == "d":
        return replace(p, d=value)
    if axis == "m":
        if p.growth.family.value != "logistic":
            raise ValueError("m sweep requires logistic growth")
        return replace(p, growth=GrowthFunction.logistic(p.growth.k, value))
    raise ValueError(f"unknown sweep axis {axis!r} (expected one of {SWEEP_AXES})")


def sweep(
    p: ModelParams,
    axis: str,
    values,
    lambda1: float | None = None,
    attach_steady: bool = False,
    steady_tol: float = 1e-11,
) -> list:
    """One RegimeReport per value; invalid values become per-entry errors.

    With attach_steady, each persistent entry also records the maximum of
    the Newton steady state (0 for extinction entries).
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r} (expected one of {SWEEP_AXES})")
    lam = _lambda1(p, lambda1)
    entries = []
    for value in values:
        value = float(value)
        if not np.isfinite(value):
            entries.append(SweepEntry(value, error="value must be finite"))
            continue
        try:
            pv = _with_axis(p, axis, value)
            report = classify(pv, lam)
        except ValueError as exc:
            entries.append(SweepEntry(value, error=str(exc)))
            continue
        entry = SweepEntry(value, report=report)
        if attach_steady:
            if report.regime is Regime.PERSISTENCE:
                entry.max_vstar = float(np.max(steady_mod.solve_steady(pv, tol=steady_tol).field.values))
            else:
                entry.max_vstar = 0.0
        entries.append(entry)
    return entries


def write_sweep_csv(entries, axis: str, path, attach_steady: bool = False) -> None:
    header = [axis, "threshold", "regime", "margin", "critical_harvest"]
    if attach_steady:
        header.append("max_vstar")
    header.append("error")
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for e in entries:
            if e.report is None:
                row = [repr(e.value)] + [""] * (len(header) - 2) + [e.error or ""]
            else:
                row = [
                    repr(e.value),
                    "%.17g" % e.report.threshold,
                    e.report.regime.value,
                    "%.17g" % e.report.margin,
                    "%.17g" % e.report.critical_harvest,
                ]
                if attach_steady:
                    row.append("" if e.max_vstar is None else "%.17g" % e.max_vstar)
                row.append("")
            w.writerow(row)

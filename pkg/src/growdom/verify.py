"""Numerical checks of the ordering machinery behind the long-time results.

Three harnesses:

  * check_comparison: ordered initial data must stay ordered under the flow;
  * check_laplacian_sign: concave-type initial data (discrete Laplacian
    nonpositive, boundary compatible) must keep a nonpositive Laplacian;
  * sandwich_run: a solution squeezed between scaled eigenfunction
    envelopes must converge together with them to the common steady state.

Checks are evaluated at snapshot times only; ordering violations of a
parabolic flow grow rather than flicker, so snapshots do not miss them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import Regime, classify as classify_params
from . import steady as steady_mod
from .eigen import EigenPair, principal_eigen_analytic
from .grids import FLOAT_FMT, Field, Grid, laplacian, sup_norm
from .solver import ModelParams, integrate

__all__ = [
    "EnvelopePair",
    "make_envelopes",
    "ComparisonReport",
    "check_comparison",
    "LaplacianSignReport",
    "check_laplacian_sign",
    "SandwichReport",
    "sandwich_run",
    "random_ordered_pair",
    "CHECK_NAMES",
]

CHECK_NAMES = ("comparison", "laplacian-sign", "sandwich")


@dataclass
class EnvelopePair:
    """Amplitudes M, delta with delta*phi <= v0 <= M*phi at every node."""

    upper_amplitude: float
    lower_amplitude: float
    eigenpair: EigenPair


def make_envelopes(v0: Field, e: EigenPair, margin: float = 0.01) -> EnvelopePair:
    """Tightest amplitudes bracketing v0 by the eigenfunction, then a margin.

    The upper amplitude is inflated and the lower deflated by the given
    fraction.  If v0 vanishes at a node where phi is positive, no positive
    lower amplitude is valid and delta = 0 is returned.
    """
    vals = v0.values
    if np.min(vals) < 0.0:
        raise ValueError("envelope construction requires v0 >= 0")
    phi = e.phi.values
    pos = phi > 0.0
    ratio = vals[pos] / phi[pos]
    M = (1.0 + margin) * float(np.max(ratio)) if ratio.size else 0.0
    if np.any(vals[pos] <= 0.0):
        delta = 0.0
    else:
        delta = (1.0 - margin) * float(np.min(ratio))
    return EnvelopePair(M, delta, e)


@dataclass
class ComparisonReport:
    passed: bool
    max_violation: float
    time_of_max: float
    node_of_max: tuple
    times: np.ndarray
    violations: np.ndarray
    tolerance: float

    def text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"comparison: {status}  max violation {self.max_violation:.3e} "
            f"(tolerance {self.tolerance:.1e}) at t={self.time_of_max:.6g}, "
            f"node {self.node_of_max}"
        )


def check_comparison(
    v0_low: Field,
    v0_high: Field,
    p: ModelParams,
    t_end: float,
    dt: float,
    snapshot_every: int = 25,
    tolerance: float = 1e-10,
) -> ComparisonReport:
    """Integrate both states with identical stepping and check the ordering."""
    if v0_low.grid != v0_high.grid:
        raise ValueError("fields live on different grids")
    if np.any(v0_low.values > v0_high.values):
        raise ValueError("precondition failed: v0_low must not exceed v0_high anywhere")
    lo = integrate(v0_low, t_end, dt, p, snapshot_every=snapshot_every)
    hi = integrate(v0_high, t_end, dt, p, snapshot_every=snapshot_every)
    times = lo.snapshot_times
    violations = np.empty(times.size)
    worst = -np.inf
    t_worst, node_worst = 0.0, ()
    for i, (a, b) in enumerate(zip(lo.snapshots, hi.snapshots)):
        gap = a.values - b.values
        violations[i] = max(float(np.max(gap)), 0.0)
        if violations[i] > worst:
            worst = violations[i]
            t_worst = float(times[i])
            node_worst = np.unravel_index(int(np.argmax(gap)), gap.shape)
    return ComparisonReport(
        passed=bool(worst <= tolerance),
        max_violation=float(worst),
        time_of_max=t_worst,
        node_of_max=tuple(int(i) for i in node_worst),
        times=times,
        violations=violations,
        tolerance=tolerance,
    )


def _near_boundary_mask(grid: Grid) -> np.ndarray:
    mask = np.zeros(grid.shape, dtype=bool)
    for a, n in enumerate(grid.npoints):
        idx = [slice(None)] * grid.dim
        idx[a] = 0
        mask[tuple(idx)] = True
        idx[a] = n - 1
        mask[tuple(idx)] = True
    return mask


@dataclass
class LaplacianSignReport:
    passed: bool
    max_excess: float          # max over snapshots of (max lap - tolerance)
    times: np.ndarray
    max_lap_interior: np.ndarray
    max_lap_near_boundary: np.ndarray
    tolerances: np.ndarray

    def text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"laplacian-sign: {status}  worst excess over tolerance {self.max_excess:.3e}; "
            f"peak interior {np.max(self.max_lap_interior):.3e}, "
            f"peak near-boundary {np.max(self.max_lap_near_boundary):.3e}"
        )


def check_laplacian_sign(
    v0: Field,
    p: ModelParams,
    t_end: float,
    dt: float,
    tol_factor: float = 1e-8,
    snapshot_every: int = 25,
) -> LaplacianSignReport:
    """Track the sign of the discrete Laplacian along the flow.

    Refuses to run unless the initial Laplacian is nonpositive everywhere.
    At each snapshot the tolerance is tol_factor * sup|v| (an absolute
    tolerance would pass vacuously once v decays).  Near-boundary nodes are
    recorded separately from deep-interior ones since the compatibility
    hypothesis is only approximate on a finite grid.
    """
    lap0 = laplacian(v0).values
    if float(np.max(lap0)) > 0.0:
        raise ValueError(
            "precondition failed: initial field has sign-changing discrete Laplacian"
        )
    traj = integrate(v0, t_end, dt, p, snapshot_every=snapshot_every)
    near = _near_boundary_mask(v0.grid)
    interior = ~near
    times = traj.snapshot_times
    max_int = np.empty(times.size)
    max_nb = np.empty(times.size)
    tols = np.empty(times.size)
    excess = -np.inf
    for i, snap in enumerate(traj.snapshots):
        lap = laplacian(snap).values
        max_int[i] = float(np.max(lap[interior])) if interior.any() else -np.inf
        max_nb[i] = float(np.max(lap[near]))
        tols[i] = tol_factor * sup_norm(snap)
        excess = max(excess, float(np.max(lap)) - tols[i])
    return LaplacianSignReport(
        passed=bool(excess <= 0.0),
        max_excess=float(excess),
        times=times,
        max_lap_interior=max_int,
        max_lap_near_boundary=max_nb,
        tolerances=tols,
    )


@dataclass
class SandwichReport:
    passed: bool
    ordering_ok: bool
    max_ordering_violation: float
    final_mutual_distance: float
    steady_distance: float
    times: np.ndarray
    mutual_distances: np.ndarray
    mutual_tol: float

    def text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"sandwich: {status}  final mutual distance {self.final_mutual_distance:.3e} "
            f"(tolerance {self.mutual_tol:.1e}), ordering violation "
            f"{self.max_ordering_violation:.3e}, distance to Newton steady state "
            f"{self.steady_distance:.3e}"
        )


def sandwich_run(
    v0: Field,
    p: ModelParams,
    t_end: float,
    dt: float,
    envelopes: EnvelopePair | None = None,
    mutual_tol: float = 5e-3,
    ordering_tol: float = 1e-10,
    snapshot_every: int = 25,
) -> SandwichReport:
    """Squeeze v0 between eigenfunction envelopes and follow all three states.

    Requires the persistence regime and a strictly positive lower envelope
    (otherwise the lower trajectory is stuck at zero and cannot share the
    limit).  Passes when the ordering low <= mid <= high holds at every
    snapshot and the three states end within mutual_tol of each other.
    """
    report = classify_params(p)
    if report.regime is not Regime.PERSISTENCE:
        raise ValueError("sandwich_run requires the persistence regime")
    if np.min(v0.values) < 0.0 or sup_norm(v0) == 0.0:
        raise ValueError("v0 must be nonnegative and nontrivial")
    if envelopes is None:
        envelopes = make_envelopes(v0, principal_eigen_analytic(v0.grid))
    if envelopes.lower_amplitude <= 0.0:
        raise ValueError(
            "lower envelope amplitude is zero (v0 vanishes somewhere); "
            "a strictly positive v0 is required"
        )
    phi = envelopes.eigenpair.phi.values
    trios = [
        Field(v0.grid, envelopes.lower_amplitude * phi),
        v0.copy(),
        Field(v0.grid, envelopes.upper_amplitude * phi),
    ]
    trajs = [integrate(f, t_end, dt, p, snapshot_every=snapshot_every) for f in trios]
    times = trajs[0].snapshot_times
    mutual = np.empty(times.size)
    worst_order = -np.inf
    for i in range(times.size):
        lo = trajs[0].snapshots[i].values
        mid = trajs[1].snapshots[i].values
        hi = trajs[2].snapshots[i].values
        worst_order = max(worst_order, float(np.max(lo - mid)), float(np.max(mid - hi)))
        mutual[i] = max(
            float(np.max(np.abs(lo - mid))),
            float(np.max(np.abs(mid - hi))),
            float(np.max(np.abs(lo - hi))),
        )
    worst_order = max(worst_order, 0.0)
    vstar = steady_mod.solve_steady(p).field.values
    steady_dist = float(np.max(np.abs(trajs[1].snapshots[-1].values - vstar)))
    ordering_ok = worst_order <= ordering_tol
    return SandwichReport(
        passed=bool(ordering_ok and mutual[-1] < mutual_tol),
        ordering_ok=bool(ordering_ok),
        max_ordering_violation=float(worst_order),
        final_mutual_distance=float(mutual[-1]),
        steady_distance=steady_dist,
        times=times,
        mutual_distances=mutual,
        mutual_tol=mutual_tol,
    )


def _sine_poly_axis(y: np.ndarray, L: float, rng: np.random.Generator, amplitude: float) -> np.ndarray:
    """Random positive combination of the first four sine modes on (0, L).

    The higher-mode weights satisfy sum_j j |a_j| < a_1, which forces
    positivity via |sin(j t)| <= j sin(t).  Pure sine polynomials are exact
    discrete eigenvector combinations, i.e. smooth Dirichlet-compatible
    data of the kind the ordering theory assumes.
    """
    weights = np.array([0.15, 0.08, 0.04])
    u = rng.uniform(-1.0, 1.0, size=weights.size)
    out = np.sin(np.pi * y / L)
    for j, (w, uj) in enumerate(zip(weights, u), start=2):
        out += w * uj * np.sin(j * np.pi * y / L)
    return amplitude * out


def random_ordered_pair(
    grid: Grid,
    rng: np.random.Generator,
    low_amplitude: tuple = (0.2, 1.0),
    gap_amplitude: tuple = (0.05, 0.5),
) -> tuple:
    """Sample a random pair of smooth fields with v_low <= v_high pointwise."""
    def sample(amp_range):
        amp = rng.uniform(*amp_range)
        parts = [
            _sine_poly_axis(grid.axis(a), grid.extents[a], rng, 1.0)
            for a in range(grid.dim)
        ]
        vals = parts[0] if grid.dim == 1 else np.outer(parts[0], parts[1])
        return amp * vals

    low = sample(low_amplitude)
    high = low + sample(gap_amplitude)
    return Field(grid, low), Field(grid, high)


def write_violations_csv(report, path) -> None:
    """Violation magnitudes over time for any of the three reports."""
    with open(path, "w") as f:
        if isinstance(report, ComparisonReport):
            f.write("t,violation\n")
            for t, v in zip(report.times, report.violations):
                f.write(f"{FLOAT_FMT % t},{FLOAT_FMT % v}\n")
        elif isinstance(report, LaplacianSignReport):
            f.write("t,max_lap_interior,max_lap_near_boundary,tolerance\n")
            for t, a, b, tol in zip(
                report.times,
                report.max_lap_interior,
                report.max_lap_near_boundary,
                report.tolerances,
            ):
                f.write(f"{FLOAT_FMT % t},{FLOAT_FMT % a},{FLOAT_FMT % b},{FLOAT_FMT % tol}\n")
        elif isinstance(report, SandwichReport):
            f.write("t,mutual_distance\n")
            for t, m in zip(report.times, report.mutual_distances):
                f.write(f"{FLOAT_FMT % t},{FLOAT_FMT % m}\n")
        else:
            raise TypeError(f"unknown report type {type(report).__name__}")

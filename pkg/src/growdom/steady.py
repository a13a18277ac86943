"""Positive steady state of the fully grown habitat.

Solves the limiting elliptic problem

    (d / m^2) lap(v) + r v (1 - v/K) - h v = 0,   v = 0 on the boundary,

by damped Newton iteration.  Below the persistence threshold the zero field
is the only nonnegative solution, so the solver short-circuits to it
instead of asking Newton for a positive state that does not exist.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.sparse import diags, identity, kron
from scipy.sparse.linalg import splu

from .eigen import principal_eigen_analytic
from .grids import Field, laplacian
from .solver import ModelParams

__all__ = ["SteadyRegime", "SteadyResult", "SteadyError", "solve_steady", "residual", "summary_line"]


class SteadyRegime(enum.Enum):
    TRIVIAL = "Trivial"
    POSITIVE = "Positive"


class SteadyError(RuntimeError):
    """Newton stagnation or a converged state violating positivity."""

    def __init__(self, message: str, residual_history: list):
        super().__init__(message)
        self.residual_history = residual_history


@dataclass
class SteadyResult:
    field: Field
    residual: float
    newton_iters: int
    regime: SteadyRegime


def residual(v: Field, p: ModelParams) -> float:
    """Sup norm of the discrete elliptic residual; zero for exact solutions."""
    return float(np.max(np.abs(_residual_values(v.values, v.grid, p))))


def _residual_values(vals: np.ndarray, grid, p: ModelParams) -> np.ndarray:
    D = p.d / p.growth.m**2
    lap = laplacian(Field(grid, vals)).values
    return D * lap + p.r * vals * (1.0 - vals / p.K) - p.h * vals


def _solve_jacobian(grid, D: float, diag_vals: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (D lap + diag) delta = rhs; banded in 1D, sparse LU in 2D."""
    if grid.dim == 1:
        n = grid.npoints[0]
        dy = grid.spacing[0]
        off = D / dy**2
        ab = np.zeros((3, n))
        ab[0, 1:] = off
        ab[1, :] = diag_vals - 2.0 * off
        ab[2, :-1] = off
        return solve_banded((1, 1), ab, rhs)
    n1, n2 = grid.npoints
    dy0, dy1 = grid.spacing
    L0 = diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n1, n1)) / dy0**2
    L1 = diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n2, n2)) / dy1**2
    A = D * (kron(L0, identity(n2)) + kron(identity(n1), L1)) + diags(diag_vals.ravel())
    return splu(A.tocsc()).solve(rhs.ravel()).reshape(grid.shape)


def solve_steady(p: ModelParams, tol: float = 1e-11, max_iter: int = 30) -> SteadyResult:
    """Return the positive steady state, or the zero field below threshold.

    Newton starts at A * phi with A = K (1 - (h + d lambda1 / m^2) / r), the
    amplitude a one-mode projection predicts, which keeps the iteration on
    the positive branch.  Each step is damped: the update is halved until
    the residual decreases (at most 20 halvings, then SteadyError with the
    residual history).  Convergence to a field with a nonpositive interior
    node is also an error: it would contradict the expected positive state.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    grid = p.grid
    pair = principal_eigen_analytic(grid)
    threshold = p.d * pair.lambda1 / p.growth.m**2 + p.h
    if p.r <= threshold:
        return SteadyResult(Field.zeros(grid), 0.0, 0, SteadyRegime.TRIVIAL)

    D = p.d / p.growth.m**2
    amp = p.K * (1.0 - (p.h + p.d * pair.lambda1 / p.growth.m**2) / p.r)
    v = amp * pair.phi.values
    history = []
    for it in range(max_iter):
        F = _residual_values(v, grid, p)
        res = float(np.max(np.abs(F)))
        history.append(res)
        if res < tol:
            if np.min(v) <= 0.0:
                raise SteadyError(
                    "converged to a state with a nonpositive interior node", history
                )
            return SteadyResult(Field(grid, v), res, it, SteadyRegime.POSITIVE)
        diag_vals = p.r - p.h - 2.0 * p.r * v / p.K
        delta = _solve_jacobian(grid, D, diag_vals, -F)
        s = 1.0
        for _ in range(20):
            trial = v + s * delta
            if float(np.max(np.abs(_residual_values(trial, grid, p)))) < res:
                break
            s *= 0.5
        else:
            raise SteadyError("Newton stagnated: 20 damping halvings without progress", history)
        v = v + s * delta
    raise SteadyError(f"Newton did not converge in {max_iter} iterations", history)


def summary_line(result: SteadyResult) -> str:
    return (
        f"{result.regime.value}, residual {result.residual:.3e}, "
        f"{result.newton_iters} iterations, max {float(np.max(result.field.values)):.6f}"
    )

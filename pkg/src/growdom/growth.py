"""Domain growth functions and the map between fixed and growing coordinates.

The habitat expands isotropically: a reference point y is carried to
x = rho(t) * y, where rho is a scalar growth function with rho(0) = 1 and
rho nondecreasing.  Two families are supported: a saturating logistic
profile rho(t) = m / (1 + (m - 1) exp(-k t)) that grows from 1 to m, and a
constant profile rho == 1 that reduces everything to the fixed-domain
problem.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .grids import Field

__all__ = ["GrowthFamily", "GrowthFunction", "pushforward"]


class GrowthFamily(enum.Enum):
    LOGISTIC = "logistic"
    CONSTANT = "constant"


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("time must be nonnegative")
    return t


@dataclass(frozen=True)
class GrowthFunction:
    """Growth profile rho(t) with closed-form derivative.

    k is the expansion rate (1/time) and m the saturation factor; the
    constant family fixes k = 0, m = 1.  The exponentials are written in
    terms of exp(-k t) so large times neither overflow nor lose the
    saturation limit.
    """

    family: GrowthFamily
    k: float = 0.0
    m: float = 1.0

    def __post_init__(self):
        if self.family is GrowthFamily.LOGISTIC:
            if self.k <= 0.0:
                raise ValueError("logistic growth requires k > 0")
            if self.m <= 1.0:
                raise ValueError("m must exceed 1 for logistic growth")
        elif self.family is GrowthFamily.CONSTANT:
            if self.m != 1.0:
                raise ValueError("constant growth fixes m = 1")

    @classmethod
    def logistic(cls, k: float, m: float) -> "GrowthFunction":
        return cls(GrowthFamily.LOGISTIC, k=float(k), m=float(m))

    @classmethod
    def constant(cls) -> "GrowthFunction":
        return cls(GrowthFamily.CONSTANT, k=0.0, m=1.0)

    def rho(self, t):
        """Growth factor rho(t), always in [1, m]."""
        t = _check_time(t)
        if self.family is GrowthFamily.CONSTANT:
            return np.ones_like(t) if t.ndim else 1.0
        e = np.exp(-self.k * t)
        out = self.m / (1.0 + (self.m - 1.0) * e)
        return out if t.ndim else float(out)

    def rho_dot(self, t):
        """Closed-form derivative d(rho)/dt, nonnegative and vanishing at infinity."""
        t = _check_time(t)
        if self.family is GrowthFamily.CONSTANT:
            return np.zeros_like(t) if t.ndim else 0.0
        e = np.exp(-self.k * t)
        out = self.k * self.m * (self.m - 1.0) * e / (1.0 + (self.m - 1.0) * e) ** 2
        return out if t.ndim else float(out)

    def rho_dot_over_rho(self, t):
        """Relative expansion rate rho'(t)/rho(t) = k (1 - rho(t)/m)."""
        t = _check_time(t)
        if self.family is GrowthFamily.CONSTANT:
            return np.zeros_like(t) if t.ndim else 0.0
        e = np.exp(-self.k * t)
        out = self.k * (self.m - 1.0) * e / (1.0 + (self.m - 1.0) * e)
        return out if t.ndim else float(out)

    def dilution_rate(self, t, ndim: int):
        """Volume dilution rate ndim * rho'(t)/rho(t) felt by a density."""
        return ndim * self.rho_dot_over_rho(t)

    def dilution_factor(self, t0: float, t1: float, ndim: int) -> float:
        """Exact density multiplier (rho(t0)/rho(t1))**ndim over [t0, t1].

        Integrates the dilution term in closed form; for the dilution-only
        dynamics v' = -ndim (rho'/rho) v this factor telescopes to the exact
        solution v0 / rho(t)**ndim.
        """
        if t1 < t0:
            raise ValueError("t1 must be >= t0")
        return float((self.rho(t0) / self.rho(t1)) ** ndim)


def pushforward(v: Field, g: GrowthFunction, t: float):
    """Sample the solution on the physically growing domain.

    Returns (coords, values): per-axis node coordinates scaled by rho(t),
    and an unchanged copy of the node values.  This is the change of
    variables u(x, t) = v(x / rho(t), t), a pure relabeling of coordinates.
    """
    scale = g.rho(t)
    coords = tuple(scale * v.grid.axis(a) for a in range(v.grid.dim))
    return coords, v.values.copy()

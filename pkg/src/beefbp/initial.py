"""Initial mass distributions: radial CDF sampling for the solver, iid draws for MC.

Each measure induces v0(x) = mass strictly inside the ball of radius x. Node
samples use the right-continuous convention at jump points, matching the
inf-definition of the initial boundary radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .grids import GridFunction, RadialGrid
from .steady import SteadyState, compute_steady, eval_V

KINDS = (
    "uniform_ball",
    "sphere_shell",
    "indicator_step",
    "constant_one",
    "table",
    "steady_V",
)


@dataclass
class InitialMeasure:
    kind: str
    dim: int
    radius: float = 1.0
    c: float = 1.0
    K: float = 1.0
    table_x: Optional[np.ndarray] = None
    table_v: Optional[np.ndarray] = None
    _steady: Optional[SteadyState] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown initial measure kind {self.kind!r}")
        if self.dim < 1 or int(self.dim) != self.dim:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if self.kind in ("uniform_ball", "sphere_shell") and not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.kind == "indicator_step":
            if not (0.0 < self.c <= 1.0):
                raise ValueError(f"indicator_step requires c in (0,1], got {self.c}")
            if not self.K > 0:
                raise ValueError(f"indicator_step requires K > 0, got {self.K}")
        if self.kind == "table":
            x = np.asarray(self.table_x, dtype=float)
            v = np.asarray(self.table_v, dtype=float)
            if x.ndim != 1 or x.shape != v.shape or x.size < 2:
                raise ValueError("table requires matching 1-d x and v arrays")
            if np.any(np.diff(x) <= 0) or np.any(np.diff(v) < 0):
                raise ValueError("table x must increase and v must be non-decreasing")
            if v[0] != 0.0 or np.any(v < 0) or np.any(v > 1):
                raise ValueError("table v must start at 0 and stay in [0,1]")
            self.table_x, self.table_v = x, v

    def steady(self) -> SteadyState:
        if self._steady is None:
            object.__setattr__(self, "_steady", compute_steady(self.dim))
        return self._steady

    def support_radius(self) -> float:
        """Radius carrying all the mass; inf for kinds without a finite measure."""
        if self.kind == "uniform_ball" or self.kind == "sphere_shell":
            return self.radius
        if self.kind == "indicator_step":
            return self.K
        if self.kind == "steady_V":
            return self.steady().R_inf
        if self.kind == "table":
            return float(self.table_x[-1])
        return np.inf  # constant_one is barrier data, not a measure

    def v0(self, x) -> np.ndarray:
        """Right-continuous radial CDF samples."""
        x = np.asarray(x, dtype=float)
        if self.kind == "uniform_ball":
            return np.minimum((x / self.radius) ** self.dim, 1.0)
        if self.kind == "sphere_shell":
            return np.where(x >= self.radius, 1.0, 0.0)
        if self.kind == "indicator_step":
            return np.where(x >= self.K, self.c, 0.0)
        if self.kind == "constant_one":
            return np.ones_like(x)
        if self.kind == "steady_V":
            return eval_V(self.steady(), x)
        return np.interp(x, self.table_x, self.table_v, right=float(self.table_v[-1]))

    def total_mass(self) -> float:
        return float(self.v0(np.asarray(np.inf))) if self.kind != "table" else float(
            self.table_v[-1]
        )

    def samplable(self) -> bool:
        if self.kind in ("uniform_ball", "sphere_shell", "steady_V"):
            return True
        if self.kind == "indicator_step":
            return self.c == 1.0
        if self.kind == "table":
            return float(self.table_v[-1]) == 1.0
        return False

    def sample_radii(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if not self.samplable():
            raise ValueError(
                f"kind {self.kind!r} does not define a samplable probability measure"
            )
        if self.kind == "uniform_ball":
            return self.radius * rng.random(n) ** (1.0 / self.dim)
        if self.kind == "sphere_shell":
            return np.full(n, self.radius)
        if self.kind == "indicator_step":
            return np.full(n, self.K)
        if self.kind == "steady_V":
            s = self.steady()
            xs = np.linspace(0.0, s.R_inf, 4097)
            return np.interp(rng.random(n), eval_V(s, xs), xs)
        return np.interp(rng.random(n), self.table_v, self.table_x)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n iid positions in R^d: radius by inverse CDF, direction uniform."""
        r = self.sample_radii(n, rng)
        g = rng.standard_normal((n, self.dim))
        norms = np.linalg.norm(g, axis=1)
        norms[norms == 0.0] = 1.0
        return g * (r / norms)[:, None]


def uniform_ball(radius: float, dim: int) -> InitialMeasure:
    return InitialMeasure(kind="uniform_ball", dim=dim, radius=radius)


def sphere_shell(radius: float, dim: int) -> InitialMeasure:
    return InitialMeasure(kind="sphere_shell", dim=dim, radius=radius)


def indicator_step(c: float, K: float, dim: int) -> InitialMeasure:
    return InitialMeasure(kind="indicator_step", dim=dim, c=c, K=K)


def constant_one(dim: int) -> InitialMeasure:
    return InitialMeasure(kind="constant_one", dim=dim)


def steady_V(dim: int) -> InitialMeasure:
    return InitialMeasure(kind="steady_V", dim=dim)


def table_measure(x, v, dim: int) -> InitialMeasure:
    return InitialMeasure(kind="table", dim=dim, table_x=np.asarray(x), table_v=np.asarray(v))


def make_v0(m: InitialMeasure, grid: RadialGrid) -> GridFunction:
    """Sample v0 on the grid; errors if a finite support exceeds x_max."""
    sup = m.support_radius()
    if np.isfinite(sup) and sup > grid.x_max:
        raise ValueError(
            f"support radius {sup} of initial measure exceeds grid x_max {grid.x_max}"
        )
    vals = np.asarray(m.v0(grid.nodes), dtype=float)
    return GridFunction(grid, vals, beyond_right=float(m.v0(np.asarray(np.inf))))

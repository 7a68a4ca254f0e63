"""Uniform radial grids on [0, x_max] and sampled functions on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid with nodes x_i = i * spacing, i = 0..n."""

    x_max: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.x_max) and self.x_max > 0):
            raise ValueError(f"x_max must be positive and finite, got {self.x_max}")
        if self.n < 2:
            raise ValueError(f"need at least 2 cells, got n={self.n}")

    @property
    def spacing(self) -> float:
        return self.x_max / self.n

    @property
    def nodes(self) -> np.ndarray:
        # x_0 = 0 exactly, x_n = x_max exactly
        return np.linspace(0.0, self.x_max, self.n + 1)

    @classmethod
    def from_spacing(cls, x_max: float, spacing: float) -> "RadialGrid":
        n = int(round(x_max / spacing))
        return cls(x_max=n * spacing, n=n)


@dataclass
class GridFunction:
    """Node samples of a function on a RadialGrid, constant beyond_right of x_max."""

    grid: RadialGrid
    values: np.ndarray
    beyond_right: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n + 1,):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid with "
                f"{self.grid.n + 1} nodes"
            )

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.copy(), self.beyond_right)

    def __call__(self, x) -> np.ndarray:
        """Piecewise-linear interpolation, constant extension beyond x_max."""
        x = np.asarray(x, dtype=float)
        return np.interp(x, self.grid.nodes, self.values, right=self.beyond_right)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_monotone(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.diff(self.values) >= -tol))

    def require_probability_profile(self, tol: float = 1e-12):
        """Check the [0,1] range and v(0)=0 convention for evolved profiles."""
        v = self.values
        if v[0] > tol:
            raise ValueError(f"profile must vanish at x=0, got {v[0]}")
        if np.min(v) < -tol or np.max(v) > 1.0 + tol:
            raise ValueError("profile values must lie in [0, 1]")


def sup_distance(f: GridFunction, g: GridFunction) -> float:
    if f.grid != g.grid:
        raise ValueError("grid mismatch")
    return float(np.max(np.abs(f.values - g.values)))

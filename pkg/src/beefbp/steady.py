"""Stationary profile of the obstacle problem: Bessel constants and evaluators.

The steady radial CDF is V(x) = alpha x^{d/2} J_{d/2}(x) up to its first local
maximum R_inf, then 1. R_inf is the first positive zero of J_{d/2-1} (via
d/dx[x^nu J_nu] = x^nu J_{nu-1}), Z the first positive zero of J_{d/2}, and the
relaxation rate is lambda = Z^2/R_inf^2 - 1. The density profile is
U(r) = V'(r)/(d omega_d r^{d-1}) inside the ball, 0 outside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


class SteadyRootError(RuntimeError):
    """Root bracketing for R_inf or Z failed on the scanned interval."""


_SERIES_KMAX = 300


def _bessel_series(nu: float, x: np.ndarray) -> np.ndarray:
    """Ascending power series; longdouble accumulation past x=8 where the
    alternating sum cancels ~8 digits in float64."""
    out = np.empty(x.shape, dtype=float)
    for big in (False, True):
        mask = (x > 8.0) == big
        if not mask.any():
            continue
        dt = np.longdouble if big else np.float64
        xs = x[mask].astype(dt)
        half = xs / dt(2.0)
        q = half * half
        term = np.exp(nu * np.log(half) - dt(math.lgamma(nu + 1.0)))
        acc = term.copy()
        for k in range(_SERIES_KMAX):
            term = -term * q / dt((k + 1.0) * (nu + k + 1.0))
            acc += term
            if np.max(np.abs(term) / (np.abs(acc) + dt(1e-290))) < 5e-20:
                break
        out[mask] = acc.astype(np.float64)
    return out


def _bessel_trig(nu: float, x: np.ndarray) -> np.ndarray:
    """Closed trigonometric forms for half-integer orders via upward recurrence.

    Stable for x >= nu + 2 (and for nu <= 1/2 at any x > 0)."""
    pref = np.sqrt(2.0 / (np.pi * x))
    prev = pref * np.cos(x)  # order -1/2
    cur = pref * np.sin(x)  # order +1/2
    if nu == -0.5:
        return prev
    order = 0.5
    while order < nu - 1e-9:
        cur, prev = (2.0 * order / x) * cur - prev, cur
        order += 1.0
    return cur


def _bessel_any(nu: float, x) -> np.ndarray:
    """J_nu for 2*nu integer, nu >= -1/2; array x >= 0 (x > 0 when nu < 0)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros(x.shape, dtype=float)
    pos = x > 0.0
    if np.any(~pos):
        if nu < 0:
            raise ValueError("x must be positive for negative orders")
        out[~pos] = 1.0 if nu == 0 else 0.0
    if pos.any():
        xp = x[pos]
        halfint = int(round(2 * nu)) % 2 == 1
        if halfint and nu <= 0.5:
            out[pos] = _bessel_trig(nu, xp)
        elif halfint:
            vals = np.empty(xp.shape)
            trig = xp >= nu + 2.0
            if trig.any():
                vals[trig] = _bessel_trig(nu, xp[trig])
            if (~trig).any():
                vals[~trig] = _bessel_series(nu, xp[~trig])
            out[pos] = vals
        else:
            out[pos] = _bessel_series(nu, xp)
    return out[0] if scalar else out


def bessel_j(nu: float, x):
    """Bessel J_nu for half-integer or integer nu >= 1/2; x >= 0, scalar or array."""
    if nu < 0.5 or int(round(2 * nu)) != 2 * nu:
        raise ValueError(f"order must be a half-integer or integer >= 1/2, got {nu}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError("x must be nonnegative and finite")
    res = _bessel_any(float(nu), x)
    return float(res) if x.ndim == 0 else res


@dataclass(frozen=True)
class SteadyState:
    """Dimension constants of the stationary solution."""

    dim: int
    R_inf: float
    Z: float
    alpha: float
    lam: float
    omega_d: float

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "R_inf": self.R_inf,
            "Z": self.Z,
            "alpha": self.alpha,
            "lambda": self.lam,
            "omega_d": self.omega_d,
        }


def _first_zero(nu: float, scan_to: float = 20.0, step: float = 0.1) -> float:
    """First positive zero of J_nu, bracketed by a fixed-step scan."""
    f = lambda s: float(_bessel_any(nu, s))
    lo = 0.05
    flo = f(lo)
    s = lo
    while s < scan_to:
        s_next = s + step
        fs = f(s_next)
        if flo > 0.0 and fs <= 0.0:
            return brentq(f, s, s_next, xtol=1e-14, rtol=8.9e-16, maxiter=200)
        s, flo = s_next, fs
    raise SteadyRootError(
        f"no sign change of J_{nu} found scanning ({lo}, {scan_to}) at step {step}"
    )


def unit_ball_volume(dim: int) -> float:
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)


def compute_steady(dim: int) -> SteadyState:
    """Locate R_inf, Z and assemble the stationary constants for 1 <= dim <= 10."""
    if not (1 <= dim <= 10) or int(dim) != dim:
        raise ValueError(f"dim must be an integer in [1, 10], got {dim}")
    nu = dim / 2.0
    R_inf = _first_zero(nu - 1.0)
    Z = _first_zero(nu)
    if not (0.0 < R_inf < Z):
        raise SteadyRootError(f"root ordering violated: R_inf={R_inf}, Z={Z}")
    alpha = 1.0 / (R_inf**nu * float(_bessel_any(nu, R_inf)))
    lam = (Z / R_inf) ** 2 - 1.0
    return SteadyState(
        dim=int(dim),
        R_inf=float(R_inf),
        Z=float(Z),
        alpha=float(alpha),
        lam=float(lam),
        omega_d=unit_ball_volume(int(dim)),
    )


def eval_V(s: SteadyState, x):
    """Steady radial CDF: alpha x^{d/2} J_{d/2}(x) below R_inf, then 1."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    nu = s.dim / 2.0
    out = np.ones(x.shape, dtype=float)
    inside = x < s.R_inf
    if inside.any():
        xi = x[inside]
        out[inside] = np.clip(s.alpha * xi**nu * _bessel_any(nu, xi), 0.0, 1.0)
    return float(out[0]) if scalar else out


def eval_U(s: SteadyState, r):
    """Steady density profile: V'(r)/(d omega_d r^{d-1}) inside, 0 from R_inf on."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    nu = s.dim / 2.0
    surf = s.dim * s.omega_d
    out = np.zeros(r.shape, dtype=float)
    inside = (r < s.R_inf) & (r > 0.0)
    if inside.any():
        ri = r[inside]
        # V'(r) = alpha r^{d/2} J_{d/2-1}(r), so the surface factor leaves r^{1-d/2}
        out[inside] = s.alpha * _bessel_any(nu - 1.0, ri) / (surf * ri ** (nu - 1.0))
    at0 = r == 0.0
    if at0.any():
        # removable singularity: J_{nu-1}(r) ~ (r/2)^{nu-1}/Gamma(nu)
        out[at0] = s.alpha / (surf * 2.0 ** (nu - 1.0) * math.gamma(nu))
    return float(out[0]) if scalar else out

"""One-sided directional derivative of the norm and its numerical oracle.

The analytic path evaluates <Jx, v> / ||x|| (with the convention ||v|| at
x = 0); the numerical path extrapolates the one-sided difference quotient
(||x + tv|| - ||x||)/t over a halving step schedule.  The two are kept
independent so that one can audit the other.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .duality import j_p, j_x
from .space import BochnerElement, InnerNormSpec, norm_lp, norm_x, pairing

#: one-sided steps 1e-2, 5e-3, 2.5e-3, ... (6 halving levels)
DEFAULT_STEPS = tuple(1e-2 * 0.5 ** j for j in range(6))


class RichardsonEstimate(NamedTuple):
    value: float
    error_bound: float


def default_step_schedule(base: float = 1e-2, levels: int = 6) -> tuple:
    """Halving schedule starting at ``base``."""
    if base <= 0 or levels < 2:
        raise ValueError("need a positive base step and at least two levels")
    return tuple(base * 0.5 ** j for j in range(levels))


def smooth_piece_schedule(x, v, levels: int = 6, fraction: float = 0.25,
                          cap: float = 1e-2) -> tuple:
    """Halving schedule kept inside one smooth piece of t -> ||x + t v||.

    For non-even exponents the norm loses smoothness wherever a coordinate of
    x + t v crosses zero, which degrades the extrapolation of one-sided
    quotients.  The base step stays a fraction of the first possible crossing
    time along the ray (coordinates already at zero kink at t = 0 itself and
    impose no constraint).
    """
    x = np.asarray(x, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    moving = (np.abs(v) > 0.0) & (np.abs(x) > 0.0)
    base = cap
    if np.any(moving):
        margin = float(np.min(np.abs(x[moving]) / np.abs(v[moving])))
        base = min(cap, fraction * margin)
    return default_step_schedule(base, levels)


def _check_halving(steps):
    steps = tuple(float(t) for t in steps)
    if len(steps) < 2 or any(t <= 0 for t in steps):
        raise ValueError("step schedule must contain at least two positive steps")
    for a, b in zip(steps, steps[1:]):
        if abs(b / a - 0.5) > 1e-9:
            raise ValueError("step schedule must halve at every level")
    return steps


def richardson(samples):
    """Extrapolate a sequence D(t_j) sampled on a halving schedule.

    Eliminates the t, t^2, ... error terms column by column.  Returns the
    extrapolated corner and the magnitude of the last increment, floored at
    the rounding level of the data (the scheme cannot certify below that).
    """
    col = [np.asarray(s, dtype=float) for s in samples]
    levels = len(col)
    if levels < 2:
        raise ValueError("need at least two samples to extrapolate")
    prev = col[-1]
    increment = np.inf
    for m in range(1, levels):
        fac = 2.0 ** m
        for j in range(levels - 1, m - 1, -1):
            col[j] = (fac * col[j] - col[j - 1]) / (fac - 1.0)
        increment = float(np.max(np.abs(col[-1] - prev)))
        prev = col[-1]
    corner = col[-1]
    scale = float(np.max(np.abs(corner)))
    return corner, increment + 1e-15 * (1.0 + scale)


def psi_x(x_norm: InnerNormSpec, x, v) -> float:
    """Analytic one-sided derivative of t -> ||x + tv|| at t = 0+.

    Returns ||v|| when x = 0.  The direction v must be nonzero.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError("direction must be nonzero")
    nx = norm_x(x_norm, x)
    if nx == 0.0:
        return norm_x(x_norm, v)
    return float(np.dot(j_x(x_norm, x), v)) / nx


def psi_p(f: BochnerElement, h: BochnerElement) -> float:
    """Space-level analogue of :func:`psi_x` via the duality pairing."""
    if not np.any(h.values):
        raise ValueError("direction must be nonzero")
    nf = norm_lp(f)
    if nf == 0.0:
        return norm_lp(h)
    return pairing(j_p(f), h) / nf


def psi_x_numeric(x_norm: InnerNormSpec, x, v, steps=DEFAULT_STEPS) -> RichardsonEstimate:
    """Difference-quotient oracle for :func:`psi_x` with an error bound."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError("direction must be nonzero")
    steps = _check_halving(steps)
    nx = norm_x(x_norm, x)
    quotients = [(norm_x(x_norm, x + t * v) - nx) / t for t in steps]
    value, bound = richardson(quotients)
    return RichardsonEstimate(float(value), bound)


def psi_numeric(f: BochnerElement, h: BochnerElement, steps=DEFAULT_STEPS) -> RichardsonEstimate:
    """Difference-quotient oracle for :func:`psi_p` with an error bound."""
    if not np.any(h.values):
        raise ValueError("direction must be nonzero")
    steps = _check_halving(steps)
    nf = norm_lp(f)
    quotients = [(norm_lp(f + t * h) - nf) / t for t in steps]
    value, bound = richardson(quotients)
    return RichardsonEstimate(float(value), bound)

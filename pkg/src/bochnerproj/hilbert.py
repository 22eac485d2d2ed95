"""Inner-product formulas for the p = rho = 2 case.

At these exponents the space is a weighted Euclidean space and every
projection and derivative has an elementary expression through the weighted
inner product.  Nothing here reuses the duality-map or smoothness machinery:
this module is the independent reference the general code path is checked
against.
"""

from __future__ import annotations

import numpy as np

from .space import BochnerElement, SupportSet

_SUB_TOL = 1e-12


def _require_hilbert(space):
    if space.p != 2.0 or space.rho != 2.0:
        raise ValueError("these formulas require p = rho = 2")


def _wip(space, a_vals, b_vals) -> float:
    # weighted inner product sum_i w_i <a_i, b_i>
    return float(np.sum(space.weights[:, None] * a_vals * b_vals))


def _masked_norm(space, vals, mask) -> float:
    return float(
        np.sqrt(np.sum(space.weights[mask, None] * vals[mask] ** 2))
    )


def _in_subspace(vals, mask) -> bool:
    outside = vals[~mask]
    return outside.size == 0 or float(np.max(np.abs(outside))) <= _SUB_TOL


def subspace_projection(g: BochnerElement, a: SupportSet) -> BochnerElement:
    """Orthogonal projection onto the coordinate subspace: mask the rows."""
    _require_hilbert(g.space)
    vals = np.zeros_like(g.values)
    vals[a.mask] = g.values[a.mask]
    return BochnerElement(g.space, vals)


def ball_projection(g: BochnerElement, ball) -> BochnerElement:
    _require_hilbert(g.space)
    mask = ball.support.mask
    x = g.values - ball.center.values
    nrm = _masked_norm(g.space, x, mask)
    if _in_subspace(x, mask):
        proj = x if nrm <= ball.rad else (ball.rad / nrm) * x
    else:
        proj = np.zeros_like(x)
        proj[mask] = x[mask] if nrm <= ball.rad else (ball.rad / nrm) * x[mask]
    return BochnerElement(g.space, ball.center.values + proj)


def cylinder_projection(g: BochnerElement, cyl) -> BochnerElement:
    _require_hilbert(g.space)
    ball = cyl.base
    mask = ball.support.mask
    x = g.values - ball.center.values
    nrm = _masked_norm(g.space, x, mask)
    if nrm <= ball.rad:
        return BochnerElement(g.space, g.values.copy())
    vals = g.values.copy()
    vals[mask] = ball.center.values[mask] + (ball.rad / nrm) * x[mask]
    return BochnerElement(g.space, vals)


def subspace_derivative(h: BochnerElement, a: SupportSet) -> BochnerElement:
    _require_hilbert(h.space)
    return subspace_projection(h, a)


def ball_derivative(g: BochnerElement, h: BochnerElement, ball):
    """Directional derivative of the ball projection; None on the boundary."""
    _require_hilbert(g.space)
    space = g.space
    mask = ball.support.mask
    x = g.values - ball.center.values
    nrm = _masked_norm(space, x, mask)
    if abs(nrm - ball.rad) <= 1e-9:
        return None
    in_sub = _in_subspace(x, mask)
    h_sub = _in_subspace(h.values, mask)
    hm = np.zeros_like(h.values)
    hm[mask] = h.values[mask]
    if nrm < ball.rad:
        vals = h.values.copy() if (in_sub and h_sub) else hm
        return BochnerElement(space, vals)
    if in_sub:
        xa = np.zeros_like(x)
        xa[mask] = x[mask]
        hh = h.values if h_sub else hm
        ip = _wip(space, xa, hh)
        vals = (ball.rad / nrm) * (hh - (ip / nrm ** 2) * xa)
        return BochnerElement(space, vals)
    xa = np.zeros_like(x)
    xa[mask] = x[mask]
    ip = _wip(space, xa, hm)
    vals = (ball.rad / nrm) * (hm - (ip / nrm ** 2) * xa)
    return BochnerElement(space, vals)


def cylinder_derivative(g: BochnerElement, h: BochnerElement, cyl):
    """Directional derivative of the cylinder projection; None on the boundary.

    Outside the cylinder the free rows of the direction pass through
    unscaled and only the A-part feels the radial scaling.
    """
    _require_hilbert(g.space)
    ball = cyl.base
    space = g.space
    mask = ball.support.mask
    x = g.values - ball.center.values
    nrm = _masked_norm(space, x, mask)
    if abs(nrm - ball.rad) <= 1e-9:
        return None
    if nrm < ball.rad:
        return BochnerElement(space, h.values.copy())
    xa = np.zeros_like(x)
    xa[mask] = x[mask]
    hm = np.zeros_like(h.values)
    hm[mask] = h.values[mask]
    hout = h.values - hm
    ip = _wip(space, xa, hm)
    vals = (ball.rad / nrm) * (hm - (ip / nrm ** 2) * xa) + hout
    return BochnerElement(space, vals)

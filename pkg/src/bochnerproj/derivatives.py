"""Closed-form directional derivatives of the three projections.

Each derivative is dispatched on the region of the base point.  On the
sphere / cylinder-boundary classes there is no closed form, and instead of
guessing a one-sided value the functions return the ``NOT_COVERED`` sentinel;
callers must check for it.

The norm-derivative factor can be evaluated analytically (default) or through
the difference-quotient oracle (``psi="numeric"``), which exists as a guarded
fallback for the analytic identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duality import j_p
from .smoothness import default_step_schedule, psi_numeric
from .space import (
    BochnerElement,
    SupportSet,
    norm_lp,
    restrict,
)
from .projections import (
    BOUNDARY_CLASSES,
    BOUNDARY_TOL,
    SUBSPACE_TOL,
    BallSpec,
    CylinderSpec,
    RegionClass,
    classify,
)


class _NotCovered:
    """Outcome for base points where no derivative formula applies."""

    __slots__ = ()

    def __repr__(self):
        return "NOT_COVERED"


NOT_COVERED = _NotCovered()


def _require_direction(h: BochnerElement):
    if not np.any(h.values):
        raise ValueError("direction must be nonzero")


def _psi_factor(space, x_vals, h_vals, psi, x_norm_value):
    # one-sided norm derivative of ||x + t h|| at 0+, with x nonzero;
    # linear in h, so h = 0 is fine here (the formulas feed masked directions)
    if psi == "analytic":
        x_elem = BochnerElement(space, x_vals)
        dual = j_p(x_elem)
        return float(
            np.sum(space.weights[:, None] * dual.values * h_vals)
        ) / x_norm_value
    if psi == "numeric":
        if not np.any(h_vals):
            return 0.0
        est = psi_numeric(
            BochnerElement(space, x_vals),
            BochnerElement(space, h_vals),
            default_step_schedule(),
        )
        return est.value
    raise ValueError(f"psi mode must be 'analytic' or 'numeric', got {psi!r}")


def d_project_subspace(
    f: BochnerElement, h: BochnerElement, a: SupportSet
) -> BochnerElement:
    """Derivative of the subspace projection: the restriction of the direction.

    The projection is linear, so the result does not depend on the base point.
    """
    _require_direction(h)
    return restrict(h, a)


def d_project_ball(
    g: BochnerElement,
    h: BochnerElement,
    ball: BallSpec,
    psi: str = "analytic",
    boundary_tol: float = BOUNDARY_TOL,
):
    """Derivative of the ball projection at g along h, or ``NOT_COVERED``.

    Interior points pass the (restricted) direction through; exterior points
    differentiate the radial scaling, which subtracts the norm-derivative
    component along the offset.  Boundary points are refused.
    """
    _require_direction(h)
    region = classify(g, ball, boundary_tol)
    if region in BOUNDARY_CLASSES:
        return NOT_COVERED
    space = g.space
    mask = ball.support.mask
    u = g.values - ball.center.values
    ua = np.zeros_like(u)
    ua[mask] = u[mask]
    hm = np.zeros_like(h.values)
    hm[mask] = h.values[mask]
    h_out = h.values[~mask]
    h_sub = h_out.size == 0 or float(np.max(np.abs(h_out))) <= SUBSPACE_TOL
    if region is RegionClass.IN_BALL:
        vals = h.values.copy() if h_sub else hm
        return BochnerElement(space, vals)
    if region is RegionClass.IN_CYLINDER_OFF_SUBSPACE:
        return BochnerElement(space, hm)
    # the two exterior regions share the radial-derivative formula, applied
    # to the A-part of the offset and of the direction
    na = norm_lp(BochnerElement(space, ua))
    if region is RegionClass.IN_SUBSPACE_OUTSIDE_BALL:
        hh = h.values if h_sub else hm
        psival = _psi_factor(space, ua, hh, psi, na)
        vals = (ball.rad / na) * (hh - (psival / na) * ua)
        return BochnerElement(space, vals)
    psival = _psi_factor(space, ua, hm, psi, na)
    vals = (ball.rad / na) * (hm - (psival / na) * ua)
    return BochnerElement(space, vals)


def d_project_cylinder(
    g: BochnerElement,
    h: BochnerElement,
    cyl: CylinderSpec,
    psi: str = "analytic",
    boundary_tol: float = BOUNDARY_TOL,
):
    """Derivative of the cylinder projection at g along h, or ``NOT_COVERED``.

    Strictly inside the cylinder the projection is the identity; strictly
    outside, the A-part follows the ball formula and the outside rows of the
    direction pass through unscaled.
    """
    _require_direction(h)
    ball = cyl.base
    region = classify(g, ball, boundary_tol)
    if region in BOUNDARY_CLASSES:
        return NOT_COVERED
    space = g.space
    if region in (RegionClass.IN_BALL, RegionClass.IN_CYLINDER_OFF_SUBSPACE):
        return BochnerElement(space, h.values.copy())
    mask = ball.support.mask
    u = g.values - ball.center.values
    ua = np.zeros_like(u)
    ua[mask] = u[mask]
    hm = np.zeros_like(h.values)
    hm[mask] = h.values[mask]
    hout = h.values - hm
    na = norm_lp(BochnerElement(space, ua))
    psival = _psi_factor(space, ua, hm, psi, na)
    vals = (ball.rad / na) * (hm - (psival / na) * ua) + hout
    return BochnerElement(space, vals)


def safe_fd_schedule(g: BochnerElement, h: BochnerElement, set_spec,
                     levels: int = 6, fraction: float = 1e-2) -> tuple:
    """Halving step schedule whose open ray g + t h stays in one smooth piece.

    The base step is a fraction of the distance to the nearest region
    boundary along h, so difference quotients of the projection sample a
    single formula branch.
    """
    _require_direction(h)
    space = g.space
    base = fraction * (1.0 + norm_lp(g)) / (1.0 + norm_lp(h))
    if isinstance(set_spec, SupportSet):
        return default_step_schedule(base, levels)
    ball = set_spec.base if isinstance(set_spec, CylinderSpec) else set_spec
    mask = ball.support.mask
    u = g.values - ball.center.values
    ua = np.zeros_like(u)
    ua[mask] = u[mask]
    na = norm_lp(BochnerElement(space, ua))
    ha = np.zeros_like(h.values)
    ha[mask] = h.values[mask]
    nh = norm_lp(BochnerElement(space, ha))
    margin = abs(na - ball.rad)
    if margin <= BOUNDARY_TOL:
        raise ValueError("base point sits on the region boundary")
    if nh > 0.0:
        base = min(base, fraction * margin / nh)
    off_u = np.abs(u[~mask])
    off_h = np.abs(h.values[~mask])
    if off_u.size and off_u.max() > SUBSPACE_TOL and off_h.max() > 0.0:
        base = min(base, fraction * 0.5 * float(off_u.max() / off_h.max()))
    # keep the A-part coordinates away from sign crossings too: the norm's
    # one-sided expansion kinks there for non-even inner exponents
    ua_f, ha_f = u[mask].ravel(), h.values[mask].ravel()
    moving = (np.abs(ha_f) > 0.0) & (np.abs(ua_f) > 0.0)
    if np.any(moving):
        crossing = float(np.min(np.abs(ua_f[moving]) / np.abs(ha_f[moving])))
        base = min(base, 0.25 * crossing)
    return default_step_schedule(base, levels)


@dataclass(frozen=True)
class HomogeneityReport:
    """Residuals of positive homogeneity in the direction argument."""

    lambdas: tuple
    residuals: tuple
    max_residual: float


def homogeneity_check(
    deriv_fn, g: BochnerElement, h: BochnerElement, lambdas=(0.5, 2.0, 3.0, 10.0)
) -> HomogeneityReport:
    """Check deriv(g)(lam h) = lam deriv(g)(h) for positive lam."""
    base = deriv_fn(g, h)
    if base is NOT_COVERED:
        raise ValueError("base point is not covered by the derivative formula")
    residuals = []
    for lam in lambdas:
        if lam <= 0:
            raise ValueError("homogeneity holds for positive factors only")
        scaled = deriv_fn(g, lam * h)
        resid = float(np.max(np.abs(scaled.values - lam * base.values)))
        residuals.append(resid / (1.0 + lam * float(np.max(np.abs(base.values)))))
    return HomogeneityReport(
        lambdas=tuple(lambdas),
        residuals=tuple(residuals),
        max_residual=max(residuals),
    )


@dataclass(frozen=True)
class UniformityReport:
    """Difference-quotient residuals across a batch of unit directions.

    ``residuals[i, j]`` is the distance between the quotient at step j along
    direction i and the claimed derivative.  A derivative limit attained
    uniformly over directions shows up as one shared linear envelope:
    residuals bounded by c * t with a single constant c.
    """

    steps: tuple
    residuals: np.ndarray
    envelope_constant: float
    base_constant: float


def frechet_uniformity_check(
    project_fn, deriv_fn, g: BochnerElement, directions, steps
) -> UniformityReport:
    """Measure how uniformly the difference quotients converge over directions.

    ``envelope_constant`` is the smallest c with residual <= c * t over every
    direction and step; ``base_constant`` is the same constant fitted at the
    coarsest step only.  Uniform linear behaviour keeps the two comparable.
    """
    base = project_fn(g)
    steps = tuple(float(t) for t in steps)
    rows = []
    for v in directions:
        dv = deriv_fn(g, v)
        if dv is NOT_COVERED:
            raise ValueError("direction batch hit an uncovered base point")
        row = []
        for t in steps:
            quot = (project_fn(g + t * v).values - base.values) / t
            row.append(float(np.max(np.abs(quot - dv.values))))
        rows.append(row)
    residuals = np.asarray(rows)
    ratios = residuals / np.asarray(steps)[None, :]
    envelope = float(ratios.max())
    base_constant = float(ratios[:, 0].max())
    return UniformityReport(
        steps=steps,
        residuals=residuals,
        envelope_constant=envelope,
        base_constant=base_constant,
    )

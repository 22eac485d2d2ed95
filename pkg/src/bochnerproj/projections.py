"""Nearest-point maps onto supported subspaces, balls inside them, and the
cylinders they generate, in closed form.

A ball here lives inside the supported subspace (center supported in A,
radius over the A-part of the norm); the cylinder is the set of elements
whose A-restriction falls in that ball, with the outside rows free.  Balls
around a nonzero center are handled by translating, projecting, and
translating back, which is exact for a metric projection.

Region classification drives the derivative formulas downstream; the
projection itself is continuous across region boundaries, so classification
ties are harmless here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .space import (
    BochnerElement,
    SpaceMismatchError,
    SupportSet,
    restrict,
)

#: rows outside the support count as zero below this max-abs level
SUBSPACE_TOL = 1e-12

#: half-width of the band treated as "on the boundary" by classify()
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BallSpec:
    """Closed ball inside the supported subspace: center + radius."""

    support: SupportSet
    center: BochnerElement
    rad: float

    def __post_init__(self):
        if self.center.space != self.support.space:
            raise SpaceMismatchError("center and support live in different spaces")
        outside = self.center.values[~self.support.mask]
        if outside.size and np.any(outside != 0.0):
            raise ValueError("center must vanish outside the support set")
        rad = float(self.rad)
        if not (rad > 0.0 and np.isfinite(rad)):
            raise ValueError("radius must be positive and finite")
        object.__setattr__(self, "rad", rad)

    @property
    def space(self):
        return self.support.space


@dataclass(frozen=True, eq=False)
class CylinderSpec:
    """Elements whose A-restriction lies in the base ball; outside rows free."""

    base: BallSpec

    @property
    def support(self):
        return self.base.support

    @property
    def space(self):
        return self.base.space


class RegionClass(enum.Enum):
    IN_BALL = "IN_BALL"
    ON_SPHERE_IN_SUBSPACE = "ON_SPHERE_IN_SUBSPACE"
    IN_SUBSPACE_OUTSIDE_BALL = "IN_SUBSPACE_OUTSIDE_BALL"
    IN_CYLINDER_OFF_SUBSPACE = "IN_CYLINDER_OFF_SUBSPACE"
    ON_CYLINDER_BOUNDARY_OFF_SUBSPACE = "ON_CYLINDER_BOUNDARY_OFF_SUBSPACE"
    OUTSIDE_CYLINDER_OFF_SUBSPACE = "OUTSIDE_CYLINDER_OFF_SUBSPACE"


#: classes on which the ball/cylinder derivative formulas are not defined
BOUNDARY_CLASSES = frozenset(
    {
        RegionClass.ON_SPHERE_IN_SUBSPACE,
        RegionClass.ON_CYLINDER_BOUNDARY_OFF_SUBSPACE,
    }
)


def _offset_values(g: BochnerElement, ball: BallSpec) -> np.ndarray:
    if g.space != ball.space:
        raise SpaceMismatchError("point and ball live in different spaces")
    return g.values - ball.center.values


def _is_supported(values: np.ndarray, mask: np.ndarray, tol: float) -> bool:
    outside = values[~mask]
    return outside.size == 0 or float(np.max(np.abs(outside))) <= tol


def _masked_norm(space, values: np.ndarray, mask: np.ndarray) -> float:
    # outer norm of the rows inside the mask
    return float(
        _kernels.lp_norm(space.weights[mask], values[mask], space.rho, space.p)
    )


def classify(
    g: BochnerElement,
    ball: BallSpec,
    boundary_tol: float = BOUNDARY_TOL,
    subspace_tol: float = SUBSPACE_TOL,
) -> RegionClass:
    """Assign g to exactly one of the six regions relative to the ball.

    Subspace membership is a max-abs test on the rows outside the support
    (inputs are constructed values, so ``subspace_tol`` is tight); the radial
    comparison carries a ``boundary_tol`` band around the sphere.
    """
    off = _offset_values(g, ball)
    mask = ball.support.mask
    in_sub = _is_supported(off, mask, subspace_tol)
    radial = _masked_norm(g.space, off, mask)
    if abs(radial - ball.rad) <= boundary_tol:
        if in_sub:
            return RegionClass.ON_SPHERE_IN_SUBSPACE
        return RegionClass.ON_CYLINDER_BOUNDARY_OFF_SUBSPACE
    if radial < ball.rad:
        return RegionClass.IN_BALL if in_sub else RegionClass.IN_CYLINDER_OFF_SUBSPACE
    if in_sub:
        return RegionClass.IN_SUBSPACE_OUTSIDE_BALL
    return RegionClass.OUTSIDE_CYLINDER_OFF_SUBSPACE


def project_subspace(g: BochnerElement, a: SupportSet) -> BochnerElement:
    """Nearest point of the supported subspace: restriction to A."""
    return restrict(g, a)


def inverse_image_member(
    h: BochnerElement, w: BochnerElement, a: SupportSet
) -> bool:
    """Whether w projects onto h under the subspace projection.

    h must be supported in A.  Membership is exact row comparison: the
    inverse image is h plus anything supported outside A.
    """
    if h.space != a.space or w.space != a.space:
        raise SpaceMismatchError("arguments live in different spaces")
    if not _is_supported(h.values, a.mask, 0.0):
        raise ValueError("reference element must be supported in A")
    return bool(np.array_equal(w.values[a.mask], h.values[a.mask]))


def project_ball(g: BochnerElement, ball: BallSpec) -> BochnerElement:
    """Nearest point of the ball, by cases on where g sits.

    With u = g - center: inside the subspace the point is kept or radially
    scaled onto the sphere; off the subspace the A-part is kept or radially
    scaled, and the outside rows are dropped.
    """
    u = _offset_values(g, ball)
    mask = ball.support.mask
    in_sub = _is_supported(u, mask, SUBSPACE_TOL)
    radial = _masked_norm(g.space, u, mask)
    if in_sub:
        if radial <= ball.rad:
            proj = u
        else:
            proj = (ball.rad / radial) * u
    else:
        proj = np.zeros_like(u)
        if radial <= ball.rad:
            proj[mask] = u[mask]
        else:
            proj[mask] = (ball.rad / radial) * u[mask]
    return BochnerElement(g.space, ball.center.values + proj)


def project_cylinder(g: BochnerElement, cyl: CylinderSpec) -> BochnerElement:
    """Nearest point of the cylinder: scale the A-part onto the ball if it
    sticks out; rows outside the support pass through bit-identically."""
    ball = cyl.base
    u = _offset_values(g, ball)
    mask = ball.support.mask
    radial = _masked_norm(g.space, u, mask)
    if radial <= ball.rad:
        return BochnerElement(g.space, g.values.copy())
    vals = g.values.copy()
    vals[mask] = ball.center.values[mask] + (ball.rad / radial) * u[mask]
    return BochnerElement(g.space, vals)


@dataclass(frozen=True)
class HilbertConsistencyReport:
    """Residual between the general projection path and the inner-product
    formulas available when p = rho = 2."""

    kind: str
    max_residual: float


def project_hilbert_consistency(g: BochnerElement, set_spec) -> HilbertConsistencyReport:
    """Compare the general code path against the independent inner-product
    formulas.  Only meaningful (and only allowed) when p = rho = 2."""
    from . import hilbert

    space = g.space
    if space.p != 2.0 or space.rho != 2.0:
        raise ValueError("hilbert consistency check requires p = rho = 2")
    if isinstance(set_spec, SupportSet):
        general = project_subspace(g, set_spec)
        reference = hilbert.subspace_projection(g, set_spec)
        kind = "subspace"
    elif isinstance(set_spec, BallSpec):
        general = project_ball(g, set_spec)
        reference = hilbert.ball_projection(g, set_spec)
        kind = "ball"
    elif isinstance(set_spec, CylinderSpec):
        general = project_cylinder(g, set_spec)
        reference = hilbert.cylinder_projection(g, set_spec)
        kind = "cylinder"
    else:
        raise TypeError(f"unsupported set spec: {type(set_spec).__name__}")
    residual = float(np.max(np.abs(general.values - reference.values)))
    return HilbertConsistencyReport(kind=kind, max_residual=residual)

"""Independent brute-force machinery: a constrained nearest-point solver and
an extrapolated finite-difference differentiator.

The solver minimizes the p-th power of the distance by log-barrier
continuation with damped Newton steps, then audits the candidate against a
cloud of random feasible points.  It never calls the closed-form radial
scalings: those are exactly the claims it exists to check.  Everything is
deterministic given the inputs, the config, and the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .derivatives import NOT_COVERED
from .projections import BallSpec, CylinderSpec
from .smoothness import richardson
from .space import BochnerElement, SupportSet, norm_lp

#: continuation schedule for the barrier weight, ending at 1e-12
DEFAULT_BARRIER_WEIGHTS = tuple(10.0 ** (-k) for k in range(1, 13))


class OracleConvergenceError(RuntimeError):
    """The barrier descent did not reach the requested stationarity."""


@dataclass(frozen=True)
class OracleConfig:
    """Tuning knobs of the brute-force solver.

    ``descent_tol`` is the audit slack: a candidate passes if no sampled
    feasible point improves the p-th-power objective by more than it.
    """

    barrier_weights: tuple = DEFAULT_BARRIER_WEIGHTS
    descent_tol: float = 1e-8
    max_iters: int = 20000
    audit_samples: int = 2000
    rng_seed: int = 1337

    def __post_init__(self):
        bw = tuple(float(w) for w in self.barrier_weights)
        if not bw or any(w <= 0 for w in bw):
            raise ValueError("barrier weights must be positive")
        if any(b >= a for a, b in zip(bw, bw[1:])):
            raise ValueError("barrier weights must be strictly decreasing")
        if bw[-1] > 1e-8:
            raise ValueError("barrier schedule must reach 1e-8 or below")
        object.__setattr__(self, "barrier_weights", bw)
        if self.descent_tol <= 0:
            raise ValueError("descent_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.audit_samples < 1000:
            raise ValueError("audit_samples must be at least 1000")


@dataclass(frozen=True)
class OracleSolution:
    minimizer: BochnerElement
    objective: float
    audit_pass: bool
    audit_gap: float
    iterations: int


def _feasible_layout(g: BochnerElement, feasible):
    """Active rows (variables), constrained rows, and constraint data."""
    space = g.space
    if isinstance(feasible, SupportSet):
        support = feasible
        active = support.mask
        cons = np.zeros(space.atom_count, dtype=bool)
        center_vals = np.zeros_like(g.values)
        rad = 0.0
    elif isinstance(feasible, BallSpec):
        support = feasible.support
        active = support.mask
        cons = support.mask
        center_vals = feasible.center.values
        rad = feasible.rad
    elif isinstance(feasible, CylinderSpec):
        support = feasible.support
        active = np.ones(space.atom_count, dtype=bool)
        cons = support.mask
        center_vals = feasible.base.center.values
        rad = feasible.base.rad
    else:
        raise TypeError(f"unsupported feasible set: {type(feasible).__name__}")
    if support.space != space:
        raise ValueError("feasible set belongs to a different space")
    return support, active, cons, center_vals, rad


def _penalty(space, diff_vals) -> float:
    # sum_i w_i ||row_i||_rho^p  (the objective the solver minimizes)
    pen = _kernels.batch_penalty(
        space.weights, diff_vals[None, :, :], space.rho, space.p
    )
    return float(pen[0])


def _already_feasible(g, active, cons, center_vals, rad, space) -> bool:
    # exact feasibility: zero rows where g has no variable, A-part in the ball
    if np.any(g.values[~active]):
        return False
    if not cons.any():
        return True
    diff = (g.values - center_vals) * cons[:, None]
    return _penalty(space, diff) <= rad ** space.p


def oracle_project(g: BochnerElement, feasible, cfg: OracleConfig | None = None) -> OracleSolution:
    """Minimize the distance to g over the feasible set, then audit.

    ``feasible`` is a SupportSet (the supported subspace), a BallSpec, or a
    CylinderSpec.  Raises :class:`OracleConvergenceError` if the descent
    stalls before reaching stationarity; a non-converged answer is never
    returned silently.
    """
    cfg = cfg or OracleConfig()
    space = g.space
    support, active, cons, center_vals, rad = _feasible_layout(g, feasible)
    minimizer = None
    iters = 0
    if _already_feasible(g, active, cons, center_vals, rad, space):
        # distance zero is the unconditional minimum, no descent needed
        minimizer = BochnerElement(space, g.values.copy())
    else:
        act_idx = np.flatnonzero(active)
        gact = np.ascontiguousarray(g.values[act_idx])
        cact = np.ascontiguousarray(center_vals[act_idx])
        wact = np.ascontiguousarray(space.weights[act_idx])
        cons_flags = cons[act_idx].astype(np.float64)
        rad_pow = rad ** space.p if rad > 0.0 else 0.0
        start_pen = _penalty(space, (center_vals - g.values) * cons[:, None])
        grad_tol = 1e-13 * (1.0 + start_pen)
        dec_tol = 1e-15 * (1.0 + start_pen)
        z, gmax, last_dec, iters = _kernels.barrier_solve(
            gact,
            cact,
            wact,
            cons_flags,
            space.rho,
            space.p,
            rad_pow,
            np.asarray(cfg.barrier_weights, dtype=float),
            grad_tol,
            dec_tol,
            cfg.max_iters,
        )
        # near the final barrier weights the raw gradient is hypersensitive
        # to the constraint slack, so running out of iterations is the only
        # reliable non-convergence signal; solution quality itself is
        # attested by the feasible-point audit below
        if iters >= cfg.max_iters:
            raise OracleConvergenceError(
                f"barrier descent did not settle within {iters} iterations "
                f"(gradient {gmax:.3e}, last decrement {last_dec:.3e})"
            )
        vals = np.zeros_like(g.values)
        vals[act_idx] = z
        minimizer = BochnerElement(space, vals)
    rng = np.random.default_rng(cfg.rng_seed)
    gap = audit_improvement(g, feasible, minimizer, cfg.audit_samples, rng)
    return OracleSolution(
        minimizer=minimizer,
        objective=norm_lp(g - minimizer),
        audit_pass=gap <= cfg.descent_tol,
        audit_gap=gap,
        iterations=int(iters),
    )


def sample_feasible_batch(rng, g: BochnerElement, feasible, candidate: BochnerElement, m: int) -> np.ndarray:
    """Draw m feasible points as a (m, n, d) batch.

    The cloud mixes bulk draws, boundary-hugging draws, and perturbations of
    the candidate / of the optimal free part, so a candidate that is wrong in
    any direction gets caught.
    """
    space = g.space
    support, active, cons, center_vals, rad = _feasible_layout(g, feasible)
    n, d = g.values.shape
    batch = np.zeros((m, n, d))
    mask = support.mask
    k = int(mask.sum())
    if isinstance(feasible, SupportSet):
        # any element supported in A is feasible
        spread = rng.uniform(1e-7, 1.0, size=m) * (1.0 + norm_lp(g))
        noise = rng.standard_normal((m, k, d))
        base = np.where(
            rng.random(m)[:, None, None] < 0.5,
            candidate.values[mask][None, :, :],
            g.values[mask][None, :, :],
        )
        batch[:, mask, :] = base + spread[:, None, None] * noise
        return batch
    # ball-constrained A-part, shared by balls and cylinders
    center_a = center_vals[mask]
    w_a = space.weights[mask]
    raw = rng.standard_normal((m, k, d))
    rn = np.sum(np.abs(raw) ** space.rho, axis=2) ** (1.0 / space.rho)
    norms = np.sum(w_a[None, :] * rn ** space.p, axis=1) ** (1.0 / space.p)
    norms = np.maximum(norms, 1e-300)
    unit = raw / norms[:, None, None]
    coin = rng.random(m)
    radius = np.where(
        coin < 0.6,
        rad * rng.random(m) ** (1.0 / max(k * d, 1)),
        rad * (1.0 - 10.0 ** (-rng.uniform(0.0, 8.0, size=m))),
    )
    a_part = center_a[None, :, :] + radius[:, None, None] * unit
    # overwrite a slice with feasibility-clipped candidate perturbations
    n_pert = m // 5
    if n_pert:
        eps = 10.0 ** rng.uniform(-7.0, -0.5, size=n_pert)
        pert = candidate.values[mask][None, :, :] + (
            eps[:, None, None] * rng.standard_normal((n_pert, k, d))
        )
        diff = pert - center_a[None, :, :]
        rnp = np.sum(np.abs(diff) ** space.rho, axis=2) ** (1.0 / space.rho)
        pnorm = np.sum(w_a[None, :] * rnp ** space.p, axis=1) ** (1.0 / space.p)
        clip = np.minimum(1.0, (1.0 - 1e-12) * rad / np.maximum(pnorm, 1e-300))
        a_part[:n_pert] = center_a[None, :, :] + clip[:, None, None] * diff
    batch[:, mask, :] = a_part
    if isinstance(feasible, CylinderSpec) and not support.is_full:
        out = ~mask
        half = m // 2
        eps_out = 10.0 ** rng.uniform(-7.0, 0.0, size=m - half)
        batch[:half, out, :] = g.values[out][None, :, :]
        batch[half:, out, :] = (
            np.where(
                rng.random(m - half)[:, None, None] < 0.5,
                g.values[out][None, :, :],
                candidate.values[out][None, :, :],
            )
            + eps_out[:, None, None]
            * rng.standard_normal((m - half, int(out.sum()), d))
        )
    return batch


def audit_improvement(g: BochnerElement, feasible, candidate: BochnerElement, m: int, rng) -> float:
    """Best objective improvement any of m sampled feasible points achieves
    over the candidate (positive means the candidate lost)."""
    batch = sample_feasible_batch(rng, g, feasible, candidate, m)
    space = g.space
    pens = _kernels.batch_penalty(
        space.weights, g.values[None, :, :] - batch, space.rho, space.p
    )
    cand = _penalty(space, g.values - candidate.values)
    return float(cand - np.min(pens))


@dataclass(frozen=True)
class FDDerivative:
    estimate: BochnerElement
    error_bound: float


def _extrapolation_weights(levels: int) -> np.ndarray:
    # coefficients the extrapolated corner puts on the raw samples
    col = [row.copy() for row in np.eye(levels)]
    for m in range(1, levels):
        fac = 2.0 ** m
        for j in range(levels - 1, m - 1, -1):
            col[j] = (fac * col[j] - col[j - 1]) / (fac - 1.0)
    return col[-1]


def fd_derivative(projector, g: BochnerElement, h: BochnerElement, steps) -> FDDerivative:
    """One-sided difference quotients of a projector, extrapolated.

    ``projector`` maps elements to elements; it must be defined at g and at
    every scheduled g + t h (an uncovered point raises).  The error bound is
    the last extrapolation increment plus the propagated quotient rounding
    noise; the increment alone says nothing once the table converges below
    machine precision.
    """
    steps = [float(t) for t in steps]
    base = projector(g)
    if base is NOT_COVERED:
        raise ValueError("projector is not covered at the base point")
    scale_p = float(np.max(np.abs(base.values)))
    quotients = []
    for t in steps:
        shifted = projector(g + t * h)
        if shifted is NOT_COVERED:
            raise ValueError(f"projector is not covered at step {t}")
        scale_p = max(scale_p, float(np.max(np.abs(shifted.values))))
        quotients.append((shifted.values - base.values) / t)
    corner, increment = richardson(quotients)
    weights = _extrapolation_weights(len(steps))
    eps = 2.3e-16
    noise = sum(
        abs(w) * 2.0 * eps * (1.0 + scale_p) / t for w, t in zip(weights, steps)
    )
    return FDDerivative(BochnerElement(g.space, corner), float(increment + noise))

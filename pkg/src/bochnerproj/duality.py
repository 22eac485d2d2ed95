"""Normalized duality mappings at the vector and the space level.

The map sends x to the unique dual vector with <Jx, x> = ||x||^2 and
||Jx|| = ||x||.  At the space level it acts row by row with a global norm
factor; restriction and partition identities let it be reassembled from
supported pieces.

The rho < 2 and p < 2 exponents are singular at zero coordinates; the factor
|t|^(e-1) t is always evaluated as sign(t)|t|^e, which is continuous and
vanishes at t = 0.  The map of the zero vector is the zero vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .space import (
    BochnerElement,
    DualElement,
    InnerNormSpec,
    SupportSet,
    norm_lp,
    norm_x,
    restrict,
)


def _signed_power(values, exponent):
    # sign(v) |v|^exponent, zero at zero (exponent > 0)
    return np.sign(values) * np.abs(values) ** exponent


def j_x(x_norm: InnerNormSpec, v) -> np.ndarray:
    """Duality map on R^dim: (J v)_k = |v_k|^(rho-2) v_k / ||v||^(rho-2)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (x_norm.dim,):
        raise ValueError(f"vector must have shape ({x_norm.dim},)")
    nrm = norm_x(x_norm, v)
    if nrm == 0.0:
        return np.zeros_like(v)
    rho = x_norm.rho
    if rho >= 2.0:
        return _signed_power(v, rho - 1.0) / nrm ** (rho - 2.0)
    # normalize first so tiny norms cannot overflow the negative exponent
    return _signed_power(v / nrm, rho - 1.0) * nrm


def _dual_values(space, values):
    # row-wise duality map with the global norm factor; returns the raw array
    rho, p = space.rho, space.p
    rn = np.asarray(_kernels.row_norms(values, rho))
    total = float(np.sum(space.weights * rn ** p) ** (1.0 / p))
    if total == 0.0:
        return np.zeros_like(values)
    if p >= rho:
        # all exponents nonnegative; exact identity when p == rho == 2
        dual = _signed_power(values, rho - 1.0) * rn[:, None] ** (p - rho)
    else:
        unit = np.divide(
            values, rn[:, None], out=np.zeros_like(values), where=rn[:, None] > 0.0
        )
        dual = _signed_power(unit, rho - 1.0) * rn[:, None] ** (p - 1.0)
    return dual / total ** (p - 2.0)


def j_p(f: BochnerElement) -> DualElement:
    """Space-level duality map: row maps scaled by the global norm factor.

    Satisfies pairing(j_p(f), f) = norm_lp(f)^2 and norm_lq(j_p(f)) =
    norm_lp(f); homogeneous of degree one; maps supported elements to dual
    elements with the same support.
    """
    return DualElement(f.space, _dual_values(f.space, f.values))


def j_p_simple(a: SupportSet, x) -> DualElement:
    """Closed form of the duality map on an indicator element.

    Equals mu(A)^(1/p - 1/q) times the indicator of the vector-level dual,
    matching j_p(indicator(a, x)) to rounding.
    """
    space = a.space
    x = np.asarray(x, dtype=float)
    jx = j_x(space.x_norm, x)
    factor = a.measure ** (1.0 / space.p - 1.0 / space.q)
    vals = np.zeros((space.atom_count, space.dim))
    vals[a.mask] = factor * jx
    return DualElement(space, vals)


def j_p_simple_sum(blocks, xs) -> DualElement:
    """Closed form of the duality map on a simple function sum_i 1_{A_i} x_i.

    blocks must be pairwise disjoint support sets and at least one x_i must be
    nonzero.  The result matches j_p of the assembled element to rounding.
    """
    blocks = list(blocks)
    xs = [np.asarray(x, dtype=float) for x in xs]
    if len(blocks) != len(xs) or not blocks:
        raise ValueError("need one vector per block")
    space = blocks[0].space
    seen = np.zeros(space.atom_count, dtype=bool)
    for blk in blocks:
        if blk.space != space:
            raise ValueError("blocks must share one space")
        if np.any(seen & blk.mask):
            raise ValueError("blocks must be pairwise disjoint")
        seen |= blk.mask
    p, q = space.p, space.q
    norms = [norm_x(space.x_norm, x) for x in xs]
    total_pow = sum(
        nx ** p * blk.measure for nx, blk in zip(norms, blocks)
    )
    if total_pow == 0.0:
        raise ValueError("all block vectors are zero")
    vals = np.zeros((space.atom_count, space.dim))
    for blk, x, nx in zip(blocks, xs, norms):
        if nx == 0.0:
            continue
        vals[blk.mask] = nx ** (p - 2.0) * j_x(space.x_norm, x)
    vals /= total_pow ** (1.0 / q - 1.0 / p)
    return DualElement(space, vals)


def j_p_decompose(f: BochnerElement, blocks) -> DualElement:
    """Reassemble j_p(f) from its restrictions to a strong partition.

    The blocks must be disjoint and cover every atom; f must be nonzero.
    Blocks on which f vanishes contribute nothing.
    """
    if f.is_zero():
        raise ValueError("cannot decompose the duality map at the zero element")
    blocks = list(blocks)
    space = f.space
    covered = np.zeros(space.atom_count, dtype=bool)
    for blk in blocks:
        if blk.space != space:
            raise ValueError("blocks must share the element's space")
        if np.any(covered & blk.mask):
            raise ValueError("partition blocks overlap")
        covered |= blk.mask
    if not covered.all():
        raise ValueError("partition blocks must cover every atom")
    p = space.p
    total = norm_lp(f)
    vals = np.zeros_like(f.values)
    for blk in blocks:
        piece = restrict(f, blk)
        piece_norm = norm_lp(piece)
        if piece_norm == 0.0:
            continue
        vals += piece_norm ** (p - 2.0) * j_p(piece).values
    vals *= total ** (2.0 - p)
    return DualElement(space, vals)


@dataclass(frozen=True)
class RestrictionIdentitiesReport:
    """Residuals of the support/scaling identities of the duality map.

    support_residual:  max |(J f_A)_A - J f_A|                (always zero)
    scaling_residual:  max |(J f)_A - (||f_A||/||f||)^(p-2) J f_A|
    separation:        max |(J f)_A - J f_A|, meaningful when the norms differ
    norms_differ:      whether ||f|| and ||f_A|| differ beyond rounding
    """

    support_residual: float
    scaling_residual: float | None
    separation: float
    norms_differ: bool


def restriction_identities_check(
    f: BochnerElement, a: SupportSet
) -> RestrictionIdentitiesReport:
    """Evaluate the restriction identities of the duality map on one instance."""
    fa = restrict(f, a)
    jfa = j_p(fa)
    support_residual = float(
        np.max(np.abs(restrict(jfa, a).values - jfa.values))
    )
    jf = j_p(f)
    jf_a = restrict(jf, a)
    na, nf = norm_lp(fa), norm_lp(f)
    if na > 0.0:
        expected = (na / nf) ** (f.space.p - 2.0) * jfa.values
        scaling_residual = float(np.max(np.abs(jf_a.values - expected)))
    else:
        scaling_residual = None
    separation = float(np.max(np.abs(jf_a.values - jfa.values)))
    norms_differ = abs(nf - na) > 1e-12 * (1.0 + nf)
    return RestrictionIdentitiesReport(
        support_residual=support_residual,
        scaling_residual=scaling_residual,
        separation=separation,
        norms_differ=norms_differ,
    )

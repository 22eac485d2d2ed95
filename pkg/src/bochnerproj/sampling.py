"""Deterministic random-instance generators for the verification suites.

Every generator is driven by a ``numpy`` Generator the caller seeds, so a
suite run is reproducible from a single documented seed.  Exponent pairs
cycle through the {1.5, 2, 3} x {1.5, 2, 3} grid to guarantee coverage.
"""

from __future__ import annotations

import numpy as np

from .projections import BallSpec
from .space import (
    BochnerElement,
    BochnerSpaceSpec,
    InnerNormSpec,
    MeasureSpace,
    SupportSet,
    norm_lp,
    restrict,
)

EXPONENT_GRID = tuple(
    (p, rho) for p in (1.5, 2.0, 3.0) for rho in (1.5, 2.0, 3.0)
)


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Child generator keyed by integers; chunk-order independent."""
    return np.random.default_rng([int(seed)] + [int(k) for k in key])


def random_space(
    rng,
    index: int | None = None,
    n_range=(1, 5),
    d_range=(1, 3),
    nd_cap: int | None = None,
    p: float | None = None,
    rho: float | None = None,
) -> BochnerSpaceSpec:
    """Space with exponents from the grid (cycled by ``index``) and random
    positive weights.  ``nd_cap`` bounds atom_count * dim (oracle desk scale)."""
    if p is None or rho is None:
        if index is None:
            index = int(rng.integers(0, len(EXPONENT_GRID)))
        gp, grho = EXPONENT_GRID[index % len(EXPONENT_GRID)]
        p = gp if p is None else p
        rho = grho if rho is None else rho
    for _ in range(100):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        d = int(rng.integers(d_range[0], d_range[1] + 1))
        if nd_cap is None or n * d <= nd_cap:
            break
    else:
        raise ValueError("could not satisfy the size cap")
    weights = rng.uniform(0.3, 2.0, size=n)
    return BochnerSpaceSpec(MeasureSpace(weights), InnerNormSpec(d, rho), p)


def random_element(rng, space, scale: float = 1.0) -> BochnerElement:
    vals = scale * rng.standard_normal((space.atom_count, space.dim))
    return BochnerElement(space, vals)


def random_support(rng, space, proper: bool = False) -> SupportSet:
    """Random support set; ``proper`` forces a nonempty complement."""
    n = space.atom_count
    if proper:
        if n < 2:
            raise ValueError("a proper support needs at least two atoms")
        size = int(rng.integers(1, n))
    else:
        size = int(rng.integers(1, n + 1))
    idx = rng.choice(n, size=size, replace=False)
    return SupportSet(space, idx)


def full_support(space) -> SupportSet:
    return SupportSet(space, np.arange(space.atom_count))


def random_partition(rng, space) -> list:
    """Strong partition: disjoint nonempty blocks covering every atom."""
    n = space.atom_count
    perm = rng.permutation(n)
    n_blocks = int(rng.integers(1, n + 1))
    cuts = sorted(rng.choice(np.arange(1, n), size=n_blocks - 1, replace=False)) if n_blocks > 1 else []
    blocks = []
    start = 0
    for cut in list(cuts) + [n]:
        blocks.append(SupportSet(space, perm[start:cut]))
        start = cut
    return blocks


def random_ball(rng, space, support, centered: bool = False) -> BallSpec:
    rad = float(rng.uniform(0.5, 1.5))
    if centered:
        center = BochnerElement(space, np.zeros((space.atom_count, space.dim)))
    else:
        center = restrict(random_element(rng, space), support)
    return BallSpec(support=support, center=center, rad=rad)


def element_with_radial_ratio(
    rng,
    ball: BallSpec,
    ratio: float,
    off_subspace: bool,
) -> BochnerElement:
    """center + u with ||u_A|| = ratio * rad; optionally with nonzero rows
    outside the support (their largest entry kept >= 0.2 so margins stay
    healthy for difference quotients)."""
    space = ball.space
    mask = ball.support.mask
    vals = np.zeros((space.atom_count, space.dim))
    for _ in range(100):
        rows = rng.standard_normal((int(mask.sum()), space.dim))
        probe = np.zeros_like(vals)
        probe[mask] = rows
        nrm = norm_lp(BochnerElement(space, probe))
        if nrm > 1e-9:
            break
    else:
        raise RuntimeError("failed to draw a nonzero A-part")
    vals[mask] = (ratio * ball.rad / nrm) * rows
    if off_subspace:
        if ball.support.is_full:
            raise ValueError("no complement rows available")
        out = ~mask
        rows_out = rng.standard_normal((int(out.sum()), space.dim))
        peak = np.max(np.abs(rows_out))
        if peak < 0.2:
            rows_out = rows_out + 0.5 * np.sign(rows_out + 1e-300)
        vals[out] = rows_out
    return BochnerElement(space, ball.center.values + vals)


def interior_ratio(rng) -> float:
    return float(rng.uniform(0.15, 0.8))


def exterior_ratio(rng) -> float:
    return float(rng.uniform(1.3, 2.5))


def random_direction(rng, space, support=None, in_subspace=None) -> BochnerElement:
    """Nonzero direction; optionally constrained to lie in / off the subspace."""
    for _ in range(100):
        h = random_element(rng, space)
        if in_subspace is True:
            h = restrict(h, support)
        elif in_subspace is False:
            out = ~support.mask
            if not out.any():
                raise ValueError("no complement rows available")
            if np.max(np.abs(h.values[out])) < 0.2:
                vals = h.values.copy()
                vals[out] += 0.5
                h = BochnerElement(space, vals)
        if np.any(h.values):
            return h
    raise RuntimeError("failed to draw a nonzero direction")

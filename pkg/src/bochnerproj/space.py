"""Finite-atomic weighted mixed-norm spaces and their elements.

The measure space is a finite list of weighted atoms, the inner space is R^d
under an l_rho norm with 1 < rho < inf, and elements are (atom_count, dim)
arrays whose outer norm integrates row norms against the atom weights with
exponent 1 < p < inf.  Dual elements live in the conjugate-exponent space.

Everything here is an immutable value and every operation is a pure function,
so objects are safe to share across threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class SpaceMismatchError(ValueError):
    """Two objects from different spaces were combined."""


def _readonly(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Finitely many atoms, each carrying a strictly positive weight."""

    weights: np.ndarray

    def __post_init__(self):
        w = _readonly(np.atleast_1d(np.asarray(self.weights, dtype=float)))
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("atom weights must be finite and strictly positive")
        object.__setattr__(self, "weights", w)

    @property
    def atom_count(self) -> int:
        return int(self.weights.size)

    def measure(self, indices) -> float:
        """Total weight of the given atom indices."""
        return float(self.weights[np.asarray(indices, dtype=int)].sum())

    def __eq__(self, other):
        return isinstance(other, MeasureSpace) and np.array_equal(
            self.weights, other.weights
        )

    def __hash__(self):
        return hash(self.weights.tobytes())


@dataclass(frozen=True, eq=False)
class InnerNormSpec:
    """R^dim under the l_rho norm, 1 < rho < inf.

    The exponent range keeps the inner space uniformly convex and uniformly
    smooth, so the dual pairing machinery downstream is single valued.
    """

    dim: int
    rho: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError("dim must be a positive integer")
        object.__setattr__(self, "dim", int(self.dim))
        rho = float(self.rho)
        if not (1.0 < rho < np.inf):
            raise ValueError("rho must lie strictly between 1 and infinity")
        object.__setattr__(self, "rho", rho)

    @property
    def rho_dual(self) -> float:
        """Conjugate exponent rho' with 1/rho + 1/rho' = 1."""
        return self.rho / (self.rho - 1.0)

    def __eq__(self, other):
        return (
            isinstance(other, InnerNormSpec)
            and self.dim == other.dim
            and self.rho == other.rho
        )

    def __hash__(self):
        return hash((self.dim, self.rho))


@dataclass(frozen=True, eq=False)
class BochnerSpaceSpec:
    """Measure space + inner norm + outer exponent p: fixes the whole space.

    The conjugate exponent q is always derived from p, never stored, so
    1/p + 1/q = 1 holds exactly.
    """

    mu: MeasureSpace
    x_norm: InnerNormSpec
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (1.0 < p < np.inf):
            raise ValueError("p must lie strictly between 1 and infinity")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def atom_count(self) -> int:
        return self.mu.atom_count

    @property
    def dim(self) -> int:
        return self.x_norm.dim

    @property
    def rho(self) -> float:
        return self.x_norm.rho

    @property
    def weights(self) -> np.ndarray:
        return self.mu.weights

    def __eq__(self, other):
        return (
            isinstance(other, BochnerSpaceSpec)
            and self.mu == other.mu
            and self.x_norm == other.x_norm
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.mu, self.x_norm, self.p))


def _check_same_space(a, b):
    if a.space != b.space:
        raise SpaceMismatchError("operands live in different spaces")


@dataclass(frozen=True, eq=False)
class _AtomArray:
    """Shared container: one R^dim value per atom, stored as a (n, dim) array."""

    space: BochnerSpaceSpec
    values: np.ndarray

    def __post_init__(self):
        v = _readonly(self.values)
        expected = (self.space.atom_count, self.space.dim)
        if v.shape != expected:
            raise ValueError(f"values must have shape {expected}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", v)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_same_space(self, other)
        return type(self)(self.space, self.values + other.values)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_same_space(self, other)
        return type(self)(self.space, self.values - other.values)

    def __mul__(self, lam):
        if not np.isscalar(lam):
            return NotImplemented
        return type(self)(self.space, float(lam) * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(self.space, -self.values)

    def is_zero(self) -> bool:
        return not np.any(self.values)


class BochnerElement(_AtomArray):
    """An element of the primal space: row i is the value on atom i."""


class DualElement(_AtomArray):
    """Same shape as an element, read in the dual space (conjugate exponents)."""


@dataclass(frozen=True, eq=False)
class SupportSet:
    """A nonempty subset A of atoms; induces the supported subspace.

    The complement may be empty (the whole-space case).
    """

    space: BochnerSpaceSpec
    indices: np.ndarray

    def __post_init__(self):
        idx = np.unique(np.asarray(self.indices, dtype=int))
        if idx.size == 0:
            raise ValueError("support must contain at least one atom")
        n = self.space.atom_count
        if idx.min() < 0 or idx.max() >= n:
            raise ValueError("support indices out of range")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        mask = np.zeros(n, dtype=bool)
        mask[idx] = True
        mask.setflags(write=False)
        object.__setattr__(self, "_mask", mask)

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def complement_indices(self) -> np.ndarray:
        return np.flatnonzero(~self._mask)

    @property
    def is_full(self) -> bool:
        return bool(self._mask.all())

    @property
    def measure(self) -> float:
        return self.space.mu.measure(self.indices)

    @property
    def complement_measure(self) -> float:
        rest = self.complement_indices
        return float(self.space.weights[rest].sum()) if rest.size else 0.0

    def complement(self) -> "SupportSet":
        rest = self.complement_indices
        if rest.size == 0:
            raise ValueError("support covers all atoms; complement is empty")
        return SupportSet(self.space, rest)

    def __eq__(self, other):
        return (
            isinstance(other, SupportSet)
            and self.space == other.space
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.space, self.indices.tobytes()))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def zeros(space: BochnerSpaceSpec) -> BochnerElement:
    """The zero element."""
    return BochnerElement(space, np.zeros((space.atom_count, space.dim)))


def norm_x(x_norm: InnerNormSpec, v) -> float:
    """l_rho norm of a single R^dim vector."""
    v = np.asarray(v, dtype=float)
    if v.shape != (x_norm.dim,):
        raise ValueError(f"vector must have shape ({x_norm.dim},)")
    return float(np.sum(np.abs(v) ** x_norm.rho) ** (1.0 / x_norm.rho))


def norm_lp(f: BochnerElement) -> float:
    """Outer norm: weighted p-mean of the row l_rho norms."""
    sp = f.space
    return float(_kernels.lp_norm(sp.weights, f.values, sp.rho, sp.p))


def norm_lq(phi: DualElement) -> float:
    """Dual-space norm: conjugate exponents q and rho' throughout."""
    sp = phi.space
    return float(
        _kernels.lp_norm(sp.weights, phi.values, sp.x_norm.rho_dual, sp.q)
    )


def pairing(phi: DualElement, f: BochnerElement) -> float:
    """Canonical evaluation of a dual element on an element.

    The weighted sum of per-atom dot products; bilinear, and bounded by the
    product of the two norms (Hoelder).
    """
    if not isinstance(phi, DualElement) or not isinstance(f, BochnerElement):
        raise TypeError("pairing expects (DualElement, BochnerElement)")
    _check_same_space(phi, f)
    w = phi.space.weights
    return float(np.sum(w[:, None] * phi.values * f.values))


def restrict(f: _AtomArray, a: SupportSet) -> _AtomArray:
    """Zero every row outside the support set; rows inside are copied bitwise."""
    if f.space != a.space:
        raise SpaceMismatchError("support set belongs to a different space")
    vals = np.zeros_like(f.values)
    vals[a.mask] = f.values[a.mask]
    return type(f)(f.space, vals)


def restrict_complement(f: _AtomArray, a: SupportSet) -> _AtomArray:
    """Keep only the rows outside the support set."""
    if f.space != a.space:
        raise SpaceMismatchError("support set belongs to a different space")
    vals = np.zeros_like(f.values)
    vals[~a.mask] = f.values[~a.mask]
    return type(f)(f.space, vals)


def indicator(a: SupportSet, x) -> BochnerElement:
    """The element equal to x on every atom of A and zero elsewhere."""
    x = np.asarray(x, dtype=float)
    if x.shape != (a.space.dim,):
        raise ValueError(f"vector must have shape ({a.space.dim},)")
    vals = np.zeros((a.space.atom_count, a.space.dim))
    vals[a.mask] = x
    return BochnerElement(a.space, vals)


def simple_embed(a: SupportSet, x) -> BochnerElement:
    """Isometric embedding of a vector: mu(A)^(-1/p) times the indicator.

    The outer norm of the result equals the l_rho norm of x up to rounding.
    """
    scale = a.measure ** (-1.0 / a.space.p)
    x = np.asarray(x, dtype=float)
    return indicator(a, scale * x)


def add(f: _AtomArray, g: _AtomArray) -> _AtomArray:
    return f + g


def scale(lam: float, f: _AtomArray) -> _AtomArray:
    return float(lam) * f

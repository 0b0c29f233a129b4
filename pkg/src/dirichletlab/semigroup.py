"""Heat semigroup, kernel, and resolvent for spaces and Dirichlet regions.

Every function here accepts either a `WeightedSpace` (the conservative
semigroup on the whole vertex set) or a `Region` (the absorbing/Dirichlet
semigroup: functions vanish outside the members, and fields are given in
member order).  Spectral data is computed once per target and memoized on
the target's cache.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.sparse.linalg import expm_multiply, splu

from .reports import DENSE_EIG_LIMIT
from .space import Region, WeightedSpace

__all__ = [
    "SpectralCache",
    "spectral_cache",
    "evolve",
    "heat_kernel",
    "resolvent",
]


def _parts(target):
    """Laplacian, measure, and memo dict for a space or region target."""
    if isinstance(target, Region):
        return target.restricted_laplacian, target.restricted_measure, target._cache
    if isinstance(target, WeightedSpace):
        return target.laplacian, target.measure, target._cache
    raise TypeError(f"expected WeightedSpace or Region, got {type(target).__name__}")


def _check_field(f, dim):
    f = np.asarray(f, dtype=float)
    if f.shape != (dim,):
        raise ValueError(f"field has shape {f.shape}, expected ({dim},)")
    return f


@dataclass(frozen=True)
class SpectralCache:
    """Full eigendecomposition of the generator on one target.

    `basis` columns are m-orthonormal (basis.T @ diag(m) @ basis = I) and
    diagonalize H with the ascending `eigenvalues`, so the semigroup, kernel
    and resolvent are all cheap transforms of the coefficient vector.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    measure: np.ndarray

    @property
    def dim(self) -> int:
        return self.measure.size

    def project(self, f: np.ndarray) -> np.ndarray:
        """m-inner-product coefficients of f in the eigenbasis."""
        return self.basis.T @ (self.measure * f)

    def evolve(self, f: np.ndarray, t) -> np.ndarray:
        """exp(-tH) f for scalar t (1-D result) or a grid (len(t), dim)."""
        coef = self.project(f)
        grid = np.atleast_1d(np.asarray(t, dtype=float))
        out = (np.exp(-np.outer(grid, self.eigenvalues)) * coef) @ self.basis.T
        return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out

    def kernel(self, t: float) -> np.ndarray:
        """Heat kernel p(t, x, y) = sum_i exp(-l_i t) v_i(x) v_i(y); symmetric."""
        if t < 0:
            raise ValueError("kernel time must be nonnegative")
        return (self.basis * np.exp(-float(t) * self.eigenvalues)) @ self.basis.T

    def resolvent(self, f: np.ndarray, lam: float) -> np.ndarray:
        shifted = self.eigenvalues + float(lam)
        if np.min(shifted) <= 0:
            raise ValueError("resolvent undefined: shifted spectrum touches zero")
        return self.basis @ (self.project(f) / shifted)

    def reconstruct(self) -> np.ndarray:
        """Dense generator rebuilt from the decomposition (for validation)."""
        return (self.basis * self.eigenvalues) @ self.basis.T @ np.diag(self.measure)


def spectral_cache(target) -> SpectralCache:
    """Memoized full eigendecomposition of the generator on the target."""
    laplacian, measure, memo = _parts(target)
    cached = memo.get("spectral")
    if cached is not None:
        return cached
    dim = measure.size
    if dim > DENSE_EIG_LIMIT:
        raise ValueError(
            f"dense spectral decomposition refused for dim={dim} > {DENSE_EIG_LIMIT}; "
            "use evolve(..., method='krylov')"
        )
    vals, vecs = eigh(laplacian.toarray(), np.diag(measure))
    # snap round-off at the bottom of the spectrum to an exact 0 so that
    # conservative targets stay conservative for arbitrarily large times
    tiny = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    vals = np.where(np.abs(vals) < tiny, 0.0, vals)
    cache = SpectralCache(eigenvalues=vals, basis=vecs, measure=measure)
    memo["spectral"] = cache
    return cache


def _krylov_evolve(target, f, grid):
    laplacian, measure, _ = _parts(target)
    A = -sp.diags(1.0 / measure) @ laplacian
    rows = [expm_multiply(A.tocsc() * float(t), f) if t > 0 else f.copy() for t in grid]
    return np.vstack(rows)


def evolve(target, f, t, method: str = "auto") -> np.ndarray:
    """Heat semigroup action exp(-tH) f on a space or Dirichlet region.

    `t` may be a scalar (returns a field) or a 1-D grid (returns one row per
    time).  `method` is "dense" (spectral), "krylov" (sparse expm), or "auto"
    (dense up to the size limit, Krylov beyond).
    """
    _, measure, _ = _parts(target)
    f = _check_field(f, measure.size)
    scalar = np.isscalar(t) or np.ndim(t) == 0
    grid = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(grid < 0):
        raise ValueError("semigroup times must be nonnegative")
    if method == "auto":
        method = "dense" if measure.size <= DENSE_EIG_LIMIT else "krylov"
    if method == "dense":
        out = spectral_cache(target).evolve(f, grid)
    elif method == "krylov":
        out = _krylov_evolve(target, f, grid)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out[0] if scalar else out


def heat_kernel(target, t: float) -> np.ndarray:
    """Dense heat kernel matrix p(t, ., .); the operator is p @ diag(m)."""
    return spectral_cache(target).kernel(t)


def resolvent(target, f, lam: float) -> np.ndarray:
    """Solve (H + lam) u = f, i.e. the lam-resolvent applied to f.

    Uses a sparse LU of (L + lam M), memoized per shift; lam = 0 is allowed
    only when the target is nondegenerate (a region with boundary, or a
    disconnected-free space would be singular).
    """
    laplacian, measure, memo = _parts(target)
    f = _check_field(f, measure.size)
    if lam < 0:
        raise ValueError("resolvent shift must be nonnegative")
    key = ("resolvent_lu", float(lam))
    lu = memo.get(key)
    if lu is None:
        matrix = (laplacian + float(lam) * sp.diags(measure)).tocsc()
        try:
            lu = splu(matrix)
        except RuntimeError as err:
            raise ValueError(f"resolvent matrix is singular at shift {lam}") from err
        memo[key] = lu
    return lu.solve(measure * f)

"""Finite weighted spaces: vertex measure, edge conductances, energy, regions.

A space is a finite connected-or-not graph carrying a strictly positive
vertex measure m and symmetric nonnegative conductances w.  The quadratic
form

    E(f, g) = 1/2 * sum_{x,y} w(x,y) (f(x)-f(y)) (g(x)-g(y))

is a Dirichlet form on L^2(m), and its generator

    (Hf)(x) = (1/m(x)) * sum_y w(x,y) (f(x)-f(y))

is self-adjoint with respect to the m-inner product.  Scalar fields are plain
1-D numpy arrays aligned with the vertex order.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .reports import CheckReport, DENSE_EIG_LIMIT

__all__ = [
    "WeightedSpace",
    "Region",
    "energy",
    "apply_generator",
    "energy_density",
    "irreducibility_check",
    "spectral_gap_check",
    "metric_check",
    "hop_distances",
]


class WeightedSpace:
    """Finite vertex set with positive measure and symmetric conductances.

    Parameters
    ----------
    measure : array of positive reals, one per vertex.
    edges : integer array of shape (m, 2); undirected, no self-loops,
        no duplicates (after orienting each pair low-high).
    weights : positive conductance per edge; zero-weight edges are dropped.
    coords : optional (n, d) planar/space embedding, used for Euclidean
        metrics and plotting.
    metric : optional dense (n, n) distance matrix overriding the default
        metric (Euclidean when coords exist, hop count otherwise).
    labels : optional per-vertex annotations (kept verbatim, e.g. gasket
        cell addresses).

    Instances are immutable: all arrays are frozen after validation.
    """

    def __init__(self, measure, edges, weights, coords=None, metric=None, labels=None):
        measure = np.ascontiguousarray(measure, dtype=float)
        if measure.ndim != 1 or measure.size == 0:
            raise ValueError("measure must be a nonempty 1-D array")
        if not np.all(np.isfinite(measure)) or np.any(measure <= 0):
            raise ValueError("measure must be strictly positive and finite at every vertex")
        n = measure.size

        edges = np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2)
        weights = np.ascontiguousarray(weights, dtype=float).reshape(-1)
        if edges.shape[0] != weights.shape[0]:
            raise ValueError("edges and weights must have matching lengths")
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed (conductance is zero on the diagonal)")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ValueError("conductances must be finite and nonnegative")

        # canonical orientation + deterministic order; drop zero conductances
        keep = weights > 0
        edges, weights = edges[keep], weights[keep]
        edges = np.sort(edges, axis=1)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges, weights = edges[order], weights[order]
        if edges.shape[0] > 1 and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
            raise ValueError("duplicate edge; conductances must be given once per vertex pair")

        self.measure = measure
        self.edges = edges
        self.weights = weights
        self.n = n

        data = np.concatenate([weights, weights])
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        self.adjacency = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        self.degrees = np.asarray(self.adjacency.sum(axis=1)).ravel()
        self.laplacian = sp.diags(self.degrees) - self.adjacency
        self.laplacian = self.laplacian.tocsr()

        if coords is not None:
            coords = np.ascontiguousarray(coords, dtype=float)
            if coords.shape[0] != n:
                raise ValueError("coords must provide one point per vertex")
        self.coords = coords

        if metric is not None:
            metric = np.ascontiguousarray(metric, dtype=float)
            if metric.shape != (n, n):
                raise ValueError("metric must be a dense (n, n) matrix")
            if np.any(metric < 0) or not np.allclose(metric, metric.T):
                raise ValueError("metric must be symmetric and nonnegative")
            if np.any(np.diag(metric) != 0):
                raise ValueError("metric must vanish on the diagonal")
        self.metric = metric

        self.labels = None if labels is None else tuple(labels)

        for arr in (self.measure, self.edges, self.weights):
            arr.setflags(write=False)
        if self.coords is not None:
            self.coords.setflags(write=False)
        if self.metric is not None:
            self.metric.setflags(write=False)
        self._cache: dict = {}

    def __repr__(self):
        return f"WeightedSpace(n={self.n}, edges={self.edges.shape[0]})"

    def field(self, values) -> np.ndarray:
        """Validate `values` as a scalar field on this space."""
        f = np.asarray(values, dtype=float)
        if f.shape != (self.n,):
            raise ValueError(f"field has shape {f.shape}, expected ({self.n},)")
        return f

    def generator_matrix(self) -> np.ndarray:
        """Dense generator H = diag(1/m) (D - W); m-self-adjoint, Markovian."""
        return self.laplacian.toarray() / self.measure[:, None]

    def total_rates(self) -> np.ndarray:
        """Jump rates r(x) = deg(x)/m(x) of the associated continuous-time chain."""
        return self.degrees / self.measure

    def distances_from(self, sources) -> np.ndarray:
        """Metric distance rows d(s, .) for the given source vertices.

        Uses the explicit metric when present, else Euclidean distance on
        coords, else hop count.  Returns shape (len(sources), n).
        """
        sources = np.asarray(sources, dtype=np.int64).reshape(-1)
        if self.metric is not None:
            return self.metric[sources]
        if self.coords is not None:
            diff = self.coords[sources][:, None, :] - self.coords[None, :, :]
            return np.sqrt(np.sum(diff * diff, axis=2))
        return hop_distances(self, sources)


class Region:
    """A vertex subset U with derived interior and vertex boundary.

    `members` is the subset U, `interior` the members with no conductance to
    the complement, and `boundary` the complement vertices with positive
    conductance to a member.  The restricted generator (Dirichlet condition:
    fields vanish outside U) is the principal submatrix of H on the members,
    realized through `restricted_laplacian` (which keeps full vertex degrees
    on its diagonal).
    """

    def __init__(self, space: WeightedSpace, members):
        given = np.asarray(members, dtype=np.int64).reshape(-1)
        if given.size == 0:
            raise ValueError("region must have at least one member")
        members = np.unique(given)
        if members.size != given.size:
            raise ValueError("duplicate members in region")
        if members.min() < 0 or members.max() >= space.n:
            raise ValueError("region member out of range")

        self.space = space
        self.members = members
        mask = np.zeros(space.n, dtype=bool)
        mask[members] = True
        self.member_mask = mask

        # positive conductance into the complement / into the members
        touches_out = space.adjacency.dot((~mask).astype(float)) > 0
        touches_in = space.adjacency.dot(mask.astype(float)) > 0
        self.interior = np.flatnonzero(mask & ~touches_out)
        self.boundary = np.flatnonzero(~mask & touches_in)
        self.closure = np.concatenate([self.members, self.boundary])
        self.closure.sort()

        self.restricted_laplacian = space.laplacian[np.ix_(members, members)].tocsr()
        self.restricted_measure = space.measure[members]

        # ambient index -> position in `members`, -1 off the region
        local = np.full(space.n, -1, dtype=np.int64)
        local[members] = np.arange(members.size)
        self.local_index = local

        for arr in (self.members, self.member_mask, self.interior, self.boundary,
                    self.closure, self.restricted_measure, self.local_index):
            arr.setflags(write=False)
        self._cache: dict = {}

    def __repr__(self):
        return (f"Region(members={self.members.size}, interior={self.interior.size}, "
                f"boundary={self.boundary.size})")

    @property
    def is_full(self) -> bool:
        return self.members.size == self.space.n

    def localize(self, f) -> np.ndarray:
        """Restrict an ambient field to the members."""
        return self.space.field(f)[self.members]

    def embed(self, u) -> np.ndarray:
        """Zero-extend a member field to the ambient space."""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.members.size,):
            raise ValueError(f"member field has shape {u.shape}, expected ({self.members.size},)")
        out = np.zeros(self.space.n)
        out[self.members] = u
        return out


def _pair_fields(space: WeightedSpace, f, g):
    f = space.field(f)
    g = f if g is None else space.field(g)
    return f, g


def energy(space: WeightedSpace, f, g=None) -> float:
    """Dirichlet energy E(f, g) = 1/2 sum_{x,y} w(x,y)(f(x)-f(y))(g(x)-g(y)).

    With g omitted returns the quadratic form E(f, f) >= 0.
    """
    f, g = _pair_fields(space, f, g)
    a, b = space.edges[:, 0], space.edges[:, 1]
    return float(np.sum(space.weights * (f[a] - f[b]) * (g[a] - g[b])))


def apply_generator(space: WeightedSpace, f) -> np.ndarray:
    """Apply the generator: (Hf)(x) = (1/m(x)) sum_y w(x,y)(f(x)-f(y))."""
    f = space.field(f)
    return space.laplacian.dot(f) / space.measure


def energy_density(space: WeightedSpace, f, g=None) -> np.ndarray:
    """Per-vertex energy density (carre du champ surrogate).

    Gamma(f,g)(x) = (1/(2 m(x))) sum_y w(x,y)(f(x)-f(y))(g(x)-g(y)); the
    symmetric split makes sum_x Gamma(f,g)(x) m(x) recover energy(f, g).
    """
    f, g = _pair_fields(space, f, g)
    a, b = space.edges[:, 0], space.edges[:, 1]
    per_edge = space.weights * (f[a] - f[b]) * (g[a] - g[b])
    acc = np.zeros(space.n)
    np.add.at(acc, a, per_edge)
    np.add.at(acc, b, per_edge)
    return acc / (2.0 * space.measure)


def hop_distances(space: WeightedSpace, sources) -> np.ndarray:
    """Unweighted shortest-path distances from the given source vertices."""
    sources = np.asarray(sources, dtype=np.int64).reshape(-1)
    return csgraph.dijkstra(space.adjacency, indices=sources, unweighted=True)


def irreducibility_check(space: WeightedSpace) -> CheckReport:
    """Pass iff the conductance graph is connected (positivity improving)."""
    n_comp, labels = csgraph.connected_components(space.adjacency, directed=False)
    passed = n_comp == 1
    witness = None
    if not passed:
        # first vertex of the second component witnesses the split
        witness = int(np.flatnonzero(labels != labels[0])[0])
    return CheckReport(
        passed=passed,
        worst_violation=float(n_comp - 1),
        witness_vertex=witness,
        witness_time=None,
        method="connectivity",
        parameters={"components": int(n_comp)},
    )


def _lambda_min(laplacian: sp.csr_matrix, measure: np.ndarray) -> float:
    """Smallest eigenvalue of diag(1/m) L, computed m-symmetrically."""
    n = measure.size
    if n == 1:
        return float(laplacian[0, 0] / measure[0])
    if n <= DENSE_EIG_LIMIT:
        from scipy.linalg import eigh

        vals = eigh(laplacian.toarray(), np.diag(measure), eigvals_only=True,
                    subset_by_index=[0, 0])
        return float(vals[0])
    from scipy.sparse.linalg import eigsh

    scale = sp.diags(1.0 / np.sqrt(measure))
    sym = (scale @ laplacian @ scale).tocsc()
    vals = eigsh(sym, k=1, which="SA", return_eigenvectors=False)
    return float(vals[0])


def spectral_gap_check(region: Region, tol: float = 1e-12) -> CheckReport:
    """Report lambda_min of the restricted generator; pass iff it exceeds tol.

    A region with empty vertex boundary inside a connected space has the
    constants in its kernel; the report flags that case as degenerate.
    """
    lam_min = _lambda_min(region.restricted_laplacian, region.restricted_measure)
    degenerate = region.boundary.size == 0
    violation = float(tol - lam_min)
    return CheckReport(
        passed=violation <= 0,
        worst_violation=violation,
        witness_vertex=None,
        witness_time=None,
        method="eigenvalue",
        parameters={"lambda_min": lam_min, "tol": float(tol), "degenerate": degenerate},
    )


def metric_check(space: WeightedSpace, limit: int = 500) -> CheckReport:
    """Exhaustively verify metric axioms (symmetry, identity, triangle).

    Only defined for spaces with an explicit metric and at most `limit`
    vertices; the triangle scan is cubic.
    """
    if space.metric is None:
        raise ValueError("space has no explicit metric to check")
    if space.n > limit:
        raise ValueError(f"metric check is exhaustive; refusing n={space.n} > {limit}")
    d = space.metric
    worst = float(np.max(np.abs(d - d.T)))
    worst = max(worst, float(np.max(np.abs(np.diag(d)))))
    off = d + np.where(np.eye(space.n, dtype=bool), np.inf, 0.0)
    if np.any(off == 0):
        worst = max(worst, 1.0)  # distinct vertices at distance zero
    witness = None
    excess = -np.inf
    for k in range(space.n):
        via = d[:, k][:, None] + d[k, :][None, :]
        gap = d - via
        g = float(gap.max())
        if g > excess:
            excess = g
            witness = int(np.unravel_index(np.argmax(gap), gap.shape)[0])
    worst = max(worst, excess)
    return CheckReport(
        passed=worst <= 1e-12,
        worst_violation=worst - 1e-12,
        witness_vertex=witness if worst > 1e-12 else None,
        witness_time=None,
        method="metric-axioms",
        parameters={"n": space.n},
    )

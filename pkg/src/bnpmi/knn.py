"""k-th nearest-neighbor Euclidean distances with a positive-distance rule.

Weighted atom sets drawn from a posterior Dirichlet process repeat data
rows, so many pairwise distances are exactly zero.  Throughout the package
the k-th neighbor distance of a point means the k-th smallest *strictly
positive* distance to the other points: coincident points are skipped (they
would put a log 0 into the entropy sums), while ties at positive distance
count with their multiplicity.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DegenerateSupport, InvalidParameter


def _as_matrix(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
        raise InvalidParameter(f"expected a nonempty (m, d) point array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidParameter("points contain NaN or Inf")
    return pts


def knn_distances(points, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbor at positive distance.

    Parameters
    ----------
    points : (m, d) array_like
        Point set; a 1-d array is read as m points on the line.
    k : int
        Neighbor order, 1 <= k.

    Returns
    -------
    (m,) ndarray of strictly positive distances.

    Raises
    ------
    DegenerateSupport
        If some point has fewer than k neighbors at positive distance
        (the offending point index is attached).
    """
    pts = _as_matrix(points)
    if k < 1:
        raise InvalidParameter(f"neighbor order k must be >= 1, got {k}")
    m = pts.shape[0]
    uniq, inverse, counts = np.unique(pts, axis=0, return_inverse=True,
                                      return_counts=True)
    inverse = inverse.reshape(-1)
    deficient = (m - counts) < k
    if deficient.any():
        loc = int(np.flatnonzero(deficient)[0])
        bad = int(np.flatnonzero(inverse == loc)[0])
        raise DegenerateSupport(
            f"point {bad} has only {m - counts[loc]} neighbors at positive "
            f"distance; k={k} requires at least {k}", index=bad)
    if pts.shape[1] == 1:
        radii = _knn_sorted_line(uniq[:, 0], counts, k)
    elif uniq.shape[0] == m:
        # All locations distinct: the only zero in each row is the point
        # itself, so the k-th positive distance is the (k+1)-th smallest.
        dist = cdist(pts, pts)
        return np.partition(dist, k, axis=1)[:, k]
    else:
        radii = _knn_weighted(uniq, counts, k)
    return radii[inverse]


def _knn_weighted(uniq: np.ndarray, counts: np.ndarray, k: int) -> np.ndarray:
    """k-th positive neighbor distance among distinct locations with multiplicities."""
    dist = cdist(uniq, uniq)
    order = np.argsort(dist, axis=1, kind="stable")
    sorted_dist = np.take_along_axis(dist, order, axis=1)
    # Column 0 is the point itself (distance zero, excluded by the positive
    # rule); beyond it, accumulate multiplicities until k neighbors are covered.
    sorted_counts = counts[order[:, 1:]]
    covered = np.cumsum(sorted_counts, axis=1)
    cell = np.argmax(covered >= k, axis=1)
    return np.take_along_axis(sorted_dist[:, 1:], cell[:, None], axis=1)[:, 0]


def _knn_sorted_line(values: np.ndarray, counts: np.ndarray, k: int) -> np.ndarray:
    """Same computation on the line, where sorting localizes neighbors.

    ``values`` must be sorted and distinct (np.unique output).  The k
    nearest distinct values of values[i] lie within k positions on either
    side, so only a (u, 2k) window is examined.
    """
    u = values.size
    offsets = np.concatenate([np.arange(-k, 0), np.arange(1, k + 1)])
    idx = np.arange(u)[:, None] + offsets[None, :]
    valid = (idx >= 0) & (idx < u)
    idx = np.clip(idx, 0, u - 1)
    gaps = np.abs(values[idx] - values[:, None])
    gaps[~valid] = np.inf
    window_counts = np.where(valid, counts[idx], 0)
    order = np.argsort(gaps, axis=1, kind="stable")
    sorted_gaps = np.take_along_axis(gaps, order, axis=1)
    covered = np.cumsum(np.take_along_axis(window_counts, order, axis=1), axis=1)
    cell = np.argmax(covered >= k, axis=1)
    return np.take_along_axis(sorted_gaps, cell[:, None], axis=1)[:, 0]


def knn_distances_exact_oracle(points, k: int) -> np.ndarray:
    """Brute-force reference implementation: sort each point's distance list.

    Quadratic in time and memory per point; used to validate the vectorized
    paths, not for production runs.
    """
    pts = _as_matrix(points)
    if k < 1:
        raise InvalidParameter(f"neighbor order k must be >= 1, got {k}")
    m = pts.shape[0]
    out = np.empty(m)
    for i in range(m):
        d = np.sqrt(((pts - pts[i]) ** 2).sum(axis=1))
        positive = np.sort(d[d > 0.0])
        if positive.size < k:
            raise DegenerateSupport(
                f"point {i} has only {positive.size} neighbors at positive "
                f"distance; k={k} requires at least {k}", index=i)
        out[i] = positive[k - 1]
    return out

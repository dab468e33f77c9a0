"""Differential entropy estimators (nats) and closed forms.

Two plug-in estimators for i.i.d. samples: the classical 1-NN estimator and
its k-NN generalization.  Two weighted variants evaluate the entropy of a
finite-atom Dirichlet-process realization, replacing the 1/n average by the
realization's own weights.  Closed-form entropies of the standard families
serve as oracles for all of them.
"""

from __future__ import annotations

import numpy as np
from scipy.special import digamma, gammaln

from . import dp
from .errors import DegenerateSupport, InvalidParameter, Unsupported
from .knn import _as_matrix, knn_distances
from .sampling import (MaxwellProductSpec, MvNormalSpec, MvTSpec,
                       UniformProductSpec)

EULER_GAMMA = float(np.euler_gamma)


def log_unit_ball_volume(d: int) -> float:
    """log volume of the unit Euclidean ball in R^d."""
    if d < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {d}")
    return 0.5 * d * np.log(np.pi) - gammaln(0.5 * d + 1.0)


def harmonic_number(j: int) -> float:
    """L_j = sum_{r=1..j} 1/r, with L_0 = 0."""
    if j < 0:
        raise InvalidParameter(f"harmonic number index must be >= 0, got {j}")
    return float(np.sum(1.0 / np.arange(1, j + 1))) if j else 0.0


def kl_entropy(sample) -> float:
    """1-NN entropy estimate of an i.i.d. sample.

    (d/n) sum log rho_i + log V_d + gamma + log(n-1), where rho_i is the
    nearest-neighbor distance of point i and V_d the unit-ball volume.
    """
    x = _as_matrix(sample)
    n, d = x.shape
    if n < 2:
        raise InvalidParameter(f"need at least 2 points, got {n}")
    rho = knn_distances(x, 1)
    return (d * float(np.mean(np.log(rho))) + log_unit_ball_volume(d)
            + EULER_GAMMA + np.log(n - 1))


def knn_kl_entropy(sample, k: int) -> float:
    """k-NN entropy estimate of an i.i.d. sample.

    (d/n) sum log R_{i,k} + log V_d - L_{k-1} + gamma + log n.  At k=1 this
    exceeds kl_entropy by exactly log n - log(n-1).
    """
    if k < 1:
        raise InvalidParameter(f"neighbor order k must be >= 1, got {k}")
    x = _as_matrix(sample)
    n, d = x.shape
    if n < k + 1:
        raise InvalidParameter(f"need at least k+1={k + 1} points, got {n}")
    radii = knn_distances(x, k)
    return (d * float(np.mean(np.log(radii))) + log_unit_ball_volume(d)
            - harmonic_number(k - 1) + EULER_GAMMA + np.log(n))


def weighted_atom_entropy(weights, atoms, k: int) -> float:
    """Entropy of a weighted finite-support measure smoothed through k-NN
    distances.

    sum_j w_j log[m V_d R_{j,k}^d / k] - L_{k-1} + gamma + log k, where the
    sum runs over the m distinct support points, w_j is the total weight at
    point j, and R_{j,k} its k-th nearest-neighbor distance within the
    support.  The value is a functional of the measure itself: listing an
    atom twice with split weights changes nothing, so resampled atom lists
    that repeat locations are merged before any distance is measured.  The
    factor m inside the log makes the uniform-weight case collapse to
    knn_kl_entropy on the support exactly.
    """
    atoms = _as_matrix(atoms)
    weights = np.asarray(weights, dtype=float)
    n_atoms, d = atoms.shape
    if weights.shape != (n_atoms,):
        raise InvalidParameter(
            f"{weights.size} weights for {n_atoms} atoms")
    if not 1 <= k <= n_atoms - 1:
        raise InvalidParameter(
            f"neighbor order k={k} must lie in [1, {n_atoms - 1}] for {n_atoms} atoms")
    support, inverse = np.unique(atoms, axis=0, return_inverse=True)
    m = support.shape[0]
    if m < k + 1:
        raise DegenerateSupport(
            f"only {m} distinct atom locations, need at least k+1={k + 1}")
    mass = np.bincount(inverse.reshape(-1), weights=weights, minlength=m)
    radii = knn_distances(support, k)
    per_atom = (np.log(m) + log_unit_ball_volume(d)
                + d * np.log(radii) - np.log(k))
    return (float(mass @ per_atom) - harmonic_number(k - 1)
            + EULER_GAMMA + np.log(k))


def bnp_prior_entropy(dpr: dp.DpRealization, k: int) -> float:
    """Entropy of one prior-process realization."""
    if dpr.provenance != dp.PRIOR:
        raise InvalidParameter(
            f"expected a prior realization, got provenance {dpr.provenance!r}")
    return weighted_atom_entropy(dpr.weights, dpr.atoms, k)


def bnp_posterior_entropy(dpr: dp.DpRealization, k: int) -> float:
    """Entropy of one posterior-process realization."""
    if dpr.provenance != dp.POSTERIOR:
        raise InvalidParameter(
            f"expected a posterior realization, got provenance {dpr.provenance!r}")
    return weighted_atom_entropy(dpr.weights, dpr.atoms, k)


# ---------------------------------------------------------------------------
# Closed forms


def mv_normal_entropy(covariance) -> float:
    """(1/2) log((2 pi e)^d det Sigma)."""
    cov = np.asarray(covariance, dtype=float)
    if cov.ndim == 0:
        cov = cov.reshape(1, 1)
    d = cov.shape[0]
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0:
        raise InvalidParameter("covariance must have positive determinant")
    return 0.5 * (d * np.log(2.0 * np.pi * np.e) + logdet)


def mv_t_entropy(df: float, d: int, scale=None) -> float:
    """Entropy of the d-variate t with identity (or given) scale matrix."""
    if df <= 0:
        raise InvalidParameter(f"degrees of freedom must be > 0, got {df}")
    if d < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {d}")
    half_sum = 0.5 * (df + d)
    value = (-(gammaln(half_sum) - gammaln(0.5 * df) - 0.5 * d * np.log(df * np.pi))
             + half_sum * (digamma(half_sum) - digamma(0.5 * df)))
    if scale is not None:
        sign, logdet = np.linalg.slogdet(np.asarray(scale, dtype=float))
        if sign <= 0:
            raise InvalidParameter("scale must have positive determinant")
        value += 0.5 * logdet
    return float(value)


def maxwell_entropy(scale: float) -> float:
    """Entropy of the Maxwell-Boltzmann law with scale c."""
    if scale <= 0:
        raise InvalidParameter(f"Maxwell scale must be > 0, got {scale}")
    return float(np.log(scale * np.sqrt(2.0 * np.pi)) + EULER_GAMMA - 0.5)


def lognormal_entropy(mu: float, sigma: float) -> float:
    """Entropy of lognormal(mu, sigma^2)."""
    if sigma <= 0:
        raise InvalidParameter(f"log-deviation must be > 0, got {sigma}")
    return float(mu + 0.5 * np.log(2.0 * np.pi * np.e * sigma ** 2))


def uniform_entropy(low: float, high: float) -> float:
    """Entropy of U(low, high)."""
    if not low < high:
        raise InvalidParameter(f"need low < high, got [{low}, {high}]")
    return float(np.log(high - low))


def true_entropy(spec) -> float:
    """Closed-form entropy for families that have one; Unsupported otherwise."""
    if isinstance(spec, MvNormalSpec):
        return mv_normal_entropy(spec.covariance)
    if isinstance(spec, MvTSpec):
        return mv_t_entropy(spec.df, spec.dim, spec.scale)
    if isinstance(spec, MaxwellProductSpec):
        return spec.d * maxwell_entropy(spec.scale)
    if isinstance(spec, UniformProductSpec):
        return spec.d * uniform_entropy(spec.low, spec.high)
    raise Unsupported(
        f"no closed-form entropy for {type(spec).__name__}")

"""Finite-atom realizations of Dirichlet-process priors and posteriors.

A realization of DP(a, G) is approximated by N atoms Y_1..Y_N drawn i.i.d.
from the base measure, carrying symmetric Dirichlet(a/N, ..., a/N) weights.
Conjugacy gives the posterior the same form with concentration a + n and a
base that mixes the prior base (weight a/(a+n)) with the empirical measure
of the data (weight n/(a+n)), so posterior atom sets repeat data rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincinv, gammaln

from .errors import InvalidParameter
from .rng import as_generator
from .sampling import DistributionSpec, sample

PRIOR = "prior"
POSTERIOR = "posterior"

# Below this Dirichlet shape parameter the plain gamma sampler underflows to
# exact zeros; switch to sampling the logarithms instead.
_LOG_GAMMA_SHAPE_CUTOFF = 1e-3


@dataclass(frozen=True, eq=False)
class DpParams:
    """Prior process DP(concentration, base) with an N-atom approximation."""

    concentration: float
    n_atoms: int
    base: object

    def __post_init__(self):
        if not self.concentration > 0:
            raise InvalidParameter(
                f"concentration must be > 0, got {self.concentration}")
        if self.n_atoms < 2:
            raise InvalidParameter(f"need at least 2 atoms, got {self.n_atoms}")
        if not isinstance(self.base, DistributionSpec):
            raise InvalidParameter(
                f"base must be a distribution spec, got {type(self.base).__name__}")


@dataclass(frozen=True, eq=False)
class PosteriorBase:
    """Updated base measure after observing data: mixture of prior base and
    the empirical measure, with fresh-draw probability a/(a+n)."""

    concentration: float
    data: np.ndarray
    prior_base: object

    def __init__(self, concentration, data, prior_base):
        data = np.asarray(data, dtype=float)
        if data.ndim == 1:
            data = data[:, None]
        if data.ndim != 2 or data.shape[0] < 1:
            raise InvalidParameter(f"data must be a nonempty (n, d) matrix, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise InvalidParameter("data contains NaN or Inf")
        if not concentration > 0:
            raise InvalidParameter(f"concentration must be > 0, got {concentration}")
        if not isinstance(prior_base, DistributionSpec):
            raise InvalidParameter(
                f"prior base must be a distribution spec, got {type(prior_base).__name__}")
        if prior_base.dim != data.shape[1]:
            raise InvalidParameter(
                f"prior base has dimension {prior_base.dim} but data has {data.shape[1]} columns")
        object.__setattr__(self, "concentration", float(concentration))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "prior_base", prior_base)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def fresh_probability(self) -> float:
        return self.concentration / (self.concentration + self.n)


@dataclass(frozen=True, eq=False)
class DpRealization:
    """One random distribution: N weighted atoms plus its provenance."""

    weights: np.ndarray
    atoms: np.ndarray
    provenance: str

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        atoms = np.asarray(self.atoms, dtype=float)
        if atoms.ndim != 2:
            raise InvalidParameter(f"atoms must be an (N, d) matrix, got shape {atoms.shape}")
        if weights.shape != (atoms.shape[0],):
            raise InvalidParameter(
                f"{weights.shape[0] if weights.ndim == 1 else weights.shape} weights "
                f"for {atoms.shape[0]} atoms")
        if self.provenance not in (PRIOR, POSTERIOR):
            raise InvalidParameter(f"unknown provenance {self.provenance!r}")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise InvalidParameter("weights must be finite and nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidParameter(f"weights sum to {weights.sum()!r}, not 1")
        if not np.all(np.isfinite(atoms)):
            raise InvalidParameter("atoms contain NaN or Inf")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "atoms", atoms)

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]


def dirichlet_weights(concentration: float, n_atoms: int, rng) -> np.ndarray:
    """Symmetric Dirichlet(concentration/n_atoms, ...) weight vector.

    Sampled as normalized Gamma variates.  For very small shapes the gamma
    sampler underflows to exact zeros, so the logarithms are sampled instead
    via log Gamma(s) = log Gamma(s+1) + log(U)/s and normalized with the
    usual max-shift; the result is then dominated by a single atom, which is
    the correct a -> 0 behavior.
    """
    if not concentration > 0:
        raise InvalidParameter(f"concentration must be > 0, got {concentration}")
    if n_atoms < 1:
        raise InvalidParameter(f"need at least 1 atom, got {n_atoms}")
    g = as_generator(rng)
    shape = concentration / n_atoms
    for _ in range(100):
        if shape < _LOG_GAMMA_SHAPE_CUTOFF:
            boosted = g.standard_gamma(shape + 1.0, n_atoms)
            log_gamma = np.log(boosted) + np.log(g.random(n_atoms)) / shape
            peak = log_gamma.max()
            if not np.isfinite(peak):
                continue
            weights = np.exp(log_gamma - peak)
        else:
            weights = g.standard_gamma(shape, n_atoms)
        total = weights.sum()
        if np.isfinite(total) and total > 0:
            return weights / total
    raise InvalidParameter(
        f"gamma sampler returned no positive mass for shape {shape}")


def dirichlet_weights_from_uniforms(concentration: float, uniforms) -> np.ndarray:
    """Symmetric Dirichlet weight vector driven by supplied uniform variates.

    Entry i is the Gamma(concentration/N) quantile of uniforms[i], then the
    vector is normalized.  Because each weight is a monotone function of its
    uniform, vectors built from the same uniforms at different concentrations
    are maximally coupled, which turns comparisons across concentrations into
    common-random-number comparisons.  Worked in log space: where the
    quantile underflows to an exact zero, log x is recovered from the
    small-shape expansion log x = (log u + log Gamma(1+s)) / s.
    """
    if not concentration > 0:
        raise InvalidParameter(f"concentration must be > 0, got {concentration}")
    u = np.asarray(uniforms, dtype=float)
    if u.ndim != 1 or u.size < 1:
        raise InvalidParameter(f"uniforms must be a nonempty vector, got shape {u.shape}")
    if np.any(u < 0) or np.any(u >= 1) or not np.all(np.isfinite(u)):
        raise InvalidParameter("uniform variates must lie in [0, 1)")
    shape = concentration / u.size
    x = gammaincinv(shape, u)
    with np.errstate(divide="ignore"):
        log_x = np.where(x > 0.0, np.log(np.where(x > 0.0, x, 1.0)),
                         (np.log(u) + gammaln(1.0 + shape)) / shape)
    peak = log_x.max()
    if not np.isfinite(peak):
        raise InvalidParameter("every quantile underflowed to zero mass")
    weights = np.exp(log_x - peak)
    return weights / weights.sum()


def draw_prior_dp(params: DpParams, rng) -> DpRealization:
    """One realization of the approximated prior process."""
    g = as_generator(rng)
    weights = dirichlet_weights(params.concentration, params.n_atoms, g)
    atoms = sample(params.base, params.n_atoms, g)
    return DpRealization(weights, atoms, PRIOR)


def sample_posterior_base(base: PosteriorBase, n_atoms: int, rng) -> np.ndarray:
    """n_atoms i.i.d. draws from the updated base measure.

    Each draw is a fresh prior-base variate with probability a/(a+n) and a
    uniformly chosen data row otherwise.
    """
    if n_atoms < 1:
        raise InvalidParameter(f"need at least 1 atom, got {n_atoms}")
    g = as_generator(rng)
    fresh = g.random(n_atoms) < base.fresh_probability
    rows = g.integers(0, base.n, size=n_atoms)
    atoms = base.data[rows]
    n_fresh = int(fresh.sum())
    if n_fresh:
        atoms[fresh] = sample(base.prior_base, n_fresh, g)
    return atoms


def draw_posterior_dp(base: PosteriorBase, n_atoms: int, rng) -> DpRealization:
    """One realization of the approximated posterior process."""
    if n_atoms < 2:
        raise InvalidParameter(f"need at least 2 atoms, got {n_atoms}")
    g = as_generator(rng)
    weights = dirichlet_weights(base.concentration + base.n, n_atoms, g)
    atoms = sample_posterior_base(base, n_atoms, g)
    return DpRealization(weights, atoms, POSTERIOR)


def marginal_realization(dpr: DpRealization, coord: int) -> DpRealization:
    """Project a realization onto one coordinate, keeping the same weights.

    Joint and marginal entropies of a draw must be evaluated on the same
    realization, so this is a view of the atoms, not a new draw.
    """
    if not 0 <= coord < dpr.dim:
        raise InvalidParameter(
            f"coordinate {coord} out of range for dimension {dpr.dim}")
    return DpRealization(dpr.weights, dpr.atoms[:, coord:coord + 1], dpr.provenance)

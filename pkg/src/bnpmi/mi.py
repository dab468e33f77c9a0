"""Mutual-information draws and point estimation.

One MI draw evaluates a single Dirichlet-process realization: the entropy
of each coordinate projection minus the joint entropy, clamped at zero.
Repeating over independent realizations yields the prior (no data) or
posterior (data observed) Monte Carlo distribution of MI, summarized by the
midhinge of the draws.  Closed-form MI values for the normal and t families
calibrate everything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dp import (POSTERIOR, PRIOR, DpParams, DpRealization, PosteriorBase,
                 draw_posterior_dp, draw_prior_dp, marginal_realization)
from .entropy import mv_t_entropy, weighted_atom_entropy
from .errors import (DegenerateSupport, InsufficientDraws, InvalidParameter,
                     Unsupported)
from .knn import _as_matrix
from .rng import RngStream
from .sampling import (MaxwellProductSpec, MvNormalSpec, MvTSpec,
                       UniformProductSpec, standard_normal_spec)

DEFAULT_A_ESTIMATE = 0.05
DEFAULT_K = 3
DEFAULT_N_ATOMS = 500
DEFAULT_DRAWS = 1000


@dataclass(frozen=True, eq=False)
class MiConfig:
    """Knobs for generating MI draws.

    coupled_marginals: evaluate marginal entropies on projections of the
    same realization as the joint (the default); when False, each marginal
    entropy comes from an independent realization of the same process.
    """

    a: float = DEFAULT_A_ESTIMATE
    k: int = DEFAULT_K
    n_atoms: int = DEFAULT_N_ATOMS
    draws: int = DEFAULT_DRAWS
    base: object = None
    coupled_marginals: bool = True
    retry_cap: int = 10

    def __post_init__(self):
        if not self.a > 0:
            raise InvalidParameter(f"concentration must be > 0, got {self.a}")
        if self.k < 1:
            raise InvalidParameter(f"neighbor order k must be >= 1, got {self.k}")
        if self.n_atoms < self.k + 1:
            raise InvalidParameter(
                f"need at least k+1={self.k + 1} atoms, got {self.n_atoms}")
        if self.draws < 1:
            raise InvalidParameter(f"need at least 1 draw, got {self.draws}")
        if self.retry_cap < 0:
            raise InvalidParameter(f"retry cap must be >= 0, got {self.retry_cap}")


@dataclass(frozen=True, eq=False)
class MiDraws:
    """Monte Carlo MI values with their provenance and generating config."""

    values: np.ndarray
    provenance: str
    config: MiConfig

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise InvalidParameter(f"values must be a nonempty vector, got shape {values.shape}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise InvalidParameter("MI draws must be finite and nonnegative")
        if self.provenance not in (PRIOR, POSTERIOR):
            raise InvalidParameter(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class MiEstimate:
    """Midhinge point estimate with the quartiles it came from."""

    point: float
    q1: float
    q3: float
    draws: MiDraws


def mi_draw(dpr: DpRealization, k: int) -> float:
    """MI of one realization: [sum of marginal entropies - joint entropy]+."""
    if dpr.dim < 2:
        raise InvalidParameter(
            f"mutual information needs d >= 2 coordinates, got {dpr.dim}")
    joint = weighted_atom_entropy(dpr.weights, dpr.atoms, k)
    marginals = sum(
        weighted_atom_entropy(dpr.weights, marginal_realization(dpr, i).atoms, k)
        for i in range(dpr.dim))
    return max(0.0, marginals - joint)


def _uncoupled_draw(draw_realization, k: int, rng: RngStream) -> float:
    """MI with each marginal entropy taken from an independent realization."""
    dpr = draw_realization(rng.substream(0))
    if dpr.dim < 2:
        raise InvalidParameter(
            f"mutual information needs d >= 2 coordinates, got {dpr.dim}")
    joint = weighted_atom_entropy(dpr.weights, dpr.atoms, k)
    marginals = 0.0
    for i in range(dpr.dim):
        fresh = draw_realization(rng.substream(i + 1))
        marginals += weighted_atom_entropy(
            fresh.weights, marginal_realization(fresh, i).atoms, k)
    return max(0.0, marginals - joint)


def mi_draws(config: MiConfig, rng: RngStream, data=None, dim: int | None = None) -> MiDraws:
    """Generate config.draws independent MI values.

    With ``data`` the draws come from the posterior process updated by the
    observations; without it they come from the prior process, whose
    dimension is taken from config.base or ``dim``.  Each draw uses its own
    substream; a draw hitting a degenerate neighbor configuration is retried
    with a fresh realization up to config.retry_cap times.
    """
    if not isinstance(rng, RngStream):
        raise InvalidParameter("mi_draws needs an RngStream to derive per-draw streams")
    if data is not None:
        data = _as_matrix(data)
        d = data.shape[1]
        base = config.base if config.base is not None else standard_normal_spec(d)
        posterior = PosteriorBase(config.a, data, base)
        if posterior.prior_base.dim != d:
            raise InvalidParameter(
                f"base dimension {posterior.prior_base.dim} does not match data ({d})")

        def draw_realization(stream):
            return draw_posterior_dp(posterior, config.n_atoms, stream)

        provenance = POSTERIOR
    else:
        if config.base is not None:
            base = config.base
        elif dim is not None:
            base = standard_normal_spec(dim)
        else:
            raise InvalidParameter("prior draws need config.base or an explicit dim")
        if dim is not None and base.dim != dim:
            raise InvalidParameter(
                f"base dimension {base.dim} does not match requested dim {dim}")
        params = DpParams(config.a, config.n_atoms, base)

        def draw_realization(stream):
            return draw_prior_dp(params, stream)

        provenance = PRIOR
    if base.dim < 2:
        raise InvalidParameter(
            f"mutual information needs d >= 2 coordinates, got {base.dim}")

    values = np.empty(config.draws)
    for i in range(config.draws):
        for attempt in range(config.retry_cap + 1):
            stream = rng.substream(i, attempt)
            try:
                if config.coupled_marginals:
                    values[i] = mi_draw(draw_realization(stream), config.k)
                else:
                    values[i] = _uncoupled_draw(draw_realization, config.k, stream)
                break
            except DegenerateSupport:
                continue
        else:
            raise DegenerateSupport(
                f"draw {i} still degenerate after {config.retry_cap} retries; "
                f"increase the atom count N or the concentration a")
    return MiDraws(values, provenance, config)


def mi_point_estimate(draws: MiDraws) -> MiEstimate:
    """Midhinge (Q1+Q3)/2 of the draws, quartiles by linear interpolation."""
    values = draws.values
    if values.size < 2:
        raise InsufficientDraws(
            f"point estimation needs at least 2 draws, got {values.size}")
    q1, q3 = np.quantile(values, [0.25, 0.75])
    return MiEstimate(point=float(0.5 * (q1 + q3)), q1=float(q1), q3=float(q3),
                      draws=draws)


def true_mi(spec) -> float:
    """Closed-form mutual information of a distribution spec.

    Normal: half the log ratio of the product of variances to the
    determinant.  t: sum of marginal entropies minus joint entropy via
    digamma/log-gamma.  Coordinatewise product families: exactly 0.
    """
    if isinstance(spec, MvNormalSpec):
        cov = spec.covariance
        sign, logdet = np.linalg.slogdet(cov)
        if sign <= 0:
            raise InvalidParameter("covariance must have positive determinant")
        return max(0.0, 0.5 * (float(np.sum(np.log(np.diag(cov)))) - logdet))
    if isinstance(spec, MvTSpec):
        if spec.dim < 2:
            raise InvalidParameter("mutual information needs d >= 2")
        scale = spec.scale
        marginals = sum(
            mv_t_entropy(spec.df, 1) + 0.5 * np.log(scale[i, i])
            for i in range(spec.dim))
        joint = mv_t_entropy(spec.df, spec.dim, scale)
        return max(0.0, float(marginals - joint))
    if isinstance(spec, (MaxwellProductSpec, UniformProductSpec)):
        return 0.0
    raise Unsupported(f"no closed-form mutual information for {type(spec).__name__}")

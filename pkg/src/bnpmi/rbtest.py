"""Prior-based test of mutual independence.

The hypothesis MI = 0 is assessed by comparing how much probability the
prior and the posterior MI distributions put near zero.  The relative
belief ratio is the posterior-to-prior ratio of the mass of [0, c); values
above 1 are evidence for independence, below 1 against.  The strength
calibrates the verdict: it is the posterior probability of the prior-
quantile cells whose own ratio does not exceed the ratio at zero.  The
concentration a is elicited beforehand so the prior puts about half its
mass in the window.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dp import dirichlet_weights_from_uniforms
from .entropy import EULER_GAMMA, harmonic_number, log_unit_ball_volume
from .errors import (DegeneratePrior, DegenerateSupport, ElicitationFailed,
                     InvalidParameter, ZeroPriorMass)
from .knn import _as_matrix, knn_distances
from .mi import DEFAULT_DRAWS, DEFAULT_K, DEFAULT_N_ATOMS, MiConfig, MiDraws, mi_draws
from .rng import RngStream
from .sampling import sample, standard_normal_spec

DEFAULT_C = 0.05
DEFAULT_A_TEST = 1.0
DEFAULT_GRID = (0.05, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0)
DEFAULT_TOLERANCE = 0.1


class Verdict(enum.Enum):
    EVIDENCE_FOR = "evidence for independence"
    EVIDENCE_AGAINST = "evidence against independence"
    NEUTRAL = "no evidence either way"


@dataclass(frozen=True)
class RbConfig:
    """Window width c, concentration a, draws per side, strength grid."""

    c: float = DEFAULT_C
    a: float = DEFAULT_A_TEST
    draws: int = DEFAULT_DRAWS
    grid_size: int = 20
    grid_cutoff: int = 1  # lowest cell index entering the strength sum

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidParameter(f"window width must be > 0, got {self.c}")
        if not self.a > 0:
            raise InvalidParameter(f"concentration must be > 0, got {self.a}")
        if self.draws < 1:
            raise InvalidParameter(f"need at least 1 draw, got {self.draws}")
        if not 1 <= self.grid_cutoff < self.grid_size:
            raise InvalidParameter(
                f"need 1 <= cutoff < grid size, got cutoff {self.grid_cutoff} "
                f"with size {self.grid_size}")


@dataclass(frozen=True, eq=False)
class RbTestResult:
    rb: float
    strength: float
    verdict: Verdict
    prior_draws: MiDraws
    posterior_draws: MiDraws
    config: RbConfig


def window_fraction(draws: MiDraws, c: float) -> float:
    """Fraction of draws in [0, c); draws are clamped, so zeros count inside."""
    if not c > 0:
        raise InvalidParameter(f"window width must be > 0, got {c}")
    return float(np.mean(draws.values < c))


def rb_estimate(prior: MiDraws, posterior: MiDraws, c: float) -> float:
    """Ratio of posterior to prior empirical mass of the window [0, c)."""
    prior_mass = window_fraction(prior, c)
    if prior_mass == 0.0:
        raise ZeroPriorMass(
            f"no prior draw fell in [0, {c}); re-elicit the concentration "
            f"or widen the window")
    return window_fraction(posterior, c) / prior_mass


def strength_estimate(prior: MiDraws, posterior: MiDraws, rb0: float,
                      cfg: RbConfig) -> float:
    """Posterior mass of prior-quantile cells whose ratio is at most rb0.

    The prior draws are cut into grid_size equal-probability cells between
    their smallest and largest values; per cell the ratio is grid_size times
    the posterior mass of the cell.  Cells below grid_cutoff (the immediate
    neighborhood of zero) stay out of the sum.
    """
    if rb0 < 0:
        raise InvalidParameter(f"reference ratio must be >= 0, got {rb0}")
    pv = prior.values
    m = cfg.grid_size
    if pv.size < m + 1:
        raise InvalidParameter(
            f"strength grid of size {m} needs at least {m + 1} prior draws, got {pv.size}")
    if np.all(pv == pv[0]):
        raise DegeneratePrior("all prior draws identical; cannot form quantile cells")
    edges = np.quantile(pv, np.linspace(0.0, 1.0, m + 1))
    sorted_post = np.sort(posterior.values)
    cdf_at_edges = np.searchsorted(sorted_post, edges, side="right") / sorted_post.size
    cell_mass = np.diff(cdf_at_edges)
    cell_rb = m * cell_mass
    selected = (np.arange(m) >= cfg.grid_cutoff) & (cell_rb <= rb0)
    return float(cell_mass[selected].sum())


def _verdict(rb: float) -> Verdict:
    if rb > 1.0:
        return Verdict.EVIDENCE_FOR
    if rb < 1.0:
        return Verdict.EVIDENCE_AGAINST
    return Verdict.NEUTRAL


def _annotate(exc: Exception, stage: str):
    exc.args = (f"{stage}: {exc.args[0] if exc.args else exc}",) + exc.args[1:]
    return exc


def run_independence_test(data, cfg: RbConfig = RbConfig(), *,
                          k: int = DEFAULT_K, n_atoms: int = DEFAULT_N_ATOMS,
                          rng: RngStream, base=None,
                          prior: MiDraws | None = None) -> RbTestResult:
    """Full test on one data matrix.

    Draws cfg.draws MI values from the prior process (concentration cfg.a)
    and from the posterior, forms the ratio at zero and its strength, and
    interprets the ratio.  A precomputed ``prior`` draw set may be supplied
    since the prior does not depend on the data.
    """
    data = _as_matrix(data)
    n, d = data.shape
    if n < 2 or d < 2:
        raise InvalidParameter(
            f"independence testing needs n >= 2 rows and d >= 2 columns, "
            f"got {n} x {d}")
    mi_cfg = MiConfig(a=cfg.a, k=k, n_atoms=n_atoms, draws=cfg.draws, base=base)
    if prior is None:
        try:
            prior = mi_draws(mi_cfg, rng.substream(0), dim=d)
        except Exception as exc:
            raise _annotate(exc, "prior draws")
    elif prior.values.size != cfg.draws:
        raise InvalidParameter(
            f"supplied prior has {prior.values.size} draws, config wants {cfg.draws}")
    try:
        posterior = mi_draws(mi_cfg, rng.substream(1), data=data)
    except Exception as exc:
        raise _annotate(exc, "posterior draws")
    try:
        rb = rb_estimate(prior, posterior, cfg.c)
        strength = strength_estimate(prior, posterior, rb, cfg)
    except Exception as exc:
        raise _annotate(exc, "ratio estimation")
    return RbTestResult(rb=rb, strength=strength, verdict=_verdict(rb),
                        prior_draws=prior, posterior_draws=posterior, config=cfg)


def window_probability_profile(c: float, d: int, grid, rng: RngStream, *,
                               k: int = DEFAULT_K, n_atoms: int = DEFAULT_N_ATOMS,
                               draws: int = DEFAULT_DRAWS, base=None):
    """Estimated Pr(prior MI in [0, c)) for each candidate concentration.

    All candidates see the same sequence of realizations: each draw fixes one
    atom cloud and one uniform vector, and every candidate maps those
    uniforms through its own Dirichlet quantile transform.  Under this
    common-random-number coupling the candidates differ only through the
    concentration itself, so the ordering of the estimated probabilities is
    far more stable than independent runs at each grid point would give.
    """
    if not c > 0:
        raise InvalidParameter(f"window width must be > 0, got {c}")
    if d < 2:
        raise InvalidParameter(f"mutual information needs d >= 2, got {d}")
    candidates = [float(a) for a in grid]
    for a in candidates:
        if not a > 0:
            raise InvalidParameter(f"concentration must be > 0, got {a}")
    base_spec = base if base is not None else standard_normal_spec(d)
    # marginal-sum minus joint of the shared tail constants of the entropies
    tail = (d - 1.0) * (EULER_GAMMA + np.log(k) - harmonic_number(k - 1))
    below = np.zeros(len(candidates))
    for i in range(draws):
        for attempt in range(10):
            g = rng.substream(i, attempt).generator()
            uniforms = g.random(n_atoms)
            atoms = sample(base_spec, n_atoms, g)
            try:
                per_joint = (d * np.log(knn_distances(atoms, k))
                             + log_unit_ball_volume(d))
                per_marginals = sum(
                    np.log(knn_distances(atoms[:, j], k)) + log_unit_ball_volume(1)
                    for j in range(d))
            except DegenerateSupport:
                continue
            break
        else:
            raise DegenerateSupport(
                f"draw {i}: atom cloud kept fewer than k+1={k + 1} distinct "
                f"locations after 10 attempts")
        combo = (per_marginals - per_joint
                 + (d - 1.0) * (np.log(n_atoms) - np.log(k)))
        for idx, a in enumerate(candidates):
            weights = dirichlet_weights_from_uniforms(a, uniforms)
            raw = float(weights @ combo) + tail
            if max(raw, 0.0) < c:
                below[idx] += 1
    return [(a, below[idx] / draws) for idx, a in enumerate(candidates)]


def choose_concentration(profile, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Candidate whose measured window probability is nearest 0.5.

    Raises ElicitationFailed (with the profile attached) when the profile
    is empty or no candidate comes within ``tolerance`` of 0.5.
    """
    profile = [(float(a), float(p)) for a, p in profile]
    if not profile:
        raise ElicitationFailed("empty candidate grid", profile=[])
    best_a, best_p = min(profile, key=lambda item: abs(item[1] - 0.5))
    if abs(best_p - 0.5) > tolerance:
        raise ElicitationFailed(
            f"no candidate within {tolerance} of 0.5; best was a={best_a:g} "
            f"with probability {best_p:.3f}", profile=profile)
    return best_a


def elicit_a(c: float, d: int, grid=DEFAULT_GRID, tolerance: float = DEFAULT_TOLERANCE,
             rng: RngStream = None, *, k: int = DEFAULT_K,
             n_atoms: int = DEFAULT_N_ATOMS, draws: int = DEFAULT_DRAWS,
             base=None) -> float:
    """Choose the candidate whose prior window probability is nearest 0.5."""
    grid = [float(a) for a in grid]
    if not grid:
        raise ElicitationFailed("empty candidate grid", profile=[])
    if rng is None:
        raise InvalidParameter("elicitation needs an RngStream")
    profile = window_probability_profile(c, d, grid, rng, k=k, n_atoms=n_atoms,
                                         draws=draws, base=base)
    return choose_concentration(profile, tolerance)

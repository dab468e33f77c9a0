"""Seeded samplers for the simulation test-bed distributions.

Families covered: multivariate normal, multivariate Student t, coordinatewise
Maxwell-Boltzmann products, spherically symmetric distributions with a
lognormal radius, uniform products, and six unusual bivariate constructions
(uncorrelated but, except for ``fourclouds``, dependent).  A distribution is
described by an immutable spec value; ``sample(spec, n, rng)`` is a pure
function of its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CholeskyFailure, EmptyRequest, InvalidParameter, Unsupported
from .rng import as_generator

UBD_VARIANTS = ("fourclouds", "circle", "twoparabolas", "parabola", "diamond", "w")


# ---------------------------------------------------------------------------
# Specs


@dataclass(frozen=True, eq=False)
class MvNormalSpec:
    mean: np.ndarray
    covariance: np.ndarray

    def __init__(self, mean, covariance):
        object.__setattr__(self, "mean", np.atleast_1d(np.asarray(mean, dtype=float)))
        object.__setattr__(self, "covariance", np.asarray(covariance, dtype=float))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True, eq=False)
class MvTSpec:
    df: float
    mean: np.ndarray
    scale: np.ndarray

    def __init__(self, df, mean, scale):
        object.__setattr__(self, "df", float(df))
        object.__setattr__(self, "mean", np.atleast_1d(np.asarray(mean, dtype=float)))
        object.__setattr__(self, "scale", np.asarray(scale, dtype=float))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class MaxwellProductSpec:
    """d independent coordinates, each Maxwell-Boltzmann with scale c."""

    scale: float
    d: int

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class SphericalLognormalSpec:
    """Uniform direction on the sphere, radius lognormal(mu, sigma^2)."""

    d: int
    mu: float = 0.0
    sigma: float = 0.25

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class UniformProductSpec:
    low: float
    high: float
    d: int

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class UbdSpec:
    """One of the six unusual bivariate constructions; always d = 2."""

    variant: str

    @property
    def dim(self) -> int:
        return 2


DistributionSpec = (MvNormalSpec, MvTSpec, MaxwellProductSpec,
                    SphericalLognormalSpec, UniformProductSpec, UbdSpec)


def standard_normal_spec(d: int) -> MvNormalSpec:
    """N(0_d, I_d), the default prior base measure."""
    if d < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {d}")
    return MvNormalSpec(np.zeros(d), np.eye(d))


# ---------------------------------------------------------------------------
# Named covariance matrices of the simulation studies


def pair_correlation_cov(d: int, rho: float = 0.5) -> np.ndarray:
    """Identity except correlation rho between the last two coordinates."""
    if d < 2:
        raise InvalidParameter(f"need d >= 2 for a correlated pair, got {d}")
    cov = np.eye(d)
    cov[d - 2, d - 1] = cov[d - 1, d - 2] = rho
    return cov


def equicorrelated_cov(d: int, rho: float = 0.9) -> np.ndarray:
    """Unit variances with common correlation rho between every pair."""
    if d < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {d}")
    return np.full((d, d), rho) + (1.0 - rho) * np.eye(d)


def dense_cov4() -> np.ndarray:
    """4x4 covariance with all pairs correlated and one inflated variance."""
    return np.array([[1.0, 0.5, 0.5, 0.5],
                     [0.5, 2.0, 0.5, 0.5],
                     [0.5, 0.5, 1.0, 0.5],
                     [0.5, 0.5, 0.5, 1.0]])


# ---------------------------------------------------------------------------
# Sampling


def _cholesky_lower(matrix: np.ndarray) -> np.ndarray:
    cov = np.asarray(matrix, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise CholeskyFailure(f"covariance must be square, got shape {cov.shape}")
    if not np.allclose(cov, cov.T, atol=1e-10):
        raise CholeskyFailure("covariance is not symmetric")
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure(f"covariance is not positive definite: {exc}") from exc


def _require_count(n: int) -> int:
    n = int(n)
    if n < 1:
        raise EmptyRequest(f"sample size must be >= 1, got {n}")
    return n


def sample_mv_normal(spec: MvNormalSpec, n: int, rng) -> np.ndarray:
    n = _require_count(n)
    d = spec.dim
    if spec.covariance.shape != (d, d):
        raise InvalidParameter(
            f"mean has dimension {d} but covariance has shape {spec.covariance.shape}")
    lower = _cholesky_lower(spec.covariance)
    g = as_generator(rng)
    return spec.mean + g.standard_normal((n, d)) @ lower.T


def sample_mv_t(spec: MvTSpec, n: int, rng) -> np.ndarray:
    n = _require_count(n)
    if spec.df <= 0:
        raise InvalidParameter(f"degrees of freedom must be > 0, got {spec.df}")
    d = spec.dim
    if spec.scale.shape != (d, d):
        raise InvalidParameter(
            f"mean has dimension {d} but scale has shape {spec.scale.shape}")
    lower = _cholesky_lower(spec.scale)
    g = as_generator(rng)
    z = g.standard_normal((n, d)) @ lower.T
    w = g.chisquare(spec.df, size=n)
    return spec.mean + z / np.sqrt(w / spec.df)[:, None]


def sample_maxwell_product(spec: MaxwellProductSpec, n: int, rng) -> np.ndarray:
    n = _require_count(n)
    if spec.scale <= 0:
        raise InvalidParameter(f"Maxwell scale must be > 0, got {spec.scale}")
    if spec.d < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {spec.d}")
    g = as_generator(rng)
    # Maxwell(c) is the norm of an isotropic 3-d normal with deviation c.
    z = g.standard_normal((n, spec.d, 3)) * spec.scale
    return np.sqrt((z ** 2).sum(axis=2))


def sample_spherical_lognormal(spec: SphericalLognormalSpec, n: int, rng) -> np.ndarray:
    n = _require_count(n)
    if spec.d < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {spec.d}")
    if spec.sigma <= 0:
        raise InvalidParameter(f"radius log-deviation must be > 0, got {spec.sigma}")
    g = as_generator(rng)
    direction = g.standard_normal((n, spec.d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = g.lognormal(mean=spec.mu, sigma=spec.sigma, size=n)
    return radius[:, None] * direction


def sample_uniform_product(spec: UniformProductSpec, n: int, rng) -> np.ndarray:
    n = _require_count(n)
    if spec.d < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {spec.d}")
    if not spec.low < spec.high:
        raise InvalidParameter(f"need low < high, got [{spec.low}, {spec.high}]")
    g = as_generator(rng)
    return g.uniform(spec.low, spec.high, size=(n, spec.d))


def sample_ubd(spec: UbdSpec, n: int, rng) -> np.ndarray:
    n = _require_count(n)
    variant = spec.variant.lower()
    g = as_generator(rng)
    if variant == "fourclouds":
        z = g.standard_normal((n, 2))
        signs = g.integers(0, 2, size=(n, 2)) * 2 - 1
        return z + signs
    if variant == "circle":
        z = g.standard_normal((n, 2))
        u = g.uniform(-1.0, 1.0, size=n)
        return np.column_stack([np.sin(np.pi * u) + z[:, 0] / 8.0,
                                np.cos(np.pi * u) + z[:, 1] / 8.0])
    if variant == "twoparabolas":
        u1 = g.uniform(-1.0, 1.0, size=n)
        u2 = g.uniform(0.0, 1.0, size=n)
        signs = g.integers(0, 2, size=n) * 2 - 1
        return np.column_stack([u1, signs * (u1 ** 2 + u2 / 2.0)])
    if variant == "parabola":
        u1 = g.uniform(-1.0, 1.0, size=n)
        u2 = g.uniform(0.0, 1.0, size=n)
        return np.column_stack([u1, (u1 ** 2 + u2 / 2.0) / 2.0])
    if variant == "diamond":
        u = g.uniform(-1.0, 1.0, size=(n, 2))
        c, s = np.cos(-np.pi / 4.0), np.sin(-np.pi / 4.0)
        return np.column_stack([u[:, 0] * c + u[:, 1] * s,
                                -u[:, 0] * s + u[:, 1] * c])
    if variant == "w":
        u1 = g.uniform(-1.0, 1.0, size=n)
        u2 = g.uniform(0.0, 1.0, size=n)
        # The published construction divides the second uniform by the sample
        # size itself; reproduced literally, quirk and all.
        return np.column_stack([u1 + u2 / 3.0,
                                4.0 * ((u1 ** 2 - 0.5) ** 2 + u2 / n)])
    raise Unsupported(f"unknown bivariate variant {spec.variant!r}; "
                      f"choose from {', '.join(UBD_VARIANTS)}")


_SAMPLERS = {
    MvNormalSpec: sample_mv_normal,
    MvTSpec: sample_mv_t,
    MaxwellProductSpec: sample_maxwell_product,
    SphericalLognormalSpec: sample_spherical_lognormal,
    UniformProductSpec: sample_uniform_product,
    UbdSpec: sample_ubd,
}


def sample(spec, n: int, rng) -> np.ndarray:
    """Draw an (n, d) sample from the family described by ``spec``."""
    sampler = _SAMPLERS.get(type(spec))
    if sampler is None:
        raise Unsupported(f"no sampler for {type(spec).__name__}")
    return sampler(spec, n, rng)


def standardize_columns(data) -> np.ndarray:
    """Center each column and scale it to unit sample standard deviation.

    Opt-in preprocessing for data whose location or scale is far from the
    default standard-normal base measure.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise InvalidParameter(
            f"standardization needs an (n >= 2, d) matrix, got shape {x.shape}")
    sd = x.std(axis=0, ddof=1)
    flat = np.flatnonzero(sd == 0)
    if flat.size:
        raise InvalidParameter(
            f"column {flat[0]} is constant and cannot be scaled")
    return (x - x.mean(axis=0)) / sd


# ---------------------------------------------------------------------------
# Text form used by the command line, e.g. "normal:d=4,cov=dense4"


_COV_PRESETS = ("identity", "pair", "equi", "dense4")


def parse_distribution(text: str):
    """Parse ``family:key=value,...`` into a distribution spec.

    Families: normal (d, cov in {identity, pair, equi, dense4}, rho, var),
    t (df, d), maxwell (d, scale), slognormal (d, mu, sigma),
    uniform (d, low, high), ubd (variant).
    """
    head, _, tail = text.strip().partition(":")
    family = head.strip().lower()
    options: dict[str, str] = {}
    if tail:
        for item in tail.split(","):
            key, sep, value = item.partition("=")
            if not sep or not key.strip():
                raise InvalidParameter(f"malformed distribution option {item!r} in {text!r}")
            options[key.strip().lower()] = value.strip()

    def take_float(key, default=None):
        if key in options:
            raw = options.pop(key)
            try:
                return float(raw)
            except ValueError:
                raise InvalidParameter(f"option {key}={raw!r} is not a number") from None
        if default is None:
            raise InvalidParameter(f"distribution {family!r} requires option {key}=")
        return default

    def take_int(key, default=None):
        value = take_float(key, default)
        if value != int(value):
            raise InvalidParameter(f"option {key}={value} must be an integer")
        return int(value)

    if family == "normal":
        d = take_int("d", 2)
        cov_name = options.pop("cov", "identity").lower()
        var = take_float("var", 1.0)
        if cov_name == "identity":
            cov = var * np.eye(d)
        elif cov_name == "pair":
            cov = pair_correlation_cov(d, take_float("rho", 0.5))
        elif cov_name == "equi":
            cov = equicorrelated_cov(d, take_float("rho", 0.9))
        elif cov_name == "dense4":
            if d != 4:
                raise InvalidParameter("cov=dense4 requires d=4")
            cov = dense_cov4()
        else:
            raise InvalidParameter(f"unknown covariance preset {cov_name!r}; "
                                   f"choose from {', '.join(_COV_PRESETS)}")
        spec = MvNormalSpec(np.zeros(d), cov)
    elif family == "t":
        d = take_int("d", 2)
        df = take_float("df", 3.0)
        spec = MvTSpec(df, np.zeros(d), np.eye(d))
    elif family == "maxwell":
        spec = MaxwellProductSpec(scale=take_float("scale", 10.0), d=take_int("d", 2))
    elif family == "slognormal":
        spec = SphericalLognormalSpec(d=take_int("d", 2), mu=take_float("mu", 0.0),
                                      sigma=take_float("sigma", 0.25))
    elif family == "uniform":
        spec = UniformProductSpec(low=take_float("low", 0.0),
                                  high=take_float("high", 1.0), d=take_int("d", 2))
    elif family == "ubd":
        variant = options.pop("variant", "").lower()
        if variant not in UBD_VARIANTS:
            raise Unsupported(f"unknown bivariate variant {variant!r}; "
                              f"choose from {', '.join(UBD_VARIANTS)}")
        spec = UbdSpec(variant)
    else:
        raise Unsupported(f"unknown distribution family {family!r}")
    if options:
        raise InvalidParameter(f"unrecognized options for {family!r}: "
                               f"{', '.join(sorted(options))}")
    return spec


def _cov_tag(cov: np.ndarray) -> str:
    d = cov.shape[0]
    if np.array_equal(cov, np.eye(d)):
        return "identity"
    if d >= 2 and np.array_equal(cov, pair_correlation_cov(d, cov[d - 2, d - 1])):
        return f"pair,rho={cov[d - 2, d - 1]:g}"
    if d >= 2 and np.array_equal(cov, equicorrelated_cov(d, cov[0, 1])):
        return f"equi,rho={cov[0, 1]:g}"
    if d == 4 and np.array_equal(cov, dense_cov4()):
        return "dense4"
    return "custom"


def describe_distribution(spec) -> str:
    """Stable text label for reports and tables."""
    if isinstance(spec, MvNormalSpec):
        return f"normal(d={spec.dim},cov={_cov_tag(spec.covariance)})"
    if isinstance(spec, MvTSpec):
        return f"t(df={spec.df:g},d={spec.dim})"
    if isinstance(spec, MaxwellProductSpec):
        return f"maxwell(scale={spec.scale:g},d={spec.d})"
    if isinstance(spec, SphericalLognormalSpec):
        return f"slognormal(sigma={spec.sigma:g},d={spec.d})"
    if isinstance(spec, UniformProductSpec):
        return f"uniform({spec.low:g},{spec.high:g},d={spec.d})"
    if isinstance(spec, UbdSpec):
        return f"ubd({spec.variant})"
    return type(spec).__name__

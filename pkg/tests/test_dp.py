"""Dirichlet weight samplers and finite-atom process realizations."""

import numpy as np
import pytest
from scipy import stats

from bnpmi import (DpParams, DpRealization, PosteriorBase, RngStream,
                   dirichlet_weights, dirichlet_weights_from_uniforms,
                   draw_posterior_dp, draw_prior_dp, marginal_realization,
                   standard_normal_spec)
from bnpmi.dp import POSTERIOR, PRIOR, sample_posterior_base
from bnpmi.errors import InvalidParameter


def test_weights_form_a_simplex_and_are_deterministic():
    for a in (0.05, 1.0, 50.0):
        w = dirichlet_weights(a, 300, RngStream(1))
        assert w.shape == (300,)
        assert np.all(w >= 0)
        np.testing.assert_allclose(w.sum(), 1.0, rtol=0, atol=1e-12)
        np.testing.assert_array_equal(w, dirichlet_weights(a, 300, RngStream(1)))


def test_tiny_concentration_collapses_to_one_atom():
    # far below the gamma sampler's underflow cutoff; the log-space path
    # must still return a valid, single-atom-dominated simplex
    w = dirichlet_weights(1e-6, 500, RngStream(2))
    np.testing.assert_allclose(w.sum(), 1.0, rtol=0, atol=1e-12)
    assert w.max() > 0.999


def test_weight_marginals_match_beta_distribution():
    # each coordinate of Dirichlet(s, ..., s) is Beta(s, (N-1)s)
    a, n_atoms, reps = 5.0, 20, 400
    root = RngStream(3)
    first = np.array([dirichlet_weights(a, n_atoms, root.substream(i))[0]
                      for i in range(reps)])
    ks = stats.kstest(first, stats.beta(a / n_atoms, a - a / n_atoms).cdf)
    assert ks.pvalue > 0.01, f"KS p-value {ks.pvalue:.4f}"


def test_weights_reject_bad_parameters():
    with pytest.raises(InvalidParameter):
        dirichlet_weights(0.0, 10, RngStream(0))
    with pytest.raises(InvalidParameter):
        dirichlet_weights(1.0, 0, RngStream(0))


def test_quantile_weights_are_coupled_across_concentrations():
    u = RngStream(4).generator().random(200)
    small = dirichlet_weights_from_uniforms(5.0, u)
    large = dirichlet_weights_from_uniforms(50.0, u)
    for w in (small, large):
        np.testing.assert_allclose(w.sum(), 1.0, rtol=0, atol=1e-12)
        assert np.all(w >= 0)
    # each weight is monotone in its uniform, so the ranks agree
    np.testing.assert_array_equal(np.argsort(small), np.argsort(u))
    np.testing.assert_array_equal(np.argsort(large), np.argsort(u))
    # larger concentration spreads mass more evenly
    assert large.max() < small.max()


def test_quantile_weights_match_gamma_ppf_when_no_underflow():
    u = RngStream(5).generator().random(50)
    w = dirichlet_weights_from_uniforms(100.0, u)
    x = stats.gamma.ppf(u, 100.0 / 50)
    np.testing.assert_allclose(w, x / x.sum(), rtol=1e-10)


def test_quantile_weights_survive_underflow():
    u = RngStream(6).generator().random(500)
    w = dirichlet_weights_from_uniforms(1e-3, u)
    assert np.all(np.isfinite(w))
    np.testing.assert_allclose(w.sum(), 1.0, rtol=0, atol=1e-12)
    assert np.argmax(w) == np.argmax(u)


def test_quantile_weights_validate_uniforms():
    with pytest.raises(InvalidParameter):
        dirichlet_weights_from_uniforms(1.0, np.array([0.2, 1.0]))
    with pytest.raises(InvalidParameter):
        dirichlet_weights_from_uniforms(1.0, np.array([-0.1, 0.5]))
    with pytest.raises(InvalidParameter):
        dirichlet_weights_from_uniforms(0.0, np.array([0.5]))


def test_prior_draw_shape_and_provenance():
    params = DpParams(1.0, 64, standard_normal_spec(3))
    dpr = draw_prior_dp(params, RngStream(7))
    assert dpr.provenance == PRIOR
    assert dpr.n_atoms == 64 and dpr.dim == 3
    np.testing.assert_array_equal(dpr.atoms,
                                  draw_prior_dp(params, RngStream(7)).atoms)


def test_dp_params_validation():
    base = standard_normal_spec(2)
    with pytest.raises(InvalidParameter):
        DpParams(-1.0, 10, base)
    with pytest.raises(InvalidParameter):
        DpParams(1.0, 1, base)
    with pytest.raises(InvalidParameter):
        DpParams(1.0, 10, "normal")


def test_posterior_base_mixture_fractions():
    g = RngStream(8).generator()
    data = g.normal(size=(25, 2))
    base = PosteriorBase(25.0, data, standard_normal_spec(2))
    assert base.fresh_probability == 0.5
    root = RngStream(9)
    fresh = []
    for i in range(300):
        atoms = sample_posterior_base(base, 40, root.substream(i))
        match = (atoms[:, None, :] == data[None, :, :]).all(axis=2).any(axis=1)
        fresh.append(40 - int(match.sum()))
    assert abs(np.mean(fresh) / 40 - 0.5) < 0.03


def test_posterior_base_limits():
    g = RngStream(10).generator()
    data = g.normal(size=(10, 2))
    nearly_empirical = PosteriorBase(1e-12, data, standard_normal_spec(2))
    atoms = sample_posterior_base(nearly_empirical, 200, RngStream(11))
    match = (atoms[:, None, :] == data[None, :, :]).all(axis=2).any(axis=1)
    assert match.all()
    nearly_prior = PosteriorBase(1e12, data, standard_normal_spec(2))
    atoms = sample_posterior_base(nearly_prior, 200, RngStream(12))
    match = (atoms[:, None, :] == data[None, :, :]).all(axis=2).any(axis=1)
    assert not match.any()


def test_posterior_base_validation():
    base = standard_normal_spec(2)
    with pytest.raises(InvalidParameter):
        PosteriorBase(1.0, np.empty((0, 2)), base)
    with pytest.raises(InvalidParameter):
        PosteriorBase(1.0, np.array([[1.0, np.inf]]), base)
    with pytest.raises(InvalidParameter):
        PosteriorBase(1.0, np.ones((5, 3)), base)
    with pytest.raises(InvalidParameter):
        PosteriorBase(0.0, np.ones((5, 2)), base)


def test_posterior_draw_provenance_and_determinism():
    data = RngStream(13).generator().normal(size=(30, 2))
    base = PosteriorBase(1.0, data, standard_normal_spec(2))
    dpr = draw_posterior_dp(base, 100, RngStream(14))
    assert dpr.provenance == POSTERIOR
    assert dpr.n_atoms == 100
    again = draw_posterior_dp(base, 100, RngStream(14))
    np.testing.assert_array_equal(dpr.weights, again.weights)
    np.testing.assert_array_equal(dpr.atoms, again.atoms)


def test_realization_validators():
    atoms = np.zeros((4, 2))
    with pytest.raises(InvalidParameter):
        DpRealization(np.full(3, 1.0 / 3), atoms, PRIOR)
    with pytest.raises(InvalidParameter):
        DpRealization(np.array([0.5, 0.5, 0.5, -0.5]), atoms, PRIOR)
    with pytest.raises(InvalidParameter):
        DpRealization(np.full(4, 0.3), atoms, PRIOR)
    with pytest.raises(InvalidParameter):
        DpRealization(np.full(4, 0.25), atoms, "bootstrap")


def test_marginal_realization_is_a_weight_sharing_view():
    dpr = draw_prior_dp(DpParams(1.0, 32, standard_normal_spec(3)), RngStream(15))
    marg = marginal_realization(dpr, 1)
    assert marg.dim == 1
    assert marg.weights is dpr.weights
    np.testing.assert_array_equal(marg.atoms[:, 0], dpr.atoms[:, 1])
    with pytest.raises(InvalidParameter):
        marginal_realization(dpr, 3)

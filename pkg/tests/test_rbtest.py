"""Relative-belief ratio, strength, and concentration elicitation."""

import numpy as np
import pytest

from bnpmi import (MiConfig, MiDraws, RbConfig, RngStream, Verdict,
                   choose_concentration, elicit_a, rb_estimate,
                   run_independence_test, strength_estimate,
                   window_probability_profile)
from bnpmi.dp import POSTERIOR, PRIOR
from bnpmi.errors import (DegeneratePrior, DegenerateSupport,
                          ElicitationFailed, InvalidParameter, ZeroPriorMass)
from bnpmi.rbtest import window_fraction

_CFG = MiConfig()


def _draws(values, provenance=PRIOR):
    return MiDraws(np.asarray(values, dtype=float), provenance, _CFG)


def test_config_validation():
    RbConfig()
    for kwargs in (dict(c=0.0), dict(a=-1.0), dict(draws=0),
                   dict(grid_cutoff=0), dict(grid_cutoff=20, grid_size=20)):
        with pytest.raises(InvalidParameter):
            RbConfig(**kwargs)


def test_window_fraction_counts_clamped_zeros_and_excludes_the_edge():
    draws = _draws([0.0, 0.02, 0.05, 0.7])
    assert window_fraction(draws, 0.05) == 0.5
    assert window_fraction(draws, 0.71) == 1.0
    with pytest.raises(InvalidParameter):
        window_fraction(draws, 0.0)


def test_rb_estimate_hand_value():
    prior = _draws([0.0, 0.1, 0.2, 0.3])
    posterior = _draws([0.0, 0.01, 0.02, 0.3], POSTERIOR)
    assert rb_estimate(prior, posterior, 0.05) == 3.0
    with pytest.raises(ZeroPriorMass):
        rb_estimate(_draws([0.1, 0.2]), posterior, 0.05)


def test_strength_hand_value():
    # prior quantile edges land on 0, .25, .5, .75, 1; four cells of mass 1/4
    prior = _draws(np.linspace(0.0, 1.0, 41))
    posterior = _draws([0.1, 0.2, 0.3, 0.6, 0.8, 0.9, 0.95, 0.99], POSTERIOR)
    cfg = RbConfig(grid_size=4, grid_cutoff=1)
    # cell masses (.25, .125, .125, .5) give cell ratios (1, .5, .5, 2); the
    # cutoff drops cell 0 and rb0=1 drops cell 3
    assert strength_estimate(prior, posterior, 1.0, cfg) == 0.25
    # raising rb0 admits the heavy top cell as well
    assert strength_estimate(prior, posterior, 2.0, cfg) == 0.75


def test_strength_validation():
    prior = _draws(np.linspace(0.0, 1.0, 41))
    posterior = _draws([0.1, 0.2], POSTERIOR)
    with pytest.raises(InvalidParameter):
        strength_estimate(prior, posterior, -0.5, RbConfig(grid_size=4))
    with pytest.raises(InvalidParameter):
        strength_estimate(_draws([0.1, 0.2, 0.3]), posterior, 1.0,
                          RbConfig(grid_size=4))
    with pytest.raises(DegeneratePrior):
        strength_estimate(_draws(np.zeros(41)), posterior, 1.0,
                          RbConfig(grid_size=4))


def test_verdict_texts():
    assert Verdict.EVIDENCE_FOR.value == "evidence for independence"
    assert Verdict.EVIDENCE_AGAINST.value == "evidence against independence"
    assert Verdict.NEUTRAL.value == "no evidence either way"


def test_full_test_is_deterministic_and_coherent():
    data = RngStream(20).generator().normal(size=(25, 2))
    cfg = RbConfig(c=0.05, a=1.0, draws=80, grid_size=10)
    result = run_independence_test(data, cfg, k=3, n_atoms=100, rng=RngStream(21))
    assert result.rb >= 0 and 0.0 <= result.strength <= 1.0
    assert result.verdict == (Verdict.EVIDENCE_FOR if result.rb > 1
                              else Verdict.EVIDENCE_AGAINST if result.rb < 1
                              else Verdict.NEUTRAL)
    assert result.prior_draws.provenance == PRIOR
    assert result.posterior_draws.provenance == POSTERIOR
    again = run_independence_test(data, cfg, k=3, n_atoms=100, rng=RngStream(21))
    assert again.rb == result.rb and again.strength == result.strength


def test_full_test_input_validation():
    cfg = RbConfig(draws=10)
    with pytest.raises(InvalidParameter):
        run_independence_test(np.zeros((1, 2)), cfg, rng=RngStream(0))
    with pytest.raises(InvalidParameter):
        run_independence_test(np.zeros((10, 1)), cfg, rng=RngStream(0))


def test_supplied_prior_is_used_and_size_checked():
    data = RngStream(22).generator().normal(size=(20, 2))
    cfg = RbConfig(draws=50, grid_size=10)
    prior = _draws(np.linspace(0.0, 0.5, 50))
    result = run_independence_test(data, cfg, k=3, n_atoms=80,
                                   rng=RngStream(23), prior=prior)
    assert result.prior_draws is prior
    with pytest.raises(InvalidParameter):
        run_independence_test(data, RbConfig(draws=49), k=3, n_atoms=80,
                              rng=RngStream(23), prior=prior)


def test_posterior_stage_failures_name_their_stage():
    # two distinct rows cannot support k=3 neighborhoods at negligible a
    data = np.array([[0.0, 0.0], [1.0, 1.0]])
    cfg = RbConfig(a=1e-12, draws=5, grid_size=4)
    with pytest.raises(DegenerateSupport) as err:
        run_independence_test(data, cfg, k=3, n_atoms=60, rng=RngStream(24))
    assert str(err.value).startswith("posterior draws:")


def test_zero_prior_mass_is_annotated_as_ratio_stage():
    # a supplied prior with no draw below c leaves the window empty
    data = RngStream(25).generator().normal(size=(20, 2))
    cfg = RbConfig(c=0.05, draws=30, grid_size=10)
    prior = _draws(np.linspace(0.1, 0.5, 30))
    with pytest.raises(ZeroPriorMass) as err:
        run_independence_test(data, cfg, k=3, n_atoms=100, rng=RngStream(26),
                              prior=prior)
    assert str(err.value).startswith("ratio estimation:")


def test_profile_is_deterministic_and_duplicate_candidates_agree():
    profile = window_probability_profile(0.05, 2, [0.5, 0.5, 2.0],
                                         RngStream(27), k=3, n_atoms=60, draws=15)
    assert [a for a, _ in profile] == [0.5, 0.5, 2.0]
    assert profile[0][1] == profile[1][1]
    assert all(0.0 <= p <= 1.0 for _, p in profile)
    again = window_probability_profile(0.05, 2, [0.5, 0.5, 2.0],
                                       RngStream(27), k=3, n_atoms=60, draws=15)
    assert profile == again


def test_profile_validation():
    with pytest.raises(InvalidParameter):
        window_probability_profile(0.0, 2, [1.0], RngStream(0))
    with pytest.raises(InvalidParameter):
        window_probability_profile(0.05, 1, [1.0], RngStream(0))
    with pytest.raises(InvalidParameter):
        window_probability_profile(0.05, 2, [0.0], RngStream(0))


def test_choose_concentration_picks_nearest_within_tolerance():
    profile = [(0.05, 0.2), (1.0, 0.46), (5.0, 0.61)]
    assert choose_concentration(profile, tolerance=0.1) == 1.0
    with pytest.raises(ElicitationFailed) as err:
        choose_concentration(profile, tolerance=0.02)
    assert err.value.profile == profile
    with pytest.raises(ElicitationFailed):
        choose_concentration([])


def test_elicitation_end_to_end():
    a = elicit_a(0.05, 2, grid=(0.5, 1.0, 2.0), rng=RngStream(28),
                 k=3, n_atoms=80, draws=40)
    assert a in (0.5, 1.0, 2.0)
    with pytest.raises(InvalidParameter):
        elicit_a(0.05, 2, grid=(1.0,), rng=None)
    with pytest.raises(ElicitationFailed):
        elicit_a(0.05, 2, grid=(), rng=RngStream(29))

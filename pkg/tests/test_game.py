import pytest
from numpy.testing import assert_allclose

from disclosure_lab import (
    GameSpec,
    MeanDistribution,
    SpecError,
    cheap_talk_payoff,
    dominance_gap,
    interval,
    is_mpc,
    plinear_prior,
    uniform_prior,
    unraveling_payoff,
    validate,
    value_at,
)
from disclosure_lab.game import action_at, require_valid


def test_validate_reports_each_problem():
    u = uniform_prior()
    assert validate(GameSpec(u, (0.0, 0.4, 1.0), (0.0, 1.0))) == []
    assert validate(GameSpec(u, (0.0, 1.0), (0.0,))) == [
        "need at least two actions"
    ]
    assert validate(GameSpec(u, (0.0, 0.5, 1.0), (0.0, 1.0, 2.0))) == [
        "cutoff count must be action count plus one"
    ]
    assert "cutoffs must start at 0 and end at 1" in validate(
        GameSpec(u, (0.1, 0.5, 1.0), (0.0, 1.0))
    )
    assert "cutoffs not ascending" in validate(
        GameSpec(u, (0.0, 0.6, 0.4, 1.0), (0.0, 1.0, 2.0))
    )
    assert "lowest action value must be 0" in validate(
        GameSpec(u, (0.0, 0.5, 1.0), (0.5, 1.0))
    )
    assert "values not increasing" in validate(
        GameSpec(u, (0.0, 0.3, 0.6, 1.0), (0.0, 2.0, 1.0))
    )


def test_require_valid_raises_with_joined_message():
    bad = GameSpec(uniform_prior(), (0.0, 1.0), (0.0,))
    with pytest.raises(SpecError, match="need at least two actions"):
        require_valid(bad)


def test_value_at_takes_upper_action_at_cutoffs(gk2016):
    third = 1.0 / 3.0
    assert value_at(gk2016, third) == 1.0
    assert value_at(gk2016, third - 1e-12) == 0.0
    assert value_at(gk2016, 2.0 * third) == 3.0
    assert value_at(gk2016, 1.0) == 3.0
    assert value_at(gk2016, 0.0) == 0.0
    assert action_at(gk2016, third) == 1
    assert action_at(gk2016, 0.999) == 2


def test_unraveling_goldens(gk2016, exs, exy):
    assert unraveling_payoff(gk2016) == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert unraveling_payoff(exs) == pytest.approx(0.51, abs=1e-12)
    assert unraveling_payoff(exy) == pytest.approx(0.49, abs=1e-12)


def test_cheap_talk_is_value_at_the_prior_mean(gk2016, exs, exy):
    assert cheap_talk_payoff(gk2016) == 1.0
    assert cheap_talk_payoff(exs) == 1.0
    assert cheap_talk_payoff(exy) == 0.0


def test_cheap_talk_can_beat_unraveling(exy):
    """The two baselines are not ordered; this pair goes one way and
    the next test's spec goes the other."""
    assert cheap_talk_payoff(exy) < unraveling_payoff(exy)
    spec = GameSpec(uniform_prior(), (0.0, 0.5, 1.0), (0.0, 1.0))
    assert cheap_talk_payoff(spec) == 1.0
    assert unraveling_payoff(spec) == 0.5
    assert cheap_talk_payoff(spec) > unraveling_payoff(spec)


def test_full_disclosure_distribution_is_feasible():
    u = uniform_prior()
    dist = MeanDistribution((), revealed=interval(0.0, 1.0))
    assert dist.validate(u) == []
    assert dominance_gap(u, dist) <= 1e-14
    assert is_mpc(u, dist)


def test_full_pooling_distribution_is_feasible():
    u = uniform_prior()
    dist = MeanDistribution(((0.5, 1.0),))
    assert dist.validate(u) == []
    assert dominance_gap(u, dist) <= 1e-14
    assert dist.integrated_cdf(u, 0.75) == pytest.approx(0.25, abs=1e-14)
    assert dist.integrated_cdf(u, 0.25) == 0.0


def test_infeasible_spread_is_caught():
    """Mass pushed outward past the prior violates dominance even
    though the mean still matches."""
    u = uniform_prior()
    dist = MeanDistribution(((0.0, 0.5), (1.0, 0.5)))
    assert dist.validate(u) == []
    assert dominance_gap(u, dist) == pytest.approx(0.125, abs=1e-12)
    assert not is_mpc(u, dist)


def test_validate_catches_mass_and_mean_drift():
    u = uniform_prior()
    assert MeanDistribution(((0.5, 0.9),)).validate(u) == [
        "probabilities do not sum to one",
        "mean does not match the prior mean",
    ]
    assert MeanDistribution(((0.5, 0.9), (0.5, 0.1))).validate(u) == []
    assert MeanDistribution(((0.4, 1.0),)).validate(u) == [
        "mean does not match the prior mean"
    ]


def test_mixed_atoms_and_revealed_mean():
    u = uniform_prior()
    dist = MeanDistribution(
        ((0.75, 0.5),), revealed=interval(0.0, 0.5)
    )
    assert dist.total_mass(u) == pytest.approx(1.0, abs=1e-14)
    assert dist.mean(u) == pytest.approx(0.5, abs=1e-14)
    assert dist.validate(u) == []
    assert dominance_gap(u, dist) <= 1e-14


def test_expected_value_uses_upper_cells(exy):
    dist = MeanDistribution(((0.6, 0.5), (0.4, 0.5)))
    assert dist.expected_value(exy) == pytest.approx(0.5, abs=1e-12)


def test_dominance_gap_on_plinear_prior():
    p = plinear_prior((0.0, 1.0), (0.5, 1.5))
    pooled = MeanDistribution(((p.mean, 1.0),))
    assert dominance_gap(p, pooled) <= 1e-14
    assert_allclose(pooled.mean(p), p.mean, atol=1e-15)

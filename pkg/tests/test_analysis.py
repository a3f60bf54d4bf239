import numpy as np
import pytest

from gcdephasing.analysis import (
    ClassifierConfig,
    Fate,
    Regime,
    asymptotic_correlations,
    classify,
    schmidt_fate,
    sudden_death_time,
)
from gcdephasing.correlations import negativity
from gcdephasing.dynamics import DEFAULT_ORIENTATIONS, Orientation, Trajectory, evolve_exact, sample_trajectory
from gcdephasing.errors import ConfigError, InsufficientSamples, NonUniformGrid, ParamOutOfRange
from gcdephasing.states import maximally_mixed, projector, psi3, rho_alpha_beta, rho_alpha_gamma

AB_STATE = rho_alpha_beta(0.4, 0.7)
AG_STATE = rho_alpha_gamma(0.1, 0.5)
N = DEFAULT_ORIENTATIONS


@pytest.fixture(scope="module")
def ab_trajectories():
    return {k: sample_trajectory(AB_STATE, n, 20.0, 401) for k, n in N.items()}


def test_alpha_beta_negativity_regimes(ab_trajectories):
    labels = {k: classify(tr, "negativity") for k, tr in ab_trajectories.items()}
    assert labels["z"].kind is Regime.TIME_INVARIANT
    assert labels["x"].kind is Regime.SUDDEN_DEATH
    for k in ("yz30", "xyz", "yz45"):
        assert labels[k].kind is Regime.FREEZING
        neg_inf, _ = asymptotic_correlations(AB_STATE, N[k])
        assert labels[k].plateau_value == pytest.approx(neg_inf, abs=1e-6)
        assert 0 < labels[k].onset_time < 20


def test_alpha_beta_lqu_freezes_and_rises_when_nx_zero(ab_trajectories):
    for k, tr in ab_trajectories.items():
        label = classify(tr, "lqu")
        assert label.kind in (Regime.FREEZING, Regime.TIME_INVARIANT)
        if N[k].nx == 0.0 and N[k].nz != 1.0:
            assert label.rises_first


def test_sudden_death_time_matches_label(ab_trajectories):
    label = classify(ab_trajectories["x"], "negativity")
    tau = sudden_death_time(AB_STATE, N["x"])
    assert label.sudden_death_time == pytest.approx(tau, abs=2e-6)
    assert negativity(evolve_exact(AB_STATE, N["x"], tau + 1e-5)) < 1e-8
    assert negativity(evolve_exact(AB_STATE, N["x"], tau - 1e-5)) >= 1e-8


def test_sudden_death_time_stable_under_refinement():
    coarse = classify(sample_trajectory(AB_STATE, N["x"], 20.0, 201), "negativity")
    fine = classify(sample_trajectory(AB_STATE, N["x"], 20.0, 401), "negativity")
    assert abs(coarse.sudden_death_time - fine.sudden_death_time) < 1e-5


def test_sudden_death_time_edge_cases():
    assert sudden_death_time(maximally_mixed(), N["x"]) == 0.0
    assert sudden_death_time(projector(psi3()), N["z"]) is None
    assert sudden_death_time(AB_STATE, N["xyz"]) is None


def test_alpha_gamma_all_die_z_last():
    taus = {k: sudden_death_time(AG_STATE, n) for k, n in N.items()}
    assert all(t is not None and 0 < t < 5 for t in taus.values())
    assert max(taus, key=taus.get) == "z"


def test_alpha_gamma_lqu_is_plain_decay():
    # asymptotic LQU of this state vanishes for every direction
    for n in N.values():
        assert asymptotic_correlations(AG_STATE, n)[1] < 1e-10
    label = classify(sample_trajectory(AG_STATE, N["xyz"], 20.0, 401), "lqu")
    assert label.kind is Regime.PLAIN_DECAY


def test_classify_rejects_short_and_uneven_series():
    tr = sample_trajectory(AB_STATE, N["x"], 20.0, 50)
    with pytest.raises(InsufficientSamples):
        classify(tr, "negativity")
    long = sample_trajectory(AB_STATE, N["x"], 20.0, 200)
    times = long.times.copy()
    times[5] += 0.01
    bent = Trajectory(times, long.states, long.negativity, long.lqu, long.rho0, long.orientation)
    with pytest.raises(NonUniformGrid):
        classify(bent, "negativity")
    short = sample_trajectory(AB_STATE, N["x"], 10.0, 200)
    with pytest.raises(InsufficientSamples):
        classify(short, "negativity")


def test_classifier_config_validation():
    with pytest.raises(ConfigError):
        ClassifierConfig(zero_threshold=-1)
    with pytest.raises(ConfigError):
        ClassifierConfig(horizon=1.0, confirm_window=2.0)
    with pytest.raises(ConfigError):
        classify(sample_trajectory(AB_STATE, N["z"], 20.0, 200), "concurrence")


def test_label_serialization(ab_trajectories):
    d = classify(ab_trajectories["x"], "negativity").to_dict()
    assert d["kind"] == "SuddenDeath"
    assert set(d) >= {"sudden_death_time", "plateau_value", "onset_time", "rises_first"}


@pytest.mark.parametrize("kind", (2, 3, 4, 6))
def test_schmidt_fate_always_dies(kind):
    rng = np.random.default_rng(kind)
    for _ in range(10):
        n = Orientation.normalized(*rng.standard_normal(3))
        assert schmidt_fate(kind, 1 / np.sqrt(2), n) is Fate.SUDDEN_DEATH_FORCED


def test_schmidt_fate_kinds_1_and_5():
    assert schmidt_fate(5, 0.3, N["z"]) is Fate.FREEZING_POSSIBLE
    assert schmidt_fate(1, 0.3, N["z"]) is Fate.SUDDEN_DEATH_FORCED
    assert schmidt_fate(1, 1 / np.sqrt(2), N["xyz"]) is Fate.SUDDEN_DEATH_FORCED
    assert schmidt_fate(1, 1 / np.sqrt(2), Orientation.normalized(1, 1, -1)) is Fate.FREEZING_POSSIBLE


def test_schmidt_fate_kind1_is_kind5_reflected():
    rng = np.random.default_rng(99)
    for _ in range(20):
        n = Orientation.normalized(*rng.standard_normal(3))
        assert schmidt_fate(1, 0.6, n) is schmidt_fate(5, 0.6, -n)


@pytest.mark.parametrize("alpha", (0.0, 1.0, -0.1, 1.5))
def test_schmidt_fate_rejects_degenerate_alpha(alpha):
    with pytest.raises(ParamOutOfRange):
        schmidt_fate(1, alpha, N["z"])

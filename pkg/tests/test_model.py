import numpy as np
import pytest

from mapswarm.model import (ConfigError, FailureEvent, GmmComponent, ScenarioConfig, covariance_factor,
                            default_map_region, dump_config, load_config, rng_streams, sample_initial_state,
                            save_config)


def test_reference_defaults():
    cfg = ScenarioConfig()
    assert (cfg.n_msds, cfg.n_maps, cfg.comm_range, cfg.min_sep) == (2000, 80, 24.0, 20.0)
    assert (cfg.epsilon, cfg.capacity, cfg.elevation, cfg.n_clusters) == (0.1, 80, 20.0, 3)
    assert (cfg.a, cfg.b, cfg.c1, cfg.c2, cfg.mobility_scale, cfg.tau, cfg.ts, cfg.gamma) == \
        (5.0, 5.0, 0.2, 0.1, 0.2, 1.0, 0.01, 0.2)
    assert cfg.n_steps == 2500
    assert [c.mean for c in cfg.gmm] == [(50.0, 20.0), (0.0, -50.0), (-40.0, 40.0)]


@pytest.mark.parametrize("changes", [
    {"min_sep": 24.0}, {"min_sep": -1.0}, {"gamma": 1.5}, {"ts": 0.0}, {"epsilon": 0.0},
    {"failure_events": [FailureEvent(10.0, 1.0)]}, {"scheme": "rk4"},
    {"gmm": [GmmComponent(1.0, (0, 0), ((1.0, 2.0), (2.0, 1.0)))]},
    {"gmm": [GmmComponent(1.0, (0, 0), ((1.0, 0.5), (0.0, 1.0)))]},
])
def test_invalid_configs(changes):
    with pytest.raises(ConfigError):
        ScenarioConfig(**changes)


def test_yaml_round_trip(tmp_path):
    cfg = ScenarioConfig(seed=7, failure_events=[FailureEvent(10.0, 0.2)], map_region=(-1.0, 1.0, -2.0, 2.0),
                         ts=0.1 + 0.2)
    path = tmp_path / "cfg.yaml"
    save_config(cfg, path)
    back = load_config(path)
    assert back == cfg
    assert dump_config(back) == path.read_text()


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text("n_maps: 3\nbogus: 1\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_covariance_factor():
    cov = np.array([[200.0, 0.0], [0.0, 100.0]])
    f = covariance_factor(cov)
    np.testing.assert_allclose(f @ f.T, cov)
    np.testing.assert_array_equal(covariance_factor(np.zeros((2, 2))), np.zeros((2, 2)))


def test_degenerate_component_puts_everything_on_the_mean():
    cfg = ScenarioConfig(n_msds=50, gmm=[GmmComponent(1.0, (3.0, -4.0), ((0.0, 0.0), (0.0, 0.0)))])
    st = sample_initial_state(cfg)
    np.testing.assert_array_equal(st.msds.positions, np.tile([3.0, -4.0], (50, 1)))


def test_default_mixture_mean():
    cfg = ScenarioConfig(seed=3)
    st = sample_initial_state(cfg)
    means = np.array([c.mean for c in cfg.gmm])
    mixture_mean = means.mean(axis=0)
    np.testing.assert_allclose(mixture_mean, [10 / 3, 10 / 3])
    # three-sigma bound from the mixture variance
    var = np.mean([np.diag(c.cov) for c in cfg.gmm], axis=0) + means.var(axis=0)
    bound = 3.0 * np.sqrt(var / cfg.n_msds)
    assert np.all(bound < 3.0)
    assert np.all(np.abs(st.msds.positions.mean(axis=0) - mixture_mean) < 3.0)


def test_initial_maps():
    cfg = ScenarioConfig(seed=1)
    st = sample_initial_state(cfg)
    xmin, xmax, ymin, ymax = default_map_region(cfg.gmm)
    q = st.maps.positions
    assert q.shape == (80, 2)
    assert np.all((q[:, 0] >= xmin) & (q[:, 0] <= xmax) & (q[:, 1] >= ymin) & (q[:, 1] <= ymax))
    assert np.all((st.maps.velocities >= -2) & (st.maps.velocities <= -1))
    assert st.maps.alive.all() and not st.maps.load.any()


def test_empty_msd_set():
    st = sample_initial_state(ScenarioConfig(n_msds=0))
    assert st.msds.positions.shape == (0, 2)


def test_same_seed_same_state():
    a = sample_initial_state(ScenarioConfig(seed=5))
    b = sample_initial_state(ScenarioConfig(seed=5))
    assert a.msds.positions.tobytes() == b.msds.positions.tobytes()
    assert a.maps.positions.tobytes() == b.maps.positions.tobytes()
    assert a.maps.velocities.tobytes() == b.maps.velocities.tobytes()
    assert np.all(np.isfinite(a.msds.positions))


def test_streams_independent():
    s1, s2 = rng_streams(0), rng_streams(0)
    s2["mobility"].uniform(size=1000)
    assert s1["failure"].integers(1 << 30) == s2["failure"].integers(1 << 30)

import numpy as np
import pytest

from damagewalk.distributions import (
    ConstantTime,
    ExponentialTime,
    ExponentialWeight,
    FiniteDiscrete,
    GammaWeight,
    Geometric,
    ObservationLaw,
)
from damagewalk.errors import NotReachedError
from damagewalk.process_model import ProcessParams, Thresholds, TransformArgs
from damagewalk.simulator import (
    PathRealization,
    estimate_phi,
    simulate_crossings,
    simulate_path,
    summarize_crossings,
    sweep,
)
from oracles import level_insensitivity_error


def geometric_process(m1=3, m=8, v=10.0, lam=1.0):
    return ProcessParams(lam, Geometric(0.5), ExponentialWeight(rate=1.0),
                         ObservationLaw(ExponentialTime(1.0)), Thresholds(m1, m, v))


def manual_path(nodes, weights):
    n = len(nodes)
    return PathRealization(np.arange(n, dtype=float), np.array(nodes), np.array(weights, dtype=float), n - 1)


def test_summary_examples():
    s = summarize_crossings(manual_path([0, 3, 7], [0, 0, 0]), Thresholds(2, 6, float("inf")))
    assert (s.mu1, s.mu, s.nu, s.rho) == (1, 2, None, 2)
    assert s.states["mu1-1"] == (0, 0.0, 0.0) and s.aux_first
    s = summarize_crossings(manual_path([0, 0, 0], [0.5, 1.2, 4.0]), Thresholds(1, 10**6, 3.0))
    assert s.nu == 2 == s.rho and s.ordering == "mu>nu"
    s = summarize_crossings(manual_path([0, 9], [0.0, 9.5]), Thresholds(1, 5, 5.0))
    assert s.mu == s.nu == 1 and s.ordering == "mu=nu"
    # a crossing at index 0 reports the pre-initial state as zeros
    s = summarize_crossings(manual_path([4, 9], [0.1, 0.2]), Thresholds(2, 5, 5.0))
    assert s.mu1 == 0 and s.states["mu1-1"] == (0, 0.0, 0.0)
    with pytest.raises(NotReachedError):
        summarize_crossings(manual_path([0, 1], [0.0, 0.1]), Thresholds(1, 5, 5.0))


def test_no_attacks(rng):
    p = geometric_process(lam=1e-12)
    path = simulate_path(p, rng, horizon=10)
    assert len(path) == 10 and path.exhausted
    assert np.all(path.node_cum == 0) and np.all(path.weight_cum == 0)


def test_nearly_deterministic_crossing(rng):
    # about 1e4 nodes per window, each weighing 0.01
    p = ProcessParams(1e4, FiniteDiscrete((1.0,)), GammaWeight(5000.0, 5000.0 / 0.01),
                      ObservationLaw(ConstantTime(1.0)), Thresholds(1, 35_000, 1e9))
    path = simulate_path(p, rng, horizon=50)
    assert path.stopped_at == 4
    s = summarize_crossings(path, Thresholds(1, 35_000, 250.0))
    assert s.nu == 3 and s.ordering == "mu>nu"


def test_path_reproducible():
    p = geometric_process()
    a = simulate_path(p, np.random.default_rng(42))
    b = simulate_path(p, np.random.default_rng(42))
    for f in ("obs_times", "node_cum", "weight_cum"):
        np.testing.assert_array_equal(getattr(a, f), getattr(b, f))


def test_path_invariants_and_summaries(rng):
    p = geometric_process()
    counts = {"mu<nu": 0, "mu=nu": 0, "mu>nu": 0}
    for _ in range(300):
        path = simulate_path(p, rng)
        assert np.all(np.diff(path.node_cum) >= 0) and np.all(np.diff(path.weight_cum) >= 0)
        dx, dy = np.diff(path.node_cum), np.diff(path.weight_cum)
        assert np.all(dy[dx > 0] > 0)
        s = summarize_crossings(path, p.thresholds)
        counts[s.ordering] += 1
        assert s.rho == min(i for i in (s.mu, s.nu) if i is not None)
        if s.mu is not None:
            assert s.mu1 <= s.mu
        if s.aux_first:
            assert s.states["mu1"][2] < s.states["rho"][2]
    assert sum(counts.values()) == 300


def test_block_sample_partitions_paths():
    p = geometric_process()
    sample = simulate_crossings(p, 5000, seed=1, m1_levels=(1, 3, 5))
    assert sample.reached.all()
    classes = [sample.event_mask(e).sum() for e in ("mu<nu", "mu=nu", "mu>nu")]
    assert sum(classes) == 5000
    # a higher auxiliary level can only shrink the event
    sizes = [sample.event_mask("mu1<min", m).sum() for m in (1, 3, 5)]
    assert sizes[0] >= sizes[1] >= sizes[2]
    with pytest.raises(KeyError):
        sample.event_mask("mu1<min", 2)


def test_neutral_whole_space():
    est = estimate_phi(geometric_process(), TransformArgs(), "all", 2000, seed=0)
    assert est.value == 1.0 and est.std_error == 0.0


def test_unreachable_weight():
    est = estimate_phi(geometric_process(v=1e9), TransformArgs(), "mu<nu", 2000, seed=0)
    assert est.value == 1.0


def test_worker_independence():
    p = geometric_process()
    a = simulate_crossings(p, 10_000, seed=5, workers=1, block_size=1000)
    b = simulate_crossings(p, 10_000, seed=5, workers=4, block_size=1000)
    for f in ("ordering", "reached", "rho_index", "rho_pre", "rho_at"):
        np.testing.assert_array_equal(getattr(a, f), getattr(b, f))
    args = TransformArgs(u=0.8, alpha=0.9, v=0.1, h=0.2)
    assert a.estimate(args, "mu1<min") == b.estimate(args, "mu1<min")


def test_horizon_exhaustion():
    p = geometric_process(lam=1e-6)
    with pytest.raises(NotReachedError):
        estimate_phi(p, TransformArgs(), "all", 100, seed=0, horizon=3)
    est = estimate_phi(p, TransformArgs(), "all", 100, seed=0, horizon=3, max_unreached=1.0)
    assert est.n_unreached == 100


def test_complex_integrand():
    est = estimate_phi(geometric_process(), TransformArgs(u=0.5j, h=0.3j), "mu1<min", 1000, seed=2)
    assert isinstance(est.value, complex) and abs(est.value) <= 1


def test_sweep_contract():
    p = geometric_process()
    rows = sweep(p, TransformArgs(), "mu1<min", "m1", [3], n_paths=3000, seed=4)
    single = estimate_phi(p, TransformArgs(), "mu1<min", 3000, seed=4)
    assert rows[0].estimate == single
    with pytest.raises(ValueError):
        sweep(p, TransformArgs(), "mu1<min", "m1", [8], n_paths=10)
    with pytest.raises(ValueError):
        sweep(p, TransformArgs(), "mu1<min", "m1", [1, 3, 2], n_paths=10)


def test_sweep_monotone_in_aux_level():
    p = geometric_process()
    rows = sweep(p, TransformArgs(), "mu1<min", "m1", range(1, 8), n_paths=20_000, seed=9)
    for a, b in zip(rows, rows[1:]):
        gap = b.estimate.real - a.estimate.real
        assert gap <= 3 * np.hypot(a.estimate.std_error, b.estimate.std_error)


# M1-level insensitivity of the three-threshold operator --------------------


def test_aux_level_insensitivity():
    assert level_insensitivity_error(n_paths=20, n_triples=10) < 1e-10

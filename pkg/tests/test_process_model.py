import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from damagewalk.distributions import (
    ConstantTime,
    ExponentialTime,
    ExponentialWeight,
    FiniteDiscrete,
    GammaWeight,
    Geometric,
    ObservationLaw,
)
from damagewalk.errors import DomainError
from damagewalk.process_model import (
    ProcessParams,
    Thresholds,
    TransformArgs,
    gamma_increment,
    gamma_initial,
    marked_poisson_transform,
    validate_domain,
)
from damagewalk.simulator import _window


def model2_params(lam=1.0, a=0.5, xi=1.0, mu=1.0, delay=None):
    obs = ObservationLaw(ExponentialTime(mu)) if delay is None else ObservationLaw(ExponentialTime(mu), delay)
    return ProcessParams(lam, Geometric(a), ExponentialWeight(rate=xi), obs, Thresholds(3, 8, 10.0))


def model1_params(lam=1.0, c=0.5):
    return ProcessParams(lam, FiniteDiscrete((0.2, 0.3, 0.5)), GammaWeight(2.0, 1.0),
                         ObservationLaw(ConstantTime(c)), Thresholds(3, 9, 12.0))


def test_thresholds_invariants():
    with pytest.raises(ValueError):
        Thresholds(8, 8, 1.0)
    with pytest.raises(ValueError):
        Thresholds(1, 3, 0.0)
    with pytest.raises(ValueError):
        Thresholds(-1, 3, 1.0)


def test_gamma_at_neutral_is_one():
    for p in (model2_params(), model1_params()):
        assert gamma_increment(p, 1.0, 0.0, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_gamma_model2_composition(rng):
    p = model2_params(lam=1.3, a=0.4, mu=0.8)
    z = 0.7
    g = 0.4 * z / (1 - 0.6 * z)
    expected = 0.8 / (0.8 + 1.3 - 1.3 * g)
    assert gamma_increment(p, z, 0.0, 0.0) == pytest.approx(expected, abs=1e-14)
    _, x, _ = _window(p, rng, 10**5, initial=False)
    vals = z**x
    assert abs(vals.mean() - expected) < 3 * vals.std() / np.sqrt(len(x))


def test_gamma_model1_composition(rng):
    p = model1_params()
    v = 0.7
    lv = (1.0 / (1.0 + v)) ** 2
    g = 0.2 * lv + 0.3 * lv**2 + 0.5 * lv**3
    expected = np.exp(-0.5 * (1.0 - g))
    assert gamma_increment(p, 1.0, v, 0.0) == pytest.approx(expected, abs=1e-14)
    _, _, y = _window(p, rng, 10**5, initial=False)
    vals = np.exp(-v * y)
    assert abs(vals.mean() - expected) < 3 * vals.std() / np.sqrt(len(y))


def test_gamma_initial():
    assert gamma_initial(model2_params(), 0.3, 0.2, 0.1) == 1.0
    p = model2_params(delay=ConstantTime(0.8))
    assert gamma_initial(p, 1.0, 0.0, 0.6) == pytest.approx(np.exp(-0.6 * 0.8))
    p = model2_params(delay=ExponentialTime(2.0))
    g = Geometric(0.5).pgf(0.5 * 1.0 / 1.2)
    assert gamma_initial(p, 0.5, 0.2, 0.1) == pytest.approx(2.0 / (2.0 + 0.1 + 1.0 - g))


def test_marked_poisson_transform(rng):
    p = ProcessParams(2.0, Geometric(0.5), ExponentialWeight(rate=1.0),
                      ObservationLaw(ExponentialTime(1.0)), Thresholds(3, 8, 10.0))
    assert marked_poisson_transform(p, 0.4, 0.3, 0.0) == 1.0
    assert marked_poisson_transform(p, 1.0, 0.0, 5.0) == 1.0
    g = p.node_law.pgf(0.8 / 1.5)
    expected = np.exp(2 * 1.3 * (g - 1))
    assert marked_poisson_transform(p, 0.8, 0.5, 1.3) == pytest.approx(expected, abs=1e-14)
    with pytest.raises(DomainError):
        marked_poisson_transform(p, 1.2, 0.0, 1.0)


@pytest.mark.parametrize("z,v", [(0.5, 0.0), (1.0, 0.3), (0.8, 0.5), (0.2, 1.0), (0.9, 0.1), (0.0, 2.0)])
def test_marked_poisson_empirical(z, v, rng):
    p = ProcessParams(2.0, Geometric(0.5), ExponentialWeight(rate=1.0),
                      ObservationLaw(ConstantTime(1.3)), Thresholds(3, 8, 10.0))
    _, x, y = _window(p, rng, 10**5, initial=False)
    vals = z**x * np.exp(-v * y)
    expected = marked_poisson_transform(p, z, v, 1.3).real
    assert abs(vals.mean() - expected) < 3 * vals.std() / np.sqrt(len(x)) + 1e-12


def test_validate_domain_examples():
    assert validate_domain(0.9, 0.1, 0.1).guaranteed
    assert validate_domain(0.9, 0.1, 0.1).pattern == "strict"
    assert not validate_domain(1.0, 0.0, 0.0).guaranteed
    rep = validate_domain(1.0, 0.2, 0.0)
    assert rep.guaranteed and rep.pattern == "weak:theta,z"
    assert not validate_domain(1.0, 0.2, 0.0, pattern="strict").guaranteed
    assert validate_domain(1.2, 0.0, 0.0).violated == ("z",)


def test_transform_args_helpers():
    a = TransformArgs.between_crossings(0.5)
    assert a.theta == -0.5 and a.h == 0.5
    assert TransformArgs().is_real()
    assert not TransformArgs(u=0.5j).is_real()
    assert len(TransformArgs().as_tuple()) == 12


admissible = st.tuples(
    st.floats(0, 1), st.floats(0, 2 * np.pi), st.floats(0, 3), st.floats(0, 3),
)


@settings(max_examples=50, deadline=None)
@given(admissible, st.floats(-2, 2))
def test_constant_spacing_consistency(args, vi):
    r, phi, vr, theta = args
    p = model1_params(lam=1.4, c=0.7)
    z, v = r * np.exp(1j * phi), vr + 1j * vi
    lhs = gamma_increment(p, z, v, theta)
    rhs = np.exp(-theta * 0.7) * marked_poisson_transform(p, z, v, 0.7)
    assert abs(lhs - rhs) < 1e-12


@settings(max_examples=1000, deadline=None)
@given(admissible, st.booleans())
def test_guaranteed_implies_contraction(args, constant):
    r, phi, v, theta = args
    p = model1_params() if constant else model2_params()
    z = r * np.exp(1j * phi)
    if validate_domain(z, v, theta).guaranteed:
        assert abs(gamma_increment(p, z, v, theta)) < 1


@pytest.mark.parametrize("z,v", [(1.0, 0.0), (0.5, 0.3), (0.9, 1.0), (0.2, 0.0), (0.7, 2.0)] * 2)
def test_completely_monotone_in_theta(z, v):
    # alternating signs of forward differences up to order 3
    p = model2_params() if z < 0.6 else model1_params()
    h = 0.25
    vals = np.array([gamma_increment(p, z, v, 0.1 + i * h).real for i in range(4)])
    for k in range(1, 4):
        d = np.diff(vals, n=k)
        assert np.all((-1) ** k * d >= -1e-15)

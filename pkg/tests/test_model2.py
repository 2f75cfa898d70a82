from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from damagewalk import model2, transcribed
from damagewalk.errors import DomainError
from damagewalk.model2 import (
    Model2Params,
    c_of,
    d_of,
    gamma_p,
    interval_transform,
    interval_transform_sum,
    joint_at_min,
    joint_at_min_sum,
    joint_at_mu1,
    joint_at_mu1_sum,
    marginal_at_min,
    marginal_at_mu1,
    prob_mu1_first,
    prob_mu1_first_sum,
    r_kj,
    s_of,
)
from damagewalk.operator.functionals import crossing_levels
from damagewalk.process_model import TransformArgs
from damagewalk.simulator import estimate_phi, simulate_crossings

SETS = [
    Model2Params(1.0, 0.5, 1.0, 1.0, 3, 8, 10.0),
    Model2Params(2.0, 0.4, 1.5, 1.0, 2, 6, 4.0),
    Model2Params(0.5, 0.7, 0.8, 2.0, 1, 7, 6.0),
    Model2Params(1.5, 0.3, 2.0, 0.5, 4, 5, 5.0),
]

@st.composite
def model2_params(draw):
    m1 = draw(st.integers(1, 5))
    return Model2Params(
        draw(st.floats(0.2, 3)), draw(st.floats(0.1, 1)), draw(st.floats(0.3, 3)),
        draw(st.floats(0.2, 3)), m1, m1 + draw(st.integers(1, 6)), draw(st.floats(0.5, 15)),
    )


def simulated(mp):
    p = mp.to_process_params()
    return replace(p, thresholds=crossing_levels(p.thresholds))


def test_notation():
    mp = SETS[0]
    assert c_of(mp, 0.0) == 1.0
    for th in (0.0, 0.5, 5.0):
        assert 0 < d_of(mp, th) < 1
    assert s_of(mp.with_thresholds(m1=7), 0.3, 0.1) == 0
    assert 0 <= model2.k_j(mp, 3) <= 1
    assert gamma_p(0, 2.0) == 1.0
    assert gamma_p(0, 2.0, "paper") == pytest.approx(1 - np.exp(-2.0))
    assert r_kj(mp, 3, 2) == 0.0
    assert r_kj(mp, 3, 2, sum_convention="paper") == pytest.approx(np.exp(-10.0))
    with pytest.raises(ValueError):
        Model2Params(1.0, 0.5, 1.0, 1.0, 0, 8, 10.0)


@pytest.mark.parametrize("mp", SETS)
def test_closed_forms_match_finite_sums(mp):
    assert prob_mu1_first(mp) == pytest.approx(prob_mu1_first_sum(mp), abs=1e-13)
    for u, v, th in [(1, 0, 0), (0.7, 0.3, 0.2), (0.2, 2.0, 1.0), (0.5 + 0.5j, 0.1j, 0.3 - 0.2j)]:
        assert abs(joint_at_mu1(mp, u, v, th) - joint_at_mu1_sum(mp, u, v, th)) < 1e-12
    for al, be, h in [(1, 0, 0), (0.9, 0.3, 0.2), (0.3, 1.5, 0.8), (0.6j, 0.2 + 0.1j, 0.1)]:
        assert abs(joint_at_min(mp, al, be, h) - joint_at_min_sum(mp, al, be, h)) < 1e-12
    for h in (0.0, 0.4, 3.0, 0.5 + 1j):
        assert abs(interval_transform(mp, h) - interval_transform_sum(mp, h)) < 1e-12


@pytest.mark.parametrize("mp", SETS)
def test_neutral_values_coincide(mp):
    P = prob_mu1_first(mp)
    for val in (joint_at_mu1(mp), joint_at_min(mp), interval_transform(mp, 0.0),
                marginal_at_mu1(mp, "N", 1.0), marginal_at_mu1(mp, "T", 0.0),
                marginal_at_min(mp, "W", 0.0), marginal_at_min(mp, "T", 0.0)):
        assert abs(val - P) < 1e-10


@pytest.mark.parametrize("mp", SETS)
def test_marginals_equal_neutralized_joints(mp):
    for x in (0.0, 0.3, 0.8, 1.0):
        assert abs(marginal_at_mu1(mp, "N", x) - joint_at_mu1(mp, u=x)) < 1e-12
        assert abs(marginal_at_min(mp, "N", x) - joint_at_min(mp, alpha=x)) < 1e-12
    for x in (0.0, 0.5, 2.0):
        assert abs(marginal_at_mu1(mp, "W", x) - joint_at_mu1(mp, v=x)) < 1e-12
        assert abs(marginal_at_mu1(mp, "T", x) - joint_at_mu1(mp, theta=x)) < 1e-12
        assert abs(marginal_at_min(mp, "W", x) - joint_at_min(mp, beta=x)) < 1e-12
        assert abs(marginal_at_min(mp, "T", x) - joint_at_min(mp, h=x)) < 1e-12


def test_short_gap_branch():
    mp = Model2Params(1.3, 0.6, 0.9, 1.7, 4, 5, 7.0)
    expected = 0.6 * 1.7 / (1.7 + 1.3) * gamma_p(4, 0.9 * 7.0)
    assert prob_mu1_first(mp) == pytest.approx(expected, abs=1e-15)
    assert joint_at_mu1(mp) == pytest.approx(expected, abs=1e-15)


def test_small_node_argument_uses_finite_sum():
    mp = SETS[0]
    assert abs(joint_at_min(mp, alpha=1e-8) - joint_at_min_sum(mp, alpha=1e-8)) < 1e-12
    assert joint_at_min(mp, alpha=0.0) == 0.0


def test_domain_errors():
    with pytest.raises(DomainError):
        joint_at_mu1(SETS[0], u=1.1)
    with pytest.raises(DomainError):
        joint_at_min(SETS[0], beta=-0.1)
    with pytest.raises(DomainError):
        interval_transform(SETS[0], -0.2)


def test_tiny_weight_threshold():
    mp = SETS[0].with_thresholds(v=1e-6)
    assert prob_mu1_first(mp) < 1e-12
    est = estimate_phi(simulated(mp), TransformArgs(), "mu1<min", 20_000, seed=1)
    assert est.value < 1e-3


def test_interval_decay():
    mp = SETS[0]
    vals = [interval_transform(mp, h) for h in (0.0, 1.0, 10.0, 100.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-3


@settings(max_examples=60, deadline=None)
@given(mp=model2_params(), u=st.floats(0, 1), v=st.floats(0, 3), th=st.floats(0, 3))
def test_defective_bounds(mp, u, v, th):
    P = prob_mu1_first(mp)
    assert -1e-12 <= P <= 1 + 1e-12
    for val in (joint_at_mu1(mp, u, v, th), joint_at_min(mp, u, v, th), interval_transform(mp, th)):
        assert -1e-12 <= val <= P + 1e-10


@settings(max_examples=60, deadline=None)
@given(mp=model2_params())
def test_monotone_in_aux_level(mp):
    if mp.m - mp.m1 < 2:
        return
    lower = mp.with_thresholds(m1=mp.m1 + 1)
    assert prob_mu1_first(lower) <= prob_mu1_first(mp) + 1e-12


def test_sum_convention_only_changes_first_level():
    for mp in SETS:
        for m1 in range(2, mp.m - 1):
            q = mp.with_thresholds(m1=m1)
            assert prob_mu1_first(q, "paper") == pytest.approx(prob_mu1_first(q), abs=1e-15)
    q = SETS[0].with_thresholds(m1=1)
    assert abs(prob_mu1_first(q, "paper") - prob_mu1_first_sum(q)) > 1e-6
    assert prob_mu1_first(q) == pytest.approx(prob_mu1_first_sum(q), abs=1e-14)


def test_simulation_reference_set():
    mp = SETS[0]
    p = simulated(mp)
    sample = simulate_crossings(p, 10**5, seed=11)
    checks = [
        (TransformArgs(), prob_mu1_first(mp)),
        (TransformArgs.at_min(0.9, 0.3, 0.2), joint_at_min(mp, 0.9, 0.3, 0.2)),
        (TransformArgs.between_crossings(0.5), interval_transform(mp, 0.5)),
        (TransformArgs.at_mu1(0.8, 0.1, 0.2), joint_at_mu1(mp, 0.8, 0.1, 0.2)),
    ]
    for args, closed in checks:
        est = sample.estimate(args, "mu1<min")
        assert abs(est.real - closed) < 3 * est.std_error


def test_transcriptions_differ_from_derived():
    mp = Model2Params(1.0, 0.5, 1.5, 1.0, 3, 8, 10.0)
    derived = {
        "joint_at_mu1": lambda x: joint_at_mu1(mp, u=x),
        "marginal_mu1_time": lambda x: marginal_at_mu1(mp, "T", x),
        "marginal_min_nodes": lambda x: marginal_at_min(mp, "N", x),
        "marginal_min_weight": lambda x: marginal_at_min(mp, "W", x),
        "marginal_min_time": lambda x: marginal_at_min(mp, "T", x),
    }
    for name, (fn, _, x) in transcribed.TRANSCRIPTIONS.items():
        assert abs(fn(mp, x) - derived[name](x)) > 1e-4, name

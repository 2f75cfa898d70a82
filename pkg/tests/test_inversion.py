import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from damagewalk.errors import NumericalInstabilityError
from damagewalk.operator.inversion import AccuracyWarning, lc_invert, stehfest, talbot
from damagewalk.special import reg_gamma_p


def test_constant():
    for V in (0.1, 1.0, 25.0):
        res = lc_invert(lambda w: np.ones_like(w), V)
        assert abs(res.value - 1.0) < 1e-10


def test_exponential_pair():
    xi = 1.7
    for V in (0.3, 2.0, 10.0):
        res = lc_invert(lambda w: xi / (w + xi), V)
        assert abs(res.value - (1 - np.exp(-xi * V))) < 1e-10


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 12), xi=st.floats(0.2, 5), V=st.floats(0.1, 30))
def test_gamma_tail_pair(k, xi, V):
    res = lc_invert(lambda w: (xi / (w + xi)) ** k, V, cross_check=False)
    assert abs(res.value - reg_gamma_p(k, xi * V)) < 1e-8


def test_complex_parameter_transform():
    # LC image of exp(-c q) with complex c, needs both halves of the contour
    c = 0.5 + 0.8j
    V = 3.0
    got = talbot(lambda w: w / (w + c), V)
    assert abs(got - np.exp(-c * V)) < 1e-9


def test_methods_agree_and_report():
    f = lambda w: (2.0 / (w + 2.0)) ** 3
    a = talbot(f, 4.0)
    b = stehfest(f, 4.0)
    assert abs(a - b) < 1e-3
    res = lc_invert(f, 4.0, method="stehfest")
    assert res.method == "stehfest" and res.cross_check is not None
    assert res.error < 1e-3


def test_cross_check_disagreement_warns():
    # cos(2q): Talbot resolves it, the real-axis method cannot
    f = lambda w: w * w / (w * w + 4.0)
    with pytest.warns(AccuracyWarning):
        res = lc_invert(f, 5.0)
    assert abs(res.value - np.cos(10.0)) < 1e-6
    assert "differ" in res.warning


def test_self_error_warns():
    f = lambda w: w * w / (w * w + 9.0)
    with pytest.warns(AccuracyWarning, match="self-error"):
        lc_invert(f, 5.0, cross_check=False)


def test_clean_inversion_is_silent():
    with warnings.catch_warnings():
        warnings.simplefilter("error", AccuracyWarning)
        res = lc_invert(lambda w: (1.0 / (w + 1.0)) ** 2, 2.0)
    assert res.warning == ""


def test_gross_disagreement_raises(monkeypatch):
    from damagewalk.operator import inversion
    monkeypatch.setattr(inversion, "stehfest", lambda f, t, order=14: 5.0 + 0j)
    with pytest.raises(NumericalInstabilityError):
        inversion.lc_invert(lambda w: np.ones_like(w), 1.0)


def test_bad_inputs():
    with pytest.raises(ValueError):
        lc_invert(lambda w: w, 0.0)
    with pytest.raises(ValueError):
        lc_invert(lambda w: w, 1.0, method="euler")
    with pytest.raises(ValueError):
        stehfest(lambda w: w, 1.0, order=13)

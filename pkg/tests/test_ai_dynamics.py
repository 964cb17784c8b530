import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import eval_hermite

from symbreak.ai_dynamics import (
    AiScenario,
    PuncturedKind,
    ai_moments,
    dyn_phase,
    interference_phase,
    inv_dpi2,
    inv_dq2,
    overlap_coefficients,
    punctured_times,
    punctured_times_until,
    uncertainty_product,
)


def _ho(n, w, q):
    return (w / math.pi) ** 0.25 / math.sqrt(2.0**n * math.factorial(n)) * eval_hermite(n, math.sqrt(w) * q) \
        * np.exp(-0.5 * w * q**2)


@pytest.mark.parametrize("wi,wf", [(1.0, 1.0), (0.1, 1.0), (3.0, 0.7), (0.01, 1.0)])
def test_overlaps_match_quadrature(wi, wf):
    q = np.linspace(-40, 40, 200001) / math.sqrt(min(wi, wf))
    c = overlap_coefficients(wi, wf, 12)
    for n in range(13):
        ref = np.trapezoid(_ho(n, wf, q) * _ho(0, wi, q), q)
        assert c[n] == pytest.approx(ref, abs=1e-9)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_overlaps_normalised_and_even(wi, wf):
    r = abs(wi - wf) / (wi + wf)
    n_max = 2 * int(min(2000, 40 / max(1e-12, -math.log(max(r, 1e-300))) + 20))
    c = overlap_coefficients(wi, wf, n_max)
    assert np.all(c[1::2] == 0.0)
    if r < 0.9:
        assert np.sum(c**2) == pytest.approx(1.0, abs=1e-10)


def _level_sum_moments(s, t, n_max=600):
    """<Q^2>, <Pi^2> from the sudden projection and adiabatic phases, level by level."""
    c = overlap_coefficients(s.omega0, 1.0 / s.t_hat, n_max)
    n = np.arange(c.size)
    phi = interference_phase(s, t)
    w = math.sqrt(s.ramp.delta * t)
    diag = np.sum(c**2 * (2 * n + 1))
    off = 2.0 * np.sum(c[:-2] * c[2:] * np.cos(2 * phi) * np.sqrt((n[:-2] + 1) * (n[:-2] + 2)))
    return (diag + off) / (2 * s.big_n * w), s.big_n * w * (diag - off) / 2


@pytest.mark.parametrize("t0_red", [0.5, 0.1, 0.03])
@pytest.mark.parametrize("t_red", [1.0, 1.37, 2.2, 3.9, 6.5])
def test_closed_forms_match_level_sum(t0_red, t_red):
    s = AiScenario.from_reduced(50.0, 1e-3, t0_red)
    t = t_red * s.t_hat
    q2, p2 = _level_sum_moments(s, t)
    assert inv_dq2(s, t) == pytest.approx(1.0 / q2, rel=1e-9)
    assert inv_dpi2(s, t) == pytest.approx(1.0 / p2, rel=1e-9)


def test_continuity_with_frozen_state_at_freeze_out():
    s = AiScenario.from_reduced(1e3, 2.0, 0.05)
    assert inv_dq2(s, s.t_hat) == pytest.approx(2 * s.big_n * s.omega0, rel=1e-12)
    assert inv_dpi2(s, s.t_hat) == pytest.approx(2 / (s.big_n * s.omega0), rel=1e-12)


def test_punctured_values():
    loc = punctured_times(PuncturedKind.LOCALIZATION, 2, 1.0)
    rev = punctured_times("Revival", 2, 1.0)
    ref_loc = [(1.5 * k * math.pi + 0.75 * math.pi + 1) ** (2 / 3) for k in range(3)]
    ref_rev = [(1.5 * k * math.pi + 1) ** (2 / 3) for k in range(3)]
    assert np.allclose(loc, ref_loc, rtol=1e-15) and np.allclose(rev, ref_rev, rtol=1e-15)
    assert loc == pytest.approx([2.2416, 4.0228, 5.4665], abs=1e-4)
    assert rev[0] == 1.0


@pytest.mark.parametrize("t0_red", [0.3, 0.01])
def test_punctured_times_are_extrema(t0_red):
    s = AiScenario.from_reduced(10.0, 1.0, t0_red)
    offsets = []
    for t in punctured_times_until("Localization", 8.0, s.t_hat):
        assert math.sin(interference_phase(s, t)) ** 2 == pytest.approx(1.0, abs=1e-12)
        # the growing sqrt(t) prefactor pushes the peak of the order parameter
        # slightly past the comb point, by less each period
        res = minimize_scalar(lambda x: -inv_dq2(s, x), bounds=(t - 0.2, t + 0.2), method="bounded",
                              options={"xatol": 1e-10})
        offsets.append(res.x - t)
    offsets = np.array(offsets)
    assert np.all(offsets > 0) and np.all(offsets < 0.03) and np.all(np.diff(offsets) < 0)
    for t in punctured_times_until("Revival", 8.0, s.t_hat):
        assert math.sin(interference_phase(s, t)) == pytest.approx(0.0, abs=1e-12)


def test_punctured_times_until_bounds():
    times = punctured_times_until("Revival", 6.0, 1.0)
    assert times[0] == 1.0 and times[-1] <= 6.0
    assert np.all(np.diff(times) > 0)
    assert punctured_times_until("Localization", 0.5, 1.0).size == 0
    with pytest.raises(ValueError):
        punctured_times("Revival", -1, 1.0)


def test_dyn_phase_scales_with_level():
    s = AiScenario.from_reduced(10.0, 1.0, 0.1)
    p0, p3 = dyn_phase(s, 2.0, 0), dyn_phase(s, 2.0, 3)
    assert p3.value == pytest.approx(7 * p0.value)
    assert dyn_phase(s, 1.0, 5).value == 0.0
    with pytest.raises(ValueError):
        dyn_phase(s, 2.0, -1)


def test_domain_errors():
    adiabatic = AiScenario.from_reduced(10.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        inv_dq2(adiabatic, 3.0)
    impulsive = AiScenario.from_reduced(10.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        inv_dpi2(impulsive, 0.5)
    with pytest.raises(ValueError):
        ai_moments(impulsive, 0.01)


def test_ai_moments_regimes():
    s = AiScenario.from_reduced(10.0, 1.0, 0.1)
    q2, p2 = ai_moments(s, np.array([0.1, 0.5, 0.99]))
    assert np.allclose(q2, 1 / (2 * s.big_n * s.omega0)) and np.allclose(p2, s.big_n * s.omega0 / 2)
    late = np.array([1.5, 2.5])
    q2, _ = ai_moments(s, late)
    assert np.allclose(1 / q2, inv_dq2(s, late))
    ad = AiScenario.from_reduced(10.0, 1.0, 3.0)
    q2, p2 = ai_moments(ad, np.array([3.0, 4.0]))
    assert np.allclose(1 / q2, 2 * ad.big_n * np.sqrt([3.0, 4.0]))


@given(st.floats(1e-3, 0.99), st.floats(1.0, 20.0))
def test_ai_product_respects_uncertainty(t0_red, t_red):
    s = AiScenario.from_reduced(100.0, 1.0, t0_red)
    assert uncertainty_product(s, t_red) >= 0.25 * (1 - 1e-12)


@given(st.floats(1e-3, 0.99), st.integers(0, 5))
def test_ai_revival_restores_frozen_product(t0_red, kappa):
    s = AiScenario.from_reduced(100.0, 1.0, t0_red)
    t = punctured_times("Revival", kappa, s.t_hat)[-1]
    assert uncertainty_product(s, t) == pytest.approx(0.25, rel=1e-9)

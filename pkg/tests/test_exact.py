import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from symbreak.ai_dynamics import AiScenario
from symbreak.errors import AliasingError, GridTooNarrowError
from symbreak.exact import (
    GridSpec,
    classical_envelope,
    fidelity,
    initial_state,
    max_rotation_rate,
    method_gap,
    moment_minima,
    moments,
    momentum_density,
    principal_variances,
    quantal_phase,
    ridge_angle,
    rotation_angle,
    rotation_rate,
    splitstep_evolve,
    uncertainty_excess,
    unwrap_angles,
    wavefunction,
    width_param,
    wigner,
)
from symbreak.exact import envelope as env_mod


# --- envelope -------------------------------------------------------------

@pytest.mark.parametrize("delta", [1e-3, 1.0, 50.0])
@pytest.mark.parametrize("t0_red", [1e-3, 0.1, 1.0, 10.0])
def test_airy_and_ode_routes_agree(delta, t0_red):
    s = AiScenario.from_reduced(100.0, delta, t0_red)
    t = s.t_hat * np.linspace(t0_red, t0_red + 8.0, 400)
    assert method_gap(s, t) <= 1e-8


def test_initial_data_exact():
    s = AiScenario.from_reduced(10.0, 1e-3, 0.01)
    e = classical_envelope(s, s.ramp.t0)
    assert e.f == 1.0 and e.f_dot == pytest.approx(1j * s.omega0, rel=0, abs=0)


@pytest.mark.parametrize("method", ["Airy", "OdeIntegration"])
def test_wronskian_conserved(method):
    s = AiScenario.from_reduced(10.0, 1.0, 0.01)
    e = classical_envelope(s, np.linspace(s.ramp.t0, 10.0, 500), method)
    assert np.max(np.abs(e.wronskian - s.omega0)) / s.omega0 < 1e-9


def test_envelope_solves_ode():
    s = AiScenario.from_reduced(10.0, 1.0, 0.1)
    t = np.linspace(0.5, 4.0, 50)
    h = 1e-4
    f = lambda x: classical_envelope(s, x).f
    second = (f(t + h) - 2 * f(t) + f(t - h)) / h**2
    assert np.max(np.abs(second + s.ramp.delta * t * f(t))) < 1e-5 * np.max(np.abs(f(t)))


def test_far_argument_falls_back_to_ode(caplog, monkeypatch):
    monkeypatch.setattr(env_mod, "AIRY_MAX_ABS_ARG", 3.0)
    s = AiScenario.from_reduced(10.0, 1.0, 0.1)
    t = np.linspace(s.ramp.t0, 5.0, 50)
    with caplog.at_level(logging.WARNING, logger=env_mod.__name__):
        e = classical_envelope(s, t)
    assert "ODE" in caplog.text
    assert np.max(np.abs(e.wronskian - s.omega0)) < 1e-9


def test_envelope_rejects_times_before_start():
    s = AiScenario.from_reduced(10.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        classical_envelope(s, 0.05)


@given(st.floats(1e-3, 5.0), st.floats(1e-2, 1e2), st.floats(0.0, 6.0))
def test_wronskian_property(t0_red, delta, span):
    s = AiScenario.from_reduced(1.0, delta, t0_red)
    e = classical_envelope(s, s.ramp.t0 + span * s.t_hat)
    assert float(e.wronskian) == pytest.approx(s.omega0, rel=1e-8)


# --- phase and width ------------------------------------------------------

@pytest.mark.parametrize("t_red", [0.3, 1.0, 2.5, 6.0])
def test_quantal_phase_matches_integral(t_red):
    s = AiScenario.from_reduced(10.0, 1.0, 0.01)
    integrand = lambda x: s.omega0 / abs(complex(classical_envelope(s, x).f)) ** 2
    ref, _ = quad(integrand, s.ramp.t0, t_red, limit=400, epsabs=1e-12, epsrel=1e-12)
    assert float(quantal_phase(s, t_red)) == pytest.approx(ref, rel=1e-8, abs=1e-10)


def test_quantal_phase_monotone_from_zero():
    s = AiScenario.from_reduced(10.0, 1.0, 1e-3)
    t = np.linspace(s.ramp.t0, 8.0, 300)
    ph = quantal_phase(s, t)
    assert ph[0] == 0.0 and np.all(np.diff(ph) > 0)


def test_adiabatic_phase_tracks_dynamical_phase():
    # deep in the adiabatic regime the phase approaches the integral of omega(t)
    s = AiScenario.from_reduced(10.0, 1.0, 50.0)
    t1 = 60.0
    adiabatic = (2.0 / 3.0) * (t1**1.5 - s.ramp.t0**1.5)
    assert float(quantal_phase(s, t1)) == pytest.approx(adiabatic, rel=1e-3)


def test_uncertainty_excess_equals_product_minus_quarter():
    s = AiScenario.from_reduced(10.0, 1.0, 0.05)
    t = np.linspace(0.2, 5.0, 40)
    q2, p2 = moments(s, t)
    assert np.allclose(q2 * p2 - 0.25, uncertainty_excess(s, t), rtol=1e-9, atol=1e-12)


@given(st.floats(1e-3, 20.0), st.floats(1.0, 1e5), st.floats(0.0, 8.0))
def test_heisenberg_bound(t0_red, big_n, span):
    s = AiScenario.from_reduced(big_n, 1.0, t0_red)
    q2, p2 = moments(s, s.ramp.t0 + span)
    assert q2 * p2 >= 0.25 - 1e-12


def test_adiabatic_order_parameter(adiabatic_scenario):
    s = adiabatic_scenario
    t = np.linspace(s.ramp.t0, s.ramp.t0 + 20.0, 200)
    q2, _ = moments(s, t)
    ref = 2 * s.big_n * np.sqrt(s.ramp.delta * t)
    assert np.max(np.abs(1 / q2 - ref) / ref) < 1e-2


# --- wavefunctions -------------------------------------------------------

def _axis(s, t, sig=12.0, n=4096):
    q2, _ = moments(s, t)
    half = sig * math.sqrt(float(q2))
    return np.linspace(-half, half, n)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_wavefunction_norm_and_moments(impulse_scenario, n):
    s, t = impulse_scenario, 3.1
    q = _axis(s, t)
    psi = wavefunction(s, t, n, q)
    q2, _ = moments(s, t)
    var = np.trapezoid(np.abs(psi) ** 2 * q**2, q)
    assert var == pytest.approx((2 * n + 1) * float(q2), rel=1e-8)


def test_wavefunctions_orthonormal(impulse_scenario):
    s, t = impulse_scenario, 2.0
    q = _axis(s, t, n=8192)
    psis = [wavefunction(s, t, n, q) for n in range(5)]
    gram = np.array([[fidelity(a, b, q) for b in psis] for a in psis])
    assert np.allclose(gram, np.eye(5), atol=1e-8)


def test_wavefunction_grid_too_narrow(impulse_scenario):
    q = _axis(impulse_scenario, 2.0, sig=1.0)
    with pytest.raises(GridTooNarrowError):
        wavefunction(impulse_scenario, 2.0, 0, q)
    with pytest.raises(ValueError):
        wavefunction(impulse_scenario, 2.0, -1, q)


def test_momentum_density_is_fourier_transform(impulse_scenario):
    s, t = impulse_scenario, 2.7
    q = _axis(s, t, sig=14.0, n=1 << 14)
    psi = wavefunction(s, t, 0, q)
    h = q[1] - q[0]
    p = np.fft.fftshift(np.fft.fftfreq(q.size, d=h)) * 2 * np.pi
    amp = np.fft.fftshift(np.fft.fft(psi)) * h / math.sqrt(2 * math.pi)
    dens = np.abs(amp) ** 2
    ref = momentum_density(s, t, p)
    assert np.max(np.abs(dens - ref)) < 1e-8 * np.max(ref)


# --- split-step oracle ---------------------------------------------------

SPLIT = dict(big_n=100.0, delta=1.0, t0_red=0.01, t_final=5.0)


def _split_setup():
    s = AiScenario.from_reduced(SPLIT["big_n"], SPLIT["delta"], SPLIT["t0_red"])
    q = np.linspace(-4.0, 4.0, 1024, endpoint=False)
    return s, q


def test_splitstep_matches_analytic_state():
    s, q = _split_setup()
    psi = splitstep_evolve(s, q, SPLIT["t_final"], 0.004)
    ref = wavefunction(s, SPLIT["t_final"], 0, q)
    ov = fidelity(ref, psi, q)
    assert abs(ov) ** 2 >= 1 - 1e-6
    # the quantal phase is validated, not just the modulus
    assert abs(ov - 1.0) < 1e-3


def test_splitstep_second_order_convergence():
    s, q = _split_setup()
    ref = wavefunction(s, SPLIT["t_final"], 0, q)
    errs = []
    for dt in (0.004, 0.002, 0.001):
        psi = splitstep_evolve(s, q, SPLIT["t_final"], dt)
        errs.append(math.sqrt(np.trapezoid(np.abs(psi - ref) ** 2, q)))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(np.abs(ratios - 4.0) < 0.3)


def test_splitstep_guards():
    s, q = _split_setup()
    with pytest.raises(ValueError):
        splitstep_evolve(s, q, 5.0, 0.01)
    with pytest.raises(ValueError):
        splitstep_evolve(s, q[::-1], 1.0, 0.001)
    narrow = np.linspace(-0.2, 0.2, 256, endpoint=False)
    with pytest.raises(AliasingError):
        splitstep_evolve(s, narrow, 0.5, 0.001)


def test_splitstep_zero_duration_returns_initial_state():
    s, q = _split_setup()
    psi = splitstep_evolve(s, q, s.ramp.t0, 0.001)
    assert np.allclose(psi, initial_state(s, q))


# --- rotation angle -------------------------------------------------------

def test_rotation_rate_matches_finite_difference(impulse_scenario):
    s = impulse_scenario
    t = np.linspace(1.2, 4.0, 30)
    h = 1e-6
    fd = (unwrap_angles(rotation_angle(s, t + h)) - unwrap_angles(rotation_angle(s, t - h))) / (2 * h)
    # skip samples straddling a branch jump
    ok = np.abs(rotation_angle(s, t + h) - rotation_angle(s, t - h)) < 1.0
    assert np.allclose(rotation_rate(s, t)[ok], fd[ok], rtol=1e-5, atol=1e-6)


def test_unwrap_removes_branch_jumps():
    theta = np.array([1.5, 1.56, -1.56, -1.5])
    assert np.allclose(unwrap_angles(theta), [1.5, 1.56, np.pi - 1.56, np.pi - 1.5])


@pytest.mark.parametrize("big_n", [1e2, 1e3])
def test_max_rotation_rate_is_global(big_n):
    s = AiScenario.from_reduced(big_n, 1.0, 1e-3)
    rate, where = max_rotation_rate(s, s.ramp.t0, 6.0)
    dense = np.abs(rotation_rate(s, np.linspace(s.ramp.t0, 6.0, 20001)))
    assert rate >= dense.max() * (1 - 1e-9)
    assert abs(float(rotation_rate(s, where))) == pytest.approx(rate, rel=1e-9)


def test_moment_minima_refines_grid_minima(impulse_scenario):
    s = impulse_scenario
    t = np.linspace(s.ramp.t0, 6.0, 600)
    coarse = moment_minima(s, t, "q", refine=False)
    fine = moment_minima(s, t, "q")
    assert coarse.size == fine.size > 0
    assert np.all(np.abs(coarse - fine) <= t[1] - t[0])
    with pytest.raises(ValueError):
        moment_minima(s, t, "x")


# --- Wigner grids --------------------------------------------------------

@pytest.mark.parametrize("t", [0.01, 1.0, 3.3])
def test_wigner_marginals_match_densities(impulse_scenario, t):
    s = impulse_scenario
    g = wigner(s, t, GridSpec(512, 10.0))
    root_n = math.sqrt(s.big_n)
    # rescaled coordinates: q = sqrt(N) Q, p = Pi / sqrt(N), unit Jacobian
    big_q = g.q_axis / root_n
    psi = wavefunction(s, t, 0, big_q, norm_tol=1e-3)
    assert np.max(np.abs(g.q_marginal() - np.abs(psi) ** 2 / root_n)) <= 1e-6
    dens_p = momentum_density(s, t, g.p_axis * root_n) * root_n
    assert np.max(np.abs(g.p_marginal() - dens_p)) <= 1e-6


def test_wigner_covariance_matches_moments(impulse_scenario):
    s, t = impulse_scenario, 2.2
    g = wigner(s, t, GridSpec(512, 10.0))
    cov = g.covariance()
    q2, p2 = moments(s, t)
    assert cov[0, 0] == pytest.approx(float(q2) * s.big_n, rel=1e-8)
    assert cov[1, 1] == pytest.approx(float(p2) / s.big_n, rel=1e-8)
    # pure Gaussian state: the covariance determinant saturates the bound
    assert np.linalg.det(cov) == pytest.approx(0.25, rel=1e-8)


def test_ridge_angle_is_arctan_im_omega(impulse_scenario):
    s = impulse_scenario
    for t in (0.5, 1.4, 2.8, 4.9):
        g = wigner(s, t, GridSpec(256, 8.0))
        assert ridge_angle(g) == pytest.approx(float(rotation_angle(s, t)), abs=1e-9)


def test_wigner_window_guard(impulse_scenario):
    with pytest.raises(GridTooNarrowError):
        wigner(impulse_scenario, 1.0, GridSpec(128, 4.0))


def test_wigner_grid_depends_on_n_only_through_reduced_width():
    a = AiScenario.from_reduced(1e2, 1.0, 0.01)
    b = AiScenario.from_reduced(1e4, 1.0, 0.01)
    ga, gb = wigner(a, 0.01, GridSpec(64, 8.0)), wigner(b, 0.01, GridSpec(64, 8.0))
    assert np.allclose(ga.values, gb.values, rtol=1e-12)


def test_principal_axes_of_initial_state():
    s = AiScenario.from_reduced(1e2, 1.0, 1.0)
    g = wigner(s, s.ramp.t0, GridSpec(256, 8.0))
    minor, major, _ = principal_variances(g)
    # omega0 = 1: the initial state is a circle of variance 1/2 in rescaled units
    assert minor == pytest.approx(0.5, rel=1e-8) and major == pytest.approx(0.5, rel=1e-8)
    w = width_param(s, s.ramp.t0)
    assert complex(w.omega) == pytest.approx(s.big_n * s.omega0)

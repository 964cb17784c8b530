"""Strang split-step Fourier integrator for the ramped oscillator.

Independent of the envelope solution: the initial static Gaussian is
propagated with alternating half potential steps (field taken at the step
midpoint) and full kinetic steps in the discrete-Fourier momentum basis.
"""
from __future__ import annotations

import math

import numpy as np

from ..ai_dynamics import AiScenario
from ..errors import AliasingError

ALIAS_TOL = 1e-8


def initial_state(scenario: AiScenario, q_axis) -> np.ndarray:
    """Ground state of the static oscillator with field B0 (mass N)."""
    q = np.asarray(q_axis, dtype=float)
    width = scenario.big_n * scenario.omega0
    return (width / math.pi) ** 0.25 * np.exp(-0.5 * width * q**2)


def _check_uniform(q: np.ndarray) -> float:
    h = np.diff(q)
    if q.ndim != 1 or q.size < 4 or h[0] <= 0 or not np.allclose(h, h[0], rtol=1e-9, atol=0.0):
        raise ValueError("q_axis must be a uniform, increasing 1-D grid")
    return float(h[0])


def _check_boundary(psi: np.ndarray) -> None:
    peak = np.max(np.abs(psi))
    edge = max(np.max(np.abs(psi[:8])), np.max(np.abs(psi[-8:])))
    if edge > ALIAS_TOL * peak:
        raise AliasingError(f"boundary amplitude {edge / peak:.2e} of peak exceeds {ALIAS_TOL:g}")


def splitstep_evolve(
    scenario: AiScenario, q_axis, t_final: float, dt: float, psi0=None, check_step: bool = True
) -> np.ndarray:
    """Propagate from t0 to ``t_final``; the last step is shortened to land exactly.

    Raises :class:`AliasingError` if the state reaches the grid edge.
    """
    q = np.asarray(q_axis, dtype=float)
    h = _check_uniform(q)
    t0 = scenario.ramp.t0
    if t_final < t0:
        raise ValueError("t_final precedes t0")
    if check_step and dt > 0.01 / math.sqrt(scenario.ramp.delta * t_final) * (1 + 1e-12):
        raise ValueError("dt does not resolve the instantaneous period (need dt <= 0.01/sqrt(delta t_final))")
    psi = initial_state(scenario, q) if psi0 is None else np.array(psi0, dtype=complex)
    psi = psi.astype(complex)
    n_mass = scenario.big_n
    delta = scenario.ramp.delta
    k = 2.0 * math.pi * np.fft.fftfreq(q.size, d=h)
    kinetic = k**2 / (2.0 * n_mass)
    q2 = 0.5 * n_mass * q**2

    n_steps = int(math.ceil((t_final - t0) / dt - 1e-9)) if t_final > t0 else 0
    for i in range(n_steps):
        ta = t0 + i * dt
        tb = min(t0 + (i + 1) * dt, t_final)
        step = tb - ta
        half_pot = np.exp(-0.5j * step * delta * 0.5 * (ta + tb) * q2)
        psi = half_pot * psi
        psi = np.fft.ifft(np.exp(-1j * step * kinetic) * np.fft.fft(psi))
        psi = half_pot * psi
    _check_boundary(psi)
    return psi


def fidelity(a, b, q_axis) -> complex:
    """<a|b> by trapezoidal quadrature."""
    return complex(np.trapezoid(np.conj(a) * b, np.asarray(q_axis, dtype=float)))

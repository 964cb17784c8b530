"""Classical envelope f(t) solving f'' + delta t f = 0.

The complex solution starts from ``f(t0) = 1, f'(t0) = i omega0`` with
``omega0 = sqrt(delta t0)``; its Wronskian ``Im(conj(f) f')`` stays equal to
omega0, so f never vanishes. Two independent routes are provided: the
closed form in Airy functions of ``s = -delta^(1/3) t`` and an adaptive
Runge-Kutta integration of the ODE.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import airy

from ..ai_dynamics import AiScenario
from ..errors import NumericalToleranceError

log = logging.getLogger(__name__)

# Beyond this |s| the Airy route hands over to the ODE route.
AIRY_MAX_ABS_ARG = 2000.0
ODE_RTOL = 1e-12


class EnvelopeMethod(str, enum.Enum):
    AIRY = "Airy"
    ODE = "OdeIntegration"


@dataclass(frozen=True)
class Envelope:
    t: np.ndarray
    f: np.ndarray
    f_dot: np.ndarray

    @property
    def wronskian(self) -> np.ndarray:
        return np.imag(np.conj(self.f) * self.f_dot)


def _times(scenario: AiScenario, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < scenario.ramp.t0 * (1.0 - 1e-14)):
        raise ValueError("envelope requested before the ramp start t0")
    return t


def airy_coefficients(scenario: AiScenario) -> tuple[complex, complex]:
    """(alpha, beta) with f = alpha Ai(s) + beta Bi(s) matching the initial data."""
    c = scenario.ramp.delta ** (1.0 / 3.0)
    ai, aip, bi, bip = airy(-c * scenario.ramp.t0)
    iw = 1j * scenario.omega0 / c
    # inverse of [[Ai, Bi], [-c Ai', -c Bi']] via Ai Bi' - Ai' Bi = 1/pi
    alpha = np.pi * (bip + iw * bi)
    beta = -np.pi * (aip + iw * ai)
    return complex(alpha), complex(beta)


def _airy_envelope(scenario: AiScenario, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = scenario.ramp.delta ** (1.0 / 3.0)
    alpha, beta = airy_coefficients(scenario)
    ai, aip, bi, bip = airy(-c * t)
    return alpha * ai + beta * bi, -c * (alpha * aip + beta * bip)


def _rhs(delta):
    def rhs(t, y):
        return np.array([y[1], -delta * t * y[0]])
    return rhs


def _ode_envelope(scenario: AiScenario, t: np.ndarray, rtol: float = ODE_RTOL):
    flat = t.ravel()
    f = np.empty(flat.shape, dtype=complex)
    fd = np.empty(flat.shape, dtype=complex)
    t0, w0 = scenario.ramp.t0, scenario.omega0
    at_start = flat <= t0
    f[at_start], fd[at_start] = 1.0, 1j * w0
    later = np.unique(flat[~at_start])
    if later.size:
        sol = solve_ivp(
            _rhs(scenario.ramp.delta),
            (t0, later[-1]),
            np.array([1.0 + 0j, 1j * w0]),
            method="DOP853",
            t_eval=later,
            rtol=rtol,
            atol=rtol * 1e-3 * min(1.0, w0),
        )
        if not sol.success:
            raise NumericalToleranceError(f"envelope integration failed: {sol.message}")
        idx = np.searchsorted(later, flat[~at_start])
        f[~at_start] = sol.y[0][idx]
        fd[~at_start] = sol.y[1][idx]
    return f.reshape(t.shape), fd.reshape(t.shape)


def classical_envelope(
    scenario: AiScenario, t, method: EnvelopeMethod | str = EnvelopeMethod.AIRY
) -> Envelope:
    """Evaluate the envelope at scalar or array ``t >= t0``."""
    method = EnvelopeMethod(method)
    t = _times(scenario, t)
    if method is EnvelopeMethod.ODE:
        f, fd = _ode_envelope(scenario, t)
        return Envelope(t, f, fd)

    f, fd = _airy_envelope(scenario, t)
    s_abs = scenario.ramp.delta ** (1.0 / 3.0) * np.maximum(t, scenario.ramp.t0)
    far = s_abs > AIRY_MAX_ABS_ARG
    if np.any(far):
        f_ode, fd_ode = _ode_envelope(scenario, t[far])
        scale = np.abs(f_ode) + np.abs(fd_ode)
        gap = np.max(np.abs(f[far] - f_ode) / scale)
        log.warning(
            "Airy argument beyond %.0f at %d points; using ODE values (max method gap %.2e)",
            AIRY_MAX_ABS_ARG, int(np.count_nonzero(far)), gap,
        )
        f = np.array(f, dtype=complex)
        fd = np.array(fd, dtype=complex)
        f[far], fd[far] = f_ode, fd_ode
    # exact initial data at t0 (the Airy route reproduces it only to roundoff)
    start = t == scenario.ramp.t0
    if np.any(start):
        f = np.where(start, 1.0 + 0j, f)
        fd = np.where(start, 1j * scenario.omega0, fd)
    return Envelope(t, f, fd)


def method_gap(scenario: AiScenario, t) -> float:
    """Largest relative difference between the Airy and ODE routes on ``t``."""
    a = classical_envelope(scenario, t, EnvelopeMethod.AIRY)
    b = classical_envelope(scenario, t, EnvelopeMethod.ODE)
    rel_f = np.abs(a.f - b.f) / np.abs(a.f)
    rel_fd = np.abs(a.f_dot - b.f_dot) / np.maximum(np.abs(a.f_dot), scenario.omega0)
    return float(max(np.max(rel_f), np.max(rel_fd)))


def riccati_ratio(envelope: Envelope) -> np.ndarray:
    """z = f'/f, which obeys z' = -delta t - z^2."""
    return envelope.f_dot / envelope.f


def max_period_step(scenario: AiScenario, t_end: float, per_period: int = 16) -> float:
    """Time step resolving both the impulse stage and the late oscillation."""
    w_max = math.sqrt(scenario.ramp.delta * max(t_end, scenario.ramp.t0))
    return min(0.05 * scenario.t_hat, 2.0 * math.pi / w_max / per_period)

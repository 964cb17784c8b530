"""Exact Gaussian dynamics of H(t) = Pi^2/(2N) + N delta t Q^2 / 2.

Every quantity follows from the envelope: the complex width
``omega = -i N f'/f`` and the quantal phase ``phi = arg f`` (continuous,
zero at t0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..ai_dynamics import AiScenario
from ..errors import GridTooNarrowError
from .envelope import classical_envelope, max_period_step, riccati_ratio


@dataclass(frozen=True)
class ComplexWidth:
    t: np.ndarray
    omega: np.ndarray
    phase: np.ndarray


def quantal_phase(scenario: AiScenario, t) -> np.ndarray:
    """Continuous arg f(t) with phase(t0) = 0.

    arg f increases monotonically (its rate is omega0/|f|^2), so the
    increments between samples of a fine auxiliary grid are unwrapped into
    ``(-pi/2, 3pi/2]``.
    """
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    if flat.size == 0:
        return np.zeros(t.shape)
    t0 = scenario.ramp.t0
    t_end = float(np.max(flat))
    if t_end <= t0:
        return np.zeros(t.shape)
    step = max_period_step(scenario, t_end)
    n_fine = int(math.ceil((t_end - t0) / step)) + 1
    fine = np.union1d(np.linspace(t0, t_end, n_fine), flat)
    ang = np.angle(classical_envelope(scenario, fine).f)
    inc = np.mod(np.diff(ang) + 0.5 * np.pi, 2.0 * np.pi) - 0.5 * np.pi
    phase = np.concatenate([[0.0], np.cumsum(inc)])
    return phase[np.searchsorted(fine, flat)].reshape(t.shape)


def width_param(scenario: AiScenario, t, with_phase: bool = True) -> ComplexWidth:
    env = classical_envelope(scenario, t)
    omega = -1j * scenario.big_n * riccati_ratio(env)
    phase = quantal_phase(scenario, t) if with_phase else np.full(np.shape(env.t), np.nan)
    return ComplexWidth(t=env.t, omega=omega, phase=phase)


def moments(scenario: AiScenario, t) -> tuple[np.ndarray, np.ndarray]:
    """(Delta Q^2, Delta Pi^2) of the evolved Gaussian."""
    omega = width_param(scenario, t, with_phase=False).omega
    re = omega.real
    return 1.0 / (2.0 * re), np.abs(omega) ** 2 / (2.0 * re)


def uncertainty_excess(scenario: AiScenario, t) -> np.ndarray:
    """Delta Q^2 Delta Pi^2 - 1/4, evaluated without cancellation."""
    omega = width_param(scenario, t, with_phase=False).omega
    return 0.25 * (omega.imag / omega.real) ** 2


def _hermite_functions(n: int, x: np.ndarray) -> np.ndarray:
    """pi^(-1/4) (2^n n!)^(-1/2) H_n(x) by the normalised three-term recurrence."""
    prev = np.zeros_like(x)
    cur = np.full_like(x, np.pi**-0.25)
    for k in range(n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
    return cur


def wavefunction(scenario: AiScenario, t: float, n: int, q_axis, norm_tol: float = 1e-6) -> np.ndarray:
    """Psi_n(Q, t) on a physical-coordinate grid, unit norm."""
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    q = np.asarray(q_axis, dtype=float)
    w = width_param(scenario, float(t))
    omega, phi = complex(w.omega), float(w.phase)
    re = omega.real
    psi = (
        re**0.25
        * _hermite_functions(int(n), math.sqrt(re) * q)
        * np.exp(-0.5 * omega * q**2)
        * np.exp(-1j * (n + 0.5) * phi)
    )
    norm = np.trapezoid(np.abs(psi) ** 2, q)
    if abs(norm - 1.0) > norm_tol:
        raise GridTooNarrowError(f"grid holds norm {norm:.9f} of the state (tolerance {norm_tol:g})")
    return psi


def momentum_density(scenario: AiScenario, t: float, pi_axis) -> np.ndarray:
    """|Psi_0(Pi, t)|^2 in closed form: Gaussian with variance |omega|^2 / (2 Re omega)."""
    omega = complex(width_param(scenario, float(t), with_phase=False).omega)
    var = abs(omega) ** 2 / (2.0 * omega.real)
    p = np.asarray(pi_axis, dtype=float)
    return np.exp(-(p**2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def rotation_angle(scenario: AiScenario, t) -> np.ndarray:
    """Principal value of arctan(Im Omega) with the N-carrying Omega."""
    return np.arctan(width_param(scenario, t, with_phase=False).omega.imag)


def unwrap_angles(theta) -> np.ndarray:
    """Continuity unwrapping of a line angle: jumps beyond pi/2 are branch jumps of size pi."""
    return np.unwrap(np.asarray(theta, dtype=float), period=np.pi)


def rotation_rate(scenario: AiScenario, t) -> np.ndarray:
    """d theta/dt from the Riccati equation z' = -delta t - z^2 (z = f'/f).

    With Omega = -i N z, Im Omega = -N Re z and d(Im Omega)/dt = N (delta t + Re z^2).
    """
    env = classical_envelope(scenario, t)
    z = riccati_ratio(env)
    n = scenario.big_n
    im = -n * z.real
    d_im = n * (scenario.ramp.delta * env.t + (z * z).real)
    return d_im / (1.0 + im**2)


def max_rotation_rate(scenario: AiScenario, t_start: float, t_end: float, n_coarse: int = 4000):
    """Largest |d theta/dt| on [t_start, t_end] and where it occurs.

    The fastest swings sit next to zeros of Im Omega, which can be far
    narrower than any practical uniform grid, so every sign change is
    bracketed on a coarse grid, located by root finding and then maximised
    locally.
    """
    t0 = max(t_start, scenario.ramp.t0)
    n_coarse = max(n_coarse, int(math.ceil((t_end - t0) / max_period_step(scenario, t_end))) + 1)
    grid = np.linspace(t0, t_end, n_coarse)

    def im_omega(x):
        return float(np.imag(width_param(scenario, x, with_phase=False).omega))

    def neg_rate(x):
        return -abs(float(rotation_rate(scenario, x)))

    rates = np.abs(rotation_rate(scenario, grid))
    best_rate, best_t = float(np.max(rates)), float(grid[np.argmax(rates)])
    im = -scenario.big_n * riccati_ratio(classical_envelope(scenario, grid)).real
    for i in np.nonzero(np.sign(im[:-1]) * np.sign(im[1:]) < 0)[0]:
        tz = brentq(im_omega, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
        peak = abs(float(rotation_rate(scenario, tz)))
        width = 1.0 / max(peak, 1e-300)
        lo, hi = max(t0, tz - 20 * width), min(t_end, tz + 20 * width)
        if hi > lo:
            res = minimize_scalar(neg_rate, bounds=(lo, hi), method="bounded",
                                  options={"xatol": width * 1e-4})
            if -res.fun > peak:
                peak, tz = -res.fun, float(res.x)
        if peak > best_rate:
            best_rate, best_t = peak, tz
    return best_rate, best_t


def moment_minima(scenario: AiScenario, t_grid, which: str = "q", refine: bool = True) -> np.ndarray:
    """Interior local minima of Delta Q^2 (``which="q"``) or Delta Pi^2 (``"p"``).

    Minima are bracketed on ``t_grid`` and, if ``refine``, polished by a
    bounded scalar minimisation inside the bracketing pair of intervals.
    """
    if which not in ("q", "p"):
        raise ValueError("which must be 'q' or 'p'")
    idx = 0 if which == "q" else 1
    t = np.asarray(t_grid, dtype=float)
    vals = moments(scenario, t)[idx]
    inner = np.nonzero((vals[1:-1] < vals[:-2]) & (vals[1:-1] <= vals[2:]))[0] + 1
    if not refine:
        return t[inner]
    out = []
    for i in inner:
        res = minimize_scalar(
            lambda x: float(moments(scenario, x)[idx]),
            bounds=(t[i - 1], t[i + 1]),
            method="bounded",
            options={"xatol": 1e-10 * max(1.0, abs(t[i]))},
        )
        out.append(float(res.x))
    return np.array(out)

"""Adiabatic-impulse (AI) description of the ramped collective oscillator.

The state is frozen from t0 until the freeze-out time t_hat and follows the
instantaneous eigenbasis afterwards, each level n picking up the dynamical
phase ``(n + 1/2) * Phi(t)`` with ``Phi(t) = (2/3) [(t/t_hat)^(3/2) - 1]``.
The interference between the even levels populated at t_hat gives closed
forms for the position and momentum fluctuations.

Public functions take absolute times; they are reduced by t_hat internally.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .kibble_zurek import RampSpec, freeze_out_time


@dataclass(frozen=True)
class AiScenario:
    """Particle number plus ramp. Also the scenario type for the exact solver."""

    big_n: float
    ramp: RampSpec

    def __post_init__(self):
        if not (self.big_n > 0 and math.isfinite(self.big_n)):
            raise ValueError(f"big_n must be positive, got {self.big_n!r}")

    @classmethod
    def from_reduced(cls, big_n: float, delta: float, t0_over_that: float) -> "AiScenario":
        """Scenario with the initial time given in units of t_hat."""
        return cls(big_n, RampSpec.from_t0(delta, t0_over_that * freeze_out_time(delta)))

    @cached_property
    def t_hat(self) -> float:
        return freeze_out_time(self.ramp.delta)

    @property
    def omega0(self) -> float:
        """Frequency of the initial static oscillator, sqrt(B0)."""
        return math.sqrt(self.ramp.b0)

    @property
    def t0_reduced(self) -> float:
        return self.ramp.t0 / self.t_hat


@dataclass(frozen=True)
class PhaseValue:
    t: float
    n: int
    value: float


class PuncturedKind(str, enum.Enum):
    LOCALIZATION = "Localization"
    REVIVAL = "Revival"


def _reduced_after_freeze_out(scenario: AiScenario, t) -> np.ndarray:
    s = np.asarray(t, dtype=float) / scenario.t_hat
    # relative slack so that t = t_hat computed in floating point is accepted
    if np.any(s < 1.0 - 1e-12):
        raise ValueError("AI phases and fluctuations are defined only for t >= t_hat")
    return np.maximum(s, 1.0)


def _require_ai_domain(scenario: AiScenario) -> None:
    if scenario.t0_reduced > 1.0 + 1e-12:
        raise ValueError("AI closed forms require t0 <= t_hat")


def interference_phase(scenario: AiScenario, t):
    """The level-independent phase Phi(t) entering sin^2 in the fluctuation formulas."""
    s = _reduced_after_freeze_out(scenario, t)
    return (2.0 / 3.0) * (s**1.5 - 1.0)


def dyn_phase(scenario: AiScenario, t: float, n: int) -> PhaseValue:
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    value = float(interference_phase(scenario, t)) * (n + 0.5)
    return PhaseValue(t=float(t), n=int(n), value=value)


def overlap_coefficients(omega_init: float, omega_frozen: float, n_max: int) -> np.ndarray:
    """Expansion of an oscillator ground state in the eigenbasis of another frequency.

    Returns ``c_0 ... c_{n_max}`` for ``<n; omega_frozen | 0; omega_init>``
    at equal mass. Odd coefficients vanish by parity; even ones follow the
    squeezed-vacuum series with ``tanh r = (w_i - w_f)/(w_i + w_f)``.
    """
    if not (omega_init > 0 and omega_frozen > 0):
        raise ValueError("frequencies must be positive")
    if n_max < 0 or int(n_max) != n_max:
        raise ValueError(f"n_max must be a nonnegative integer, got {n_max!r}")
    tanh_r = (omega_init - omega_frozen) / (omega_init + omega_frozen)
    c = np.zeros(int(n_max) + 1)
    c[0] = math.sqrt(2.0 * math.sqrt(omega_init * omega_frozen) / (omega_init + omega_frozen))
    for m in range(1, int(n_max) // 2 + 1):
        # c_{2m} / c_{2m-2} = -tanh r * sqrt((2m-1)(2m)) / (2m)
        c[2 * m] = c[2 * m - 2] * (-tanh_r) * math.sqrt((2 * m - 1) * (2 * m)) / (2 * m)
    return c


def inv_dq2(scenario: AiScenario, t):
    """Order parameter [Delta Q^2]^(-1) after freeze-out."""
    _require_ai_domain(scenario)
    s = _reduced_after_freeze_out(scenario, t)
    s0 = scenario.t0_reduced
    sin2 = np.sin(interference_phase(scenario, t)) ** 2
    out = 2.0 * scenario.big_n / scenario.t_hat * np.sqrt(s * s0) / (1.0 - (1.0 - s0) * sin2)
    return out if np.ndim(out) else float(out)


def inv_dpi2(scenario: AiScenario, t):
    """Inverse total-momentum fluctuation [Delta Pi^2]^(-1) after freeze-out."""
    _require_ai_domain(scenario)
    s = _reduced_after_freeze_out(scenario, t)
    s0 = scenario.t0_reduced
    sin2 = np.sin(interference_phase(scenario, t)) ** 2
    out = (
        2.0 * scenario.t_hat / scenario.big_n / np.sqrt(s * s0)
        / (1.0 - (1.0 - 1.0 / s0) * sin2)
    )
    return out if np.ndim(out) else float(out)


def uncertainty_product(scenario: AiScenario, t):
    return 1.0 / (inv_dq2(scenario, t) * inv_dpi2(scenario, t))


def punctured_times(kind: PuncturedKind | str, kappa_max: int, t_hat: float) -> np.ndarray:
    """Instants of full localisation (sin^2 Phi = 1) or symmetric revival (sin Phi = 0)."""
    kind = PuncturedKind(kind)
    if kappa_max < 0 or int(kappa_max) != kappa_max:
        raise ValueError(f"kappa_max must be a nonnegative integer, got {kappa_max!r}")
    if not t_hat > 0:
        raise ValueError("t_hat must be positive")
    kappa = np.arange(int(kappa_max) + 1)
    offset = 0.75 * np.pi if kind is PuncturedKind.LOCALIZATION else 0.0
    return (1.5 * kappa * np.pi + offset + 1.0) ** (2.0 / 3.0) * t_hat


def punctured_times_until(kind: PuncturedKind | str, t_end: float, t_hat: float) -> np.ndarray:
    """All punctured times of one kind in ``[t_hat, t_end]``."""
    kind = PuncturedKind(kind)
    if t_end < t_hat:
        return np.empty(0)
    offset = 0.75 * np.pi if kind is PuncturedKind.LOCALIZATION else 0.0
    kappa_max = math.floor(((t_end / t_hat) ** 1.5 - 1.0 - offset) / (1.5 * np.pi))
    if kappa_max < 0:
        return np.empty(0)
    times = punctured_times(kind, kappa_max, t_hat)
    return times[times <= t_end]


def ai_moments(scenario: AiScenario, t) -> tuple[np.ndarray, np.ndarray]:
    """(Delta Q^2, Delta Pi^2) predicted by the AI scheme for any t >= t0.

    Before t_hat the state is the frozen initial Gaussian. If t0 >= t_hat the
    whole ramp is adiabatic and the state is the instantaneous ground state.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < scenario.ramp.t0 * (1.0 - 1e-12)):
        raise ValueError("times must not precede t0")
    n = scenario.big_n
    if scenario.t0_reduced >= 1.0:
        w = np.sqrt(scenario.ramp.delta * t)
        return 1.0 / (2.0 * n * w), n * w / 2.0
    dq2 = np.full_like(t, 1.0 / (2.0 * n * scenario.omega0))
    dpi2 = np.full_like(t, n * scenario.omega0 / 2.0)
    late = t >= scenario.t_hat
    if np.any(late):
        dq2[late] = 1.0 / np.atleast_1d(inv_dq2(scenario, t[late]))
        dpi2[late] = 1.0 / np.atleast_1d(inv_dpi2(scenario, t[late]))
    return dq2, dpi2

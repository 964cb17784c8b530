"""Timescale matching for a linear ramp B(t) = delta * t."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# Relative half-width of the FreezeOut band around t_hat.
FREEZE_OUT_TOL = 1e-9


class Regime(str, enum.Enum):
    ADIABATIC = "Adiabatic"
    IMPULSE = "Impulse"
    FREEZE_OUT = "FreezeOut"


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class RampSpec:
    """Linear pinning ramp. Build with :meth:`from_t0` or :meth:`from_b0`."""

    delta: float
    t0: float
    b0: float

    def __post_init__(self):
        _positive("delta", self.delta)
        _positive("t0", self.t0)
        if not math.isclose(self.b0, self.delta * self.t0, rel_tol=1e-12):
            raise ValueError("b0 must equal delta * t0")

    @classmethod
    def from_t0(cls, delta: float, t0: float) -> "RampSpec":
        delta, t0 = _positive("delta", delta), _positive("t0", t0)
        return cls(delta=delta, t0=t0, b0=delta * t0)

    @classmethod
    def from_b0(cls, delta: float, b0: float) -> "RampSpec":
        delta, b0 = _positive("delta", delta), _positive("b0", b0)
        return cls(delta=delta, t0=b0 / delta, b0=b0)

    @property
    def t_hat(self) -> float:
        return freeze_out_time(self.delta)


def relaxation_time(delta: float, t: float) -> float:
    """tau = (delta t)^(-1/2)."""
    return (_positive("delta", delta) * _positive("t", t)) ** -0.5


def freeze_out_time(delta: float) -> float:
    """Fixed point of tau(t) = t, i.e. delta^(-1/3)."""
    return _positive("delta", delta) ** (-1.0 / 3.0)


def classify_regime(ramp: RampSpec, t: float, tol: float = FREEZE_OUT_TOL) -> Regime:
    if t < ramp.t0:
        raise ValueError(f"t={t!r} precedes the ramp start t0={ramp.t0!r}")
    t_hat = freeze_out_time(ramp.delta)
    if t < t_hat * (1.0 - tol):
        return Regime.IMPULSE
    if t > t_hat * (1.0 + tol):
        return Regime.ADIABATIC
    return Regime.FREEZE_OUT


def adiabaticity_bound(b0: float) -> float:
    """Largest ramp rate for which the whole ramp from b0 is quasi-adiabatic."""
    return _positive("b0", b0) ** 1.5

"""Wigner function of the evolved Gaussian on rescaled phase-space grids.

Grids use ``q = sqrt(N) Q`` and ``p = Pi / sqrt(N)``. The map has unit
Jacobian, so W keeps its normalisation, and the stored array depends on N
only through the reduced width ``Omega / N``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..ai_dynamics import AiScenario
from ..errors import GridTooNarrowError
from .states import width_param

MIN_WINDOW_SIGMAS = 6.0


@dataclass(frozen=True)
class GridSpec:
    n_points: int = 512
    window_sigmas: float = 8.0

    def __post_init__(self):
        if self.n_points < 8:
            raise ValueError("n_points must be at least 8")
        if self.window_sigmas <= 0:
            raise ValueError("window_sigmas must be positive")


@dataclass
class WignerGrid:
    """W sampled on ``q_axis x p_axis`` (``values[i, j] = W(q_i, p_j)``)."""

    q_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    t: float
    n_atoms: float
    meta: dict = field(default_factory=dict)

    @property
    def dq(self) -> float:
        return float(self.q_axis[1] - self.q_axis[0])

    @property
    def dp(self) -> float:
        return float(self.p_axis[1] - self.p_axis[0])

    def mass(self) -> float:
        return float(np.trapezoid(np.trapezoid(self.values, self.p_axis, axis=1), self.q_axis))

    def q_marginal(self) -> np.ndarray:
        """Integral over p: the position density in rescaled units."""
        return np.trapezoid(self.values, self.p_axis, axis=1)

    def p_marginal(self) -> np.ndarray:
        return np.trapezoid(self.values, self.q_axis, axis=0)

    def covariance(self) -> np.ndarray:
        """Second central moments [[qq, qp], [qp, pp]] by grid quadrature."""
        q, p = np.meshgrid(self.q_axis, self.p_axis, indexing="ij")
        w = self.values

        def integ(a):
            return float(np.trapezoid(np.trapezoid(a, self.p_axis, axis=1), self.q_axis))

        mass = integ(w)
        mq, mp = integ(q * w) / mass, integ(p * w) / mass
        qq = integ((q - mq) ** 2 * w) / mass
        pp = integ((p - mp) ** 2 * w) / mass
        qp = integ((q - mq) * (p - mp) * w) / mass
        return np.array([[qq, qp], [qp, pp]])


def reduced_gaussian(omega: complex, n_atoms: float, q, p) -> np.ndarray:
    """(1/pi) exp(-Re w q^2) exp(-(p + Im w q)^2 / Re w) for w = Omega / N."""
    w = complex(omega) / n_atoms
    q = np.asarray(q)[:, None]
    p = np.asarray(p)[None, :]
    return np.exp(-w.real * q**2 - (p + w.imag * q) ** 2 / w.real) / math.pi


def rescaled_variances(omega: complex, n_atoms: float) -> tuple[float, float, float]:
    """(var q, var p, cov qp) of the rescaled Gaussian."""
    w = complex(omega) / n_atoms
    return 1.0 / (2.0 * w.real), abs(w) ** 2 / (2.0 * w.real), -w.imag / (2.0 * w.real)


def wigner_on_axes(scenario: AiScenario, t: float, q_axis, p_axis, check: bool = True) -> WignerGrid:
    omega = complex(width_param(scenario, float(t), with_phase=False).omega)
    q_axis = np.asarray(q_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    grid = WignerGrid(
        q_axis=q_axis,
        p_axis=p_axis,
        values=reduced_gaussian(omega, scenario.big_n, q_axis, p_axis),
        t=float(t),
        n_atoms=scenario.big_n,
        meta={"omega_reduced": [omega.real / scenario.big_n, omega.imag / scenario.big_n]},
    )
    if check:
        mass = grid.mass()
        if abs(mass - 1.0) > 1e-3:
            raise GridTooNarrowError(f"Wigner grid holds mass {mass:.6f}")
    return grid


def wigner(scenario: AiScenario, t: float, spec: GridSpec = GridSpec()) -> WignerGrid:
    """W(Q, Pi, t) on a window of ``spec.window_sigmas`` standard deviations per axis."""
    if spec.window_sigmas < MIN_WINDOW_SIGMAS:
        raise GridTooNarrowError(
            f"window of {spec.window_sigmas} sigma is below the {MIN_WINDOW_SIGMAS} sigma minimum"
        )
    omega = complex(width_param(scenario, float(t), with_phase=False).omega)
    var_q, var_p, _ = rescaled_variances(omega, scenario.big_n)
    q_half = spec.window_sigmas * math.sqrt(var_q)
    p_half = spec.window_sigmas * math.sqrt(var_p)
    q_axis = np.linspace(-q_half, q_half, spec.n_points)
    p_axis = np.linspace(-p_half, p_half, spec.n_points)
    grid = wigner_on_axes(scenario, t, q_axis, p_axis)
    grid.meta["window_sigmas"] = spec.window_sigmas
    return grid


def principal_variances(grid: WignerGrid) -> tuple[float, float, float]:
    """(minor, major, major-axis angle) of the grid covariance, rescaled units."""
    evals, evecs = np.linalg.eigh(grid.covariance())
    major = evecs[:, 1]
    return float(evals[0]), float(evals[1]), float(math.atan2(major[1], major[0]))


def ridge_angle(grid: WignerGrid, physical: bool = True) -> float:
    """Angle of the crest line of W.

    For fixed Q the maximum of W over Pi lies on ``Pi = -Im(Omega) Q``, and
    the conditional-mean slope ``cov(Q, Pi) / var(Q)`` recovers that slope
    from the grid. The rescaled slope carries a factor 1/N; ``physical=False``
    returns the angle as drawn on the rescaled grid instead.
    """
    cov = grid.covariance()
    slope = cov[0, 1] / cov[0, 0]
    if physical:
        slope *= grid.n_atoms
    return float(math.atan(-slope))

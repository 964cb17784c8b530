"""Simulated homodyne-style tomography of a Wigner grid.

Quadratures are ``X_theta = q cos(theta) + p sin(theta)`` in the rescaled
phase-space units of :class:`~symbreak.exact.wigner.WignerGrid`.
Marginals are Radon projections of the grid. Reconstruction is
filtered back-projection.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

from .exact.wigner import WignerGrid

SPARSE_ANGLE_COUNT = 16
MASS_TOL = 1e-2
FILTERS = ("ramp", "hann")


class SparseCoverageWarning(UserWarning):
    pass


@dataclass
class QuadratureSet:
    angles: np.ndarray
    x_axis: np.ndarray
    distributions: np.ndarray
    sample_counts: np.ndarray
    samples: list[np.ndarray] | None = None

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        self.x_axis = np.asarray(self.x_axis, dtype=float)
        self.distributions = np.atleast_2d(np.asarray(self.distributions, dtype=float))
        self.sample_counts = np.asarray(self.sample_counts, dtype=int)
        if np.any(self.angles < 0) or np.any(self.angles >= np.pi):
            raise ValueError("angles must lie in [0, pi)")
        if np.any(np.diff(self.angles) <= 0):
            raise ValueError("angles must be strictly increasing")
        if self.distributions.shape != (self.angles.size, self.x_axis.size):
            raise ValueError("distributions must have shape (n_angles, n_x)")
        if np.any(self.distributions < 0):
            raise ValueError("distributions must be nonnegative")
        mass = np.trapezoid(self.distributions, self.x_axis, axis=1)
        if np.any(np.abs(mass - 1.0) > 1e-3):
            raise ValueError(f"distributions not normalised (worst mass {mass[np.argmax(np.abs(mass - 1))]:.6f})")


@dataclass
class ReconstructionReport:
    grid: WignerGrid
    l2_error: float
    sup_error: float
    angles_used: int
    filter: str
    sparse: bool = False
    notes: dict = field(default_factory=dict)


def uniform_angles(count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("need at least one angle")
    return np.arange(count) * (np.pi / count)


def default_x_axis(grid: WignerGrid, oversample: float = math.sqrt(2.0)) -> np.ndarray:
    """Symmetric axis covering every projection of the grid's rectangle.

    The spacing is fine enough that no projection direction is under-resolved.
    """
    q_half = max(abs(grid.q_axis[0]), abs(grid.q_axis[-1]))
    p_half = max(abs(grid.p_axis[0]), abs(grid.p_axis[-1]))
    half = math.hypot(q_half, p_half)
    h = min(abs(grid.dq), abs(grid.dp)) / oversample
    n = 2 * int(math.ceil(half / h)) + 1
    return np.linspace(-half, half, n)


def _check_mass(grid: WignerGrid) -> None:
    mass = grid.mass()
    if abs(mass - 1.0) > MASS_TOL:
        raise ValueError(f"grid mass {mass:.6f} deviates from 1 by more than {MASS_TOL:g}")


def marginal(grid: WignerGrid, theta: float, x_axis=None) -> tuple[np.ndarray, np.ndarray]:
    """Radon projection of ``grid`` at angle ``theta``; returns ``(x_axis, pr)``.

    The line integrals are taken of the grid's band-limited interpolant,
    evaluated through the Fourier slice relation: the 1-D transform of the
    projection equals the 2-D transform of W along the ray at ``theta``.
    """
    _check_mass(grid)
    if not 0.0 <= theta < np.pi:
        raise ValueError("theta must lie in [0, pi)")
    x = default_x_axis(grid) if x_axis is None else np.asarray(x_axis, dtype=float)
    return x, _project(grid, np.array([theta]), x)[0]


def marginals(grid: WignerGrid, angles, x_axis=None) -> QuadratureSet:
    """Exact (noise-free) quadrature distributions at every angle."""
    _check_mass(grid)
    angles = np.asarray(angles, dtype=float)
    x = default_x_axis(grid) if x_axis is None else np.asarray(x_axis, dtype=float)
    pr = _project(grid, angles, x)
    return QuadratureSet(angles, x, pr, np.zeros(angles.size, dtype=int))


def _project(grid: WignerGrid, angles: np.ndarray, x: np.ndarray) -> np.ndarray:
    hx = x[1] - x[0]
    m = x.size
    nu = 2.0 * np.pi * np.fft.fftfreq(m, d=hx)
    q, p = grid.q_axis, grid.p_axis
    hq, hp = abs(grid.dq), abs(grid.dp)
    w = grid.values * hq * hp
    out = np.empty((angles.size, m))
    for i, th in enumerate(angles):
        c, s = math.cos(th), math.sin(th)
        kq, kp = nu * c, nu * s
        # beyond either axis' Nyquist the grid transform is an alias, not signal
        keep = (np.abs(kq) < np.pi / hq) & (np.abs(kp) < np.pi / hp)
        a = np.exp(-1j * np.outer(kq[keep], q))
        b = np.exp(-1j * np.outer(kp[keep], p))
        spec = np.zeros(m, dtype=complex)
        spec[keep] = np.einsum("kj,kj->k", a @ w, b)
        spec *= np.exp(1j * nu * x[0])
        out[i] = np.fft.ifft(spec).real / hx
    # probabilities: drop roundoff-level negatives from the inverse transform
    return np.clip(out, 0.0, None)


def _split_seed(seed, n: int) -> list[np.random.Generator]:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(child)) for child in ss.spawn(n)]


def _cdf(distribution: np.ndarray, x: np.ndarray) -> np.ndarray:
    d = np.clip(distribution, 0.0, None)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (d[1:] + d[:-1]) * np.diff(x))])
    if cdf[-1] <= 0:
        raise ValueError("distribution has no mass")
    return cdf / cdf[-1]


def bin_edges(x_axis) -> np.ndarray:
    x = np.asarray(x_axis, dtype=float)
    mid = 0.5 * (x[1:] + x[:-1])
    return np.concatenate([[x[0] - 0.5 * (x[1] - x[0])], mid, [x[-1] + 0.5 * (x[-1] - x[-2])]])


def histogram(samples, x_axis) -> np.ndarray:
    """Density histogram of ``samples`` on bins centred at ``x_axis``."""
    edges = bin_edges(x_axis)
    counts, _ = np.histogram(samples, bins=edges)
    return counts / (max(len(samples), 1) * np.diff(edges))


def sample_quadrature(distribution, x_axis, count: int, seed=0):
    """Draw ``count`` quadrature values by inverse-transform sampling.

    ``seed`` may be an int, a SeedSequence or a Generator. Returns
    ``(samples, histogram)`` with the histogram binned on ``x_axis``.
    """
    if count < 1 or int(count) != count:
        raise ValueError("count must be a positive integer")
    x = np.asarray(x_axis, dtype=float)
    dist = np.asarray(distribution, dtype=float)
    if dist.shape != x.shape:
        raise ValueError("distribution and x_axis differ in length")
    mass = float(np.trapezoid(dist, x))
    if abs(mass - 1.0) > 1e-3:
        raise ValueError(f"distribution mass {mass:.6f} is not 1")
    rng = seed if isinstance(seed, np.random.Generator) else _split_seed(seed, 1)[0]
    cdf = _cdf(dist, x)
    u = rng.random(int(count))
    idx = np.clip(np.searchsorted(cdf, u, side="right"), 1, x.size - 1)
    lo, hi = cdf[idx - 1], cdf[idx]
    frac = np.where(hi > lo, (u - lo) / np.where(hi > lo, hi - lo, 1.0), 0.5)
    samples = x[idx - 1] + frac * (x[idx] - x[idx - 1])
    return samples, histogram(samples, x)


def sample_quadratures(quads: QuadratureSet, count: int, seed=0) -> QuadratureSet:
    """Replace exact marginals by seeded histograms, one independent stream per angle."""
    streams = _split_seed(seed, quads.angles.size)
    samples, hists = [], []
    for dist, rng in zip(quads.distributions, streams):
        s, h = sample_quadrature(dist, quads.x_axis, count, rng)
        samples.append(s)
        hists.append(h)
    hists = np.array(hists)
    # histogram bins can carry a trapezoid-mass error of order one bin; renormalise
    hists /= np.trapezoid(hists, quads.x_axis, axis=1)[:, None]
    return QuadratureSet(
        quads.angles, quads.x_axis, hists, np.full(quads.angles.size, int(count)), samples
    )


def ramp_filter(n_pad: int, hx: float, kind: str = "ramp", cutoff: float = 1.0) -> np.ndarray:
    """Frequency response of the band-limited ramp |nu|, with optional apodisation.

    Built from the sampled spatial kernel so that the zero-frequency
    response is consistent with the discrete convolution.
    """
    if kind not in FILTERS:
        raise ValueError(f"unknown filter {kind!r}; choose from {FILTERS}")
    n = np.arange(n_pad)
    n = np.where(n > n_pad // 2, n - n_pad, n)
    kern = np.zeros(n_pad)
    kern[n == 0] = 1.0 / (4.0 * hx * hx)
    odd = n % 2 == 1
    kern[odd] = -1.0 / (np.pi * n[odd] * hx) ** 2
    resp = 2.0 * np.pi * hx * np.fft.fft(kern).real
    if kind == "hann":
        f = np.abs(np.fft.fftfreq(n_pad)) * 2.0  # 1 at Nyquist
        resp *= np.where(f <= cutoff, 0.5 * (1.0 + np.cos(np.pi * f / cutoff)), 0.0)
    elif cutoff < 1.0:
        resp *= np.abs(np.fft.fftfreq(n_pad)) * 2.0 <= cutoff
    return resp


def _angle_weights(angles: np.ndarray) -> np.ndarray:
    """Quadrature weights on the half circle, periodic with period pi."""
    ext = np.concatenate([[angles[-1] - np.pi], angles, [angles[0] + np.pi]])
    return 0.5 * (ext[2:] - ext[:-2])


def reconstruct(
    quads: QuadratureSet,
    q_axis=None,
    p_axis=None,
    reference: WignerGrid | None = None,
    filter: str = "ramp",
    cutoff: float = 1.0,
) -> ReconstructionReport:
    """Filtered back-projection onto ``q_axis x p_axis``.

    The reference grid, when given, supplies the axes (unless overridden)
    and the error metrics: relative L2 over the grid and sup-norm relative
    to the reference peak.
    """
    if quads.angles.size < 2:
        raise ValueError("reconstruction needs at least two angles")
    sparse = quads.angles.size < SPARSE_ANGLE_COUNT
    if sparse:
        warnings.warn(
            f"only {quads.angles.size} angles; fewer than {SPARSE_ANGLE_COUNT} gives poor coverage",
            SparseCoverageWarning,
            stacklevel=2,
        )
    if reference is not None:
        q_axis = reference.q_axis if q_axis is None else q_axis
        p_axis = reference.p_axis if p_axis is None else p_axis
    if q_axis is None or p_axis is None:
        half = float(np.max(np.abs(quads.x_axis))) / math.sqrt(2.0)
        q_axis = p_axis = np.linspace(-half, half, 128)
    q_axis = np.asarray(q_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)

    x = quads.x_axis
    hx = x[1] - x[0]
    m = x.size
    n_pad = 1 << int(math.ceil(math.log2(2 * m)))
    resp = ramp_filter(n_pad, hx, filter, cutoff)
    weights = _angle_weights(quads.angles)
    qq, pp = np.meshgrid(q_axis, p_axis, indexing="ij")
    acc = np.zeros(qq.shape)
    for th, wt, dist in zip(quads.angles, weights, quads.distributions):
        padded = np.zeros(n_pad)
        padded[:m] = dist
        filtered = np.fft.ifft(np.fft.fft(padded) * resp).real[:m]
        spline = make_interp_spline(x, filtered, k=3)
        s = qq * math.cos(th) + pp * math.sin(th)
        inside = (s >= x[0]) & (s <= x[-1])
        vals = np.zeros(s.shape)
        vals[inside] = spline(s[inside])
        acc += wt * vals
    values = acc / (2.0 * np.pi)

    n_atoms = reference.n_atoms if reference is not None else float("nan")
    t = reference.t if reference is not None else float("nan")
    grid = WignerGrid(q_axis, p_axis, values, t, n_atoms, meta={"reconstructed": True})
    l2 = sup = float("nan")
    if reference is not None:
        diff = values - reference.values
        l2 = float(np.linalg.norm(diff) / np.linalg.norm(reference.values))
        sup = float(np.max(np.abs(diff)) / np.max(np.abs(reference.values)))
    return ReconstructionReport(
        grid=grid,
        l2_error=l2,
        sup_error=sup,
        angles_used=int(quads.angles.size),
        filter=filter,
        sparse=sparse,
        notes={"cutoff": cutoff, "sampled": bool(np.any(quads.sample_counts > 0))},
    )

"""Harmonic chain: phonon dispersion and the collective (k=0) oscillator.

Units have hbar = 1. The chain is periodic, so the allowed wavevectors are
``2 pi j / (N a)`` for ``j = -N/2 ... N/2 - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChainParams:
    n_atoms: int
    kappa: float = 1.0
    mass: float = 1.0
    lattice_const: float = 1.0

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 2:
            raise ValueError(f"n_atoms must be an integer >= 2, got {self.n_atoms!r}")
        for name in ("kappa", "mass", "lattice_const"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class BogoliubovMode:
    k: float
    a_k: float
    b_k: float
    energy: float

    @property
    def is_zero_mode(self) -> bool:
        return self.energy == 0.0


@dataclass(frozen=True)
class CollectiveState:
    """Ground state of the pinned collective oscillator.

    ``field_b == 0`` is the symmetric, fully delocalised state; it is flagged
    by :attr:`symmetric` and carries ``dq2 = inf``.
    """

    big_n: float
    field_b: float
    gap: float
    dq2: float
    dpi2: float

    @property
    def symmetric(self) -> bool:
        return self.field_b == 0.0


def allowed_wavevectors(params: ChainParams) -> np.ndarray:
    n = params.n_atoms
    j = np.arange(-(n // 2), n - n // 2)
    return 2.0 * np.pi * j / (n * params.lattice_const)


def phonon_dispersion(params: ChainParams) -> list[BogoliubovMode]:
    """Bogoliubov-diagonalised phonon energies, sorted by k.

    The energy uses ``sqrt(kappa/(2m)) * sqrt(A_k^2 - B_k^2)`` with
    ``A_k = 2 - cos(ka)`` and ``B_k = -cos(ka)``. The k=0 entry is the
    Goldstone mode; it has zero energy and is handled by
    :func:`collective_ground_state`, not by the Bogoliubov transformation.
    """
    ka = allowed_wavevectors(params) * params.lattice_const
    a_k = 2.0 - np.cos(ka)
    b_k = -np.cos(ka)
    # A^2 - B^2 = 4 (1 - cos ka) = 8 sin^2(ka/2); the half-angle form avoids
    # cancellation for small k.
    gap2 = 8.0 * np.sin(ka / 2.0) ** 2
    energy = np.sqrt(params.kappa / (2.0 * params.mass)) * np.sqrt(gap2)
    ks = ka / params.lattice_const
    return [
        BogoliubovMode(k=float(k), a_k=float(a), b_k=float(b), energy=float(e))
        for k, a, b, e in zip(ks, a_k, b_k, energy)
    ]


def dynamical_matrix(params: ChainParams) -> np.ndarray:
    """Mass-weighted force-constant matrix of the periodic chain."""
    n = params.n_atoms
    d = np.zeros((n, n))
    # one bond per j between x_j and x_{j+1}; for n=2 both bonds join the same pair
    for j in range(n):
        i = (j + 1) % n
        d[j, j] += 1.0
        d[i, i] += 1.0
        d[j, i] -= 1.0
        d[i, j] -= 1.0
    return params.kappa / params.mass * d


def diagonalization_frequencies(params: ChainParams) -> np.ndarray:
    """Eigenfrequencies of the dynamical matrix, ascending. Roundoff negatives clip to 0."""
    w2 = np.linalg.eigvalsh(dynamical_matrix(params))
    return np.sqrt(np.clip(w2, 0.0, None))


def collective_ground_state(big_n: float, field_b: float) -> CollectiveState:
    """Gaussian ground state of ``Pi^2/(2N) + B N Q^2 / 2``."""
    if not big_n > 0:
        raise ValueError(f"big_n must be positive, got {big_n!r}")
    if field_b < 0 or not np.isfinite(field_b):
        raise ValueError(f"field_b must be finite and nonnegative, got {field_b!r}")
    if field_b == 0.0:
        return CollectiveState(big_n=big_n, field_b=0.0, gap=0.0, dq2=float("inf"), dpi2=0.0)
    gap = float(np.sqrt(field_b))
    width = big_n * gap
    return CollectiveState(
        big_n=big_n,
        field_b=float(field_b),
        gap=gap,
        dq2=1.0 / (2.0 * width),
        dpi2=width / 2.0,
    )

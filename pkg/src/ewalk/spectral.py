"""Momentum-space spectra of the electric walk.

For zero field the one-step operator at momentum k is the 2x2 matrix
diag(e^{-ik}, e^{ik}) R(theta) with quasi-energies +-omega, cos(omega) =
cos(theta) cos(k). For a rational field phi = 2 pi n / m the walk commutes
with translations by m sites; bloch_matrix gives the 2m x 2m one-step
operator at quasimomentum kappa in the reduced zone (-pi/m, pi/m].

Bloch gauge: intra-cell hops carry no kappa phase; the cell-boundary hops
(r = m-1 -> 0 and r = 0 -> m-1) carry e^{-i kappa m} and e^{+i kappa m}.
This reduces exactly to the free matrix at m = 1.

Band continuity across the quasi-energy branch cut is resolved by
eigenvector-overlap tracking (flat bands cluster in phase, so plain phase
sorting scrambles them). Group-velocity multisets use centered differences
at the grid spacing with *local* eigenvector pairing between kappa -+ delta,
which stays well-defined at the exact band degeneracies that occur at the
zone edge for even m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DomainError

__all__ = [
    "RationalPhase",
    "BandStructure",
    "BandTransferReport",
    "free_step_matrix",
    "dispersion_free",
    "group_velocity",
    "bloch_matrix",
    "band_structure",
    "band_flatness",
    "band_transfer",
    "velocity_multiset",
]


@dataclass(frozen=True)
class RationalPhase:
    """Field phi = 2*pi*n/m in lowest terms, m >= 1 (sign carried by n)."""

    n: int
    m: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m:
            raise DomainError("n and m must be integers")
        n, m = int(self.n), int(self.m)
        if m == 0:
            raise DomainError("m must be nonzero")
        if m < 0:
            n, m = -n, -m
        g = gcd(n, m)
        if g > 1:
            n //= g
            m //= g
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)

    @property
    def phi(self):
        return 2.0 * math.pi * self.n / self.m

    @property
    def zone_width(self):
        return 2.0 * math.pi / self.m


@dataclass
class BandStructure:
    """Continuity-tracked quasi-energy bands over a reduced-zone grid.

    eigenphases[j, b] is band b at kappa_grid[j]; eigenvectors[j][:, b] the
    matching Bloch eigenvector.
    """

    rational: RationalPhase
    theta: float
    kappa_grid: np.ndarray
    eigenphases: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class BandTransferReport:
    """Band populations of a + band state before/after one electric step."""

    k: float
    populations_before: tuple
    populations_after: tuple


# ---------------------------------------------------------------------------
# free walk
# ---------------------------------------------------------------------------

def free_step_matrix(k, theta):
    """2x2 one-step operator at momentum k, zero field: diag(e^{-ik}, e^{ik}) R."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [np.exp(-1j * k) * c, -np.exp(-1j * k) * s],
            [np.exp(1j * k) * s, np.exp(1j * k) * c],
        ],
        dtype=np.complex128,
    )


def dispersion_free(k, theta):
    """Quasi-energies (+omega, -omega) with cos(omega) = cos(theta) cos(k).

    Works element-wise on array k; omega is in [0, pi].
    """
    omega = np.arccos(np.clip(math.cos(theta) * np.cos(k), -1.0, 1.0))
    return omega, -omega


def group_velocity(k, theta, band):
    """d omega / d k = band * cos(theta) sin(k) / sin(omega), band = +1 or -1.

    Raises at band-touching points (sin omega = 0, only possible when
    |cos theta| = 1).
    """
    if band not in (+1, -1):
        raise DomainError("band must be +1 or -1")
    omega, _ = dispersion_free(k, theta)
    s = np.sin(omega)
    if np.any(np.abs(s) < 1e-12):
        raise DomainError("group velocity singular at a band-touching point")
    v = band * math.cos(theta) * np.sin(k) / s
    return float(v) if np.isscalar(k) else v


# ---------------------------------------------------------------------------
# rational field: Bloch operator and bands
# ---------------------------------------------------------------------------

def _bloch_matrix_raw(rational, kappa, theta):
    # Built by applying coin -> shift -> field to each unit-cell basis state
    # (r, spin), r = 0..m-1, flat index 2 r + spin; guarantees consistency
    # with the real-space engine by construction.
    m = rational.m
    phi = rational.phi
    c, s = math.cos(theta), math.sin(theta)
    wrap_up = np.exp(-1j * kappa * m)
    wrap_down = np.exp(1j * kappa * m)
    w = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    for r in range(m):
        for spin in (0, 1):
            col = 2 * r + spin
            coin_up = c if spin == 0 else -s
            coin_down = s if spin == 0 else c
            r_up, ph_up = (r + 1, 1.0) if r + 1 < m else (0, wrap_up)
            r_down, ph_down = (r - 1, 1.0) if r - 1 >= 0 else (m - 1, wrap_down)
            w[2 * r_up + 0, col] += coin_up * ph_up * np.exp(1j * phi * r_up)
            w[2 * r_down + 1, col] += coin_down * ph_down * np.exp(1j * phi * r_down)
    return w


def bloch_matrix(rational, kappa, theta):
    """2m x 2m one-step operator at reduced quasimomentum kappa in (-pi/m, pi/m]."""
    half_zone = math.pi / rational.m
    if not -half_zone < kappa <= half_zone:
        raise DomainError(
            f"kappa={kappa} outside the reduced zone (-pi/{rational.m}, pi/{rational.m}]"
        )
    return _bloch_matrix_raw(rational, kappa, theta)


def _kappa_grid(rational, grid_points):
    # (-pi/m, pi/m], left-open, right endpoint included.
    m = rational.m
    j = np.arange(1, grid_points + 1, dtype=float)
    return -math.pi / m + (2.0 * math.pi / m) * j / grid_points


def band_structure(rational, theta, grid_points):
    """Diagonalize the Bloch operator on a uniform kappa grid; track bands.

    Band labels follow eigenvector overlap from one grid point to the next
    (maximum-overlap assignment), starting from ascending eigenphase order at
    the first point.
    """
    if grid_points < 2:
        raise DomainError("grid_points must be >= 2")
    kappas = _kappa_grid(rational, grid_points)
    nb = 2 * rational.m
    phases = np.empty((grid_points, nb))
    vectors = np.empty((grid_points, nb, nb), dtype=np.complex128)
    prev = None
    for j, kappa in enumerate(kappas):
        evals, vecs = np.linalg.eig(_bloch_matrix_raw(rational, kappa, theta))
        ph = np.angle(evals)
        if prev is None:
            order = np.argsort(ph)
        else:
            overlap = np.abs(prev.conj().T @ vecs) ** 2
            _, order = linear_sum_assignment(-overlap)
        phases[j] = ph[order]
        vectors[j] = vecs[:, order]
        prev = vectors[j]
    return BandStructure(rational, theta, kappas, phases, vectors)


def band_flatness(bands):
    """Per-band (max - min) eigenphase over the grid, unwrapped across the cut."""
    unwrapped = np.unwrap(bands.eigenphases, axis=0)
    return unwrapped.max(axis=0) - unwrapped.min(axis=0)


def velocity_multiset(rational, theta, grid_points):
    """Sorted group velocities of all 2m bands over the kappa grid.

    Centered finite differences with spacing equal to the grid spacing; at
    each grid point the eigenvectors at kappa - delta and kappa + delta are
    paired by maximum overlap, bypassing the midpoint entirely. Comparisons
    across (n, m) vs (n, 2m) line up exactly when the grid counts scale as
    1/m (equal spacing and commensurate offsets).
    """
    if grid_points < 2:
        raise DomainError("grid_points must be >= 2")
    kappas = _kappa_grid(rational, grid_points)
    delta = rational.zone_width / grid_points
    slopes = np.empty(2 * rational.m * grid_points)
    nb = 2 * rational.m
    for j, kappa in enumerate(kappas):
        el, vl = np.linalg.eig(_bloch_matrix_raw(rational, kappa - delta, theta))
        er, vr = np.linalg.eig(_bloch_matrix_raw(rational, kappa + delta, theta))
        overlap = np.abs(vl.conj().T @ vr) ** 2
        left, right = linear_sum_assignment(-overlap)
        dphase = np.angle(er[right] * el[left].conj())
        slopes[j * nb:(j + 1) * nb] = dphase / (2.0 * delta)
    return np.sort(slopes)


# ---------------------------------------------------------------------------
# band transfer
# ---------------------------------------------------------------------------

def _free_band_vectors(k, theta):
    # returns (v_plus, v_minus) eigenvectors, + the band with phase in (0, pi)
    evals, vecs = np.linalg.eig(free_step_matrix(k, theta))
    ph = np.angle(evals)
    if abs(ph[0]) < 1e-12 or abs(abs(ph[0]) - math.pi) < 1e-12:
        raise DomainError("bands touch at this (k, theta); transfer undefined")
    plus = int(np.argmax(ph))
    minus = 1 - plus
    return vecs[:, plus], vecs[:, minus]


def band_transfer(k, theta, phi):
    """Populations of a + band state after one electric step.

    The + eigenvector of the free operator at k is stepped once (multiplied
    by the free matrix at k; the field then displaces momentum k -> k + phi)
    and projected onto the +- eigenvectors at k + phi.
    """
    v_plus, v_minus = _free_band_vectors(k, theta)
    before = (
        float(np.abs(v_plus.conj() @ v_plus) ** 2),
        float(np.abs(v_minus.conj() @ v_plus) ** 2),
    )
    evolved = free_step_matrix(k, theta) @ v_plus
    w_plus, w_minus = _free_band_vectors(k + phi, theta)
    after = (
        float(np.abs(w_plus.conj() @ evolved) ** 2),
        float(np.abs(w_minus.conj() @ evolved) ** 2),
    )
    return BandTransferReport(float(k), before, after)

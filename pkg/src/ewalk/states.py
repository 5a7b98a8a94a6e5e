"""Lattice windows and walker states (pure spinors, density matrices, momentum form).

Conventions
-----------
* Sites are integers x on a finite window [x_min, x_max]; lattice spacing,
  time step and hbar are all 1.
* A spinor state stores the internal-up and internal-down amplitude arrays
  separately, each of length window.size, indexed by x - x_min.
* Density matrices use the flat index i = 2*(x - x_min) + s with s = 0 for
  up, s = 1 for down.
* Momentum grid for a window of L sites: k_j = 2*pi*j/L - pi, j = 0..L-1.
  Forward transform u~(k_j) = sum_x u(x) e^{-i k_j x} with the *absolute*
  site coordinate x, so that a walker localized at x0 carries the phase
  e^{-i k x0}; Parseval then reads sum_j (|u~|^2 + |d~|^2) / L = 1.

All state arrays are frozen (writeable=False); operations return new objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "SiteWindow",
    "SpinorState",
    "DensityState",
    "MomentumSpinor",
    "new_localized",
    "density_from_pure",
    "momentum_transform",
    "inverse_momentum_transform",
    "purity",
]


def _frozen_complex(a):
    out = np.array(a, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SiteWindow:
    """Closed integer interval [x_min, x_max] of lattice sites."""

    x_min: int
    x_max: int

    def __post_init__(self):
        if int(self.x_min) != self.x_min or int(self.x_max) != self.x_max:
            raise DomainError("window bounds must be integers")
        if self.x_max < self.x_min:
            raise DomainError(
                f"empty window: x_max={self.x_max} < x_min={self.x_min}"
            )

    @property
    def size(self):
        return self.x_max - self.x_min + 1

    def sites(self):
        """All site coordinates in the window, ascending."""
        return np.arange(self.x_min, self.x_max + 1)

    def contains(self, x):
        return self.x_min <= x <= self.x_max

    def index_of(self, x):
        """Array index of site x."""
        if not self.contains(x):
            raise DomainError(f"site {x} outside window [{self.x_min}, {self.x_max}]")
        return int(x) - self.x_min


@dataclass(frozen=True)
class SpinorState:
    """Pure two-component walker state on a site window."""

    window: SiteWindow
    amp_up: np.ndarray
    amp_down: np.ndarray

    def __post_init__(self):
        up = _frozen_complex(self.amp_up)
        down = _frozen_complex(self.amp_down)
        if up.shape != (self.window.size,) or down.shape != (self.window.size,):
            raise DomainError("amplitude arrays must match the window size")
        object.__setattr__(self, "amp_up", up)
        object.__setattr__(self, "amp_down", down)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.amp_up) ** 2)
                             + np.sum(np.abs(self.amp_down) ** 2)))

    def probabilities(self):
        """Position probabilities |up|^2 + |down|^2, indexed by x - x_min."""
        return (np.abs(self.amp_up) ** 2 + np.abs(self.amp_down) ** 2).real


@dataclass(frozen=True)
class DensityState:
    """Density matrix on window x spin, flat index 2*(x - x_min) + s.

    Construction checks shape and trace only (cheap); use validate() for the
    full Hermiticity / positivity audit.
    """

    window: SiteWindow
    matrix: np.ndarray

    def __post_init__(self):
        mat = _frozen_complex(self.matrix)
        dim = 2 * self.window.size
        if mat.shape != (dim, dim):
            raise DomainError(f"density matrix must be {dim}x{dim} for this window")
        tr = np.trace(mat)
        if abs(tr - 1.0) > 1e-8:
            raise DomainError(f"density matrix trace {tr} is not 1")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self):
        return 2 * self.window.size

    def trace(self):
        return complex(np.trace(self.matrix))

    def validate(self, tol=1e-10):
        """Raise DomainError unless the matrix is Hermitian, unit-trace and PSD within tol."""
        herm = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if herm > tol:
            raise DomainError(f"density matrix not Hermitian (deviation {herm:.3e})")
        tr = np.trace(self.matrix)
        if abs(tr - 1.0) > tol:
            raise DomainError(f"density matrix trace deviates by {abs(tr-1.0):.3e}")
        evals = np.linalg.eigvalsh(self.matrix)
        if evals.min() < -tol:
            raise DomainError(f"density matrix has negative eigenvalue {evals.min():.3e}")

    def position_probabilities(self):
        """Diagonal traced over spin, indexed by x - x_min."""
        d = np.real(np.diag(self.matrix))
        return d[0::2] + d[1::2]


@dataclass(frozen=True)
class MomentumSpinor:
    """Momentum-space form of a spinor state on the grid k_j = 2*pi*j/L - pi."""

    window: SiteWindow
    k_grid: np.ndarray = field(repr=False)
    amp_up: np.ndarray = field(repr=False)
    amp_down: np.ndarray = field(repr=False)

    def __post_init__(self):
        k = np.array(self.k_grid, dtype=float)
        k.setflags(write=False)
        up = _frozen_complex(self.amp_up)
        down = _frozen_complex(self.amp_down)
        L = self.window.size
        if k.shape != (L,) or up.shape != (L,) or down.shape != (L,):
            raise DomainError("momentum arrays must match the window size")
        object.__setattr__(self, "k_grid", k)
        object.__setattr__(self, "amp_up", up)
        object.__setattr__(self, "amp_down", down)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def new_localized(x0, spinor, window):
    """Walker perfectly localized at site x0 with the given 2-component spinor.

    The spinor must be normalized to 1 within 1e-12.
    """
    if not isinstance(window, SiteWindow):
        window = SiteWindow(*window)
    spinor = np.asarray(spinor, dtype=np.complex128)
    if spinor.shape != (2,):
        raise DomainError("spinor must have exactly two components")
    n = np.sqrt(np.sum(np.abs(spinor) ** 2))
    if abs(n - 1.0) > 1e-12:
        raise DomainError(f"spinor norm {n} differs from 1 by more than 1e-12")
    i = window.index_of(x0)
    up = np.zeros(window.size, dtype=np.complex128)
    down = np.zeros(window.size, dtype=np.complex128)
    up[i] = spinor[0]
    down[i] = spinor[1]
    return SpinorState(window, up, down)


def density_from_pure(state):
    """rho = |psi><psi| in the flat (site, spin) index layout."""
    psi = np.empty(2 * state.window.size, dtype=np.complex128)
    psi[0::2] = state.amp_up
    psi[1::2] = state.amp_down
    return DensityState(state.window, np.outer(psi, psi.conj()))


# ---------------------------------------------------------------------------
# momentum transform
# ---------------------------------------------------------------------------

def momentum_transform(state):
    """Discrete Fourier transform onto the window's momentum grid.

    Exactness beats cleverness at desk scale: the transform is an explicit
    L x L matrix applied to both spin components.
    """
    L = state.window.size
    xs = state.window.sites()
    k = 2.0 * np.pi * np.arange(L) / L - np.pi
    F = np.exp(-1j * np.outer(k, xs))
    return MomentumSpinor(state.window, k, F @ state.amp_up, F @ state.amp_down)


def inverse_momentum_transform(mom):
    """Inverse of momentum_transform; round-trips to the original state."""
    L = mom.window.size
    xs = mom.window.sites()
    Finv = np.exp(1j * np.outer(xs, mom.k_grid)) / L
    return SpinorState(mom.window, Finv @ mom.amp_up, Finv @ mom.amp_down)


def purity(rho):
    """tr(rho^2) as a real number; 1 for pure states, 1/dim for maximally mixed."""
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))

"""Step operator and evolution of the electric discrete-time walk.

One step applies, in this order: the coin rotation R(theta) on the internal
state, the spin-conditioned shift (up -> x+1, down -> x-1), and the
site-diagonal field phase e^{i phi x}. Natural units: lattice constant, time
step and hbar are all 1, so phi is the full field specification.

Dephasing is a sigma_z phase-damping channel applied once per step after the
unitary: every density-matrix element with unequal spin indices is multiplied
by (1 - p). Spin populations and position probabilities are untouched by the
channel itself; at p = 1 spin coherence dies each step and the position
marginal follows the classical +-1 coin-flip chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, WindowOverflowError
from .states import DensityState, SpinorState

__all__ = [
    "WalkParams",
    "apply_coin",
    "apply_shift",
    "apply_field",
    "step",
    "evolve",
    "dephase",
    "evolve_density",
]

_TWO_PI = 2.0 * math.pi


def _reduce_angle(a):
    """Reduce to [0, 2*pi). fmod keeps the reduction exact for representable angles."""
    r = math.fmod(a, _TWO_PI)
    if r < 0.0:
        r += _TWO_PI
    return r


@dataclass(frozen=True)
class WalkParams:
    """Field phase phi (radians per site per step), coin angle, dephasing rate.

    phi and theta are reduced mod 2*pi at construction; the raw values are
    kept on phi_raw / theta_raw for reporting.
    """

    phi: float
    theta: float = math.pi / 4.0
    dephase_p: float = 0.0
    phi_raw: float = field(init=False, repr=False)
    theta_raw: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.phi) and math.isfinite(self.theta)):
            raise DomainError("phi and theta must be finite")
        if not 0.0 <= self.dephase_p <= 1.0:
            raise DomainError(f"dephase_p={self.dephase_p} outside [0, 1]")
        object.__setattr__(self, "phi_raw", float(self.phi))
        object.__setattr__(self, "theta_raw", float(self.theta))
        object.__setattr__(self, "phi", _reduce_angle(float(self.phi)))
        object.__setattr__(self, "theta", _reduce_angle(float(self.theta)))


def _field_phases(window, phi):
    """e^{i phi x} over the window, complex128."""
    return np.exp(1j * phi * window.sites().astype(float))


# ---------------------------------------------------------------------------
# elementary operators
# ---------------------------------------------------------------------------

def apply_coin(state, theta):
    """Rotate every site spinor by [[cos t, -sin t], [sin t, cos t]]."""
    c, s = math.cos(theta), math.sin(theta)
    return SpinorState(
        state.window,
        c * state.amp_up - s * state.amp_down,
        s * state.amp_up + c * state.amp_down,
    )


def apply_shift(state):
    """Move amp_up one site right and amp_down one site left."""
    up, down = state.amp_up, state.amp_down
    if up[-1] != 0.0 or down[0] != 0.0:
        raise WindowOverflowError(
            "shift would move amplitude outside the window "
            f"[{state.window.x_min}, {state.window.x_max}]"
        )
    new_up = np.zeros_like(up)
    new_down = np.zeros_like(down)
    new_up[1:] = up[:-1]
    new_down[:-1] = down[1:]
    return SpinorState(state.window, new_up, new_down)


def apply_field(state, phi):
    """Multiply the amplitude at site x by e^{i phi x} (both spin components)."""
    f = _field_phases(state.window, phi)
    return SpinorState(state.window, f * state.amp_up, f * state.amp_down)


# ---------------------------------------------------------------------------
# composed step and evolution
# ---------------------------------------------------------------------------

def _check_pure_overflow(up, down, c, s, window):
    # Exact support check on the post-coin state: the only amplitudes the
    # shift can push out are coined-up at x_max and coined-down at x_min.
    edge_up = c * up[-1] - s * down[-1]
    edge_down = s * up[0] + c * down[0]
    if edge_up != 0.0 or edge_down != 0.0:
        raise WindowOverflowError(
            f"step would move amplitude outside the window [{window.x_min}, {window.x_max}]"
        )


def step(state, params):
    """One full electric-walk step: field(shift(coin(state)))."""
    c, s = math.cos(params.theta), math.sin(params.theta)
    _check_pure_overflow(state.amp_up, state.amp_down, c, s, state.window)
    f = _field_phases(state.window, params.phi)
    up, down = kernels.walk_step_pure(state.amp_up, state.amp_down, c, s, f)
    return SpinorState(state.window, up, down)


def evolve(state, params, t):
    """t steps from state; returns [state, step^1(state), ..., step^t(state)]."""
    if t < 0:
        raise DomainError("step count must be >= 0")
    c, s = math.cos(params.theta), math.sin(params.theta)
    f = _field_phases(state.window, params.phi)
    out = [state]
    up, down = state.amp_up, state.amp_down
    for _ in range(t):
        _check_pure_overflow(up, down, c, s, state.window)
        up, down = kernels.walk_step_pure(up, down, c, s, f)
        out.append(SpinorState(state.window, up, down))
    return out


# ---------------------------------------------------------------------------
# dephased (density-matrix) evolution
# ---------------------------------------------------------------------------

def dephase(rho, p):
    """sigma_z phase damping: spin-off-diagonal elements multiplied by (1 - p).

    Equivalently rho -> (1 - p/2) rho + (p/2) Z rho Z. Position probabilities
    are unchanged; spin coherence is scaled down.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"dephasing probability {p} outside [0, 1]")
    out = np.array(rho.matrix)
    out[0::2, 1::2] *= 1.0 - p
    out[1::2, 0::2] *= 1.0 - p
    return DensityState(rho.window, out)


def _check_density_overflow(rho, c, s, window):
    # Post-coin boundary populations; exact zeros stay exact zeros, so this
    # triggers precisely when support would leave the window.
    b = rho[-2:, -2:]
    gain_up = (c * c * b[0, 0] - c * s * (b[0, 1] + b[1, 0]) + s * s * b[1, 1]).real
    b = rho[:2, :2]
    gain_down = (s * s * b[0, 0] + c * s * (b[0, 1] + b[1, 0]) + c * c * b[1, 1]).real
    if gain_up != 0.0 or gain_down != 0.0:
        raise WindowOverflowError(
            f"step would move support outside the window [{window.x_min}, {window.x_max}]"
        )


def evolve_density(rho, params, t):
    """t dephased steps; each is unitary conjugation then dephase(., dephase_p).

    Returns one DensityState per step including the input at index 0.
    """
    if t < 0:
        raise DomainError("step count must be >= 0")
    c, s = math.cos(params.theta), math.sin(params.theta)
    f = _field_phases(rho.window, params.phi)
    coherence = 1.0 - params.dephase_p
    out = [rho]
    cur = rho.matrix
    for _ in range(t):
        _check_density_overflow(cur, c, s, rho.window)
        cur = kernels.walk_step_density(cur, c, s, f, coherence)
        out.append(DensityState(rho.window, cur))
    return out

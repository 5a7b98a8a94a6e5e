"""Pure-numpy walk kernels (fallback when the C extension is unavailable).

Both kernels assume the caller has already verified that no amplitude will be
shifted past the window edge; amplitude entering from outside is zero-filled.
Array layout: amplitude arrays indexed by x - x_min; density matrices use the
flat index 2*(x - x_min) + s with s = 0 (up), 1 (down).
"""

import numpy as np


def walk_step_pure(up, down, cos_t, sin_t, field):
    """One step coin -> shift -> field on a pure state; returns (up, down)."""
    cu = cos_t * up - sin_t * down
    cd = sin_t * up + cos_t * down
    new_up = np.zeros_like(cu)
    new_down = np.zeros_like(cd)
    new_up[1:] = cu[:-1]
    new_down[:-1] = cd[1:]
    new_up *= field
    new_down *= field
    return new_up, new_down


def _w_left(mat, cos_t, sin_t, field):
    """Left-multiply a (2L x N) flattened operator by the one-step unitary."""
    L = field.shape[0]
    m = mat.reshape(L, 2, -1)
    cu = cos_t * m[:, 0, :] - sin_t * m[:, 1, :]
    cd = sin_t * m[:, 0, :] + cos_t * m[:, 1, :]
    out = np.zeros_like(m)
    out[1:, 0, :] = cu[:-1, :]
    out[:-1, 1, :] = cd[1:, :]
    out *= field[:, None, None]
    return out.reshape(mat.shape)


def walk_step_density(rho, cos_t, sin_t, field, coherence):
    """One step rho -> W rho W^dagger, then spin-off-diagonal damping.

    coherence = 1 - dephase_p multiplies every element with unequal spin
    indices (sigma_z phase damping); position diagonals are untouched.
    """
    y = _w_left(np.asarray(rho), cos_t, sin_t, field)
    out = np.ascontiguousarray(_w_left(y.conj().T, cos_t, sin_t, field).conj().T)
    if coherence != 1.0:
        out[0::2, 1::2] *= coherence
        out[1::2, 0::2] *= coherence
    return out

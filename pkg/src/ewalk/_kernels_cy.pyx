# cython: boundscheck=False, wraparound=False, cdivision=True
"""C implementations of the hot walk kernels; see kernels.py for dispatch.

Semantics match _kernels_py exactly (same layout, same zero-fill boundary
rule); results agree with the numpy kernels to floating-point reordering.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def walk_step_pure(const double complex[::1] up, const double complex[::1] down,
                   double cos_t, double sin_t, const double complex[::1] field):
    cdef Py_ssize_t L = up.shape[0]
    out_up_arr = np.zeros(L, dtype=np.complex128)
    out_down_arr = np.zeros(L, dtype=np.complex128)
    cdef double complex[::1] out_up = out_up_arr
    cdef double complex[::1] out_down = out_down_arr
    cdef Py_ssize_t i
    cdef double complex cu, cd
    for i in range(L):
        cu = cos_t * up[i] - sin_t * down[i]
        cd = sin_t * up[i] + cos_t * down[i]
        if i + 1 < L:
            out_up[i + 1] = field[i + 1] * cu
        if i >= 1:
            out_down[i - 1] = field[i - 1] * cd
    return out_up_arr, out_down_arr


def walk_step_density(const double complex[:, ::1] rho, double cos_t, double sin_t,
                      const double complex[::1] field, double coherence):
    """rho -> W rho W^dagger with spin-off-diagonal damping fused in.

    Direct four-source formula per output entry: the (x,s),(y,t) element pulls
    the 2x2 spin block of rho at sites (x - d_s, y - d_t) with d_up = +1,
    d_down = -1, contracts it with coin rows, and applies the field phases.
    """
    cdef Py_ssize_t L = field.shape[0]
    out_arr = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t xi, yi, s, t, xs, ys, r0, c0
    cdef double a0, a1, b0, b1
    cdef double complex fx, f, val
    cdef double r_00 = cos_t, r_01 = -sin_t, r_10 = sin_t, r_11 = cos_t
    for xi in range(L):
        fx = field[xi]
        for s in range(2):
            if s == 0:
                xs = xi - 1
                a0 = r_00
                a1 = r_01
            else:
                xs = xi + 1
                a0 = r_10
                a1 = r_11
            if xs < 0 or xs >= L:
                continue
            r0 = 2 * xs
            for yi in range(L):
                f = fx * field[yi].conjugate()
                for t in range(2):
                    if t == 0:
                        ys = yi - 1
                        b0 = r_00
                        b1 = r_01
                    else:
                        ys = yi + 1
                        b0 = r_10
                        b1 = r_11
                    if ys < 0 or ys >= L:
                        continue
                    c0 = 2 * ys
                    val = ((a0 * b0) * rho[r0, c0] + (a0 * b1) * rho[r0, c0 + 1]
                           + (a1 * b0) * rho[r0 + 1, c0] + (a1 * b1) * rho[r0 + 1, c0 + 1])
                    val = f * val
                    if s != t:
                        val = val * coherence
                    out[2 * xi + s, 2 * yi + t] = val
    return out_arr

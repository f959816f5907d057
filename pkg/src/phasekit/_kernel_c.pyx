# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the segment-local kernels.

Same contract as the NumPy module: flat C-contiguous complex128 input,
freshly allocated output, inputs never mutated.
"""

import numpy as np


def segment_phase(const double complex[::1] amps, Py_ssize_t dim,
                  Py_ssize_t stride, const double complex[::1] phases):
    """Multiply amplitudes with segment value y by phases[y]."""
    cdef Py_ssize_t total = amps.shape[0]
    out_arr = np.empty(total, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t blocks = total // (dim * stride)
    cdef Py_ssize_t b, y, r, base
    cdef double complex p
    with nogil:
        for b in range(blocks):
            for y in range(dim):
                p = phases[y]
                base = (b * dim + y) * stride
                for r in range(stride):
                    out[base + r] = p * amps[base + r]
    return out_arr


def segment_translate(const double complex[::1] amps, Py_ssize_t dim,
                      Py_ssize_t stride, Py_ssize_t shift):
    """Send segment value y to (y + shift) mod dim."""
    cdef Py_ssize_t total = amps.shape[0]
    out_arr = np.empty(total, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t blocks = total // (dim * stride)
    cdef Py_ssize_t s = shift % dim
    if s < 0:
        s += dim
    cdef Py_ssize_t b, y, ny, r, src, dst
    with nogil:
        for b in range(blocks):
            for y in range(dim):
                ny = y + s
                if ny >= dim:
                    ny -= dim
                src = (b * dim + y) * stride
                dst = (b * dim + ny) * stride
                for r in range(stride):
                    out[dst + r] = amps[src + r]
    return out_arr


def segment_reflect(const double complex[::1] amps, Py_ssize_t dim,
                    Py_ssize_t stride, const double complex[::1] phases):
    """Send segment value y to (-y) mod dim, scaling by phases[y]."""
    cdef Py_ssize_t total = amps.shape[0]
    out_arr = np.empty(total, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t blocks = total // (dim * stride)
    cdef Py_ssize_t b, y, ny, r, src, dst
    cdef double complex p
    with nogil:
        for b in range(blocks):
            for y in range(dim):
                ny = 0 if y == 0 else dim - y
                p = phases[y]
                src = (b * dim + y) * stride
                dst = (b * dim + ny) * stride
                for r in range(stride):
                    out[dst + r] = p * amps[src + r]
    return out_arr


def oracle_shift(const double complex[::1] amps,
                 Py_ssize_t n_ctl, Py_ssize_t stride_ctl,
                 Py_ssize_t n_anc, Py_ssize_t stride_anc,
                 const long long[::1] shifts):
    """Shift the ancilla segment by shifts[x], x the control segment value.

    ``shifts`` must already be reduced into ``[0, n_anc)``.
    """
    cdef Py_ssize_t total = amps.shape[0]
    out_arr = np.empty(total, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t outer, mid, p, x, b, y, r, ny, s, src, dst
    if stride_ctl > stride_anc:
        # control segment sits left of the ancilla segment
        outer = total // (n_ctl * stride_ctl)
        mid = stride_ctl // (n_anc * stride_anc)
        with nogil:
            for p in range(outer):
                for x in range(n_ctl):
                    s = <Py_ssize_t> shifts[x]
                    for b in range(mid):
                        for y in range(n_anc):
                            ny = y + s
                            if ny >= n_anc:
                                ny -= n_anc
                            src = (((p * n_ctl + x) * mid + b) * n_anc + y) * stride_anc
                            dst = (((p * n_ctl + x) * mid + b) * n_anc + ny) * stride_anc
                            for r in range(stride_anc):
                                out[dst + r] = amps[src + r]
    else:
        outer = total // (n_anc * stride_anc)
        mid = stride_anc // (n_ctl * stride_ctl)
        with nogil:
            for p in range(outer):
                for y in range(n_anc):
                    for b in range(mid):
                        for x in range(n_ctl):
                            s = <Py_ssize_t> shifts[x]
                            ny = y + s
                            if ny >= n_anc:
                                ny -= n_anc
                            src = (((p * n_anc + y) * mid + b) * n_ctl + x) * stride_ctl
                            dst = (((p * n_anc + ny) * mid + b) * n_ctl + x) * stride_ctl
                            for r in range(stride_ctl):
                                out[dst + r] = amps[src + r]
    return out_arr

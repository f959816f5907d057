"""NumPy implementations of the segment-local kernels.

Every function takes a flat, C-contiguous complex128 amplitude array and
returns a freshly allocated array of the same length; inputs are never
mutated.  ``dim`` is the size of the addressed segment and ``stride`` the
product of all segment sizes to its right, so the flat array factors as
``(blocks, dim, stride)``.
"""

import numpy as np


def segment_phase(amps, dim, stride, phases):
    """Multiply amplitudes with segment value y by phases[y]."""
    view = amps.reshape(-1, dim, stride)
    out = view * phases.reshape(1, dim, 1)
    return np.ascontiguousarray(out.reshape(-1))


def segment_translate(amps, dim, stride, shift):
    """Send segment value y to (y + shift) mod dim."""
    view = amps.reshape(-1, dim, stride)
    out = np.roll(view, shift % dim, axis=1)
    return np.ascontiguousarray(out.reshape(-1))


def segment_reflect(amps, dim, stride, phases):
    """Send segment value y to (-y) mod dim, scaling by phases[y]."""
    view = amps.reshape(-1, dim, stride)
    out = np.empty_like(view)
    neg = (-np.arange(dim)) % dim
    out[:, neg, :] = view * phases.reshape(1, dim, 1)
    return np.ascontiguousarray(out.reshape(-1))


def oracle_shift(amps, n_ctl, stride_ctl, n_anc, stride_anc, shifts):
    """Shift the ancilla segment by shifts[x], x the control segment value.

    ``shifts`` must already be reduced into ``[0, n_anc)``.  Control and
    ancilla are distinct segments, so one stride strictly divides the other.
    """
    if stride_ctl > stride_anc:
        mid = stride_ctl // (n_anc * stride_anc)
        view = amps.reshape(-1, n_ctl, mid, n_anc, stride_anc)
        src = (np.arange(n_anc)[None, :] - shifts[:, None]) % n_anc
        idx = src.reshape(1, n_ctl, 1, n_anc, 1)
        out = np.take_along_axis(view, idx, axis=3)
    else:
        mid = stride_anc // (n_ctl * stride_ctl)
        view = amps.reshape(-1, n_anc, mid, n_ctl, stride_ctl)
        src = (np.arange(n_anc)[:, None] - shifts[None, :]) % n_anc
        idx = src.reshape(1, n_anc, 1, n_ctl, 1)
        out = np.take_along_axis(view, idx, axis=1)
    return np.ascontiguousarray(out.reshape(-1))

"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the NumPy
module is always available as a fallback.  Set ``PHASEKIT_BACKEND`` to
``cython`` or ``numpy`` before import to force one, or call
:func:`set_backend` at runtime (used by the benchmark command).
"""

import os

from . import _kernel_py

_IMPLS = {"numpy": _kernel_py}
try:
    from . import _kernel_c

    _IMPLS["cython"] = _kernel_c
except ImportError:
    pass

_forced = os.environ.get("PHASEKIT_BACKEND", "")
if _forced:
    if _forced not in _IMPLS:
        raise ImportError(
            f"PHASEKIT_BACKEND={_forced!r} is not available; "
            f"choices: {', '.join(sorted(_IMPLS))}"
        )
    _active = _forced
else:
    _active = "cython" if "cython" in _IMPLS else "numpy"


def available_backends():
    return sorted(_IMPLS)


def active_backend():
    return _active


def set_backend(name):
    global _active
    if name not in _IMPLS:
        raise ValueError(
            f"unknown backend {name!r}; choices: {', '.join(sorted(_IMPLS))}"
        )
    _active = name


def segment_phase(amps, dim, stride, phases):
    return _IMPLS[_active].segment_phase(amps, dim, stride, phases)


def segment_translate(amps, dim, stride, shift):
    return _IMPLS[_active].segment_translate(amps, dim, stride, shift)


def segment_reflect(amps, dim, stride, phases):
    return _IMPLS[_active].segment_reflect(amps, dim, stride, phases)


def oracle_shift(amps, n_ctl, stride_ctl, n_anc, stride_anc, shifts):
    return _IMPLS[_active].oracle_shift(
        amps, n_ctl, stride_ctl, n_anc, stride_anc, shifts
    )

"""Primitive operators on a single modular segment.

Conventions for a segment of size M with w = exp(2*pi*i/M):

- ``fourier``: matrix entry (z, y) = w**(y*z) / sqrt(M), so columns are the
  plus-sign Fourier modes.
- ``translate(z)``: |y> -> |y + z mod M>.
- ``phase_by_value(k)``: |y> -> w**(k*y) |y>.
- ``reflect_phase(k)``: |y> -> w**(k*y) |-y mod M>.  Hermitian and
  self-inverse, and equal to fourier @ translate(k)^dagger @ fourier.

Root-of-unity exponents are reduced mod M before exponentiation so results
are reproducible across parameter ranges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .state import StateVector

FOURIER = "fourier"
FOURIER_INVERSE = "fourier-inverse"
TRANSLATE = "translate"
PHASE_BY_VALUE = "phase-by-value"
REFLECT_PHASE = "reflect-phase"

_KINDS = (FOURIER, FOURIER_INVERSE, TRANSLATE, PHASE_BY_VALUE, REFLECT_PHASE)


def omega(modulus: int, exponent: int = 1) -> complex:
    """exp(2*pi*i*exponent/modulus) with the exponent reduced mod modulus."""
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    return complex(np.exp(2j * np.pi * (exponent % modulus) / modulus))


def omega_powers(modulus: int, k: int) -> np.ndarray:
    """Vector of w**(k*y) for y in range(modulus), exponents reduced mod modulus."""
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    exps = (k * np.arange(modulus, dtype=np.int64)) % modulus
    return np.exp(2j * np.pi * exps / modulus)


def fourier_matrix(modulus: int) -> np.ndarray:
    exps = np.outer(np.arange(modulus), np.arange(modulus)) % modulus
    return np.exp(2j * np.pi * exps / modulus) / np.sqrt(modulus)


def translate_matrix(modulus: int, shift: int) -> np.ndarray:
    mat = np.zeros((modulus, modulus), dtype=np.complex128)
    y = np.arange(modulus)
    mat[(y + shift) % modulus, y] = 1.0
    return mat


def phase_by_value_matrix(modulus: int, k: int) -> np.ndarray:
    return np.diag(omega_powers(modulus, k))


def reflect_phase_matrix(modulus: int, k: int) -> np.ndarray:
    mat = np.zeros((modulus, modulus), dtype=np.complex128)
    y = np.arange(modulus)
    mat[(-y) % modulus, y] = omega_powers(modulus, k)
    return mat


@dataclass(frozen=True)
class PrimitiveOp:
    """One primitive operator: a kind, a segment size, an integer parameter.

    The parameter is the shift for ``translate`` and the phase multiplier for
    the two phase kinds; the Fourier kinds ignore it.  It is stored reduced
    mod ``dim``.
    """

    kind: str
    dim: int
    param: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown primitive kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError(f"segment size must be positive, got {self.dim}")
        object.__setattr__(self, "param", int(self.param) % self.dim)

    @staticmethod
    def fourier(dim: int) -> "PrimitiveOp":
        return PrimitiveOp(FOURIER, dim)

    @staticmethod
    def fourier_inverse(dim: int) -> "PrimitiveOp":
        return PrimitiveOp(FOURIER_INVERSE, dim)

    @staticmethod
    def translate(dim: int, shift: int) -> "PrimitiveOp":
        return PrimitiveOp(TRANSLATE, dim, shift)

    @staticmethod
    def phase_by_value(dim: int, k: int) -> "PrimitiveOp":
        return PrimitiveOp(PHASE_BY_VALUE, dim, k)

    @staticmethod
    def reflect_phase(dim: int, k: int) -> "PrimitiveOp":
        return PrimitiveOp(REFLECT_PHASE, dim, k)

    def inverse(self) -> "PrimitiveOp":
        if self.kind == FOURIER:
            return PrimitiveOp(FOURIER_INVERSE, self.dim)
        if self.kind == FOURIER_INVERSE:
            return PrimitiveOp(FOURIER, self.dim)
        if self.kind == REFLECT_PHASE:
            return self
        return PrimitiveOp(self.kind, self.dim, -self.param)


def build(op: PrimitiveOp) -> np.ndarray:
    """Dense matrix of a primitive operator."""
    if op.kind == FOURIER:
        return fourier_matrix(op.dim)
    if op.kind == FOURIER_INVERSE:
        return fourier_matrix(op.dim).conj().T
    if op.kind == TRANSLATE:
        return translate_matrix(op.dim, op.param)
    if op.kind == PHASE_BY_VALUE:
        return phase_by_value_matrix(op.dim, op.param)
    return reflect_phase_matrix(op.dim, op.param)


def apply_primitive(state: StateVector, segment: str, op: PrimitiveOp) -> StateVector:
    """Apply a primitive to one segment of a state.

    Translations and the two phase kinds run through the kernel backend in
    O(total dimension); the Fourier kinds use the FFT along the segment
    axis (norm="ortho", plus-sign convention), which matches the dense
    matrix entrywise well inside 1e-12 for any segment size.
    """
    dim = state.layout.dim(segment)
    if dim != op.dim:
        raise ValueError(
            f"primitive of size {op.dim} does not fit segment {segment!r} of size {dim}"
        )
    stride = state.layout.stride(segment)
    if op.kind in (FOURIER, FOURIER_INVERSE):
        view = state.amps.reshape(-1, dim, stride)
        fft = np.fft.ifft if op.kind == FOURIER else np.fft.fft
        out = fft(view, axis=1, norm="ortho")
        return StateVector._wrap(state.layout, np.ascontiguousarray(out.reshape(-1)))
    if op.kind == TRANSLATE:
        out = backend.segment_translate(state.amps, dim, stride, op.param)
    elif op.kind == PHASE_BY_VALUE:
        out = backend.segment_phase(state.amps, dim, stride, omega_powers(dim, op.param))
    else:
        out = backend.segment_reflect(state.amps, dim, stride, omega_powers(dim, op.param))
    return StateVector._wrap(state.layout, out)

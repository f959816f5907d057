"""Tabulated functions and the translation oracle.

An integer table f: range(N) -> range(M) acts on a two-segment register as
the permutation |x, y> -> |x, y + sign*f(x) mod M>.  Real-valued tables map
into [0, 1) and exist to be quantized onto a power-of-two modulus.

Table file format (UTF-8): ``#`` starts a comment, blank lines are skipped.
The first data line is a header, either ``N M`` (integer table) or
``N real``.  Exactly N data lines follow, each ``x y`` with every x in
range(N) appearing once, in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .state import StateVector


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """Total function from range(domain_size) to range(modulus)."""

    domain_size: int
    modulus: int
    values: np.ndarray

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError(f"domain size must be positive, got {self.domain_size}")
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        vals = np.array(self.values, dtype=np.int64, copy=True)
        if vals.shape != (self.domain_size,):
            raise ValueError(
                f"expected {self.domain_size} values, got shape {vals.shape}"
            )
        bad = np.flatnonzero((vals < 0) | (vals >= self.modulus))
        if bad.size:
            x = int(bad[0])
            raise ValueError(
                f"value {int(vals[x])} at x={x} is outside range({self.modulus})"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return (
            self.domain_size == other.domain_size
            and self.modulus == other.modulus
            and bool(np.array_equal(self.values, other.values))
        )

    def serialize(self) -> str:
        lines = [f"{self.domain_size} {self.modulus}"]
        lines += [f"{x} {int(v)}" for x, v in enumerate(self.values)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class RealFunctionTable:
    """Total function from range(domain_size) into the half-open unit interval."""

    domain_size: int
    values: np.ndarray

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError(f"domain size must be positive, got {self.domain_size}")
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.shape != (self.domain_size,):
            raise ValueError(
                f"expected {self.domain_size} values, got shape {vals.shape}"
            )
        bad = np.flatnonzero(~((vals >= 0.0) & (vals < 1.0)))
        if bad.size:
            x = int(bad[0])
            raise ValueError(f"value {vals[x]!r} at x={x} is outside [0, 1)")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> float:
        return float(self.values[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RealFunctionTable):
            return NotImplemented
        return self.domain_size == other.domain_size and bool(
            np.array_equal(self.values, other.values)
        )

    def serialize(self) -> str:
        lines = [f"{self.domain_size} real"]
        lines += [f"{x} {v!r}" for x, v in enumerate(self.values.tolist())]
        return "\n".join(lines) + "\n"


def constant_table(domain_size: int, modulus: int, value: int) -> FunctionTable:
    return FunctionTable(
        domain_size, modulus, np.full(domain_size, value, dtype=np.int64)
    )


def delta_table(domain_size: int, mark: int) -> FunctionTable:
    """Indicator of a single point: f(x) = 1 iff x == mark, modulus 2."""
    if not 0 <= mark < domain_size:
        raise ValueError(f"mark {mark} outside range({domain_size})")
    vals = np.zeros(domain_size, dtype=np.int64)
    vals[mark] = 1
    return FunctionTable(domain_size, 2, vals)


def random_table(domain_size: int, modulus: int, seed: int) -> FunctionTable:
    rng = np.random.default_rng(seed)
    return FunctionTable(
        domain_size, modulus, rng.integers(0, modulus, size=domain_size)
    )


def quantize(table: RealFunctionTable, m_bits: int) -> FunctionTable:
    """Truncate to m_bits: f~(x) = floor(f(x) * 2**m_bits), clamped below 2**m_bits.

    The induced phase error satisfies
    |exp(2*pi*i*f~(x)/2**m_bits) - exp(2*pi*i*f(x))| <= 2*pi*2**-m_bits.
    """
    if m_bits < 1:
        raise ValueError(f"m_bits must be at least 1, got {m_bits}")
    modulus = 1 << m_bits
    vals = np.floor(table.values * modulus).astype(np.int64)
    vals = np.minimum(vals, modulus - 1)
    return FunctionTable(table.domain_size, modulus, vals)


@dataclass
class OracleCounter:
    """Tallies oracle applications and the sign of each."""

    signs: list = field(default_factory=list)

    @property
    def calls(self) -> int:
        return len(self.signs)

    def record(self, sign: int):
        self.signs.append(sign)


def apply_oracle(
    state: StateVector,
    control: str,
    ancilla: str,
    table: FunctionTable,
    sign: int = 1,
    counter: OracleCounter | None = None,
) -> StateVector:
    """|x, y> -> |x, y + sign*f(x) mod M> on the named segments."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if control == ancilla:
        raise ValueError("control and ancilla must be distinct segments")
    layout = state.layout
    n = layout.dim(control)
    m = layout.dim(ancilla)
    if n != table.domain_size:
        raise ValueError(
            f"table domain {table.domain_size} does not match "
            f"segment {control!r} of size {n}"
        )
    if m != table.modulus:
        raise ValueError(
            f"table modulus {table.modulus} does not match "
            f"segment {ancilla!r} of size {m}"
        )
    shifts = (sign * table.values) % m
    out = backend.oracle_shift(
        state.amps, n, layout.stride(control), m, layout.stride(ancilla), shifts
    )
    if counter is not None:
        counter.record(sign)
    return StateVector._wrap(layout, out)


def oracle_matrix(table: FunctionTable, sign: int = 1) -> np.ndarray:
    """Dense (N*M, N*M) matrix of the oracle on a [control, ancilla] layout.

    Cross-check only; quadratic in the joint dimension.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    n, m = table.domain_size, table.modulus
    mat = np.zeros((n * m, n * m), dtype=np.complex128)
    for x in range(n):
        shift = (sign * int(table.values[x])) % m
        for y in range(m):
            mat[x * m + (y + shift) % m, x * m + y] = 1.0
    return mat


class TableParseError(ValueError):
    """Raised on malformed table text; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_table(text: str) -> FunctionTable | RealFunctionTable:
    """Parse the table file format; see the module docstring."""
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        data = raw.split("#", 1)[0].strip()
        if not data:
            continue
        tokens = data.split()
        if header is None:
            header = _parse_header(lineno, tokens)
            continue
        rows.append((lineno, tokens))
    if header is None:
        raise TableParseError(1, "missing header line")

    domain_size, modulus = header
    real = modulus is None
    values = [None] * domain_size
    for lineno, tokens in rows:
        if len(tokens) != 2:
            raise TableParseError(lineno, f"expected 'x y', got {' '.join(tokens)!r}")
        x = _parse_int(lineno, tokens[0], "x")
        if not 0 <= x < domain_size:
            raise TableParseError(lineno, f"x={x} outside range({domain_size})")
        if values[x] is not None:
            raise TableParseError(lineno, f"duplicate entry for x={x}")
        if real:
            try:
                y = float(tokens[1])
            except ValueError:
                raise TableParseError(lineno, f"bad real value {tokens[1]!r}") from None
            if not 0.0 <= y < 1.0:
                raise TableParseError(lineno, f"value {y!r} outside [0, 1)")
        else:
            y = _parse_int(lineno, tokens[1], "y")
            if not 0 <= y < modulus:
                raise TableParseError(lineno, f"value {y} outside range({modulus})")
        values[x] = y

    missing = [x for x, v in enumerate(values) if v is None]
    if missing:
        last = rows[-1][0] if rows else 1
        raise TableParseError(last, f"missing entry for x={missing[0]}")
    if real:
        return RealFunctionTable(domain_size, np.array(values, dtype=np.float64))
    return FunctionTable(domain_size, modulus, np.array(values, dtype=np.int64))


def load_table(path) -> FunctionTable | RealFunctionTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table(fh.read())


def _parse_header(lineno, tokens):
    if len(tokens) != 2:
        raise TableParseError(lineno, f"bad header {' '.join(tokens)!r}; expected 'N M' or 'N real'")
    n = _parse_int(lineno, tokens[0], "N")
    if n < 1:
        raise TableParseError(lineno, f"domain size must be positive, got {n}")
    if tokens[1] == "real":
        return n, None
    m = _parse_int(lineno, tokens[1], "M")
    if m < 1:
        raise TableParseError(lineno, f"modulus must be positive, got {m}")
    return n, m


def _parse_int(lineno, token, name):
    try:
        return int(token)
    except ValueError:
        raise TableParseError(lineno, f"bad integer for {name}: {token!r}") from None

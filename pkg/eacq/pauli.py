"""
Pauli Operators with Phase Tracking.

A ``PauliOp`` on ``n`` qubits is ``i^phase . Z^z X^x`` where ``(z|x)`` is a
symplectic vector and ``phase`` is an exponent mod 4.  The product rule
follows from ``X Z = -Z X`` on each qubit:

    (i^a Z^z X^x)(i^b Z^z' X^x') = i^(a + b + 2 x.z') Z^(z+z') X^(x+x')

**Hermitian representative:**  ``from_symplectic`` picks the phase
``-|z AND x|`` mod 4 so that every ``(1,1)`` position reads as ``Y``
(``Y = -i Z X``).  Printed strings carry a prefix relative to that
representative: none, ``-``, ``i`` or ``-i``.  So ``Z . X`` prints as
``iY``.

Grammar accepted by ``parse``: an optional ``+``/``-`` (or ``i``/``-i``)
prefix followed by at least one of ``I``, ``X``, ``Y``, ``Z``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from eacq.gf2core import (
    WidthMismatchError,
    as_bitvec,
    num_qubits,
    symplectic_product,
)


class PauliParseError(ValueError):
    """Raised when a Pauli string does not follow the I/X/Y/Z grammar."""
    pass


_LETTERS = {(0, 0): "I", (1, 0): "Z", (0, 1): "X", (1, 1): "Y"}
_BITS = {letter: bits for bits, letter in _LETTERS.items()}
_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}


def hermitian_phase(v: np.ndarray) -> int:
    """Phase exponent making ``i^phase Z^z X^x`` Hermitian."""
    v = np.asarray(v)
    n = num_qubits(v)
    overlap = int(np.count_nonzero(v[:n] & v[n:]))
    return (-overlap) % 4


@dataclass(frozen=True, eq=False)
class PauliOp:
    """``i^phase . Z^z X^x`` with ``v = (z|x)``."""

    phase: int
    v: np.ndarray

    def __post_init__(self) -> None:
        vector = as_bitvec(self.v)
        num_qubits(vector)
        vector.setflags(write=False)
        object.__setattr__(self, "v", vector)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return self.v.size // 2

    @property
    def z(self) -> np.ndarray:
        return self.v[: self.n]

    @property
    def x(self) -> np.ndarray:
        return self.v[self.n:]

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.z | self.x))

    @property
    def sign_bit(self) -> int:
        """1 when the operator is minus its Hermitian representative.

        Raises:
            ValueError: If the operator is not Hermitian (prefix ``i``).
        """
        offset = (self.phase - hermitian_phase(self.v)) % 4
        if offset % 2:
            raise ValueError(f"{format_pauli(self)} is not Hermitian")
        return offset // 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOp):
            return NotImplemented
        return self.phase == other.phase and np.array_equal(self.v, other.v)

    def __hash__(self) -> int:
        return hash((self.phase, self.v.tobytes()))

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOp('{format_pauli(self)}')"


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def from_symplectic(v: np.ndarray, sign: int = 0) -> PauliOp:
    """Hermitian Pauli operator for ``v``, negated when ``sign`` is 1."""
    v = as_bitvec(v)
    return PauliOp(phase=hermitian_phase(v) + 2 * (sign & 1), v=v)


def identity(n: int) -> PauliOp:
    return PauliOp(phase=0, v=np.zeros(2 * n, dtype=np.uint8))


def parse_pauli(text: str) -> PauliOp:
    """Parse a Pauli string such as ``"ZZIZZIZZI"`` or ``"-Y"``.

    Raises:
        PauliParseError: On an empty string or an illegal character.
    """
    raw = text.strip().replace("−", "-")
    letters = raw.lstrip("+-i")
    prefix = raw[: len(raw) - len(letters)]
    if prefix not in _PREFIX_PHASE:
        raise PauliParseError(f"Illegal sign prefix {prefix!r} in {text!r}")
    if not letters:
        raise PauliParseError(f"Empty Pauli string: {text!r}")
    bad = sorted({ch for ch in letters if ch not in _BITS})
    if bad:
        raise PauliParseError(f"Illegal character(s) {bad} in Pauli string {text!r}")
    z = [_BITS[ch][0] for ch in letters]
    x = [_BITS[ch][1] for ch in letters]
    v = np.array(z + x, dtype=np.uint8)
    return PauliOp(phase=hermitian_phase(v) + _PREFIX_PHASE[prefix], v=v)


def format_pauli(op: PauliOp) -> str:
    """Render an operator as prefix plus I/X/Y/Z letters."""
    offset = (op.phase - hermitian_phase(op.v)) % 4
    letters = "".join(
        _LETTERS[(int(zb), int(xb))] for zb, xb in zip(op.z, op.x)
    )
    return _PREFIX[offset] + letters


def pauli_string(v: np.ndarray) -> str:
    """Letters of the Hermitian operator for a symplectic vector."""
    return format_pauli(from_symplectic(v))


# ---------------------------------------------------------------------------
# Group operations
# ---------------------------------------------------------------------------

def _check_same_n(a: PauliOp, b: PauliOp) -> None:
    if a.n != b.n:
        raise WidthMismatchError(f"Pauli operators act on {a.n} and {b.n} qubits")


def multiply(a: PauliOp, b: PauliOp) -> PauliOp:
    """Operator product ``a . b`` with exact phase."""
    _check_same_n(a, b)
    cross = int(np.count_nonzero(a.x & b.z))
    return PauliOp(phase=a.phase + b.phase + 2 * cross, v=a.v ^ b.v)


def product(ops: list[PauliOp], n: int) -> PauliOp:
    """Ordered product of ``ops`` (identity on ``n`` qubits when empty)."""
    result = identity(n)
    for op in ops:
        result = multiply(result, op)
    return result


def commutes(a: PauliOp, b: PauliOp) -> bool:
    _check_same_n(a, b)
    return symplectic_product(a.v, b.v) == 0


def weight(op: PauliOp) -> int:
    return op.weight

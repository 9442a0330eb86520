"""
Error Correction: Syndromes, Correctability, Decoding and Distance.

**Syndromes.**  Bit ``j`` of the syndrome of an error ``v`` (a symplectic
vector on the sender's ``n`` qubits) is the symplectic product of row
``j`` of ``G = H . Ĥ`` with ``v``.  The receiver's qubits are noiseless.

**Correctability.**  Two errors with equal syndromes are harmless to each
other when their sum lies in the isotropic part of ``rowspace(Ĥ)``: in the
isotropic part of ``S_Q`` it changes nothing at all, in the isotropic
part of ``S_C`` it leaves the classical codeword signs alone.  Anything
else with a matching syndrome is uncorrectable.

**Distance.**  The minimum weight of a nonzero ``v`` with zero syndrome
that lies outside ``rowspace(radical_basis)``.  Small searches enumerate
candidates directly; large ones sort the packed syndromes of every error
of weight at most ``ceil(W/2)`` and check equal-syndrome runs pairwise,
which covers every violation of weight up to ``2 ceil(W/2)``.

**Enumeration order.**  Errors are listed by weight, then by the
lexicographic order of their ``(z|x)`` bits.  Decoder tables keep the
first error seen for each syndrome, so ties resolve to the
lexicographically smallest minimum-weight error.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations, product
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from eacq.code import EacqCode
from eacq.codefile import code_hash
from eacq.gf2core import (
    RowspaceReducer,
    WidthMismatchError,
    as_bitmat,
    as_bitvec,
    symplectic_products,
    to_bitstring,
)
from eacq.journal import JournalEventType, RunJournal
from eacq.models import DistanceReport, ErrorClass, SearchStrategy
from eacq.pauli import PauliOp, PauliParseError, from_symplectic, format_pauli, parse_pauli, pauli_string

ErrorLike = Union[PauliOp, np.ndarray, str, Iterable[int]]

DEFAULT_DIRECT_LIMIT = 2_000_000

# Single-qubit Pauli labels 0, 1, 2 = X, Y, Z as (z, x) bits
_Z_BIT = np.array([0, 1, 1], dtype=np.uint8)
_X_BIT = np.array([1, 1, 0], dtype=np.uint8)


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class UncorrectableErrorSet(Exception):
    """Raised when a requested error set contains an uncorrectable pair."""

    def __init__(self, witness: tuple[np.ndarray, np.ndarray], message: str = "") -> None:
        self.witness = witness
        first, second = (pauli_string(v) for v in witness)
        super().__init__(
            message
            or f"Errors {first} and {second} share a syndrome but differ by an operator "
               "outside the isotropic stabilizer"
        )


class DecodeTableError(ValueError):
    """Raised on a malformed decoder table or one built for another code."""
    pass


# ---------------------------------------------------------------------------
# Syndromes
# ---------------------------------------------------------------------------

def error_vector(code: EacqCode, error: ErrorLike) -> np.ndarray:
    """Symplectic vector of an error on the sender's qubits.

    Raises:
        WidthMismatchError: If the error does not act on ``n`` qubits.
    """
    if isinstance(error, PauliOp):
        v = error.v
    elif isinstance(error, str) and any(ch in "IXYZ" for ch in error):
        v = parse_pauli(error).v
    else:
        v = as_bitvec(error)
    if v.size != 2 * code.n:
        raise WidthMismatchError(
            f"Error has width {v.size}; the code acts on {code.n} qubits (width {2 * code.n})"
        )
    return v


def syndrome(code: EacqCode, error: ErrorLike) -> np.ndarray:
    """Syndrome bits of ``error`` with respect to the ``S_Q`` generators."""
    v = error_vector(code, error)
    return symplectic_products(code.g_quantum, v)[:, 0]


def syndromes(code: EacqCode, errors: np.ndarray) -> np.ndarray:
    """Syndromes of stacked errors, one row each."""
    errors = as_bitmat(errors, ncols=2 * code.n)
    if errors.shape[1] != 2 * code.n:
        raise WidthMismatchError(
            f"Errors have width {errors.shape[1]}; expected {2 * code.n}"
        )
    return symplectic_products(errors, code.g_quantum)


def classify_pair(code: EacqCode, e1: ErrorLike, e2: ErrorLike) -> ErrorClass:
    """Relation between two errors under ``code``."""
    v1 = error_vector(code, e1)
    v2 = error_vector(code, e2)
    if not np.array_equal(syndrome(code, v1), syndrome(code, v2)):
        return ErrorClass.DISTINGUISHABLE
    difference = v1 ^ v2
    width = 2 * code.n
    if RowspaceReducer(code.quantum_radical_basis, width=width).contains(difference)[0]:
        return ErrorClass.DEGENERATE_QUANTUM
    if RowspaceReducer(code.radical_basis, width=width).contains(difference)[0]:
        return ErrorClass.DEGENERATE_CLASSICAL
    return ErrorClass.UNCORRECTABLE


def is_correctable_set(
    code: EacqCode, errors: Iterable[ErrorLike] | np.ndarray
) -> tuple[bool, Optional[tuple[np.ndarray, np.ndarray]]]:
    """Check that no pair of ``errors`` is uncorrectable.

    Errors are grouped by syndrome; each is compared with the first member
    of its group, which decides every pair in the group since the
    isotropic part is a subspace.

    Returns:
        ``(True, None)`` or ``(False, (first, offending))``.
    """
    if isinstance(errors, np.ndarray):
        stacked = as_bitmat(np.atleast_2d(errors), ncols=2 * code.n)
    else:
        vectors = [error_vector(code, e) for e in errors]
        if not vectors:
            return (True, None)
        stacked = np.vstack(vectors)
    if stacked.shape[0] == 0:
        return (True, None)

    keys = syndromes(code, stacked)
    first: dict[bytes, int] = {}
    representative = np.empty(stacked.shape[0], dtype=np.int64)
    for i, row in enumerate(keys):
        representative[i] = first.setdefault(row.tobytes(), i)
    differences = stacked ^ stacked[representative]
    inside = RowspaceReducer(code.radical_basis, width=2 * code.n).contains(differences)
    offending = np.flatnonzero(~inside)
    if offending.size:
        i = int(offending[0])
        return (False, (stacked[representative[i]].copy(), stacked[i].copy()))
    return (True, None)


def condition_set_mask(code: EacqCode, vectors: np.ndarray, which: int) -> np.ndarray:
    """Membership of ``vectors`` in one of the three correctable-error sets.

    * ``1`` -- detected by ``S_Q`` or inside the isotropic part of ``S_Q``
      (the condition of the code ``drop_classical(code)``).
    * ``2`` -- detected by ``S_Q`` or inside the isotropic part of
      ``<S_Q, S_C>`` (this code).
    * ``3`` -- detected by ``<S_Q, S_C>`` or inside its isotropic part
      (the condition of ``strip(code)``).

    Each set contains the previous one.
    """
    vectors = as_bitmat(np.atleast_2d(vectors), ncols=2 * code.n)
    width = 2 * code.n
    if which == 1:
        checks, isotropic = code.g_quantum, code.quantum_radical_basis
    elif which == 2:
        checks, isotropic = code.g_quantum, code.radical_basis
    elif which == 3:
        checks, isotropic = code.h_quantum, code.radical_basis
    else:
        raise ValueError(f"Condition set must be 1, 2 or 3, got {which}")
    detected = symplectic_products(vectors, checks).any(axis=1)
    return detected | RowspaceReducer(isotropic, width=width).contains(vectors)


# ---------------------------------------------------------------------------
# Error enumeration
# ---------------------------------------------------------------------------

def _codes_of_weight(n: int, w: int) -> np.ndarray:
    """All weight-``w`` errors as rows of ``qubit * 3 + label`` codes."""
    if w == 0:
        return np.zeros((1, 0), dtype=np.int32)
    supports = np.array(list(combinations(range(n), w)), dtype=np.int32).reshape(-1, w)
    labels = np.array(list(product(range(3), repeat=w)), dtype=np.int32).reshape(-1, w)
    return (supports[:, None, :] * 3 + labels[None, :, :]).reshape(-1, w)


def _codes_to_vectors(codes: np.ndarray, n: int) -> np.ndarray:
    """Symplectic vectors for rows of codes; ``-1`` entries are padding."""
    count = codes.shape[0]
    vectors = np.zeros((count, 2 * n), dtype=np.uint8)
    if codes.size == 0:
        return vectors
    valid = codes >= 0
    qubit = np.where(valid, codes // 3, 0)
    label = np.where(valid, codes % 3, 0)
    rows = np.broadcast_to(np.arange(count)[:, None], codes.shape)
    z_hit = valid & (_Z_BIT[label] == 1)
    x_hit = valid & (_X_BIT[label] == 1)
    vectors[rows[z_hit], qubit[z_hit]] = 1
    vectors[rows[x_hit], n + qubit[x_hit]] = 1
    return vectors


def _lexicographic(vectors: np.ndarray) -> np.ndarray:
    if vectors.shape[0] <= 1:
        return vectors
    return vectors[np.lexsort(vectors.T[::-1])]


def errors_of_weight(n: int, w: int) -> np.ndarray:
    """All errors of weight exactly ``w``, in lexicographic ``(z|x)`` order."""
    return _lexicographic(_codes_to_vectors(_codes_of_weight(n, w), n))


def enumerate_errors(n: int, max_weight: int) -> np.ndarray:
    """All errors of weight at most ``max_weight`` in canonical order."""
    if not 0 <= max_weight <= n:
        raise ValueError(f"max_weight must lie in [0, {n}], got {max_weight}")
    return np.vstack([errors_of_weight(n, w) for w in range(max_weight + 1)])


def error_weights(vectors: np.ndarray) -> np.ndarray:
    vectors = np.atleast_2d(vectors)
    n = vectors.shape[1] // 2
    return np.count_nonzero(vectors[:, :n] | vectors[:, n:], axis=1)


# ---------------------------------------------------------------------------
# Decoder tables
# ---------------------------------------------------------------------------

class DecodeTable:
    """Syndrome lookup table mapping syndromes to recovery operators.

    Keys are syndrome bit strings; every recovery has weight at most ``t``
    and reproduces its key as syndrome.
    """

    def __init__(
        self,
        t: int,
        n: int,
        num_checks: int,
        entries: dict[str, PauliOp],
        code_hash: str = "",
    ) -> None:
        self.t = t
        self.n = n
        self.num_checks = num_checks
        self.code_hash = code_hash
        self._entries = dict(entries)

    def decode(self, syndrome_bits) -> PauliOp:
        """Recovery for a syndrome.

        Raises:
            KeyError: If no error of weight at most ``t`` has this syndrome.
        """
        key = syndrome_bits if isinstance(syndrome_bits, str) else to_bitstring(syndrome_bits)
        if key not in self._entries:
            raise KeyError(f"Syndrome {key or '-'} is not covered by the weight-{self.t} table")
        return self._entries[key]

    def items(self):
        return self._entries.items()

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __repr__(self) -> str:
        return f"DecodeTable(t={self.t}, entries={len(self)}, n={self.n})"


def decode(table: DecodeTable, syndrome_bits) -> PauliOp:
    return table.decode(syndrome_bits)


def build_decoder(
    code: EacqCode, t: int, *, journal: Optional[RunJournal] = None
) -> DecodeTable:
    """Minimum-weight syndrome table for all errors of weight at most ``t``.

    Raises:
        UncorrectableErrorSet: If the weight-``t`` errors are not a
            correctable set; the exception carries the witness pair.
    """
    started = time.perf_counter()
    errors = enumerate_errors(code.n, t)
    correctable, witness = is_correctable_set(code, errors)
    if not correctable:
        raise UncorrectableErrorSet(witness)

    entries: dict[str, PauliOp] = {}
    for vector, bits in zip(errors, syndromes(code, errors)):
        key = to_bitstring(bits)
        if key not in entries:
            entries[key] = from_symplectic(vector)
    table = DecodeTable(
        t=t, n=code.n, num_checks=code.num_checks, entries=entries, code_hash=code_hash(code)
    )
    if journal is not None:
        journal.record(
            JournalEventType.DECODER_BUILT,
            subject=code.bracket(),
            metadata={
                "t": t,
                "errors": int(errors.shape[0]),
                "entries": len(table),
                "code_hash": table.code_hash,
                "seconds": round(time.perf_counter() - started, 6),
            },
        )
    return table


TABLE_HEADER = "eacq-table v1"


def dump_decode_table(table: DecodeTable) -> str:
    lines = [TABLE_HEADER, f"code-hash {table.code_hash}", f"t {table.t}"]
    for key, recovery in table.items():
        lines.append(f"{key or '-'} {format_pauli(recovery)}")
    return "\n".join(lines) + "\n"


def write_decode_table(table: DecodeTable, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dump_decode_table(table))
    return path


def parse_decode_table(
    text: str, code: Optional[EacqCode] = None
) -> DecodeTable:
    """Parse a serialized table, optionally checking it against ``code``.

    Raises:
        DecodeTableError: On a malformed file, a hash mismatch, or an entry
            whose recovery does not reproduce its syndrome.
    """
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if len(lines) < 3 or lines[0] != TABLE_HEADER:
        raise DecodeTableError(f"line 1: expected '{TABLE_HEADER}' header")
    tag, _, stored_hash = lines[1].partition(" ")
    if tag != "code-hash":
        raise DecodeTableError("line 2: expected 'code-hash <hex>'")
    tag, _, t_text = lines[2].partition(" ")
    if tag != "t" or not t_text.strip().isdigit():
        raise DecodeTableError("line 3: expected 't <int>'")
    t = int(t_text)
    stored_hash = stored_hash.strip()

    if code is not None and stored_hash != code_hash(code):
        raise DecodeTableError(
            "Decoder table was built for a different code "
            f"(table hash {stored_hash[:12]}..., code hash {code_hash(code)[:12]}...)"
        )

    entries: dict[str, PauliOp] = {}
    widths = set()
    for number, line in enumerate(lines[3:], start=4):
        parts = line.split()
        if len(parts) != 2:
            raise DecodeTableError(f"line {number}: expected '<syndrome> <pauli>'")
        key = "" if parts[0] == "-" else parts[0]
        if any(ch not in "01" for ch in key):
            raise DecodeTableError(f"line {number}: syndrome must be over {{0,1}}")
        try:
            recovery = parse_pauli(parts[1])
        except PauliParseError as exc:
            raise DecodeTableError(f"line {number}: {exc}") from exc
        if recovery.weight > t:
            raise DecodeTableError(f"line {number}: recovery weight exceeds t = {t}")
        widths.add((len(key), recovery.n))
        if code is not None:
            if recovery.n != code.n or to_bitstring(syndrome(code, recovery)) != key:
                raise DecodeTableError(
                    f"line {number}: recovery {parts[1]} does not produce syndrome {parts[0]}"
                )
        entries[key] = recovery
    if len(widths) > 1:
        raise DecodeTableError("Entries have inconsistent syndrome or qubit counts")
    num_checks, n = widths.pop() if widths else (
        (code.num_checks, code.n) if code is not None else (0, 0)
    )
    return DecodeTable(t=t, n=n, num_checks=num_checks, entries=entries, code_hash=stored_hash)


def read_decode_table(
    path: str | Path,
    code: Optional[EacqCode] = None,
    *,
    journal: Optional[RunJournal] = None,
) -> DecodeTable:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Decoder table not found: {path}")
    table = parse_decode_table(path.read_text(), code)
    if journal is not None:
        journal.record(
            JournalEventType.TABLE_LOADED,
            subject=str(path),
            metadata={"t": table.t, "entries": len(table), "code_hash": table.code_hash},
        )
    return table


# ---------------------------------------------------------------------------
# Distance search
# ---------------------------------------------------------------------------

def _pack_bits(bits: np.ndarray, words: int) -> np.ndarray:
    """Pack rows of bits into ``words`` 64-bit integers (bit j -> word j//64)."""
    packed = np.zeros((bits.shape[0], words), dtype=np.uint64)
    for w in range(words):
        chunk = bits[:, 64 * w: 64 * (w + 1)].astype(np.uint64)
        if chunk.shape[1]:
            shifts = np.arange(chunk.shape[1], dtype=np.uint64)
            packed[:, w] = np.bitwise_or.reduce(chunk << shifts, axis=1)
    return packed


def _single_qubit_keys(code: EacqCode) -> np.ndarray:
    """Packed syndromes of X, Y, Z on every qubit, plus a zero padding row.

    ``X_q`` is detected by the z-column ``q`` of ``G``, ``Z_q`` by the
    x-column, ``Y_q`` by both.
    """
    n = code.n
    g = code.g_quantum
    z_cols = g[:, :n].T
    x_cols = g[:, n:].T
    per_qubit = np.stack([z_cols, z_cols ^ x_cols, x_cols], axis=1).reshape(3 * n, -1)
    words = max(1, math.ceil(code.num_checks / 64))
    return np.vstack([_pack_bits(per_qubit, words), np.zeros((1, words), dtype=np.uint64)])


def _error_keys(single: np.ndarray, codes: np.ndarray) -> np.ndarray:
    padding = single.shape[0] - 1
    index = np.where(codes < 0, padding, codes)
    keys = np.zeros((codes.shape[0], single.shape[1]), dtype=np.uint64)
    for k in range(codes.shape[1]):
        keys ^= single[index[:, k]]
    return keys


class _Violation:
    """Best violation found so far: minimum weight, then lexicographic."""

    def __init__(self) -> None:
        self.weight: Optional[int] = None
        self.vector: Optional[np.ndarray] = None

    def offer(self, vectors: np.ndarray) -> None:
        if vectors.shape[0] == 0:
            return
        weights = error_weights(vectors)
        lightest = vectors[weights == weights.min()]
        candidate = _lexicographic(lightest)[0]
        weight = int(weights.min())
        if (
            self.weight is None
            or weight < self.weight
            or (weight == self.weight and tuple(candidate) < tuple(self.vector))
        ):
            self.weight = weight
            self.vector = candidate.copy()

    def merge(self, other: "_Violation") -> None:
        if other.vector is not None:
            self.offer(other.vector[None, :])


def _direct_search(code: EacqCode, max_weight: int, reducer: RowspaceReducer) -> tuple[_Violation, int]:
    single = _single_qubit_keys(code)
    found = _Violation()
    examined = 0
    for w in range(1, max_weight + 1):
        codes = _codes_of_weight(code.n, w)
        examined += codes.shape[0]
        silent = ~_error_keys(single, codes).any(axis=1)
        candidates = _codes_to_vectors(codes[silent], code.n)
        found.offer(candidates[~reducer.contains(candidates)])
        if found.weight is not None:
            break
    return found, examined


def _scan_runs(
    runs: list[np.ndarray], codes: np.ndarray, n: int, reducer: RowspaceReducer
) -> _Violation:
    found = _Violation()
    for members in runs:
        vectors = _codes_to_vectors(codes[members], n)
        for i in range(len(members) - 1):
            sums = vectors[i + 1:] ^ vectors[i]
            sums = sums[sums.any(axis=1)]
            if sums.shape[0]:
                found.offer(sums[~reducer.contains(sums)])
    return found


def _collision_search(
    code: EacqCode, max_weight: int, reducer: RowspaceReducer, threads: int
) -> tuple[_Violation, int, int]:
    half = math.ceil(max_weight / 2)
    single = _single_qubit_keys(code)
    blocks = []
    for w in range(half + 1):
        block = _codes_of_weight(code.n, w)
        padded = np.full((block.shape[0], half), -1, dtype=np.int32)
        padded[:, :w] = block
        blocks.append(padded)
    codes = np.vstack(blocks)
    keys = _error_keys(single, codes)
    order = np.lexsort(keys.T[::-1])
    ordered = keys[order]
    same = np.all(ordered[1:] == ordered[:-1], axis=1)
    cuts = np.flatnonzero(~same) + 1
    starts = np.concatenate([[0], cuts])
    ends = np.concatenate([cuts, [codes.shape[0]]])
    runs = [order[a:b] for a, b in zip(starts, ends) if b - a > 1]

    found = _Violation()
    if runs:
        workers = max(1, min(threads, len(runs)))
        shares = [runs[k::workers] for k in range(workers)]
        if workers == 1:
            partials = [_scan_runs(shares[0], codes, code.n, reducer)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                partials = list(pool.map(
                    lambda share: _scan_runs(share, codes, code.n, reducer), shares
                ))
        for partial in partials:
            found.merge(partial)
    return found, int(codes.shape[0]), 2 * half + 1


def search_candidates(n: int, max_weight: int) -> int:
    """Number of nonidentity errors of weight at most ``max_weight``."""
    return sum(math.comb(n, w) * 3 ** w for w in range(1, max_weight + 1))


def distance(
    code: EacqCode,
    max_weight: int,
    *,
    threads: int = 1,
    direct_limit: int = DEFAULT_DIRECT_LIMIT,
    journal: Optional[RunJournal] = None,
) -> DistanceReport:
    """Search for the minimum weight of an undetected, harmful error.

    Args:
        code: The code to analyse.
        max_weight: Largest violation weight the search must rule out.
        threads: Worker threads for the collision search.
        direct_limit: Use direct enumeration when the number of candidate
            errors is at most this.
        journal: Optional run journal.

    Returns:
        A ``DistanceReport``.  With a witness, ``verified_floor`` is the
        exact distance.  Without one, no violation of weight below
        ``verified_floor`` exists.

    Raises:
        ValueError: If ``max_weight`` is outside ``[0, n]``.
    """
    if not 0 <= max_weight <= code.n:
        raise ValueError(f"max_weight must lie in [0, {code.n}], got {max_weight}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    started = time.perf_counter()
    reducer = RowspaceReducer(code.radical_basis, width=2 * code.n)

    if search_candidates(code.n, max_weight) <= direct_limit:
        strategy = SearchStrategy.DIRECT
        found, examined = _direct_search(code, max_weight, reducer)
        floor_if_none = max_weight + 1
    else:
        strategy = SearchStrategy.COLLISION
        found, examined, floor_if_none = _collision_search(code, max_weight, reducer, threads)

    report = DistanceReport(
        verified_floor=found.weight if found.weight is not None else floor_if_none,
        witness=pauli_string(found.vector) if found.vector is not None else None,
        exhaustive=True,
        max_weight=max_weight,
        strategy=strategy,
        candidates=examined,
        seconds=round(time.perf_counter() - started, 6),
    )
    if journal is not None:
        journal.record(
            JournalEventType.DISTANCE_SEARCHED,
            subject=code.bracket(),
            metadata={
                "max_weight": max_weight,
                "threads": threads,
                "strategy": strategy.value,
                "verified_floor": report.verified_floor,
                "witness": report.witness,
                "candidates": examined,
                "seconds": report.seconds,
            },
        )
    return report


def is_violation(code: EacqCode, error: ErrorLike) -> bool:
    """True for a nonzero error with zero syndrome outside the isotropic part."""
    v = error_vector(code, error)
    if not v.any() or syndrome(code, v).any():
        return False
    return not RowspaceReducer(code.radical_basis, width=2 * code.n).contains(v)[0]

"""
Stabilizer Simulation and Monte Carlo Trials.

**State model.**  A ``StabState`` is a full-rank stabilizer state on the
sender's ``n`` qubits plus the receiver's ``e`` qubits: ``n + e``
commuting, independent generator rows (``(z|x)`` over ``n + e`` qubits,
receiver columns trailing each half) and one sign bit per row.  Row ``k``
stabilizes the state as ``(-1)^signs[k]`` times its Hermitian operator.

**Encoding.**  The generators are the extended Ĥ rows followed by the
logical Z operators (or the logical X operators for an X-basis state).
The classical index sets the signs of the Ĥ rows; the logical bits set
the signs of the logical rows.

**Measurement.**  Every observable measured here lies in the stabilizer
group, so its outcome is deterministic: write it as a product of
generators and add up their signs plus the phase offset of the product.
The decomposition depends only on the generators and the observable, so
it is cached; a trial only touches sign bits.

**Randomness.**  Trials are grouped in blocks of ``BLOCK_SIZE``.  Block
``b`` draws from ``numpy.random.Philox`` keyed by ``seed`` and ``b``, so
trial ``t`` always sees the same error, index and logical bits for a
given seed no matter how many threads run the batch.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import IO, Iterable, Optional

import numpy as np

from eacq.code import EacqCode, codeword_sign_vector, extended_stabilizer_operators
from eacq.correction import DecodeTable
from eacq.gf2core import (
    RowspaceReducer,
    WidthMismatchError,
    as_bitvec,
    pad_qubits,
    rank,
    symplectic_products,
    to_bitstring,
)
from eacq.journal import JournalEventType, RunJournal
from eacq.models import ChannelModel, ChannelSpec, TrialResult, TrialSummary
from eacq.pauli import PauliOp, from_symplectic, product

BLOCK_SIZE = 1024
RNG_ID = "numpy-philox4x64"
CSV_HEADER = ["p", "trials", "classical_failures", "quantum_failures", "seed", "rng_id"]

# Labels 0, 1, 2 = X, Y, Z as (z, x) bits
_Z_BIT = np.array([0, 1, 1], dtype=np.uint8)
_X_BIT = np.array([1, 1, 0], dtype=np.uint8)


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class BobQubitError(ValueError):
    """Raised when an error acts on the receiver's (noiseless) qubits."""
    pass


class NonzeroSyndromeError(RuntimeError):
    """Raised when readout is attempted on a state with nonzero syndrome."""
    pass


class IndeterminateMeasurementError(RuntimeError):
    """Raised when an observable is not in the state's stabilizer group."""
    pass


class StateRankError(RuntimeError):
    """Raised when encoding does not give a full-rank stabilizer state."""
    pass


# ---------------------------------------------------------------------------
# State
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StabState:
    """Signed stabilizer generators on sender plus receiver qubits."""

    gens: np.ndarray
    signs: np.ndarray
    n_alice: int
    basis: str = "Z"

    @property
    def n_total(self) -> int:
        return self.gens.shape[1] // 2


@lru_cache(maxsize=128)
def _base_generators(code: EacqCode, basis: str) -> np.ndarray:
    logical = code.logical_z if basis == "Z" else code.logical_x
    gens = np.vstack([
        code.extended_h_quantum.reshape(code.r, 2 * code.n_total),
        pad_qubits(logical.reshape(code.q, 2 * code.n), code.e),
    ])
    if rank(gens) != code.n_total or symplectic_products(gens, gens).any():
        raise StateRankError(
            f"Encoding generators for {code.bracket()} do not define a full-rank "
            f"stabilizer state on {code.n_total} qubits"
        )
    gens.setflags(write=False)
    return gens


def encode(
    code: EacqCode,
    classical_index: Iterable[int] | str | np.ndarray,
    logical_bits: Iterable[int] | str | np.ndarray,
    basis: str = "Z",
) -> StabState:
    """Prepare the codeword for a classical index and logical basis state.

    Args:
        code: The code.
        classical_index: ``c`` bits selecting the classical codeword.
        logical_bits: ``q`` bits; computational basis values for
            ``basis="Z"``, ``+/-`` values for ``basis="X"``.
        basis: ``"Z"`` or ``"X"``.

    Raises:
        WidthMismatchError: If the index or logical bits have the wrong length.
        StateRankError: If the generators are not a full stabilizer set.
    """
    if basis not in ("Z", "X"):
        raise ValueError(f"basis must be 'Z' or 'X', got {basis!r}")
    logical = as_bitvec(logical_bits)
    if logical.size != code.q:
        raise WidthMismatchError(
            f"Logical input has {logical.size} bits; the code encodes {code.q} qubits"
        )
    signs = np.concatenate([codeword_sign_vector(code, classical_index), logical])
    return StabState(
        gens=_base_generators(code, basis),
        signs=signs.astype(np.uint8),
        n_alice=code.n,
        basis=basis,
    )


def _sender_error(state: StabState, error: PauliOp | np.ndarray) -> np.ndarray:
    v = error.v if isinstance(error, PauliOp) else as_bitvec(error)
    n, n_total = state.n_alice, state.n_total
    if v.size == 2 * n:
        return pad_qubits(v, n_total - n)[0]
    if v.size == 2 * n_total:
        bob = np.concatenate([v[n:n_total], v[n_total + n:]])
        if bob.any():
            raise BobQubitError("Errors may only act on the sender's qubits")
        return v
    raise WidthMismatchError(
        f"Error has width {v.size}; expected {2 * n} or {2 * n_total}"
    )


def apply_error(state: StabState, error: PauliOp | np.ndarray) -> StabState:
    """Conjugate the state by a Pauli error on the sender's qubits.

    Only the signs of anticommuting generators change; a global phase of
    the error has no effect on the state.
    """
    v = _sender_error(state, error)
    flips = symplectic_products(state.gens, v)[:, 0]
    return replace(state, signs=state.signs ^ flips)


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _reducer(gens_key: bytes, shape: tuple[int, int]) -> RowspaceReducer:
    gens = np.frombuffer(gens_key, dtype=np.uint8).reshape(shape)
    return RowspaceReducer(gens, width=shape[1])


@lru_cache(maxsize=8192)
def _measurement_plan(
    gens_key: bytes, shape: tuple[int, int], v_key: bytes, phase: int
) -> tuple[np.ndarray, int]:
    coefficients = _reducer(gens_key, shape).solve(np.frombuffer(v_key, dtype=np.uint8))
    if coefficients is None:
        raise IndeterminateMeasurementError(
            "Observable anticommutes with the state; the outcome would be random"
        )
    gens = np.frombuffer(gens_key, dtype=np.uint8).reshape(shape)
    members = [from_symplectic(row) for row in gens[coefficients.astype(bool)]]
    offset = (phase - product(members, shape[1] // 2).phase) % 4
    if offset % 2:
        raise IndeterminateMeasurementError("Observable is not Hermitian")
    coefficients = coefficients.astype(np.int64)
    coefficients.setflags(write=False)
    return coefficients, offset // 2


def measure_observable(state: StabState, observable: PauliOp) -> int:
    """Outcome bit ``b`` with ``observable |psi> = (-1)^b |psi>``.

    Observables on the sender's qubits alone are extended by identity on
    the receiver's.

    Raises:
        IndeterminateMeasurementError: If the outcome is not deterministic.
    """
    v = observable.v
    if v.size == 2 * state.n_alice and state.n_total != state.n_alice:
        v = pad_qubits(v, state.n_total - state.n_alice)[0]
    if v.size != 2 * state.n_total:
        raise WidthMismatchError(
            f"Observable has width {v.size}; the state has {state.n_total} qubits"
        )
    coefficients, offset = _measurement_plan(
        state.gens.tobytes(), state.gens.shape,
        np.ascontiguousarray(v, dtype=np.uint8).tobytes(), observable.phase,
    )
    return int((coefficients @ state.signs.astype(np.int64) + offset) & 1)


@lru_cache(maxsize=128)
def _syndrome_observables(code: EacqCode) -> tuple[PauliOp, ...]:
    return tuple(extended_stabilizer_operators(code))


def measure_syndrome(state: StabState, code: EacqCode) -> np.ndarray:
    """Measure every ``S_Q`` generator; bit ``j`` is 1 on a ``-1`` outcome."""
    return np.array(
        [measure_observable(state, op) for op in _syndrome_observables(code)],
        dtype=np.uint8,
    )


def readout(state: StabState, code: EacqCode) -> tuple[np.ndarray, np.ndarray]:
    """Receiver's readout: classical index bits and logical bits.

    Classical bits are the outcomes of the Ĥ rows at the readout
    positions; logical bits are the outcomes of the logical operators of
    the state's basis.

    Raises:
        NonzeroSyndromeError: If the state is not in the code space.
    """
    if measure_syndrome(state, code).any():
        raise NonzeroSyndromeError("Readout requires a zero syndrome; recover first")
    rows = code.extended_h_quantum
    classical = np.array(
        [measure_observable(state, from_symplectic(rows[l])) for l in code.readout_positions],
        dtype=np.uint8,
    )
    logical_rows = code.logical_z if state.basis == "Z" else code.logical_x
    logical = np.array(
        [measure_observable(state, from_symplectic(row)) for row in logical_rows],
        dtype=np.uint8,
    )
    return classical, logical


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Block:
    errors: np.ndarray
    indices: np.ndarray
    z_bits: np.ndarray
    x_bits: np.ndarray


def _sample_block(code: EacqCode, channel: ChannelSpec, block: int) -> _Block:
    if channel.model != ChannelModel.DEPOLARIZING:
        raise ValueError(f"Unsupported channel model {channel.model}")
    rng = np.random.Generator(np.random.Philox(key=channel.seed | (block << 64)))
    n = code.n
    hits = rng.random((BLOCK_SIZE, n)) < channel.p
    labels = rng.integers(0, 3, size=(BLOCK_SIZE, n))
    errors = np.hstack([hits & (_Z_BIT[labels] == 1), hits & (_X_BIT[labels] == 1)])
    return _Block(
        errors=errors.astype(np.uint8),
        indices=rng.integers(0, 2, size=(BLOCK_SIZE, code.c), dtype=np.uint8),
        z_bits=rng.integers(0, 2, size=(BLOCK_SIZE, code.q), dtype=np.uint8),
        x_bits=rng.integers(0, 2, size=(BLOCK_SIZE, code.q), dtype=np.uint8),
    )


def _run_copy(
    code: EacqCode,
    error: np.ndarray,
    recovery: PauliOp,
    index: np.ndarray,
    logical: np.ndarray,
    basis: str,
) -> tuple[bool, bool]:
    state = apply_error(encode(code, index, logical, basis), error)
    state = apply_error(state, recovery)
    classical, decoded = readout(state, code)
    return bool(np.array_equal(classical, index)), bool(np.array_equal(decoded, logical))


def _trial(
    code: EacqCode, table: DecodeTable, trial_index: int, sample: _Block, row: int
) -> TrialResult:
    error = sample.errors[row]
    index = sample.indices[row]
    # Syndrome is read off the Z-basis copy; both copies carry the same error
    corrupted = apply_error(encode(code, index, sample.z_bits[row], "Z"), error)
    key = to_bitstring(measure_syndrome(corrupted, code))
    try:
        recovery = table.decode(key)
    except KeyError:
        return TrialResult(
            trial_index=trial_index,
            injected_error=from_symplectic(error),
            syndrome=key,
            recovery=None,
            classical_ok=False,
            quantum_ok=False,
        )
    classical_z, quantum_z = _run_copy(code, error, recovery, index, sample.z_bits[row], "Z")
    classical_x, quantum_x = _run_copy(code, error, recovery, index, sample.x_bits[row], "X")
    return TrialResult(
        trial_index=trial_index,
        injected_error=from_symplectic(error),
        syndrome=key,
        recovery=recovery,
        classical_ok=classical_z and classical_x,
        quantum_ok=quantum_z and quantum_x,
    )


def run_trial(
    code: EacqCode, table: DecodeTable, channel: ChannelSpec, trial_index: int
) -> TrialResult:
    """Encode, corrupt, decode and read out trial ``trial_index``.

    The trial's random draws depend only on ``channel.seed`` and
    ``trial_index``.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be nonnegative, got {trial_index}")
    block, row = divmod(trial_index, BLOCK_SIZE)
    return _trial(code, table, trial_index, _sample_block(code, channel, block), row)


def _run_block(
    code: EacqCode, table: DecodeTable, channel: ChannelSpec, block: int, count: int
) -> tuple[int, int, int]:
    sample = _sample_block(code, channel, block)
    classical = quantum = total = 0
    # Trials without an error decode to the identity and always succeed
    for row in np.flatnonzero(sample.errors[:count].any(axis=1)):
        result = _trial(code, table, block * BLOCK_SIZE + int(row), sample, int(row))
        classical += not result.classical_ok
        quantum += not result.quantum_ok
        total += not result.ok
    return classical, quantum, total


def run_trials(
    code: EacqCode,
    table: DecodeTable,
    channel: ChannelSpec,
    trials: int,
    *,
    threads: int = 1,
    journal: Optional[RunJournal] = None,
) -> TrialSummary:
    """Run trials ``0 .. trials-1`` and count failures.

    Counts are identical for every ``threads`` value.

    Raises:
        ValueError: If ``trials`` or ``threads`` is out of range.
    """
    if trials < 0:
        raise ValueError(f"trials must be nonnegative, got {trials}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    started = time.perf_counter()
    blocks = [
        (b, min(BLOCK_SIZE, trials - b * BLOCK_SIZE))
        for b in range((trials + BLOCK_SIZE - 1) // BLOCK_SIZE)
    ]
    if threads == 1 or len(blocks) <= 1:
        counts = [_run_block(code, table, channel, b, count) for b, count in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(
                lambda item: _run_block(code, table, channel, *item), blocks
            ))
    classical, quantum, total = (sum(column) for column in zip(*counts)) if counts else (0, 0, 0)
    summary = TrialSummary(
        p=channel.p,
        trials=trials,
        classical_failures=classical,
        quantum_failures=quantum,
        total_failures=total,
        seed=channel.seed,
        rng_id=RNG_ID,
    )
    if journal is not None:
        journal.record(
            JournalEventType.TRIALS_RUN,
            subject=code.bracket(),
            metadata={
                "p": channel.p,
                "trials": trials,
                "seed": channel.seed,
                "threads": threads,
                "classical_failures": classical,
                "quantum_failures": quantum,
                "total_failures": total,
                "rng_id": RNG_ID,
                "seconds": round(time.perf_counter() - started, 6),
            },
        )
    return summary


def write_trials_csv(summaries: Iterable[TrialSummary], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for summary in summaries:
        writer.writerow(summary.csv_row())

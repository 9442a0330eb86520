"""
EACQ Code Construction and Transformations.

An entanglement-assisted, classically-enhanced quantum code is specified
by a pair ``(Ĥ, H)``:

* ``h_quantum`` (Ĥ) -- ``s + 2e`` independent symplectic rows over the
  sender's ``n`` qubits.  Its rowspace is the full stabilizer
  ``<S_Q, S_C>``.
* ``h_classical`` (H) -- ``s + 2e - c`` independent rows over ``s + 2e``
  columns.  The quantum stabilizer ``S_Q`` is generated by the rows of
  ``G = H . Ĥ``; the kernel of ``H`` indexes the ``2^c`` classical
  messages.

**Parameters:**  symplectic Gram--Schmidt on ``Ĥ`` gives ``s`` isotropic
rows and ``e`` hyperbolic pairs (one ebit each); on ``G`` it gives
``s - c1`` and ``e - c2``.  Then ``q = n - s - e`` and ``c = c1 + 2 c2``.

**Validity:**  besides independence and matching dimensions, ``build``
requires every isotropic vector of ``rowspace(G)`` to commute with all of
``Ĥ``.  Otherwise measuring ``S_Q`` would disturb the classical
codewords.

**Classical index convention:**  ``classical_kernel`` is the reduced
echelon basis of ``kernel(H)``.  Index bit ``j`` selects basis row ``j``
and the codeword carries sign ``y_l`` on Ĥ row ``l`` where
``y = index . classical_kernel``.  Reading Ĥ rows at the pivot columns of
the basis returns the index bits directly.

**Transformations:**

* ``enhance``  -- move ``i`` isotropic generators and ``j`` pairs of an
  EAQECC (``c = 0``) into the classical stabilizer.
* ``strip``    -- forget the classical structure: ``H = I``.
* ``drop_classical`` -- keep only ``S_Q``: the EAQECC generated by ``G``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from eacq.gf2core import (
    DependentRowsError,
    GramSchmidtResult,
    RowspaceReducer,
    WidthMismatchError,
    as_bitmat,
    as_bitvec,
    echelon_basis,
    identity,
    inverse,
    kernel,
    matmul,
    num_qubits,
    pad_qubits,
    rank,
    swap_halves,
    symplectic_gram_schmidt,
    symplectic_products,
)
from eacq.journal import JournalEventType, RunJournal
from eacq.models import CodeParams
from eacq.pauli import PauliOp, from_symplectic, pauli_string, product


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class CodeConstructionError(ValueError):
    """Raised when ``(Ĥ, H)`` does not define a valid EACQ code."""
    pass


class TransformError(ValueError):
    """Raised when a code transformation is infeasible."""
    pass


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.uint8)
    array.setflags(write=False)
    return array


# ---------------------------------------------------------------------------
# Code object
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EacqCode:
    """An ``[[n, q:c, d; e]]`` code with all derived bases.

    Instances come from ``build``; every array is read-only.
    """

    n: int
    s: int
    e: int
    c1: int
    c2: int
    h_quantum: np.ndarray
    h_classical: np.ndarray
    g_quantum: np.ndarray
    radical_basis: np.ndarray
    quantum_radical_basis: np.ndarray
    classical_kernel: np.ndarray
    readout_positions: tuple[int, ...]
    classical_readout_gens: np.ndarray
    logical_z: np.ndarray
    logical_x: np.ndarray
    extended_h_quantum: np.ndarray
    canonical_form: GramSchmidtResult

    @property
    def q(self) -> int:
        return self.n - self.s - self.e

    @property
    def c(self) -> int:
        return self.c1 + 2 * self.c2

    @property
    def r(self) -> int:
        """Rows of Ĥ (``s + 2e``)."""
        return self.s + 2 * self.e

    @property
    def num_checks(self) -> int:
        """Rows of ``G`` (``s + 2e - c``), the syndrome length."""
        return self.r - self.c

    @property
    def n_total(self) -> int:
        """Sender plus receiver qubits."""
        return self.n + self.e

    def params(self, d_claimed: Optional[int] = None) -> CodeParams:
        return CodeParams(n=self.n, q=self.q, c=self.c, e=self.e, d_claimed=d_claimed)

    def bracket(self, distance: Optional[int] = None) -> str:
        return self.params().bracket(distance)

    def __repr__(self) -> str:
        return (
            f"EacqCode({self.bracket()}, s={self.s}, c1={self.c1}, c2={self.c2})"
        )


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _extend_to_receiver(hq: np.ndarray, form: GramSchmidtResult, n: int) -> np.ndarray:
    """Abelian extension of ``rowspace(hq)`` onto the receiver's qubits.

    Pair ``k`` of the canonical form gets ``Z`` (first member) and ``X``
    (second member) on receiver qubit ``k``; isotropic rows get identity.
    The extension is then mapped back to the input row order.
    """
    s, e = form.s, form.e
    n_total = n + e
    extended = pad_qubits(form.canonical, e)
    for k in range(e):
        extended[s + k, n + k] = 1
        extended[s + e + k, n_total + n + k] = 1
    if hq.shape[0] == 0:
        return extended
    return matmul(inverse(form.transform), extended)


def _logical_pairs(hq: np.ndarray, n: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Hyperbolic pairs completing a symplectic basis of ``rowspace(hq)^perp``."""
    if hq.shape[0] == 0:
        perp = identity(2 * n)
    else:
        perp = kernel(swap_halves(hq))
    form = symplectic_gram_schmidt(perp)
    if form.e != q:
        raise CodeConstructionError(
            f"Expected {q} logical pairs, found {form.e}; the code object is inconsistent"
        )
    return form.pair_first, form.pair_second


def build(
    h_quantum: np.ndarray,
    h_classical: np.ndarray,
    *,
    journal: Optional[RunJournal] = None,
    subject: str = "",
) -> EacqCode:
    """Build and validate an EACQ code from ``(Ĥ, H)``.

    Args:
        h_quantum: ``(s+2e) x 2n`` symplectic matrix with independent rows.
        h_classical: ``(s+2e-c) x (s+2e)`` binary matrix with independent
            rows.
        journal: Optional run journal; one ``CODE_BUILT`` entry is added.
        subject: Label recorded in the journal entry.

    Returns:
        The validated ``EacqCode``.

    Raises:
        CodeConstructionError: On dependent rows, a width mismatch, or a
            quantum stabilizer whose isotropic part does not commute with
            all of Ĥ.
    """
    started = time.perf_counter()
    hq = as_bitmat(h_quantum)
    hc = as_bitmat(h_classical, ncols=hq.shape[0])
    try:
        n = num_qubits(hq)
    except WidthMismatchError as exc:
        raise CodeConstructionError(str(exc)) from exc
    if n == 0:
        raise CodeConstructionError("h_quantum must act on at least one qubit")

    r = hq.shape[0]
    if rank(hq) < r:
        raise CodeConstructionError(
            f"h_quantum rows are linearly dependent (rank {rank(hq)} < {r} rows)"
        )
    if hc.shape[1] != r:
        raise CodeConstructionError(
            f"h_classical has {hc.shape[1]} columns but h_quantum has {r} rows"
        )
    if rank(hc) < hc.shape[0]:
        raise CodeConstructionError(
            f"h_classical rows are linearly dependent (rank {rank(hc)} < {hc.shape[0]} rows)"
        )

    form = symplectic_gram_schmidt(hq)
    s, e = form.s, form.e
    g = matmul(hc, hq) if r else np.zeros((0, 2 * n), dtype=np.uint8)
    try:
        g_form = symplectic_gram_schmidt(g)
    except DependentRowsError as exc:
        raise CodeConstructionError(f"H . Ĥ has dependent rows: {exc}") from exc

    # rad(G) must commute with every row of Ĥ
    clash = symplectic_products(g_form.isotropic, hq)
    if clash.any():
        i, k = (int(v) for v in np.argwhere(clash)[0])
        raise CodeConstructionError(
            "Quantum stabilizer does not commute with the classical stabilizer: "
            f"isotropic element {pauli_string(g_form.isotropic[i])} of rowspace(H.Ĥ) "
            f"anticommutes with h_quantum row {k + 1} ({pauli_string(hq[k])})"
        )

    c = r - hc.shape[0]
    c1 = s - g_form.s
    c2 = e - g_form.e
    if c1 < 0 or c2 < 0 or c1 + 2 * c2 != c:
        raise CodeConstructionError(
            f"Infeasible subgroup split: c={c}, c1={c1}, c2={c2} from s={s}, e={e}"
        )

    kernel_basis, pivots = echelon_basis(kernel(hc)) if r else (np.zeros((0, 0), dtype=np.uint8), [])
    kernel_basis = kernel_basis.reshape(len(pivots), r)
    readout = hq[pivots].reshape(len(pivots), 2 * n)

    q = n - s - e
    logical_z, logical_x = _logical_pairs(hq, n, q)

    code = EacqCode(
        n=n,
        s=s,
        e=e,
        c1=c1,
        c2=c2,
        h_quantum=_frozen(hq),
        h_classical=_frozen(hc),
        g_quantum=_frozen(g),
        radical_basis=_frozen(form.isotropic),
        quantum_radical_basis=_frozen(g_form.isotropic),
        classical_kernel=_frozen(kernel_basis),
        readout_positions=tuple(int(p) for p in pivots),
        classical_readout_gens=_frozen(readout),
        logical_z=_frozen(logical_z),
        logical_x=_frozen(logical_x),
        extended_h_quantum=_frozen(_extend_to_receiver(hq, form, n)),
        canonical_form=form,
    )
    if journal is not None:
        journal.record(
            JournalEventType.CODE_BUILT,
            subject=subject or code.bracket(),
            metadata={
                "n": n, "q": q, "c": c, "e": e, "s": s, "c1": c1, "c2": c2,
                "seconds": round(time.perf_counter() - started, 6),
            },
        )
    return code


# ---------------------------------------------------------------------------
# Canonical selector and codewords
# ---------------------------------------------------------------------------

def canonical_F(s: int, e: int, c1: int, c2: int) -> np.ndarray:
    """Selector matrix keeping the quantum part of a canonical Ĥ.

    Columns follow the canonical order ``[u_1..u_s, u_{s+1}..u_{s+e},
    v_{s+1}..v_{s+e}]``.  The first ``c1`` isotropic rows and the first
    ``c2`` pairs are left out (they become classical), so the kernel has
    dimension ``c1 + 2 c2``.

    Raises:
        CodeConstructionError: If a block size is negative or too large.
    """
    if min(s, e, c1, c2) < 0 or c1 > s or c2 > e:
        raise CodeConstructionError(
            f"Invalid blocks for canonical F: s={s}, e={e}, c1={c1}, c2={c2}"
        )
    r = s + 2 * e
    keep = (
        list(range(c1, s))
        + list(range(s + c2, s + e))
        + list(range(s + e + c2, r))
    )
    return identity(r)[keep].reshape(len(keep), r)


def codeword_sign_vector(code: EacqCode, classical_index) -> np.ndarray:
    """Sign bits ``y`` of the Ĥ rows on the codeword with this index.

    Raises:
        WidthMismatchError: If the index does not have ``c`` bits.
    """
    index = as_bitvec(classical_index)
    if index.size != code.c:
        raise WidthMismatchError(
            f"Classical index has {index.size} bits; the code carries {code.c}"
        )
    if code.c == 0:
        return np.zeros(code.r, dtype=np.uint8)
    return matmul(index[None, :], code.classical_kernel)[0]


# ---------------------------------------------------------------------------
# Operator views
# ---------------------------------------------------------------------------

def extended_stabilizer_operators(code: EacqCode) -> list[PauliOp]:
    """``S_Q`` generators on sender plus receiver qubits.

    Generator ``j`` is the ordered product of the Hermitian extended Ĥ
    rows selected by row ``j`` of ``H``; extended rows commute, so each
    product is Hermitian up to sign.
    """
    rows = [from_symplectic(v) for v in code.extended_h_quantum]
    ops = []
    for selector in code.h_classical:
        ops.append(product([rows[l] for l in np.flatnonzero(selector)], code.n_total))
    return ops


def stabilizer_generators(code: EacqCode) -> list[PauliOp]:
    """``S_Q`` generators restricted to the sender's qubits.

    The sign is that of the extended operator; restriction keeps it
    since the Hermitian phase is additive over qubits.
    """
    n, n_total = code.n, code.n_total
    result = []
    for op in extended_stabilizer_operators(code):
        sender = np.concatenate([op.v[:n], op.v[n_total:n_total + n]])
        result.append(from_symplectic(sender, sign=op.sign_bit))
    return result


def readout_generators(code: EacqCode) -> list[PauliOp]:
    """The ``c`` classical readout observables (Ĥ rows at kernel pivots)."""
    return [from_symplectic(v) for v in code.classical_readout_gens]


def generator_kinds(code: EacqCode) -> list[str]:
    """``"I"`` for ``S_Q`` rows in the isotropic part, ``"S"`` otherwise."""
    if code.num_checks == 0:
        return []
    reducer = RowspaceReducer(code.quantum_radical_basis, width=2 * code.n)
    return ["I" if inside else "S" for inside in reducer.contains(code.g_quantum)]


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------

def _record_transform(
    journal: Optional[RunJournal], kind: str, source: EacqCode, result: EacqCode, **extra
) -> None:
    if journal is None:
        return
    journal.record(
        JournalEventType.CODE_TRANSFORMED,
        subject=source.bracket(),
        metadata={"transform": kind, "result": result.bracket(), **extra},
    )


def enhance(
    eaqecc: EacqCode,
    move_isotropic: int,
    move_pairs: int,
    *,
    journal: Optional[RunJournal] = None,
) -> EacqCode:
    """Turn an EAQECC into an EACQ code carrying classical bits.

    The last ``move_isotropic`` isotropic generators and the last
    ``move_pairs`` hyperbolic pairs of the canonical form move from the
    quantum to the classical stabilizer.  ``q`` and ``e`` are unchanged;
    the result has ``c1 = move_isotropic`` and ``c2 = move_pairs``.

    Raises:
        TransformError: If the input carries classical bits or a count is
            out of range.
    """
    if eaqecc.c != 0:
        raise TransformError(f"enhance expects a code with c = 0, got c = {eaqecc.c}")
    i, j = move_isotropic, move_pairs
    s, e = eaqecc.s, eaqecc.e
    if not 0 <= i <= s:
        raise TransformError(f"Cannot move {i} isotropic generators; only {s} exist")
    if not 0 <= j <= e:
        raise TransformError(f"Cannot move {j} symplectic pairs; only {e} exist")

    form = eaqecc.canonical_form
    reordered = np.vstack([
        form.isotropic[s - i:], form.isotropic[: s - i],
        form.pair_first[e - j:], form.pair_first[: e - j],
        form.pair_second[e - j:], form.pair_second[: e - j],
    ])
    result = build(reordered, canonical_F(s, e, i, j))
    _record_transform(journal, "enhance", eaqecc, result, move_isotropic=i, move_pairs=j)
    return result


def strip(eacq: EacqCode, *, journal: Optional[RunJournal] = None) -> EacqCode:
    """The EAQECC stabilized by all of Ĥ (classical part forgotten)."""
    result = build(eacq.h_quantum, identity(eacq.r))
    _record_transform(journal, "strip", eacq, result)
    return result


def drop_classical(eacq: EacqCode, *, journal: Optional[RunJournal] = None) -> EacqCode:
    """The EAQECC stabilized by ``S_Q`` alone.

    It encodes ``q + c1 + c2`` qubits with ``e - c2`` ebits; its
    correctable set is contained in that of ``eacq``.
    """
    result = build(eacq.g_quantum, identity(eacq.num_checks))
    _record_transform(journal, "drop_classical", eacq, result)
    return result


def logical_operators(code: EacqCode) -> tuple[np.ndarray, np.ndarray]:
    return code.logical_z, code.logical_x


def same_rowspace(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff two matrices have equal rowspaces."""
    a = as_bitmat(a)
    b = as_bitmat(b, ncols=a.shape[1])
    if a.shape[1] != b.shape[1]:
        return False
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(np.vstack([a, b]))

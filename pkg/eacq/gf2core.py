"""
GF(2) Linear Algebra and the Symplectic Form.

All bit vectors and matrices in EACQ are numpy ``uint8`` arrays holding
one bit per entry.  A symplectic vector over ``n`` qubits is a length
``2n`` array laid out as ``(z | x)``: the first ``n`` entries are the
Z-part and the last ``n`` the X-part.  A symplectic matrix stacks such
vectors as rows.

**What lives here:**

* Row reduction (reduced row-echelon form) with pivot bookkeeping.
* ``rank``, ``kernel``, ``inverse`` and rowspace membership.
* The symplectic product ``(z|x) . (z'|x') = z.x' + x.z'`` and its Gram
  matrix.
* Symplectic Gram--Schmidt, which splits a set of independent rows into
  an isotropic part (commutes with everything) and hyperbolic pairs.

Elimination sweeps whole rows with vectorized XOR.  The syndrome hot path
of the distance search packs bits into 64-bit words separately (see
``eacq.correction``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class DependentRowsError(ValueError):
    """Raised when an operation requires linearly independent rows."""
    pass


class WidthMismatchError(ValueError):
    """Raised when vector or matrix widths are incompatible."""
    pass


# ---------------------------------------------------------------------------
# Construction helpers
# ---------------------------------------------------------------------------

def as_bitvec(bits: Iterable[int] | str | np.ndarray) -> np.ndarray:
    """Return ``bits`` as a 1-D ``uint8`` array reduced mod 2.

    Strings are read character by character; ``|`` separators and
    whitespace are ignored, so ``"110|001"`` is a valid symplectic vector.
    """
    if isinstance(bits, str):
        cleaned = [ch for ch in bits if ch not in "| \t"]
        if any(ch not in "01" for ch in cleaned):
            raise ValueError(f"Bit string may only contain 0 and 1, got {bits!r}")
        return np.array([int(ch) for ch in cleaned], dtype=np.uint8)
    return np.asarray(bits, dtype=np.int64).reshape(-1).astype(np.uint8) & 1


def as_bitmat(rows: Sequence | np.ndarray, ncols: Optional[int] = None) -> np.ndarray:
    """Return ``rows`` as a 2-D ``uint8`` matrix reduced mod 2.

    Args:
        rows: A 2-D array, or a sequence of bit strings / bit sequences.
        ncols: Width to use when ``rows`` is empty.

    Raises:
        WidthMismatchError: If the rows have unequal lengths.
    """
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        return rows.astype(np.uint8) & 1
    vectors = [as_bitvec(r) for r in rows]
    if not vectors:
        return np.zeros((0, ncols or 0), dtype=np.uint8)
    widths = {v.size for v in vectors}
    if len(widths) != 1:
        raise WidthMismatchError(f"Rows have unequal widths: {sorted(widths)}")
    return np.vstack(vectors)


def identity(size: int) -> np.ndarray:
    return np.eye(size, dtype=np.uint8)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(2)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise WidthMismatchError(
            f"Cannot multiply shapes {a.shape} and {b.shape} over GF(2)"
        )
    return ((a.astype(np.int64) @ b.astype(np.int64)) & 1).astype(np.uint8)


def to_bitstring(bits: np.ndarray, separator_at: Optional[int] = None) -> str:
    """Render a bit vector as a 0/1 string, optionally with a ``|``."""
    text = "".join("1" if b else "0" for b in np.asarray(bits).reshape(-1))
    if separator_at is not None:
        return text[:separator_at] + "|" + text[separator_at:]
    return text


def num_qubits(m: np.ndarray) -> int:
    """Number of qubits of a symplectic vector or matrix."""
    width = np.asarray(m).shape[-1]
    if width % 2:
        raise WidthMismatchError(f"Symplectic width must be even, got {width}")
    return width // 2


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------

def row_reduce(
    m: np.ndarray, n_pivot_cols: Optional[int] = None
) -> tuple[np.ndarray, list[int]]:
    """Reduce a binary matrix to reduced row-echelon form over GF(2).

    Args:
        m: Binary matrix (rows x cols).
        n_pivot_cols: Only search for pivots in the first ``n_pivot_cols``
            columns.  Row operations still apply to the full width, which
            lets callers carry an augmented block along.

    Returns:
        ``(R, pivots)`` where ``R`` has the same shape as ``m`` (zero rows
        last) and ``pivots`` lists the pivot column of each nonzero row.
    """
    reduced = as_bitmat(m).copy()
    nrows, ncols = reduced.shape
    if n_pivot_cols is None:
        n_pivot_cols = ncols

    pivots: list[int] = []
    row = 0
    for col in range(n_pivot_cols):
        if row == nrows:
            break
        candidates = np.flatnonzero(reduced[row:, col])
        if candidates.size == 0:
            continue
        found = row + int(candidates[0])
        if found != row:
            reduced[[row, found]] = reduced[[found, row]]
        hits = reduced[:, col].astype(bool)
        hits[row] = False
        reduced[hits] ^= reduced[row]
        pivots.append(col)
        row += 1
    return reduced, pivots


def rank(m: np.ndarray) -> int:
    """Dimension of the rowspace of ``m``."""
    m = as_bitmat(m)
    if m.size == 0:
        return 0
    return len(row_reduce(m)[1])


def kernel(m: np.ndarray) -> np.ndarray:
    """Basis of ``{y : m . y^T = 0}`` as rows.

    The basis has ``ncols - rank(m)`` rows; row ``j`` has a 1 at the
    ``j``-th free column and zeros at the other free columns.
    """
    m = as_bitmat(m)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return identity(ncols)
    reduced, pivots = row_reduce(m)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for j, f in enumerate(free):
        basis[j, f] = 1
        for i, p in enumerate(pivots):
            basis[j, p] = reduced[i, f]
    return basis


def echelon_basis(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon basis of the rowspace of ``m`` and its pivots."""
    m = as_bitmat(m)
    if m.shape[0] == 0:
        return m.copy(), []
    reduced, pivots = row_reduce(m)
    return reduced[: len(pivots)].copy(), pivots


def inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a square invertible matrix over GF(2).

    Raises:
        DependentRowsError: If ``m`` is singular.
    """
    m = as_bitmat(m)
    size = m.shape[0]
    if m.shape != (size, size):
        raise WidthMismatchError(f"Only square matrices are invertible, got {m.shape}")
    reduced, pivots = row_reduce(np.hstack([m, identity(size)]), n_pivot_cols=size)
    if len(pivots) < size:
        raise DependentRowsError("Matrix is singular over GF(2)")
    return reduced[:, size:].copy()


# ---------------------------------------------------------------------------
# Rowspace membership
# ---------------------------------------------------------------------------

class RowspaceReducer:
    """Reduces vectors against the rowspace of a fixed basis.

    Builds the reduced echelon form of ``basis`` once, together with the
    row operations that produced it, so that membership tests and
    coefficient solves over many vectors are single vectorized passes.
    """

    def __init__(self, basis: np.ndarray, width: Optional[int] = None) -> None:
        basis = as_bitmat(basis, ncols=width)
        self.width = basis.shape[1] if width is None else width
        if basis.shape[1] != self.width:
            raise WidthMismatchError(
                f"Basis width {basis.shape[1]} does not match {self.width}"
            )
        k = basis.shape[0]
        reduced, pivots = row_reduce(np.hstack([basis, identity(k)]), n_pivot_cols=self.width)
        self.num_basis_rows = k
        self.pivots = pivots
        self._rows = reduced[: len(pivots), : self.width].copy()
        self._ops = reduced[: len(pivots), self.width:].copy()

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Reduce vectors against the basis.

        Args:
            vectors: A single vector or a stack of vectors (rows).

        Returns:
            ``(residuals, coefficients)``; a vector lies in the rowspace iff
            its residual is zero, in which case ``coefficients . basis``
            reproduces it.
        """
        vectors = np.atleast_2d(as_bitmat(np.atleast_2d(vectors))).copy()
        if vectors.shape[1] != self.width:
            raise WidthMismatchError(
                f"Vector width {vectors.shape[1]} does not match basis width {self.width}"
            )
        coefficients = np.zeros((vectors.shape[0], self.num_basis_rows), dtype=np.uint8)
        for i, col in enumerate(self.pivots):
            hits = vectors[:, col].astype(bool)
            if hits.any():
                vectors[hits] ^= self._rows[i]
                coefficients[hits] ^= self._ops[i]
        return vectors, coefficients

    def contains(self, vectors: np.ndarray) -> np.ndarray:
        """Boolean mask: which rows of ``vectors`` lie in the rowspace."""
        residuals, _ = self.reduce(vectors)
        return ~residuals.any(axis=1)

    def solve(self, vector: np.ndarray) -> Optional[np.ndarray]:
        """Coefficients ``c`` with ``c . basis = vector``, or None."""
        residuals, coefficients = self.reduce(vector)
        if residuals.any():
            return None
        return coefficients[0]


def rowspace_contains(m: np.ndarray, v: np.ndarray) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``m``.

    Raises:
        WidthMismatchError: If widths differ.
    """
    v = as_bitvec(v)
    m = as_bitmat(m, ncols=v.size)
    if m.shape[1] != v.size:
        raise WidthMismatchError(
            f"Vector width {v.size} does not match matrix width {m.shape[1]}"
        )
    return bool(RowspaceReducer(m, width=v.size).contains(v)[0])


# ---------------------------------------------------------------------------
# Symplectic form
# ---------------------------------------------------------------------------

def swap_halves(m: np.ndarray) -> np.ndarray:
    """Exchange the z and x halves: ``(z|x) -> (x|z)``."""
    m = np.asarray(m)
    n = num_qubits(m)
    return np.concatenate([m[..., n:], m[..., :n]], axis=-1)


def symplectic_products(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All pairwise symplectic products between rows of ``a`` and ``b``.

    Returns:
        An ``(rows(a), rows(b))`` bit matrix; vectors are promoted to a
        single row.
    """
    a = np.atleast_2d(np.asarray(a))
    b = np.atleast_2d(np.asarray(b))
    if a.shape[1] != b.shape[1]:
        raise WidthMismatchError(
            f"Symplectic widths differ: {a.shape[1]} vs {b.shape[1]}"
        )
    num_qubits(a)
    return matmul(a, swap_halves(b).T)


def symplectic_product(u: np.ndarray, v: np.ndarray) -> int:
    """``z.x' + x.z'`` mod 2 for two symplectic vectors."""
    u = as_bitvec(u)
    v = as_bitvec(v)
    if u.size != v.size:
        raise WidthMismatchError(f"Symplectic widths differ: {u.size} vs {v.size}")
    return int(symplectic_products(u, v)[0, 0])


def gram_matrix(m: np.ndarray) -> np.ndarray:
    """Symmetric, zero-diagonal matrix of pairwise symplectic products."""
    m = as_bitmat(m)
    return symplectic_products(m, m)


def pad_qubits(m: np.ndarray, extra: int) -> np.ndarray:
    """Append ``extra`` identity qubits to symplectic rows.

    The new columns go at the end of each half, so ``(z|x)`` over ``n``
    qubits becomes ``(z 0..0 | x 0..0)`` over ``n + extra``.
    """
    m = np.atleast_2d(np.asarray(m, dtype=np.uint8))
    n = num_qubits(m)
    pad = np.zeros((m.shape[0], extra), dtype=np.uint8)
    return np.hstack([m[:, :n], pad, m[:, n:], pad])


# ---------------------------------------------------------------------------
# Symplectic Gram--Schmidt
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GramSchmidtResult:
    """Isotropic rows, hyperbolic pairs and the row operations used.

    ``transform`` maps the input rows to the canonical output order
    ``[isotropic; pair firsts; pair seconds]``: ``transform . m`` equals
    ``canonical``.
    """

    isotropic: np.ndarray
    pair_first: np.ndarray
    pair_second: np.ndarray
    transform: np.ndarray

    @property
    def s(self) -> int:
        return int(self.isotropic.shape[0])

    @property
    def e(self) -> int:
        return int(self.pair_first.shape[0])

    @property
    def pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [(self.pair_first[k], self.pair_second[k]) for k in range(self.e)]

    @property
    def canonical(self) -> np.ndarray:
        return np.vstack([self.isotropic, self.pair_first, self.pair_second])


def symplectic_gram_schmidt(m: np.ndarray) -> GramSchmidtResult:
    """Split independent symplectic rows into isotropic rows and pairs.

    Rows are popped in input order.  A popped row is paired with the first
    remaining row it anticommutes with; both are then swept out of every
    remaining row.  A popped row with no such partner is isotropic.

    Raises:
        DependentRowsError: If the input rows are linearly dependent.
    """
    work = as_bitmat(m).copy()
    k, width = work.shape
    num_qubits(work)
    if rank(work) < k:
        raise DependentRowsError(
            f"Symplectic Gram-Schmidt needs independent rows; got rank "
            f"{rank(work)} for {k} rows"
        )
    ops = identity(k)
    remaining = list(range(k))
    isotropic: list[int] = []
    firsts: list[int] = []
    seconds: list[int] = []

    while remaining:
        i = remaining.pop(0)
        if not remaining:
            isotropic.append(i)
            break
        rest = np.array(remaining)
        hits = symplectic_products(work[rest], work[i])[:, 0]
        partners = np.flatnonzero(hits)
        if partners.size == 0:
            isotropic.append(i)
            continue
        p = int(rest[partners[0]])
        remaining.remove(p)
        firsts.append(i)
        seconds.append(p)
        if not remaining:
            continue
        rest = np.array(remaining)
        a = symplectic_products(work[rest], work[i])[:, 0].astype(bool)
        b = symplectic_products(work[rest], work[p])[:, 0].astype(bool)
        # t' = t + (t.w_p) w_i + (t.w_i) w_p
        work[rest[b]] ^= work[i]
        ops[rest[b]] ^= ops[i]
        work[rest[a]] ^= work[p]
        ops[rest[a]] ^= ops[p]

    order = isotropic + firsts + seconds
    return GramSchmidtResult(
        isotropic=work[isotropic].reshape(len(isotropic), width),
        pair_first=work[firsts].reshape(len(firsts), width),
        pair_second=work[seconds].reshape(len(seconds), width),
        transform=ops[order].reshape(len(order), k),
    )

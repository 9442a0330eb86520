"""
Tests for eacq.gf2core -- GF(2) Linear Algebra and the Symplectic Form.

Covers: bit parsing, row reduction, rank/kernel/inverse, rowspace
membership, symplectic products and padding, and symplectic Gram-Schmidt
(ordering, sweep, transform bookkeeping, dependent rows).
"""

from __future__ import annotations

import numpy as np
import pytest

from eacq.gf2core import (
    DependentRowsError,
    RowspaceReducer,
    WidthMismatchError,
    as_bitmat,
    as_bitvec,
    echelon_basis,
    gram_matrix,
    identity,
    inverse,
    kernel,
    matmul,
    pad_qubits,
    rank,
    row_reduce,
    rowspace_contains,
    symplectic_gram_schmidt,
    symplectic_product,
    to_bitstring,
)


def _make_random_full_rank(rows: int, cols: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    while True:
        m = rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)
        if rank(m) == rows:
            return m


# ---------------------------------------------------------------------------
# 1. Parsing and helpers
# ---------------------------------------------------------------------------

class TestParsing:
    def test_bitvec_ignores_separator(self):
        assert as_bitvec("110|001").tolist() == [1, 1, 0, 0, 0, 1]

    def test_bitvec_reduces_mod_two(self):
        assert as_bitvec([2, 3, 5]).tolist() == [0, 1, 1]

    def test_bitvec_rejects_other_characters(self):
        with pytest.raises(ValueError, match="only contain 0 and 1"):
            as_bitvec("10a1")

    def test_bitmat_unequal_widths(self):
        with pytest.raises(WidthMismatchError, match="unequal widths"):
            as_bitmat(["101", "11"])

    def test_empty_bitmat_keeps_width(self):
        assert as_bitmat([], ncols=4).shape == (0, 4)

    def test_to_bitstring_with_separator(self):
        assert to_bitstring(as_bitvec("1100"), separator_at=2) == "11|00"

    def test_matmul_shape_mismatch(self):
        with pytest.raises(WidthMismatchError):
            matmul(identity(2), identity(3))


# ---------------------------------------------------------------------------
# 2. Row reduction, rank, kernel, inverse
# ---------------------------------------------------------------------------

class TestRowReduction:
    def test_reduced_echelon_form(self):
        reduced, pivots = row_reduce(as_bitmat(["110", "101"]))
        assert reduced.tolist() == [[1, 0, 1], [0, 1, 1]]
        assert pivots == [0, 1]

    def test_pivot_column_limit_carries_augmented_block(self):
        m = np.hstack([as_bitmat(["11", "01"]), identity(2)])
        reduced, pivots = row_reduce(m, n_pivot_cols=2)
        assert pivots == [0, 1]
        assert reduced[:, :2].tolist() == [[1, 0], [0, 1]]

    def test_rank(self):
        assert rank(as_bitmat(["11", "11"])) == 1
        assert rank(identity(5)) == 5
        assert rank(as_bitmat([], ncols=3)) == 0

    def test_kernel_annihilates(self):
        m = as_bitmat(["110", "011"])
        basis = kernel(m)
        assert basis.tolist() == [[1, 1, 1]]
        assert not matmul(m, basis.T).any()

    def test_kernel_dimension_random(self):
        m = _make_random_full_rank(4, 9, seed=3)
        basis = kernel(m)
        assert basis.shape == (5, 9)
        assert rank(basis) == 5
        assert not matmul(m, basis.T).any()

    def test_kernel_of_empty_matrix_is_everything(self):
        assert kernel(as_bitmat([], ncols=3)).tolist() == identity(3).tolist()

    def test_echelon_basis_drops_zero_rows(self):
        basis, pivots = echelon_basis(as_bitmat(["101", "101", "011"]))
        assert basis.tolist() == [[1, 0, 1], [0, 1, 1]]
        assert pivots == [0, 1]

    def test_inverse(self):
        m = as_bitmat(["11", "01"])
        assert matmul(m, inverse(m)).tolist() == identity(2).tolist()

    def test_inverse_random(self):
        m = _make_random_full_rank(6, 6, seed=11)
        assert matmul(inverse(m), m).tolist() == identity(6).tolist()

    def test_inverse_singular(self):
        with pytest.raises(DependentRowsError, match="singular"):
            inverse(as_bitmat(["11", "11"]))


# ---------------------------------------------------------------------------
# 3. Rowspace membership
# ---------------------------------------------------------------------------

class TestRowspace:
    def test_contains_mask(self):
        reducer = RowspaceReducer(as_bitmat(["1100", "0110"]))
        mask = reducer.contains(as_bitmat(["1010", "1000", "0000"]))
        assert mask.tolist() == [True, False, True]

    def test_solve_reproduces_vector(self):
        basis = as_bitmat(["1100", "0110", "0011"])
        reducer = RowspaceReducer(basis)
        coefficients = reducer.solve(as_bitvec("1001"))
        assert coefficients is not None
        assert matmul(coefficients[None, :], basis)[0].tolist() == [1, 0, 0, 1]

    def test_solve_outside_rowspace(self):
        assert RowspaceReducer(as_bitmat(["1100"])).solve(as_bitvec("1000")) is None

    def test_empty_basis_contains_only_zero(self):
        reducer = RowspaceReducer(as_bitmat([], ncols=3), width=3)
        assert reducer.contains(as_bitmat(["000", "100"])).tolist() == [True, False]

    def test_rowspace_contains_width_mismatch(self):
        with pytest.raises(WidthMismatchError):
            rowspace_contains(as_bitmat(["110"]), as_bitvec("11"))


# ---------------------------------------------------------------------------
# 4. Symplectic form
# ---------------------------------------------------------------------------

class TestSymplecticForm:
    def test_z_and_x_anticommute(self):
        assert symplectic_product(as_bitvec("1|0"), as_bitvec("0|1")) == 1

    def test_zz_and_xx_commute(self):
        assert symplectic_product(as_bitvec("11|00"), as_bitvec("00|11")) == 0

    def test_gram_matrix_symmetric_zero_diagonal(self):
        m = _make_random_full_rank(5, 8, seed=5)
        gram = gram_matrix(m)
        assert (gram == gram.T).all()
        assert not np.diag(gram).any()

    def test_pad_qubits_appends_to_each_half(self):
        padded = pad_qubits(as_bitvec("10|01"), 1)
        assert to_bitstring(padded[0], separator_at=3) == "100|010"

    def test_odd_width_rejected(self):
        with pytest.raises(WidthMismatchError, match="even"):
            symplectic_product(as_bitvec("101"), as_bitvec("011"))


# ---------------------------------------------------------------------------
# 5. Symplectic Gram-Schmidt
# ---------------------------------------------------------------------------

class TestGramSchmidt:
    def test_pair_then_isotropic(self):
        # Z1, X1, Z2 on two qubits
        m = as_bitmat(["10|00", "00|10", "01|00"])
        form = symplectic_gram_schmidt(m)
        assert (form.s, form.e) == (1, 1)
        assert form.isotropic.tolist() == [[0, 1, 0, 0]]
        assert form.pair_first.tolist() == [[1, 0, 0, 0]]
        assert form.pair_second.tolist() == [[0, 0, 1, 0]]

    def test_sweep_removes_pair_components(self):
        # Y1 Z2 anticommutes with both Z1 and X1; the sweep leaves Z2
        m = as_bitmat(["10|00", "00|10", "11|10"])
        form = symplectic_gram_schmidt(m)
        assert form.isotropic.tolist() == [[0, 1, 0, 0]]
        assert form.transform.tolist() == [[1, 1, 1], [1, 0, 0], [0, 1, 0]]

    def test_transform_maps_input_to_canonical(self):
        m = _make_random_full_rank(6, 10, seed=21)
        form = symplectic_gram_schmidt(m)
        assert matmul(form.transform, m).tolist() == form.canonical.tolist()
        assert rank(form.transform) == 6

    def test_canonical_gram_relations(self):
        m = _make_random_full_rank(7, 12, seed=8)
        form = symplectic_gram_schmidt(m)
        s, e = form.s, form.e
        expected = np.zeros((s + 2 * e, s + 2 * e), dtype=np.uint8)
        for k in range(e):
            expected[s + k, s + e + k] = 1
            expected[s + e + k, s + k] = 1
        assert gram_matrix(form.canonical).tolist() == expected.tolist()

    def test_dependent_rows_rejected(self):
        with pytest.raises(DependentRowsError, match="independent"):
            symplectic_gram_schmidt(as_bitmat(["10|00", "10|00"]))

    def test_empty_input(self):
        form = symplectic_gram_schmidt(as_bitmat([], ncols=4))
        assert (form.s, form.e) == (0, 0)

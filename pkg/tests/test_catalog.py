"""
Tests for eacq.catalog -- Built-in Code Catalog.

Covers: printed matrices, cyclotomic cosets, the BCH generator and check
matrix, the EA-CSS construction, the BCH-derived EACQ code and its
distance floor, and the code registry.
"""

from __future__ import annotations

import os

import numpy as np
import pytest

from eacq.catalog import (
    BCH_LENGTH,
    CatalogEntry,
    CodeRegistry,
    bch_63_39_9,
    bch_generator_polynomial,
    classical_8_3_a,
    classical_8_3_b,
    cyclotomic_cosets,
    default_registry,
    ea_css,
    eacq_9_1_3,
    eacq_63_21_12,
    eight_qubit_hq,
    shor_hq,
)
from eacq.code import CodeConstructionError, enhance, strip
from eacq.correction import distance
from eacq.gf2core import DependentRowsError, as_bitmat, gram_matrix, kernel, matmul, rank
from eacq.journal import JournalEventType, RunJournal
from eacq.models import CodeParams, SearchStrategy

_LONG = os.environ.get("EACQ_LONG_TESTS") == "1"


def _make_cyclic_shift(v: np.ndarray, k: int) -> np.ndarray:
    return np.roll(v, k)


# ---------------------------------------------------------------------------
# 1. Printed matrices
# ---------------------------------------------------------------------------

class TestPrintedMatrices:
    def test_shor_code_is_abelian(self):
        hq = shor_hq()
        assert hq.shape == (8, 18)
        assert rank(hq) == 8
        assert not gram_matrix(hq).any()

    def test_eight_qubit_code_has_one_pair(self):
        hq = eight_qubit_hq()
        assert rank(hq) == 8
        # rank of the Gram matrix is twice the number of ebits
        assert rank(gram_matrix(hq)) == 2

    @pytest.mark.parametrize("checks", [classical_8_3_a, classical_8_3_b])
    def test_classical_codes_have_dimension_three(self, checks):
        h = checks()
        assert h.shape == (5, 8)
        assert rank(h) == 5
        assert kernel(h).shape == (3, 8)


# ---------------------------------------------------------------------------
# 2. BCH construction
# ---------------------------------------------------------------------------

class TestBch:
    def test_cyclotomic_cosets(self):
        cosets = cyclotomic_cosets(63)
        by_leader = {coset[0]: coset for coset in cosets}
        assert by_leader[1] == [1, 2, 4, 8, 16, 32]
        assert len(by_leader[9]) == 3
        assert by_leader[21] == [21, 42]
        assert sum(len(c) for c in cosets) == 63

    def test_cosets_need_odd_modulus(self):
        with pytest.raises(ValueError, match="odd positive"):
            cyclotomic_cosets(64)

    def test_generator_degree(self):
        assert bch_generator_polynomial().degree == 24

    def test_check_matrix_shape_and_rank(self):
        h = bch_63_39_9()
        assert h.shape == (24, BCH_LENGTH)
        assert rank(h) == 24

    def test_generator_and_its_shifts_are_codewords(self):
        g = bch_generator_polynomial()
        codeword = np.zeros(BCH_LENGTH, dtype=np.uint8)
        codeword[: g.degree + 1] = g.coeffs.view(np.ndarray)[::-1]
        h = bch_63_39_9()
        for k in (0, 1, 17, 38):
            assert not matmul(h, _make_cyclic_shift(codeword, k)[:, None]).any()

    def test_ea_css_of_self_orthogonal_code(self):
        code = ea_css(as_bitmat(["11"]))
        assert (code.n, code.e, code.q) == (2, 0, 0)

    def test_ea_css_dependent_rows(self):
        with pytest.raises(DependentRowsError, match="dependent"):
            ea_css(as_bitmat(["110", "110"]))

    @pytest.mark.slow
    def test_bch_ea_css_parameters(self):
        code = ea_css(bch_63_39_9())
        assert (code.n, code.q, code.e, code.c) == (63, 21, 6, 0)

    @pytest.mark.slow
    def test_bch_eacq_code_distance_floor(self):
        code = eacq_63_21_12()
        assert code.bracket() == "[[63,21:12,?;6]]"
        report = distance(code, 6, threads=4)
        assert report.strategy == SearchStrategy.COLLISION
        assert report.witness is None
        assert report.verified_floor == 7

    @pytest.mark.slow
    @pytest.mark.parametrize("pairs", range(1, 7))
    def test_partial_enhancement_keeps_floor(self, pairs):
        code = enhance(ea_css(bch_63_39_9()), 0, pairs)
        assert (code.c1, code.c2) == (0, pairs)
        assert (code.q, code.c, code.e) == (21, 2 * pairs, 6)
        assert distance(code, 6, threads=4).verified_floor >= 7

    @pytest.mark.slow
    @pytest.mark.skipif(not _LONG, reason="set EACQ_LONG_TESTS=1 for the weight-8 search")
    def test_stripped_code_floor(self):
        report = distance(strip(eacq_63_21_12()), 8, threads=8)
        assert report.verified_floor == 9


# ---------------------------------------------------------------------------
# 3. Registry
# ---------------------------------------------------------------------------

class TestRegistry:
    def test_default_entries(self):
        registry = default_registry()
        assert len(registry) == 6
        assert registry.list_names() == sorted(registry.list_names())
        assert "eacq-9-1-3" in registry
        assert "eacq-10-1-3" not in registry

    @pytest.mark.parametrize(
        "name, bracket",
        [
            ("eacq-9-1-3", "[[9,1:3,3;0]]"),
            ("eacq-8-1-3-1", "[[8,1:3,3;1]]"),
            ("shor-9-1-3", "[[9,1,3;0]]"),
            ("classical-8-3-z", "[[8,0:3,?;0]]"),
        ],
    )
    def test_small_codes_match_declared_brackets(self, name, bracket):
        named = default_registry().get(name)
        assert named.params.bracket() == bracket
        assert named.code.bracket(named.params.d_claimed) == bracket

    def test_codes_are_built_once(self):
        registry = default_registry()
        assert registry.get("eacq-9-1-3") is registry.get("eacq-9-1-3")

    def test_unknown_name(self):
        with pytest.raises(KeyError, match="No catalog code named"):
            default_registry().get("steane")

    def test_duplicate_registration(self):
        registry = CodeRegistry()
        entry = CatalogEntry(name="x", params=CodeParams(n=9, q=1, c=3, e=0), factory=eacq_9_1_3)
        registry.register(entry)
        with pytest.raises(ValueError, match="already registered"):
            registry.register(entry)

    def test_declared_bracket_mismatch(self):
        registry = CodeRegistry()
        registry.register(CatalogEntry(
            name="wrong", params=CodeParams(n=9, q=1, c=0, e=0), factory=eacq_9_1_3,
        ))
        with pytest.raises(CodeConstructionError, match="declared"):
            registry.get("wrong")

    def test_listing_is_journaled(self):
        journal = RunJournal()
        entries = default_registry().list_entries(journal=journal)
        (record,) = journal.query(event_type=JournalEventType.CATALOG_LISTED)
        assert record.metadata["codes"] == [e.name for e in entries]

"""
Tests for eacq.correction -- Syndromes, Correctability, Decoding and Distance.

Covers: syndromes of single-qubit errors on the modified Shor code, pair
classification (including the Z-triplet degeneracy), correctable sets,
the canonical error order, condition-set inclusions, decoder tables and
their file format, and both distance strategies.
"""

from __future__ import annotations

import numpy as np
import pytest

from eacq.catalog import classical_8_3_z, eacq_8_1_3_1, eacq_9_1_3, shor_9_1_3
from eacq.code import strip
from eacq.correction import (
    DecodeTableError,
    UncorrectableErrorSet,
    build_decoder,
    classify_pair,
    condition_set_mask,
    decode,
    distance,
    dump_decode_table,
    enumerate_errors,
    error_weights,
    errors_of_weight,
    is_correctable_set,
    is_violation,
    parse_decode_table,
    read_decode_table,
    search_candidates,
    syndrome,
    syndromes,
    write_decode_table,
)
from eacq.gf2core import WidthMismatchError, to_bitstring
from eacq.journal import JournalEventType, RunJournal
from eacq.models import ErrorClass, SearchStrategy
from eacq.pauli import parse_pauli, pauli_string


def _make_single(n: int, qubit: int, letter: str) -> str:
    return "I" * qubit + letter + "I" * (n - qubit - 1)


def _make_x_and_z_errors(n: int) -> list[str]:
    return ["I" * n] + [_make_single(n, q, p) for q in range(n) for p in "XZ"]


def _make_stripped_eight():
    return strip(eacq_8_1_3_1())


# ---------------------------------------------------------------------------
# 1. Syndromes
# ---------------------------------------------------------------------------

class TestSyndromes:
    def test_single_x_errors_have_distinct_nonzero_syndromes(self):
        code = eacq_9_1_3()
        keys = {to_bitstring(syndrome(code, _make_single(9, q, "X"))) for q in range(9)}
        assert len(keys) == 9
        assert "00000" not in keys

    def test_z_triplets_share_syndromes(self):
        code = eacq_9_1_3()
        for block in range(3):
            keys = {
                to_bitstring(syndrome(code, _make_single(9, 3 * block + k, "Z")))
                for k in range(3)
            }
            assert len(keys) == 1

    def test_identity_has_zero_syndrome(self):
        assert not syndrome(eacq_9_1_3(), "IIIIIIIII").any()

    def test_accepts_pauli_and_bit_vectors(self):
        code = eacq_9_1_3()
        op = parse_pauli("XIIIIIIII")
        assert syndrome(code, op).tolist() == syndrome(code, op.v).tolist()

    def test_batch_matches_single(self):
        code = eacq_8_1_3_1()
        errors = enumerate_errors(8, 1)
        batch = syndromes(code, errors)
        for row, vector in zip(batch, errors):
            assert row.tolist() == syndrome(code, vector).tolist()

    def test_width_mismatch(self):
        with pytest.raises(WidthMismatchError, match="acts on 9 qubits"):
            syndrome(eacq_9_1_3(), "XX")



    def test_y_error_collides_with_x_error_on_another_qubit(self):
        code = eacq_9_1_3()
        assert syndrome(code, "YIIIIIIII").tolist() == syndrome(code, "IIIXIIIII").tolist()


# ---------------------------------------------------------------------------
# 2. Pair classification
# ---------------------------------------------------------------------------

class TestClassifyPair:
    def test_different_syndromes(self):
        assert classify_pair(eacq_9_1_3(), "XIIIIIIII", "IXIIIIIII") == ErrorClass.DISTINGUISHABLE

    def test_z_triplet_is_classically_degenerate(self):
        code = eacq_9_1_3()
        assert classify_pair(code, "ZIIIIIIII", "IZIIIIIII") == ErrorClass.DEGENERATE_CLASSICAL
        assert classify_pair(code, "ZIIIIIIII", "IIZIIIIII") == ErrorClass.DEGENERATE_CLASSICAL

    def test_equal_errors_are_quantum_degenerate(self):
        assert classify_pair(eacq_9_1_3(), "YIIIIIIII", "YIIIIIIII") == ErrorClass.DEGENERATE_QUANTUM

    def test_shor_triplet_is_quantum_degenerate(self):
        assert classify_pair(shor_9_1_3(), "ZIIIIIIII", "IZIIIIIII") == ErrorClass.DEGENERATE_QUANTUM

    def test_y_and_x_collision_is_uncorrectable(self):
        assert classify_pair(eacq_9_1_3(), "YIIIIIIII", "IIIXIIIII") == ErrorClass.UNCORRECTABLE

    def test_logical_difference_is_uncorrectable(self):
        code = shor_9_1_3()
        assert classify_pair(code, "IIIIIIXXX", "I" * 9) == ErrorClass.UNCORRECTABLE


# ---------------------------------------------------------------------------
# 3. Error enumeration and correctable sets
# ---------------------------------------------------------------------------

class TestEnumeration:
    def test_canonical_order(self):
        strings = [pauli_string(v) for v in enumerate_errors(2, 1)]
        assert strings == ["II", "IX", "XI", "IZ", "IY", "ZI", "YI"]

    def test_counts(self):
        assert enumerate_errors(3, 2).shape == (37, 6)
        assert errors_of_weight(4, 4).shape[0] == 81

    def test_weights_are_nondecreasing(self):
        weights = error_weights(enumerate_errors(4, 3))
        assert (np.diff(weights) >= 0).all()

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="max_weight"):
            enumerate_errors(3, 4)

    def test_search_candidates(self):
        assert search_candidates(9, 1) == 27
        assert search_candidates(3, 3) == 63


class TestCorrectableSets:
    @pytest.mark.parametrize("factory", [shor_9_1_3, _make_stripped_eight])
    def test_single_qubit_errors_correctable_on_distance_three_codes(self, factory):
        code = factory()
        ok, witness = is_correctable_set(code, enumerate_errors(code.n, 1))
        assert ok is True
        assert witness is None

    @pytest.mark.parametrize("factory", [eacq_9_1_3, eacq_8_1_3_1])
    def test_single_x_and_z_errors_correctable(self, factory):
        code = factory()
        ok, _ = is_correctable_set(code, _make_x_and_z_errors(code.n))
        assert ok is True

    @pytest.mark.parametrize("factory", [eacq_9_1_3, eacq_8_1_3_1])
    def test_single_y_errors_break_correctability(self, factory):
        code = factory()
        ok, witness = is_correctable_set(code, enumerate_errors(code.n, 1))
        assert ok is False
        first, second = witness
        assert classify_pair(code, first, second) == ErrorClass.UNCORRECTABLE
        assert "Y" in pauli_string(first) + pauli_string(second)

    def test_accepts_strings(self):
        ok, _ = is_correctable_set(eacq_9_1_3(), ["ZIIIIIIII", "IZIIIIIII", "IIZIIIIII"])
        assert ok is True

    def test_empty_set(self):
        assert is_correctable_set(eacq_9_1_3(), []) == (True, None)

    def test_classical_code_corrects_bit_flips(self):
        code = classical_8_3_z()
        flips = [_make_single(8, q, "X") for q in range(8)]
        ok, _ = is_correctable_set(code, flips)
        assert ok is True


class TestConditionSets:
    @pytest.mark.parametrize("factory", [eacq_9_1_3, eacq_8_1_3_1])
    def test_inclusions(self, factory):
        code = factory()
        errors = enumerate_errors(code.n, 2)
        e1, e2, e3 = (condition_set_mask(code, errors, k) for k in (1, 2, 3))
        assert not (e1 & ~e2).any()
        assert not (e2 & ~e3).any()

    def test_z_pair_separates_first_two_sets(self):
        code = eacq_9_1_3()
        v = parse_pauli("ZZIIIIIII").v
        assert condition_set_mask(code, v, 1).tolist() == [False]
        assert condition_set_mask(code, v, 2).tolist() == [True]

    def test_unknown_set(self):
        with pytest.raises(ValueError, match="1, 2 or 3"):
            condition_set_mask(eacq_9_1_3(), enumerate_errors(9, 0), 4)


# ---------------------------------------------------------------------------
# 4. Decoder tables
# ---------------------------------------------------------------------------

class TestDecoder:
    def test_single_x_errors_decode_exactly(self):
        code = shor_9_1_3()
        table = build_decoder(code, 1)
        for q in range(9):
            error = parse_pauli(_make_single(9, q, "X"))
            assert decode(table, syndrome(code, error)) == error

    def test_recoveries_are_degenerate_with_errors(self):
        code = _make_stripped_eight()
        table = build_decoder(code, 1)
        for vector in enumerate_errors(8, 1):
            recovery = table.decode(syndrome(code, vector))
            assert classify_pair(code, vector, recovery) != ErrorClass.UNCORRECTABLE
            assert recovery.weight <= 1

    def test_zero_syndrome_decodes_to_identity(self):
        code = _make_stripped_eight()
        table = build_decoder(code, 1)
        assert table.decode("0" * code.num_checks).weight == 0

    def test_unknown_syndrome(self):
        table = build_decoder(shor_9_1_3(), 0)
        assert len(table) == 1
        with pytest.raises(KeyError, match="not covered"):
            table.decode("10000000")

    def test_uncorrectable_weight(self):
        with pytest.raises(UncorrectableErrorSet, match="share a syndrome") as info:
            build_decoder(eacq_9_1_3(), 1)
        assert len(info.value.witness) == 2

    def test_shor_code_cannot_correct_two_errors(self):
        with pytest.raises(UncorrectableErrorSet):
            build_decoder(shor_9_1_3(), 2)

    def test_journal_entry(self):
        journal = RunJournal()
        table = build_decoder(shor_9_1_3(), 1, journal=journal)
        (entry,) = journal.query(event_type=JournalEventType.DECODER_BUILT)
        assert entry.metadata["entries"] == len(table) == 22
        assert entry.metadata["errors"] == 28


class TestDecodeTableFile:
    def test_round_trip(self, tmp_path):
        code = _make_stripped_eight()
        table = build_decoder(code, 1)
        path = write_decode_table(table, tmp_path / "t1.table")
        again = read_decode_table(path, code)
        assert dict(again.items()) == dict(table.items())
        assert (again.t, again.code_hash) == (table.t, table.code_hash)

    def test_header_lines(self):
        table = build_decoder(shor_9_1_3(), 1)
        lines = dump_decode_table(table).splitlines()
        assert lines[0] == "eacq-table v1"
        assert lines[1] == f"code-hash {table.code_hash}"
        assert lines[2] == "t 1"

    def test_table_for_other_code(self):
        text = dump_decode_table(build_decoder(shor_9_1_3(), 1))
        with pytest.raises(DecodeTableError, match="different code"):
            parse_decode_table(text, eacq_9_1_3())

    def test_bad_header(self):
        with pytest.raises(DecodeTableError, match="line 1"):
            parse_decode_table("eacq-table v0\ncode-hash x\nt 1\n")

    def test_entry_with_wrong_syndrome(self):
        code = shor_9_1_3()
        lines = dump_decode_table(build_decoder(code, 1)).splitlines()
        key, recovery = lines[4].split()
        flipped = ("1" if key[0] == "0" else "0") + key[1:]
        lines[4] = f"{flipped} {recovery}"
        with pytest.raises(DecodeTableError, match="does not produce syndrome"):
            parse_decode_table("\n".join(lines), code)

    def test_recovery_heavier_than_t(self):
        code = shor_9_1_3()
        text = dump_decode_table(build_decoder(code, 0)) + "11000000 YYIIIIIII\n"
        with pytest.raises(DecodeTableError, match="exceeds"):
            parse_decode_table(text, code)

    def test_load_is_journaled(self, tmp_path):
        code = shor_9_1_3()
        path = write_decode_table(build_decoder(code, 1), tmp_path / "t.table")
        journal = RunJournal()
        read_decode_table(path, code, journal=journal)
        assert len(journal.query(event_type=JournalEventType.TABLE_LOADED)) == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_decode_table(tmp_path / "absent.table")


# ---------------------------------------------------------------------------
# 5. Distance
# ---------------------------------------------------------------------------

class TestDistance:
    @pytest.mark.parametrize(
        "factory, expected, witness",
        [
            (eacq_9_1_3, 2, "IIIIIYIIY"),
            (eacq_8_1_3_1, 2, "IYIIIIYI"),
            (shor_9_1_3, 3, "IIIIIIXXX"),
            (_make_stripped_eight, 3, "IIIXXXII"),
        ],
    )
    def test_exact_distances_and_witnesses(self, factory, expected, witness):
        code = factory()
        report = distance(code, 3)
        assert report.exact
        assert report.strategy == SearchStrategy.DIRECT
        assert report.summary() == f"d = {expected} (exhaustive)"
        assert report.witness == witness
        assert is_violation(code, witness)

    def test_floor_without_witness(self):
        report = distance(shor_9_1_3(), 2)
        assert not report.exact
        assert report.distance is None
        assert report.verified_floor == 3
        assert report.summary().startswith("d >= 3")

    def test_collision_strategy_agrees_with_direct(self):
        code = _make_stripped_eight()
        direct = distance(code, 3)
        collision = distance(code, 3, direct_limit=0)
        assert collision.strategy == SearchStrategy.COLLISION
        assert (collision.verified_floor, collision.witness) == (direct.verified_floor, direct.witness)

    def test_collision_finds_weight_two_violation(self):
        report = distance(eacq_9_1_3(), 3, direct_limit=0)
        assert (report.verified_floor, report.witness) == (2, "IIIIIYIIY")

    def test_collision_floor_is_odd_bound(self):
        report = distance(shor_9_1_3(), 2, direct_limit=0)
        assert report.verified_floor == 3
        assert report.witness is None

    def test_thread_count_does_not_change_result(self):
        code = shor_9_1_3()
        one = distance(code, 4, direct_limit=0, threads=1)
        many = distance(code, 4, direct_limit=0, threads=3)
        assert (one.verified_floor, one.witness) == (many.verified_floor, many.witness)

    def test_max_weight_out_of_range(self):
        with pytest.raises(ValueError, match="max_weight"):
            distance(eacq_9_1_3(), 10)

    def test_zero_weight_search(self):
        report = distance(eacq_9_1_3(), 0)
        assert report.verified_floor == 1
        assert report.candidates == 0

    def test_is_violation(self):
        code = eacq_9_1_3()
        assert not is_violation(code, "I" * 9)
        assert not is_violation(code, "ZZIIIIIII")
        assert not is_violation(code, "XIIIIIIII")
        assert is_violation(code, "YIIXIIIII")

    def test_journal_entry(self):
        journal = RunJournal()
        distance(eacq_9_1_3(), 3, journal=journal)
        (entry,) = journal.query(event_type=JournalEventType.DISTANCE_SEARCHED)
        assert entry.metadata["verified_floor"] == 2
        assert entry.metadata["strategy"] == "direct"

import random

import pytest

from helpers import rand_table
from veclog.assoc import (
    AssociativeTable,
    DiagnosisMode,
    best_match,
    diagnose,
    feasible_mask,
    parse_table,
    parse_ternary_rows,
    restrict,
)
from veclog.vlcore import BitVector, LengthMismatch, ParseError


def bv(s):
    return BitVector.from_string(s)


def table(*rows, **kw):
    return AssociativeTable([bv(r) for r in rows], **kw)


def oracle_single_candidates(t: AssociativeTable, response: BitVector) -> str:
    """Brute force: a column is a candidate iff it equals the response."""
    resp = str(response)
    out = []
    for j in range(t.width):
        column = "".join(str(row)[j] for row in t.rows)
        out.append("1" if column == resp else "0")
    return "".join(out)


class TestTable:
    def test_dimensions(self):
        t = table("1100", "0011")
        assert (t.height, t.width) == (2, 4)

    def test_ragged_rows_rejected(self):
        with pytest.raises(LengthMismatch):
            AssociativeTable([bv("110"), bv("1100")])

    def test_label_validation(self):
        with pytest.raises(ValueError):
            table("10", "01", row_labels=["a"])
        with pytest.raises(ValueError):
            table("10", "01", row_labels=["a", "a"])

    def test_column(self):
        t = table("110", "011", "100")
        assert t.column(1) == bv("101")
        assert t.column(3) == bv("010")

    def test_widened(self):
        t = table("11", "01")
        wide = t.widened(4)
        assert [str(r) for r in wide.rows] == ["1100", "0100"]
        assert t.widened(2) is t


class TestFeasibleMask:
    def test_direct_formula(self):
        t = table("1100", "1111", "0011")
        assert feasible_mask(t, bv("1100")) == bv("001")

    def test_empty_query_fits_everywhere(self):
        t = table("1010", "0001")
        assert feasible_mask(t, bv("0000")) == bv("00")

    def test_self_containment(self):
        t = table("0110", "1001")
        assert feasible_mask(t, bv("0110")).bit(1) == 0

    def test_exhaustive_single_row_pairs(self):
        # the mask is defined row by row, so (row, query) pairs are the
        # exhaustive unit; oracle is plain set containment of the 1s
        for w in range(1, 9):
            for row_value in range(1 << w):
                row = BitVector(row_value, w)
                t = AssociativeTable([row])
                for query_value in range(1 << w):
                    q = BitVector(query_value, w)
                    feasible = (query_value & row_value) == query_value
                    assert feasible_mask(t, q).bit(1) == (0 if feasible else 1)

    def test_multi_row_composition(self):
        rng = random.Random(21)
        for _ in range(100):
            t = rand_table(rng, rng.randint(1, 10), rng.randint(1, 12))
            q = BitVector(rng.getrandbits(t.width), t.width)
            mask = feasible_mask(t, q)
            for k, row in enumerate(t.rows, start=1):
                assert mask.bit(k) == (0 if (q.value & row.value) == q.value
                                       else 1)

    def test_width_mismatch(self):
        with pytest.raises(LengthMismatch):
            feasible_mask(table("110"), bv("11"))


class TestRestrict:
    def test_all_ones_is_identity(self):
        t = table("1010", "0110")
        assert restrict(t, bv("1111")).rows == t.rows

    def test_all_zero_clears(self):
        t = table("1010", "0110")
        assert all(r.value == 0 for r in restrict(t, bv("0000")).rows)

    def test_coordinatewise(self):
        t = table("1100", "1111")
        out = restrict(t, bv("1010"))
        assert [str(r) for r in out.rows] == ["1000", "1010"]

    def test_labels_preserved(self):
        t = table("10", "01", row_labels=["a", "b"])
        assert restrict(t, bv("11")).row_labels == ("a", "b")


class TestDiagnose:
    def test_single_finds_matching_column(self):
        t = table("110", "011", "100")
        out = diagnose(t, bv("110"), DiagnosisMode.SINGLE)
        assert out.candidates == bv("010")
        assert out.consistent

    def test_single_inconsistent(self):
        t = table("110", "011", "010")
        out = diagnose(t, bv("110"), DiagnosisMode.SINGLE)
        assert out.candidates == bv("000")
        assert not out.consistent

    def test_multiple(self):
        t = table("110", "011", "100")
        out = diagnose(t, bv("110"), DiagnosisMode.MULTIPLE)
        assert out.candidates == bv("011")
        assert out.consistent

    def test_all_zero_response(self):
        t = table("110", "010")
        out = diagnose(t, bv("00"), DiagnosisMode.SINGLE)
        assert out.candidates == bv("001")  # complement of the row union

    def test_response_width_checked(self):
        with pytest.raises(LengthMismatch):
            diagnose(table("10", "01"), bv("101"))

    def test_single_matches_oracle_exhaustive_3x3(self):
        for t_value in range(1 << 9):
            rows = [BitVector((t_value >> (3 * i)) & 7, 3) for i in range(3)]
            t = AssociativeTable(rows)
            for r_value in range(8):
                response = BitVector(r_value, 3)
                got = diagnose(t, response, DiagnosisMode.SINGLE).candidates
                assert str(got) == oracle_single_candidates(t, response)

    def test_single_matches_oracle_random(self):
        rng = random.Random(22)
        for _ in range(300):
            t = rand_table(rng, rng.randint(1, 9), rng.randint(1, 12))
            response = BitVector(rng.getrandbits(t.height), t.height)
            got = diagnose(t, response, DiagnosisMode.SINGLE).candidates
            assert str(got) == oracle_single_candidates(t, response)

    def test_multiple_never_blames_passing_tests(self):
        rng = random.Random(23)
        for _ in range(300):
            t = rand_table(rng, rng.randint(1, 9), rng.randint(1, 12))
            response = BitVector(rng.getrandbits(t.height), t.height)
            got = diagnose(t, response, DiagnosisMode.MULTIPLE).candidates
            for i, row in enumerate(t.rows):
                if not response.bit(i + 1):
                    assert got.value & row.value == 0


class TestBestMatch:
    def test_exact_match(self):
        t = table("0000", "1100", "1110")
        rows, quality = best_match(bv("1100"), t)
        assert rows == [2]
        assert quality.ones == 0

    def test_derived_minimum(self):
        # oracle: ones = popcount(query ^ row); 1100 vs 0011 -> 4 ones,
        # 1100 vs 0111 -> 3 ones, so row 2 wins with 3
        t = table("0011", "0111")
        rows, quality = best_match(bv("1100"), t)
        assert rows == [2]
        assert quality.ones == 3

    def test_ties_return_all_rows_in_order(self):
        t = table("1000", "0010", "1111")
        rows, quality = best_match(bv("0000"), t)
        assert rows == [1, 2]
        assert quality.ones == 1

    def test_matches_popcount_oracle(self):
        rng = random.Random(24)
        for _ in range(200):
            t = rand_table(rng, rng.randint(1, 12), rng.randint(1, 12))
            q = BitVector(rng.getrandbits(t.width), t.width)
            rows, quality = best_match(q, t)
            scores = [(q ^ row).popcount for row in t.rows]
            best = min(scores)
            assert quality.ones == best
            assert rows == [k + 1 for k, s in enumerate(scores) if s == best]

    def test_row_permutation_keeps_result_set(self):
        rng = random.Random(25)
        rows = [BitVector(rng.getrandbits(6), 6) for _ in range(8)]
        q = BitVector(rng.getrandbits(6), 6)
        base, base_quality = best_match(q, AssociativeTable(rows))
        base_set = {str(rows[k - 1]) for k in base}
        for _ in range(10):
            shuffled = rows[:]
            rng.shuffle(shuffled)
            got, quality = best_match(q, AssociativeTable(shuffled))
            assert {str(shuffled[k - 1]) for k in got} == base_set
            assert quality.ones == base_quality.ones


class TestTableParsing:
    GOOD = "3 4\n1100\n1111\n0011\n#labels\nrows: t1 t2 t3\ncols: a b c d\n"

    def test_parse(self):
        t = parse_table(self.GOOD)
        assert (t.height, t.width) == (3, 4)
        assert t.row_labels == ("t1", "t2", "t3")
        assert t.col_labels == ("a", "b", "c", "d")

    def test_parse_without_labels(self):
        t = parse_table("2 2\n10\n01\n")
        assert t.row_labels is None

    def test_bad_symbol_position(self):
        with pytest.raises(ParseError) as err:
            parse_table("2 3\n110\n121\n")
        assert err.value.line == 3
        assert err.value.column == 2

    def test_bad_header(self):
        with pytest.raises(ParseError):
            parse_table("two cols\n10\n")

    def test_missing_rows(self):
        with pytest.raises(ParseError):
            parse_table("3 2\n10\n01\n")

    def test_wrong_width(self):
        with pytest.raises(ParseError) as err:
            parse_table("1 4\n101\n")
        assert err.value.line == 2

    def test_ternary_rows(self):
        rows, labels = parse_ternary_rows("2 3\n1x0\nxx1\n")
        assert [str(r) for r in rows] == ["1x0", "xx1"]
        assert labels is None

    def test_binary_parse_rejects_x(self):
        with pytest.raises(ParseError):
            parse_table("1 3\n1x0\n")

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from predlearn import (
    FamilyError,
    TableFamily,
    as_rational,
    canon_set,
    evaluate_set,
    load_family,
    ray22_family,
    set_equal,
)


class TestAsRational:
    def test_decimal_string_is_exact(self):
        assert as_rational("1.5") == Fraction(3, 2)
        assert as_rational("0.1") == Fraction(1, 10)
        assert as_rational("-2.25") == Fraction(-9, 4)

    def test_fraction_string(self):
        assert as_rational("3/2") == Fraction(3, 2)
        assert as_rational("-7/3") == Fraction(-7, 3)

    def test_int_passthrough(self):
        assert as_rational(4) == Fraction(4)
        assert as_rational(Fraction(2, 7)) == Fraction(2, 7)

    @given(st.integers(-10**6, 10**6), st.integers(0, 9))
    def test_decimal_round_trip(self, whole, frac_digit):
        s = f"{whole}.{frac_digit}"
        v = as_rational(s)
        assert v * 10 == whole * 10 + (frac_digit if whole >= 0 else -frac_digit)

    def test_garbage_rejected(self):
        with pytest.raises((FamilyError, ValueError)):
            as_rational("not a number")


class TestCanonSet:
    def test_sorted_dedup(self):
        assert canon_set([3, 1, 1, 2]) == (1, 2, 3)
        assert canon_set([]) == ()


class TestTableFamily:
    def test_basic_eval(self):
        fam = TableFamily([(0,), (1,)], [[0, 1], [1, 1]])
        assert fam.evaluate(0, (0,)) == 0
        assert fam.evaluate(0, (1,)) == 1
        assert fam.evaluate(1, (0,)) == 1

    def test_rejects_bad_rows(self):
        with pytest.raises(FamilyError):
            TableFamily([(0,)], [[0, 1]])
        with pytest.raises(FamilyError):
            TableFamily([(0,)], [[2]])
        with pytest.raises(FamilyError):
            TableFamily([(0,), (0,)], [[0, 1]])
        with pytest.raises(FamilyError):
            TableFamily([], [[0]])
        with pytest.raises(FamilyError):
            TableFamily([(0,)], [])

    def test_unknown_point_rejected(self):
        fam = TableFamily([(0,), (1,)], [[0, 1]])
        with pytest.raises(FamilyError):
            fam.evaluate(0, (2,))
        with pytest.raises(FamilyError):
            fam.evaluate(0, (0, 0))
        with pytest.raises(FamilyError):
            fam.evaluate(5, (0,))

    def test_descriptor_round_trip(self):
        fam = TableFamily([(0,), (1,)], [[0, 1], [1, 0]])
        again = load_family(json.loads(json.dumps(fam.descriptor())))
        assert again.rows == fam.rows
        assert again.points == fam.points


class TestEvaluateSet:
    def test_empty_set_conventions(self):
        fam = TableFamily([(0,)], [[1]])
        assert evaluate_set(fam, (), (0,), "or") == 0
        assert evaluate_set(fam, (), (0,), "and") == 1

    def test_or_and(self):
        fam = TableFamily([(0,), (1,)], [[0, 1], [1, 0]])
        assert evaluate_set(fam, (0, 1), (0,), "or") == 1
        assert evaluate_set(fam, (0, 1), (0,), "and") == 0


class TestRay22:
    def test_columns(self):
        fam = ray22_family()
        # order f11, f12, f21, f22 over points (1,1),(1,2),(2,1),(2,2)
        assert fam.rows[0] == (1, 1, 1, 1)
        assert fam.rows[1] == (0, 0, 1, 1)
        assert fam.rows[2] == (1, 1, 1, 1)
        assert fam.rows[3] == (0, 1, 0, 1)

    def test_set_equal(self):
        fam = ray22_family()
        assert set_equal(fam, (0,), (0, 1, 2, 3), "or")
        assert not set_equal(fam, (1,), (3,), "or")


class TestLoadFamily:
    def test_unknown_kind(self):
        with pytest.raises(FamilyError):
            load_family({"kind": "mystery"})
        with pytest.raises(FamilyError):
            load_family({"no": "kind"})
        with pytest.raises(FamilyError):
            load_family({"kind": "table"})

    def test_var_ineq(self):
        fam = load_family({"kind": "var_ineq", "n": 3, "pairs": [[1, 2], [2, 3]]})
        assert fam.size == 2
        assert fam.evaluate(0, (3, 2, 1)) == 1
        assert fam.evaluate(0, (1, 2, 3)) == 0

    def test_halfspace(self):
        fam = load_family({"kind": "halfspace", "d": 1, "rows": [["1", "2"]]})
        assert fam.evaluate(0, (Fraction(2),)) == 1
        assert fam.evaluate(0, (Fraction(3, 2),)) == 0

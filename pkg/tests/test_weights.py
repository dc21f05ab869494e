"""Closed-form weight evaluation against independent high-precision oracles."""

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from phardy.numerics import ExponentPair, PrecisionInfeasibleError
from phardy.weights import (
    WeightKind,
    compare_weights,
    eval_w,
    eval_w1_closed,
    eval_w_classical,
    weight_values_float,
)

F = Fraction


def oracle_bits(digits=60):
    return int(digits * 3.33) + 16


class TestSpecialValues:
    def test_w2_at_one(self):
        with mp.workprec(oracle_bits()):
            oracle = 2 - mp.sqrt(2)
        value = eval_w(ExponentPair(2), 1, 30)
        assert abs(value.value - oracle) < mpf(10) ** -30

    def test_w3_at_one(self):
        with mp.workprec(oracle_bits()):
            oracle = 1 - (mp.cbrt(4) - 1) ** 2
        value = eval_w(ExponentPair(3), 1, 30)
        assert abs(value.value - oracle) < mpf(10) ** -30

    def test_w4_at_one_closed(self):
        with mp.workprec(oracle_bits()):
            oracle = 1 - (mpf(2) ** mpf("0.75") - 1) ** 3
        value = eval_w1_closed(ExponentPair(4), 30)
        assert abs(value.value - oracle) < mpf(10) ** -30

    def test_w2_at_two(self):
        # direct closed-form evaluation at 50-digit oracle precision
        with mp.workprec(oracle_bits())        :
            oracle = 2 - mp.sqrt(mpf(1) / 2) - mp.sqrt(mpf(3) / 2)
        value = eval_w(ExponentPair(2), 2, 30)
        assert abs(value.value - oracle) < mpf(10) ** -30

    @pytest.mark.parametrize("p", [F(3, 2), F(2), F(7, 3), F(10)])
    def test_n1_routes_to_closed_form(self, p):
        pair = ExponentPair(p)
        assert eval_w(pair, 1, 35).value == eval_w1_closed(pair, 35).value

    def test_n1_irrational_p(self):
        with mp.workprec(160):
            pair = ExponentPair(mp.sqrt(7), precision_bits=160)
        a = eval_w(pair, 1, 30)
        b = eval_w1_closed(pair, 30)
        assert a.value == b.value


class TestClassicalWeight:
    @pytest.mark.parametrize("p,n,expected", [
        (2, 1, F(1, 4)),
        (2, 2, F(1, 16)),
        (3, 1, F(8, 27)),
    ])
    def test_exact_values(self, p, n, expected):
        value = eval_w_classical(ExponentPair(p), n, 30)
        with mp.workprec(value.precision_bits):
            target = mpf(expected.numerator) / expected.denominator
            assert abs(value.value - target) < mpf(10) ** -28

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            eval_w_classical(ExponentPair(2), 0, 30)

    def test_precision_infeasible(self):
        with pytest.raises(PrecisionInfeasibleError):
            eval_w(ExponentPair(2), 5, 10 ** 7)


class TestCompareWeights:
    def test_ratio_at_two(self):
        # quotient of the two oracle evaluations: w_2(2)/(1/16) - 1
        with mp.workprec(oracle_bits()):
            oracle = (2 - mp.sqrt(mpf(1) / 2) - mp.sqrt(mpf(3) / 2)) * 16 - 1
        table = compare_weights(ExponentPair(2), 2, 2, 30)
        row = table.rows[0]
        assert abs(row.ratio_minus_one.value - oracle) < mpf(10) ** -25
        assert float(row.ratio_minus_one.value) == pytest.approx(0.0903735587, rel=1e-9)

    def test_all_rows_positive_and_sorted(self):
        table = compare_weights(ExponentPair(F(5, 2)), 1, 50, 25)
        assert table.all_verified_positive()
        ns = [row.n for row in table.rows]
        assert ns == sorted(ns) and len(set(ns)) == len(ns)
        assert all(float(row.w_improved.value) > 0 for row in table.rows)

    @pytest.mark.parametrize("p", [F(2), F(7, 2), F(10)])
    def test_large_n_asymptotics(self, p):
        # the relative excess is (3/8 - 1/(8p))/n^2 + O(n^-4):
        # n^2 * (a - lead/n^2) stays bounded as n grows (checked via n^4 scale)
        pair = ExponentPair(p)
        lead = F(3, 8) - 1 / (8 * p)
        for n in (100, 1000, 10000):
            table = compare_weights(pair, n, n, 30)
            a = table.rows[0].ratio_minus_one.value
            with mp.workprec(table.precision_bits):
                residual = n * n * (n * n * a
                                    - mpf(lead.numerator) / lead.denominator)
            assert abs(residual) < 1

    def test_csv_shape_and_digits(self):
        table = compare_weights(ExponentPair(2), 1, 3, 20)
        lines = table.to_csv().splitlines()
        assert lines[0] == "n,w_improved,w_classical,ratio_minus_one"
        assert len(lines) == 4
        first_value = lines[1].split(",")[1]
        mantissa = first_value.replace("0.", "").replace(".", "").lstrip("0")
        assert len(first_value.split(".")[1]) >= 19

    def test_json_round_trip(self):
        import json
        table = compare_weights(ExponentPair(3), 1, 2, 15)
        rows = json.loads(table.to_json())
        assert rows[0]["n"] == 1 and rows[1]["n"] == 2
        assert rows[0]["verified_positive"] is True


class TestSeriesConsistency:
    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_truncated_series_vs_closed_form(self, p):
        # agreement within the first neglected term's magnitude, n >= 2
        from phardy.series import expand_w_integer_p
        order = 12
        e = expand_w_integer_p(p, order + 2)
        next_coeff = e.c[order + 2]
        truncated = expand_w_integer_p(p, order)
        pair = ExponentPair(p)
        for n in (2, 3, 5, 10):
            w = eval_w(pair, n, 30)
            value, _ = truncated.eval_at(F(1, n), precision_bits=120)
            neglected = float(next_coeff) * float(n) ** -(p + order + 2)
            assert abs(float(w.value) - float(value)) <= 2 * neglected


class TestFloatTable:
    def test_matches_high_precision(self):
        pair = ExponentPair(2)
        values = weight_values_float(pair, WeightKind.IMPROVED, 5)
        assert values[0] == pytest.approx(2 - 2 ** 0.5, abs=1e-15)
        classical = weight_values_float(pair, WeightKind.CLASSICAL, 4)
        assert classical[3] == pytest.approx(1 / 64, abs=1e-18)

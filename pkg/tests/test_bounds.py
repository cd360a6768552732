import math
from fractions import Fraction

import pytest

from fmapow import bounds
from fmapow.bounds import (correct_rounding_margin, eta_bound, faithful_limit, linpower_alpha_max,
                           linpower_gamma, linpower_gamma_closed_form, logpower_alpha_max,
                           make_tables, neg_log2_centi)
from fmapow.fixtures import table_fixture, worst_run_lengths
from fmapow.softfloat import ExactValue


def eps2(p):
    return Fraction(1, 4 ** p)


def test_eta_notes():
    assert eta_bound(24).value / eps2(24) <= Fraction(6000001, 10 ** 6)
    assert eta_bound(53).value / eps2(53) <= 6 + Fraction(2, 10 ** 15)
    assert eta_bound(5).value <= 7 * eps2(5)
    assert eta_bound(4).value > 7 * eps2(4)


def test_eta_is_the_polynomial():
    e = Fraction(1, 2 ** 11)
    poly = 6 * e**2 + 16 * e**3 + 17 * e**4 + 11 * e**5 + 5 * e**6 + e**7
    assert eta_bound(11).value == poly


def test_logpower_exact_small_n():
    e = eta_bound(53).value
    b = logpower_alpha_max(3, 53)
    assert b.is_exact and b.value == (1 + e) ** 2 - 1


def test_logpower_examples():
    assert logpower_alpha_max(3, 53).neg_log2 == '102.41'
    assert logpower_alpha_max(10 ** 6, 53).neg_log2 == '83.48'
    assert logpower_alpha_max(3, 64).neg_log2 == '124.41'
    assert logpower_alpha_max(2 ** 32, 53).neg_log2 == '71.41'


def test_logpower_rejects_n_below_two():
    with pytest.raises(ValueError):
        logpower_alpha_max(1, 53)


def test_enclosure_brackets_exact_value():
    # the fixed-point path against the exact rational
    for n in (3, 50, 1000):
        exact = logpower_alpha_max(n, 53).value
        lo, hi = bounds.logpower_alpha_enclosure(n, 53)
        assert lo.as_fraction() <= exact <= hi.as_fraction()
        assert hi.as_fraction() - lo.as_fraction() < exact * Fraction(1, 2 ** 100)


def test_logpower_monotone():
    prev = Fraction(0)
    for n in (2, 3, 7, 100, 10 ** 4, 10 ** 7):
        v = logpower_alpha_max(n, 53).value
        assert v > prev
        prev = v
    assert logpower_alpha_max(100, 24).value > logpower_alpha_max(100, 53).value \
        > logpower_alpha_max(100, 64).value


def test_gamma_small_cases():
    assert linpower_gamma(3, 53).as_fraction() == 2
    # eps -> 0 collapse of the n = 4 sum is 3 + 2
    g = linpower_gamma(4, 200).as_fraction()
    assert 5 < g < 5 + Fraction(1, 2 ** 190)


@pytest.mark.parametrize('n', [3, 4, 5, 10, 57, 100])
def test_gamma_closed_form_agrees(n):
    assert linpower_gamma(n, 53).as_fraction() == linpower_gamma_closed_form(n, 53)
    assert linpower_gamma(n, 7).as_fraction() == linpower_gamma_closed_form(n, 7)


def test_linpower_examples():
    assert linpower_alpha_max(3, 53).neg_log2 == '104.00'
    assert linpower_alpha_max(100, 53).neg_log2 == '92.72'
    b = linpower_alpha_max(5, 53)
    assert b.approx.value == 18 * eps2(53)
    assert b.approx.neg_log2 == '101.83'
    with pytest.raises(ValueError):
        linpower_alpha_max(2, 53)


def test_neg_log2_near_powers_of_two():
    # 2^-k exactly and a value just below it
    assert neg_log2_centi(ExactValue(1, -100), ExactValue(1, -100)) == 10000
    v = ExactValue((1 << 200) - 1, -300)
    assert neg_log2_centi(v, v) == 10000
    assert neg_log2_centi(v, v, 'nearest') == 10000
    w = ExactValue(3, -2)  # -log2(0.75) = 0.415...
    assert neg_log2_centi(w, w) == 41 and neg_log2_centi(w, w, 'nearest') == 42


def test_neg_log2_against_float_log_on_moderate_values():
    for num in range(1, 400, 7):
        q = Fraction(num, 512)
        v = ExactValue.from_fraction(q)
        x = -math.log2(num / 512) * 100
        if abs(x - round(x)) > 1e-6 and abs(x - math.floor(x) - 0.5) > 1e-6:
            assert neg_log2_centi(v, v) == math.floor(x)
            assert neg_log2_centi(v, v, 'nearest') == round(x)


def test_agrees_with_accepts_truncation_or_nearest():
    b = linpower_alpha_max(4, 53)
    assert b.neg_log2 == '102.67'
    assert b.neg_log2_nearest() == '102.68'
    assert b.agrees_with('102.67') and b.agrees_with('102.68')
    assert not b.agrees_with('102.66')


def test_faithful_limits():
    n53 = faithful_limit(53, 53)
    assert 2 ** 48 <= n53 <= 2 ** 50
    assert faithful_limit(64, 53) > n53
    n11 = faithful_limit(11, 11)
    # definition: 2 alpha(n) < 2^-11 holds at n and fails at n + 1
    assert 2 * logpower_alpha_max(n11, 11).value < Fraction(1, 2 ** 11)
    assert 2 * logpower_alpha_max(n11 + 1, 11).value >= Fraction(1, 2 ** 11)
    with pytest.raises(ValueError):
        faithful_limit(11, 53)


def test_margin_examples():
    assert correct_rounding_margin(51, 64, 53, 59)
    assert not correct_rounding_margin(51, 53, 53, 59)
    assert correct_rounding_margin(1, 53, 53, 1000)
    with pytest.raises(ValueError):
        correct_rounding_margin(51, 64, 53, -1)


def test_margin_matches_definition():
    for n, run in ((3, 60), (145, 60), (51, 59), (100, 62)):
        lhs = 2 * logpower_alpha_max(n, 64).value
        assert correct_rounding_margin(n, 64, 53, run) == (lhs <= Fraction(1, 2 ** (53 + run + 1)))


def test_run_length_fixture_all_certified():
    runs = worst_run_lengths()
    assert sorted(runs) == list(range(3, 146))
    assert all(correct_rounding_margin(n, 64, 53, r) for n, r in runs.items())


@pytest.mark.parametrize('p,which', [(53, 'logpower'), (64, 'logpower'), (53, 'linpower')])
def test_tables_cover_published_rows(p, which):
    rows = make_tables(p, which)
    assert [n for n, _ in rows] == [n for n, _ in table_fixture(p, which)]


def test_table_formats():
    rows = make_tables(53, 'linpower')
    csv = bounds.format_table_csv(rows)
    assert csv.splitlines()[0] == 'n,neg_log2' and '3,104.00' in csv
    text = bounds.format_table_text(make_tables(53, 'logpower'))
    assert '2^32' in text and '71.41' in text
    with pytest.raises(ValueError):
        make_tables(53, 'cubic')

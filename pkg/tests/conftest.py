"""Shared helpers: an independent rounding oracle and small-format enumerators."""

import math
from fractions import Fraction

import pytest

from fmapow import softfloat as sf
from fmapow.softfloat import RD, RN, RU, RZ, FpNumber

MODES = (RN, RD, RU, RZ)


def ref_round(q: Fraction, p: int, mode) -> Fraction:
    """Rounding by definition: pick between the two bracketing machine numbers."""
    if q == 0:
        return Fraction(0)
    a = abs(q)
    e = a.numerator.bit_length() - a.denominator.bit_length()
    if Fraction(2) ** e > a:
        e -= 1
    quantum = Fraction(2) ** (e - p + 1)
    k = math.floor(q / quantum)
    lo, hi = k * quantum, (k + 1) * quantum
    if lo == q:
        return q
    if mode == RD:
        return lo
    if mode == RU:
        return hi
    if mode == RZ:
        return lo if q > 0 else hi
    mid = (lo + hi) / 2
    if q != mid:
        return lo if q < mid else hi
    return lo if k % 2 == 0 else hi


def all_numbers(p: int, emin: int, emax: int, signed: bool = True, with_zero: bool = True):
    out = [sf.zero(p)] if with_zero else []
    signs = (1, -1) if signed else (1,)
    for e in range(emin, emax + 1):
        for m in range(1 << (p - 1), 1 << p):
            for s in signs:
                out.append(FpNumber(s, e, m, p))
    return out


def fp(value, p=53) -> FpNumber:
    """Exact conversion of an int, Fraction or float literal."""
    return sf.from_fraction(Fraction(value), p)


@pytest.fixture(scope='session')
def eps53():
    return Fraction(1, 2 ** 53)


def doublewords(p: int, lo_exps):
    """hi over every significand of [1, 2); lo zero or any signed number at the
    given exponents with |lo| <= 2^-p |hi|."""
    from fmapow.eft import DoubleWord
    out = []
    for mh in range(1 << (p - 1), 1 << p):
        hi = FpNumber(1, 0, mh, p)
        out.append(DoubleWord(hi, sf.zero(p)))
        for e in lo_exps:
            shift = -p - e
            for ml in range(1 << (p - 1), 1 << p):
                if ml > (mh << shift):
                    continue
                for s in (1, -1):
                    out.append(DoubleWord(hi, FpNumber(s, e, ml, p)))
    return out


def dbl_mult_rel_error(a, b, result):
    """|x + y - P| / P as an exact Fraction."""
    exact = a.exact() * b.exact()
    if not exact:
        return Fraction(0)
    return abs(result.exact() - exact).as_fraction() / exact.as_fraction()


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(':'))):
            terminalreporter.write_line(line)

"""Error bounds for DblMult, LogPower and LinPower, and the rounding margins.

Bounds are exact dyadic rationals.  When an exact power would be too large
to materialize (huge n), a two-sided fixed-point enclosure built with
floor/ceil integer arithmetic is used instead.  Binary logarithms are
printed from exact integer comparisons, never from ``math.log2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .softfloat import ExactValue, check_precision

__all__ = (
    'ErrorBound', 'eta_bound', 'logpower_alpha_max', 'logpower_alpha_enclosure', 'linpower_gamma',
    'linpower_gamma_closed_form', 'linpower_alpha_max', 'faithful_limit',
    'correct_rounding_margin', 'make_tables', 'LOGPOWER_TABLE_N',
    'LINPOWER_TABLE_N', 'neg_log2_centi', 'format_table_csv', 'format_table_text',
)

LOGPOWER_TABLE_N = (3, 4, 5, 10, 20, 30, 40, 50, 100, 200,
                    1000, 10**4, 10**5, 10**6, 10**7, 10**8, 2**32)
LINPOWER_TABLE_N = (3, 4, 5, 10, 20, 30, 100)

# exact powers are used while the result stays below this many bits
EXACT_BITS = 1 << 18
# mantissa bits kept when extracting digits from a long exact value
_DIGIT_BITS = 1024


# ---------------------------------------------------------------------------
# -log2 in hundredths, by integer comparison against powers of two

def _centi_floor(M: int, s: int) -> int:
    # largest N with M*2**s <= 2**(-N/100)
    return -100 * s - (M ** 100 - 1).bit_length()


def _centi_nearest(M: int, s: int) -> int:
    # largest N with M*2**s <= 2**(-(2N-1)/200); ties cannot occur
    return (-200 * s + 1 - (M ** 200 - 1).bit_length()) // 2


def neg_log2_centi(lower: ExactValue, upper: ExactValue, rounding: str = 'floor') -> Optional[int]:
    """100 * -log2(v) rounded to an integer, for any v in [lower, upper].

    ``rounding`` is ``'floor'`` (truncate the decimal) or ``'nearest'``.
    Returns None when the enclosure straddles a rounding boundary.
    """
    digits = _centi_floor if rounding == 'floor' else _centi_nearest
    if rounding not in ('floor', 'nearest'):
        raise ValueError(f'unknown rounding {rounding!r}')
    if lower.mantissa <= 0:
        raise ValueError('-log2 needs a positive value')
    if lower == upper:
        M, s = lower.mantissa, lower.scale
        keep = _DIGIT_BITS
        while M.bit_length() > keep:
            shift = M.bit_length() - keep
            lo = M >> shift
            a = digits(lo, s + shift)
            if a == digits(lo + 1, s + shift):
                return a
            keep *= 4
        return digits(M, s)
    lo, hi = lower, upper
    if lo.mantissa.bit_length() > _DIGIT_BITS:
        shift = lo.mantissa.bit_length() - _DIGIT_BITS
        lo = ExactValue(lo.mantissa >> shift, lo.scale + shift)
    if hi.mantissa.bit_length() > _DIGIT_BITS:
        shift = hi.mantissa.bit_length() - _DIGIT_BITS
        hi = ExactValue((hi.mantissa >> shift) + 1, hi.scale + shift)
    a = digits(lo.mantissa, lo.scale)
    b = digits(hi.mantissa, hi.scale)
    return a if a == b else None


def _format_centi(N: int) -> str:
    return f'{N // 100}.{N % 100:02d}'


def _parse_centi(text: str) -> int:
    whole, _, frac = text.strip().partition('.')
    if len(frac) != 2:
        raise ValueError(f'expected two decimals: {text!r}')
    return int(whole) * 100 + int(frac)


@dataclass(frozen=True)
class ErrorBound:
    """A relative error bound ``lower <= bound <= upper`` (equal when exact).

    ``neg_log2`` is -log2 of the bound truncated to two decimals, the way
    the published tables print it.
    """

    lower: ExactValue
    upper: ExactValue
    neg_log2: str
    approx: Optional['ErrorBound'] = None

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        """A rigorous upper bound; the exact bound when ``is_exact``."""
        return self.upper.as_fraction()

    def __float__(self) -> float:
        return float(self.upper)

    def neg_log2_nearest(self) -> str:
        N = neg_log2_centi(self.lower, self.upper, 'nearest')
        if N is None:
            raise ArithmeticError('enclosure too wide to round')
        return _format_centi(N)

    def agrees_with(self, printed: str) -> bool:
        """True if ``printed`` is -log2(bound) truncated or rounded to 2 decimals."""
        target = _parse_centi(printed)
        floor = neg_log2_centi(self.lower, self.upper, 'floor')
        nearest = neg_log2_centi(self.lower, self.upper, 'nearest')
        if floor is None or nearest is None:
            raise ArithmeticError('enclosure too wide to decide')
        return target in (floor, nearest)


def _make_bound(lower: ExactValue, upper: ExactValue, approx=None) -> ErrorBound:
    N = neg_log2_centi(lower, upper, 'floor')
    if N is None:
        raise ArithmeticError('enclosure too wide to print')
    return ErrorBound(lower, upper, _format_centi(N), approx)


# ---------------------------------------------------------------------------
# DblMult and LogPower

def _eta_numerator(p: int) -> int:
    # eta_bound * 2**(7p)
    return (6 << 5 * p) + (16 << 4 * p) + (17 << 3 * p) + (11 << 2 * p) + (5 << p) + 1


def eta_bound(p: int) -> ErrorBound:
    """6e^2 + 16e^3 + 17e^4 + 11e^5 + 5e^6 + e^7 with e = 2**-p."""
    check_precision(p)
    v = ExactValue(_eta_numerator(p), -7 * p)
    return _make_bound(v, v)


def _alpha_enclosure(n: int, p: int, bits: int,
                     exact_ok: bool = True) -> Tuple[ExactValue, ExactValue]:
    """Bracket (1 + eta)**(n-1) - 1, exactly when that is affordable."""
    k = n - 1
    D = 7 * p
    base = (1 << D) + _eta_numerator(p)
    if exact_ok and k * (D + 1) <= EXACT_BITS:
        v = ExactValue(base ** k - (1 << D * k), -D * k)
        return v, v
    B = bits
    if B >= D:
        b_lo = b_hi = base << (B - D)
    else:
        b_lo = base >> (D - B)
        b_hi = b_lo + 1
    r_lo = r_hi = 1 << B
    while k:
        if k & 1:
            r_lo = (r_lo * b_lo) >> B
            r_hi = -((-r_hi * b_hi) >> B)
        k >>= 1
        if k:
            b_lo = (b_lo * b_lo) >> B
            b_hi = -((-b_hi * b_hi) >> B)
    one = 1 << B
    return ExactValue(r_lo - one, -B), ExactValue(r_hi - one, -B)


def _default_bits(p: int) -> int:
    return 8 * p + 256


def _check_n(n: int, least: int) -> None:
    if not isinstance(n, int) or n < least:
        raise ValueError(f'n must be an integer >= {least}, got {n!r}')


def logpower_alpha_max(n: int, p: int) -> ErrorBound:
    """(1 + eta)**(n-1) - 1: the relative error bound of LogPower."""
    _check_n(n, 2)
    check_precision(p)
    bits = _default_bits(p)
    for _ in range(12):
        lo, hi = _alpha_enclosure(n, p, bits)
        if (neg_log2_centi(lo, hi, 'floor') is not None
                and neg_log2_centi(lo, hi, 'nearest') is not None):
            return _make_bound(lo, hi)
        bits *= 2
    raise ArithmeticError(f'could not resolve alpha_max for n={n}, p={p}')


def logpower_alpha_enclosure(n: int, p: int) -> Tuple[ExactValue, ExactValue]:
    """Cheap two-sided enclosure of logpower_alpha_max(n, p); (0, 0) for n = 1."""
    _check_n(n, 1)
    if n == 1:
        return ExactValue(0), ExactValue(0)
    return _alpha_enclosure(n, p, _default_bits(p), exact_ok=False)


def _alpha_cmp_pow2(n: int, p: int, k: int) -> int:
    """Sign of logpower_alpha_max(n, p) - 2**-k, certified."""
    threshold = ExactValue(1, -k)
    bits = max(_default_bits(p), 2 * k + 64)
    for _ in range(12):
        lo, hi = _alpha_enclosure(n, p, bits)
        if hi < threshold:
            return -1
        if lo > threshold:
            return 1
        if lo == hi:
            return 0
        bits *= 2
    raise ArithmeticError(f'could not compare alpha_max(n={n}, p={p}) with 2^-{k}')


# ---------------------------------------------------------------------------
# LinPower

def linpower_gamma(n: int, p: int) -> ExactValue:
    """(n-1) + (n-2)(1+e) + ... + 2(1+e)**(n-3), summed exactly (Horner)."""
    _check_n(n, 3)
    check_precision(p)
    q = (1 << p) + 1
    acc = 2
    for j in range(3, n):
        # acc has denominator 2**(p*(j-3)); after the step 2**(p*(j-2))
        acc = acc * q + (j << p * (j - 2))
    return ExactValue(acc, -p * (n - 3))


def linpower_gamma_closed_form(n: int, p: int) -> Fraction:
    """The same coefficient as the derivative at 1 of the geometric sum."""
    _check_n(n, 3)
    e = Fraction(1, 1 << p)
    r = 1 / (1 + e)
    inner = ((n - 1) * r ** n - n * r ** (n - 1) + 1) / (r - 1) ** 2 - 1
    return (1 + e) ** (n - 2) * inner


def linpower_alpha_max(n: int, p: int) -> ErrorBound:
    """2 e^2 gamma, valid under the |v_i| <= 2e|x|^i hypothesis.

    ``approx`` holds the (n^2 - n - 2) e^2 estimate.
    """
    gamma = linpower_gamma(n, p)
    v = gamma.ldexp(1 - 2 * p)
    a = ExactValue(n * n - n - 2, -2 * p)
    return _make_bound(v, v, approx=_make_bound(a, a))


# ---------------------------------------------------------------------------
# faithful and correct rounding

def faithful_limit(p_work: int, p_target: int) -> int:
    """Largest n with 2 * alpha_max(n, p_work) < 2**-p_target."""
    check_precision(p_work)
    check_precision(p_target)
    if p_target > p_work:
        raise ValueError('p_target must not exceed p_work')

    def holds(n):
        return _alpha_cmp_pow2(n, p_work, p_target + 1) < 0

    if not holds(2):
        return 1
    lo, hi = 2, 4
    while holds(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return lo


def correct_rounding_margin(n: int, p_work: int, p_target: int, run_len: int) -> bool:
    """True when 2 * alpha_max(n, p_work) <= 2**-(p_target + run_len + 1).

    Then rounding LogPower's h + l once to ``p_target`` gives the correctly
    rounded x**n for every x whose run after the rounding bit is at most
    ``run_len`` long.
    """
    if run_len < 0:
        raise ValueError('run_len must be >= 0')
    _check_n(n, 1)
    if n == 1:
        return True
    return _alpha_cmp_pow2(n, p_work, p_target + run_len + 2) <= 0


# ---------------------------------------------------------------------------
# tables

def make_tables(precision: int, which: str) -> List[Tuple[int, str]]:
    """(n, -log2 alpha_max) rows for the published n values."""
    if which == 'logpower':
        return [(n, logpower_alpha_max(n, precision).neg_log2) for n in LOGPOWER_TABLE_N]
    if which == 'linpower':
        return [(n, linpower_alpha_max(n, precision).neg_log2) for n in LINPOWER_TABLE_N]
    raise ValueError(f"unknown table {which!r}; expected 'logpower' or 'linpower'")


def _n_label(n: int) -> str:
    if n > 10**8 and n & (n - 1) == 0:
        return f'2^{n.bit_length() - 1}'
    return f'{n:,}'


def format_table_csv(rows) -> str:
    lines = ['n,neg_log2']
    lines += [f'{n},{v}' for n, v in rows]
    return '\n'.join(lines) + '\n'


def format_table_text(rows) -> str:
    """Aligned columns; long tables are split in two like the printed ones."""
    cells = [(_n_label(n), v) for n, v in rows]
    if len(cells) > 8:
        split = (len(cells) + 3) // 2
        left, right = cells[:split], cells[split:]
    else:
        left, right = cells, []
    wn = max(len(c[0]) for c in cells + [('n', '')])
    wv = max(len('-log2(alpha_max)'), max(len(c[1]) for c in cells))
    head = f'{"n":>{wn}} | {"-log2(alpha_max)":>{wv}}'
    out = [head + (f' || {head}' if right else '')]
    out.append('-' * len(out[0]))
    for i, (n, v) in enumerate(left):
        line = f'{n:>{wn}} | {v:>{wv}}'
        if i < len(right):
            rn, rv = right[i]
            line += f' || {rn:>{wn}} | {rv:>{wv}}'
        out.append(line)
    return '\n'.join(out) + '\n'

"""Radix-2 floating-point arithmetic at an arbitrary precision.

Numbers carry their own precision ``p`` and an unbounded exponent, so there
are no subnormals, infinities or overflow.  Every operation computes the
exact result with Python integers and rounds once.
"""

from __future__ import annotations

import math
import re
from enum import IntEnum
from fractions import Fraction
from typing import Union

__all__ = (
    'RoundingMode', 'RN', 'RD', 'RU', 'RZ',
    'ExactValue', 'FpNumber', 'PrecisionError',
    'check_precision', 'fp_round', 'round_fraction',
    'add', 'sub', 'mul', 'fma', 'neg', 'ulp', 'narrow', 'widen',
    'significand_of', 'zero', 'from_int', 'from_fraction',
    'parse_exact', 'parse_fp', 'format_binary', 'format_triple',
)


class RoundingMode(IntEnum):
    NEAREST_EVEN = 0
    TOWARD_NEG_INF = 1
    TOWARD_POS_INF = 2
    TOWARD_ZERO = 3


RN = RoundingMode.NEAREST_EVEN
RD = RoundingMode.TOWARD_NEG_INF
RU = RoundingMode.TOWARD_POS_INF
RZ = RoundingMode.TOWARD_ZERO

_NE, _DOWN, _UP, _ZERO = 0, 1, 2, 3


class PrecisionError(ValueError):
    """Operands of different precisions, or an invalid precision."""


def check_precision(p: int) -> int:
    if not isinstance(p, int) or p < 2:
        raise PrecisionError(f'precision must be an integer >= 2, got {p!r}')
    return p


class ExactValue:
    """The dyadic rational ``mantissa * 2**scale``, kept in canonical form.

    Canonical means the mantissa is odd, or the value is zero with scale 0.
    """

    __slots__ = ('mantissa', 'scale')

    def __init__(self, mantissa: int, scale: int = 0):
        if mantissa:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                scale += tz
        else:
            scale = 0
        self.mantissa = mantissa
        self.scale = scale

    @classmethod
    def from_fraction(cls, q: Union[Fraction, int]) -> 'ExactValue':
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f'{q} is not a dyadic rational')
        return cls(q.numerator, -(den.bit_length() - 1))

    @classmethod
    def pow2(cls, k: int) -> 'ExactValue':
        return cls(1, k)

    def as_fraction(self) -> Fraction:
        if self.scale >= 0:
            return Fraction(self.mantissa << self.scale)
        return Fraction(self.mantissa, 1 << -self.scale)

    def __float__(self) -> float:
        M, s = self.mantissa, self.scale
        extra = abs(M).bit_length() - 64
        if extra > 0:
            # keep 64 bits plus a sticky bit so int -> float rounds correctly
            sticky = 1 if M & ((1 << extra) - 1) else 0
            M = (M >> extra) | sticky
            s += extra
        return math.ldexp(float(M), s)

    def __bool__(self) -> bool:
        return self.mantissa != 0

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def ilog2(self) -> int:
        """floor(log2(|self|)); self must be non-zero."""
        if not self.mantissa:
            raise ValueError('log2 of zero')
        return abs(self.mantissa).bit_length() - 1 + self.scale

    def ldexp(self, k: int) -> 'ExactValue':
        return ExactValue(self.mantissa, self.scale + k)

    def _aligned(self, other):
        s = min(self.scale, other.scale)
        return self.mantissa << (self.scale - s), other.mantissa << (other.scale - s), s

    def __add__(self, other):
        if isinstance(other, FpNumber):
            other = other.to_exact()
        elif isinstance(other, int):
            other = ExactValue(other)
        elif not isinstance(other, ExactValue):
            return NotImplemented
        a, b, s = self._aligned(other)
        return ExactValue(a + b, s)

    __radd__ = __add__

    def __neg__(self):
        return ExactValue(-self.mantissa, self.scale)

    def __sub__(self, other):
        if isinstance(other, (ExactValue, FpNumber, int)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __abs__(self):
        return ExactValue(abs(self.mantissa), self.scale)

    def __mul__(self, other):
        if isinstance(other, FpNumber):
            other = other.to_exact()
        elif isinstance(other, int):
            other = ExactValue(other)
        elif not isinstance(other, ExactValue):
            return NotImplemented
        return ExactValue(self.mantissa * other.mantissa, self.scale + other.scale)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError('negative powers are not dyadic in general')
        return ExactValue(self.mantissa ** n, self.scale * n)

    def _cmp(self, other) -> int:
        if isinstance(other, FpNumber):
            other = other.to_exact()
        elif isinstance(other, int):
            other = ExactValue(other)
        elif isinstance(other, Fraction):
            q = self.as_fraction()
            return (q > other) - (q < other)
        a, b, _ = self._aligned(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if not isinstance(other, (ExactValue, FpNumber, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash(self.as_fraction())

    def __repr__(self):
        return f'ExactValue({self.mantissa}, {self.scale})'


class FpNumber:
    """A precision-``p`` binary floating-point number.

    Non-zero values are ``sign * significand * 2**(exponent - p + 1)`` with
    ``2**(p-1) <= significand < 2**p``.  Zero has significand 0, exponent 0,
    and keeps its sign; it compares equal to zero of either sign.
    """

    __slots__ = ('sign', 'exponent', 'significand', 'precision')

    def __init__(self, sign: int, exponent: int, significand: int, precision: int):
        self.sign = sign
        self.exponent = exponent
        self.significand = significand
        self.precision = precision

    @classmethod
    def make(cls, sign: int, exponent: int, significand: int, precision: int) -> 'FpNumber':
        """Validating constructor."""
        check_precision(precision)
        if sign not in (1, -1):
            raise ValueError('sign must be +1 or -1')
        if significand == 0:
            return cls(sign, 0, 0, precision)
        if not (1 << (precision - 1)) <= significand < (1 << precision):
            raise ValueError(f'significand {significand} is not normalized for p={precision}')
        return cls(sign, exponent, significand, precision)

    @property
    def is_zero(self) -> bool:
        return self.significand == 0

    def to_exact(self) -> ExactValue:
        return ExactValue(self.sign * self.significand, self.exponent - self.precision + 1)

    def as_fraction(self) -> Fraction:
        return self.to_exact().as_fraction()

    def __float__(self) -> float:
        return float(self.as_fraction())

    def __neg__(self) -> 'FpNumber':
        return FpNumber(-self.sign, self.exponent, self.significand, self.precision)

    def __abs__(self) -> 'FpNumber':
        return FpNumber(1, self.exponent, self.significand, self.precision)

    def __eq__(self, other):
        if isinstance(other, FpNumber):
            if other.precision == self.precision:
                if not self.significand:
                    return not other.significand
                return (self.sign == other.sign and self.exponent == other.exponent
                        and self.significand == other.significand)
            return self.to_exact() == other.to_exact()
        if isinstance(other, (ExactValue, int, Fraction)):
            return self.to_exact() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_exact())

    def __lt__(self, other):
        return self.to_exact() < other

    def __le__(self, other):
        return self.to_exact() <= other

    def __gt__(self, other):
        return self.to_exact() > other

    def __ge__(self, other):
        return self.to_exact() >= other

    def __repr__(self):
        return f'FpNumber({format_binary(self)}, p={self.precision})'

    def __str__(self):
        return format_binary(self)


def zero(p: int, sign: int = 1) -> FpNumber:
    return FpNumber(sign, 0, 0, p)


def _round_int(M: int, s: int, p: int, mode: int) -> FpNumber:
    """Round ``M * 2**s`` to ``p`` bits.  M == 0 yields +0."""
    if not M:
        return FpNumber(1, 0, 0, p)
    if M > 0:
        sign = 1
        A = M
    else:
        sign = -1
        A = -M
    shift = A.bit_length() - p
    if shift <= 0:
        return FpNumber(sign, s + p - 1 + shift, A << -shift, p)
    q = A >> shift
    rem = A & ((1 << shift) - 1)
    if rem:
        if mode == _NE:
            half = 1 << (shift - 1)
            inc = rem > half or (rem == half and q & 1)
        elif mode == _UP:
            inc = sign > 0
        elif mode == _DOWN:
            inc = sign < 0
        else:
            inc = False
        if inc:
            q += 1
            if q >> p:
                q >>= 1
                shift += 1
    return FpNumber(sign, s + shift + p - 1, q, p)


def fp_round(v: Union[ExactValue, int], p: int, mode: RoundingMode = RN) -> FpNumber:
    """Correctly round the exact value ``v`` to precision ``p``."""
    check_precision(p)
    if isinstance(v, int):
        return _round_int(v, 0, p, mode)
    return _round_int(v.mantissa, v.scale, p, mode)


def round_fraction(q: Union[Fraction, int, str], p: int, mode: RoundingMode = RN) -> FpNumber:
    """Correctly round an arbitrary rational to precision ``p``."""
    check_precision(p)
    q = Fraction(q)
    if not q:
        return zero(p)
    num, den = abs(q.numerator), q.denominator
    sign = 1 if q > 0 else -1
    # scale so the integer quotient has at least p + 2 bits
    k = p + 2 - (num.bit_length() - den.bit_length())
    if k >= 0:
        quo, rem = divmod(num << k, den)
    else:
        quo, rem = divmod(num, den << -k)
    # fold a non-zero remainder into a sticky bit below the quotient
    M = (quo << 1) | (1 if rem else 0)
    return _round_int(sign * M, -k - 1, p, mode)


def _add_terms(M1: int, s1: int, M2: int, s2: int, p: int, mode: int) -> FpNumber:
    """Round ``M1*2**s1 + M2*2**s2`` to p bits, never building huge shifts."""
    if not M2:
        return _round_int(M1, s1, p, mode)
    if not M1:
        return _round_int(M2, s2, p, mode)
    t1 = s1 + abs(M1).bit_length()
    t2 = s2 + abs(M2).bit_length()
    if t1 < t2:
        M1, s1, t1, M2, s2, t2 = M2, s2, t2, M1, s1, t1
    # a term lying wholly below both the other term's last bit and the
    # rounding position only matters through its sign
    floor = min(s1, t1 - p - 2)
    if t2 < floor:
        M2 = 1 if M2 > 0 else -1
        s2 = floor - 1
    if s1 >= s2:
        M = (M1 << (s1 - s2)) + M2
        s = s2
    else:
        M = M1 + (M2 << (s2 - s1))
        s = s1
    if not M:
        return FpNumber(-1 if mode == _DOWN else 1, 0, 0, p)
    return _round_int(M, s, p, mode)


def _same_precision(a: FpNumber, b: FpNumber) -> int:
    p = a.precision
    if b.precision != p:
        raise PrecisionError(f'precision mismatch: {p} vs {b.precision}')
    return p


def add(a: FpNumber, b: FpNumber, mode: RoundingMode = RN) -> FpNumber:
    p = a.precision
    if b.precision != p:
        raise PrecisionError(f'precision mismatch: {p} vs {b.precision}')
    ma = a.significand
    mb = b.significand
    if not ma:
        if not mb:
            # IEEE signed-zero rule for exact zero sums
            if a.sign == b.sign:
                return a
            return FpNumber(-1 if mode == _DOWN else 1, 0, 0, p)
        return b
    if not mb:
        return a
    ea = a.exponent
    eb = b.exponent
    if a.sign < 0:
        ma = -ma
    if b.sign < 0:
        mb = -mb
    if ea < eb:
        ea, eb, ma, mb = eb, ea, mb, ma
    d = ea - eb
    if d > p + 2:
        # b lies below a's last bit and the rounding position: only its sign matters
        return _round_int((ma << 3) + (1 if mb > 0 else -1), ea - p - 2, p, mode)
    M = (ma << d) + mb
    if not M:
        return FpNumber(-1 if mode == _DOWN else 1, 0, 0, p)
    return _round_int(M, eb - p + 1, p, mode)


def sub(a: FpNumber, b: FpNumber, mode: RoundingMode = RN) -> FpNumber:
    return add(a, FpNumber(-b.sign, b.exponent, b.significand, b.precision), mode)


def neg(a: FpNumber) -> FpNumber:
    return FpNumber(-a.sign, a.exponent, a.significand, a.precision)


def mul(a: FpNumber, b: FpNumber, mode: RoundingMode = RN) -> FpNumber:
    p = _same_precision(a, b)
    if not a.significand or not b.significand:
        return FpNumber(a.sign * b.sign, 0, 0, p)
    return _round_int(a.sign * b.sign * a.significand * b.significand,
                      a.exponent + b.exponent - 2 * p + 2, p, mode)


def fma(a: FpNumber, x: FpNumber, b: FpNumber, mode: RoundingMode = RN) -> FpNumber:
    """``a*x + b`` with a single rounding."""
    p = _same_precision(a, x)
    _same_precision(a, b)
    if not a.significand or not x.significand:
        return add(FpNumber(a.sign * x.sign, 0, 0, p), b, mode)
    P = a.sign * x.sign * a.significand * x.significand
    sP = a.exponent + x.exponent - 2 * p + 2
    if not b.significand:
        return _round_int(P, sP, p, mode)
    return _add_terms(P, sP, b.sign * b.significand, b.exponent - p + 1, p, mode)


def ulp(x: FpNumber) -> ExactValue:
    if not x.significand:
        raise ValueError('ulp of zero is undefined here')
    return ExactValue(1, x.exponent - x.precision + 1)


def narrow(x: FpNumber, p_target: int, mode: RoundingMode = RN) -> FpNumber:
    """Round ``x`` to a smaller precision in one step."""
    check_precision(p_target)
    if p_target > x.precision:
        raise PrecisionError(f'cannot narrow p={x.precision} to wider p={p_target}')
    if not x.significand:
        return FpNumber(x.sign, 0, 0, p_target)
    return _round_int(x.sign * x.significand, x.exponent - x.precision + 1, p_target, mode)


def widen(x: FpNumber, p_target: int) -> FpNumber:
    """Exact conversion to a larger precision."""
    check_precision(p_target)
    if p_target < x.precision:
        raise PrecisionError(f'cannot widen p={x.precision} to narrower p={p_target}')
    return FpNumber(x.sign, x.exponent, x.significand << (p_target - x.precision), p_target)


def significand_of(v: Union[ExactValue, FpNumber]) -> ExactValue:
    """``v / 2**floor(log2|v|)``, sign kept; lies in [1, 2) for positive v."""
    if isinstance(v, FpNumber):
        v = v.to_exact()
    return v.ldexp(-v.ilog2())


def from_int(k: int, p: int) -> FpNumber:
    x = _round_int(k, 0, check_precision(p), _NE)
    if x.to_exact() != k:
        raise ValueError(f'{k} is not representable with p={p}')
    return x


def from_fraction(q: Union[Fraction, int, float], p: int) -> FpNumber:
    """Exact conversion; raises if ``q`` needs rounding."""
    v = ExactValue.from_fraction(Fraction(q))
    x = fp_round(v, p)
    if x.to_exact() != v:
        raise ValueError(f'{q} is not representable with p={p}')
    return x


# ---------------------------------------------------------------------------
# text formats

_BINARY_RE = re.compile(
    r'^\s*(?P<sign>[+-])?(?:0b)?(?P<int>[01]+)(?:\.(?P<frac>[01]*))?'
    r'(?:\s*(?:[x×*]\s*2\s*\^|p)\s*(?P<exp>[+-]?\d+))?\s*$')

_TRIPLE_RE = re.compile(r'^\s*(?P<sign>[+-])\s+0b(?P<mant>[01]+)\s+(?P<p>\d+)\s+(?P<exp>[+-]?\d+)\s*$')


def parse_exact(text: str) -> ExactValue:
    """Parse a binary literal such as ``1.0101``, ``-1.1×2^-3`` or ``1.01p17``."""
    m = _BINARY_RE.match(text)
    if m is None:
        raise ValueError(f'not a binary literal: {text!r}')
    digits = m['int'] + (m['frac'] or '')
    M = int(digits, 2)
    if m['sign'] == '-':
        M = -M
    return ExactValue(M, -len(m['frac'] or '') + int(m['exp'] or 0))


def parse_fp(text: str, p: int = None) -> FpNumber:
    """Parse ``sign 0bMANTISSA p EXP`` or a binary literal (needs ``p``).

    Binary literals must be exactly representable at ``p``.
    """
    m = _TRIPLE_RE.match(text)
    if m is not None:
        prec = int(m['p'])
        if p is not None and p != prec:
            raise PrecisionError(f'literal has p={prec}, expected {p}')
        return FpNumber.make(-1 if m['sign'] == '-' else 1, int(m['exp']), int(m['mant'], 2), prec)
    if p is None:
        raise ValueError('a precision is required for binary literals')
    v = parse_exact(text)
    x = fp_round(v, p)
    if x.to_exact() != v:
        raise ValueError(f'{text!r} has more than {p} significant bits')
    return x


def format_triple(x: FpNumber) -> str:
    """``sign 0bMANTISSA p EXP``, the fixture format read by :func:`parse_fp`."""
    s = '-' if x.sign < 0 else '+'
    return f'{s} 0b{x.significand:b} {x.precision} {x.exponent}'


def format_binary(x: FpNumber) -> str:
    """Human-readable ``1.b2...bp×2^e``."""
    s = '-' if x.sign < 0 else ''
    if not x.significand:
        return s + '0'
    bits = format(x.significand, 'b')
    body = bits[0] + ('.' + bits[1:] if len(bits) > 1 else '')
    if x.exponent:
        body += f'×2^{x.exponent}'
    return s + body

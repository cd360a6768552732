"""Error-free transformations and the double-word product DblMult.

Every function takes an optional ``ops`` argument: the round-to-nearest
arithmetic to run on.  Pass a :class:`FlopCounter` to tally operations.
"""

from __future__ import annotations

from typing import NamedTuple

from . import softfloat as sf
from .softfloat import ExactValue, FpNumber

__all__ = ('DoubleWord', 'FlopCounter', 'PreconditionError',
           'fast2sum', 'two_sum', 'fast2mult', 'dbl_mult')


class PreconditionError(ValueError):
    """An algorithm was called on inputs its error analysis does not cover."""


class _Plain:
    """Uncounted round-to-nearest arithmetic."""
    __slots__ = ()
    add = staticmethod(sf.add)
    sub = staticmethod(sf.sub)
    mul = staticmethod(sf.mul)
    fma = staticmethod(sf.fma)


PLAIN = _Plain()


class FlopCounter:
    """Round-to-nearest arithmetic that counts every operation it performs.

    Create one per measured call; there is no shared state.
    """

    __slots__ = ('count',)

    def __init__(self):
        self.count = 0

    def add(self, a, b):
        self.count += 1
        return sf.add(a, b)

    def sub(self, a, b):
        self.count += 1
        return sf.sub(a, b)

    def mul(self, a, b):
        self.count += 1
        return sf.mul(a, b)

    def fma(self, a, x, b):
        self.count += 1
        return sf.fma(a, x, b)


class DoubleWord(NamedTuple):
    """The unevaluated sum ``hi + lo`` of two numbers of equal precision."""

    hi: FpNumber
    lo: FpNumber

    @classmethod
    def from_fp(cls, x: FpNumber) -> 'DoubleWord':
        return cls(x, sf.zero(x.precision))

    @property
    def precision(self) -> int:
        return self.hi.precision

    def exact(self) -> ExactValue:
        return self.hi.to_exact() + self.lo.to_exact()

    def is_normalized(self) -> bool:
        """True when ``hi`` equals RN(hi + lo)."""
        return sf.fp_round(self.exact(), self.hi.precision) == self.hi

    def __repr__(self):
        return f'DoubleWord(hi={self.hi}, lo={self.lo}, p={self.precision})'


def fast2sum(a: FpNumber, b: FpNumber, ops=None) -> DoubleWord:
    """s = RN(a+b) and the exact error t, assuming exponent(a) >= exponent(b)."""
    if a.significand and b.significand and a.exponent < b.exponent:
        raise PreconditionError(
            f'fast2sum needs exponent(a) >= exponent(b), got {a.exponent} < {b.exponent}')
    ops = ops or PLAIN
    s = ops.add(a, b)
    z = ops.sub(s, a)
    t = ops.sub(b, z)
    return DoubleWord(s, t)


def two_sum(a: FpNumber, b: FpNumber, ops=None) -> DoubleWord:
    ops = ops or PLAIN
    s = ops.add(a, b)
    a1 = ops.sub(s, b)
    b1 = ops.sub(s, a1)
    da = ops.sub(a, a1)
    db = ops.sub(b, b1)
    t = ops.add(da, db)
    return DoubleWord(s, t)


def fast2mult(a: FpNumber, b: FpNumber, ops=None) -> DoubleWord:
    """c = RN(ab) and the exact error d = RN(ab - c) via one fma."""
    ops = ops or PLAIN
    c = ops.mul(a, b)
    d = ops.fma(a, b, sf.neg(c))
    return DoubleWord(c, d)


def _check_tail(w: DoubleWord, name: str) -> None:
    # |lo| <= 2**-p |hi|, compared on exact values
    hi, lo = w.hi, w.lo
    if not lo.significand:
        return
    d = hi.exponent - hi.precision - lo.exponent
    if not hi.significand or (lo.significand > hi.significand << d if d >= 0
                              else lo.significand << -d > hi.significand):
        raise PreconditionError(f'dbl_mult needs |{name}.lo| <= 2^-p |{name}.hi|')


def dbl_mult(a: DoubleWord, b: DoubleWord, ops=None) -> DoubleWord:
    """Approximate product of two double-words in 11 operations.

    The product of the two low parts is dropped; the relative error is at
    most about ``6 * 2**(-2p)``.
    """
    _check_tail(a, 'a')
    _check_tail(b, 'b')
    ops = ops or PLAIN
    ah, al = a
    bh, bl = b
    t = ops.mul(al, bh)
    s = ops.fma(ah, bl, t)
    x1, u = fast2mult(ah, bh, ops)
    x2, v = fast2sum(x1, s, ops)
    y1 = ops.add(u, v)
    return fast2sum(x2, y1, ops)

"""Integer powers x**n returned as double-words, and correctly rounded x**n."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from . import softfloat as sf
from .eft import PLAIN, DoubleWord, FlopCounter, dbl_mult, fast2mult
from .softfloat import FpNumber

__all__ = ('lin_power', 'log_power', 'flop_count', 'measured_flops',
           'crossover', 'PowerRequest', 'pow_correctly_rounded')


def _check(x: FpNumber, n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f'n must be >= 1, got {n!r}')
    if x.is_zero:
        raise ValueError('x must be non-zero')


def lin_power(x: FpNumber, n: int, ops=None) -> DoubleWord:
    """n - 1 exact multiplications; the low parts are gathered Horner-style.

    Costs 3n - 3 operations.
    """
    _check(x, n)
    ops = ops or PLAIN
    h = x
    l = sf.zero(x.precision)
    for _ in range(2, n + 1):
        h, v = fast2mult(h, x, ops)
        l = ops.fma(l, x, v)
    return DoubleWord(h, l)


def log_power(x: FpNumber, n: int, ops=None) -> DoubleWord:
    """Square-and-multiply over :func:`dbl_mult`.

    The closing product runs even when the accumulator is still (1, 0).
    """
    _check(x, n)
    ops = ops or PLAIN
    p = x.precision
    i = n
    acc = DoubleWord.from_fp(sf.from_int(1, p))
    sq = DoubleWord.from_fp(x)
    while i > 1:
        if i & 1:
            acc = dbl_mult(acc, sq, ops)
        sq = dbl_mult(sq, sq, ops)
        i >>= 1
    return dbl_mult(acc, sq, ops)


def flop_count(n: int, algorithm: str) -> Tuple[int, int]:
    """(min, max) operation counts of ``'linear'`` or ``'log'`` powering."""
    if n < 1:
        raise ValueError('n must be >= 1')
    if algorithm == 'linear':
        return 3 * n - 3, 3 * n - 3
    if algorithm == 'log':
        k = n.bit_length() - 1
        return 11 * (1 + k), 11 * (1 + 2 * k)
    raise ValueError(f"algorithm must be 'linear' or 'log', got {algorithm!r}")


def measured_flops(n: int, algorithm: str, p: int = 53) -> int:
    """Operations actually executed when powering 3/2 at precision ``p``."""
    x = sf.from_fraction(1.5, p)
    counter = FlopCounter()
    if algorithm == 'linear':
        lin_power(x, n, counter)
    elif algorithm == 'log':
        log_power(x, n, counter)
    else:
        raise ValueError(f'unknown algorithm {algorithm!r}')
    return counter.count


def crossover(n_max: int = 256) -> Tuple[int, int]:
    """Where LogPower's instrumented count drops below LinPower's.

    Returns ``(first, settled)``: the first n at which LogPower is cheaper,
    and the n from which it stays cheaper for every exponent up to ``n_max``.
    """
    wins = [measured_flops(n, 'log') < measured_flops(n, 'linear')
            for n in range(1, n_max + 1)]
    if not wins[-1]:
        raise ValueError(f'LogPower is not cheaper at n={n_max}')
    first = wins.index(True) + 1
    settled = n_max
    while settled > 1 and wins[settled - 2]:
        settled -= 1
    return first, settled


@dataclass(frozen=True)
class PowerRequest:
    x: FpNumber
    n: int
    work_precision: int = 64
    target_precision: int = 53

    def __post_init__(self):
        sf.check_precision(self.work_precision)
        sf.check_precision(self.target_precision)
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f'n must be >= 1, got {self.n!r}')
        if self.x.is_zero or self.x.sign < 0:
            raise ValueError('x must be positive')
        if self.target_precision > self.work_precision:
            raise sf.PrecisionError('target precision exceeds working precision')
        if self.x.precision > self.work_precision:
            raise sf.PrecisionError('x is wider than the working precision')


def pow_correctly_rounded(req: PowerRequest) -> FpNumber:
    """x**n at the target precision from a LogPower run at the working one.

    h + l is summed exactly and rounded once to the target, so there is
    no intermediate rounding to the working precision.
    """
    x = sf.widen(req.x, req.work_precision)
    h, l = log_power(x, req.n)
    return sf.fp_round(h.to_exact() + l.to_exact(), req.target_precision)

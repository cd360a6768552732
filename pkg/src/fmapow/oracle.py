"""Exact ground truth for powers: x**n with big integers, rounding
classification, runs of identical bits after the rounding bit, and an
exhaustive hardest-to-round search at small precision.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Tuple

from . import softfloat as sf
from .softfloat import RD, RU, ExactValue, FpNumber

__all__ = (
    'exact_pow', 'pow_enclosure', 'Position', 'Classification', 'classify_rounding',
    'RunLength', 'run_length', 'is_faithful', 'ulp_distance', 'ulp_distance_bound',
    'WorstCaseRecord', 'search_worst_cases', 'significands', 'MAX_SEARCH_PRECISION',
)

MAX_SEARCH_PRECISION = 30


def exact_pow(x: FpNumber, n: int) -> ExactValue:
    if n < 1:
        raise ValueError('n must be >= 1')
    if x.is_zero:
        raise ValueError('x must be non-zero')
    return ExactValue((x.sign * x.significand) ** n, (x.exponent - x.precision + 1) * n)


def _trim(M: int, s: int, bits: int, up: bool) -> Tuple[int, int]:
    sh = M.bit_length() - bits
    if sh <= 0:
        return M, s
    q = M >> sh
    if up and (q << sh) != M:
        q += 1
    return q, s + sh


def pow_enclosure(x: FpNumber, n: int, bits: int = 256) -> Tuple[ExactValue, ExactValue]:
    """``lo <= |x|**n <= hi`` with about ``bits`` bits kept at each step.

    Square-and-multiply on integers, truncating down for ``lo`` and up for
    ``hi``; used when the exact power would be impractically long.
    """
    if n < 1:
        raise ValueError('n must be >= 1')
    m, s = x.significand, x.exponent - x.precision + 1
    lo = hi = (1, 0)
    blo = bhi = (m, s)
    k = n
    while k:
        if k & 1:
            lo = _trim(lo[0] * blo[0], lo[1] + blo[1], bits, False)
            hi = _trim(hi[0] * bhi[0], hi[1] + bhi[1], bits, True)
        k >>= 1
        if k:
            blo = _trim(blo[0] * blo[0], 2 * blo[1], bits, False)
            bhi = _trim(bhi[0] * bhi[0], 2 * bhi[1], bits, True)
    return ExactValue(*lo), ExactValue(*hi)


class Position(str, Enum):
    EXACT = 'exact'
    BELOW_MID = 'below_mid'
    AT_MID = 'at_mid'
    ABOVE_MID = 'above_mid'


class Classification(NamedTuple):
    below: FpNumber
    above: FpNumber
    position: Position


def classify_rounding(v: ExactValue, p: int) -> Classification:
    """RD(v), RU(v), and where v sits relative to their midpoint."""
    if not v:
        raise ValueError('v must be non-zero')
    below = sf.fp_round(v, p, RD)
    above = sf.fp_round(v, p, RU)
    if below == above:
        return Classification(below, above, Position.EXACT)
    twice = v.ldexp(1)
    mid = below.to_exact() + above.to_exact()
    if twice < mid:
        pos = Position.BELOW_MID
    elif twice > mid:
        pos = Position.ABOVE_MID
    else:
        pos = Position.AT_MID
    return Classification(below, above, pos)


class RunLength(NamedTuple):
    """Bits of |v| after its first ``p`` significant ones.

    ``rounding_bit`` is bit p+1.  ``run_len`` counts the identical bits
    that follow it and ``next_bit`` is the first bit that differs.  All
    three are None when v is a p-bit number; ``run_len`` and ``next_bit``
    are None when v has exactly p+1 bits (a breakpoint: the run of zeros
    never ends).
    """

    rounding_bit: Optional[int]
    run_len: Optional[int]
    next_bit: Optional[int]

    @property
    def exact(self) -> bool:
        return self.rounding_bit is None


def _run_of_int(A: int, p: int) -> RunLength:
    # A odd and positive
    t = A.bit_length() - p
    if t <= 0:
        return RunLength(None, None, None)
    r = (A >> (t - 1)) & 1
    c = t - 1
    if c == 0:
        return RunLength(r, None, None)
    rest = A & ((1 << c) - 1)
    if rest >> (c - 1):
        ones = c - (rest ^ ((1 << c) - 1)).bit_length()
        return RunLength(r, ones, 0)
    return RunLength(r, c - rest.bit_length(), 1)


def run_length(v: ExactValue, p: int) -> RunLength:
    if not v:
        raise ValueError('v must be non-zero')
    return _run_of_int(abs(v.mantissa), p)


def is_faithful(result: FpNumber, v: ExactValue) -> bool:
    """True iff result is RD(v) or RU(v) at the result's precision."""
    p = result.precision
    return result == sf.fp_round(v, p, RD) or result == sf.fp_round(v, p, RU)


def ulp_distance(result: FpNumber, v: ExactValue) -> Fraction:
    """|result - v| in units of ulp(result)."""
    d = abs(result.to_exact() - v)
    return d.ldexp(-(result.exponent - result.precision + 1)).as_fraction()


def ulp_distance_bound(result: FpNumber, lo: ExactValue, hi: ExactValue) -> Fraction:
    """Largest :func:`ulp_distance` over all v in [lo, hi]."""
    return max(ulp_distance(result, lo), ulp_distance(result, hi))


@dataclass(frozen=True)
class WorstCaseRecord:
    x: FpNumber
    n: int
    rounding_bit: int
    run_len: int
    next_bit: int
    distance_exponent: int

    def to_json(self) -> str:
        return json.dumps({
            'x': sf.format_binary(self.x),
            'p': self.x.precision,
            'n': self.n,
            'rounding_bit': self.rounding_bit,
            'run_len': self.run_len,
            'next_bit': self.next_bit,
            'distance_exponent': self.distance_exponent,
        })

    @classmethod
    def from_json(cls, line: str) -> 'WorstCaseRecord':
        d = json.loads(line)
        return cls(sf.parse_fp(d['x'], d['p']), d['n'], d['rounding_bit'],
                   d['run_len'], d['next_bit'], d['distance_exponent'])


def significands(p: int, start: int = None, stop: int = None) -> Iterator[FpNumber]:
    """All precision-p numbers in [1, 2), in increasing order."""
    lo = 1 << (p - 1)
    for m in range(start if start is not None else lo, stop if stop is not None else 2 * lo):
        yield FpNumber(1, 0, m, p)


def _search_chunk(args):
    p, n, start, stop = args
    best = None
    for m in range(start, stop):
        A = m ** n
        A >>= (A & -A).bit_length() - 1
        r = _run_of_int(A, p)
        if r.run_len is None:
            continue
        if best is None or r.run_len > best[1].run_len:
            best = (m, r)
    return best


def search_worst_cases(p: int, n: int, workers: int = 1) -> Optional[WorstCaseRecord]:
    """The x in [1, 2) at precision p whose x**n has the longest run.

    Exhaustive over 2**(p-1) inputs; the smallest x wins ties.  Returns
    None when every x**n is exactly representable or a breakpoint.
    """
    sf.check_precision(p)
    if p > MAX_SEARCH_PRECISION:
        raise ValueError(f'p={p} means enumerating 2^{p - 1} inputs; '
                         f'the limit is p <= {MAX_SEARCH_PRECISION}')
    if n < 1:
        raise ValueError('n must be >= 1')
    lo, hi = 1 << (p - 1), 1 << p
    parts = max(1, workers) * 4
    step = -(-(hi - lo) // parts)
    chunks = [(p, n, a, min(a + step, hi)) for a in range(lo, hi, step)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            found = list(pool.map(_search_chunk, chunks))
    else:
        found = [_search_chunk(c) for c in chunks]
    best = None
    # chunks are in increasing m order, so a strict > keeps the smallest x
    for item in found:
        if item is not None and (best is None or item[1].run_len > best[1].run_len):
            best = item
    if best is None:
        return None
    m, r = best
    return WorstCaseRecord(FpNumber(1, 0, m, p), n, r.rounding_bit, r.run_len,
                           r.next_bit, p + r.run_len + 1)

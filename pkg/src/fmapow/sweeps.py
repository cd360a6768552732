"""Oracle-checked sweeps of LogPower and LinPower over many (x, n).

Each case becomes a flat dict (one JSON line).  The summary is computed
only from those dicts, so it can be recomputed from the emitted lines.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import softfloat as sf
from .bounds import faithful_limit, linpower_gamma, logpower_alpha_enclosure
from .oracle import exact_pow, pow_enclosure
from .powers import lin_power, log_power
from .softfloat import RD, RN, RU, ExactValue, FpNumber

__all__ = ('exhaustive_cases', 'sampled_cases', 'check_case', 'run_sweep', 'summarize',
           'EXHAUSTIVE_MAX_P')

EXHAUSTIVE_MAX_P = 20
# exact x**n while the mantissa stays under this many bits
_EXACT_POW_BITS = 1 << 17
_ENCLOSURE_BITS = 256


def exhaustive_cases(p: int, ns: Iterable[int]) -> List[Tuple[int, int]]:
    """Every significand of [1, 2) at precision p, for every n."""
    ns = list(ns)
    return [(m, n) for m in range(1 << (p - 1), 1 << p) for n in ns]


def sampled_cases(p: int, n_lo: int, n_hi: int, count: int, seed: int) -> List[Tuple[int, int]]:
    """Uniform significands; n log-uniform on [n_lo, n_hi]."""
    rng = np.random.default_rng(seed)
    lo = 1 << (p - 1)
    if p <= 62:
        ms = rng.integers(lo, 2 * lo, size=count, dtype=np.int64).tolist()
    else:
        words = -(-(p - 1) // 32)
        raw = rng.integers(0, 1 << 32, size=(count, words), dtype=np.int64).tolist()
        ms = [lo + (sum(w << (32 * i) for i, w in enumerate(row)) % lo) for row in raw]
    if n_lo == n_hi:
        ns = [n_lo] * count
    else:
        u = rng.random(count)
        span = math.log(n_hi + 1) - math.log(n_lo)
        ns = [min(n_hi, max(n_lo, int(math.exp(math.log(n_lo) + t * span)))) for t in u.tolist()]
    return list(zip(ms, ns))


@lru_cache(maxsize=4096)
def _log_bound(n: int, p: int) -> Tuple[ExactValue, ExactValue]:
    return logpower_alpha_enclosure(n, p)


@lru_cache(maxsize=256)
def _lin_bound(n: int, p: int) -> ExactValue:
    if n < 3:
        return ExactValue(0)
    return linpower_gamma(n, p).ldexp(1 - 2 * p)


def _reference(x: FpNumber, n: int) -> Tuple[ExactValue, ExactValue]:
    if n * x.precision <= _EXACT_POW_BITS:
        v = exact_pow(x, n)
        return v, v
    return pow_enclosure(x, n, _ENCLOSURE_BITS)


def _ratio(a: ExactValue, b: ExactValue) -> float:
    """a / b as a float without overflow; b > 0."""
    if not a:
        return 0.0
    ka, kb = a.ilog2(), b.ilog2()
    fa = float(a.ldexp(-ka))
    fb = float(b.ldexp(-kb))
    return math.ldexp(fa / fb, ka - kb)


def _alpha(s: ExactValue, vlo: ExactValue, vhi: ExactValue) -> Tuple[ExactValue, ExactValue]:
    # numerator and denominator of an upper bound on |s - v| / v
    return max(abs(s - vlo), abs(s - vhi)), vlo


def _settled(v_lo: ExactValue, v_hi: ExactValue, p: int, mode) -> Optional[FpNumber]:
    a = sf.fp_round(v_lo, p, mode)
    return a if a == sf.fp_round(v_hi, p, mode) else None


def check_case(m: int, n: int, p: int, target: int, lin_max: int = 1000) -> Dict:
    """Run LogPower (and LinPower when n <= lin_max) on x = m * 2**(1-p)."""
    x = FpNumber(1, 0, m, p)
    vlo, vhi = _reference(x, n)
    h, l = log_power(x, n)
    s = h.to_exact() + l.to_exact()
    num, den = _alpha(s, vlo, vhi)
    blo, bhi = _log_bound(n, p)
    # certified when |s - v| <= bound * v holds for the worst ends
    log_ok = num <= blo * den
    bound_f = float(bhi)
    log_alpha = _ratio(num, den)

    r = sf.fp_round(s, target, RN)
    down, up = _settled(vlo, vhi, target, RD), _settled(vlo, vhi, target, RU)
    faithful = None if down is None or up is None else (r == down or r == up)
    nearest = _settled(vlo, vhi, target, RN)
    correct = None if nearest is None else r == nearest
    u = max(abs(r.to_exact() - vlo), abs(r.to_exact() - vhi)).ldexp(
        -(r.exponent - r.precision + 1))

    rec = {
        'x': sf.format_binary(x),
        'n': n,
        'log_alpha': log_alpha,
        'log_bound': bound_f,
        'log_within_bound': bool(log_ok),
        'faithful': faithful,
        'correct': correct,
        'ulp_distance': float(u),
        'lin_alpha': None,
        'lin_bound': None,
        'lin_within_bound': None,
    }
    if n <= lin_max:
        hh, ll = lin_power(x, n)
        num, den = _alpha(hh.to_exact() + ll.to_exact(), vlo, vhi)
        lb = _lin_bound(n, p)
        rec['lin_alpha'] = _ratio(num, den)
        rec['lin_bound'] = float(lb)
        rec['lin_within_bound'] = bool(num <= lb * den)
    return rec


def _check_chunk(args):
    cases, p, target, lin_max = args
    return [check_case(m, n, p, target, lin_max) for m, n in cases]


def run_sweep(cases: Sequence[Tuple[int, int]], p: int, target: int = None,
              lin_max: int = 1000, workers: int = 1, chunk: int = 2048) -> List[Dict]:
    """Check every case; results keep the input order whatever ``workers`` is."""
    target = p if target is None else target
    chunks = [(cases[i:i + chunk], p, target, lin_max) for i in range(0, len(cases), chunk)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_check_chunk, chunks))
    else:
        parts = [_check_chunk(c) for c in chunks]
    return [rec for part in parts for rec in part]


def summarize(records: Sequence[Dict], p: int, target: int = None) -> Dict:
    """Aggregate per-case records.  ``faithful_required`` counts cases with
    n within the proven faithful range."""
    target = p if target is None else target
    limit = faithful_limit(p, target)
    out = {
        'cases': len(records),
        'faithful_limit': limit,
        'log_bound_violations': 0,
        'max_log_alpha_over_bound': 0.0,
        'faithful': 0,
        'unfaithful': 0,
        'unfaithful_within_limit': 0,
        'faithful_undetermined': 0,
        'correct': 0,
        'incorrect': 0,
        'correct_undetermined': 0,
        'max_ulp_distance': 0.0,
        'lin_checked': 0,
        'lin_bound_flags': 0,
        'max_lin_alpha_over_bound': 0.0,
    }
    for r in records:
        if not r['log_within_bound']:
            out['log_bound_violations'] += 1
        if r['log_bound'] > 0:
            out['max_log_alpha_over_bound'] = max(out['max_log_alpha_over_bound'],
                                                  r['log_alpha'] / r['log_bound'])
        if r['faithful'] is None:
            out['faithful_undetermined'] += 1
        elif r['faithful']:
            out['faithful'] += 1
        else:
            out['unfaithful'] += 1
            if r['n'] <= limit:
                out['unfaithful_within_limit'] += 1
        if r['correct'] is None:
            out['correct_undetermined'] += 1
        elif r['correct']:
            out['correct'] += 1
        else:
            out['incorrect'] += 1
        out['max_ulp_distance'] = max(out['max_ulp_distance'], r['ulp_distance'])
        if r['lin_alpha'] is not None:
            out['lin_checked'] += 1
            if not r['lin_within_bound']:
                out['lin_bound_flags'] += 1
            if r['lin_bound']:
                out['max_lin_alpha_over_bound'] = max(out['max_lin_alpha_over_bound'],
                                                      r['lin_alpha'] / r['lin_bound'])
    n = len(records) or 1
    out['faithful_rate'] = out['faithful'] / n
    out['correct_rate'] = out['correct'] / n
    return out

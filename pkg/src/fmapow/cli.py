"""Command-line front end: ``fmapow pow|tables|verify|worstcase``.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Every run
starts with a ``#`` line holding its resolved configuration as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from decimal import MAX_EMAX, MIN_EMIN, Decimal, localcontext
from fractions import Fraction
from typing import List, Optional, Sequence

from . import bounds, fixtures, oracle, softfloat as sf, sweeps
from .powers import PowerRequest, log_power, pow_correctly_rounded

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ENV_WORK = 'FMAPOW_WORK_P'
ENV_TARGET = 'FMAPOW_TARGET_P'

_BINARY_LITERAL = re.compile(r'^[+-]?1\.[01]{16,}$')


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f'{name}={raw!r} is not an integer')


def parse_x(text: str, p: int):
    """Read an input literal at precision p.

    ``0b``-prefixed strings and ``1.bbbb...`` with 16 or more fraction bits
    are binary and must be exact at p; anything else is decimal and is
    rounded to nearest.  Returns (x, how) where ``how`` describes the
    interpretation.
    """
    t = text.strip()
    if t.lower().startswith(('0b', '-0b', '+0b')) or _BINARY_LITERAL.match(t):
        t = t.replace('0b', '').replace('0B', '')
        try:
            v = sf.parse_exact(t)
        except ValueError as exc:
            raise UsageError(f'bad binary literal {text!r}: {exc}')
        x = sf.fp_round(v, p)
        if x.to_exact() != v:
            raise UsageError(f'binary literal {text!r} needs more than {p} bits')
        return x, 'binary'
    try:
        q = Fraction(t)
    except (ValueError, ZeroDivisionError):
        pos = next((i for i, c in enumerate(t) if not (c.isdigit() or c in '+-./eE')), len(t))
        raise UsageError(f'cannot parse x={text!r} (at position {pos})')
    x = sf.round_fraction(q, p)
    return x, 'decimal (exact)' if x.as_fraction() == q else 'decimal (rounded to nearest)'


def parse_n_range(text: str) -> List[int]:
    """``51``, ``3..100`` or ``3,5,7``."""
    try:
        if '..' in text:
            a, b = text.split('..')
            ns = list(range(int(a), int(b) + 1))
        else:
            ns = [int(t) for t in text.split(',')]
    except ValueError:
        raise UsageError(f'bad n range {text!r}')
    if not ns or min(ns) < 1:
        raise UsageError('n must be >= 1')
    return ns


def _decimal(v: sf.ExactValue, digits: int = 20) -> str:
    # M * 2**s in bounded precision; exact binary exponents can be huge
    with localcontext() as ctx:
        ctx.prec = digits + 10
        ctx.Emax, ctx.Emin = MAX_EMAX, MIN_EMIN
        d = Decimal(v.mantissa) * Decimal(2) ** v.scale
        ctx.prec = digits
        return str(+d)


def _header(out, command: str, config: dict) -> None:
    out.write(f'# fmapow {command} ' + json.dumps(config, sort_keys=True) + '\n')


# ---------------------------------------------------------------------------

def cmd_pow(args, out) -> int:
    work = args.work if args.work is not None else _env_int(ENV_WORK, 64)
    target = args.target if args.target is not None else _env_int(ENV_TARGET, 53)
    if args.n < 1:
        raise UsageError('n must be >= 1')
    if target > work:
        raise UsageError('--target must not exceed --work')
    x, how = parse_x(args.x, target)
    if x.sign < 0 or x.is_zero:
        raise UsageError('x must be positive')
    _header(out, 'pow', {'x': args.x, 'x_parsed_as': how, 'n': args.n,
                         'work': work, 'target': target, 'format': args.format})
    result = pow_correctly_rounded(PowerRequest(x, args.n, work, target))
    h, l = log_power(sf.widen(x, work), args.n)
    if args.n * x.precision <= 1 << 20:
        v_lo = v_hi = oracle.exact_pow(x, args.n)
    else:
        v_lo, v_hi = oracle.pow_enclosure(x, args.n)
    cls_lo = oracle.classify_rounding(v_lo, target)
    rn_lo = sf.fp_round(v_lo, target)
    rn_hi = sf.fp_round(v_hi, target)
    correct = result == rn_lo if rn_lo == rn_hi else None
    faithful = (oracle.is_faithful(result, v_lo) and oracle.is_faithful(result, v_hi))
    run = oracle.run_length(v_lo, target) if v_lo == v_hi else None
    report = {
        'x': sf.format_binary(x),
        'n': args.n,
        'result_binary': sf.format_binary(result),
        'result_decimal': _decimal(result.to_exact()),
        'h': sf.format_binary(h),
        'l': sf.format_binary(l),
        'oracle': 'exact' if v_lo == v_hi else 'enclosure',
        'position': cls_lo.position.value if v_lo == v_hi else None,
        'rounding_bit': run.rounding_bit if run else None,
        'run_len': run.run_len if run else None,
        'ulp_distance': float(oracle.ulp_distance_bound(result, v_lo, v_hi)),
        'faithful': faithful,
        'correctly_rounded': correct,
    }
    if run is not None and run.run_len is not None and args.n >= 1:
        report['margin_certified'] = bounds.correct_rounding_margin(
            args.n, work, target, run.run_len)
    if args.format == 'json':
        out.write(json.dumps(report) + '\n')
    else:
        for k, v in report.items():
            out.write(f'{k:>18}: {json.dumps(v) if not isinstance(v, str) else v}\n')
    return EXIT_OK


def cmd_tables(args, out) -> int:
    if args.alg not in ('logpower', 'linpower'):
        raise UsageError(f'unknown table {args.alg!r}')
    if args.diff and not fixtures.has_table_fixture(args.p, args.alg):
        raise UsageError(f'no published table for p={args.p}, {args.alg}')
    _header(out, 'tables', {'p': args.p, 'alg': args.alg, 'diff': args.diff,
                            'format': args.format})
    rows = bounds.make_tables(args.p, args.alg)
    if args.format == 'csv':
        out.write(bounds.format_table_csv(rows))
    elif args.format == 'json':
        for n, v in rows:
            out.write(json.dumps({'n': n, 'neg_log2': v}) + '\n')
    else:
        out.write(bounds.format_table_text(rows))
    if not args.diff:
        return EXIT_OK
    bound = bounds.logpower_alpha_max if args.alg == 'logpower' else bounds.linpower_alpha_max
    bad = 0
    for n, printed in fixtures.table_fixture(args.p, args.alg):
        b = bound(n, args.p)
        if not b.agrees_with(printed):
            bad += 1
            out.write(f'# MISMATCH n={n}: published {printed}, computed {b.neg_log2} '
                      f'(nearest {b.neg_log2_nearest()})\n')
    out.write(f'# diff: {bad} mismatches\n')
    return EXIT_FAIL if bad else EXIT_OK


def cmd_verify(args, out) -> int:
    p = args.p
    target = args.target if args.target is not None else p
    ns = parse_n_range(args.n)
    if target > p:
        raise UsageError('--target must not exceed --p')
    if args.exhaustive == (args.sample is not None):
        raise UsageError('give exactly one of --exhaustive or --sample COUNT')
    if args.exhaustive:
        if p > sweeps.EXHAUSTIVE_MAX_P and not args.force:
            raise UsageError(f'exhaustive sweep at p={p} means 2^{p - 1} x {len(ns)} cases; '
                             f'limit is p <= {sweeps.EXHAUSTIVE_MAX_P} (use --force)')
        cases = sweeps.exhaustive_cases(p, ns)
    else:
        if args.sample < 1:
            raise UsageError('--sample needs a positive count')
        cases = sweeps.sampled_cases(p, min(ns), max(ns), args.sample, args.seed)
    _header(out, 'verify', {'p': p, 'target': target, 'n': args.n,
                            'mode': 'exhaustive' if args.exhaustive else 'sample',
                            'count': len(cases), 'seed': args.seed, 'lin_max': args.lin_max,
                            'format': args.format})
    records = sweeps.run_sweep(cases, p, target, args.lin_max, args.jobs)
    if args.cases:
        with open(args.cases, 'w') as f:
            for r in records:
                f.write(json.dumps(r) + '\n')
    summary = sweeps.summarize(records, p, target)
    if args.format == 'json':
        out.write(json.dumps(summary) + '\n')
    else:
        for k, v in summary.items():
            out.write(f'{k:>26}: {v}\n')
    failed = summary['log_bound_violations'] or summary['unfaithful_within_limit']
    return EXIT_FAIL if failed else EXIT_OK


def cmd_worstcase(args, out) -> int:
    ns = parse_n_range(args.n)
    if args.p > oracle.MAX_SEARCH_PRECISION:
        raise UsageError(f'p={args.p} means enumerating 2^{args.p - 1} inputs; '
                         f'the limit is p <= {oracle.MAX_SEARCH_PRECISION}')
    _header(out, 'worstcase', {'p': args.p, 'n': args.n})
    for n in ns:
        rec = oracle.search_worst_cases(args.p, n, args.jobs)
        if rec is None:
            out.write(json.dumps({'n': n, 'p': args.p, 'exact_everywhere': True}) + '\n')
        else:
            out.write(rec.to_json() + '\n')
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog='fmapow', description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest='command', required=True)

    sp = sub.add_parser('pow', help='correctly rounded x**n via LogPower')
    sp.add_argument('--x', required=True)
    sp.add_argument('--n', type=int, required=True)
    sp.add_argument('--work', type=int, help=f'working precision (default ${ENV_WORK} or 64)')
    sp.add_argument('--target', type=int, help=f'target precision (default ${ENV_TARGET} or 53)')
    sp.add_argument('--format', choices=('text', 'json'), default='text')
    sp.set_defaults(func=cmd_pow)

    sp = sub.add_parser('tables', help='print the alpha_max tables')
    sp.add_argument('--p', type=int, default=53)
    sp.add_argument('--alg', default='logpower')
    sp.add_argument('--format', choices=('text', 'csv', 'json'), default='text')
    sp.add_argument('--diff', action='store_true', help='compare with the published values')
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser('verify', help='oracle-checked sweep of both algorithms')
    sp.add_argument('--p', type=int, required=True)
    sp.add_argument('--target', type=int)
    sp.add_argument('--n', required=True, help='51, 3..100 or 3,5,7')
    sp.add_argument('--exhaustive', action='store_true')
    sp.add_argument('--sample', type=int, metavar='COUNT')
    sp.add_argument('--seed', type=int, default=0)
    sp.add_argument('--jobs', type=int, default=1)
    sp.add_argument('--force', action='store_true')
    sp.add_argument('--lin-max', type=int, default=1000,
                    help='run LinPower only for n up to this')
    sp.add_argument('--cases', metavar='PATH', help='write per-case JSON lines here')
    sp.add_argument('--format', choices=('text', 'json'), default='text')
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser('worstcase', help='exhaustive hardest-to-round search')
    sp.add_argument('--p', type=int, required=True)
    sp.add_argument('--n', required=True)
    sp.add_argument('--jobs', type=int, default=1)
    sp.set_defaults(func=cmd_worstcase)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, sf.PrecisionError) as exc:
        sys.stderr.write(f'error: {exc}\n')
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())

"""Published reference values shipped with the package."""

from __future__ import annotations

import csv
import json
from importlib import resources
from typing import Dict, List, Tuple

from .softfloat import FpNumber, parse_fp

_TABLE_FILES = {
    (53, 'logpower'): 'logpower_p53.csv',
    (64, 'logpower'): 'logpower_p64.csv',
    (53, 'linpower'): 'linpower_p53.csv',
}


def _read(name: str) -> str:
    return resources.files(__package__).joinpath('data', name).read_text()


def table_fixture(precision: int, which: str) -> List[Tuple[int, str]]:
    """Printed (n, -log2 alpha_max) rows; KeyError if nothing was published."""
    name = _TABLE_FILES[(precision, which)]
    return [(int(r['n']), r['neg_log2']) for r in csv.DictReader(_read(name).splitlines())]


def has_table_fixture(precision: int, which: str) -> bool:
    return (precision, which) in _TABLE_FILES


def worst_run_lengths() -> Dict[int, int]:
    """n -> longest run after the rounding bit, double precision, 3 <= n <= 145."""
    rows = csv.DictReader(_read('worst_runs_p53.csv').splitlines())
    return {int(r['n']): int(r['run_len']) for r in rows}


def worst_case() -> dict:
    """The hardest-to-round double-precision input for x**51."""
    return json.loads(_read('worst_case_x51.json'))


def worst_case_x() -> FpNumber:
    d = worst_case()
    return parse_fp(d['x'], d['p'])

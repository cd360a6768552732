"""FMA-based integer powers over an exact soft-float core.

Numbers are :class:`FpNumber` values at an explicit precision p, with an
unbounded exponent range.  :mod:`fmapow.eft` holds the error-free
transformations, :mod:`fmapow.powers` the two powering algorithms,
:mod:`fmapow.bounds` the exact error bounds and :mod:`fmapow.oracle` the
big-integer ground truth.
"""

from .softfloat import (RD, RN, RU, RZ, ExactValue, FpNumber, PrecisionError,
                        RoundingMode, fp_round, parse_exact, parse_fp)
from .eft import DoubleWord, FlopCounter, PreconditionError, dbl_mult, fast2mult, fast2sum, two_sum
from .powers import PowerRequest, crossover, flop_count, lin_power, log_power, pow_correctly_rounded
from .bounds import (ErrorBound, correct_rounding_margin, faithful_limit, linpower_alpha_max,
                     logpower_alpha_max, make_tables)
from .oracle import (WorstCaseRecord, classify_rounding, exact_pow, is_faithful, run_length,
                     search_worst_cases, ulp_distance)

__version__ = '0.1.0'

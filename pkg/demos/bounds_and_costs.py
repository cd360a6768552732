"""
Error bounds and operation counts
=================================

How accurate is each powering algorithm, and from which n is the
logarithmic one cheaper?
"""

import numpy as np

from fmapow.bounds import faithful_limit, format_table_text, make_tables
from fmapow.powers import crossover, flop_count, measured_flops

# %%
# -log2 of the worst relative error, double precision
print(format_table_text(make_tables(53, 'logpower')))
print()
print(format_table_text(make_tables(53, 'linpower')))

# %%
# Rounding h + l to nearest stays faithful up to this exponent
n = faithful_limit(53, 53)
print(f'\nfaithful up to n = {n} (about 2^{np.log2(n):.2f})')

# %%
# Measured operation counts
ns = np.arange(1, 65)
lin = np.array([measured_flops(int(k), 'linear') for k in ns])
log = np.array([measured_flops(int(k), 'log') for k in ns])
lo, hi = np.array([flop_count(int(k), 'log') for k in ns]).T
assert np.all((lo <= log) & (log <= hi))
cheaper = ns[log < lin]
print('LogPower cheaper for n in', cheaper[:8], '...')
print('crossover (first, from then on):', crossover())

"""
How close is RN(h + l) to x**n?
===============================

Sample random doubles and exponents, compare LogPower's rounded result
against the exact power, and look at the distribution of errors in ulps.
"""

import numpy as np

from fmapow import sweeps

p = 53
cases = sweeps.sampled_cases(p, 3, 10 ** 6, 3000, seed=1)
records = sweeps.run_sweep(cases, p, lin_max=0)
summary = sweeps.summarize(records, p)

# %%
ulps = np.array([r['ulp_distance'] for r in records])
counts, edges = np.histogram(ulps, bins=10, range=(0, 0.5))
for c, e in zip(counts, edges):
    print(f'{e:4.2f} {"#" * (c // 10)}')
print('max ulp distance:', ulps.max())
print('correctly rounded:', summary['correct'], 'of', summary['cases'])

# %%
# the relative error against its bound, by size of n
ns = np.array([r['n'] for r in records])
ratio = np.array([r['log_alpha'] / r['log_bound'] for r in records])
for lo, hi in ((3, 100), (100, 10 ** 4), (10 ** 4, 10 ** 6 + 1)):
    sel = (ns >= lo) & (ns < hi)
    print(f'n in [{lo}, {hi}): max alpha/bound = {ratio[sel].max():.3f}')

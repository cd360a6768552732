"""
A hard case for rounding x**51
==============================

Some powers land extremely close to the midpoint between two doubles.
Below, x**51 has a one in the rounding position followed by 59 zeros, so
deciding the rounding direction needs about 113 correct bits.
"""

from fmapow import softfloat as sf
from fmapow.bounds import correct_rounding_margin, logpower_alpha_max
from fmapow.fixtures import worst_case_x
from fmapow.oracle import classify_rounding, exact_pow, run_length
from fmapow.powers import PowerRequest, log_power, pow_correctly_rounded

x = worst_case_x()
v = exact_pow(x, 51)
print('x      =', sf.format_binary(x))
print('x^51   =', sf.format_binary(sf.fp_round(v, 53, sf.RD)), '...')

# %%
# Bits after the 53rd: the rounding bit, then the run
bits = bin(v.mantissa)[2:]
print('tail   =', bits[53:53 + 64])
print('run    =', run_length(v, 53))
print('where  =', classify_rounding(v, 53).position.value)

# %%
# LogPower in double precision cannot resolve it; in 64-bit working
# precision the bound is small enough
for work in (53, 64):
    b = logpower_alpha_max(51, work)
    print(f'work={work}: -log2(alpha_max) = {b.neg_log2}, '
          f'certified: {correct_rounding_margin(51, work, 53, 59)}')

# %%
# Rounding h + l once, straight to 53 bits, gives the right answer
h, l = log_power(sf.widen(x, 64), 51)
got = pow_correctly_rounded(PowerRequest(x, 51, 64, 53))
print('h      =', sf.format_binary(h))
print('l      =', sf.format_binary(l))
print('result =', sf.format_binary(got))
print('equals RN(x^51):', got == sf.fp_round(v, 53))

# %%
# Rounding to 64 bits first lands exactly on the midpoint, and the
# tie-to-even rule then picks the wrong neighbour
h64 = sf.fp_round(h.to_exact() + l.to_exact(), 64)
print('via 64 bits:', classify_rounding(h64.to_exact(), 53).position.value)
print('double rounding correct:', sf.narrow(h64, 53) == got)

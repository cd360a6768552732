"""
Error-free transformations on a soft-float
==========================================

A sum or product of two floating-point numbers is rarely representable,
but the rounding error itself always is.  Fast2Sum, TwoSum and Fast2Mult
return that error as a second number.
"""

from fractions import Fraction

from fmapow import softfloat as sf
from fmapow.eft import DoubleWord, FlopCounter, dbl_mult, fast2mult, fast2sum, two_sum

p = 53
one = sf.from_int(1, p)
tiny = sf.from_fraction(Fraction(1, 2 ** 60), p)

# %%
# 1 + 2^-60 rounds back to 1; the lost part comes back exactly in t
s, t = fast2sum(one, tiny)
print('fast2sum:', s, '+', t)

# TwoSum does not care which operand is larger, at twice the cost
s, t = two_sum(tiny, one)
print('two_sum: ', s, '+', t)

# %%
# With an fma, the error of a product costs one extra operation
a = sf.from_fraction(1 + Fraction(1, 2 ** 52), p)
c, d = fast2mult(a, a)
print('fast2mult:', sf.format_binary(c), '+', sf.format_binary(d))
assert c.to_exact() + d.to_exact() == a.to_exact() * a.to_exact()

# %%
# Products of double-words lose a little: the low*low term is dropped
x = DoubleWord(sf.from_fraction(Fraction(5, 4), p), sf.from_fraction(Fraction(1, 2 ** 55), p))
y = DoubleWord(sf.from_fraction(Fraction(7, 4), p), sf.from_fraction(Fraction(-3, 2 ** 57), p))
ops = FlopCounter()
z = dbl_mult(x, y, ops)
exact = x.exact() * y.exact()
rel = abs(z.exact() - exact).as_fraction() / exact.as_fraction()
print(f'dbl_mult: {ops.count} operations, relative error {float(rel * 4 ** p):.3f} * 2^-106')

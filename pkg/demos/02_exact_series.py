#!/usr/bin/env python3
"""Exact rational expansions of the improved weight in powers of 1/n.

For integer p >= 2 the weight expands as sum_k c_k n^(-p-k) where every odd
c_k cancels and every even c_k is a strictly positive rational; the leading
one is the classical constant ((p-1)/p)^p.  For any p > 1 the relative
correction over the classical weight has its own exact series.  Whether its
even coefficients stay positive for non-integer p is an open question; the
probe below reports what it sees and asserts nothing.
"""

from fractions import Fraction

from phardy import ExponentPair, expand_w_integer_p, expand_correction
from phardy.series import correction_positivity_report

for p in (2, 3, 4):
    e = expand_w_integer_p(p, order=8)
    terms = " + ".join(f"({c})/n^{p + k}"
                       for k, c in enumerate(e.c) if c != 0)
    print(f"w_{p}(n) = {terms} + ...")
print()

for p in (2, 3, 4, Fraction(7, 2)):
    series = expand_correction(ExponentPair(Fraction(p)), order=6)
    print(f"p = {p}: correction a(x) = ({series[2]}) x^2 + ({series[4]}) x^4"
          f" + ({series[6]}) x^6 + ...   [x = 1/n]")
print()

print("Positivity probe for non-integer p (reported, never asserted):")
for p in (Fraction(3, 2), Fraction(5, 2), Fraction(11, 10), Fraction(9, 2)):
    report = correction_positivity_report(ExponentPair(p), order=30)
    status = "all even coefficients positive" if report["all_even_positive"] \
        else f"nonpositive at positions {report['nonpositive_positions']}"
    print(f"  p = {p}: {status} up to order 30")

"""Leading coefficients of node polynomials as functions of delta.

The top N coefficients of N_delta(d), scaled by delta!/3^delta, are
polynomials in delta. This script fits them and compares with N_6.

Run: python demos/leading_coefficients.py [N]
"""
from __future__ import annotations

import sys
from fractions import Fraction
from math import factorial

from nodepoly import TemplateStore, node_polynomial
from nodepoly.coefficients import format_leading_coefficients, leading_coefficients

N = int(sys.argv[1]) if len(sys.argv) > 1 else 5
store = TemplateStore()
cs = leading_coefficients(N, store)
print(format_leading_coefficients(cs))

delta = 6
scale = Fraction(3**delta, factorial(delta))
top = node_polynomial(delta, store).poly.descending()[:N]
print("matches N_6:", [c(delta) * scale for c in cs] == top)

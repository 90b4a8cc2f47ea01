"""Node polynomials for small cogenus, checked against Severi degrees.

Run: python demos/node_polynomials.py
"""
from __future__ import annotations

from nodepoly import TemplateStore, node_polynomial, severi_degree

store = TemplateStore()

for delta in range(1, 5):
    res = node_polynomial(delta, store)
    print(f"N_{delta}(d) = {res.poly.format('d')}")
    # the polynomial agrees with the Severi degree once d is large enough
    row = [(d, str(res(d)), severi_degree(d, delta, store)) for d in range(1, delta + 3)]
    print("  d, N(d), Severi:", row)

"""Prints a small table of Severi degrees (plane curves of degree d with delta nodes).

Run: python demos/severi_table.py [max_degree] [max_delta]
"""
from __future__ import annotations

import sys

from nodepoly import TemplateStore, severi_degree

max_d = int(sys.argv[1]) if len(sys.argv) > 1 else 6
max_delta = int(sys.argv[2]) if len(sys.argv) > 2 else 6

store = TemplateStore()
print("d\\delta " + " ".join(f"{j:>10}" for j in range(max_delta + 1)))
for d in range(1, max_d + 1):
    print(f"{d:<7} " + " ".join(f"{severi_degree(d, j, store):>10}" for j in range(max_delta + 1)))

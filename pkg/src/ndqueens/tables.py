"""Vendored tables of known exact values for the (n,d)-queens problem.

These are published reference values; each entry carries a provenance tag so
reports can distinguish exact values from bounds.  The bounds and ipmodel
modules accept plain {size: value} mappings, which `qmax_for_*` helpers
extract from this table.
"""

from __future__ import annotations

import json

# (n, d) -> |Qmax(n, d)|, the maximum size of a non-attacking placement.
QMAX_EXACT: dict[tuple[int, int], int] = {}

# d = 1: a single queen.
for _n in range(1, 14):
    QMAX_EXACT[(_n, 1)] = 1

# d = 2: n for n >= 4, with the small exceptions.
_QMAX_2D = {1: 1, 2: 1, 3: 2}
for _n in range(1, 28):
    QMAX_EXACT[(_n, 2)] = _QMAX_2D.get(_n, _n)

for _n, _v in enumerate([1, 1, 4, 7, 13, 21, 32, 48, 67, 91, 121], start=1):
    QMAX_EXACT[(_n, 3)] = _v
QMAX_EXACT[(13, 3)] = 169

for _n, _v in enumerate([1, 1, 6, 16, 38, 80, 145], start=1):
    QMAX_EXACT[(_n, 4)] = _v
for _n, _v in enumerate([1, 1, 11, 32], start=1):
    QMAX_EXACT[(_n, 5)] = _v
for _n, _v in enumerate([1, 1, 19, 64], start=1):
    QMAX_EXACT[(_n, 6)] = _v
for _n, _v in enumerate([1, 1, 32, 128], start=1):
    QMAX_EXACT[(_n, 7)] = _v
for _n, _v in enumerate([1, 1, 52], start=1):
    QMAX_EXACT[(_n, 8)] = _v

# Number of size-n placements on (n,2): full-solution counts.
COUNT_2D_FULL = {
    1: 1, 2: 0, 3: 0, 4: 2, 5: 10, 6: 4, 7: 40, 8: 92, 9: 352, 10: 724,
    11: 2680, 12: 14200, 13: 73712, 14: 365596,
}

# (n, d) -> number of maximum-size placements for d >= 3.
COUNT_MAX = {
    (1, 3): 1, (2, 3): 8, (3, 3): 16, (4, 3): 1344, (5, 3): 1056,
    (6, 3): 912, (7, 3): 96, (11, 3): 264, (13, 3): 624,
    (1, 4): 1, (2, 4): 16, (3, 4): 4992, (4, 4): 404564,
    (1, 5): 1, (2, 5): 32, (3, 5): 71154,
}

# (n, d) -> completion threshold qc(n, d).  None marks published-but-open.
QC_EXACT = {
    (1, 3): 1, (2, 3): 1, (3, 3): 0, (4, 3): 1, (5, 3): 0, (6, 3): 0,
    (7, 3): 0, (11, 3): 2,
    (1, 4): 1, (2, 4): 1, (3, 4): 0, (4, 4): 0,
    (1, 5): 1, (2, 5): 1, (3, 5): 0,
}

PROVENANCE = "published reference value"


def qmax(n: int, d: int) -> int | None:
    """Known exact |Qmax(n,d)|, or None."""
    if d >= 1 and n <= 2:
        return 1 if n >= 1 else None
    if d == 1:
        return 1
    return QMAX_EXACT.get((n, d))


def qmax_for_divisors(n: int, d: int) -> dict[int, int]:
    """{m: |Qmax(m,d)|} for the known divisors m of n (tiling bound input)."""
    return {
        m: v for (m, dd), v in QMAX_EXACT.items() if dd == d and m <= n and n % m == 0
    }


def qmax_for_lower_dims(n: int, d: int) -> dict[int, int]:
    """{d': |Qmax(n,d')|} for known d' < d (layer bound input)."""
    return {dd: v for (m, dd), v in QMAX_EXACT.items() if m == n and dd < d}


def qmax_for_sizes(d: int, sizes) -> dict[int, int]:
    """{m: |Qmax(m,d)|} for the requested sizes, known entries only."""
    out = {}
    for m in sizes:
        v = qmax(m, d)
        if v is not None:
            out[m] = v
    return out


def load_table(path: str) -> dict[tuple[int, int], int]:
    """Read a user-supplied {"d": {"n": value}} JSON table."""
    with open(path, "r", encoding="ascii") as fh:
        raw = json.load(fh)
    table = {}
    for d_str, row in raw.items():
        for n_str, value in row.items():
            table[(int(n_str), int(d_str))] = int(value)
    return table

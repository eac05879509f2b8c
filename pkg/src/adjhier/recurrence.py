"""Exact dynamic programming for the core level-count recurrence.

Counts new sets per level through the triangular family b(n, m) = number
of sets first appearing at level n whose elements all lie in level m.
For n > m >= 0,

    b(n, m) = b(n, m-1)
            + sum_{k=1}^{n-m-1} b(n-k, m-1) * C(b(m, m-1), k)
            + C(b(m, m-1), n-m) * sum_{j=0}^{m} b(j, j-1)

with base column b(0, -1) = 1 and b(n, -1) = 0 for n >= 1, and the
convention C(a, k) = 0 when a < k.  Level sizes are the prefix sums
a(n) = sum_{j<=n} b(j, j-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .variants import HierarchySpec


def binomial_big(a: int, k: int) -> int:
    """Exact C(a, k): falling-factorial product divided by k! at the end.

    Returns 0 when a < k and 1 when k = 0; a may be arbitrarily large.
    """
    if k < 0:
        raise ValueError("k must be a natural number")
    if k == 0:
        return 1
    if a < k:
        return 0
    num = 1
    for i in range(k):
        num *= a - i
    return num // math.factorial(k)


@dataclass
class BTable:
    """Filled triangle of b(n, m) values plus level-size prefix sums.

    ``rows[n][j]`` holds b(n, j-1), so each row carries its base column
    (j = 0 is m = -1) through the diagonal (j = n is m = n-1).  Immutable
    once filled; safe to share across threads.
    """

    variant: HierarchySpec
    n_max: int
    rows: list = field(repr=False)
    a: list = field(repr=False)

    def b(self, n: int, m: int) -> int:
        if not (0 <= n <= self.n_max and -1 <= m < max(n, 1)):
            raise IndexError(f"b({n}, {m}) outside the filled triangle")
        return self.rows[n][m + 1]

    def c(self, n: int) -> int:
        """Number of sets first appearing at level n; c(0) = b(0, -1) = 1."""
        return self.rows[n][n]


def compute_b_table(n_max: int, variant: HierarchySpec | None = None) -> BTable:
    """Fill the triangle column-by-column (m increasing, n increasing)."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rows = [[1]] + [[0] * (n + 1) for n in range(1, n_max + 1)]
    a = [0] * (n_max + 1)
    a[0] = 1
    for m in range(n_max):
        cm = rows[m][m]
        if m >= 1:
            a[m] = a[m - 1] + cm
        am = a[m]
        for n in range(m + 1, n_max + 1):
            s = rows[n][m]
            # C(cm, k) vanishes past cm, so the middle sum can stop early
            for k in range(1, min(n - m - 1, cm) + 1):
                s += rows[n - k][m] * binomial_big(cm, k)
            s += binomial_big(cm, n - m) * am
            rows[n][m + 1] = s
    if n_max >= 1:
        a[n_max] = a[n_max - 1] + rows[n_max][n_max]
    return BTable(variant or HierarchySpec.plain(), n_max, rows, a)


def c_sequence(table: BTable) -> list:
    """[c(0), ..., c(n_max)]: new sets per level."""
    return [table.c(n) for n in range(table.n_max + 1)]


def a_sequence(table: BTable) -> list:
    """[a(0), ..., a(n_max)]: cumulative level sizes."""
    return list(table.a)

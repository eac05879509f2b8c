"""Rank-refined, cardinality-refined, and atoms-variant count recurrences.

Both refinements restrict the triangle cells of the core recurrence by a
threshold t: the rank refinement counts new-at-level-n sets inside level
m whose classical rank is at most t, the cardinality refinement those of
cardinality at most t.  Exact per-value profiles fall out by differencing
the diagonal cells.  The atoms variant reruns the core recurrence with u
urelements folded into the base cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .recurrence import BTable, binomial_big, compute_b_table


@dataclass
class RefinedTable:
    """Threshold-indexed triangle cells for one refinement kind.

    Cell vectors live at (n, m) for 0 <= m < n <= n_max.  The rank kind
    defines thresholds 0 <= t <= m+1, the cardinality kind 0 <= t <= n;
    reads below range give 0 and reads above range saturate, mirroring
    the set definitions (rank of a subset of level m is at most m+1,
    cardinality of a level-n member at most n).
    """

    kind: str  # "rank" | "cardinality"
    n_max: int
    cells: dict = field(repr=False)

    def _t_cap(self, n: int, m: int) -> int:
        return m + 1 if self.kind == "rank" else n

    def value(self, n: int, m: int, t: int) -> int:
        if t < 0:
            return 0
        if m == -1:
            return 1 if n == 0 else 0
        if not (0 <= m < n <= self.n_max):
            raise IndexError(f"cell ({n}, {m}) outside the filled triangle")
        return self.cells[(n, m)][min(t, self._t_cap(n, m))]

    def diagonal(self, m: int, t: int) -> int:
        """value(m, m-1, t); the profile building block."""
        return self.value(m, m - 1, t) if m >= 1 else (1 if t >= 0 else 0)


def compute_r_table(n_max: int) -> RefinedTable:
    """Rank refinement; binomials draw from the t-1 slice of the diagonal."""
    table = RefinedTable("rank", n_max, {})
    v = table.value
    for m in range(n_max):
        for n in range(m + 1, n_max + 1):
            cell = []
            for t in range(m + 2):
                dv = table.diagonal(m, t - 1)
                s = v(n, m - 1, t)
                for k in range(1, min(n - m - 1, dv) + 1):
                    s += v(n - k, m - 1, t) * binomial_big(dv, k)
                s += binomial_big(dv, n - m) * sum(
                    table.diagonal(j, t) for j in range(m + 1))
                cell.append(s)
            table.cells[(n, m)] = cell
    return table


def compute_d_table(n_max: int, b_table: BTable | None = None) -> RefinedTable:
    """Cardinality refinement; binomials use the unrefined diagonal c(m)."""
    if b_table is None:
        b_table = compute_b_table(n_max)
    if b_table.n_max < n_max:
        raise ValueError("plain table too shallow for requested depth")
    table = RefinedTable("cardinality", n_max, {})
    v = table.value
    for m in range(n_max):
        cm = b_table.c(m)
        for n in range(m + 1, n_max + 1):
            cell = []
            for t in range(n + 1):
                s = v(n, m - 1, t)
                for k in range(1, min(n - m - 1, cm) + 1):
                    s += v(n - k, m - 1, t - k) * binomial_big(cm, k)
                s += binomial_big(cm, n - m) * sum(
                    table.diagonal(j, t - (n - m)) for j in range(m + 1))
                cell.append(s)
            table.cells[(n, m)] = cell
    return table


def _profile(table: RefinedTable, n: int) -> dict:
    if not 0 <= n <= table.n_max:
        raise IndexError(f"profile level {n} beyond depth {table.n_max}")
    return {
        t: sum(table.diagonal(m, t) - table.diagonal(m, t - 1)
               for m in range(n + 1))
        for t in range(n + 1)
    }


def r_profile(table: RefinedTable, n: int) -> dict:
    """Exact histogram {rank: count} over level n; values sum to a(n)."""
    if table.kind != "rank":
        raise ValueError("rank profile needs a rank-refined table")
    return _profile(table, n)


def d_profile(table: RefinedTable, n: int) -> dict:
    """Exact histogram {cardinality: count} over level n."""
    if table.kind != "cardinality":
        raise ValueError("cardinality profile needs a cardinality-refined table")
    return _profile(table, n)


@dataclass
class AtomsTable:
    """Core recurrence rerun with u urelements in the base cases.

    Base column b(0, -1) = u + 1 (the empty set plus the atoms), closed
    base row b(n, 0) = C(u+1, n) for n >= 1, and the trailing sum starts
    at 1 because only the empty set, not an atom, can absorb adjunctions.
    """

    u: int
    n_max: int
    rows: list = field(repr=False)
    sizes: list = field(repr=False)  # |level n| including atoms

    def b(self, n: int, m: int) -> int:
        if not (0 <= n <= self.n_max and -1 <= m < max(n, 1)):
            raise IndexError(f"b({n}, {m}) outside the filled triangle")
        return self.rows[n][m + 1]


def compute_atoms_table(u: int, n_max: int) -> AtomsTable:
    if u < 0:
        raise ValueError("atom count must be nonnegative")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rows = [[u + 1]] + [[0] * (n + 1) for n in range(1, n_max + 1)]
    for n in range(1, n_max + 1):
        rows[n][1] = binomial_big(u + 1, n)
    tail = 1  # 1 + sum of diagonal cells from level 1 upward
    for m in range(1, n_max):
        cm = rows[m][m]
        tail += cm
        for n in range(m + 1, n_max + 1):
            s = rows[n][m]
            for k in range(1, min(n - m - 1, cm) + 1):
                s += rows[n - k][m] * binomial_big(cm, k)
            s += binomial_big(cm, n - m) * tail
            rows[n][m + 1] = s
    sizes = [u + 1]
    for n in range(1, n_max + 1):
        sizes.append(sizes[-1] + rows[n][n])
    return AtomsTable(u, n_max, rows, sizes)

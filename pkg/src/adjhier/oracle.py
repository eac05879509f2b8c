"""Brute-force construction of hierarchy levels as explicit set collections.

Each level is built by literally applying its defining equation over the
interned universe of a dedicated :class:`~adjhier.hfs.SetEngine`, and is
stored as a dense bitset over ids, so membership and subset tests are
integer bit operations.  The resulting ground-truth counts are what the
recurrence modules are checked against at small depth.

Depth defaults keep the full suite fast; they are configuration, not
constants (pass ``depth_cap``/``level_size_cap`` to override).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ResourceCapError
from .hfs import SetEngine
from .variants import HierarchySpec

DEFAULT_DEPTH_CAPS = {
    "plain": 5,
    "minbounded": 5,
    "atoms": 4,
    "cumulative": 5,
    "bounded": None,  # guarded by level size instead
}
DEFAULT_LEVEL_SIZE_CAP = 200_000


def iter_bits(v: int):
    """Indices of set bits, ascending."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


@dataclass
class LevelSets:
    """Materialized levels of one hierarchy."""

    spec: HierarchySpec
    engine: SetEngine
    levels: list = field(repr=False)  # bitsets over engine ids
    atom_ids: tuple = ()

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def size(self, n: int) -> int:
        return self.levels[n].bit_count()

    def sizes(self) -> list:
        return [lv.bit_count() for lv in self.levels]

    def members(self, n: int) -> list:
        return list(iter_bits(self.levels[n]))

    def contains(self, n: int, sid: int) -> bool:
        return bool(self.levels[n] >> sid & 1)

    def new_members(self, n: int) -> list:
        """Members of level n absent from level n-1."""
        prev = self.levels[n - 1] if n >= 1 else 0
        return list(iter_bits(self.levels[n] & ~prev))


def _check_depth(kind: str, n_max: int, depth_cap):
    cap = DEFAULT_DEPTH_CAPS[kind] if depth_cap is None else depth_cap
    if cap is not None and n_max > cap:
        raise ResourceCapError(
            f"{kind} oracle depth {n_max} exceeds cap {cap}",
            level=n_max, cap=cap)


def build_levels(spec: HierarchySpec, n_max: int, *,
                 depth_cap=None, level_size_cap=DEFAULT_LEVEL_SIZE_CAP) -> LevelSets:
    """Materialize levels 0..n_max of the given adjunctive variant."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if spec.kind == "plain":
        _check_depth("plain", n_max, depth_cap)
        return _build_plain(spec, n_max)
    if spec.kind == "atoms":
        # the default depth keeps the pair loop affordable; many atoms
        # inflate the levels, so the default tightens past u = 3
        if depth_cap is None and spec.u > 3:
            depth_cap = 3
        _check_depth("atoms", n_max, depth_cap)
        return _build_atoms(spec, n_max)
    if spec.kind == "bounded":
        _check_depth("bounded", n_max, depth_cap)
        return _build_bounded(spec, n_max, level_size_cap)
    if spec.kind == "minbounded":
        _check_depth("minbounded", n_max, depth_cap)
        return _build_minbounded(spec, n_max)
    raise ValueError(f"build_levels does not handle {spec.kind!r}")


def _build_plain(spec, n_max):
    eng = SetEngine()
    empty = eng.empty().id
    levels = [1 << empty]
    for _ in range(n_max):
        mem = list(iter_bits(levels[-1]))
        nxt = 1 << empty
        for x in mem:
            for y in mem:
                nxt |= 1 << eng.adjoin_ids(x, y)
        levels.append(nxt)
    return LevelSets(spec, eng, levels)


def _build_atoms(spec, n_max):
    eng = SetEngine(n_atoms=spec.u)
    empty = eng.empty().id
    atom_ids = tuple(range(spec.u))
    base = 1 << empty
    for a in atom_ids:
        base |= 1 << a
    levels = [base]
    for _ in range(n_max):
        mem = list(iter_bits(levels[-1]))
        nxt = base
        for x in mem:
            if eng.is_atom(x):
                continue  # atoms never absorb an adjunction
            for y in mem:
                nxt |= 1 << eng.adjoin_ids(x, y)
        levels.append(nxt)
    return LevelSets(spec, eng, levels, atom_ids)


def _build_bounded(spec, n_max, level_size_cap):
    eng = SetEngine()
    empty = eng.empty().id
    f = spec.f
    levels = [1 << empty]
    for n in range(n_max):
        xs = list(iter_bits(levels[n]))
        ys = list(iter_bits(levels[f(n)]))
        nxt = 1 << empty
        for x in xs:
            for y in ys:
                nxt |= 1 << eng.adjoin_ids(x, y)
        if level_size_cap is not None and nxt.bit_count() > level_size_cap:
            raise ResourceCapError(
                f"bounded oracle level {n + 1} has {nxt.bit_count()} sets "
                f"(cap {level_size_cap})", level=n + 1, cap=level_size_cap)
        levels.append(nxt)
    return LevelSets(spec, eng, levels)


def _build_minbounded(spec, n_max):
    eng = SetEngine()
    empty = eng.empty().id
    levels = [1 << empty]
    elem_sets = {empty: ()}
    # subset_count[m] = |{x in deepest level : x subseteq level m}|,
    # updated incrementally as members and levels appear
    subset_count = [1]

    def covers(m, elems):
        lv = levels[m]
        return all(lv >> e & 1 for e in elems)

    for n in range(n_max):
        # largest m whose full power set is already present; m = -1 always
        # qualifies because P(empty family) = {empty set}
        witness = -1
        for m in range(n, -1, -1):
            if subset_count[m] == 1 << levels[m].bit_count():
                witness = m
                break
        ys = list(iter_bits(levels[witness + 1]))
        xs = list(iter_bits(levels[n]))
        nxt = 1 << empty
        for x in xs:
            ex = elem_sets[x]
            for y in ys:
                sid = eng.adjoin_ids(x, y)
                if not nxt >> sid & 1:
                    nxt |= 1 << sid
                    if sid not in elem_sets:
                        elem_sets[sid] = eng.elements_of(sid)
        levels.append(nxt)
        added = nxt & ~levels[n]
        for m in range(len(subset_count)):
            subset_count[m] += sum(
                1 for sid in iter_bits(added) if covers(m, elem_sets[sid]))
        subset_count.append(nxt.bit_count())  # every member is inside its own level
    return LevelSets(spec, eng, levels)


def build_cumulative(n_max: int, *, depth_cap=None) -> LevelSets:
    """Iterated power-set levels; level 0 is empty, level n+1 = P(level n)."""
    _check_depth("cumulative", n_max, depth_cap)
    eng = SetEngine()
    levels = [0]
    for _ in range(n_max):
        mem = eng.sort_ids(iter_bits(levels[-1]))
        nxt = 0
        for mask in range(1 << len(mem)):
            picked = tuple(mem[i] for i in iter_bits(mask))
            nxt |= 1 << eng.intern_sorted_ids(picked)
        levels.append(nxt)
    return LevelSets(HierarchySpec.cumulative(), eng, levels)


def partition_counts(ls: LevelSets, n: int, m: int) -> int:
    """Members new at level n whose elements all lie in level m."""
    if not 0 <= m < n <= ls.depth:
        raise IndexError(f"partition ({n}, {m}) outside computed levels")
    lv_m = ls.levels[m]
    eng = ls.engine
    total = 0
    for sid in ls.new_members(n):
        if all(lv_m >> e & 1 for e in eng.elements_of(sid)):
            total += 1
    return total


def partition_split(ls: LevelSets, n: int, m: int) -> dict:
    """The same count split by k = #elements that are new at level m."""
    if not 0 <= m < n <= ls.depth:
        raise IndexError(f"partition ({n}, {m}) outside computed levels")
    lv_m = ls.levels[m]
    ring = lv_m & ~(ls.levels[m - 1] if m >= 1 else 0)
    eng = ls.engine
    split = {}
    for sid in ls.new_members(n):
        elems = eng.elements_of(sid)
        if all(lv_m >> e & 1 for e in elems):
            k = sum(1 for e in elems if ring >> e & 1)
            split[k] = split.get(k, 0) + 1
    return split


def profile_counts(ls: LevelSets, n: int, by: str) -> dict:
    """Histogram of level n members by rank or cardinality.

    Atoms count as rank 0 and cardinality 0; pure variants are the ones
    cross-checked against the refined recurrences.
    """
    if not 0 <= n <= ls.depth:
        raise IndexError(f"level {n} beyond computed depth {ls.depth}")
    eng = ls.engine
    if by == "rank":
        key = eng.rank_id
    elif by == "cardinality":
        key = eng.cardinality_id
    else:
        raise ValueError("profile axis must be 'rank' or 'cardinality'")
    hist = {}
    for sid in ls.members(n):
        t = key(sid)
        hist[t] = hist.get(t, 0) + 1
    return dict(sorted(hist.items()))


@dataclass
class ArkReport:
    """Outcome of checking recursive adjunctive rank against level membership."""

    total: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self):
        return f"ark lemma {self.total - len(self.mismatches)}/{self.total}"


def verify_ark_lemma(ls: LevelSets) -> ArkReport:
    """Every deepest-level member: first level containing it == its ark."""
    if ls.spec.kind != "plain":
        raise ValueError("ark verification is defined on the plain hierarchy")
    eng = ls.engine
    deepest = ls.depth
    mismatches = []
    total = 0
    for sid in ls.members(deepest):
        total += 1
        by_levels = next(n for n in range(deepest + 1) if ls.contains(n, sid))
        by_formula = eng.ark_id(sid)
        if by_levels != by_formula:
            mismatches.append((eng.format_id(sid), by_levels, by_formula))
    return ArkReport(total, mismatches)


def level_lines(ls: LevelSets, n: int) -> list:
    """Members of level n in canonical order, one notation per line."""
    eng = ls.engine
    return [eng.format_id(sid) for sid in eng.sort_ids(ls.members(n))]


def summary(ls: LevelSets, checks=None) -> dict:
    return {
        "spec": ls.spec.descriptor(),
        "sizes": [str(s) for s in ls.sizes()],
        "checks": checks or [],
    }

"""Interned hereditarily finite sets with adjunction and two rank notions.

A :class:`SetEngine` owns an append-only intern table mapping element
tuples to dense integer ids, so extensional equality is id equality and
level sets can be stored as bitsets over ids.  Atoms (urelements) occupy a
reserved id range ``0..n_atoms-1`` at the bottom of the table.

The canonical total order on sets compares the element sequences in
descending order lexicographically (recursing into elements); on pure
sets this is exactly the numeric order of their Ackermann codes.  All
operations are pure given the table; inserts must be serialized by the
caller (single-writer), reads are safe to share.
"""

from __future__ import annotations

import functools

from .errors import ResourceCapError

DEFAULT_CODE_BIT_BUDGET = 1 << 20


class SetEngine:
    """Intern table plus rank/ark/code caches for one universe of sets."""

    def __init__(self, n_atoms: int = 0, atom_labels=None,
                 code_bit_budget: int = DEFAULT_CODE_BIT_BUDGET):
        if atom_labels is not None and len(atom_labels) != n_atoms:
            raise ValueError("atom_labels length must equal n_atoms")
        self.code_bit_budget = code_bit_budget
        self._elems = []        # id -> sorted tuple of element ids, None for atoms
        self._label = []        # id -> display label (atoms only)
        self._rank = []         # id -> classical rank
        self._ark = []          # id -> adjunctive rank
        self._has_atom = []     # id -> atom occurs in transitive closure
        self._intern = {}       # element tuple -> id
        self._codes = {}        # id -> Ackermann code (only within bit budget)
        self._decoded = {}      # code -> id
        self._cmp_cache = {}
        for i in range(n_atoms):
            self._elems.append(None)
            self._label.append(atom_labels[i] if atom_labels else f"u{i + 1}")
            self._rank.append(0)
            self._ark.append(0)
            self._has_atom.append(True)
        self.n_atoms = n_atoms
        self._empty_id = self.intern_sorted_ids(())

    # -- construction ------------------------------------------------------

    def intern_sorted_ids(self, elems: tuple) -> int:
        """Intern a duplicate-free tuple of ids already in canonical order."""
        found = self._intern.get(elems)
        if found is not None:
            return found
        sid = len(self._elems)
        self._elems.append(elems)
        self._label.append(None)
        if elems:
            self._rank.append(1 + max(self._rank[e] for e in elems))
            arks = sorted(self._ark[e] for e in elems)
            n = len(arks)
            self._ark.append(1 + max(a + n - 1 - j for j, a in enumerate(arks)))
            self._has_atom.append(any(self._has_atom[e] for e in elems))
        else:
            self._rank.append(0)
            self._ark.append(0)
            self._has_atom.append(False)
        self._intern[elems] = sid
        return sid

    def adjoin_ids(self, x: int, y: int) -> int:
        """Id of ``x with y added``; returns ``x`` itself when y is a member."""
        ex = self._elems[x]
        if ex is None:
            raise ValueError("cannot adjoin an element to an atom")
        lo, hi = 0, len(ex)
        while lo < hi:
            mid = (lo + hi) // 2
            c = self.compare_ids(ex[mid], y)
            if c == 0:
                return x
            if c < 0:
                lo = mid + 1
            else:
                hi = mid
        return self.intern_sorted_ids(ex[:lo] + (y,) + ex[lo:])

    # -- canonical order ---------------------------------------------------

    def compare_ids(self, a: int, b: int) -> int:
        """Canonical order: -1, 0 or 1.

        Atoms sort below every set and among themselves by id.  Sets are
        compared as descending element sequences, lexicographically, with
        element comparisons recursing.  On pure sets this agrees with the
        numeric order of Ackermann codes.
        """
        if a == b:
            return 0
        key = (a, b)
        cached = self._cmp_cache.get(key)
        if cached is not None:
            return cached
        ea, eb = self._elems[a], self._elems[b]
        if ea is None or eb is None:
            if ea is None and eb is None:
                c = -1 if a < b else 1
            else:
                c = -1 if ea is None else 1
        else:
            c = 0
            for x, y in zip(reversed(ea), reversed(eb)):
                if x != y:
                    c = self.compare_ids(x, y)
                    break
            if c == 0:
                # one descending sequence is a prefix of the other
                c = -1 if len(ea) < len(eb) else 1
        self._cmp_cache[key] = c
        self._cmp_cache[(b, a)] = -c
        return c

    def sort_ids(self, ids) -> list:
        """Sort ids into canonical order."""
        return sorted(ids, key=functools.cmp_to_key(self.compare_ids))

    # -- queries -----------------------------------------------------------

    def elements_of(self, sid: int) -> tuple:
        elems = self._elems[sid]
        if elems is None:
            raise ValueError("atoms have no elements")
        return elems

    def is_atom(self, sid: int) -> bool:
        return self._elems[sid] is None

    def rank_id(self, sid: int) -> int:
        return self._rank[sid]

    def ark_id(self, sid: int) -> int:
        return self._ark[sid]

    def cardinality_id(self, sid: int) -> int:
        elems = self._elems[sid]
        return 0 if elems is None else len(elems)

    def contains_atom(self, sid: int) -> bool:
        return self._has_atom[sid]

    @property
    def size(self) -> int:
        """Number of interned nodes (atoms included)."""
        return len(self._elems)

    # -- Ackermann coding ----------------------------------------------------

    def code_of_id(self, sid: int) -> int:
        """Ackermann code: 0 for the empty set, else sum of 2**code(element).

        Refuses with :class:`ResourceCapError` when the code would need
        more than ``code_bit_budget`` bits; sets containing atoms have no
        code and raise ValueError.
        """
        code = self._codes.get(sid)
        if code is not None:
            return code
        if self._elems[sid] is None:
            raise ValueError("atoms have no Ackermann code")
        if self._has_atom[sid]:
            raise ValueError("sets containing atoms have no Ackermann code")
        budget = self.code_bit_budget
        total = 0
        for e in self._elems[sid]:
            c = self.code_of_id(e)
            if c + 1 > budget:
                raise ResourceCapError(
                    f"Ackermann code would exceed {budget} bits", cap=budget)
            total += 1 << c
        self._codes[sid] = total
        return total

    def decode_id(self, code: int) -> int:
        """Inverse of :meth:`code_of_id` (pure sets only)."""
        if code < 0:
            raise ValueError("codes are nonnegative")
        if code.bit_length() > self.code_bit_budget:
            raise ResourceCapError(
                f"code has more than {self.code_bit_budget} bits",
                cap=self.code_bit_budget)
        cached = self._decoded.get(code)
        if cached is not None:
            return cached
        ids = []
        rest = code
        while rest:
            low = rest & -rest
            ids.append(self.decode_id(low.bit_length() - 1))
            rest ^= low
        # bit positions increase, so element ids are already in canonical order
        sid = self.intern_sorted_ids(tuple(ids))
        self._decoded[code] = sid
        return sid

    # -- textual notation ----------------------------------------------------

    def format_id(self, sid: int) -> str:
        if self._elems[sid] is None:
            return self._label[sid]
        return "{" + ",".join(self.format_id(e) for e in self._elems[sid]) + "}"

    def parse(self, text: str) -> HFSet:
        """Parse pure-set notation like ``{{},{{}}}`` (whitespace ignored)."""
        sid, pos = self._parse_at(text, 0)
        pos = _skip_ws(text, pos)
        if pos != len(text):
            raise ValueError(f"trailing input at offset {pos}: {text[pos:]!r}")
        return HFSet(self, sid)

    def _parse_at(self, text: str, pos: int):
        pos = _skip_ws(text, pos)
        if pos >= len(text) or text[pos] != "{":
            raise ValueError(f"expected '{{' at offset {pos}")
        pos = _skip_ws(text, pos + 1)
        sid = self._empty_id
        if pos < len(text) and text[pos] == "}":
            return sid, pos + 1
        while True:
            elem, pos = self._parse_at(text, pos)
            sid = self.adjoin_ids(sid, elem)
            pos = _skip_ws(text, pos)
            if pos >= len(text):
                raise ValueError("unterminated set")
            if text[pos] == ",":
                pos = _skip_ws(text, pos + 1)
                continue
            if text[pos] == "}":
                return sid, pos + 1
            raise ValueError(f"expected ',' or '}}' at offset {pos}")

    # -- handles -------------------------------------------------------------

    def empty(self) -> HFSet:
        return HFSet(self, self._empty_id)

    def atom(self, index: int) -> HFSet:
        if not 0 <= index < self.n_atoms:
            raise IndexError("no such atom")
        return HFSet(self, index)

    def wrap(self, sid: int) -> HFSet:
        return HFSet(self, sid)


def _skip_ws(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


class HFSet:
    """Handle to one interned node of a :class:`SetEngine`."""

    __slots__ = ("engine", "id")

    def __init__(self, engine: SetEngine, sid: int):
        object.__setattr__(self, "engine", engine)
        object.__setattr__(self, "id", sid)

    def __setattr__(self, name, value):
        raise AttributeError("HFSet handles are immutable")

    @property
    def elements(self):
        eng = self.engine
        return tuple(HFSet(eng, e) for e in eng.elements_of(self.id))

    @property
    def cardinality(self) -> int:
        return self.engine.cardinality_id(self.id)

    @property
    def is_atom(self) -> bool:
        return self.engine.is_atom(self.id)

    @property
    def rank(self) -> int:
        return self.engine.rank_id(self.id)

    @property
    def ark(self) -> int:
        return self.engine.ark_id(self.id)

    def adjoin(self, other: HFSet) -> HFSet:
        _check_same_engine(self, other)
        return HFSet(self.engine, self.engine.adjoin_ids(self.id, other.id))

    def code(self) -> int:
        return self.engine.code_of_id(self.id)

    def __len__(self):
        return self.cardinality

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, other):
        return (isinstance(other, HFSet) and other.engine is self.engine
                and other.id in self.engine.elements_of(self.id))

    def __eq__(self, other):
        return (isinstance(other, HFSet) and other.engine is self.engine
                and other.id == self.id)

    def __hash__(self):
        return hash((id(self.engine), self.id))

    def __lt__(self, other):
        _check_same_engine(self, other)
        return self.engine.compare_ids(self.id, other.id) < 0

    def __le__(self, other):
        _check_same_engine(self, other)
        return self.engine.compare_ids(self.id, other.id) <= 0

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __str__(self):
        return self.engine.format_id(self.id)

    def __repr__(self):
        return f"HFSet({self})"


def _check_same_engine(x: HFSet, y: HFSet):
    if x.engine is not y.engine:
        raise ValueError("sets belong to different engines")


# Module-level convenience API over a shared default engine.

_DEFAULT_ENGINE = SetEngine()


def default_engine() -> SetEngine:
    return _DEFAULT_ENGINE


def empty_set(engine: SetEngine | None = None) -> HFSet:
    return (engine or _DEFAULT_ENGINE).empty()


def adjoin(x: HFSet, y: HFSet) -> HFSet:
    return x.adjoin(y)


def rank(x: HFSet) -> int:
    return x.rank


def ark(x: HFSet) -> int:
    return x.ark


def ackermann_code(x: HFSet) -> int:
    return x.code()


def decode_ackermann(code: int, engine: SetEngine | None = None) -> HFSet:
    eng = engine or _DEFAULT_ENGINE
    return eng.wrap(eng.decode_id(code))


def parse_set(text: str, engine: SetEngine | None = None) -> HFSet:
    return (engine or _DEFAULT_ENGINE).parse(text)

"""Hierarchy variant descriptors shared by the table and oracle modules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .bounded import BoundFunction

KINDS = ("plain", "atoms", "bounded", "minbounded", "cumulative")


@dataclass(frozen=True)
class HierarchySpec:
    """Which hierarchy a level set or count table describes."""

    kind: str
    u: int = 0
    f: Optional["BoundFunction"] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown hierarchy kind {self.kind!r}")
        if self.kind == "atoms" and self.u < 0:
            raise ValueError("atom count must be nonnegative")
        if self.kind == "bounded" and self.f is None:
            raise ValueError("bounded hierarchies need a bound function")

    @classmethod
    def plain(cls) -> "HierarchySpec":
        return cls("plain")

    @classmethod
    def atoms(cls, u: int) -> "HierarchySpec":
        return cls("atoms", u=u)

    @classmethod
    def bounded(cls, f: "BoundFunction") -> "HierarchySpec":
        return cls("bounded", f=f)

    @classmethod
    def min_bounded(cls) -> "HierarchySpec":
        return cls("minbounded")

    @classmethod
    def cumulative(cls) -> "HierarchySpec":
        return cls("cumulative")

    def descriptor(self) -> dict:
        """JSON-able description; inverse of :meth:`from_descriptor`."""
        d = {"kind": self.kind}
        if self.kind == "atoms":
            d["u"] = str(self.u)
        if self.kind == "bounded":
            d["f"] = self.f.descriptor()
        return d

    @classmethod
    def from_descriptor(cls, d: dict) -> "HierarchySpec":
        kind = d.get("kind")
        if kind == "atoms":
            return cls.atoms(int(d["u"]))
        if kind == "bounded":
            from .bounded import BoundFunction
            return cls.bounded(BoundFunction.from_descriptor(d["f"]))
        return cls(kind)

    def __str__(self):
        if self.kind == "atoms":
            return f"atoms(u={self.u})"
        if self.kind == "bounded":
            return f"bounded(f={self.f})"
        return self.kind

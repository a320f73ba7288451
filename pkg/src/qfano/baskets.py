"""Baskets of terminal cyclic quotient points and their basic invariants.

A pair ``(b, r)`` stands for a quotient singularity of type 1/r(1, -1, b)
with ``gcd(b, r) = 1`` and ``r >= 2``.  The germ only depends on ``{b, r-b}``,
so points are stored with the canonical representative ``0 < b <= r/2``;
constructing a point with ``b > r/2`` folds it automatically.  A basket is a
finite multiset of such points, kept sorted by ``(r, b)``; the empty basket
is the Gorenstein case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Iterator


@dataclass(frozen=True)
class OrbifoldPoint:
    """One cyclic quotient point 1/r(1, -1, b), canonicalized to b <= r/2."""

    b: int
    r: int

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ValueError(f"point index r must be >= 2, got r={self.r}")
        if not 0 < self.b < self.r:
            raise ValueError(f"weight b must lie in (0, r), got b={self.b}, r={self.r}")
        if gcd(self.b, self.r) != 1:
            raise ValueError(f"weight and index must be coprime, got b={self.b}, r={self.r}")
        if 2 * self.b > self.r:
            object.__setattr__(self, "b", self.r - self.b)

    @property
    def weight(self) -> Fraction:
        """The summand r - 1/r this point contributes to the degree bound."""
        return Fraction(self.r * self.r - 1, self.r)

    def __str__(self) -> str:
        return f"{self.b}/{self.r}"


def _point_key(p: OrbifoldPoint) -> tuple[int, int]:
    return (p.r, p.b)


@dataclass(frozen=True)
class Basket:
    """A multiset of orbifold points in canonical (r, b) order."""

    points: tuple[OrbifoldPoint, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(sorted(self.points, key=_point_key)))

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "Basket":
        """Build from (b, r) pairs: Basket.of((1, 3), (2, 7), (3, 7))."""
        return cls(tuple(OrbifoldPoint(b, r) for b, r in pairs))

    @classmethod
    def parse(cls, text: str) -> "Basket":
        """Parse the comma-separated form 'b/r,b/r,...'; '' is the empty basket."""
        text = text.strip()
        if not text:
            return cls()
        points = []
        for chunk in text.split(","):
            part = chunk.strip()
            try:
                b_str, r_str = part.split("/")
                points.append(OrbifoldPoint(int(b_str), int(r_str)))
            except ValueError as exc:
                raise ValueError(f"bad basket entry {part!r} in {text!r}") from exc
        return cls(tuple(points))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[OrbifoldPoint]:
        return iter(self.points)

    @property
    def sort_key(self) -> tuple[tuple[int, int], ...]:
        return tuple(_point_key(p) for p in self.points)

    @cached_property
    def gorenstein_index(self) -> int:
        """lcm of the point indices r; 1 for the empty basket."""
        return lcm(*(p.r for p in self.points))

    @cached_property
    def singularity_sum(self) -> Fraction:
        """sum over the basket of (r - 1/r); 0 for the empty basket."""
        return sum((p.weight for p in self.points), Fraction(0))

    @cached_property
    def c2c1(self) -> Fraction:
        """The pairing c2(X).c1(X) = 24 - sum(r - 1/r) forced by the basket."""
        return 24 - self.singularity_sum

    @property
    def r_multiset(self) -> tuple[int, ...]:
        """The indices r with multiplicity, sorted ascending."""
        return tuple(p.r for p in self.points)

    @property
    def r_set_str(self) -> str:
        """Display form of the index multiset, e.g. '{3,7^2}'; '{}' when empty."""
        return format_r_multiset(self.r_multiset)


def format_r_multiset(rs: Iterable[int]) -> str:
    """Render a multiset of indices with '^' exponents: (3, 7, 7) -> '{3,7^2}'."""
    rs = sorted(rs)
    parts = []
    i = 0
    while i < len(rs):
        j = i
        while j < len(rs) and rs[j] == rs[i]:
            j += 1
        count = j - i
        parts.append(f"{rs[i]}^{count}" if count > 1 else str(rs[i]))
        i = j
    return "{" + ",".join(parts) + "}"


def parse_r_multiset(text: str) -> tuple[int, ...]:
    """Parse '{3,7^2}' (braces optional) into the sorted index multiset (3, 7, 7)."""
    raw = text.strip()
    if raw.startswith("{") and raw.endswith("}"):
        raw = raw[1:-1]
    raw = raw.strip()
    if not raw:
        return ()
    out: list[int] = []
    for chunk in raw.split(","):
        part = chunk.strip()
        try:
            if "^" in part:
                base_str, exp_str = part.split("^")
                base, exp = int(base_str), int(exp_str)
            else:
                base, exp = int(part), 1
        except ValueError as exc:
            raise ValueError(f"bad index entry {part!r} in {text!r}") from exc
        if base < 2 or exp < 1:
            raise ValueError(f"bad index entry {part!r} in {text!r}")
        out.extend([base] * exp)
    return tuple(sorted(out))

"""Slope combinatorics for the tangent sheaf of a Q-Fano threefold.

Write -K_X = qA with A the primitive ample class.  If the tangent sheaf is
not semistable with respect to A, the pieces of its Harder-Narasimhan
filtration have degrees q_i*A and ranks r_i with

    sum r_i = 3,   sum q_i = q,   q_i >= 1,   q_1/r_1 > ... strictly decreasing,

and the top slope exceeds the average: q_1/r_1 > q/3.  A rank-one top piece
is a subsheaf of T_X, so it also obeys the cap 2*q_1 < q (strict; the
sharper terminal cap (2r+1) q_1 <= r q is available behind a flag).  From a
destabilising pair (q_1, r_1) the discriminant inequality for the pieces
yields the effective ratio bound

    b = 6 / (2 - (3 q_1 - q r_1)^2 / (r_1 (3 - r_1) q^2)),

so c1^3 <= b * c2.c1 whenever T_X is unstable; the semistable case gives
c1^3 < 3 c2.c1 outright.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class HNType:
    """One candidate Harder-Narasimhan shape for index q."""

    q: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(self.pairs) < 2:
            raise ValueError("an unstable filtration has at least two pieces")
        if sum(r for _, r in self.pairs) != 3:
            raise ValueError(f"ranks must sum to 3, got {self.pairs}")
        if sum(qi for qi, _ in self.pairs) != self.q:
            raise ValueError(f"degrees must sum to q={self.q}, got {self.pairs}")
        if any(qi < 1 or ri < 1 for qi, ri in self.pairs):
            raise ValueError(f"degrees and ranks must be positive, got {self.pairs}")
        slopes = [Fraction(qi, ri) for qi, ri in self.pairs]
        if any(a <= b for a, b in zip(slopes, slopes[1:])):
            raise ValueError(f"slopes must strictly decrease, got {self.pairs}")
        if slopes[0] <= Fraction(self.q, 3):
            raise ValueError(f"top slope must exceed q/3, got {self.pairs}")

    @property
    def top_pair(self) -> tuple[int, int]:
        return self.pairs[0]


def _rank_one_cap_ok(q: int, q1: int, terminal_index: int | None) -> bool:
    # Canonical cap, strict per the case analysis that removes (q, q1) = (6, 3)
    # and (8, 4); with a Gorenstein index r the terminal cap (2r+1) q1 <= r q.
    if terminal_index is None:
        return 2 * q1 < q
    r = terminal_index
    return (2 * r + 1) * q1 <= r * q


def hn_types(q: int, terminal_index: int | None = None) -> list[HNType]:
    """All candidate HN shapes (length 2 or 3) for index q, sorted by top pair.

    The default rank-one cap is the strict canonical one, 2*q1 < q; passing a
    Gorenstein index r tightens it to (2r+1)*q1 <= r*q.  Empty for q <= 3.
    """
    if q < 1:
        raise ValueError(f"index q must be >= 1, got q={q}")
    if terminal_index is not None and terminal_index < 1:
        raise ValueError(f"Gorenstein index must be >= 1, got {terminal_index}")
    found: list[HNType] = []

    # Two pieces: ranks (1, 2) or (2, 1).
    for r1 in (1, 2):
        r2 = 3 - r1
        for q1 in range(1, q):
            q2 = q - q1
            if Fraction(q1, r1) <= Fraction(q2, r2):
                continue
            if 3 * q1 <= q * r1:
                continue
            if r1 == 1 and not _rank_one_cap_ok(q, q1, terminal_index):
                continue
            found.append(HNType(q, ((q1, r1), (q2, r2))))

    # Three pieces: all ranks 1, strictly decreasing degrees.
    for q1 in range(1, q):
        if 3 * q1 <= q or not _rank_one_cap_ok(q, q1, terminal_index):
            continue
        for q2 in range(1, q1):
            q3 = q - q1 - q2
            if 1 <= q3 < q2:
                found.append(HNType(q, ((q1, 1), (q2, 1), (q3, 1))))

    found.sort(key=lambda t: (t.pairs[0], t.pairs[1:]))
    return found


def destabilizing_pairs(q: int, terminal_index: int | None = None) -> list[tuple[int, int]]:
    """The distinct top pairs (q1, r1) over hn_types(q), in sorted order."""
    seen: dict[tuple[int, int], None] = {}
    for t in hn_types(q, terminal_index):
        seen.setdefault(t.top_pair)
    return sorted(seen)


def langer_bound(q: int, q1: int, r1: int) -> Fraction:
    """The ratio bound 6 / (2 - (3q1 - q r1)^2 / (r1 (3-r1) q^2)), always > 3.

    Requires a destabilising pair: r1 in {1, 2}, 1 <= q1 < q and 3 q1 > q r1.
    """
    if r1 not in (1, 2):
        raise ValueError(f"top rank must be 1 or 2, got r1={r1}")
    if not 1 <= q1 < q:
        raise ValueError(f"need 1 <= q1 < q, got q1={q1}, q={q}")
    if 3 * q1 <= q * r1:
        raise ValueError(f"(q1, r1)=({q1}, {r1}) does not destabilise for q={q}")
    spread = Fraction((3 * q1 - q * r1) ** 2, r1 * (3 - r1) * q * q)
    return 6 / (2 - spread)


def table2(q: int) -> dict[int, Fraction]:
    """Worst-case (maximal) Langer bound per top rank r1, for 4 <= q <= 8.

    Keys are the r1 values that actually occur for this q; a rank with no
    destabilising pair is simply absent.
    """
    if not 4 <= q <= 8:
        raise ValueError(f"bound table covers 4 <= q <= 8, got q={q}")
    return _bounds_by_rank(q)


def _bounds_by_rank(q: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for q1, r1 in destabilizing_pairs(q):
        b = langer_bound(q, q1, r1)
        if r1 not in out or b > out[r1]:
            out[r1] = b
    return out


@dataclass(frozen=True)
class KmBound:
    """A ratio bound c1^3 <= value * c2.c1 together with where it comes from."""

    value: Fraction
    source: str


def km_bound(q: int) -> KmBound:
    """The effective bound on c1^3 / c2.c1 for a Q-Fano threefold of index q."""
    if q < 1:
        raise ValueError(f"index q must be >= 1, got q={q}")
    if q <= 3:
        return KmBound(Fraction(3), "Bogomolov-Gieseker (tangent sheaf semistable or not, q <= 3)")
    if q <= 8:
        value = max(Fraction(3), *table2(q).values())
        return KmBound(value, "max of 3 and the slope-instability bounds")
    return KmBound(Fraction(121, 41), "external: [Prokhorov2010, Prop 3.6]")


@dataclass(frozen=True)
class ConeData:
    """Invariants of the cone construction witnessing sharpness of the caps."""

    ql: int
    qx: int
    canonical: bool
    terminal: bool
    cap_ratio: Fraction


def cone_data(i: int, m: int) -> ConeData:
    """Cone over a degree-m twist on a Fano manifold of index i.

    The distinguished rank-one subsheaf of the tangent sheaf has degree m*A
    against the cone's anticanonical degree (m + i)*A; the cone is canonical
    iff 0 < m <= i and terminal iff 0 < m < i.
    """
    if i < 1 or m < 1:
        raise ValueError(f"need i >= 1 and m >= 1, got i={i}, m={m}")
    return ConeData(
        ql=m,
        qx=m + i,
        canonical=m <= i,
        terminal=m < i,
        cap_ratio=Fraction(m, m + i),
    )


@dataclass(frozen=True)
class SlopeCaps:
    canonical_cap: Fraction
    terminal_cap: Fraction


def slope_caps(gorenstein_index: int) -> SlopeCaps:
    """Degree caps for a rank-one subsheaf of the tangent sheaf, as fractions of q.

    On a canonical threefold the cap is 1/2; terminal with Gorenstein index r
    sharpens it to r/(2r+1).
    """
    r = gorenstein_index
    if r < 1:
        raise ValueError(f"Gorenstein index must be >= 1, got {r}")
    return SlopeCaps(canonical_cap=Fraction(1, 2), terminal_cap=Fraction(r, 2 * r + 1))


# -- table rendering (golden-file stable) -----------------------------------

def _pair_str(pair: tuple[int, int]) -> str:
    return f"({pair[0]},{pair[1]})"


def hn_table_text(q: int) -> str:
    """Aligned text table of HN shapes for one q; stable, golden-file matched."""
    types = hn_types(q)
    lines = [f"q: {q}"]
    if not types:
        lines.append("pairs: none")
        lines.append("types: none")
    else:
        pairs = destabilizing_pairs(q)
        lines.append("pairs: " + " ".join(_pair_str(p) for p in pairs))
        lines.append("types:")
        for t in types:
            lines.append("  " + " ".join(_pair_str(p) for p in t.pairs))
    return "\n".join(lines) + "\n"


def hn_table_json(q: int) -> dict:
    types = hn_types(q)
    return {
        "q": q,
        "pairs": [list(p) for p in destabilizing_pairs(q)],
        "types": [[list(p) for p in t.pairs] for t in types],
    }


def langer_table_text(q: int) -> str:
    """Text table of the per-rank bounds; '/' marks a rank with no pairs."""
    bounds = _bounds_by_rank(q)
    lines = [f"q: {q}"]
    for r1 in (1, 2):
        cell = str(bounds[r1]) if r1 in bounds else "/"
        lines.append(f"r1={r1}: {cell}")
    return "\n".join(lines) + "\n"


def langer_table_json(q: int) -> dict:
    bounds = _bounds_by_rank(q)
    return {"q": q, "bounds": {str(r1): str(b) for r1, b in sorted(bounds.items())}}


def render_table_json(data: dict) -> str:
    """Canonical JSON rendering shared by the table commands."""
    return json.dumps(data, separators=(", ", ": ")) + "\n"

"""Index constraints and basket searches for terminal Q-Fano threefolds.

Write -K_X = qA with q the Fano-Weil index and A the primitive ample Weil
class.  The basket B_X forces c2.c1 = 24 - sum(r - 1/r), and vanishing of
chi(tA) for every -q < t < 0 turns orbifold Riemann-Roch into exact
constraints on the candidate invariants:

  * at a point (b, r) the divisor tA has local index i with q*i = -t (mod r),
    which needs gcd(q, r) = 1 and then pins i = (-t) * q^{-1} mod r;
  * the t = -1 equation solves for the primitive volume (q >= 3)

        A^3 = 12/((q-1)(q-2)) * (1 - c2c1/(12 q) + sum_Q c_Q(-A));

  * the remaining t give honest vanishing conditions

        0 = 1 + t(q+t)(q+2t) A^3 / 12 + t c2c1 / (12 q) + sum_Q c_Q(tA);

  * the global class group forces r_X * A^3 to be a nonnegative integer,
    and gcd(r_X, q) = 1 when q is the Weil index ("qW" mode; "qQ" mode
    keeps only the integrality).

``enumerate_windowed`` runs this pipeline over all baskets whose ratio
c1^3 / c2c1 lands in a half-open window; ``enumerate_small_c2c1`` runs the
complementary search for classes with tiny c2c1, where q is unknown and
recovered at the end via ``possible_q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import gcd, lcm
from pathlib import Path
from typing import Iterable, Sequence

from .arith import mod_inverse, smallest_residue
from .baskets import Basket, OrbifoldPoint, format_r_multiset, parse_r_multiset
from .riemann_roch import (
    LocalDatum,
    h0_neg_k,
    hilbert_coeffs,
    local_term,
    local_term_raw,
)

# Lower edge of the published search window: the ratio attained by the cone
# P(1, 2, 3, 5), below which sharper general bounds take over.
MIN_RATIO = Fraction(121, 41)

MODES = ("qW", "qQ")


class IncompatibleIndexError(ValueError):
    """A local index was requested at a point with gcd(q, r) != 1."""


def local_index_ta(q: int, t: int, r: int) -> int:
    """The local index i in [0, r) of tA at a point of index r: q*i = -t (mod r).

    Defined for -q < t < 0 and gcd(q, r) = 1.
    """
    if not -q < t < 0:
        raise ValueError(f"t must lie in (-q, 0), got t={t}, q={q}")
    if gcd(q, r) != 1:
        raise IncompatibleIndexError(
            f"no local index at r={r} for q={q}: gcd(q, r) = {gcd(q, r)}"
        )
    return smallest_residue(mod_inverse(q, r) * (-t), r)


def _local_sum(q: int, basket: Basket, t: int) -> Fraction:
    return sum(
        (local_term(LocalDatum(p, local_index_ta(q, t, p.r))) for p in basket),
        Fraction(0),
    )


def primitive_volume(q: int, basket: Basket) -> Fraction:
    """A^3 solved from chi(-A) = 0; needs q >= 3 so the cubic coefficient is nonzero."""
    if q < 3:
        raise ValueError(f"volume formula needs q >= 3, got q={q}")
    pre = 1 - basket.c2c1 / (12 * q) + _local_sum(q, basket, -1)
    return Fraction(12, (q - 1) * (q - 2)) * pre


def chi_ta(q: int, basket: Basket, a3: Fraction, t: int) -> Fraction:
    """chi(tA) for -q < t < 0; zero on an actual Q-Fano threefold."""
    if not -q < t < 0:
        raise ValueError(f"t must lie in (-q, 0), got t={t}, q={q}")
    return (
        1
        + Fraction(t * (q + t) * (q + 2 * t), 12) * a3
        + Fraction(t, 12 * q) * basket.c2c1
        + _local_sum(q, basket, t)
    )


@dataclass(frozen=True)
class CompatResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def compat_check(q: int, basket: Basket, a3: Fraction, mode: str = "qW") -> CompatResult:
    """Global class-group compatibility of (q, basket, A^3).

    qW mode: gcd(r_X, q) = 1 and r_X * A^3 a nonnegative integer;
    qQ mode: only the integrality.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    r_x = basket.gorenstein_index
    if mode == "qW" and gcd(r_x, q) != 1:
        return CompatResult(False, f"gcd(r_X, q) = {gcd(r_x, q)} != 1")
    vol = r_x * a3
    if vol.denominator != 1 or vol < 0:
        return CompatResult(False, f"r_X * A^3 = {vol} is not a nonnegative integer")
    return CompatResult(True)


def possible_q(r_x: int, c13: Fraction, mode: str = "qW") -> frozenset[int]:
    """Indices q compatible with a known (r_X, c1^3): q^3 | r_X * c1^3, and
    gcd(q, r_X) = 1 in qW mode.  Empty when r_X * c1^3 is not an integer."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if r_x < 1:
        raise ValueError(f"Gorenstein index must be >= 1, got {r_x}")
    if c13 <= 0:
        raise ValueError(f"need c1^3 > 0, got {c13}")
    m = r_x * c13
    if m.denominator != 1:
        return frozenset()
    m_int = int(m)
    out = set()
    q = 1
    while q * q * q <= m_int:
        if m_int % (q * q * q) == 0 and (mode == "qQ" or gcd(q, r_x) == 1):
            out.add(q)
        q += 1
    return frozenset(out)


# -- windowed candidate search ----------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    """Window and scope of one windowed search; ratio_lo exclusive, ratio_hi inclusive."""

    q_range: frozenset[int]
    ratio_lo: Fraction
    ratio_hi: Fraction
    mode: str = "qW"
    max_points: int = 16
    c2c1_min: Fraction = Fraction(0)
    allowed_r: frozenset[int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "q_range", frozenset(self.q_range))
        object.__setattr__(self, "ratio_lo", Fraction(self.ratio_lo))
        object.__setattr__(self, "ratio_hi", Fraction(self.ratio_hi))
        object.__setattr__(self, "c2c1_min", Fraction(self.c2c1_min))
        if self.allowed_r is not None:
            object.__setattr__(self, "allowed_r", frozenset(self.allowed_r))
        if not self.q_range:
            raise ValueError("q_range must be nonempty")
        if min(self.q_range) < 3:
            raise ValueError(f"windowed search needs q >= 3, got {sorted(self.q_range)}")
        if self.ratio_lo >= self.ratio_hi:
            raise ValueError(f"empty ratio window ({self.ratio_lo}, {self.ratio_hi}]")
        if self.c2c1_min < 0:
            raise ValueError(f"c2c1_min must be >= 0, got {self.c2c1_min}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_points < 0:
            raise ValueError(f"max_points must be >= 0, got {self.max_points}")


@dataclass(frozen=True)
class FanoCandidate:
    """One basket surviving every constraint of the windowed search."""

    q: int
    basket: Basket
    a3: Fraction
    c13: Fraction
    c2c1: Fraction
    mode: str = "qW"

    @property
    def ratio(self) -> Fraction:
        return self.c13 / self.c2c1

    @property
    def h0(self) -> Fraction:
        return h0_neg_k(self.basket, self.c13)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "basket": [str(p) for p in self.basket],
            "R": self.basket.r_set_str,
            "A3": str(self.a3),
            "c13": str(self.c13),
            "c2c1": str(self.c2c1),
            "ratio": str(self.ratio),
            "h0": str(self.h0),
        }

    @classmethod
    def from_json_dict(cls, rec: dict, mode: str = "qW") -> "FanoCandidate":
        return cls(
            q=int(rec["q"]),
            basket=Basket.parse(",".join(rec["basket"])),
            a3=Fraction(rec["A3"]),
            c13=Fraction(rec["c13"]),
            c2c1=Fraction(rec["c2c1"]),
            mode=mode,
        )


def _candidate_key(c: FanoCandidate) -> tuple:
    return (c.q, c.basket.sort_key)


def _search_menu(q: int, budget: Fraction, allowed_r: frozenset[int] | None):
    """Point types usable at this q: canonical (b, r) with gcd(q, r) = 1 and
    weight below the budget, in (r, b) order (weights nondecreasing)."""
    menu = []
    r = 2
    while Fraction(r * r - 1, r) < budget:
        if gcd(q, r) == 1 and (allowed_r is None or r in allowed_r):
            for b in range(1, r // 2 + 1):
                if gcd(b, r) == 1:
                    point = OrbifoldPoint(b, r)
                    i1 = local_index_ta(q, -1, r)
                    menu.append(
                        (
                            point,
                            point.weight,
                            local_term_raw(b, r, i1),
                            tuple(
                                local_term_raw(b, r, local_index_ta(q, t, r))
                                for t in range(-2, -q, -1)
                            ),
                        )
                    )
        r += 1
    return menu


@lru_cache(maxsize=None)
def _search_one_q(q: int, config: SearchConfig) -> tuple[FanoCandidate, ...]:
    budget = 24 - config.c2c1_min  # strict upper bound for the singularity sum
    menu = _search_menu(q, budget, config.allowed_r)
    scale = Fraction(12, (q - 1) * (q - 2))
    q3 = q * q * q
    t_values = tuple(range(-2, -q, -1))
    found: list[FanoCandidate] = []

    def consider(stack: list[int], sum_w: Fraction, lcm_r: int, c1_sum: Fraction) -> None:
        c2c1 = 24 - sum_w
        a3 = scale * (1 - c2c1 / (12 * q) + c1_sum)
        if a3 <= 0:
            return
        vol = lcm_r * a3
        if vol.denominator != 1:
            return
        c13 = q3 * a3
        ratio = c13 / c2c1
        if not config.ratio_lo < ratio <= config.ratio_hi:
            return
        for k, t in enumerate(t_values):
            chi = (
                1
                + Fraction(t * (q + t) * (q + 2 * t), 12) * a3
                + Fraction(t, 12 * q) * c2c1
                + sum((menu[i][3][k] for i in stack), Fraction(0))
            )
            if chi:
                return
        basket = Basket(tuple(menu[i][0] for i in stack))
        found.append(FanoCandidate(q, basket, a3, c13, c2c1, config.mode))

    def extend(start: int, stack: list[int], sum_w: Fraction, lcm_r: int, c1_sum: Fraction) -> None:
        consider(stack, sum_w, lcm_r, c1_sum)
        if len(stack) >= config.max_points:
            return
        for idx in range(start, len(menu)):
            point, w, c1, _ = menu[idx]
            new_w = sum_w + w
            if new_w >= budget:
                break  # weights are nondecreasing along the menu
            stack.append(idx)
            extend(idx, stack, new_w, lcm(lcm_r, point.r), c1_sum + c1)
            stack.pop()

    extend(0, [], Fraction(0), 1, Fraction(0))
    found.sort(key=_candidate_key)
    return tuple(found)


def enumerate_windowed(config: SearchConfig) -> list[FanoCandidate]:
    """All baskets passing the full constraint pipeline, in canonical order.

    For each q: every basket over indices coprime to q with singularity sum
    below 24 - c2c1_min and at most max_points points, such that A^3 from the
    volume formula is positive, the ratio c1^3 / c2c1 lies in the window,
    r_X * A^3 is a (nonnegative) integer, and chi(tA) = 0 for every t
    in (-q, 0).
    """
    out: list[FanoCandidate] = []
    for q in sorted(config.q_range):
        out.extend(_search_one_q(q, config))
    out.sort(key=_candidate_key)
    return out


def paper_window_config(q: int, mode: str = "qW") -> SearchConfig:
    """The per-index survivor window (121/41, km_bound(q)]."""
    from .hn import km_bound

    return SearchConfig(
        q_range=frozenset({q}),
        ratio_lo=MIN_RATIO,
        ratio_hi=km_bound(q).value,
        mode=mode,
    )


def enumerate_paper_windows(q_values: Iterable[int], mode: str = "qW") -> list[FanoCandidate]:
    """Concatenation of enumerate_windowed over per-q survivor windows."""
    out: list[FanoCandidate] = []
    for q in sorted(set(q_values)):
        out.extend(enumerate_windowed(paper_window_config(q, mode)))
    out.sort(key=_candidate_key)
    return out


@dataclass(frozen=True)
class ClassSummary:
    """Candidates of one search grouped by (q, index multiset)."""

    q: int
    r_multiset: tuple[int, ...]
    c2c1: Fraction
    c13: Fraction
    baskets: tuple[Basket, ...]

    @property
    def r_set_str(self) -> str:
        return format_r_multiset(self.r_multiset)

    @property
    def ratio(self) -> Fraction:
        return self.c13 / self.c2c1


def candidate_classes(candidates: Sequence[FanoCandidate]) -> list[ClassSummary]:
    """Group candidates by (q, R) and check each class carries one (c2c1, c1^3)."""
    grouped: dict[tuple[int, tuple[int, ...]], list[FanoCandidate]] = {}
    for c in candidates:
        grouped.setdefault((c.q, c.basket.r_multiset), []).append(c)
    out = []
    for (q, rs), group in sorted(grouped.items()):
        c13s = {c.c13 for c in group}
        if len(c13s) != 1:
            raise ValueError(f"class (q={q}, R={format_r_multiset(rs)}) mixes c1^3 values {c13s}")
        out.append(
            ClassSummary(
                q=q,
                r_multiset=rs,
                c2c1=group[0].c2c1,
                c13=group[0].c13,
                baskets=tuple(c.basket for c in group),
            )
        )
    return out


# -- exclusion lists ---------------------------------------------------------

class ExclusionFormatError(ValueError):
    """A curated exclusion line failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class ExclusionRule:
    q: int
    r_multiset: tuple[int, ...]
    reason: str

    @property
    def r_set_str(self) -> str:
        return format_r_multiset(self.r_multiset)


def load_exclusions(source: str | Path | Iterable[str]) -> list[ExclusionRule]:
    """Parse exclusion lines 'q=<int>; R=<multiset>; reason=<text>'.

    '#' lines and blank lines are skipped; a path may be given instead of
    lines.  Malformed lines raise ExclusionFormatError with the line number.
    """
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text().splitlines()
    else:
        lines = list(source)
    rules = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields: dict[str, str] = {}
        for chunk in line.split(";"):
            part = chunk.strip()
            if "=" not in part:
                raise ExclusionFormatError(line_no, f"expected key=value, got {part!r}")
            key, _, value = part.partition("=")
            fields[key.strip()] = value.strip()
        missing = {"q", "R", "reason"} - fields.keys()
        if missing:
            raise ExclusionFormatError(line_no, f"missing fields {sorted(missing)}")
        try:
            q = int(fields["q"])
            rs = parse_r_multiset(fields["R"])
        except ValueError as exc:
            raise ExclusionFormatError(line_no, str(exc)) from exc
        rules.append(ExclusionRule(q=q, r_multiset=rs, reason=fields["reason"]))
    return rules


@dataclass(frozen=True)
class ExclusionOutcome:
    survivors: tuple[FanoCandidate, ...]
    removed: tuple[tuple[FanoCandidate, str], ...]


def apply_exclusions(
    candidates: Sequence[FanoCandidate],
    exclusions: str | Path | Iterable[str] | Sequence[ExclusionRule],
) -> ExclusionOutcome:
    """Split candidates into survivors and (candidate, reason) pairs removed by
    the curated (q, R) rules.  ``exclusions`` may be pre-parsed rules, lines,
    or a file path."""
    if isinstance(exclusions, (str, Path)):
        rules = load_exclusions(exclusions)
    else:
        items = list(exclusions)
        if all(isinstance(e, ExclusionRule) for e in items):
            rules = items
        else:
            rules = load_exclusions(items)
    by_key = {(rule.q, rule.r_multiset): rule.reason for rule in rules}
    survivors = []
    removed = []
    for c in candidates:
        reason = by_key.get((c.q, c.basket.r_multiset))
        if reason is None:
            survivors.append(c)
        else:
            removed.append((c, reason))
    return ExclusionOutcome(tuple(survivors), tuple(removed))


def shipped_exclusions_text() -> str | None:
    """Contents of the packaged exclusion list, or None if it is missing."""
    from importlib import resources

    ref = resources.files("qfano").joinpath("data/exclusions.txt")
    try:
        return ref.read_text()
    except (FileNotFoundError, OSError):
        return None


# -- small-c2c1 search -------------------------------------------------------

@dataclass(frozen=True)
class SmallCandidate:
    """A basket/degree pair surviving the small-c2c1 integrality sieve."""

    basket: Basket
    c13: Fraction
    h_coeffs: tuple[Fraction, ...]
    possible_q: frozenset[int]

    @property
    def c2c1(self) -> Fraction:
        return self.basket.c2c1

    @property
    def r_x(self) -> int:
        return self.basket.gorenstein_index

    def to_json_dict(self) -> dict:
        return {
            "basket": [str(p) for p in self.basket],
            "R": self.basket.r_set_str,
            "c2c1": str(self.c2c1),
            "c13": str(self.c13),
            "h_coeffs": [str(h) for h in self.h_coeffs],
            "possible_q": sorted(self.possible_q),
        }


def _band_r_multisets(
    threshold: Fraction, allowed_r: frozenset[int] | None, max_points: int
) -> list[tuple[int, ...]]:
    """Index multisets with 24 - threshold < sum(r - 1/r) < 24."""
    values = [
        r
        for r in range(2, 25)
        if Fraction(r * r - 1, r) < 24 and (allowed_r is None or r in allowed_r)
    ]
    lo = 24 - threshold
    out: list[tuple[int, ...]] = []

    def extend(start: int, stack: list[int], sum_w: Fraction) -> None:
        if sum_w > lo:
            out.append(tuple(stack))
        if len(stack) >= max_points:
            return
        for idx in range(start, len(values)):
            r = values[idx]
            new_w = sum_w + Fraction(r * r - 1, r)
            if new_w >= 24:
                break
            stack.append(r)
            extend(idx, stack, new_w)
            stack.pop()

    extend(0, [], Fraction(0))
    return out


def _b_assignments(rs: tuple[int, ...]) -> Iterable[Basket]:
    """All baskets over a fixed index multiset, canonical b's per point."""
    groups = []
    i = 0
    while i < len(rs):
        j = i
        while j < len(rs) and rs[j] == rs[i]:
            j += 1
        r = rs[i]
        choices = [b for b in range(1, r // 2 + 1) if gcd(b, r) == 1]
        groups.append(list(combinations_with_replacement(choices, j - i)))
        i = j
    for pick in product(*groups):
        points = []
        idx = 0
        i = 0
        while i < len(rs):
            j = i
            while j < len(rs) and rs[j] == rs[i]:
                j += 1
            points.extend(OrbifoldPoint(b, rs[i]) for b in pick[idx])
            idx += 1
            i = j
        yield Basket(tuple(points))


def enumerate_small_c2c1(
    threshold: Fraction,
    ratio_bound: Fraction,
    h_depth: int = 1,
    mode: str = "qW",
    allowed_r: frozenset[int] | None = None,
    max_points: int = 16,
) -> list[SmallCandidate]:
    """Classes with 0 < c2c1 < threshold and c1^3 <= ratio_bound * c2c1.

    Here q is unknown, so only the constraints independent of it apply:
    r_X * c1^3 must be a positive integer k, chi(-K) = h^0(-K) must be a
    nonnegative integer (and chi(-mK) integral for m <= h_depth when
    h_depth > 1).  Each record carries the Hilbert coefficients to depth
    h_depth and the index set recovered by possible_q.
    """
    threshold = Fraction(threshold)
    ratio_bound = Fraction(ratio_bound)
    if threshold <= 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    if ratio_bound <= 0:
        raise ValueError(f"ratio bound must be > 0, got {ratio_bound}")
    if h_depth < 1:
        raise ValueError(f"h_depth must be >= 1, got {h_depth}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    out: list[SmallCandidate] = []
    for rs in _band_r_multisets(threshold, allowed_r, max_points):
        r_x = lcm(*rs)
        c2c1 = Fraction(24) - sum(Fraction(r * r - 1, r) for r in rs)
        k_cap = ratio_bound * c2c1 * r_x
        k_max = k_cap.numerator // k_cap.denominator
        if k_max < 1:
            continue
        for basket in _b_assignments(rs):
            for k in range(1, k_max + 1):
                c13 = Fraction(k, r_x)
                coeffs = hilbert_coeffs(basket, c13, h_depth)
                h0 = coeffs[1]
                if h0.denominator != 1 or h0 < 0:
                    continue
                if any(h.denominator != 1 for h in coeffs[2:]):
                    continue
                out.append(
                    SmallCandidate(
                        basket=basket,
                        c13=c13,
                        h_coeffs=tuple(coeffs),
                        possible_q=possible_q(r_x, c13, mode),
                    )
                )
    out.sort(key=lambda s: (s.basket.sort_key, s.c13))
    return out

"""Orbifold Riemann-Roch on terminal threefolds, after Reid's plurigenus formula.

For a Weil divisor D on a terminal threefold X, writing K for the canonical
class, the Euler characteristic takes the shape

    chi(O_X(D)) = chi(O_X) + D(D - K)(2D - K)/12 + D.c2(X)/12 + sum_Q c_Q(D),

one local term per basket point Q = (b, r).  With i the local index of D at Q
(meaning D ~ iK near Q, 0 <= i < r) and x* the smallest residue of x mod r,

    c_Q(D) = -i(r^2 - 1)/(12 r) + sum_{j=0}^{i-1} (jb)* (r - (jb)*) / (2r),

where the sum is empty for i <= 1.  Everything here is exact Fraction
arithmetic; the anticanonical specializations used by the Fano searches are
``chi_neg_nk`` and ``h0_neg_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import smallest_residue
from .baskets import Basket, OrbifoldPoint


@dataclass(frozen=True)
class LocalDatum:
    """A basket point together with the local index i of the divisor at it."""

    point: OrbifoldPoint
    i: int

    def __post_init__(self) -> None:
        if not 0 <= self.i < self.point.r:
            raise ValueError(
                f"local index must lie in [0, r), got i={self.i}, r={self.point.r}"
            )


def periodic_sum(b: int, r: int, m: int) -> Fraction:
    """sum_{j=0}^{m-1} (jb)*(r - (jb)*)/(2r) with x* = x mod r; 0 when m <= 0."""
    total = 0
    for j in range(m):
        x = smallest_residue(j * b, r)
        total += x * (r - x)
    return Fraction(total, 2 * r)


def local_term_raw(b: int, r: int, i: int) -> Fraction:
    """The contribution c_Q(D) of a point of type 1/r(1, -1, b) with local index i.

    ``b`` may be given unfolded (any unit mod r); the value only depends on the
    pair {b, r - b}.  i = 0 contributes exactly 0.
    """
    if r < 2:
        raise ValueError(f"point index r must be >= 2, got r={r}")
    if not 0 <= i < r:
        raise ValueError(f"local index must lie in [0, r), got i={i}, r={r}")
    if not 0 < b < r:
        raise ValueError(f"weight b must lie in (0, r), got b={b}, r={r}")
    return -Fraction(i * (r * r - 1), 12 * r) + periodic_sum(b, r, i)


def local_term(datum: LocalDatum) -> Fraction:
    """c_Q(D) for a validated point/index pair."""
    return local_term_raw(datum.point.b, datum.point.r, datum.i)


def chi_weil(local_data: Iterable[LocalDatum], ddk: Fraction, c2d: Fraction) -> Fraction:
    """chi(O_X(D)) from the global intersection numbers and the local data.

    ``ddk`` is D(D - K)(2D - K) and ``c2d`` is c2(X).D; chi(O_X) = 1 for the
    Fano threefolds this package targets.
    """
    return 1 + Fraction(ddk + c2d, 12) + sum((local_term(d) for d in local_data), Fraction(0))


def l_value(basket: Basket, m: int) -> Fraction:
    """The periodic correction sum_Q sum_{j=0}^{m-1} (jb)*(r - (jb)*)/(2r).

    Indexed so that chi(-nK) subtracts l_value(basket, n + 1); l_value(_, 1) = 0.
    """
    if m < 1:
        raise ValueError(f"depth m must be >= 1, got m={m}")
    return sum((periodic_sum(p.b, p.r, m) for p in basket), Fraction(0))


def chi_neg_nk(basket: Basket, c13: Fraction, n: int) -> Fraction:
    """chi(-nK) = n(n+1)(2n+1) c1^3 / 12 + 2n + 1 - l_value(basket, n+1) for n >= 0."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got n={n}")
    return Fraction(n * (n + 1) * (2 * n + 1), 12) * c13 + (2 * n + 1) - l_value(basket, n + 1)


def h0_neg_k(basket: Basket, c13: Fraction) -> Fraction:
    """chi(-K) = c1^3/2 + 3 - l_value(basket, 2); equals h^0(-K) by vanishing."""
    return Fraction(c13, 2) + 3 - l_value(basket, 2)


def hilbert_coeffs(basket: Basket, c13: Fraction, n_max: int) -> list[Fraction]:
    """[chi(-nK) for n = 0..n_max]; always starts with 1."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got n_max={n_max}")
    return [chi_neg_nk(basket, c13, n) for n in range(n_max + 1)]

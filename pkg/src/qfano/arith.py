"""Exact rational and modular arithmetic used everywhere else.

Every numeric quantity in this package is a ``fractions.Fraction`` kept in
lowest terms; nothing is ever rounded.  Floats appear only in plot helpers,
strictly for display.  This module pins down the two modular operations the
orbifold formulas rely on and the canonical string form shared by all file
formats.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

# Alias used in signatures throughout the package.
Rational = Fraction


def smallest_residue(a: int, r: int) -> int:
    """Smallest nonnegative residue of ``a`` modulo ``r``, an integer in [0, r)."""
    if r <= 0:
        raise ValueError(f"modulus must be positive, got r={r}")
    return a % r


def mod_inverse(a: int, r: int) -> int:
    """The inverse of ``a`` modulo ``r``: the unique ``i`` in [1, r) with a*i = 1 (mod r).

    Requires ``r >= 2`` and ``gcd(a, r) = 1``.
    """
    if r < 2:
        raise ValueError(f"modulus must be at least 2, got r={r}")
    g = gcd(a, r)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {r} (gcd={g})")
    return pow(a, -1, r)


def parse_rational(text: str) -> Fraction:
    """Parse the canonical ``p/q`` form (or bare integer ``p``) into a Fraction.

    Accepts anything ``Fraction`` itself accepts; serialization via ``str()``
    always reproduces the canonical reduced form.
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def is_nonneg_int(x: Fraction) -> bool:
    """True when ``x`` is a nonnegative integer (denominator 1, value >= 0)."""
    return x.denominator == 1 and x >= 0

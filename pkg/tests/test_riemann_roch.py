"""Frozen-value tests for the orbifold Riemann-Roch layer.

The expected rationals were fixed ahead of the implementation: the local
terms and l-values by evaluating the defining sums by hand, the smooth
checks against monomial counts on projective 3-space (chi(-2K) counts
degree-8 monomials in 4 variables, h^0(-K) degree-4 ones).
"""

from fractions import Fraction

import pytest

from qfano.baskets import Basket, OrbifoldPoint
from qfano.riemann_roch import (
    LocalDatum,
    chi_neg_nk,
    chi_weil,
    h0_neg_k,
    hilbert_coeffs,
    l_value,
    local_term,
    local_term_raw,
)

FINGERPRINT = Basket.of((1, 2), (1, 3), (3, 7), (6, 13))


@pytest.mark.parametrize(
    "b, r, i, expected",
    [
        (1, 2, 1, Fraction(-1, 8)),
        (1, 3, 2, Fraction(-1, 9)),
        (2, 7, 3, Fraction(-1, 7)),
        (3, 7, 3, Fraction(-3, 7)),
        (1, 4, 1, Fraction(-5, 16)),
    ],
)
def test_local_term_values(b, r, i, expected):
    assert local_term_raw(b, r, i) == expected
    assert local_term(LocalDatum(OrbifoldPoint(b, r), i)) == expected


@pytest.mark.parametrize("b, r", [(1, 2), (2, 5), (6, 13)])
def test_local_term_zero_index(b, r):
    assert local_term_raw(b, r, 0) == 0


def test_local_datum_validates_index_range():
    with pytest.raises(ValueError):
        LocalDatum(OrbifoldPoint(1, 3), 3)
    with pytest.raises(ValueError):
        local_term_raw(1, 3, -1)


def test_b_flip_invariance_spot():
    for i in range(13):
        assert local_term_raw(6, 13, i) == local_term_raw(7, 13, i)


@pytest.mark.parametrize(
    "basket, m, expected",
    [
        (Basket.of((1, 2)), 2, Fraction(1, 4)),
        (Basket.of((1, 2), (4, 9), (6, 13)), 1, Fraction(0)),
        (FINGERPRINT, 3, Fraction(4673, 1092)),
        (FINGERPRINT, 2, Fraction(3337, 1092)),
    ],
)
def test_l_value(basket, m, expected):
    assert l_value(basket, m) == expected


def test_l_value_rejects_depth_zero():
    with pytest.raises(ValueError):
        l_value(Basket(), 0)


def test_l_additive_over_unions():
    left = Basket.of((1, 2), (1, 3))
    right = Basket.of((3, 7), (6, 13))
    union = Basket(left.points + right.points)
    for m in range(1, 6):
        assert l_value(union, m) == l_value(left, m) + l_value(right, m)


class TestChiNegNK:
    def test_n_zero_is_one(self):
        assert chi_neg_nk(Basket.of((2, 5)), Fraction(7, 11), 0) == 1
        assert chi_neg_nk(Basket(), Fraction(64), 0) == 1

    def test_smooth_p3(self):
        # -K = 4H on projective 3-space, so chi(-2K) counts degree-8 monomials
        assert chi_neg_nk(Basket(), Fraction(64), 2) == 165

    def test_fingerprint_second_coefficient(self):
        assert chi_neg_nk(FINGERPRINT, Fraction(61, 546), 2) == 1

    def test_rejects_negative_n(self):
        with pytest.raises(ValueError):
            chi_neg_nk(Basket(), Fraction(1), -1)


class TestH0NegK:
    def test_smooth_p3(self):
        assert h0_neg_k(Basket(), Fraction(64)) == 35

    def test_fingerprint(self):
        assert h0_neg_k(FINGERPRINT, Fraction(61, 546)) == 0

    def test_half_volume_point(self):
        assert h0_neg_k(Basket.of((1, 2)), Fraction(1, 2)) == 3


class TestHilbertCoeffs:
    def test_depth_zero(self):
        assert hilbert_coeffs(Basket.of((1, 3)), Fraction(5), 0) == [1]

    def test_fingerprint(self):
        coeffs = hilbert_coeffs(FINGERPRINT, Fraction(61, 546), 2)
        assert coeffs == [1, 0, 1]

    def test_smooth_p3(self):
        assert hilbert_coeffs(Basket(), Fraction(64), 1) == [1, 35]

    def test_agrees_with_pointwise_chi(self):
        basket = Basket.of((1, 2), (2, 7))
        c13 = Fraction(9, 14)
        coeffs = hilbert_coeffs(basket, c13, 5)
        assert coeffs == [chi_neg_nk(basket, c13, n) for n in range(6)]


class TestChiWeil:
    def test_zero_divisor(self):
        assert chi_weil([], Fraction(0), Fraction(0)) == 1

    def test_vanishing_for_surviving_case(self):
        # t = -1 on the q=5 candidate with R = {3,7^2}: local indices are
        # i = q^{-1} mod r, the volume solves chi(-A) = 0.
        locals_ = [
            LocalDatum(OrbifoldPoint(1, 3), 2),
            LocalDatum(OrbifoldPoint(2, 7), 3),
            LocalDatum(OrbifoldPoint(3, 7), 3),
        ]
        ddk = Fraction(-1 * 4 * 3) * Fraction(4, 21)
        c2d = Fraction(-1, 5) * Fraction(160, 21)
        assert chi_weil(locals_, ddk, c2d) == 0

    @pytest.mark.parametrize("n", range(6))
    def test_specializes_to_anticanonical_chi(self, n):
        # empty basket: ddk = n(n+1)(2n+1) c13, c2d = 24n
        c13 = Fraction(64)
        ddk = n * (n + 1) * (2 * n + 1) * c13
        c2d = Fraction(24 * n)
        assert chi_weil([], ddk, c2d) == chi_neg_nk(Basket(), c13, n)

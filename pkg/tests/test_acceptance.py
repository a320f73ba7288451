"""Acceptance gate: one test per published claim the package must reproduce.

Every comparison is exact rational equality; each criterion prints a visible
pass/fail line (bypassing capture) and asserts its runtime cap.  Expected
values are written out literally here rather than imported from qfano.verify,
so this module stays an independent statement of the targets.
"""

import time
from fractions import Fraction

import pytest

from qfano.baskets import Basket
from qfano.fano import (
    apply_exclusions,
    candidate_classes,
    chi_ta,
    enumerate_paper_windows,
    enumerate_small_c2c1,
    paper_window_config,
    primitive_volume,
    shipped_exclusions_text,
)
from qfano.fano import _search_one_q
from qfano.hn import destabilizing_pairs, hn_types, table2
from qfano.riemann_roch import hilbert_coeffs
from qfano.verify import (
    check_b_flip,
    check_candidate_integrality,
    check_chi_zero,
    check_langer_above_three,
    check_oracle_equivalence,
    check_range_identity,
)


class Criterion:
    """Times a criterion body and emits the verdict line on the real stdout."""

    def __init__(self, capsys, label: str, cap_seconds: float | None):
        self.capsys = capsys
        self.label = label
        self.cap = cap_seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        verdict = "PASS" if exc_type is None and (self.cap is None or elapsed < self.cap) else "FAIL"
        with self.capsys.disabled():
            print(f"criterion {self.label}: {verdict} ({elapsed:.2f}s)")
        if exc_type is None and self.cap is not None:
            assert elapsed < self.cap, f"runtime {elapsed:.2f}s exceeds {self.cap}s cap"
        return False


def _classes_map(candidates):
    return {
        (cls.q, cls.r_multiset): (cls.c2c1, cls.c13)
        for cls in candidate_classes(candidates)
    }


def test_criterion_1_destabilizing_pairs(capsys):
    with Criterion(capsys, "1 (destabilizing pair table)", 1.0):
        assert destabilizing_pairs(4) == [(3, 2)]
        assert destabilizing_pairs(5) == [(2, 1), (4, 2)]
        assert destabilizing_pairs(6) == [(5, 2)]
        assert destabilizing_pairs(7) == [(3, 1), (5, 2), (6, 2)]
        assert destabilizing_pairs(8) == [(3, 1), (6, 2), (7, 2)]
        for q in (1, 2, 3):
            assert hn_types(q) == []
        for q in range(4, 9):
            assert all(len(t.pairs) == 2 for t in hn_types(q))


def test_criterion_2_slope_bound_table(capsys):
    with Criterion(capsys, "2 (slope bound table)", 1.0):
        assert table2(4) == {2: Fraction(64, 21)}
        assert table2(5) == {1: Fraction(100, 33), 2: Fraction(25, 8)}
        assert table2(6) == {2: Fraction(16, 5)}
        assert table2(7) == {1: Fraction(49, 16), 2: Fraction(49, 15)}
        assert table2(8) == {1: Fraction(256, 85), 2: Fraction(256, 77)}


def test_criterion_3_windowed_survivors(capsys):
    with Criterion(capsys, "3 (windowed survivors q=5..8 + exclusions)", 300.0):
        _search_one_q.cache_clear()
        candidates = enumerate_paper_windows(range(5, 9))
        assert _classes_map(candidates) == {
            (5, (4, 7)): (Fraction(375, 28), Fraction(1125, 28)),
            (5, (3, 7, 7)): (Fraction(160, 21), Fraction(500, 21)),
            (7, (2, 2, 8)): (Fraction(105, 8), Fraction(343, 8)),
        }
        text = shipped_exclusions_text()
        assert text is not None
        survivors = apply_exclusions(candidates, text.splitlines()).survivors
        assert _classes_map(survivors) == {
            (5, (3, 7, 7)): (Fraction(160, 21), Fraction(500, 21)),
        }


def test_criterion_4_index_four_window(capsys):
    with Criterion(capsys, "4 (q=4 window)", 300.0):
        assert paper_window_config(4).ratio_lo == Fraction(121, 41)
        assert paper_window_config(4).ratio_hi == Fraction(64, 21)
        candidates = enumerate_paper_windows([4])
        assert _classes_map(candidates) == {
            (4, (7, 13)): (Fraction(384, 91), Fraction(1152, 91)),
        }
        assert [c.ratio for c in candidates] == [Fraction(3)]


def test_criterion_5_small_c2c1_sieve(capsys):
    with Criterion(capsys, "5 (small-c2c1 sieve)", 600.0):
        records = enumerate_small_c2c1(Fraction(1, 10), Fraction(25, 8), h_depth=1)
        grouped: dict = {}
        for rec in records:
            grouped.setdefault(rec.basket.r_multiset, set()).add(rec.c13)
        assert grouped == {
            (2, 2, 3, 3, 3, 13): {Fraction(1, 13), Fraction(3, 13)},
            (2, 3, 7, 13): {Fraction(61, 546)},
        }
        for rec in records:
            if rec.basket.r_multiset == (2, 2, 3, 3, 3, 13):
                assert rec.c2c1 == Fraction(1, 13)
            else:
                assert rec.c2c1 == Fraction(29, 546)
                assert rec.possible_q == frozenset({1})


def test_criterion_6_weighted_projective_cross_check(capsys):
    with Criterion(capsys, "6 (P(1,2,3,5) cross-check)", 1.0):
        basket = Basket.of((1, 2), (1, 3), (2, 5))
        q = 11
        a3 = primitive_volume(q, basket)
        assert a3 == Fraction(1, 30)
        vanishings = [chi_ta(q, basket, a3, t) for t in range(-1, -q, -1)]
        assert len(vanishings) == 10
        assert all(chi == 0 for chi in vanishings)
        c13 = q**3 * a3
        assert c13 == Fraction(1331, 30)
        assert basket.c2c1 == Fraction(451, 30)
        assert c13 / basket.c2c1 == Fraction(121, 41)


def test_criterion_7_property_suite(capsys):
    with Criterion(capsys, "7 (property suite)", 120.0):
        assert check_range_identity() is None
        assert check_b_flip() is None
        assert check_chi_zero() is None
        assert check_candidate_integrality() is None
        assert check_langer_above_three() is None
        assert check_oracle_equivalence() is None


def test_criterion_8_hilbert_fingerprint(capsys):
    with Criterion(capsys, "8 (Hilbert fingerprint)", None):
        basket = Basket.of((1, 2), (1, 3), (3, 7), (6, 13))
        coeffs = hilbert_coeffs(basket, Fraction(61, 546), 2)
        assert coeffs == [Fraction(1), Fraction(0), Fraction(1)]

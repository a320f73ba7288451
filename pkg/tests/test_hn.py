"""Tests for the Harder-Narasimhan shape enumeration and the ratio bounds.

Expected fractions were computed by hand from the closed form
b = 6 / (2 - (3 q1 - q r1)^2 / (r1 (3 - r1) q^2)) before the module existed.
"""

from fractions import Fraction

import pytest

from qfano.hn import (
    HNType,
    cone_data,
    destabilizing_pairs,
    hn_table_json,
    hn_table_text,
    hn_types,
    km_bound,
    langer_bound,
    langer_table_text,
    render_table_json,
    slope_caps,
    table2,
)
from qfano.verify import golden_dir


class TestHNTypes:
    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_low_index_has_no_shapes(self, q):
        assert hn_types(q) == []

    def test_q4_single_shape(self):
        assert [t.pairs for t in hn_types(4)] == [((3, 2), (1, 1))]

    def test_q5_shapes(self):
        assert [t.pairs for t in hn_types(5)] == [
            ((2, 1), (3, 2)),
            ((4, 2), (1, 1)),
        ]

    def test_q7_pairs(self):
        assert destabilizing_pairs(7) == [(3, 1), (5, 2), (6, 2)]

    def test_q8_pairs(self):
        assert destabilizing_pairs(8) == [(3, 1), (6, 2), (7, 2)]

    def test_rank_one_cap_is_strict(self):
        # 2 q1 = q is excluded: no (3, 1) top for q = 6, no (4, 1) for q = 8
        assert all(t.top_pair != (3, 1) for t in hn_types(6))
        assert all(t.top_pair != (4, 1) for t in hn_types(8))

    def test_terminal_cap_tightens_rank_one(self):
        # (2r+1) q1 <= r q with r = 1 kills the (3, 1) top for q = 7
        default_tops = {t.top_pair for t in hn_types(7)}
        tight_tops = {t.top_pair for t in hn_types(7, terminal_index=1)}
        assert (3, 1) in default_tops
        assert tight_tops == {(5, 2), (6, 2)}

    def test_terminal_cap_can_be_nonstrict(self):
        # r = 2, q = 8: 5 * 3 <= 16 keeps the (3, 1) top
        assert (3, 1) in {t.top_pair for t in hn_types(8, terminal_index=2)}

    def test_witness_pair_destabilizes_index_eleven(self):
        assert (8, 2) in destabilizing_pairs(11)
        assert 3 * 8 > 11 * 2
        assert Fraction(8, 2) > Fraction(11, 3)

    def test_rejects_nonpositive_q(self):
        with pytest.raises(ValueError):
            hn_types(0)
        with pytest.raises(ValueError):
            hn_types(5, terminal_index=0)


class TestHNTypeValidation:
    def test_valid_shape_accepted(self):
        t = HNType(5, ((2, 1), (3, 2)))
        assert t.top_pair == (2, 1)

    @pytest.mark.parametrize(
        "q, pairs",
        [
            (5, ((2, 1),)),                     # single piece
            (5, ((2, 2), (3, 2))),              # ranks sum to 4
            (5, ((2, 1), (2, 2))),              # degrees sum to 4
            (6, ((2, 1), (4, 2))),              # slopes not strictly decreasing
            (6, ((4, 2), (2, 1))),              # slopes increase
            (9, ((3, 1), (6, 2))),              # top slope equals q/3
            (5, ((0, 1), (5, 2))),              # nonpositive degree
        ],
    )
    def test_invalid_shapes_rejected(self, q, pairs):
        with pytest.raises(ValueError):
            HNType(q, pairs)


class TestLangerBound:
    @pytest.mark.parametrize(
        "q, q1, r1, expected",
        [
            (5, 2, 1, Fraction(100, 33)),
            (5, 4, 2, Fraction(25, 8)),
            (6, 5, 2, Fraction(16, 5)),
            (7, 3, 1, Fraction(49, 16)),
            (7, 6, 2, Fraction(49, 15)),
            (8, 3, 1, Fraction(256, 85)),
            (8, 7, 2, Fraction(256, 77)),
            (4, 3, 2, Fraction(64, 21)),
        ],
    )
    def test_values(self, q, q1, r1, expected):
        assert langer_bound(q, q1, r1) == expected

    def test_always_above_three(self):
        for q in range(4, 30):
            for q1, r1 in destabilizing_pairs(q):
                assert langer_bound(q, q1, r1) > 3

    def test_rejects_bad_rank(self):
        with pytest.raises(ValueError):
            langer_bound(5, 4, 3)

    def test_rejects_degree_out_of_range(self):
        with pytest.raises(ValueError):
            langer_bound(5, 5, 2)

    def test_rejects_non_destabilizing_pair(self):
        with pytest.raises(ValueError):
            langer_bound(5, 1, 1)


class TestTable2:
    def test_exact_cells(self):
        assert table2(4) == {2: Fraction(64, 21)}
        assert table2(5) == {1: Fraction(100, 33), 2: Fraction(25, 8)}
        assert table2(6) == {2: Fraction(16, 5)}
        assert table2(7) == {1: Fraction(49, 16), 2: Fraction(49, 15)}
        assert table2(8) == {1: Fraction(256, 85), 2: Fraction(256, 77)}

    @pytest.mark.parametrize("q", [3, 9])
    def test_domain(self, q):
        with pytest.raises(ValueError):
            table2(q)


class TestKmBound:
    def test_low_index(self):
        kb = km_bound(2)
        assert kb.value == 3
        assert "Bogomolov" in kb.source

    @pytest.mark.parametrize(
        "q, expected",
        [
            (4, Fraction(64, 21)),
            (5, Fraction(25, 8)),
            (6, Fraction(16, 5)),
            (7, Fraction(49, 15)),
            (8, Fraction(256, 77)),
        ],
    )
    def test_middle_range(self, q, expected):
        assert km_bound(q).value == expected

    def test_high_index_cites_external_source(self):
        kb = km_bound(9)
        assert kb.value == Fraction(121, 41)
        assert kb.source == "external: [Prokhorov2010, Prop 3.6]"

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            km_bound(0)


class TestConeData:
    def test_boundary_twist_is_canonical_not_terminal(self):
        c = cone_data(4, 4)
        assert (c.ql, c.qx) == (4, 8)
        assert c.canonical and not c.terminal
        assert c.cap_ratio == Fraction(1, 2)

    def test_interior_twist_is_terminal(self):
        c = cone_data(4, 3)
        assert (c.ql, c.qx) == (3, 7)
        assert c.canonical and c.terminal
        assert c.cap_ratio == Fraction(3, 7)

    def test_index_one(self):
        c = cone_data(1, 1)
        assert c.canonical and not c.terminal
        assert c.cap_ratio == Fraction(1, 2)

    def test_cap_ratio_meets_slope_cap(self):
        # the terminal cone with m = r meets r/(2r+1) exactly
        for r in range(1, 6):
            assert cone_data(r + 1, r).cap_ratio == slope_caps(r).terminal_cap


class TestSlopeCaps:
    def test_values(self):
        caps1 = slope_caps(1)
        assert caps1.canonical_cap == Fraction(1, 2)
        assert caps1.terminal_cap == Fraction(1, 3)
        assert slope_caps(3).terminal_cap == Fraction(3, 7)

    def test_terminal_cap_below_canonical(self):
        for r in range(1, 20):
            caps = slope_caps(r)
            assert caps.terminal_cap < caps.canonical_cap


class TestRendering:
    def test_empty_table_text(self):
        assert hn_table_text(2) == "q: 2\npairs: none\ntypes: none\n"

    def test_q5_table_text(self):
        assert hn_table_text(5) == (
            "q: 5\n"
            "pairs: (2,1) (4,2)\n"
            "types:\n"
            "  (2,1) (3,2)\n"
            "  (4,2) (1,1)\n"
        )

    def test_langer_table_marks_missing_rank(self):
        assert langer_table_text(4) == "q: 4\nr1=1: /\nr1=2: 64/21\n"
        assert langer_table_text(6) == "q: 6\nr1=1: /\nr1=2: 16/5\n"

    def test_json_single_line(self):
        text = render_table_json(hn_table_json(5))
        assert text.endswith("\n")
        assert text.count("\n") == 1
        assert '"q": 5' in text

    @pytest.mark.parametrize("q", range(4, 9))
    def test_golden_files_match(self, q):
        base = golden_dir()
        hn_path = base / f"hn_q{q}.txt"
        langer_path = base / f"langer_q{q}.txt"
        assert hn_path.read_text() == hn_table_text(q)
        assert langer_path.read_text() == langer_table_text(q)

from __future__ import annotations

import random

import pytest

from brandubh import counting, oracle
from brandubh.oracle import (
    BudgetExceededError,
    PlacementUniverse,
    Verdict,
    delta_gate_check,
    enumerate_placements,
    small_case_equivalence,
    small_spec_corpus,
)

FIVE = ((2, 2), (2, 3), (2, 5), (3, 2), (5, 6))
SIX = FIVE + ((6, 6),)


class TestEnumeratePlacements:
    @pytest.mark.parametrize("cells, a, d, want", [
        (FIVE, 2, 1, 30),
        (SIX, 1, 1, 30),
        (FIVE, 0, 0, 1),
        (FIVE, 3, 3, 0),
        (FIVE, 5, 0, 1),
    ])
    def test_values(self, cells, a, d, want):
        u = PlacementUniverse(cells)
        assert enumerate_placements(u, a, d) == want
        assert counting.multinomial(len(cells), a, d) == want

    def test_budget(self):
        u = PlacementUniverse(FIVE, attacker_budget=1, defender_budget=1)
        with pytest.raises(BudgetExceededError):
            enumerate_placements(u, 2, 0)
        with pytest.raises(BudgetExceededError):
            enumerate_placements(u, 0, 2)

    def test_size_guard(self):
        u = PlacementUniverse.for_king((4, 4))
        with pytest.raises(BudgetExceededError):
            enumerate_placements(u, 8, 4)

    def test_rejects_bad_cells(self):
        with pytest.raises(ValueError):
            PlacementUniverse(((4, 4), (2, 2)))
        with pytest.raises(ValueError):
            PlacementUniverse(((1, 1),))
        with pytest.raises(ValueError):
            PlacementUniverse(((2, 2), (2, 2)))

    @pytest.mark.parametrize("king, k", [((4, 4), 40), ((2, 2), 39), ((1, 2), 41), ((1, 1), 42)])
    def test_king_universe_size(self, king, k):
        assert len(PlacementUniverse.for_king(king).cells) == k

    def test_king_universe_against_closed_form(self):
        u = PlacementUniverse.for_king((2, 2))
        assert enumerate_placements(u, 2, 1) == 27417 == counting.multinomial(39, 2, 1)


class TestSmallCases:
    def test_single_entry(self):
        v = small_case_equivalence(1, 2, [1], [[1]], 2, 1)
        assert v.passed
        assert v.actual == v.expected == counting.count_f(
            counting.CaseSpec("t", 1, 2, (1,), ((1,),)), max_attackers=2, max_defenders=1)

    def test_two_entry(self):
        v = small_case_equivalence(2, 3, [1, 1], [[1, 1], [1]], 2, 1)
        assert v.passed
        assert v.expected == 34

    def test_zero_A(self):
        v = small_case_equivalence(2, 4, [0, 0], [[1, 1], [1]], 3, 2)
        assert v.passed
        assert v.actual == 0

    def test_outside_limits(self):
        with pytest.raises(BudgetExceededError):
            small_case_equivalence(1, 9, [1], [[1]], 1, 1)
        with pytest.raises(BudgetExceededError):
            small_case_equivalence(5, 2, [1], [[1]], 1, 1)

    def test_corpus_is_deterministic(self):
        assert small_spec_corpus() == small_spec_corpus()
        assert len(small_spec_corpus()) == 64

    def test_corpus_mostly_nonzero(self):
        values = [small_case_equivalence(*spec).expected for spec in small_spec_corpus()]
        assert sum(1 for v in values if v) >= 56

    @pytest.mark.parametrize("spec", small_spec_corpus(), ids=lambda s: f"n{s[0]}k{s[1]}")
    def test_corpus(self, spec):
        v = small_case_equivalence(*spec)
        assert v.passed, v.render()


class TestDeltaGate:
    def test_passes(self):
        v = delta_gate_check()
        assert v.passed, v.render()
        assert v.checked == 100

    @pytest.mark.parametrize("D, free", [([[1]], 3), ([[1, 1]], 4)])
    def test_fixed_differences(self, D, free):
        spec = counting.CaseSpec("g", 1, 2, (1,), tuple(tuple(r) for r in D))
        gated = counting.count_f(spec, max_defenders=1)
        ungated = counting.count_f(spec, max_defenders=1, attacker_gate=False)
        assert ungated - gated == free


class TestReferenceRules:
    def test_notation_round_trip(self):
        text = "1A5/2D4/A1DK2A/7/3A3/D5A/1A3D1 a"
        grid, side = oracle.grid_from_notation(text)
        assert oracle.grid_to_notation(grid, side) == text

    def test_initial_perft(self):
        grid, side = oracle.grid_from_notation("3A3/3A3/3D3/AADKDAA/3D3/3A3/3A3 a")
        assert len(list(oracle.reference_moves(grid, side))) == 40
        assert oracle.reference_perft(grid, side, 2) == 960

    def test_random_grids_are_valid(self):
        rng = random.Random(3)
        for _ in range(200):
            grid, side = oracle.random_grid(rng)
            pieces = list(grid.values())
            assert pieces.count("K") == 1
            assert 1 <= pieces.count("A") <= 8
            assert pieces.count("D") <= 4
            for cell, p in grid.items():
                assert cell not in oracle.CORNERS
                if p != "K":
                    assert cell != oracle.THRONE

    def test_cross_check_small(self):
        v = oracle.movegen_cross_check(500, seed=1)
        assert v.passed, v.render()
        assert v.checked == 500

    def test_cross_check_reports_counterexample(self, monkeypatch):
        monkeypatch.setattr(oracle, "reference_captures", lambda grid, side, to: set())
        v = oracle.movegen_cross_check(200, seed=1)
        assert not v.passed
        assert v.counterexample
        assert "FAIL" in v.render()

    def test_cross_check_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            oracle.movegen_cross_check(0, seed=1)


def test_verdict_render():
    ok = Verdict("x", True, checked=3).render()
    assert ok == "[PASS] x: checked=3"
    bad = Verdict("y", False, expected=1, actual=2, counterexample="c").render()
    assert bad.startswith("[FAIL] y") and "counterexample: c" in bad

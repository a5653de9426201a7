from __future__ import annotations

import ast
import inspect
import math
from dataclasses import replace
from itertools import product

import pytest
from hypothesis import given, strategies as st

from brandubh import counting
from brandubh.counting import (
    CaseSpec,
    count_f,
    count_g,
    count_h,
    count_KS,
    count_x,
    kronecker_delta,
    multinomial,
    placement_sum,
    to_scientific,
)


def enumerate_states(k, a, d):
    """Assign each of k cells to empty/attacker/defender and count matches."""
    return sum(1 for p in product((0, 1, 2), repeat=k) if p.count(1) == a and p.count(2) == d)


def comb_sum(k, t):
    return sum(math.comb(k, d) for d in range(t + 1))


# ===================================================================
# Building blocks
# ===================================================================

class TestMultinomial:
    def test_trivial(self):
        assert multinomial(40, 0, 0) == 1
        assert multinomial(40, 1, 0) == 40

    def test_against_enumeration(self):
        assert enumerate_states(5, 2, 1) == 30
        assert multinomial(5, 2, 1) == 30

    @pytest.mark.parametrize("k, a, d", [(3, 2, 2), (0, 1, 0), (5, -1, 0), (5, 0, -2), (-1, 0, 0)])
    def test_out_of_range_is_zero(self, k, a, d):
        assert multinomial(k, a, d) == 0

    def test_small_exhaustive(self):
        for k in range(7):
            for a in range(k + 2):
                for d in range(k + 2):
                    assert multinomial(k, a, d) == enumerate_states(k, a, d)

    @given(st.integers(0, 12))
    def test_trinomial_identity(self, k):
        assert sum(multinomial(k, a, d) for a in range(k + 1) for d in range(k + 1)) == 3**k

    @given(st.integers(0, 60), st.integers(0, 60), st.integers(0, 60))
    def test_symmetric(self, k, a, d):
        assert multinomial(k, a, d) == multinomial(k, d, a)

    def test_big_values_exceed_64_bits(self):
        assert counting.UB_NAIVE == 2**93
        assert counting.UB_NAIVE.bit_length() == 94


class TestDelta:
    @pytest.mark.parametrize("x, want", [(0, 1), (3, 0), (-1, 0)])
    def test_values(self, x, want):
        assert kronecker_delta(x) == want


class TestCountF:
    def test_single_entry_example(self):
        spec = CaseSpec("t", n=1, k=2, A=(1,), D=((1,),))
        # P(2,1,0) + P(2,1,1) + P(2,2,0), each confirmed by enumeration
        want = enumerate_states(2, 1, 0) + enumerate_states(2, 1, 1) + enumerate_states(2, 2, 0)
        assert want == 5
        assert count_f(spec) == 5

    def test_zero_A_annihilates(self):
        spec = replace(counting.CASES["ATT"], A=(0, 0, 0, 0))
        assert count_f(spec) == 0

    def test_jagged_reads_default_to_zero(self):
        spec = counting.CASES["ATT"]
        assert spec.d_entry(0, 4) == 0
        assert spec.d_entry(9, 0) == 0
        assert spec.a_entry(-1) == 0

    def test_multiplicity(self):
        doa = counting.CASES["DOA"]
        assert count_f(doa) == 2 * count_f(replace(doa, multiplicity=1))

    def test_att_matches_explicit_expansion(self):
        # written out the same way as the on-throne components
        A = [1, 2, 2, 1]
        D = [[1, 3, 3, 1], [1, 2, 1], [1, 1], [1]]
        total = 0
        for ar in range(4):
            lo = 1 if ar == 0 else 0
            for dr, w in enumerate(D[ar]):
                total += A[ar] * w * sum(multinomial(40, a, d)
                                         for a in range(lo, 9 - ar) for d in range(5 - dr))
        assert count_f(counting.CASES["ATT"]) == total == 9626126486361


class TestOnThrone:
    def test_components(self):
        c = counting.on_throne_components()
        assert c == (4988462549908, 1437687522874, 313679751436, 51603381758)

    def test_c0_written_out(self):
        # D_{0,0..4} = 1,1,2,1,1 with the attacker sum starting at 1
        want = sum(w * placement_sum(40, 1, 8, 4 - dr) for dr, w in enumerate([1, 1, 2, 1, 1]))
        assert counting.on_throne_components()[0] == want

    def test_ot_combination(self):
        c = counting.on_throne_components()
        assert counting.count_OT() == c[0] + c[1] + 2 * c[2] + c[3] == 7105112957412


class TestEndStateHelpers:
    def test_g(self):
        assert count_g(0, 0, 17) == 1
        assert count_g(1, 0, 5) == 6 == enumerate_states(5, 0, 0) + enumerate_states(5, 1, 0)
        assert count_g(4, 4, 40) == 6901580871

    @given(st.integers(0, 8), st.integers(0, 4), st.integers(0, 45))
    def test_g_monotone(self, y, t, k):
        g = count_g(y, t, k)
        assert count_g(y + 1, t, k) >= g
        assert count_g(y, t + 1, k) >= g
        assert count_g(y, t, k + 1) >= g

    def test_x_published_values(self):
        assert count_x(2, 4, 42) == 1241244
        assert count_x(11, 3, 41) == 506495

    def test_x_hand_expansion(self):
        for j, t, k in [(2, 4, 42), (11, 4, 41), (11, 3, 41), (3, 1, 5)]:
            want = j * (comb_sum(k, t) + comb_sum(k, t - 1) + k * comb_sum(k - 1, t - 1))
            assert count_x(j, t, k) == want
        assert count_x(11, 4, 41) == 6193605

    def test_x_zero_multiplier(self):
        assert count_x(0, 4, 41) == 0

    def test_h(self):
        assert count_h(0, 42) == 11329894399395
        assert count_h(1, 41) == 2029969831631
        assert 2 * count_h(2, 40) == 652403837194

    def test_h_written_out(self):
        q, k = 2, 40
        want = sum(math.comb(1, dr) * placement_sum(k, 0, 8 - q, 4 - dr) for dr in range(2))
        want += placement_sum(k, 0, 8 - q - 1, 4)
        assert count_h(q, k) == want

    def test_h_rejects_bad_q(self):
        with pytest.raises(ValueError):
            count_h(9, 40)


class TestKS:
    def test_value(self):
        assert count_KS() == 1142761189676

    def test_second_loop_ordering(self):
        # defenders outermost, then attackers, binomial applied last
        total = 0
        for d in range(5):
            for a in range(7):
                total += sum(math.comb(2, dr) for dr in range(3) if d <= 4 - dr) * multinomial(39, a, d)
            for a in range(6):
                total += sum(math.comb(1, dr) for dr in range(2) if d <= 4 - dr) * multinomial(39, a, d)
            for a in range(5):
                total += multinomial(39, a, d)
        assert 4 * total == count_KS()

    def test_binomial_row_sum(self):
        assert sum(counting.binomial(2, dr) for dr in range(3)) == 4


# ===================================================================
# Report
# ===================================================================

FROZEN_PUBLISHED = {
    "ATT": 9626126486361, "DOA": 16792041107732, "ADA": 11324329275414,
    "COA": 9620561362380, "OEC": 9626126486361, "ENA": 11329894399395,
    "ATC": 11329894399395, "KAT": 46076745159, "CNE": 506495,
    "UB_NE": 86754086474450, "UB_E": 15208009331665, "UB_tight": 101962095806115,
}


class TestReport:
    def test_published_reading_values(self):
        r = counting.count_totals()
        for key, value in FROZEN_PUBLISHED.items():
            assert r[key] == value, key

    def test_formula_reading_differs_only_where_documented(self):
        pub = counting.count_totals("published").values()
        raw = counting.count_totals("formula").values()
        differ = {k for k in pub if pub[k] != raw[k]}
        assert differ == {"OEC", "ENA", "OE", "KAT", "CNE", "NAL", "UB_NE", "UB_E", "UB_tight"}
        assert raw["OEC"] == count_f(counting.CASES["OEC"]) == 9580049741202
        assert raw["KAT"] == 4 * pub["KAT"]
        assert raw["CNE"] == count_x(11, 4, 41)

    @pytest.mark.parametrize("reading", counting.READINGS)
    def test_identities(self, reading):
        assert counting.count_totals(reading).check_identities() == []

    def test_unknown_reading(self):
        with pytest.raises(ValueError):
            counting.count_totals("tight")

    def test_serialisations(self):
        r = counting.count_totals()
        dec = r.decimal()
        assert set(dec) == set(counting.CASE_KEYS) | set(counting.TOTAL_KEYS)
        assert all(int(v) == r[k] for k, v in dec.items())
        assert r.scientific()["UB_tight"] == "1.02e+14"

    def test_concurrent_evaluation_is_order_independent(self):
        from concurrent.futures import ThreadPoolExecutor
        names = ["ATT", "DOA", "ADA", "COA", "OEC", "ENA", "ATC"] * 3
        with ThreadPoolExecutor(4) as pool:
            got = list(pool.map(lambda n: count_f(counting.case_spec(n)), names))
        assert got == [count_f(counting.case_spec(n)) for n in names]


class TestScientific:
    @pytest.mark.parametrize("value, up, half", [
        (0, "0.00e+00", "0.00e+00"),
        (7, "7.00e+00", "7.00e+00"),
        (1241244, "1.25e+06", "1.24e+06"),
        (1235000, "1.24e+06", "1.24e+06"),
        (1234999, "1.24e+06", "1.23e+06"),
        (999001, "1.00e+06", "9.99e+05"),
        (999500, "1.00e+06", "1.00e+06"),
        (2**93, "9.91e+27", "9.90e+27"),
    ])
    def test_rendering(self, value, up, half):
        assert to_scientific(value) == up
        assert to_scientific(value, rounding="half_up") == half

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            to_scientific(-1)


def test_module_uses_no_floats():
    tree = ast.parse(inspect.getsource(counting))
    for node in ast.walk(tree):
        assert not (isinstance(node, ast.Constant) and isinstance(node.value, float))
        assert not isinstance(node, ast.Div)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            assert node.func.id != "float"

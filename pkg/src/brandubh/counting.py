"""Exact state-space bound for Brandubh.

The bound splits positions by where the king stands (see
:class:`brandubh.geometry.TileClass`).  For a king square with ``n``
neighbouring cells and ``k`` other free cells, the basic building block is
the trinomial count ``P(k, a, d)`` of ways to drop ``a`` attackers and ``d``
defenders onto the ``k`` cells.  The ``A`` vectors and ``D`` matrices count
symmetry-distinct arrangements of pieces on the king's neighbours.

Everything is integer arithmetic.  Scientific strings are produced from the
decimal expansion, never through floats.

Two readings of the published case list are supported:

``"formula"``
    every case formula evaluated exactly as typeset.
``"published"`` (default)
    the parameters the published figures were actually computed with.  It
    differs from ``"formula"`` in three places: the edge cases OEC and ENA
    sum over four neighbour slots rather than three, KAT carries no factor
    of four, and CNE uses three free defenders rather than four.  With these
    settings and round-up rendering every published figure is reproduced
    except C_3 (rounds to 5.17e10, not 5.16e10), KS, and the two totals
    that contain KS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

MAX_ATTACKERS = 8
MAX_DEFENDERS = 4
READINGS = ("published", "formula")

_FACTORIALS = [math.factorial(i) for i in range(50)]


def _fact(n: int) -> int:
    return _FACTORIALS[n] if n < len(_FACTORIALS) else math.factorial(n)


def multinomial(k: int, a: int, d: int) -> int:
    """``k! / (a! d! (k-a-d)!)``; zero outside ``0 <= a, d`` and ``a + d <= k``."""
    if k < 0 or a < 0 or d < 0 or a + d > k:
        return 0
    return _fact(k) // (_fact(a) * _fact(d) * _fact(k - a - d))


multinomial_P = multinomial


def kronecker_delta(x: int) -> int:
    return 1 if x == 0 else 0


def binomial(u: int, dr: int) -> int:
    """Ways to choose which ``dr`` of ``u`` candidate neighbours hold defenders."""
    return math.comb(u, dr) if 0 <= dr <= u else 0


def placement_sum(k: int, a_lo: int, a_hi: int, d_hi: int, d_lo: int = 0) -> int:
    """Sum of ``P(k, a, d)`` over ``a_lo <= a <= a_hi`` and ``d_lo <= d <= d_hi``."""
    total = 0
    for a in range(max(a_lo, 0), a_hi + 1):
        for d in range(max(d_lo, 0), d_hi + 1):
            total += multinomial(k, a, d)
    return total


# ==========================================================================
# Case specifications
# ==========================================================================


@dataclass(frozen=True)
class CaseSpec:
    """One king-location case: neighbour slots ``n``, free cells ``k`` and the
    arrangement tables.  Table reads outside the stored (jagged) bounds are 0."""

    name: str
    n: int
    k: int
    A: tuple
    D: tuple
    multiplicity: int = 1

    def a_entry(self, ar: int) -> int:
        return self.A[ar] if 0 <= ar < len(self.A) else 0

    def d_entry(self, ar: int, dr: int) -> int:
        if not 0 <= ar < len(self.D):
            return 0
        row = self.D[ar]
        return row[dr] if 0 <= dr < len(row) else 0


def count_f(spec: CaseSpec, max_attackers: int = MAX_ATTACKERS,
            max_defenders: int = MAX_DEFENDERS, attacker_gate: bool = True) -> int:
    """States for one case, times its multiplicity.

    ``a_r`` runs over attackers next to the king (``0..n-1``: ``n`` of them
    would be a capture) and ``d_r`` over defenders next to it.  When no
    attacker is adjacent, at least one must stand elsewhere, since a board
    without attackers is already won; ``attacker_gate=False`` drops that
    lower bound.
    """
    total = 0
    for ar in range(spec.n):
        weight_a = spec.a_entry(ar)
        if not weight_a:
            continue
        a_lo = kronecker_delta(ar) if attacker_gate else 0
        row = 0
        for dr in range(spec.n - ar + 1):
            weight_d = spec.d_entry(ar, dr)
            if weight_d:
                row += weight_d * placement_sum(spec.k, a_lo, max_attackers - ar,
                                                max_defenders - dr)
        total += weight_a * row
    return spec.multiplicity * total


def _spec(name, n, k, A, D, multiplicity=1) -> CaseSpec:
    return CaseSpec(name, n, k, tuple(A), tuple(tuple(r) for r in D), multiplicity)


# Published tables, verbatim.
D_OT = [[1, 1, 2, 1, 1],
        [1, 2, 2, 1],
        [1, 2, 1],
        [1, 1],
        [0]]
A_OT = [1, 1, 2, 1, 0]

# ATT shares its D with the edge cases.
D_ATT = [[1, 3, 3, 1],
         [1, 2, 1],
         [1, 1],
         [1]]
A_ATT = [1, 2, 2, 1]

D_OA = [[1, 4, 6, 4, 1],
        [1, 3, 3, 1],
        [1, 2, 1],
        [1, 1],
        [0]]
A_DOA = [1, 2, 4, 2, 0]
A_ADA = [1, 4, 6, 4, 0]
A_COA = [1, 3, 4, 3, 0]

D_OE = [[1, 3, 3, 1],
        [1, 2, 1],
        [1, 1],
        [1]]
A_OEC = [1, 2, 2, 1]
A_ENA = [1, 3, 3, 1]

D_ATC = [[1, 2, 1],
         [1, 1],
         [1]]
A_ATC = [1, 2, 1]

CASES: dict[str, CaseSpec] = {
    "OT": _spec("OT", 4, 40, A_OT, D_OT),
    "ATT": _spec("ATT", 4, 40, A_ATT, D_ATT),
    "DOA": _spec("DOA", 4, 39, A_DOA, D_OA, multiplicity=2),
    "ADA": _spec("ADA", 4, 39, A_ADA, D_OA),
    "COA": _spec("COA", 4, 39, A_COA, D_OA),
    "OEC": _spec("OEC", 3, 40, A_OEC, D_OE),
    "ENA": _spec("ENA", 3, 40, A_ENA, D_OE),
    "ATC": _spec("ATC", 3, 41, A_ATC, D_ATC),
}

# n used for the edge cases in the published figures
_PUBLISHED_EDGE_N = 4


def case_spec(name: str, reading: str = "published") -> CaseSpec:
    _check_reading(reading)
    spec = CASES[name]
    if reading == "published" and name in ("OEC", "ENA"):
        spec = replace(spec, n=_PUBLISHED_EDGE_N)
    return spec


def _check_reading(reading: str) -> None:
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}; expected one of {READINGS}")


# ==========================================================================
# Non-end states
# ==========================================================================


def on_throne_components() -> tuple[int, int, int, int]:
    """``C_0 .. C_3``: king on the throne with ``i`` attackers next to it."""
    spec = CASES["OT"]
    out = []
    for i in range(4):
        a_lo = kronecker_delta(i)
        c = 0
        for dr in range(spec.n - i + 1):
            c += spec.d_entry(i, dr) * placement_sum(spec.k, a_lo, MAX_ATTACKERS - i,
                                                     MAX_DEFENDERS - dr)
        out.append(c)
    return tuple(out)


def count_OT() -> int:
    spec = CASES["OT"]
    return sum(spec.a_entry(i) * c for i, c in enumerate(on_throne_components()))


def count_nonend_cases(reading: str = "published") -> dict[str, int]:
    _check_reading(reading)
    c0, c1, c2, c3 = on_throne_components()
    out = {"C_0": c0, "C_1": c1, "C_2": c2, "C_3": c3, "OT": count_OT()}
    for name in ("ATT", "DOA", "ADA", "COA", "OEC", "ENA", "ATC"):
        out[name] = count_f(case_spec(name, reading))
    out["OA"] = out["DOA"] + out["ADA"] + out["COA"]
    out["OE"] = out["OEC"] + out["ENA"]
    return out


# ==========================================================================
# End states
# ==========================================================================


def count_g(y: int, t: int, k: int) -> int:
    """Placements of up to ``y`` attackers and ``t`` defenders on ``k`` cells."""
    return placement_sum(k, 0, y, t)


def count_x(j: int, t: int, k: int) -> int:
    """Attacker-free positions around a last capture, times ``j`` orientations."""
    if k < 1:
        raise ValueError("count_x needs k >= 1")
    return j * (placement_sum(k, 0, 0, t)
                + placement_sum(k, 0, 0, t - 1)
                + k * placement_sum(k - 1, 0, 0, t - 1))


def count_h(q: int, k: int) -> int:
    if not 0 <= q <= MAX_ATTACKERS:
        raise ValueError("q must lie in 0..8")
    first = sum(binomial(1, dr) * placement_sum(k, kronecker_delta(q), MAX_ATTACKERS - q,
                                                MAX_DEFENDERS - dr)
                for dr in range(2))
    return first + placement_sum(k, 0, MAX_ATTACKERS - q - 1, MAX_DEFENDERS)


def count_KS() -> int:
    """King flanked by two attackers in the open area."""
    k = 39
    two_free = sum(binomial(2, dr) * placement_sum(k, 0, 6, MAX_DEFENDERS - dr)
                   for dr in range(3))
    one_free = sum(binomial(1, dr) * placement_sum(k, 0, 5, MAX_DEFENDERS - dr)
                   for dr in range(2))
    none_free = placement_sum(k, 0, 4, MAX_DEFENDERS)
    return 4 * (two_free + one_free + none_free)


def count_endstates(reading: str = "published") -> dict[str, int]:
    _check_reading(reading)
    published = reading == "published"
    out = {
        "KOT": count_g(4, 4, 40),
        "KAT": (1 if published else 4) * count_g(5, 4, 40),
        "CE": count_x(2, 4, 42),
        "CNE": count_x(11, 3 if published else 4, 41),
    }
    out["NAL"] = out["CE"] + out["CNE"]
    out["KS"] = count_KS()
    out["KCE"] = 2 * count_h(2, 40)
    out["KAC"] = count_h(1, 41)
    out["KC"] = count_h(0, 42)
    return out


# ==========================================================================
# Totals and report
# ==========================================================================

CASE_KEYS = ("C_0", "C_1", "C_2", "C_3", "OT", "ATT", "DOA", "ADA", "COA", "OA",
             "OEC", "ENA", "OE", "ATC", "KOT", "KAT", "CE", "CNE", "NAL", "KS",
             "KCE", "KAC", "KC")
TOTAL_KEYS = ("UB_NE", "UB_E", "UB_tight", "UB_naive")
UB_NAIVE = 2**5 * 4**44


def to_scientific(value: int, digits: int = 3, rounding: str = "up") -> str:
    """Render a non-negative integer as ``d.dde+XX`` from its decimal digits.

    ``rounding`` is ``"up"`` (any discarded non-zero digit bumps the last
    kept one; this matches all but one of the published figures) or
    ``"half_up"``.
    """
    if value < 0:
        raise ValueError("value must be non-negative")
    if rounding not in ("up", "half_up"):
        raise ValueError(f"unknown rounding {rounding!r}")
    if value == 0:
        return "0." + "0" * (digits - 1) + "e+00"
    s = str(value)
    exponent = len(s) - 1
    kept, rest = s[:digits].ljust(digits, "0"), s[digits:]
    mantissa = int(kept)
    if rounding == "up":
        bump = any(ch != "0" for ch in rest)
    else:
        bump = bool(rest) and rest[0] >= "5"
    if bump:
        mantissa += 1
        if len(str(mantissa)) > digits:
            mantissa //= 10
            exponent += 1
    m = str(mantissa)
    return f"{m[0]}.{m[1:]}e{'+' if exponent >= 0 else '-'}{exponent:02d}"


@dataclass(frozen=True)
class CountReport:
    cases: Mapping[str, int]
    totals: Mapping[str, int]
    reading: str = "published"
    rounding: str = "up"

    def __getitem__(self, key: str) -> int:
        if key in self.cases:
            return self.cases[key]
        return self.totals[key]

    def values(self) -> dict[str, int]:
        return {**self.cases, **self.totals}

    def decimal(self) -> dict[str, str]:
        return {k: str(v) for k, v in self.values().items()}

    def scientific(self, rounding: str | None = None) -> dict[str, str]:
        r = rounding or self.rounding
        return {k: to_scientific(v, rounding=r) for k, v in self.values().items()}

    def check_identities(self) -> list[str]:
        """Names of additive identities that fail (empty when consistent)."""
        v = self.values()
        checks = {
            "OA = DOA+ADA+COA": v["OA"] == v["DOA"] + v["ADA"] + v["COA"],
            "OE = OEC+ENA": v["OE"] == v["OEC"] + v["ENA"],
            "NAL = CE+CNE": v["NAL"] == v["CE"] + v["CNE"],
            "OT = sum A_i C_i": v["OT"] == sum(
                a * v[f"C_{i}"] for i, a in enumerate(A_OT[:4])),
            "UB_NE = OT+ATT+OA+OE+ATC": v["UB_NE"] == v["OT"] + v["ATT"] + v["OA"] + v["OE"] + v["ATC"],
            "UB_E = KOT+KAT+CE+CNE+KS+KCE+KAC+KC": v["UB_E"] == sum(
                v[k] for k in ("KOT", "KAT", "CE", "CNE", "KS", "KCE", "KAC", "KC")),
            "UB_tight = UB_NE+UB_E": v["UB_tight"] == v["UB_NE"] + v["UB_E"],
        }
        return [name for name, ok in checks.items() if not ok]


def count_totals(reading: str = "published") -> CountReport:
    cases = {**count_nonend_cases(reading), **count_endstates(reading)}
    ub_ne = cases["OT"] + cases["ATT"] + cases["OA"] + cases["OE"] + cases["ATC"]
    ub_e = sum(cases[k] for k in ("KOT", "KAT", "CE", "CNE", "KS", "KCE", "KAC", "KC"))
    totals = {"UB_NE": ub_ne, "UB_E": ub_e, "UB_tight": ub_ne + ub_e, "UB_naive": UB_NAIVE}
    return CountReport({k: cases[k] for k in CASE_KEYS}, totals, reading)

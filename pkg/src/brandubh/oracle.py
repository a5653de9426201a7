"""Brute-force cross-checks for the counting formulas and the rules engine.

Everything here is deliberately slow and obvious.  The reference rules work
on a plain ``{(row, col): piece}`` dict and scan the whole board for every
candidate move; they share no move-generation or counting code with
:mod:`brandubh.engine` or :mod:`brandubh.counting`.  The counting checks
call into :mod:`brandubh.counting` only as the thing under test.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

N = 7
THRONE = (4, 4)
CORNERS = ((1, 1), (1, 7), (7, 1), (7, 7))
ENUMERATION_LIMIT = 10**8


class BudgetExceededError(ValueError):
    """Raised when an enumeration would be too large to run."""


@dataclass
class Verdict:
    case_id: str
    passed: bool
    expected: object = None
    actual: object = None
    counterexample: str | None = None
    checked: int = 0
    details: list[str] = field(default_factory=list)

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"[{status}] {self.case_id}: checked={self.checked}"
        if not self.passed:
            line += f" expected={self.expected} actual={self.actual}"
            if self.counterexample:
                line += f"\n    counterexample: {self.counterexample}"
        for d in self.details:
            line += f"\n    {d}"
        return line


# ==========================================================================
# Placement enumeration
# ==========================================================================


@dataclass(frozen=True)
class PlacementUniverse:
    cells: tuple
    attacker_budget: int = 8
    defender_budget: int = 4

    def __post_init__(self):
        if len(set(self.cells)) != len(self.cells):
            raise ValueError("universe cells must be distinct")
        bad = [c for c in self.cells if tuple(c) == THRONE or tuple(c) in CORNERS]
        if bad:
            raise ValueError(f"universe may not contain throne or corners: {bad}")

    @classmethod
    def for_king(cls, king, attacker_budget: int = 8, defender_budget: int = 4):
        """The k-cell universe left over when the king stands on ``king``."""
        kr, kc = king
        adjacent = {(kr - 1, kc), (kr + 1, kc), (kr, kc - 1), (kr, kc + 1)}
        cells = tuple(
            (r, c)
            for r in range(1, N + 1)
            for c in range(1, N + 1)
            if (r, c) != THRONE
            and (r, c) not in CORNERS
            and (r, c) != (kr, kc)
            and (r, c) not in adjacent
        )
        return cls(cells, attacker_budget, defender_budget)


def enumerate_placements(u: PlacementUniverse, a: int, d: int) -> int:
    """Count assignments of ``a`` attackers and ``d`` defenders to ``u.cells``
    by generating every one of them."""
    if a > u.attacker_budget or d > u.defender_budget:
        raise BudgetExceededError(f"({a}, {d}) exceeds piece budget "
                                  f"({u.attacker_budget}, {u.defender_budget})")
    k = len(u.cells)
    if a < 0 or d < 0 or a + d > k:
        return 0
    if math.comb(k, a) * math.comb(k - a, d) > ENUMERATION_LIMIT:
        raise BudgetExceededError(f"P({k},{a},{d}) is above the enumeration limit")
    seen = set()
    for att in itertools.combinations(u.cells, a):
        rest = [c for c in u.cells if c not in att]
        for dfn in itertools.combinations(rest, d):
            seen.add((frozenset(att), frozenset(dfn)))
    return len(seen)


def _all_patterns(k: int):
    """Every assignment of k cells to empty / attacker / defender."""
    return itertools.product((0, 1, 2), repeat=k)


def _brute_f(n, k, A, D, a_max, d_max, gate=True, attacker_free_only=False):
    """Enumerate states cell by cell and weight them by the A/D tables."""

    def table(t, *idx):
        cur = t
        for i in idx:
            if not 0 <= i < len(cur):
                return 0
            cur = cur[i]
        return cur

    total = 0
    for ar in range(n):
        for dr in range(n - ar + 1):
            weight = table(A, ar) * table(D, ar, dr)
            if not weight:
                continue
            count = 0
            for pattern in _all_patterns(k):
                a = pattern.count(1)
                d = pattern.count(2)
                if a + ar > a_max or d + dr > d_max:
                    continue
                if attacker_free_only:
                    if ar == 0 and a == 0:
                        count += 1
                    continue
                if gate and ar == 0 and a == 0:
                    continue
                count += 1
            total += weight * count
    return total


def small_case_equivalence(n, k, A, D, a_max, d_max) -> Verdict:
    """Compare ``counting.count_f`` with explicit enumeration on a small case."""
    from brandubh import counting

    if n > 4 or k > 8 or a_max > 3 or d_max > 2:
        raise BudgetExceededError("small_case_equivalence is for n<=4, k<=8, a_max<=3, d_max<=2")
    spec = counting.CaseSpec("small", n, k, tuple(A), tuple(tuple(r) for r in D))
    closed = counting.count_f(spec, max_attackers=a_max, max_defenders=d_max)
    brute = _brute_f(n, k, A, D, a_max, d_max)
    case = f"f(n={n},k={k},A={list(A)},D={[list(r) for r in D]},amax={a_max},dmax={d_max})"
    return Verdict(case, closed == brute, expected=brute, actual=closed, checked=3**k)


def small_spec_corpus(size: int = 64, seed: int = 20200824):
    """Deterministic corpus of small (n, k, A, D, a_max, d_max) specs."""
    rng = random.Random(seed)
    specs = []
    for i in range(size):
        n = 1 + i % 4
        k = 2 + (i // 4) % 7
        # tables are sometimes short or long by one to exercise the jagged reads
        A = [rng.randint(0, 3) for _ in range(n + rng.choice((-1, 0, 0, 1)))]
        A[0:1] = [rng.randint(1, 3)]
        D = [[rng.randint(0, 4) for _ in range(max(1, n - ar + 1 + rng.choice((-1, 0, 0, 1))))]
             for ar in range(n + rng.choice((0, 0, 1)))]
        specs.append((n, k, A, D, rng.randint(1, 3), rng.randint(0, 2)))
    return specs


def delta_gate_check(trials: int = 100, seed: int = 7) -> Verdict:
    """The attacker gate removes exactly the attacker-free placements."""
    from brandubh import counting

    rng = random.Random(seed)
    fixed = [
        (1, 2, [1], [[1]], 8, 1),
        (1, 2, [1], [[1, 1]], 8, 1),
        (2, 3, [1, 1], [[1, 1], [1]], 2, 1),
    ]
    cases = list(fixed)
    while len(cases) < trials:
        n = rng.randint(1, 4)
        k = rng.randint(1, 7)
        A = [rng.randint(0, 3) for _ in range(n)]
        D = [[rng.randint(0, 3) for _ in range(n - ar + 1)] for ar in range(n)]
        cases.append((n, k, A, D, rng.randint(0, 3), rng.randint(0, 2)))

    for n, k, A, D, a_max, d_max in cases:
        spec = counting.CaseSpec("gate", n, k, tuple(A), tuple(tuple(r) for r in D))
        gated = counting.count_f(spec, max_attackers=a_max, max_defenders=d_max)
        ungated = counting.count_f(spec, max_attackers=a_max, max_defenders=d_max,
                                   attacker_gate=False)
        free = _brute_f(n, k, A, D, a_max, d_max, attacker_free_only=True)
        if ungated - gated != free:
            return Verdict("delta_gate", False, expected=free, actual=ungated - gated,
                           counterexample=f"n={n} k={k} A={A} D={D} amax={a_max} dmax={d_max}",
                           checked=len(cases))
    return Verdict("delta_gate", True, checked=len(cases))


# ==========================================================================
# Reference rules
# ==========================================================================

Grid = dict  # (row, col) -> "A" | "D" | "K"


def grid_from_notation(text: str) -> tuple[Grid, str]:
    board, side = text.split(" ")
    grid = {}
    for r, row in enumerate(board.split("/"), start=1):
        c = 1
        for ch in row:
            if ch.isdigit():
                c += int(ch)
            else:
                grid[(r, c)] = ch
                c += 1
    return grid, side


def grid_to_notation(grid: Grid, side: str) -> str:
    rows = []
    for r in range(1, N + 1):
        out, run = "", 0
        for c in range(1, N + 1):
            p = grid.get((r, c))
            if p is None:
                run += 1
            else:
                if run:
                    out += str(run)
                    run = 0
                out += p
        if run:
            out += str(run)
        rows.append(out)
    return "/".join(rows) + " " + side


def _owner(piece):
    return "a" if piece == "A" else "d"


def _between(frm, to):
    (r1, c1), (r2, c2) = frm, to
    if r1 == r2:
        step = 1 if c2 > c1 else -1
        return [(r1, c) for c in range(c1 + step, c2, step)]
    step = 1 if r2 > r1 else -1
    return [(r, c1) for r in range(r1 + step, r2, step)]


def reference_slide_ok(grid: Grid, frm, to) -> bool:
    """Is moving the piece on ``frm`` to ``to`` a legal slide?"""
    piece = grid.get(frm)
    if piece is None or frm == to:
        return False
    if frm[0] != to[0] and frm[1] != to[1]:
        return False
    if not (1 <= to[0] <= N and 1 <= to[1] <= N):
        return False
    if to in grid or to == THRONE:
        return False
    if to in CORNERS and piece != "K":
        return False
    for sq in _between(frm, to):
        if sq in grid or sq == THRONE:
            return False
    return True


def reference_moves(grid: Grid, side: str):
    """All (from, to) slides for ``side``, found by testing every pair of squares."""
    out = []
    board = [(r, c) for r in range(1, N + 1) for c in range(1, N + 1)]
    for frm in board:
        p = grid.get(frm)
        if p is None or _owner(p) != side:
            continue
        for to in board:
            if reference_slide_ok(grid, frm, to):
                out.append((frm, to))
    return sorted(out)


def _hostile_to(grid: Grid, sq, victim_side: str) -> bool:
    if not (1 <= sq[0] <= N and 1 <= sq[1] <= N):
        return False
    p = grid.get(sq)
    if p is not None:
        return _owner(p) != victim_side
    return sq == THRONE or sq in CORNERS


def reference_captures(grid: Grid, side: str, to) -> set:
    """Non-king enemies flanked by the piece that just arrived on ``to``."""
    enemy = "D" if side == "a" else "A"
    victim_side = "d" if side == "a" else "a"
    out = set()
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        mid = (to[0] + dr, to[1] + dc)
        if grid.get(mid) != enemy:
            continue
        far = (to[0] + 2 * dr, to[1] + 2 * dc)
        if _hostile_to(grid, far, victim_side):
            out.add(mid)
    return out


def reference_king_captured(grid: Grid, to) -> bool:
    """After an attacker lands on ``to``: is the king now captured?"""
    king = next(sq for sq, p in grid.items() if p == "K")
    kr, kc = king
    around = [(kr - 1, kc), (kr + 1, kc), (kr, kc - 1), (kr, kc + 1)]
    if to not in around:
        return False
    if king == THRONE:
        return all(grid.get(s) == "A" for s in around)
    if THRONE in around:
        return all(grid.get(s) == "A" for s in around if s != THRONE)
    far = (2 * kr - to[0], 2 * kc - to[1])
    if not (1 <= far[0] <= N and 1 <= far[1] <= N):
        return False
    return grid.get(far) == "A" or (far in CORNERS and far not in grid)


def reference_play(grid: Grid, side: str, frm, to):
    """Apply a slide; return (new grid, captured squares, outcome or None)."""
    g = dict(grid)
    g[to] = g.pop(frm)
    taken = reference_captures(g, side, to)
    for sq in taken:
        del g[sq]
    outcome = None
    if side == "a" and reference_king_captured(g, to):
        outcome = "attacker_win"
    elif any(g.get(c) == "K" for c in CORNERS):
        outcome = "defender_win"
    elif not any(p == "A" for p in g.values()):
        outcome = "defender_win"
    return g, taken, outcome


def _key(grid, side):
    return (frozenset(grid.items()), side)


def reference_perft(grid: Grid, side: str, depth: int, history=None, limit: int = 3) -> int:
    """Count move sequences of exactly ``depth`` plies, naive recursion."""
    if depth == 0:
        return 1
    if history is None:
        history = {_key(grid, side): 1}
    total = 0
    other = "d" if side == "a" else "a"
    for frm, to in reference_moves(grid, side):
        g, _, outcome = reference_play(grid, side, frm, to)
        key = _key(g, other)
        seen = history.get(key, 0) + 1
        if outcome is None and seen >= limit:
            outcome = "draw"
        if outcome is not None:
            total += 1 if depth == 1 else 0
            continue
        history[key] = seen
        total += reference_perft(g, other, depth - 1, history, limit)
        history[key] -= 1
    return total


# ==========================================================================
# Engine cross-checks
# ==========================================================================


def random_grid(rng: random.Random) -> tuple[Grid, str]:
    """A random structurally valid, non-terminal position.

    Attackers and defenders never sit on the throne or a corner, and the
    king is never on a corner.  Reachability from the opening is not
    required.
    """
    interior = [(r, c) for r in range(1, N + 1) for c in range(1, N + 1)
                if (r, c) != THRONE and (r, c) not in CORNERS]
    n_att = rng.randint(1, 8)
    n_def = rng.randint(0, 4)
    king_spots = interior + [THRONE]
    king = rng.choice(king_spots)
    free = [s for s in interior if s != king]
    cells = rng.sample(free, n_att + n_def)
    grid = {king: "K"}
    for s in cells[:n_att]:
        grid[s] = "A"
    for s in cells[n_att:]:
        grid[s] = "D"
    return grid, rng.choice("ad")


def _engine_state(grid: Grid, side: str):
    from brandubh import engine
    return engine.BoardState.from_notation(grid_to_notation(grid, side))


def _engine_moves(state):
    from brandubh import engine
    return {
        ((m.from_sq.row, m.from_sq.col), (m.to_sq.row, m.to_sq.col)):
            (frozenset((s.row, s.col) for s in m.captures), m.terminal)
        for m in engine.legal_moves(state)
    }


def compare_position(grid: Grid, side: str) -> str | None:
    """Return a description of the first disagreement, or None."""
    state = _engine_state(grid, side)
    got = _engine_moves(state)
    want = {}
    for frm, to in reference_moves(grid, side):
        _, taken, outcome = reference_play(grid, side, frm, to)
        want[(frm, to)] = (frozenset(taken), outcome)
    if got.keys() != want.keys():
        extra = sorted(got.keys() - want.keys())[:3]
        missing = sorted(want.keys() - got.keys())[:3]
        return f"move sets differ: extra={extra} missing={missing}"
    for mv in sorted(want):
        if got[mv] != want[mv]:
            return f"move {mv}: engine={got[mv]} reference={want[mv]}"
    return None


def movegen_cross_check(trials: int, seed: int,
                        fixed: Sequence[str] = ()) -> Verdict:
    """Compare engine move lists with the reference on random positions."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    positions: Iterable = itertools.chain(
        (grid_from_notation(t) for t in fixed),
        (random_grid(rng) for _ in range(trials)),
    )
    checked = 0
    for grid, side in positions:
        problem = compare_position(grid, side)
        checked += 1
        if problem is not None:
            return Verdict(f"movegen(seed={seed})", False, expected="reference moves",
                           actual=problem, counterexample=grid_to_notation(grid, side),
                           checked=checked)
    return Verdict(f"movegen(seed={seed})", True, checked=checked)

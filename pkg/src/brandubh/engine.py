"""Brandubh rules: positions, move generation, captures and game end.

Rules as implemented:

* every piece slides orthogonally any distance; no jumping;
* nobody lands on or passes through the throne, the king included
  (a king still on the throne may leave it);
* only the king may stand on a corner, and doing so wins for the defenders;
* a non-king piece is captured when the mover flanks it against a friendly
  piece, a corner or the empty throne; board edges are never hostile and
  the king counts as a defender for flanking;
* the king needs four attackers on the throne, the three non-throne
  neighbours next to the throne, and an ordinary two-sided flank (attackers
  or corners) anywhere else;
* capturing every attacker wins for the defenders; a position (pieces and
  side to move) occurring ``repetition_limit`` times is a draw.

Internally pieces are 49-bit boards indexed ``(row - 1) * 7 + (col - 1)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional

from brandubh.geometry import CORNERS, NUM_SQUARES, SIZE, SQUARES, THRONE, Square, Symmetry

THRONE_IDX = THRONE.index
THRONE_BIT = 1 << THRONE_IDX
CORNER_BITS = sum(1 << c.index for c in CORNERS)
MAX_ATTACKERS = 8
MAX_DEFENDERS = 4
DEFAULT_REPETITION_LIMIT = 3


class PositionError(ValueError):
    """Malformed or structurally invalid position."""


class IllegalMoveError(ValueError):
    pass


class TerminalPositionError(ValueError):
    pass


class Side(str, enum.Enum):
    ATTACKER = "a"
    DEFENDER = "d"

    @property
    def other(self) -> Side:
        return Side.DEFENDER if self is Side.ATTACKER else Side.ATTACKER


class Outcome(str, enum.Enum):
    ATTACKER_WIN = "attacker_win"
    DEFENDER_WIN = "defender_win"
    DRAW = "draw"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EngineOptions:
    first_mover: Side = Side.ATTACKER
    repetition_limit: int = DEFAULT_REPETITION_LIMIT


# --------------------------------------------------------------------------
# Precomputed geometry
# --------------------------------------------------------------------------


def _step(idx: int, dr: int, dc: int) -> int:
    r, c = divmod(idx, SIZE)
    r, c = r + dr, c + dc
    if 0 <= r < SIZE and 0 <= c < SIZE:
        return r * SIZE + c
    return -1


_DIRS = ((-1, 0), (1, 0), (0, -1), (0, 1))
# STEP[i][d]: neighbour of i in direction d, or -1 off the board
STEP = tuple(tuple(_step(i, dr, dc) for dr, dc in _DIRS) for i in range(NUM_SQUARES))


def _ray(idx: int, d: int) -> tuple[int, ...]:
    out = []
    cur = STEP[idx][d]
    while cur != -1:
        out.append(cur)
        cur = STEP[cur][d]
    return tuple(out)


RAYS = tuple(tuple(_ray(i, d) for d in range(4)) for i in range(NUM_SQUARES))
OPPOSITE = (1, 0, 3, 2)
THRONE_NEIGHBORS = tuple(n for n in STEP[THRONE_IDX] if n != -1)


def _bits(squares: Iterable[Square]) -> int:
    out = 0
    for s in squares:
        out |= 1 << s.index
    return out


def _squares(bits: int) -> frozenset[Square]:
    out = []
    while bits:
        low = bits & -bits
        out.append(SQUARES[low.bit_length() - 1])
        bits ^= low
    return frozenset(out)


def _indices(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


# --------------------------------------------------------------------------
# Position and move types
# --------------------------------------------------------------------------

Fingerprint = tuple  # (attacker bits, defender bits, king index, side char)


@dataclass(frozen=True)
class BoardState:
    attacker_bits: int
    defender_bits: int
    king_index: int
    to_move: Side = Side.ATTACKER
    outcome: Optional[Outcome] = None
    # sorted (fingerprint, occurrences) pairs for every position seen so far
    repetitions: tuple = ()
    repetition_limit: int = DEFAULT_REPETITION_LIMIT

    # -- construction -----------------------------------------------------

    @classmethod
    def from_pieces(cls, attackers: Iterable[Square], defenders: Iterable[Square],
                    king: Square, to_move: Side = Side.ATTACKER,
                    repetition_limit: int = DEFAULT_REPETITION_LIMIT) -> BoardState:
        attackers, defenders = list(attackers), list(defenders)
        att, dfn = _bits(attackers), _bits(defenders)
        _validate(att, dfn, king.index, len(attackers), len(defenders))
        state = cls(att, dfn, king.index, Side(to_move), None, (), repetition_limit)
        state = replace(state, outcome=_static_outcome(att, king.index))
        return replace(state, repetitions=((state.fingerprint, 1),))

    @classmethod
    def from_notation(cls, text: str,
                      repetition_limit: int = DEFAULT_REPETITION_LIMIT) -> BoardState:
        return parse_position(text, repetition_limit)

    # -- views ------------------------------------------------------------

    @property
    def attackers(self) -> frozenset[Square]:
        return _squares(self.attacker_bits)

    @property
    def defenders(self) -> frozenset[Square]:
        return _squares(self.defender_bits)

    @property
    def king(self) -> Square:
        return SQUARES[self.king_index]

    @property
    def fingerprint(self) -> Fingerprint:
        return (self.attacker_bits, self.defender_bits, self.king_index, self.to_move.value)

    @property
    def repetition_count(self) -> dict:
        return dict(self.repetitions)

    @property
    def is_terminal(self) -> bool:
        return self.outcome is not None

    def piece_at(self, sq: Square) -> Optional[str]:
        bit = 1 << sq.index
        if self.attacker_bits & bit:
            return "A"
        if self.defender_bits & bit:
            return "D"
        if self.king_index == sq.index:
            return "K"
        return None

    def to_notation(self) -> str:
        return format_position(self)

    def __str__(self) -> str:
        return self.to_notation()


@dataclass(frozen=True)
class Move:
    from_sq: Square
    to_sq: Square
    mover: Side
    captures: frozenset = field(default_factory=frozenset)
    terminal: Optional[Outcome] = None

    def __str__(self) -> str:
        return f"{self.from_sq}-{self.to_sq}"


def _validate(att: int, dfn: int, king: int, n_att: int, n_def: int) -> None:
    if att.bit_count() != n_att or dfn.bit_count() != n_def:
        raise PositionError("pieces: duplicate squares")
    if att & dfn or (att | dfn) >> king & 1:
        raise PositionError("pieces: two pieces on one square")
    if n_att > MAX_ATTACKERS:
        raise PositionError(f"pieces: {n_att} attackers, at most {MAX_ATTACKERS}")
    if n_def > MAX_DEFENDERS:
        raise PositionError(f"pieces: {n_def} defenders, at most {MAX_DEFENDERS}")
    if (att | dfn) & (THRONE_BIT | CORNER_BITS):
        raise PositionError("pieces: only the king may stand on the throne or a corner")


def _static_outcome(att: int, king: int) -> Optional[Outcome]:
    if (1 << king) & CORNER_BITS or not att:
        return Outcome.DEFENDER_WIN
    return None


# --------------------------------------------------------------------------
# Notation
# --------------------------------------------------------------------------


def parse_position(text: str, repetition_limit: int = DEFAULT_REPETITION_LIMIT) -> BoardState:
    """Parse ``3A3/3A3/3D3/AADKDAA/3D3/3A3/3A3 a`` style notation."""
    parts = text.strip().split(" ")
    if len(parts) != 2:
        raise PositionError("fields: expected '<rows> <side>'")
    board, side = parts
    if side not in ("a", "d"):
        raise PositionError(f"side: expected 'a' or 'd', got {side!r}")
    rows = board.split("/")
    if len(rows) != SIZE:
        raise PositionError(f"rows: expected {SIZE} rows, got {len(rows)}")
    attackers, defenders, kings = [], [], []
    for r, row in enumerate(rows, start=1):
        c = 1
        for ch in row:
            if ch in "1234567":
                c += int(ch)
                continue
            if ch not in "ADK":
                raise PositionError(f"row {r}: unexpected character {ch!r}")
            if c > SIZE:
                raise PositionError(f"row {r}: wider than {SIZE} squares")
            {"A": attackers, "D": defenders, "K": kings}[ch].append(Square(r, c))
            c += 1
        if c != SIZE + 1:
            raise PositionError(f"row {r}: width {c - 1}, expected {SIZE}")
    if len(kings) != 1:
        raise PositionError(f"pieces: expected exactly one king, got {len(kings)}")
    return BoardState.from_pieces(attackers, defenders, kings[0], Side(side), repetition_limit)


def format_position(s: BoardState) -> str:
    rows = []
    for r in range(1, SIZE + 1):
        out, run = [], 0
        for c in range(1, SIZE + 1):
            p = s.piece_at(Square(r, c))
            if p is None:
                run += 1
                continue
            if run:
                out.append(str(run))
                run = 0
            out.append(p)
        if run:
            out.append(str(run))
        rows.append("".join(out))
    return "/".join(rows) + " " + s.to_move.value


def initial_position(options: EngineOptions | None = None) -> BoardState:
    options = options or EngineOptions()
    return BoardState.from_pieces(
        attackers=[Square(1, 4), Square(2, 4), Square(6, 4), Square(7, 4),
                   Square(4, 1), Square(4, 2), Square(4, 6), Square(4, 7)],
        defenders=[Square(3, 4), Square(5, 4), Square(4, 3), Square(4, 5)],
        king=THRONE,
        to_move=options.first_mover,
        repetition_limit=options.repetition_limit,
    )


# --------------------------------------------------------------------------
# Move generation
# --------------------------------------------------------------------------


def _slides(att: int, dfn: int, king: int, side: Side) -> Iterator[tuple[int, int]]:
    """(from, to) index pairs in ascending order."""
    occ = att | dfn | (1 << king)
    blocked = occ | THRONE_BIT
    sources = _indices(att) if side is Side.ATTACKER else sorted(_indices(dfn) + [king])
    for frm in sources:
        landing_mask = blocked if frm == king else blocked | CORNER_BITS
        targets = []
        for ray in RAYS[frm]:
            for sq in ray:
                if blocked >> sq & 1:
                    break
                if not landing_mask >> sq & 1:
                    targets.append(sq)
        targets.sort()
        for to in targets:
            yield frm, to


def _captures(att: int, dfn: int, king: int, side: Side, to: int) -> int:
    """Bits of enemy non-king pieces flanked by the piece now on ``to``."""
    throne_empty = king != THRONE_IDX
    if side is Side.ATTACKER:
        enemy, hostile = dfn, att | CORNER_BITS
    else:
        enemy, hostile = att, dfn | (1 << king) | CORNER_BITS
    if throne_empty:
        hostile |= THRONE_BIT
    taken = 0
    step = STEP
    for d in range(4):
        mid = step[to][d]
        if mid == -1 or not enemy >> mid & 1:
            continue
        far = step[mid][d]
        if far != -1 and hostile >> far & 1:
            taken |= 1 << mid
    return taken


def _king_captured(att: int, king: int, to: int) -> bool:
    """Whether an attacker arriving on ``to`` captures the king."""
    around = STEP[king]
    if to not in around:
        return False
    if king == THRONE_IDX:
        return all(att >> n & 1 for n in around)
    if king in THRONE_NEIGHBORS:
        return all(att >> n & 1 for n in around if n != THRONE_IDX and n != -1)
    d = OPPOSITE[around.index(to)]
    far = around[d]
    if far == -1:
        return False
    return bool((att | CORNER_BITS) >> far & 1)


def _play(att: int, dfn: int, king: int, side: Side, frm: int, to: int):
    """Apply a slide on raw boards; returns (att, dfn, king, captured bits, outcome)."""
    move_bit = (1 << frm) | (1 << to)
    if side is Side.ATTACKER:
        att ^= move_bit
    elif frm == king:
        king = to
    else:
        dfn ^= move_bit
    taken = _captures(att, dfn, king, side, to)
    outcome = None
    if side is Side.ATTACKER:
        dfn &= ~taken
        if _king_captured(att, king, to):
            outcome = Outcome.ATTACKER_WIN
    else:
        att &= ~taken
        outcome = _static_outcome(att, king)
    return att, dfn, king, taken, outcome


def _check_live(s: BoardState) -> None:
    if s.outcome is not None:
        raise TerminalPositionError(f"position is terminal ({s.outcome}): {s.to_notation()}")


def legal_moves(s: BoardState) -> list[Move]:
    """All legal moves for the side to move, sorted by origin then target."""
    _check_live(s)
    reps = dict(s.repetitions)
    side = s.to_move
    out = []
    for frm, to in _slides(s.attacker_bits, s.defender_bits, s.king_index, side):
        att, dfn, king, taken, outcome = _play(
            s.attacker_bits, s.defender_bits, s.king_index, side, frm, to)
        if outcome is None and reps.get((att, dfn, king, side.other.value), 0) + 1 >= s.repetition_limit:
            outcome = Outcome.DRAW
        out.append(Move(SQUARES[frm], SQUARES[to], side, _squares(taken), outcome))
    return out


def resolve_captures(s: BoardState, m: Move) -> frozenset[Square]:
    """Non-king pieces the slide ``m`` would capture in ``s``."""
    frm, to = m.from_sq.index, m.to_sq.index
    att, dfn, king = s.attacker_bits, s.defender_bits, s.king_index
    move_bit = (1 << frm) | (1 << to)
    if m.mover is Side.ATTACKER:
        att ^= move_bit
    elif frm == king:
        king = to
    else:
        dfn ^= move_bit
    return _squares(_captures(att, dfn, king, m.mover, to))


def king_capture_check(s: BoardState, m: Move) -> bool:
    """Whether the attacker move ``m`` captures the king."""
    if m.mover is not Side.ATTACKER:
        return False
    att = s.attacker_bits ^ ((1 << m.from_sq.index) | (1 << m.to_sq.index))
    return _king_captured(att, s.king_index, m.to_sq.index)


def is_legal_slide(s: BoardState, frm: Square, to: Square) -> bool:
    if s.outcome is not None:
        return False
    return any(f == frm.index and t == to.index
               for f, t in _slides(s.attacker_bits, s.defender_bits, s.king_index, s.to_move))


def apply_move(s: BoardState, m: Move | tuple) -> BoardState:
    """Play ``m`` (a :class:`Move` or a ``(from, to)`` pair of squares)."""
    _check_live(s)
    frm, to = (m.from_sq, m.to_sq) if isinstance(m, Move) else m
    if isinstance(m, Move) and m.mover is not s.to_move:
        raise IllegalMoveError(f"{frm}-{to}: it is {s.to_move.name.lower()}'s turn")
    if not is_legal_slide(s, frm, to):
        raise IllegalMoveError(f"{frm}-{to} is not legal in {s.to_notation()}")
    att, dfn, king, _, outcome = _play(
        s.attacker_bits, s.defender_bits, s.king_index, s.to_move, frm.index, to.index)
    side = s.to_move.other
    reps = dict(s.repetitions)
    fp = (att, dfn, king, side.value)
    reps[fp] = reps.get(fp, 0) + 1
    if outcome is None and reps[fp] >= s.repetition_limit:
        outcome = Outcome.DRAW
    return BoardState(att, dfn, king, side, outcome, tuple(sorted(reps.items())),
                      s.repetition_limit)


def play(s: BoardState, *moves: str) -> BoardState:
    """Apply moves written ``r1c4-r1c3``."""
    for text in moves:
        a, b = text.split("-")
        s = apply_move(s, (Square.parse(a), Square.parse(b)))
    return s


# --------------------------------------------------------------------------
# Perft
# --------------------------------------------------------------------------


def perft(s: BoardState, depth: int) -> int:
    """Number of move sequences of exactly ``depth`` plies from ``s``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth == 0:
        return 1
    if s.outcome is not None:
        return 0
    reps = dict(s.repetitions)
    return _perft(s.attacker_bits, s.defender_bits, s.king_index, s.to_move, depth,
                  reps, s.repetition_limit)


def _perft(att, dfn, king, side, depth, reps, limit) -> int:
    if depth == 1:
        return sum(1 for _ in _slides(att, dfn, king, side))
    total = 0
    other = side.other
    for frm, to in _slides(att, dfn, king, side):
        a2, d2, k2, _, outcome = _play(att, dfn, king, side, frm, to)
        if outcome is not None:
            continue
        fp = (a2, d2, k2, other.value)
        seen = reps.get(fp, 0) + 1
        if seen >= limit:
            continue
        reps[fp] = seen
        total += _perft(a2, d2, k2, other, depth - 1, reps, limit)
        reps[fp] = seen - 1
    return total


# --------------------------------------------------------------------------
# Symmetry
# --------------------------------------------------------------------------


def _map_bits(bits: int, perm: tuple[int, ...]) -> int:
    out = 0
    for i in _indices(bits):
        out |= 1 << perm[i]
    return out


def transform_state(t: Symmetry, s: BoardState) -> BoardState:
    """Image of ``s`` (including its repetition history) under ``t``."""
    perm = t.permutation

    def fp_image(fp):
        att, dfn, king, side = fp
        return (_map_bits(att, perm), _map_bits(dfn, perm), perm[king], side)

    reps = tuple(sorted((fp_image(fp), n) for fp, n in s.repetitions))
    return BoardState(_map_bits(s.attacker_bits, perm), _map_bits(s.defender_bits, perm),
                      perm[s.king_index], s.to_move, s.outcome, reps, s.repetition_limit)


def canonicalize(s: BoardState) -> BoardState:
    """The symmetry image of ``s`` with the least notation string."""
    images = [transform_state(t, s) for t in Symmetry]
    return min(images, key=lambda x: (format_position(x), x.repetitions))

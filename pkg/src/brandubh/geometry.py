"""Board geometry for the 7x7 Brandubh board.

Squares are 1-based ``(row, col)`` pairs, rows numbered top to bottom and
columns left to right, so the throne sits at ``(4, 4)``.  Each square also
has a flat index ``(row - 1) * 7 + (col - 1)`` used for bitboards.
"""

from __future__ import annotations

import enum
import re
from typing import NamedTuple

SIZE = 7
NUM_SQUARES = SIZE * SIZE

_SQUARE_RE = re.compile(r"r([1-7])c([1-7])")


class Square(NamedTuple):
    row: int
    col: int

    @property
    def index(self) -> int:
        return (self.row - 1) * SIZE + (self.col - 1)

    @classmethod
    def from_index(cls, index: int) -> Square:
        return SQUARES[index]

    @classmethod
    def parse(cls, text: str) -> Square:
        """Parse the ``r4c4`` text form."""
        m = _SQUARE_RE.fullmatch(text.strip())
        if m is None:
            raise ValueError(f"invalid square {text!r}; expected e.g. 'r4c4'")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"r{self.row}c{self.col}"


def square(row: int, col: int) -> Square:
    """Checked constructor."""
    if not (1 <= row <= SIZE and 1 <= col <= SIZE):
        raise ValueError(f"square ({row},{col}) is off the 7x7 board")
    return Square(row, col)


SQUARES: tuple[Square, ...] = tuple(
    Square(r, c) for r in range(1, SIZE + 1) for c in range(1, SIZE + 1)
)
THRONE = Square(4, 4)
CORNERS = frozenset({Square(1, 1), Square(1, SIZE), Square(SIZE, 1), Square(SIZE, SIZE)})

# (drow, dcol): up, down, left, right
DIRECTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))


def on_board(row: int, col: int) -> bool:
    return 1 <= row <= SIZE and 1 <= col <= SIZE


def neighbors(sq: Square) -> list[Square]:
    """Orthogonal neighbours of ``sq`` that lie on the board."""
    out = []
    for dr, dc in DIRECTIONS:
        r, c = sq.row + dr, sq.col + dc
        if on_board(r, c):
            out.append(Square(r, c))
    return out


def occupiable_neighbors(sq: Square, for_king: bool = False) -> set[Square]:
    """Neighbours of ``sq`` a resting piece could stand on.

    The throne is always excluded: while the king is on it nobody else can
    be there, and once it has left nobody may return.  Corners are excluded
    unless ``for_king`` is set, since only the king may stand on one.
    """
    out = set()
    for n in neighbors(sq):
        if n == THRONE:
            continue
        if n in CORNERS and not for_king:
            continue
        out.add(n)
    return out


def open_cell_count(king_sq: Square) -> int:
    """Cells left for attackers and defenders once the king stands on ``king_sq``.

    Everything but the corners, the throne, the king's own square and the
    squares next to the king.
    """
    excluded = set(CORNERS) | {THRONE, king_sq} | set(neighbors(king_sq))
    return NUM_SQUARES - len(excluded)


# --------------------------------------------------------------------------
# Tile classes
# --------------------------------------------------------------------------


class TileClass(str, enum.Enum):
    OT = "OT"    # on throne
    ATT = "ATT"  # adjacent to throne
    DOA = "DOA"  # diagonal open area
    COA = "COA"  # center open area
    ADA = "ADA"  # adjacent to diagonal open area
    OEC = "OEC"  # on edge, center
    ENA = "ENA"  # on edge, not adjacent to a corner, not center
    ATC = "ATC"  # adjacent to a corner
    COR = "COR"  # corner

    def __str__(self) -> str:
        return self.value


# Color key, row by row.  Transcribed, not derived; test_geometry checks that
# the map is invariant under all eight board symmetries.
_TILE_MAP = """
COR ATC ENA OEC ENA ATC COR
ATC DOA ADA COA ADA DOA ATC
ENA ADA DOA ATT DOA ADA ENA
OEC COA ATT OT  ATT COA OEC
ENA ADA DOA ATT DOA ADA ENA
ATC DOA ADA COA ADA DOA ATC
COR ATC ENA OEC ENA ATC COR
"""

_CLASS_OF: dict[Square, TileClass] = {}
for _r, _line in enumerate(_TILE_MAP.strip().splitlines(), start=1):
    for _c, _tag in enumerate(_line.split(), start=1):
        _CLASS_OF[Square(_r, _c)] = TileClass(_tag)
assert len(_CLASS_OF) == NUM_SQUARES


def classify(sq: Square) -> TileClass:
    return _CLASS_OF[sq]


# --------------------------------------------------------------------------
# Symmetry group
# --------------------------------------------------------------------------


class Symmetry(enum.Enum):
    """The eight symmetries of the square board.

    Values are ``(transpose, flip_rows, flip_cols)``: a point is first
    optionally transposed, then rows and columns are optionally mirrored.
    """

    IDENTITY = (False, False, False)
    ROT90 = (True, False, True)      # clockwise
    ROT180 = (False, True, True)
    ROT270 = (True, True, False)
    MIRROR_V = (False, False, True)  # across the vertical centre line
    MIRROR_H = (False, True, False)  # across the horizontal centre line
    TRANSPOSE = (True, False, False)  # across the main diagonal
    ANTI_TRANSPOSE = (True, True, True)

    def apply(self, sq: Square) -> Square:
        transpose, flip_rows, flip_cols = self.value
        r, c = (sq.col, sq.row) if transpose else (sq.row, sq.col)
        if flip_rows:
            r = SIZE + 1 - r
        if flip_cols:
            c = SIZE + 1 - c
        return Square(r, c)

    def then(self, other: Symmetry) -> Symmetry:
        """The symmetry equal to applying ``self`` first, then ``other``."""
        return _COMPOSE[(other, self)]

    @property
    def inverse(self) -> Symmetry:
        return _INVERSE[self]

    @property
    def permutation(self) -> tuple[int, ...]:
        """``permutation[i]`` is the index that square ``i`` maps to."""
        return _PERMUTATIONS[self]


def apply_transform(t: Symmetry, sq: Square) -> Square:
    return t.apply(sq)


def compose(t1: Symmetry, t2: Symmetry) -> Symmetry:
    """``compose(t1, t2)`` applies ``t2`` first, then ``t1``."""
    return _COMPOSE[(t1, t2)]


def _build_tables():
    images = {t: tuple(t.apply(s) for s in SQUARES) for t in Symmetry}
    by_image = {img: t for t, img in images.items()}
    if len(by_image) != 8:
        raise AssertionError("symmetries are not distinct")
    compose_table = {}
    for t1 in Symmetry:
        for t2 in Symmetry:
            img = tuple(t1.apply(t2.apply(s)) for s in SQUARES)
            compose_table[(t1, t2)] = by_image[img]
    inverse = {
        t: next(u for u in Symmetry if compose_table[(u, t)] is Symmetry.IDENTITY)
        for t in Symmetry
    }
    perms = {t: tuple(s.index for s in img) for t, img in images.items()}
    return compose_table, inverse, perms


_COMPOSE, _INVERSE, _PERMUTATIONS = _build_tables()

"""Board geometry for queens on d-dimensional hypercubic boards.

Squares are 1-based coordinate tuples (a_1, ..., a_d) with a_i in [1, n].
A queen on q1 attacks q2 when q1 = q2 + m*eps componentwise for some
integer m and some nonzero eps in {-1,0,1}^d.  The modular variant wraps
coordinates mod n (torus board).

Squares are also addressable by a 0-based linear index: the lexicographic
rank of the coordinate tuple, first coordinate most significant.  That
mapping is part of the public contract and is what the solver's bitsets
are built on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

# Boards beyond 2**24 squares are rejected: this is a desk-scale tool and
# per-square attack masks would silently eat memory past that point.
MAX_SQUARES = 1 << 24

Coord = tuple[int, ...]


class GeometryError(ValueError):
    """Raised for malformed boards, squares or placements."""


@dataclass(frozen=True, order=True)
class BoardSpec:
    """The (n,d)-board: n squares per side, d dimensions."""

    n: int
    d: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 1:
            raise GeometryError(f"board sides and dimension must be >= 1, got ({self.n},{self.d})")
        if self.n ** self.d > MAX_SQUARES:
            raise GeometryError(
                f"board ({self.n},{self.d}) has {self.n}**{self.d} squares, limit is 2**24"
            )

    @property
    def size(self) -> int:
        return self.n ** self.d

    def contains(self, sq: Sequence[int]) -> bool:
        return len(sq) == self.d and all(1 <= c <= self.n for c in sq)

    def require(self, sq: Sequence[int]) -> Coord:
        if len(sq) != self.d:
            raise GeometryError(f"square {tuple(sq)} has dimension {len(sq)}, board has {self.d}")
        if not all(1 <= c <= self.n for c in sq):
            raise GeometryError(f"square {tuple(sq)} outside board ({self.n},{self.d})")
        return tuple(sq)

    def index(self, sq: Sequence[int]) -> int:
        """Lexicographic rank of sq, 0-based, first coordinate most significant."""
        idx = 0
        for c in sq:
            idx = idx * self.n + (c - 1)
        return idx

    def square(self, idx: int) -> Coord:
        coords = []
        for _ in range(self.d):
            coords.append(idx % self.n + 1)
            idx //= self.n
        return tuple(reversed(coords))

    def squares(self) -> Iterator[Coord]:
        """All squares in lexicographic (= linear index) order."""
        return (self.square(i) for i in range(self.size))


@lru_cache(maxsize=None)
def attack_directions(d: int) -> tuple[Coord, ...]:
    """The (3^d - 1)/2 canonical attack directions, lexicographically ordered.

    Canonical means the first nonzero entry is +1, so eps and -eps share one
    representative.
    """
    if d < 1:
        raise GeometryError(f"dimension must be >= 1, got {d}")
    dirs = []
    for eps in product((-1, 0, 1), repeat=d):
        first_nonzero = next((x for x in eps if x != 0), 0)
        if first_nonzero == 1:
            dirs.append(eps)
    dirs.sort()
    return tuple(dirs)


def attacks(q1: Sequence[int], q2: Sequence[int], board: BoardSpec) -> bool:
    """True iff q1 = q2 + m*eps for some integer m and nonzero eps in {-1,0,1}^d."""
    a = board.require(q1)
    b = board.require(q2)
    if a == b:
        return False
    deltas = [abs(x - y) for x, y in zip(a, b) if x != y]
    first = deltas[0]
    return all(x == first for x in deltas)


def modular_attacks(q1: Sequence[int], q2: Sequence[int], board: BoardSpec) -> bool:
    """True iff q1 - q2 is congruent to m*eps (mod n) for some nonzero m, eps.

    This is the torus reading of the attack lines: queens attack along
    wrapped lines in the same (3^d - 1)/2 directions.  For d=2 it coincides
    with the classic row/column/diagonal-sum congruences.
    """
    a = board.require(q1)
    b = board.require(q2)
    n = board.n
    delta = tuple((x - y) % n for x, y in zip(a, b))
    for eps in attack_directions(board.d):
        m = None
        ok = True
        for e, dx in zip(eps, delta):
            if e == 0:
                if dx != 0:
                    ok = False
                    break
            else:
                need = dx if e == 1 else (-dx) % n
                if m is None:
                    m = need
                elif m != need:
                    ok = False
                    break
        if ok and m not in (None, 0):
            return True
    return False


def attacked_squares(q: Sequence[int], board: BoardSpec, modular: bool = False) -> set[Coord]:
    """All squares attacked from q, including q itself."""
    q = board.require(q)
    n = board.n
    out = {q}
    for eps in attack_directions(board.d):
        for sign in (1, -1):
            for m in range(1, n):
                if modular:
                    pos = tuple((c - 1 + sign * m * e) % n + 1 for c, e in zip(q, eps))
                    out.add(pos)
                else:
                    pos = tuple(c + sign * m * e for c, e in zip(q, eps))
                    if not board.contains(pos):
                        break
                    out.add(pos)
    return out


def attack_lines(board: BoardSpec) -> list[tuple[Coord, list[tuple[Coord, ...]]]]:
    """Maximal collinear square sets per canonical direction.

    Lines of length 1 are dropped (a <=1 constraint over one binary is
    vacuous).  Order is deterministic: directions lexicographically, lines by
    their anchor (lexicographically smallest square on the line).  Squares
    within a line are listed in march order, which is lexicographic.
    """
    n = board.n
    result = []
    for eps in attack_directions(board.d):
        lines = []
        for sq in board.squares():
            back = tuple(c - e for c, e in zip(sq, eps))
            if board.contains(back):
                continue  # not an anchor
            line = [sq]
            cur = sq
            while True:
                cur = tuple(c + e for c, e in zip(cur, eps))
                if not board.contains(cur):
                    break
                line.append(cur)
            if len(line) >= 2:
                lines.append(tuple(line))
        result.append((eps, lines))
    return result


def layer(board: BoardSpec, dim: int, idx: int) -> set[Coord]:
    """The n^(d-1) squares whose coordinate `dim` (1-based) equals idx."""
    if not 1 <= dim <= board.d:
        raise GeometryError(f"dim {dim} out of range for d={board.d}")
    if not 1 <= idx <= board.n:
        raise GeometryError(f"idx {idx} out of range for n={board.n}")
    return {sq for sq in board.squares() if sq[dim - 1] == idx}


def queen_graph(board: BoardSpec) -> list[tuple[Coord, Coord]]:
    """Undirected edge list over squares: edges between mutually attacking pairs.

    Each edge (a, b) has index(a) < index(b); edges are sorted.
    """
    edges = set()
    for _eps, lines in attack_lines(board):
        for line in lines:
            for i in range(len(line)):
                for j in range(i + 1, len(line)):
                    edges.add((line[i], line[j]))
    return sorted(edges)


@dataclass(frozen=True)
class Placement:
    """A duplicate-free, lexicographically sorted set of squares on a board."""

    board: BoardSpec
    queens: tuple[Coord, ...]

    def __post_init__(self) -> None:
        cleaned = sorted({self.board.require(q) for q in self.queens})
        object.__setattr__(self, "queens", tuple(cleaned))

    @property
    def size(self) -> int:
        return len(self.queens)

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.board.n, "d": self.board.d, "queens": [list(q) for q in self.queens]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Placement":
        data = json.loads(text)
        board = BoardSpec(int(data["n"]), int(data["d"]))
        return cls(board, tuple(tuple(int(c) for c in q) for q in data["queens"]))


@dataclass(frozen=True)
class Verdict:
    """Outcome of verify_certificate: valid, or the exhaustive conflict list."""

    valid: bool
    conflicts: tuple[tuple[Coord, Coord], ...]


def verify_certificate(p: Placement, modular: bool = False) -> Verdict:
    """Check all queen pairs for mutual non-attack under the chosen relation."""
    rel = modular_attacks if modular else attacks
    conflicts = []
    qs = p.queens
    for i in range(len(qs)):
        for j in range(i + 1, len(qs)):
            if rel(qs[i], qs[j], p.board):
                conflicts.append((qs[i], qs[j]))
    return Verdict(valid=not conflicts, conflicts=tuple(conflicts))

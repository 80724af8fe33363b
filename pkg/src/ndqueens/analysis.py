"""Analysis over enumerated solutions: densities, regularity, coloring, tables.

Density maps record, per square, how many size-k solutions place a queen
there; the enumeration is streamed so no solution list is materialized.
Regularity checks whether a placement is an orbit of a fixed movement
vector (or, for full solutions, a coset of the movement lattice the
differences generate).  The superimposable search looks for pairwise
disjoint (n,2) solutions; n disjoint ones form an n-coloring certificate of
the queen graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import tables
from .geometry import BoardSpec, Coord, Placement, verify_certificate
from .solver import SearchOptions, SolveResult, enumerate_solutions, max_partial


class AnalysisError(ValueError):
    pass


@dataclass
class DensityMap:
    board: BoardSpec
    k: int
    counts: list[int]  # by linear square index
    total_solutions: int
    complete: bool = True

    def count_at(self, sq) -> int:
        return self.counts[self.board.index(sq)]

    def to_json_dict(self) -> dict:
        return {
            "n": self.board.n,
            "d": self.board.d,
            "k": self.k,
            "total_solutions": self.total_solutions,
            "complete": self.complete,
            "counts": list(self.counts),
        }


def density_map(board: BoardSpec, k: int, opts: SearchOptions = SearchOptions()) -> DensityMap:
    """counts[s] = number of size-k valid placements containing s."""
    counts = [0] * board.size
    total = 0
    for p in enumerate_solutions(board, k, opts):
        total += 1
        for q in p.queens:
            counts[board.index(q)] += 1
    # enumerate_solutions stops silently on limits; detect via a fresh probe
    # of the limits: the iterator shares opts, so re-check by node budget.
    complete = True
    if opts.node_limit is not None or opts.time_limit is not None:
        # Conservative: mark partial whenever explicit limits were set and
        # could have been hit.  Callers wanting certainty pass no limits.
        from .solver import count_solutions

        res = count_solutions(board, k, opts)
        complete = res.status == "optimal" and res.count == total
    return DensityMap(board, k, counts, total, complete)


def density_export(dmap: DensityMap) -> str:
    """CSV text, one block per 2D layer, blocks ordered by the fixed
    leading coordinates, rows by coordinate d-1, columns by coordinate d."""
    board = dmap.board
    n, d = board.n, board.d
    lines = []
    if d == 1:
        lines.append(",".join(str(dmap.counts[i]) for i in range(n)))
        return "\n".join(lines) + "\n"
    from itertools import product

    prefixes = list(product(range(1, n + 1), repeat=d - 2))
    for prefix in prefixes:
        if d > 2:
            lines.append("# layer " + ",".join(str(c) for c in prefix))
        for row in range(1, n + 1):
            cells = [
                str(dmap.counts[board.index(prefix + (row, col))])
                for col in range(1, n + 1)
            ]
            lines.append(",".join(cells))
        if d > 2:
            lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    start: Optional[Coord] = None
    movements: Optional[tuple[Coord, ...]] = None


def regularity_check(p: Placement) -> RegularityResult:
    """Is p a modular orbit {start + k*m} (or a coset of the difference
    lattice, for placements larger than one orbit can be)?"""
    if p.size == 0:
        raise AnalysisError("placement is empty")
    n, d = p.board.n, p.board.d
    zero = (0,) * d
    points = {tuple(c - 1 for c in q) for q in p.queens}
    if p.size == 1:
        return RegularityResult(True, p.queens[0], (zero,))

    def add(a, b):
        return tuple((x + y) % n for x, y in zip(a, b))

    def sub(a, b):
        return tuple((x - y) % n for x, y in zip(a, b))

    if p.size <= n:
        # A single orbit has at most n points: try every start/movement pair.
        for start in sorted(points):
            for other in points:
                if other == start:
                    continue
                move = sub(other, start)
                orbit = set()
                cur = start
                for _ in range(p.size):
                    orbit.add(cur)
                    cur = add(cur, move)
                if orbit == points:
                    return RegularityResult(
                        True, tuple(c + 1 for c in start), (move,)
                    )
    # Coset test: the differences from one point must form a subgroup.
    start = min(points)
    diffs = {sub(q, start) for q in points}
    if all(sub(a, b) in diffs for a in diffs for b in diffs):
        gens: list[Coord] = []
        span = {zero}
        for el in sorted(diffs):
            if el in span:
                continue
            gens.append(el)
            frontier = set(span)
            while frontier:
                nxt = {add(a, el) for a in span} - span
                span |= nxt
                frontier = nxt
        if span == diffs:
            return RegularityResult(True, tuple(c + 1 for c in start), tuple(gens))
    return RegularityResult(False)


def find_superimposable(
    n: int, count: int, opts: SearchOptions = SearchOptions()
) -> Optional[list[Placement]]:
    """`count` pairwise-disjoint full (n,2) solutions, or None.

    For count = n a success covers every square exactly once: an n-coloring
    certificate for the queen graph.
    """
    if count < 1 or count > n:
        raise AnalysisError(f"count must be in [1, {n}]")
    board = BoardSpec(n, 2)
    solutions = list(enumerate_solutions(board, n, opts))
    masks = []
    for p in solutions:
        m = 0
        for q in p.queens:
            m |= 1 << board.index(q)
        masks.append(m)
    full = (1 << board.size) - 1
    chosen: list[int] = []

    if count == n:
        # Exact cover: every square must be covered; branch on the uncovered
        # square with the fewest disjoint candidate solutions.
        by_square: dict[int, list[int]] = {i: [] for i in range(board.size)}
        for idx, m in enumerate(masks):
            mm = m
            while mm:
                low = mm & -mm
                mm ^= low
                by_square[low.bit_length() - 1].append(idx)

        def cover(used: int) -> bool:
            if used == full:
                return True
            best_sq, best_cands = None, None
            rest = full ^ used
            while rest:
                low = rest & -rest
                rest ^= low
                sq = low.bit_length() - 1
                cands = [i for i in by_square[sq] if not masks[i] & used]
                if best_cands is None or len(cands) < len(best_cands):
                    best_sq, best_cands = sq, cands
                    if not cands:
                        return False
            for i in best_cands:
                chosen.append(i)
                if cover(used | masks[i]):
                    return True
                chosen.pop()
            return False

        if cover(0):
            return [solutions[i] for i in chosen]
        return None

    def pick(start: int, used: int) -> bool:
        if len(chosen) == count:
            return True
        for i in range(start, len(masks)):
            if masks[i] & used:
                continue
            chosen.append(i)
            if pick(i + 1, used | masks[i]):
                return True
            chosen.pop()
        return False

    if pick(0, 0):
        return [solutions[i] for i in chosen]
    return None


def tables_report(scope: str = "all", opts: SearchOptions = SearchOptions()) -> dict:
    """Known-values tables with per-cell provenance, diffable against the
    vendored reference.  Small boards are re-solved live and cross-checked."""
    if scope not in ("all", "qmax", "counts", "qc"):
        raise AnalysisError(f"unknown scope {scope!r}")
    out: dict = {}
    if scope in ("all", "qmax"):
        qmax_rows: dict[int, dict[int, dict]] = {}
        for (n, d), value in sorted(tables.QMAX_EXACT.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            cell = {"value": value, "provenance": "published"}
            if n ** d <= 64:
                board = BoardSpec(n, d)
                res = max_partial(board, opts, upper_bound=n ** (d - 1))
                if res.status == "optimal":
                    if res.best_size != value:
                        cell["provenance"] = f"MISMATCH computed {res.best_size}"
                    else:
                        cell["provenance"] = "computed"
            qmax_rows.setdefault(d, {})[n] = cell
        out["qmax"] = qmax_rows
    if scope in ("all", "counts"):
        counts: dict[int, dict[int, dict]] = {}
        for n, v in tables.COUNT_2D_FULL.items():
            counts.setdefault(2, {})[n] = {"value": v, "k": n, "provenance": "published"}
        for (n, d), v in tables.COUNT_MAX.items():
            k = tables.qmax(n, d)
            counts.setdefault(d, {})[n] = {"value": v, "k": k, "provenance": "published"}
        out["counts"] = counts
    if scope in ("all", "qc"):
        qc_rows: dict[int, dict[int, dict]] = {}
        for (n, d), v in sorted(tables.QC_EXACT.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            qc_rows.setdefault(d, {})[n] = {"value": v, "provenance": "published"}
        out["qc"] = qc_rows
    return out

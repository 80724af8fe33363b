"""Exact combinatorial engine for (n,d)-queens problems.

Placements are bitsets over linear square indices (see geometry).  Because
the last coordinate is least significant in the linear index, the board
decomposes into n^(d-1) contiguous "columns" of n bits, one per line along
the last axis.  Any valid placement holds at most one queen per column, so
counting and enumeration walk columns in order with a skip budget, while
maximization and decision problems use branch and bound with a
line-partition capacity bound (for every direction, each of its lines holds
at most one queen).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Optional

from .geometry import (
    BoardSpec,
    Coord,
    Placement,
    attack_directions,
    attack_lines,
    attacked_squares,
    attacks,
    modular_attacks,
    verify_certificate,
)


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SearchOptions:
    time_limit: float | None = None
    node_limit: int | None = None
    threads: int = 1
    symmetry_reduction: bool = False
    modular: bool = False

    def __post_init__(self) -> None:
        if self.time_limit is not None and self.time_limit <= 0:
            raise SolverError("time_limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise SolverError("node_limit must be positive")
        if self.threads < 1:
            raise SolverError("threads must be >= 1")


@dataclass
class SolveResult:
    status: str  # optimal | infeasible | limit
    best_size: int = 0
    count: int | None = None
    witness: Optional[Placement] = None
    nodes: int = 0

    def to_json_dict(self) -> dict:
        out = {
            "status": self.status,
            "best_size": self.best_size,
            "nodes": self.nodes,
        }
        if self.count is not None:
            out["count"] = self.count
        if self.witness is not None:
            out["witness"] = [list(q) for q in self.witness.queens]
        return out


class _Limits:
    """Shared time/node budget for one search call."""

    def __init__(self, opts: SearchOptions):
        self.deadline = None if opts.time_limit is None else time.monotonic() + opts.time_limit
        self.node_limit = opts.node_limit
        self.nodes = 0
        self.hit = False

    def tick(self) -> bool:
        """Count a node; True while within budget."""
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.hit = True
        elif self.deadline is not None and self.nodes % 1024 == 0:
            if time.monotonic() > self.deadline:
                self.hit = True
        return not self.hit


class BoardEngine:
    """Precomputed masks for one (board, modular) pair."""

    def __init__(self, board: BoardSpec, modular: bool = False):
        self.board = board
        self.modular = modular
        self.n = board.n
        self.d = board.d
        self.size = board.size
        self.ncols = board.size // board.n
        self.full_mask = (1 << self.size) - 1
        ndirs = (3 ** self.d - 1) // 2
        # Attack mask per square, self bit included.  Marching along
        # directions costs O(size * ndirs * n); for boards where directions
        # outnumber squares (small n, large d) pairwise checks are cheaper.
        self.masks = [1 << i for i in range(self.size)]
        if ndirs * self.n > self.size:
            rel = modular_attacks if modular else attacks
            squares = list(board.squares())
            for i in range(self.size):
                for j in range(i + 1, self.size):
                    if rel(squares[i], squares[j], board):
                        self.masks[i] |= 1 << j
                        self.masks[j] |= 1 << i
        else:
            for i in range(self.size):
                m = 0
                for sq in attacked_squares(board.square(i), board, modular=modular):
                    m |= 1 << board.index(sq)
                self.masks[i] = m
        # Column c covers bits [c*n, (c+1)*n).
        col = (1 << self.n) - 1
        self.col_masks = [col << (c * self.n) for c in range(self.ncols)]
        self._line_partitions: list[list[int]] | None = None

    @property
    def line_partitions(self) -> list[list[int]]:
        """Per-direction line partitions for capacity bounding, built lazily.

        On the modular board lines wrap and only the last-axis column
        partition applies.  For d >= 5 the non-axis directions are skipped:
        their bounding value rarely pays for the per-node cost.
        """
        if self._line_partitions is not None:
            return self._line_partitions
        board = self.board
        parts: list[list[int]] = []
        if self.modular:
            parts.append(self.col_masks)
        elif self.d >= 5:
            # Enumerating all (3^d - 1)/2 directions is too expensive here
            # and diagonal partitions rarely tighten the bound; build the d
            # axis partitions directly.  Fixing all coordinates but axis j
            # gives one line; its squares differ by stride n^(d-1-j).
            n, d = self.n, self.d
            for j in range(d):
                stride = n ** (d - 1 - j)
                part = []
                for base in range(self.size // n):
                    # linear indices with coordinate j zeroed out
                    hi, lo = divmod(base, stride)
                    anchor = hi * stride * n + lo
                    m = 0
                    for step in range(n):
                        m |= 1 << (anchor + step * stride)
                    part.append(m)
                parts.append(part)
        else:
            for eps, lines in attack_lines(board):
                part = []
                covered = 0
                for line in lines:
                    m = 0
                    for sq in line:
                        m |= 1 << board.index(sq)
                    part.append(m)
                    covered |= m
                # Singleton cells dropped from attack_lines still hold
                # capacity 1 each; add them back for an exact partition.
                rest = self.full_mask ^ covered
                while rest:
                    low = rest & -rest
                    part.append(low)
                    rest ^= low
                parts.append(part)
        self._line_partitions = parts
        return parts

    def placement(self, chosen: list[int]) -> Placement:
        return Placement(self.board, tuple(self.board.square(i) for i in sorted(chosen)))


@lru_cache(maxsize=32)
def get_engine(board: BoardSpec, modular: bool = False) -> BoardEngine:
    return BoardEngine(board, modular)


def _canonical_transforms(board: BoardSpec):
    n, d = board.n, board.d
    out = []
    for perm in permutations(range(d)):
        for flips in product((False, True), repeat=d):
            out.append((perm, flips))
    return out


def canonical_form(p: Placement) -> tuple[Coord, ...]:
    """Lexicographically minimal image of p under signed coordinate permutations."""
    n = p.board.n
    best = None
    for perm, flips in _canonical_transforms(p.board):
        image = tuple(
            sorted(
                tuple(
                    (n + 1 - q[perm[i]]) if flips[i] else q[perm[i]]
                    for i in range(p.board.d)
                )
                for q in p.queens
            )
        )
        if best is None or image < best:
            best = image
    return best


def _orbit_minimal_squares(engine: BoardEngine) -> int:
    """Bitmask of squares that are lex-minimal in their symmetry orbit."""
    board = engine.board
    mask = 0
    for i in range(engine.size):
        p = Placement(board, (board.square(i),))
        if canonical_form(p)[0] == board.square(i):
            mask |= 1 << i
    return mask


def _forced_columns(engine: BoardEngine, partial: Placement) -> dict[int, int]:
    forced = {}
    for q in partial.queens:
        idx = engine.board.index(q)
        forced[idx // engine.n] = idx
    return forced


def count_solutions(board: BoardSpec, k: int, opts: SearchOptions = SearchOptions()) -> SolveResult:
    """Number of valid placements of exactly k queens.  Exact big integers."""
    if k < 0:
        raise SolverError("k must be >= 0")
    engine = get_engine(board, opts.modular)
    if k > engine.ncols:
        return SolveResult(status="optimal", best_size=0, count=0, nodes=0)
    limits = _Limits(opts)
    first_restrict = _orbit_minimal_squares(engine) if opts.symmetry_reduction else None
    if opts.threads > 1:
        total = _count_threaded(engine, k, opts, limits, first_restrict)
    else:
        total = _count_rec(engine, 0, k, 0, limits, first_restrict)
    status = "limit" if limits.hit else "optimal"
    return SolveResult(status=status, best_size=k if total else 0, count=total, nodes=limits.nodes)


def _count_rec(engine, c, need, attacked, limits, first_restrict):
    if need == 0:
        return 1
    ncols = engine.ncols
    if ncols - c < need or not limits.tick():
        return 0
    total = 0
    free = engine.col_masks[c] & ~attacked
    if first_restrict is not None and attacked == 0:
        free &= first_restrict
    while free:
        low = free & -free
        free ^= low
        total += _count_rec(engine, c + 1, need - 1, attacked | engine.masks[low.bit_length() - 1], limits, first_restrict)
    if ncols - c - 1 >= need:
        total += _count_rec(engine, c + 1, need, attacked, limits, first_restrict)
    return total


def _count_threaded(engine, k, opts, limits, first_restrict):
    """Fan out over first-column decisions; deterministic sum regardless of threads."""
    from concurrent.futures import ThreadPoolExecutor

    jobs = []
    free = engine.col_masks[0]
    if first_restrict is not None:
        free &= first_restrict
    while free:
        low = free & -free
        free ^= low
        sq = low.bit_length() - 1
        jobs.append((k - 1, engine.masks[sq]))
    if engine.ncols - 1 >= k:
        jobs.append((k, 0))
    restrict_rest = None if first_restrict is None else first_restrict

    def run(job):
        need, attacked = job
        if need < 0:
            return 0
        sub = _Limits(opts)
        r = first_restrict if attacked == 0 else None
        total = _count_rec(engine, 1, need, attacked, sub, r)
        limits.nodes += sub.nodes
        if sub.hit:
            limits.hit = True
        return total

    with ThreadPoolExecutor(max_workers=opts.threads) as pool:
        return sum(pool.map(run, jobs))


def enumerate_solutions(
    board: BoardSpec, k: int, opts: SearchOptions = SearchOptions()
) -> Iterator[Placement]:
    """Every valid size-k placement exactly once, in lexicographic order."""
    if k < 0:
        raise SolverError("k must be >= 0")
    engine = get_engine(board, opts.modular)
    if k > engine.ncols:
        return
    limits = _Limits(opts)
    chosen: list[int] = []

    def rec(c, need, attacked):
        if need == 0:
            yield engine.placement(chosen)
            return
        if engine.ncols - c < need or not limits.tick():
            return
        free = engine.col_masks[c] & ~attacked
        while free:
            low = free & -free
            free ^= low
            sq = low.bit_length() - 1
            chosen.append(sq)
            yield from rec(c + 1, need - 1, attacked | engine.masks[sq])
            chosen.pop()
        if engine.ncols - c - 1 >= need:
            yield from rec(c + 1, need, attacked)

    yield from rec(0, k, 0)


def _capacity_bound(engine: BoardEngine, attacked: int, settled_empty: int) -> int:
    """Upper bound on additional queens: min over directions of free lines.

    A square is available when not attacked and not in a column already
    settled as empty; every line of every direction holds at most one
    additional queen.
    """
    avail = engine.full_mask & ~attacked & ~settled_empty
    best = None
    for part in engine.line_partitions:
        cnt = 0
        for m in part:
            if m & avail:
                cnt += 1
        if best is None or cnt < best:
            best = cnt
            if best == 0:
                break
    return best or 0


def _branch_search(
    engine: BoardEngine,
    opts: SearchOptions,
    target: int | None,
    forced: dict[int, int],
    lower_start: int = 0,
    upper_hint: int | None = None,
):
    """Column branch and bound.

    target None: maximize.  target k: decide whether a placement of size k
    (with the forced queens) exists; stops at the first witness.
    Returns (best_size, witness_indices or None, limits, proven_optimal).
    """
    limits = _Limits(opts)
    best = {"size": lower_start, "witness": None, "found": False}
    ncols = engine.ncols

    # Settle forced queens first.
    attacked0 = 0
    chosen0 = []
    for c in sorted(forced):
        sq = forced[c]
        if attacked0 & (1 << sq):
            return 0, None, limits, True  # forced queens attack each other
        attacked0 |= engine.masks[sq]
        chosen0.append(sq)
    forced_cols = set(forced)

    chosen = list(chosen0)

    def rec(attacked, settled_empty, undecided):
        if not limits.tick():
            return
        placed = len(chosen)
        if target is not None and placed >= target:
            best["size"] = placed
            best["witness"] = list(chosen)
            best["found"] = True
            return
        if target is None and placed > best["size"]:
            best["size"] = placed
            best["witness"] = list(chosen)
        bound = placed + _capacity_bound(engine, attacked, settled_empty)
        if target is not None:
            if bound < target:
                return
        else:
            if bound <= best["size"]:
                return
        # Fail-first: branch on the undecided column with fewest candidates.
        best_col = None
        best_free = 0
        best_cnt = -1
        live = []
        for c in undecided:
            free = engine.col_masks[c] & ~attacked
            if not free:
                continue  # attacked only grows, so this column stays empty
            live.append(c)
            cnt = free.bit_count()
            if best_cnt == -1 or cnt < best_cnt:
                best_cnt = cnt
                best_col = c
                best_free = free
        if best_col is None:
            return
        rest = [c for c in live if c != best_col]
        free = best_free
        while free:
            low = free & -free
            free ^= low
            sq = low.bit_length() - 1
            chosen.append(sq)
            rec(attacked | engine.masks[sq], settled_empty, rest)
            chosen.pop()
            if best["found"]:
                return
        rec(attacked, settled_empty | engine.col_masks[best_col], rest)

    undecided = [c for c in range(ncols) if c not in forced_cols]
    if target is not None and len(chosen0) >= target:
        return len(chosen0), chosen0, limits, True
    if upper_hint is not None and target is None:
        # A proven external upper bound lets the search stop early.
        pass
    rec(attacked0, 0, undecided)
    proven = not limits.hit
    if target is None and upper_hint is not None and best["size"] >= upper_hint:
        proven = True
    return best["size"], best["witness"], limits, proven


def max_partial(
    board: BoardSpec,
    opts: SearchOptions = SearchOptions(),
    upper_bound: int | None = None,
    method: str = "auto",
) -> SolveResult:
    """Maximum size of a non-attacking placement, with witness.

    `upper_bound` is an externally proven bound (tiling/layer arguments);
    the search stops as soon as it is attained.  method: "branch" for the
    internal branch and bound, "ip" for the integer-programming route
    (scipy HiGHS over the strengthened model), "auto" to pick by size.
    """
    if method == "auto":
        method = "ip" if _should_use_ip(board) else "branch"
    if method == "ip":
        return _max_partial_ip(board, opts, upper_bound)
    engine = get_engine(board, opts.modular)
    if upper_bound is not None:
        # First try to attain the bound directly; decide searches are far
        # cheaper than exhausting the maximize tree.
        size, witness, limits, proven = _branch_search(engine, opts, upper_bound, {})
        if size >= upper_bound and witness is not None:
            return SolveResult(
                status="optimal", best_size=size, witness=engine.placement(witness), nodes=limits.nodes
            )
    size, witness, limits, proven = _branch_search(engine, opts, None, {}, upper_hint=upper_bound)
    status = "optimal" if proven else "limit"
    result = SolveResult(status=status, best_size=size, nodes=limits.nodes)
    if witness is not None:
        result.witness = engine.placement(witness)
    elif size == 0 and board.size > 0:
        pass
    return result


def _should_use_ip(board: BoardSpec) -> bool:
    if not _have_scipy():
        return False
    # The pure-Python tree is fine below a couple hundred squares of slack.
    return board.size > 125


def _have_scipy() -> bool:
    try:
        import scipy.optimize  # noqa: F401
    except ImportError:
        return False
    return True


def _max_partial_ip(board, opts, upper_bound):
    from . import ipmodel, milp

    model = ipmodel.strengthened_model(board, mode="max")
    status, value, solution, nodes = milp.solve_ip(model, time_limit=opts.time_limit)
    if status == "optimal":
        witness = milp.solution_placement(model, solution)
        check = verify_certificate(witness)
        if not check.valid or witness.size != int(round(value)):
            raise SolverError("ip route returned an invalid witness")
        return SolveResult(status="optimal", best_size=witness.size, witness=witness, nodes=nodes)
    if status == "infeasible":
        return SolveResult(status="infeasible", best_size=0, nodes=nodes)
    if solution is not None:
        witness = milp.solution_placement(model, solution)
        if verify_certificate(witness).valid:
            return SolveResult(
                status="limit", best_size=witness.size, witness=witness, nodes=nodes
            )
    return SolveResult(status="limit", best_size=0, nodes=nodes)


def decide(
    board: BoardSpec, k: int, opts: SearchOptions = SearchOptions()
) -> SolveResult:
    """Does a valid placement of size k exist?  infeasible is a proof."""
    if k < 0:
        raise SolverError("k must be >= 0")
    engine = get_engine(board, opts.modular)
    if k == 0:
        return SolveResult(status="optimal", best_size=0, witness=Placement(board, ()))
    if k > engine.ncols:
        return SolveResult(status="infeasible", best_size=0, nodes=1)
    size, witness, limits, proven = _branch_search(engine, opts, k, {})
    if witness is not None and size >= k:
        return SolveResult(
            status="optimal", best_size=size, witness=engine.placement(witness), nodes=limits.nodes
        )
    return SolveResult(status="infeasible" if proven else "limit", best_size=0, nodes=limits.nodes)


def complete(
    board: BoardSpec,
    partial: Placement,
    k: int,
    opts: SearchOptions = SearchOptions(),
    method: str = "auto",
) -> SolveResult:
    """Decide whether a valid superset of `partial` of size k exists."""
    if partial.board != board:
        raise SolverError("partial placement is on a different board")
    verdict = verify_certificate(partial, modular=opts.modular)
    if not verdict.valid:
        raise SolverError(f"partial placement is invalid: {verdict.conflicts[0]}")
    engine = get_engine(board, opts.modular)
    if k < partial.size:
        return SolveResult(status="infeasible", best_size=0, nodes=0)
    if k > engine.ncols:
        return SolveResult(status="infeasible", best_size=0, nodes=1)
    forced = _forced_columns(engine, partial)
    if method == "auto":
        method = "ip" if (_should_use_ip(board) and board.d * board.n >= 12) else "branch"
    if method == "ip":
        return _complete_ip(board, partial, k, opts)
    size, witness, limits, proven = _branch_search(engine, opts, k, forced)
    if witness is not None and size >= k:
        return SolveResult(
            status="optimal", best_size=size, witness=engine.placement(witness), nodes=limits.nodes
        )
    return SolveResult(status="infeasible" if proven else "limit", best_size=0, nodes=limits.nodes)


def _complete_ip(board, partial, k, opts):
    from . import ipmodel, milp

    model = ipmodel.strengthened_model(board, mode=f"fixed:{k}")
    status, value, solution, nodes = milp.solve_ip(
        model, forced=partial.queens, time_limit=opts.time_limit
    )
    if status == "optimal":
        witness = milp.solution_placement(model, solution)
        check = verify_certificate(witness)
        if not check.valid or witness.size != k or not set(partial.queens) <= set(witness.queens):
            raise SolverError("ip route returned an invalid completion")
        return SolveResult(status="optimal", best_size=k, witness=witness)
    if status == "infeasible":
        return SolveResult(status="infeasible", best_size=0)
    return SolveResult(status="limit", best_size=0)


def completion_threshold(
    board: BoardSpec,
    opts: SearchOptions = SearchOptions(),
    qmax: int | None = None,
    method: str = "auto",
) -> SolveResult:
    """qc(n,d): largest t such that every valid placement of size <= t completes.

    Sweeps sizes 1, 2, ... exhaustively; candidate placements are reduced to
    canonical representatives under the board's signed-permutation symmetry
    (completability is symmetry invariant).  best_size carries qc; status
    "limit" means best_size is only a lower bound.
    """
    if qmax is None:
        from . import tables

        qmax = tables.qmax(board.n, board.d)
    if qmax is None:
        res = max_partial(board, opts)
        if res.status != "optimal":
            return SolveResult(status="limit", best_size=0, nodes=res.nodes)
        qmax = res.best_size
    limits_hit = False
    threshold = 0
    for size in range(1, qmax + 1):
        seen: set[tuple[Coord, ...]] = set()
        all_ok = True
        for p in enumerate_solutions(board, size, SearchOptions(modular=opts.modular)):
            form = canonical_form(p)
            if form in seen:
                continue
            seen.add(form)
            res = complete(board, p, qmax, opts, method=method)
            if res.status == "limit":
                return SolveResult(status="limit", best_size=threshold)
            if res.status == "infeasible":
                all_ok = False
                break
        if not all_ok:
            break
        threshold = size
    return SolveResult(status="limit" if limits_hit else "optimal", best_size=threshold)


def min_domination(board: BoardSpec, opts: SearchOptions = SearchOptions()) -> SolveResult:
    """Minimum number of queens attacking every board square.  Set-cover B&B."""
    engine = get_engine(board, opts.modular)
    limits = _Limits(opts)
    full = engine.full_mask
    # Candidates ordered by coverage descending, then index, for a strong
    # greedy incumbent and reproducible search.
    order = sorted(range(engine.size), key=lambda i: (-engine.masks[i].bit_count(), i))
    max_cover = engine.masks[order[0]].bit_count()
    best = {"size": engine.size + 1, "witness": None}

    def rec(covered, chosen, start):
        if not limits.tick():
            return
        if covered == full:
            if len(chosen) < best["size"]:
                best["size"] = len(chosen)
                best["witness"] = list(chosen)
            return
        missing = (full ^ covered).bit_count()
        lower = len(chosen) + (missing + max_cover - 1) // max_cover
        if lower >= best["size"]:
            return
        target_bit = (full ^ covered) & -(full ^ covered)
        # Branch on candidates covering the lowest uncovered square.
        for i in order:
            if engine.masks[i] & target_bit:
                rec(covered | engine.masks[i], chosen + [i], 0)

    rec(0, [], 0)
    witness = engine.placement(best["witness"]) if best["witness"] is not None else None
    status = "optimal" if not limits.hit else "limit"
    return SolveResult(status=status, best_size=best["size"], witness=witness, nodes=limits.nodes)

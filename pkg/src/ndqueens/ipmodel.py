"""Integer-programming models for (n,d)-queens problems.

The base model has one binary per square and one <=1 constraint per attack
line; strengthening families add cube cliques, star cliques, layer
inequalities, subsolution inequalities and odd-cycle inequalities.  Models
come in three modes: "max" (maximize the queen count), "fixed:K"
(feasibility of exactly K queens) and "refute:K" (same model; the intent is
proving infeasibility of K).  Models export to portable LP text with a
bundled reader that parses the text back to an equal model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .geometry import (
    BoardSpec,
    Coord,
    Placement,
    attack_lines,
    attacks,
    queen_graph,
)


class ModelError(ValueError):
    pass


def var_name(sq: Sequence[int]) -> str:
    return "x_" + "_".join(str(c) for c in sq)


@dataclass(frozen=True)
class IpVariable:
    square: Coord
    name: str


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    variables: tuple[str, ...]  # all coefficients are 1
    sense: str  # "<=" | "=" | ">="
    rhs: int
    tag: str

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ModelError(f"repeated variable in constraint {self.name}")
        if self.rhs < 0:
            raise ModelError(f"negative rhs in constraint {self.name}")
        if self.sense not in ("<=", "=", ">="):
            raise ModelError(f"bad sense {self.sense!r}")


def parse_mode(mode: str) -> tuple[str, int | None]:
    if mode == "max":
        return "max", None
    m = re.fullmatch(r"(fixed|refute):(\d+)", mode)
    if not m:
        raise ModelError(f"bad mode {mode!r}; expected max, fixed:K or refute:K")
    return m.group(1), int(m.group(2))


@dataclass
class IpModel:
    board: BoardSpec
    variables: tuple[IpVariable, ...]
    constraints: list[LinearConstraint]
    objective: Optional[str]  # "maximize" | "minimize" | None
    mode: str
    warmstart: Optional[Placement] = field(default=None, compare=False)

    def tag_count(self, tag: str) -> int:
        return sum(1 for c in self.constraints if c.tag == tag)

    def next_name(self, tag: str) -> str:
        return f"{tag}{self.tag_count(tag)}"

    def add(self, tag: str, variables: Iterable[str], sense: str, rhs: int) -> None:
        self.constraints.append(
            LinearConstraint(self.next_name(tag), tuple(variables), sense, rhs, tag)
        )


def _variables(board: BoardSpec) -> tuple[IpVariable, ...]:
    return tuple(IpVariable(sq, var_name(sq)) for sq in board.squares())


def build_base(board: BoardSpec, mode: str = "max") -> IpModel:
    """One <=1 constraint per attack line of length >= 2, plus mode plumbing.

    In d=2 full-solution mode (fixed:n / refute:n with n >= 4) the row and
    column constraints are tightened to equalities, which is only justified
    when a full solution exists.
    """
    kind, k = parse_mode(mode)
    model = IpModel(
        board=board,
        variables=_variables(board),
        constraints=[],
        objective="maximize" if kind == "max" else None,
        mode=mode,
    )
    full_2d = board.d == 2 and kind in ("fixed", "refute") and k == board.n and board.n >= 4
    axis_dirs = {tuple(1 if i == j else 0 for i in range(board.d)) for j in range(board.d)}
    for eps, lines in attack_lines(board):
        tighten = full_2d and eps in axis_dirs
        for line in lines:
            model.add("base", (var_name(sq) for sq in line), "=" if tighten else "<=", 1)
    if kind in ("fixed", "refute"):
        model.add("cardinality", (v.name for v in model.variables), "=", k)
    return model


def add_cube_cliques(model: IpModel) -> IpModel:
    """Corner cliques of axis-aligned hypercubes; even side adds the center.

    For every anchor a and h >= 1 with a+h in range, the 2^d corners
    (a_i or a_i+h per dimension) are pairwise attacking.  When h is even the
    cube's center square joins the same clique.  There are
    sum_{m=2}^{n} (n-m+1)^d of these.
    """
    board = model.board
    if board.d < 2:
        raise ModelError("cube cliques need d >= 2")
    n, d = board.n, board.d
    entries = []
    for h in range(1, n):
        for anchor in product(range(1, n - h + 1), repeat=d):
            members = [
                tuple(a + h * bit for a, bit in zip(anchor, bits))
                for bits in product((0, 1), repeat=d)
            ]
            if h % 2 == 0:
                members.append(tuple(a + h // 2 for a in anchor))
            entries.append((anchor, h, members))
    entries.sort(key=lambda e: (e[0], e[1]))
    for _anchor, _h, members in entries:
        model.add("cube", (var_name(sq) for sq in members), "<=", 1)
    return model


def add_star_cliques(model: IpModel) -> IpModel:
    """Cross-polytope cliques: a center plus its +-h axis neighbors (2d+1 squares)."""
    board = model.board
    if board.d < 2:
        raise ModelError("star cliques need d >= 2")
    n, d = board.n, board.d
    entries = []
    for h in range(1, (n - 1) // 2 + 1):
        for center in product(range(1 + h, n - h + 1), repeat=d):
            members = [center]
            for i in range(d):
                for sign in (-1, 1):
                    members.append(center[:i] + (center[i] + sign * h,) + center[i + 1:])
            entries.append((center, h, members))
    entries.sort(key=lambda e: (e[0], e[1]))
    for _center, _h, members in entries:
        model.add("star", (var_name(sq) for sq in members), "<=", 1)
    return model


def add_layer_inequalities(model: IpModel, table: dict[int, int]) -> IpModel:
    """Per-layer cardinality cuts: a (d-f)-dimensional layer holds at most
    |Qmax(n, d-f)| queens.

    `table` maps dimension -> known |Qmax(n, dimension)| (exact value or any
    upper bound).  The d-1 layers are always cut; deeper recursion (fixing
    more coordinates) continues only while the layer dimension stays >= 3,
    since 2-dimensional layers only restate rows.
    """
    board = model.board
    n, d = board.n, board.d
    by_index: dict[Coord, str] = {v.square: v.name for v in model.variables}
    f = 1
    while f == 1 or d - f >= 3:
        sub_dim = d - f
        if sub_dim < 1:
            break
        if sub_dim not in table:
            raise ModelError(f"layer cut needs a table entry for dimension {sub_dim}")
        rhs = table[sub_dim]
        for dims in combinations(range(1, d + 1), f):
            for idxs in product(range(1, n + 1), repeat=f):
                fixed = dict(zip(dims, idxs))
                members = [
                    sq for sq in board.squares()
                    if all(sq[dim - 1] == idx for dim, idx in fixed.items())
                ]
                model.add("layer", (by_index[sq] for sq in members), "<=", rhs)
        f += 1
    return model


def add_subsolution_inequalities(
    model: IpModel, table: dict[int, int], m_range: Iterable[int]
) -> IpModel:
    """Subboard cardinality cuts: each m-subcube holds at most |Qmax(m,d)| queens."""
    board = model.board
    n, d = board.n, board.d
    for m in m_range:
        if m not in table:
            raise ModelError(f"subsolution cut needs a table entry for size {m}")
        if not 1 <= m <= n:
            raise ModelError(f"subcube size {m} out of range for n={n}")
        rhs = table[m]
        for anchor in product(range(1, n - m + 2), repeat=d):
            members = [
                tuple(a + off for a, off in zip(anchor, offs))
                for offs in product(range(m), repeat=d)
            ]
            model.add("subsol", (var_name(sq) for sq in members), "<=", rhs)
    return model


def add_odd_cycle_inequalities(
    model: IpModel, cycles: Iterable[Sequence[Coord]]
) -> IpModel:
    """Odd-cycle cuts: an odd vertex cycle O holds at most (|O|-1)/2 queens.

    Cycles must have odd length >= 5 with consecutive members mutually
    attacking; triangles are rejected (they are covered by clique cuts).
    """
    board = model.board
    for cycle in cycles:
        cyc = [board.require(sq) for sq in cycle]
        if len(set(cyc)) != len(cyc):
            raise ModelError("cycle repeats a vertex")
        if len(cyc) % 2 == 0:
            raise ModelError(f"cycle length {len(cyc)} is even")
        if len(cyc) < 5:
            raise ModelError(f"cycle length {len(cyc)} < 5; triangles are clique territory")
        for i, sq in enumerate(cyc):
            if not attacks(sq, cyc[(i + 1) % len(cyc)], board):
                raise ModelError(f"consecutive squares {sq} and {cyc[(i + 1) % len(cyc)]} do not attack")
        model.add("oddcycle", (var_name(sq) for sq in cyc), "<=", (len(cyc) - 1) // 2)
    return model


def find_chordless_odd_cycles(
    board: BoardSpec, length: int = 5, limit: int = 100
) -> list[tuple[Coord, ...]]:
    """Bounded DFS for chordless cycles of the given odd length in the queen graph."""
    if length % 2 == 0 or length < 5:
        raise ModelError("length must be odd and >= 5")
    adj: dict[Coord, set[Coord]] = {}
    for a, b in queen_graph(board):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    found: list[tuple[Coord, ...]] = []
    verts = sorted(adj)

    def extend(path: list[Coord]) -> None:
        if len(found) >= limit:
            return
        closing = len(path) + 1 == length
        for nxt in sorted(adj[path[-1]]):
            if nxt <= path[0] or nxt in path:
                continue
            # Chordless: nxt may only touch its predecessor, plus the start
            # vertex when this step closes the cycle.
            if closing:
                if nxt not in adj[path[0]]:
                    continue
                if any(nxt in adj[p] for p in path[1:-1]):
                    continue
                if path[1] < nxt:  # one orientation per cycle
                    found.append(tuple(path) + (nxt,))
                    if len(found) >= limit:
                        return
            else:
                # The second vertex is adjacent to the start by construction;
                # later vertices must avoid chords back to it.
                if len(path) >= 2 and nxt in adj[path[0]]:
                    continue
                if any(nxt in adj[p] for p in path[1:-1]):
                    continue
                path.append(nxt)
                extend(path)
                path.pop()

    for v in verts:
        if len(found) >= limit:
            break
        extend([v])
    return found


def build_domination(board: BoardSpec, mode: str = "minimize") -> IpModel:
    """Cover model: every square attacked by at least one queen."""
    if mode != "minimize":
        kind, k = parse_mode(mode)
        if kind != "fixed":
            raise ModelError("domination mode must be minimize or fixed:K")
    else:
        kind, k = "minimize", None
    from .geometry import attacked_squares

    model = IpModel(
        board=board,
        variables=_variables(board),
        constraints=[],
        objective="minimize" if kind == "minimize" else None,
        mode=mode,
    )
    for sq in board.squares():
        coverers = sorted(attacked_squares(sq, board), key=board.index)
        model.add("cover", (var_name(c) for c in coverers), ">=", 1)
    if kind == "fixed":
        model.add("cardinality", (v.name for v in model.variables), "=", k)
    return model


def strengthened_model(
    board: BoardSpec,
    mode: str = "max",
    cuts: Sequence[str] = ("cube", "star", "layer", "subsol"),
) -> IpModel:
    """Base model plus every requested cut family with vendored table values.

    Layer and subsolution cuts only use known values for strictly smaller
    boards, so nothing about the target instance itself is injected.
    """
    from . import tables

    model = build_base(board, mode)
    if "cube" in cuts and board.d >= 2:
        add_cube_cliques(model)
    if "star" in cuts and board.d >= 2:
        add_star_cliques(model)
    if "layer" in cuts and board.d >= 3:
        layer_table = tables.qmax_for_lower_dims(board.n, board.d)
        needed = {board.d - 1} | set(range(3, board.d - 1))
        if needed <= set(layer_table):
            add_layer_inequalities(model, layer_table)
    if "subsol" in cuts:
        sub_table = tables.qmax_for_sizes(board.d, range(2, board.n))
        if sub_table:
            add_subsolution_inequalities(model, sub_table, sorted(sub_table))
    return model


def evaluate(model: IpModel, p: Placement) -> list[LinearConstraint]:
    """Violated constraints for the 0/1 assignment induced by p (empty = feasible)."""
    if p.board != model.board:
        raise ModelError("placement is on a different board")
    values = {var_name(q): 1 for q in p.queens}
    return evaluate_assignment(model, values)


def evaluate_assignment(
    model: IpModel, values: dict[str, float], tol: float = 1e-9
) -> list[LinearConstraint]:
    """Violated constraints for an arbitrary (possibly fractional) assignment."""
    violated = []
    for con in model.constraints:
        total = sum(values.get(v, 0) for v in con.variables)
        ok = (
            total <= con.rhs + tol
            if con.sense == "<="
            else total >= con.rhs - tol
            if con.sense == ">="
            else abs(total - con.rhs) <= tol
        )
        if not ok:
            violated.append(con)
    return violated


_WRAP = 8  # terms per LP line


def export_lp(model: IpModel) -> str:
    """Portable LP text; byte-deterministic; ASCII with LF line endings."""
    out = [f"\\ queens model n={model.board.n} d={model.board.d} mode={model.mode}"]
    if model.objective == "minimize":
        out.append("Minimize")
    else:
        # Feasibility models export as a Maximize section with an empty
        # objective; the bundled parser restores objective=None from the mode.
        out.append("Maximize")
    names = [v.name for v in model.variables]
    if model.objective is None:
        out.append(" obj:")
    else:
        out.extend(_wrap_terms(" obj: ", names))
    out.append("Subject To")
    for con in model.constraints:
        head = f" {con.name}: "
        body = _wrap_terms(head, con.variables)
        body[-1] += f" {con.sense} {con.rhs}"
        out.extend(body)
    out.append("Binaries")
    for i in range(0, len(names), _WRAP):
        out.append(" " + " ".join(names[i : i + _WRAP]))
    out.append("End")
    return "\n".join(out) + "\n"


def _wrap_terms(head: str, names: Sequence[str]) -> list[str]:
    lines = []
    for i in range(0, len(names), _WRAP):
        chunk = " + ".join(names[i : i + _WRAP])
        if i == 0:
            lines.append(head + chunk)
        else:
            lines.append("   + " + chunk)
    if not names:
        lines.append(head.rstrip())
    return lines


def parse_lp(text: str) -> IpModel:
    """Parse LP text produced by export_lp back into an equal model."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("\\"):
        raise ModelError("missing model header comment")
    header = dict(
        kv.split("=") for kv in lines[0].lstrip("\\ ").split() if "=" in kv
    )
    board = BoardSpec(int(header["n"]), int(header["d"]))
    mode = header["mode"]
    if mode == "minimize":
        kind = "minimize"
    else:
        kind, _k = parse_mode(mode)
    # Re-join continuation lines (they start with spaces but not a name:).
    section = None
    rows: list[str] = []
    objective_terms: list[str] = []
    for line in lines[1:]:
        stripped = line.strip()
        if stripped in ("Maximize", "Minimize", "Subject To", "Binaries", "End"):
            section = stripped
            continue
        if section in ("Maximize", "Minimize"):
            objective_terms.append(stripped)
        elif section == "Subject To":
            if re.match(r"\w+:", stripped):
                rows.append(stripped)
            else:
                rows[-1] += " " + stripped
        # Binaries content is implied by the board.
    constraints = []
    for row in rows:
        name, body = row.split(":", 1)
        m = re.search(r"(<=|>=|=)\s*(\d+)\s*$", body)
        if not m:
            raise ModelError(f"no sense/rhs in row {name}")
        sense, rhs = m.group(1), int(m.group(2))
        variables = tuple(t for t in re.split(r"[\s+]+", body[: m.start()]) if t)
        tag = re.match(r"([a-z]+)", name).group(1)
        constraints.append(LinearConstraint(name.strip(), variables, sense, rhs, tag))
    objective = {"max": "maximize", "minimize": "minimize"}.get(kind)
    return IpModel(
        board=board,
        variables=_variables(board),
        constraints=constraints,
        objective=objective,
        mode=mode,
    )


def export_warmstart(p: Placement) -> str:
    """Start-solution text: every variable with its 0/1 value, LP naming."""
    from .geometry import verify_certificate

    verdict = verify_certificate(p)
    if not verdict.valid:
        raise ModelError(f"warmstart placement invalid: {verdict.conflicts[0]}")
    placed = set(p.queens)
    lines = []
    for sq in p.board.squares():
        lines.append(f"{var_name(sq)} {1 if sq in placed else 0}")
    return "\n".join(lines) + "\n"

"""Model generation, cut validity, LP export/parse roundtrip."""

import pytest

from ndqueens.geometry import BoardSpec, Placement, attacks
from ndqueens.ipmodel import (
    IpModel,
    LinearConstraint,
    ModelError,
    add_cube_cliques,
    add_layer_inequalities,
    add_odd_cycle_inequalities,
    add_star_cliques,
    add_subsolution_inequalities,
    build_base,
    build_domination,
    evaluate,
    evaluate_assignment,
    export_lp,
    export_warmstart,
    find_chordless_odd_cycles,
    parse_lp,
    parse_mode,
    strengthened_model,
    var_name,
)
from ndqueens.solver import enumerate_solutions


def clique_sizes(model, tag):
    return [len(c.variables) for c in model.constraints if c.tag == tag]


class TestParseMode:
    def test_max(self):
        assert parse_mode("max") == ("max", None)

    def test_fixed(self):
        assert parse_mode("fixed:121") == ("fixed", 121)

    def test_refute(self):
        assert parse_mode("refute:122") == ("refute", 122)

    @pytest.mark.parametrize("bad", ["maximize", "fixed", "fixed:-1", "refute:x"])
    def test_rejects(self, bad):
        with pytest.raises(ModelError):
            parse_mode(bad)


class TestLinearConstraint:
    def test_rejects_duplicate_variable(self):
        with pytest.raises(ModelError):
            LinearConstraint("c0", ("x_1_1", "x_1_1"), "<=", 1, "c")

    def test_rejects_bad_sense(self):
        with pytest.raises(ModelError):
            LinearConstraint("c0", ("x_1_1",), "<", 1, "c")


class TestBuildBase:
    def test_8x8_shape(self):
        model = build_base(BoardSpec(8, 2), "max")
        assert len(model.variables) == 64
        assert model.tag_count("base") == 42
        assert model.objective == "maximize"

    def test_full_2d_mode_tightens_rows_and_cols(self):
        model = build_base(BoardSpec(5, 2), "fixed:5")
        eq = [c for c in model.constraints if c.tag == "base" and c.sense == "="]
        assert len(eq) == 10  # 5 rows + 5 columns
        assert model.tag_count("cardinality") == 1

    def test_partial_mode_keeps_inequalities(self):
        model = build_base(BoardSpec(5, 2), "fixed:3")
        assert all(c.sense == "<=" for c in model.constraints if c.tag == "base")

    def test_maximum_solutions_satisfy_base(self):
        board = BoardSpec(4, 3)
        model = build_base(board, "max")
        for p in enumerate_solutions(board, 7):
            assert evaluate(model, p) == []

    def test_attacking_pair_violates_base(self):
        board = BoardSpec(5, 2)
        model = build_base(board, "max")
        violated = evaluate_assignment(model, {"x_1_1": 1, "x_1_4": 1})
        assert violated


class TestCubeCliques:
    @pytest.mark.parametrize("n,d", [(5, 2), (4, 3), (3, 4)])
    def test_count_formula(self, n, d):
        model = build_base(BoardSpec(n, d), "max")
        add_cube_cliques(model)
        expected = sum((n - m + 1) ** d for m in range(2, n + 1))
        assert model.tag_count("cube") == expected

    def test_even_side_includes_center(self):
        model = build_base(BoardSpec(3, 2), "max")
        add_cube_cliques(model)
        sizes = sorted(clique_sizes(model, "cube"))
        # h=1 cubes: 4 corners; h=2 cube: 4 corners + center
        assert sizes == [4, 4, 4, 4, 5]

    def test_members_pairwise_attacking(self):
        board = BoardSpec(4, 3)
        model = build_base(board, "max")
        add_cube_cliques(model)
        for con in model.constraints:
            if con.tag != "cube":
                continue
            sqs = [tuple(int(c) for c in v.split("_")[1:]) for v in con.variables]
            for i in range(len(sqs)):
                for j in range(i + 1, len(sqs)):
                    assert attacks(sqs[i], sqs[j], board)

    def test_fractional_uniform_point_violates(self):
        # value 1/n on every square satisfies all lines but over-fills the
        # largest cube cliques as soon as 2^d corners exceed n
        board = BoardSpec(3, 2)
        model = build_base(board, "max")
        assert evaluate_assignment(model, {v.name: 1 / 3 for v in model.variables}) == []
        add_cube_cliques(model)
        violated = evaluate_assignment(model, {v.name: 1 / 3 for v in model.variables})
        assert violated
        assert all(c.tag == "cube" for c in violated)


class TestStarCliques:
    def test_5x5_single_star(self):
        model = build_base(BoardSpec(5, 2), "max")
        add_star_cliques(model)
        # h=1: centers 2..4 in both coordinates -> 9; h=2: only the center
        assert model.tag_count("star") == 10
        assert set(clique_sizes(model, "star")) == {5}

    def test_members_pairwise_attacking(self):
        board = BoardSpec(5, 3)
        model = build_base(board, "max")
        add_star_cliques(model)
        for con in model.constraints:
            if con.tag != "star":
                continue
            sqs = [tuple(int(c) for c in v.split("_")[1:]) for v in con.variables]
            assert len(sqs) == 2 * 3 + 1
            for i in range(len(sqs)):
                for j in range(i + 1, len(sqs)):
                    assert attacks(sqs[i], sqs[j], board)


class TestLayerInequalities:
    def test_d3_counts_and_rhs(self):
        model = build_base(BoardSpec(5, 3), "max")
        add_layer_inequalities(model, {2: 5})
        cons = [c for c in model.constraints if c.tag == "layer"]
        assert len(cons) == 15  # 3 choices of fixed dimension x 5 indices
        assert all(c.rhs == 5 and len(c.variables) == 25 for c in cons)

    def test_missing_table_entry(self):
        model = build_base(BoardSpec(5, 3), "max")
        with pytest.raises(ModelError):
            add_layer_inequalities(model, {})

    def test_maximum_solutions_feasible(self):
        board = BoardSpec(4, 3)
        model = build_base(board, "max")
        add_layer_inequalities(model, {2: 4})
        for p in enumerate_solutions(board, 7):
            assert evaluate(model, p) == []


class TestSubsolutionInequalities:
    def test_counts(self):
        model = build_base(BoardSpec(5, 3), "max")
        add_subsolution_inequalities(model, {2: 1, 3: 4}, [2, 3])
        assert model.tag_count("subsol") == 4 ** 3 + 3 ** 3

    def test_rhs_from_table(self):
        model = build_base(BoardSpec(5, 3), "max")
        add_subsolution_inequalities(model, {2: 1}, [2])
        assert all(c.rhs == 1 for c in model.constraints if c.tag == "subsol")

    def test_maximum_solutions_feasible(self):
        board = BoardSpec(5, 3)
        model = build_base(board, "max")
        add_subsolution_inequalities(model, {2: 1, 3: 4, 4: 7}, [2, 3, 4])
        for p in list(enumerate_solutions(board, 13))[:25]:
            assert evaluate(model, p) == []


class TestOddCycles:
    def test_found_cycles_accepted(self):
        board = BoardSpec(4, 2)
        cycles = find_chordless_odd_cycles(board, length=5, limit=5)
        assert cycles
        model = build_base(board, "max")
        add_odd_cycle_inequalities(model, cycles)
        assert model.tag_count("oddcycle") == len(cycles)
        assert all(
            c.rhs == 2 for c in model.constraints if c.tag == "oddcycle"
        )

    def test_triangle_rejected(self):
        board = BoardSpec(3, 2)
        model = build_base(board, "max")
        with pytest.raises(ModelError):
            add_odd_cycle_inequalities(model, [((1, 1), (1, 2), (2, 1))])

    def test_even_cycle_rejected(self):
        board = BoardSpec(4, 2)
        model = build_base(board, "max")
        with pytest.raises(ModelError):
            add_odd_cycle_inequalities(model, [((1, 1), (1, 2), (2, 2), (2, 1))])

    def test_non_attacking_consecutive_rejected(self):
        board = BoardSpec(5, 2)
        model = build_base(board, "max")
        with pytest.raises(ModelError):
            add_odd_cycle_inequalities(
                model, [((1, 1), (2, 3), (2, 4), (3, 4), (1, 2))]
            )


class TestDomination:
    def test_cover_constraints(self):
        board = BoardSpec(3, 2)
        model = build_domination(board)
        assert model.tag_count("cover") == 9
        assert model.objective == "minimize"
        assert all(c.sense == ">=" for c in model.constraints)

    def test_center_queen_feasible(self):
        board = BoardSpec(3, 2)
        model = build_domination(board)
        assert evaluate(model, Placement(board, ((2, 2),))) == []

    def test_corner_queen_infeasible(self):
        board = BoardSpec(3, 2)
        model = build_domination(board)
        assert evaluate(model, Placement(board, ((1, 1),)))


class TestStrengthenedModel:
    def test_contains_all_families(self):
        model = strengthened_model(BoardSpec(5, 3), "max")
        for tag in ("base", "cube", "star", "layer", "subsol"):
            assert model.tag_count(tag) > 0, tag

    def test_only_smaller_boards_feed_cuts(self):
        # layer cuts use (n, d-1), subsolution cuts use (m<n, d); the
        # instance's own value appears nowhere
        model = strengthened_model(BoardSpec(5, 3), "max")
        for c in model.constraints:
            if c.tag == "subsol":
                assert len(c.variables) < 125

    def test_maximum_solutions_feasible(self):
        board = BoardSpec(4, 3)
        model = strengthened_model(board, "max")
        for p in enumerate_solutions(board, 7):
            assert evaluate(model, p) == []

    def test_names_are_per_family_ordinals(self):
        model = strengthened_model(BoardSpec(4, 3), "max")
        base_names = [c.name for c in model.constraints if c.tag == "base"]
        assert base_names[:3] == ["base0", "base1", "base2"]


class TestLpExport:
    def test_header(self):
        text = export_lp(build_base(BoardSpec(5, 2), "max"))
        assert text.startswith("\\ queens model n=5 d=2 mode=max\n")

    def test_deterministic(self):
        a = export_lp(strengthened_model(BoardSpec(4, 3), "max"))
        b = export_lp(strengthened_model(BoardSpec(4, 3), "max"))
        assert a == b

    def test_ascii_lf_only(self):
        text = export_lp(build_base(BoardSpec(4, 2), "max"))
        assert text.isascii()
        assert "\r" not in text
        assert text.endswith("End\n")

    def test_feasibility_mode_empty_objective(self):
        text = export_lp(build_base(BoardSpec(5, 2), "fixed:5"))
        assert "\nMaximize\n obj:\nSubject To\n" in text

    def test_golden_2x2(self):
        text = export_lp(build_base(BoardSpec(2, 2), "max"))
        assert text == (
            "\\ queens model n=2 d=2 mode=max\n"
            "Maximize\n"
            " obj: x_1_1 + x_1_2 + x_2_1 + x_2_2\n"
            "Subject To\n"
            " base0: x_1_1 + x_1_2 <= 1\n"
            " base1: x_2_1 + x_2_2 <= 1\n"
            " base2: x_1_2 + x_2_1 <= 1\n"
            " base3: x_1_1 + x_2_1 <= 1\n"
            " base4: x_1_2 + x_2_2 <= 1\n"
            " base5: x_1_1 + x_2_2 <= 1\n"
            "Binaries\n"
            " x_1_1 x_1_2 x_2_1 x_2_2\n"
            "End\n"
        )

    @pytest.mark.parametrize(
        "factory",
        [
            lambda: build_base(BoardSpec(5, 2), "max"),
            lambda: build_base(BoardSpec(5, 2), "fixed:5"),
            lambda: build_base(BoardSpec(11, 3), "refute:122"),
            lambda: strengthened_model(BoardSpec(4, 3), "max"),
            lambda: build_domination(BoardSpec(3, 2)),
        ],
    )
    def test_roundtrip(self, factory):
        model = factory()
        parsed = parse_lp(export_lp(model))
        assert parsed == model
        assert export_lp(parsed) == export_lp(model)

    def test_long_rows_wrap(self):
        model = build_base(BoardSpec(9, 2), "max")
        text = export_lp(model)
        assert max(len(line) for line in text.splitlines()) < 100


class TestWarmstart:
    def test_values_cover_every_variable(self):
        board = BoardSpec(4, 2)
        p = Placement(board, ((1, 2), (2, 4), (3, 1), (4, 3)))
        text = export_warmstart(p)
        lines = text.strip().split("\n")
        assert len(lines) == 16
        assert f"{var_name((1, 2))} 1" in lines
        assert f"{var_name((1, 1))} 0" in lines
        assert sum(int(line.split()[1]) for line in lines) == 4

    def test_invalid_placement_rejected(self):
        board = BoardSpec(4, 2)
        with pytest.raises(ModelError):
            export_warmstart(Placement(board, ((1, 1), (2, 2))))

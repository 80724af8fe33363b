"""Board geometry: attack relations, lines, layers, queen graph, certificates."""

import pytest

from ndqueens.geometry import (
    BoardSpec,
    GeometryError,
    Placement,
    attack_directions,
    attack_lines,
    attacked_squares,
    attacks,
    layer,
    modular_attacks,
    queen_graph,
    verify_certificate,
)


class TestBoardSpec:
    def test_size(self):
        assert BoardSpec(8, 3).size == 512

    @pytest.mark.parametrize("n,d", [(0, 1), (1, 0), (-2, 2)])
    def test_rejects_nonpositive(self, n, d):
        with pytest.raises(GeometryError):
            BoardSpec(n, d)

    def test_rejects_oversized_board(self):
        # 2**25 squares is one doubling past the limit
        with pytest.raises(GeometryError):
            BoardSpec(2, 25)
        BoardSpec(2, 24)  # exactly at the limit is fine

    def test_linear_index_roundtrip(self):
        board = BoardSpec(5, 3)
        for i in range(board.size):
            assert board.index(board.square(i)) == i

    def test_linear_index_is_lexicographic_rank(self):
        board = BoardSpec(4, 2)
        ordered = sorted(board.squares())
        assert [board.index(sq) for sq in ordered] == list(range(16))

    def test_index_first_coordinate_most_significant(self):
        board = BoardSpec(8, 3)
        assert board.index((1, 1, 1)) == 0
        assert board.index((1, 1, 2)) == 1
        assert board.index((2, 1, 1)) == 64


class TestAttackDirections:
    @pytest.mark.parametrize("d,count", [(1, 1), (2, 4), (3, 13), (4, 40)])
    def test_count(self, d, count):
        assert len(attack_directions(d)) == (3 ** d - 1) // 2 == count

    def test_d1(self):
        assert attack_directions(1) == ((1,),)

    def test_canonical_first_nonzero_positive(self):
        for eps in attack_directions(4):
            first = next(x for x in eps if x != 0)
            assert first == 1

    def test_sorted_and_deterministic(self):
        dirs = attack_directions(3)
        assert list(dirs) == sorted(dirs)
        assert attack_directions(3) == dirs


class TestAttacks:
    def test_axis_line(self):
        assert attacks((4, 2, 3), (4, 2, 7), BoardSpec(8, 3))

    def test_triagonal(self):
        assert attacks((1, 1, 1), (3, 3, 3), BoardSpec(8, 3))

    def test_knight_offset_is_safe(self):
        assert not attacks((1, 1), (2, 3), BoardSpec(4, 2))

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            attacks((1, 1), (1, 1, 1), BoardSpec(4, 3))

    def test_symmetric_exhaustive_small(self):
        for board in (BoardSpec(4, 2), BoardSpec(3, 3)):
            squares = list(board.squares())
            for a in squares:
                for b in squares:
                    if a != b:
                        assert attacks(a, b, board) == attacks(b, a, board)


class TestModularAttacks:
    def test_wraparound_diagonal(self):
        assert modular_attacks((1, 1), (2, 7), BoardSpec(7, 2))

    def test_standard_implies_modular(self):
        assert modular_attacks((4, 2, 3), (4, 2, 7), BoardSpec(8, 3))

    def test_safe_pair(self):
        assert not modular_attacks((1, 1), (2, 3), BoardSpec(5, 2))

    def test_attack_implies_modular_exhaustive(self):
        for board in (BoardSpec(5, 2), BoardSpec(4, 3)):
            squares = list(board.squares())
            for a in squares:
                for b in squares:
                    if a != b and attacks(a, b, board):
                        assert modular_attacks(a, b, board)

    def test_same_layer_not_an_attack_in_3d(self):
        # equal first coordinate alone is no line through the torus
        assert not modular_attacks((1, 1, 1), (1, 2, 6), BoardSpec(11, 3))


class TestAttackedSquares:
    def test_includes_self(self):
        board = BoardSpec(5, 2)
        assert (3, 3) in attacked_squares((3, 3), board)

    def test_small_board_center_attacks_everything(self):
        board = BoardSpec(3, 3)
        assert len(attacked_squares((2, 2, 2), board)) == 27

    def test_center_attains_max(self):
        # center of an odd board hits (3^d-1)/2 * (n-1) + 1 squares
        board = BoardSpec(5, 2)
        assert len(attacked_squares((3, 3), board)) == 4 * 4 + 1

    def test_corner_attains_min(self):
        board = BoardSpec(8, 3)
        assert len(attacked_squares((1, 1, 1), board)) == 7 * 7 + 1

    def test_bounds_hold_everywhere(self):
        for board in (BoardSpec(5, 2), BoardSpec(4, 3), BoardSpec(3, 4)):
            n, d = board.n, board.d
            lo = (2 ** d - 1) * (n - 1) + 1
            hi = (3 ** d - 1) // 2 * (n - 1) + 1
            for sq in board.squares():
                assert lo <= len(attacked_squares(sq, board)) <= hi

    def test_modular_superset(self):
        board = BoardSpec(5, 2)
        for sq in board.squares():
            assert attacked_squares(sq, board) <= attacked_squares(sq, board, modular=True)


class TestAttackLines:
    def test_8x8_line_count(self):
        total = sum(len(lines) for _, lines in attack_lines(BoardSpec(8, 2)))
        assert total == 42  # 8 rows + 8 cols + 13 + 13 diagonals

    def test_2x2(self):
        total = sum(len(lines) for _, lines in attack_lines(BoardSpec(2, 2)))
        assert total == 6

    def test_trivial_board_has_none(self):
        assert sum(len(ls) for _, ls in attack_lines(BoardSpec(1, 3))) == 0

    def test_no_singleton_lines(self):
        for _, lines in attack_lines(BoardSpec(4, 2)):
            assert all(len(line) >= 2 for line in lines)

    def test_every_attacking_pair_on_exactly_one_line(self):
        board = BoardSpec(4, 2)
        pair_lines = {}
        for eps, lines in attack_lines(board):
            for line in lines:
                for i in range(len(line)):
                    for j in range(i + 1, len(line)):
                        key = (line[i], line[j])
                        pair_lines[key] = pair_lines.get(key, 0) + 1
        for a in board.squares():
            for b in board.squares():
                if board.index(a) < board.index(b):
                    expected = 1 if attacks(a, b, board) else 0
                    assert pair_lines.get((a, b), 0) == expected


class TestLayer:
    @pytest.mark.parametrize(
        "board,dim,idx,count",
        [(BoardSpec(8, 3), 3, 1, 64), (BoardSpec(5, 2), 1, 2, 5), (BoardSpec(3, 4), 2, 3, 27)],
    )
    def test_sizes(self, board, dim, idx, count):
        squares = layer(board, dim, idx)
        assert len(squares) == count
        assert all(sq[dim - 1] == idx for sq in squares)

    def test_out_of_range(self):
        with pytest.raises(GeometryError):
            layer(BoardSpec(4, 2), 3, 1)
        with pytest.raises(GeometryError):
            layer(BoardSpec(4, 2), 1, 5)


class TestQueenGraph:
    def test_corner_degree_8x8(self):
        edges = queen_graph(BoardSpec(8, 2))
        degree = sum(1 for a, b in edges if a == (1, 1) or b == (1, 1))
        assert degree == 21

    def test_2x2_complete(self):
        assert len(queen_graph(BoardSpec(2, 2))) == 6  # K4

    def test_single_square(self):
        assert queen_graph(BoardSpec(1, 1)) == []

    def test_degree_matches_attacked_squares(self):
        for board in (BoardSpec(4, 2), BoardSpec(3, 3)):
            edges = queen_graph(board)
            for sq in board.squares():
                degree = sum(1 for a, b in edges if sq in (a, b))
                assert degree == len(attacked_squares(sq, board)) - 1


class TestPlacement:
    def test_sorted_and_deduplicated(self):
        p = Placement(BoardSpec(5, 2), ((3, 1), (1, 2), (3, 1)))
        assert p.queens == ((1, 2), (3, 1))
        assert p.size == 2

    def test_rejects_outside_square(self):
        with pytest.raises(GeometryError):
            Placement(BoardSpec(4, 2), ((5, 1),))

    def test_json_roundtrip(self):
        p = Placement(BoardSpec(5, 2), ((1, 2), (3, 4)))
        q = Placement.from_json(p.to_json())
        assert q == p

    def test_json_shape(self):
        import json

        data = json.loads(Placement(BoardSpec(5, 2), ((3, 4), (1, 2))).to_json())
        assert data == {"n": 5, "d": 2, "queens": [[1, 2], [3, 4]]}


class TestVerifyCertificate:
    def test_empty_placement_valid(self):
        assert verify_certificate(Placement(BoardSpec(5, 2), ())).valid

    def test_same_row_conflict(self):
        p = Placement(BoardSpec(5, 2), ((1, 1), (1, 5)))
        verdict = verify_certificate(p)
        assert not verdict.valid
        assert verdict.conflicts == (((1, 1), (1, 5)),)

    def test_valid_solution(self):
        p = Placement(BoardSpec(4, 2), ((1, 2), (2, 4), (3, 1), (4, 3)))
        assert verify_certificate(p).valid

    def test_modular_flag_is_stricter(self):
        p = Placement(BoardSpec(7, 2), ((1, 1), (2, 7)))
        assert verify_certificate(p).valid
        assert not verify_certificate(p, modular=True).valid

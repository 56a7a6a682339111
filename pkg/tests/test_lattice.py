import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snakepoly.catalog import gf_pds_2d, gf_pds_3d, gf_pds_nd
from snakepoly.inscribed import gf_bubble_all
from snakepoly.lattice import (
    CellPath,
    CellSet,
    MemoryBudgetExceeded,
    NotASnake,
    StatTriple,
    classify_inscribed,
    count_inscribed_pds,
    count_pds,
    count_pds_table,
    enumerate_bubbles,
    enumerate_crossings,
    enumerate_endings,
    enumerate_snakes,
    horizontal_half_perimeter,
    is_bubble,
    is_kiss_free,
    is_pds_shape,
    iter_snakes,
    pds_census,
)

TABLE1 = [1, 2, 6, 14, 34, 82, 198, 470, 1122, 2662, 6334, 14970]


def row(n):
    return CellSet.from_cells([(x, 0) for x in range(n)])


def test_table1_prefix():
    t = enumerate_snakes(12)
    assert [t[n] for n in range(1, 13)] == TABLE1


@pytest.mark.parametrize("n,want", [(3, 6), (10, 2662)])
def test_table1_examples(n, want):
    assert enumerate_snakes(n)[n] == want


def test_worker_split_is_deterministic():
    a = enumerate_snakes(11, workers=1)
    b = enumerate_snakes(11, workers=3)
    assert a == b
    assert list(iter_snakes(7, workers=1)) == list(iter_snakes(7, workers=2))


def test_memory_guard():
    with pytest.raises(MemoryBudgetExceeded):
        enumerate_snakes(12, memory_budget=10_000)


def test_cellset_translation_normalised():
    a = CellSet.from_cells([(5, 7), (6, 7), (6, 8)])
    b = CellSet.from_cells([(0, 0), (1, 0), (1, 1)])
    assert a == b and min(a.cells) == (0, 0)


@settings(max_examples=50)
@given(st.integers(-20, 20), st.integers(-20, 20), st.sampled_from(range(30)))
def test_translation_invariance(dx, dy, i):
    s = list(iter_snakes(6))[i]
    moved = CellSet.from_cells([(x + dx, y + dy) for x, y in s.cells])
    assert moved == s
    assert is_pds_shape(moved) == is_pds_shape(s)
    assert is_kiss_free(moved) == is_kiss_free(s)


def test_cellpath_snake_conditions():
    assert CellPath(((0, 0), (1, 0), (1, 1))).is_snake()
    assert not CellPath(((0, 0), (2, 0))).is_snake()
    # square tetromino traversal closes a cycle
    assert not CellPath(((0, 0), (1, 0), (1, 1), (0, 1))).is_snake()


def test_cellset_path_and_reversal():
    s = CellSet.from_cells([(0, 0), (1, 0), (1, 1)])
    p = s.path()
    assert p.cells[0] in s.endpoints() and p.reversed().to_cellset() == s
    with pytest.raises(NotASnake):
        CellSet.from_cells([(0, 0), (1, 0), (0, 1), (1, 1)]).path()


def test_cellset_json_round_trip():
    s = CellSet.from_cells([(0, 0), (1, 0), (1, 1), (1, 2)])
    assert CellSet.from_json_obj(s.to_json_obj()) == s


def test_pds_examples():
    assert is_pds_shape(row(6))
    assert is_pds_shape(CellSet.from_cells([(0, y) for y in range(4)]))
    u = CellSet.from_cells([(0, 1), (0, 0), (1, 0), (2, 0), (2, 1)])
    assert not is_pds_shape(u)


def test_exactly_two_five_cell_snakes_not_pds():
    assert sum(not is_pds_shape(s) for s in iter_snakes(5)) == 2
    assert all(is_pds_shape(s) for s in iter_snakes(3))


def test_pds_3d_axes():
    # x1 is free; a step backwards along x2 or x3 breaks directedness
    assert is_pds_shape(CellSet.from_cells([(0, 0, 0), (1, 0, 0), (1, 0, 1), (1, 1, 1), (0, 1, 1)]))
    assert not is_pds_shape(
        CellSet.from_cells([(0, 1, 0), (0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 1, 0)])
    )


@pytest.mark.parametrize("n,dim,want", [(5, 2, 32), (4, 3, 45), (0, 2, 1)])
def test_count_pds_examples(n, dim, want):
    assert count_pds(n, dim) == want


def test_pds_counts_match_closed_forms():
    assert count_pds_table(14, 2) == gf_pds_2d().coefficients(14)
    assert count_pds_table(10, 3) == gf_pds_3d().coefficients(10)
    assert count_pds_table(8, 4) == gf_pds_nd(4).coefficients(8)


def test_kiss_free_examples():
    assert is_kiss_free(row(7))
    assert all(is_kiss_free(s) for s in iter_snakes(4))
    hook = CellSet.from_cells([(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])
    assert hook.is_snake() and not is_kiss_free(hook)


def test_smallest_kissing_snakes():
    # frozen from filtering the full snake enumeration
    kissing = [sum(not is_kiss_free(s) for s in iter_snakes(n)) for n in range(1, 9)]
    assert kissing == [0, 0, 0, 0, 0, 0, 4, 8]


@pytest.mark.parametrize(
    "cells,want",
    [([(0, 0)], (1, 1, 1)), ([(0, 0), (1, 0), (1, 1)], (2, 2, 3)), ([(x, 0) for x in range(5)], (5, 1, 5))],
)
def test_classify_inscribed(cells, want):
    assert classify_inscribed(CellSet.from_cells(cells)) == StatTriple(*want)


def test_inscribed_counts():
    assert count_inscribed_pds(2, 2, 6)[3] == 4
    col = count_inscribed_pds(1, 4, 8)
    assert col[4] == 1 and sum(col.values()) == 1
    for b, k in [(3, 3), (2, 5), (4, 2)]:
        c = count_inscribed_pds(b, k, 10)
        assert all(c[n] == 0 for n in range(b + k - 1))


def test_inscribed_counts_partition_pds():
    census = pds_census(12)
    for n in range(1, 13):
        total = sum(v for (b, k, m), v in census.inscribed.items() if m == n)
        assert total == count_pds(n, 2)


def test_bubble_examples():
    b2 = enumerate_bubbles(2, 10)
    assert b2[(3, 5, 3)] == 1
    assert sum(v for (k, n, w), v in b2.items() if n == 6) == 1
    assert b2[(4, 6, 3)] == 1
    assert sum(v for (k, n, w), v in enumerate_bubbles(3, 10).items() if n == 7) == 1


def test_bubble_predicate():
    minimal = CellSet.from_cells([(0, 0), (1, 0), (1, 1), (1, 2), (0, 2)])
    assert is_bubble(minimal)
    assert not is_bubble(row(3))


def test_crossing_examples():
    assert dict(enumerate_crossings(2, 8)) == {(1, 2): 1}
    c3 = enumerate_crossings(3, 9)
    assert all(n == k + 2 and v == 1 for (k, n), v in c3.items()) and len(c3) == 7
    assert enumerate_crossings(4, 8)[(1, 4)] == 1


def test_ending_examples():
    e = enumerate_endings(3, 2, 6)
    assert e[(1, 2)] == 1


def test_half_perimeter_matches_bubble_fixed_point_up_to_12():
    # the w-refined fixed point and the geometric statistic agree for n <= 12
    series = gf_bubble_all(12)
    by_stat = {}
    for (r, k, n, w), v in pds_census(12).bubbles.items():
        by_stat[(k, n, w)] = by_stat.get((k, n, w), 0) + v
    for (k, n, w), v in by_stat.items():
        assert series.coefficient(n, t=k, w=w) == v
    assert sum(by_stat.values()) == sum(series.specialize(t=1, w=1).integer_coefficients())
    minimal = CellSet.from_cells([(0, 0), (1, 0), (1, 1), (1, 2), (0, 2)])
    assert horizontal_half_perimeter(minimal) == 3

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from snakepoly.bijection import (
    Bargraph,
    InvalidBubble,
    Well,
    bargraph_to_bubble,
    bubble_counts_via_bargraphs,
    bubble_to_bargraph,
    envelope,
    envelope_size,
    find_wells,
    stretch_wells,
)
from snakepoly.lattice import CellSet, NotASnake, enumerate_bubbles, is_bubble

bargraphs = st.lists(st.integers(1, 5), min_size=1, max_size=9).map(lambda r: Bargraph(tuple(r)))


def all_bargraphs(max_cells, max_width):
    for m in range(1, max_cells + 1):
        for rows in itertools.product(range(1, max_width + 1), repeat=m):
            if sum(rows) <= max_cells:
                yield Bargraph(rows)


def test_well_examples():
    assert find_wells((3, 1, 1, 3)) == [Well(1, 2, 3, 1, 3)]
    assert find_wells((1, 2, 3)) == []
    assert [w.height for w in find_wells((2, 1, 2, 1, 2))] == [1, 1]


def test_well_needs_both_walls():
    assert find_wells((3, 1, 1)) == [] and find_wells((1, 1, 3)) == []


@pytest.mark.parametrize(
    "rows,want", [((3, 1, 1, 3), (3, 1, 1, 1, 1, 3)), ((1, 2, 3), (1, 2, 3)), ((2, 1, 2), (2, 1, 1, 1, 2))]
)
def test_stretch_examples(rows, want):
    assert stretch_wells(rows).rows == want


@given(bargraphs)
def test_stretched_wells_are_deep(g):
    st_ = stretch_wells(g)
    assert all(w.height >= 3 for w in find_wells(st_))
    assert len(find_wells(st_)) == len(find_wells(g))


def test_minimal_bubble():
    s = bargraph_to_bubble((1,))
    assert s == CellSet.from_cells([(0, 0), (1, 0), (1, 1), (1, 2), (0, 2)])
    assert s.extent() == (2, 3) and len(s) == 5


@pytest.mark.parametrize("j", range(1, 7))
def test_vertical_bar(j):
    s = bargraph_to_bubble((1,) * j)
    assert s.extent() == (2, j + 2) and len(s) == j + 4


def test_wide_well_bubble():
    s = envelope((3, 1, 1, 1, 1, 3))
    assert is_bubble(s) and s.extent()[0] == 4


def test_unstretched_well_rejected():
    with pytest.raises(NotASnake):
        envelope((2, 1, 2))


@given(bargraphs)
def test_envelope_shape(g):
    s = bargraph_to_bubble(g)
    ends = s.endpoints()
    assert len(ends) == 2 and all(e[0] == 0 for e in ends)
    assert s.extent()[0] == g.width + 1
    assert len(s) == envelope_size(stretch_wells(g))


@given(bargraphs)
def test_round_trip(g):
    assert bubble_to_bargraph(bargraph_to_bubble(g)) == g


def test_exhaustive_round_trip_and_injectivity():
    seen = {}
    for g in all_bargraphs(8, 4):
        s = bargraph_to_bubble(g)
        assert is_bubble(s)
        assert bubble_to_bargraph(s) == g
        assert s not in seen
        seen[s] = g
    assert len(seen) == 223


@pytest.mark.parametrize("h", [2, 3, 4, 5])
def test_bijection_counts_match_bubble_oracle(h):
    oracle = {}
    for (k, n, w), v in enumerate_bubbles(h, 13).items():
        oracle[(k, n)] = oracle.get((k, n), 0) + v
    assert dict(bubble_counts_via_bargraphs(h, 13)) == oracle


def test_inverse_is_surjective_on_oracle_bubbles():
    from snakepoly.lattice import iter_snakes

    for n in range(5, 11):
        for s in iter_snakes(n, cls="pds"):
            if is_bubble(s):
                g = bubble_to_bargraph(s)
                assert bargraph_to_bubble(g) == s


def test_inverse_rejects_non_bubbles():
    with pytest.raises(InvalidBubble):
        bubble_to_bargraph(CellSet.from_cells([(x, 0) for x in range(4)]))


def test_bargraph_validation():
    with pytest.raises(ValueError):
        Bargraph(())
    with pytest.raises(ValueError):
        Bargraph((1, 0, 2))

import pytest

from snakepoly.lattice import (
    CellSet,
    classify_inscribed,
    is_kiss_free,
    is_pds_shape,
    iter_snakes,
)
from snakepoly.maximal import (
    SearchBudgetExceeded,
    SearchSpec,
    conjecture_report,
    formula_max_pds,
    max_snake_length,
)


def brute_max(b, k, cls, n_max):
    best = 0
    for n in range(1, n_max + 1):
        kind = "pds" if cls == "pds" else "snake"
        for s in iter_snakes(n, cls=kind):
            if s.extent() != (b, k):
                continue
            if cls == "kiss_free" and not is_kiss_free(s):
                continue
            best = n
    return best


@pytest.mark.parametrize("b,k,want", [(2, 3, 5), (1, 1, 1), (3, 3, 7), (4, 4, 11)])
def test_formula(b, k, want):
    assert formula_max_pds(b, k) == want


def test_square_kiss_free():
    assert max_snake_length(SearchSpec(2, 2, "kiss_free")).length == 3


@pytest.mark.parametrize("cls", ["pds", "kiss_free", "general"])
@pytest.mark.parametrize("b", [1, 2, 5])
def test_single_row(cls, b):
    assert max_snake_length(SearchSpec(b, 1, cls)).length == b


@pytest.mark.parametrize("b,k", [(2, 3), (3, 2), (3, 3), (2, 4), (4, 2), (3, 4)])
@pytest.mark.parametrize("cls", ["pds", "kiss_free", "general"])
def test_search_matches_brute_force(b, k, cls):
    assert max_snake_length(SearchSpec(b, k, cls)).length == brute_max(b, k, cls, b * k)


def test_pds_max_on_4x4_is_ten():
    # the closed formula predicts 11; exhaustive enumeration finds 10 in both orientations
    assert brute_max(4, 4, "pds", 12) == 10
    assert max_snake_length(SearchSpec(4, 4, "pds")).length == 10


@pytest.mark.parametrize("b,k", [(3, 3), (4, 5), (5, 4), (3, 6)])
@pytest.mark.parametrize("cls", ["pds", "kiss_free", "general"])
def test_witness_validity(b, k, cls):
    res = max_snake_length(SearchSpec(b, k, cls))
    w = res.witness
    assert w.is_snake() and len(w) == res.length
    assert (classify_inscribed(w).b, classify_inscribed(w).k) == (b, k)
    if cls == "pds":
        assert is_pds_shape(w)
    if cls == "kiss_free":
        assert is_kiss_free(w)
    assert CellSet.from_cells(res.path) == w


def test_witness_is_lexicographically_least():
    res = max_snake_length(SearchSpec(3, 3, "general"))
    paths = []
    for s in iter_snakes(res.length):
        if s.extent() == (3, 3):
            p = s.path().cells
            paths += [p, p[::-1]]
    assert res.path == min(paths)


def test_deterministic_across_workers():
    for cls in ("pds", "kiss_free", "general"):
        a = max_snake_length(SearchSpec(5, 4, cls), workers=1)
        b = max_snake_length(SearchSpec(5, 4, cls), workers=3)
        assert (a.length, a.path, a.nodes) == (b.length, b.path, b.nodes)


def test_budget_exhaustion_is_distinct():
    with pytest.raises(SearchBudgetExceeded):
        max_snake_length(SearchSpec(5, 5, "general", budget=50))


def test_spec_validation():
    with pytest.raises(ValueError):
        SearchSpec(0, 3)
    with pytest.raises(ValueError):
        SearchSpec(3, 3, "diagonal")
    assert SearchSpec(3, 3, "kiss-free").cls == "kiss_free"


def test_report_containments_and_findings():
    rep = conjecture_report(6, 6)
    for r in rep.rows:
        assert r.general >= r.kiss_free and r.general >= r.pds
        w = rep.witnesses[(r.b, r.k, "pds")].witness
        if is_kiss_free(w):
            assert r.kiss_free >= r.pds
    assert rep.kiss_free_violations == []
    smallest = rep.smallest_general_excess()
    assert (smallest.spec.b, smallest.spec.k) == (3, 6)
    assert smallest.length == formula_max_pds(3, 6) + 1
    # the PDS formula fails exactly when k is even and b >= 3
    assert rep.pds_mismatches == [(b, k) for b in range(3, 7) for k in (2, 4, 6)]

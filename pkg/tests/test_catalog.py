import pytest
from hypothesis import given
from hypothesis import strategies as st

from snakepoly import catalog
from snakepoly.catalog import (
    ClosedFormMismatch,
    NdParams,
    count_pds_x1plus,
    eval_closed_form_numeric,
    gf_pds_2d,
    gf_pds_3d,
    gf_pds_nd,
    gf_pds_x1plus,
    gf_s1_2d,
    gf_s1_3d,
    gf_s1_nd,
    gf_s2_2d,
    gf_s2_3d,
    gf_s2_nd,
    gf_sne,
    solve_pds_functional_equation,
)
from snakepoly.series import denominator_recurrence


def test_sne_is_fibonacci():
    c = gf_sne().coefficients(30)
    assert c[0] == c[1] == 1 and c[5] == 8
    for n in range(2, 31):
        assert c[n] == c[n - 1] + c[n - 2]


def test_pds2d_listed_coefficients():
    assert gf_pds_2d().coefficients(8) == [1, 1, 2, 6, 14, 32, 72, 160, 354]


def test_pds3d_listed_coefficients():
    assert gf_pds_3d().coefficients(8) == [1, 1, 3, 13, 45, 153, 517, 1737, 5829]


def test_s1_2d_small_coefficients():
    c = gf_s1_2d().coefficients(3)
    assert c[0] == 1 and c[2] == 2


def test_partition_identities_2d_3d():
    assert gf_s1_2d() + gf_s2_2d(gf_pds_2d()) == gf_pds_2d()
    assert gf_s1_3d() + gf_s2_3d(gf_pds_3d()) == gf_pds_3d()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_partition_identity_nd(n):
    pds = gf_pds_nd(n)
    assert gf_s1_nd(n) + gf_s2_nd(n, pds) == pds


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_functional_equation_solution_matches_closed_form(n):
    assert solve_pds_functional_equation(n) == gf_pds_nd(n)


def test_nd_specialises_to_2d_and_3d():
    assert gf_pds_nd(2) == gf_pds_2d()
    assert gf_pds_nd(NdParams(3)) == gf_pds_3d()


def test_pds4d_low_coefficients():
    # frozen from the 4D brute-force oracle
    assert gf_pds_nd(4).coefficients(8) == [1, 1, 4, 22, 100, 448, 2002, 8920, 39724]


@pytest.mark.parametrize("n", range(2, 7))
def test_nd_coefficients_positive_and_recurrent(n):
    r = gf_pds_nd(n)
    c = r.coefficients(40)
    assert all(x > 0 for x in c)
    d = denominator_recurrence(r.den)
    for m in range(r.num.degree("q") + 1, 41):
        assert sum(d[j] * c[m - j] for j in range(len(d))) == 0


def test_x1plus_3d_closed_form():
    for n in range(61):
        assert 3 * count_pds_x1plus(n, 3) == 2 ** (n + 1) + (-1) ** n


@given(st.integers(2, 6), st.integers(0, 40))
def test_x1plus_recurrence_matches_gf(dim, n):
    assert count_pds_x1plus(n, dim) == gf_pds_x1plus(dim).coefficients(n)[n]


@pytest.mark.parametrize("fid,n,want", [("pds2d", 8, 354), ("pds3d", 8, 5829), ("pds2d", 2, 2)])
def test_numeric_closed_form_examples(fid, n, want):
    assert eval_closed_form_numeric(fid, n) == want


def test_numeric_closed_forms_round_exactly():
    for n in range(2, 31):
        assert eval_closed_form_numeric("pds2d", n) == gf_pds_2d().coefficients(n)[n]
        assert eval_closed_form_numeric("pds3d", n) == gf_pds_3d().coefficients(n)[n]
    for dim in range(2, 7):
        for n in range(0, 25):
            assert eval_closed_form_numeric(f"pdsx1:{dim}", n) == count_pds_x1plus(n, dim)


def test_numeric_mismatch_is_signalled(monkeypatch):
    monkeypatch.setattr(catalog, "_root_sum_2d", lambda n: 0.0)
    with pytest.raises(ClosedFormMismatch):
        eval_closed_form_numeric("pds2d", 5)


def test_numeric_precondition():
    with pytest.raises(ValueError):
        eval_closed_form_numeric("pds2d", 1)


def test_dimension_validation():
    with pytest.raises(ValueError):
        NdParams(1)
    with pytest.raises(ValueError):
        gf_pds_nd(1)


@pytest.mark.parametrize("name", ["sne", "pds2d", "pds3d", "pdsnd:4", "pdsx1:3"])
def test_lookup_names(name):
    assert catalog.lookup(name).coefficients(0) == [1]


@pytest.mark.parametrize("name", ["nope", "pdsnd", "pdsnd:x", "sne:2"])
def test_lookup_rejects(name):
    with pytest.raises(ValueError):
        catalog.lookup(name)

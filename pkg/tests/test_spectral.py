import pytest

from cotor.spectral import (
    SpectralSequence, may_page1_oracle, page4_series_oracle,
    run_scheme_checks,
)

N = 42      # unit-test bound; the acceptance suite runs the full 60


@pytest.fixture(scope="module")
def prepared(engine):
    engine.build_range(N + 1)
    return engine


def test_unknown_scheme_rejected(prepared):
    with pytest.raises(KeyError):
        SpectralSequence(prepared, "nope")


def test_trivial_scheme_first_page_is_cohomology(prepared):
    ss = SpectralSequence(prepared, "trivial")
    for n in range(N + 1):
        assert ss.page_dim(1, 0, n) == prepared.dim_h(n)
    assert ss.collapse_check(1, N) == []


def test_filtration_compatibility(prepared):
    for scheme in ("weight_s3", "may_s5", "trivial"):
        assert SpectralSequence(prepared, scheme) \
            .check_filtration_compatibility(30)


def test_page_dims_monotone(prepared):
    for scheme in ("weight_s3", "may_s5"):
        ss = SpectralSequence(prepared, scheme)
        tables = [ss.page_table(r, 30) for r in range(0, 9)]
        for a, b in zip(tables, tables[1:]):
            keys = set(a) | set(b)
            assert all(b.get(k, 0) <= a.get(k, 0) for k in keys)


def test_reflexive_page_equality(prepared):
    ss = SpectralSequence(prepared, "may_s5")
    assert ss.page_equality_check(2, 2, 20) == []


def test_may_first_page_small_degrees(prepared):
    ss = SpectralSequence(prepared, "may_s5")
    page1 = ss.page_table(1, 10)
    assert sum(d for (p, n), d in page1.items() if n == 8) == 2
    assert sum(d for (p, n), d in page1.items() if n == 9) == 1


def test_may_first_page_matches_free_algebra(prepared):
    ss = SpectralSequence(prepared, "may_s5")
    oracle = may_page1_oracle(N)
    page1 = ss.page_table(1, N)
    assert page1 == {k: v for k, v in oracle.items() if k[1] <= N}


def test_may_collapse_at_three(prepared):
    ss = SpectralSequence(prepared, "may_s5")
    assert ss.collapse_check(3, N) == []
    # and not earlier: the second differential is genuinely nonzero
    assert ss.collapse_check(2, N) != []


def test_weight_scheme_page_equalities(prepared):
    ss = SpectralSequence(prepared, "weight_s3")
    assert ss.page_equality_check(1, 3, N) == []
    assert ss.page_equality_check(4, 6, N) == []
    assert ss.collapse_check(7, N) == []


def test_weight_scheme_active_pages(prepared):
    # the differential moves weight by 0, 3 and 6: measured, not assumed
    ss = SpectralSequence(prepared, "weight_s3")
    assert ss.active_pages(N) == [0, 3, 6]


def test_may_active_pages(prepared):
    ss = SpectralSequence(prepared, "may_s5")
    assert ss.active_pages(N) == [0, 1, 2]


def test_convergence_totals(prepared):
    for scheme in ("weight_s3", "may_s5", "trivial"):
        ss = SpectralSequence(prepared, scheme)
        assert ss.convergence_check(N) == []


def test_page4_series_oracle(prepared):
    ss = SpectralSequence(prepared, "weight_s3")
    oracle = page4_series_oracle(N)
    page4 = ss.page_table(4, N)
    for n in range(N + 1):
        assert sum(d for (p, m), d in page4.items() if m == n) == oracle[n]


def test_scheme_reports(prepared):
    for scheme in ("weight_s3", "may_s5", "trivial"):
        report = run_scheme_checks(prepared, scheme, 30)
        assert report.ok, (scheme, report.checks)

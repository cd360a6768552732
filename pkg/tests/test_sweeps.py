from fmapow import sweeps
from fmapow.bounds import faithful_limit


def test_exhaustive_cases_shape():
    cases = sweeps.exhaustive_cases(5, [3, 4])
    assert len(cases) == 32 and cases[0] == (16, 3) and cases[-1] == (31, 4)


def test_sampled_cases_reproducible_and_in_range():
    a = sweeps.sampled_cases(53, 3, 10 ** 8, 500, seed=42)
    assert a == sweeps.sampled_cases(53, 3, 10 ** 8, 500, seed=42)
    assert a != sweeps.sampled_cases(53, 3, 10 ** 8, 500, seed=43)
    assert all(1 << 52 <= m < 1 << 53 and 3 <= n <= 10 ** 8 for m, n in a)
    wide = sweeps.sampled_cases(64, 51, 51, 50, seed=1)
    assert all(1 << 63 <= m < 1 << 64 and n == 51 for m, n in wide)


def test_check_case_fields():
    rec = sweeps.check_case(1 << 52 | 12345, 51, 53, 53)
    assert rec['log_within_bound'] and rec['faithful'] and rec['lin_within_bound']
    assert rec['log_alpha'] <= rec['log_bound']
    assert rec['ulp_distance'] < 0.5000001


def test_check_case_huge_n_uses_enclosure():
    rec = sweeps.check_case((1 << 52) + 987654321, 10 ** 8, 53, 53)
    assert rec['log_within_bound'] and rec['faithful'] is True
    assert rec['lin_alpha'] is None


def test_small_exhaustive_sweep():
    p = 9
    records = sweeps.run_sweep(sweeps.exhaustive_cases(p, range(3, 30)), p)
    s = sweeps.summarize(records, p)
    assert s['log_bound_violations'] == 0
    assert s['faithful_limit'] == faithful_limit(p, p)
    assert s['unfaithful_within_limit'] == 0
    assert s['faithful'] + s['unfaithful'] + s['faithful_undetermined'] == s['cases']


def test_sweep_order_independent_of_workers_and_chunks():
    cases = sweeps.exhaustive_cases(7, [5, 17])
    a = sweeps.run_sweep(cases, 7, chunk=5)
    b = sweeps.run_sweep(cases, 7, workers=2, chunk=13)
    assert a == b

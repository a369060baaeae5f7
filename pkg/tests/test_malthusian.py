import math

import pytest

from depref.malthusian import (
    SolverError,
    attachment_limit_pmf,
    growth_constant,
    lambda_star_sweep,
    limit_degree_pmf,
    pmf_stats,
    rho_hat,
    solve_lambda_star,
)

GRID = [(a, d) for a in (0.25, 0.5, 0.75, 1.0) for d in (0.0, 0.5, 1.0, 5.0)]


def test_rho_hat_closed_form():
    # alpha=1, delta=0, lam=1: the terms are 1/(n+1)!, so the sum is e - 2
    r = rho_hat(1.0, 1.0, 0.0, eps=1e-15)
    assert r.value == pytest.approx(math.e - 2.0, abs=1e-14)


def test_rho_hat_single_term_truncation():
    # with a huge eps only the first term survives: 1/((delta+1)**alpha lam + 1)
    r = rho_hat(2.0, 0.5, 1.0, eps=1.0)
    assert r.truncation_depth == 1
    assert r.value == pytest.approx(1.0 / (2.0 ** 0.5 * 2.0 + 1.0))


def test_rho_hat_tail_bound_certifies():
    loose = rho_hat(0.7, 1.0, 0.0, eps=1e-4)
    tight = rho_hat(0.7, 1.0, 0.0, eps=1e-15)
    assert loose.value <= tight.value <= loose.value + loose.tail_bound


def test_rho_hat_strictly_decreasing_in_lambda():
    for a, d in [(1.0, 0.0), (0.5, 1.0), (0.25, 5.0)]:
        vals = [rho_hat(lam, a, d, eps=1e-13).value for lam in (0.3, 0.6, 1.0, 2.0, 5.0)]
        assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))


def test_rho_hat_domain_errors():
    with pytest.raises(ValueError):
        rho_hat(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        rho_hat(-1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        rho_hat(1.0, -0.5, 0.0)
    with pytest.raises(ValueError):
        rho_hat(1.0, 1.0, -1.0)
    with pytest.raises(ValueError):
        rho_hat(1.0, 1.0, 0.0, eps=0.0)


def test_rho_hat_cutoff_lower_bound():
    r = rho_hat(1e-6, 1.0, 0.0, eps=1e-12, cutoff=2.0)
    assert r.value >= 2.0
    assert math.isinf(r.tail_bound)


def test_lambda_star_reference_value():
    # frozen from a grid-scan of rho_hat (see test below); the value near
    # 0.6419 drives several other expected constants
    res = solve_lambda_star(1.0, 0.0)
    assert res.lambda_star == pytest.approx(0.6419239877723157, abs=1e-9)
    assert res.residual <= 1e-12


def test_lambda_star_grid_scan_oracle():
    # independent check: bracket the root by scanning rho_hat on a fine
    # lambda grid, then require the solver's root to sit inside
    target = solve_lambda_star(1.0, 0.0).lambda_star
    lo, hi = None, None
    lam = 0.5
    while lam < 0.8:
        if rho_hat(lam, 1.0, 0.0, eps=1e-13).value >= 1.0:
            lo = lam
        elif hi is None:
            hi = lam
        lam += 1e-4
    assert lo is not None and hi is not None
    assert lo <= target <= hi


def test_lambda_star_deterministic():
    a = solve_lambda_star(0.5, 1.0)
    b = solve_lambda_star(0.5, 1.0)
    assert a.lambda_star == b.lambda_star  # bitwise


def test_lambda_star_monotone_in_delta():
    for a in (0.25, 1.0):
        vals = [solve_lambda_star(a, d).lambda_star for d in (0.0, 1.0, 2.0, 5.0)]
        assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))


def test_lambda_star_uniform_limit():
    # alpha -> 0 makes every weight 1 (uniform attachment); the root
    # of sum_n (1/(lam+1))**n = 1 is exactly lam = 1
    res = solve_lambda_star(1e-9, 0.0)
    assert res.lambda_star == pytest.approx(1.0, abs=1e-6)


def test_sweep_rows_row_major_and_errors_nonfatal():
    rows = lambda_star_sweep([1.0, 0.5], [0.0, 1.0])
    assert [(r.alpha, r.delta) for r in rows] == [(1.0, 0.0), (1.0, 1.0), (0.5, 0.0), (0.5, 1.0)]
    assert all(not r.error for r in rows)
    single = lambda_star_sweep([1.0], [0.0])
    assert single[0].lambda_star == solve_lambda_star(1.0, 0.0).lambda_star

    bad = lambda_star_sweep([1.0], [-1.0])  # delta = -1 is out of domain
    assert bad[0].error
    assert math.isnan(bad[0].lambda_star)
    with pytest.raises(ValueError):
        lambda_star_sweep([], [0.0])


@pytest.mark.parametrize("a,d", GRID)
def test_pmf_identities(a, d):
    pmf = limit_degree_pmf(a, d, eps=1e-12)
    probs = pmf.probabilities
    assert all(p > 0 for p in probs)
    # mass + certified tail
    assert math.fsum(probs) + pmf.tail_bound == pytest.approx(1.0, abs=1e-10)
    # tail identity: sum_{k>=n} p_k equals the closed-form product
    for n in (1, 2, 5):
        tail = math.fsum(probs[n - 1 :]) + pmf.tail_bound
        assert tail == pytest.approx(pmf.tail_mass(n), abs=1e-10)
    st = pmf_stats(pmf)
    assert st.mean == pytest.approx(2.0, abs=1e-8)
    assert st.mode == 1
    # mode-1 restated: nonincreasing probabilities
    assert all(p2 <= p1 for p1, p2 in zip(probs, probs[1:]))
    # tail ratios strictly decreasing
    ratios = [r for _, r in st.tail_ratio_series]
    assert all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))


def test_pmf_p1_formula():
    res = solve_lambda_star(1.0, 0.0)
    pmf = limit_degree_pmf(1.0, 0.0, lambda_star=res.lambda_star)
    assert pmf.probabilities[0] == pytest.approx(res.lambda_star / (res.lambda_star + 1.0), abs=1e-14)


def test_pmf_prob_accessor():
    pmf = limit_degree_pmf(1.0, 0.0)
    assert pmf.prob(1) == pmf.probabilities[0]
    assert pmf.prob(pmf.truncation + 5) == 0.0
    with pytest.raises(ValueError):
        pmf.prob(0)


def test_growth_constant_value():
    ls = solve_lambda_star(1.0, 0.0).lambda_star
    assert growth_constant(1.0, ls) == pytest.approx(math.sqrt(2.0 / ls), abs=1e-12)
    assert growth_constant(1.0, ls) == pytest.approx(1.7651157712, abs=1e-6)


def test_attachment_limit_pmf_sums_to_one():
    for a, d in [(1.0, 0.0), (0.5, 1.0)]:
        q = attachment_limit_pmf(a, d, eps=1e-14)
        assert math.fsum(q.values()) == pytest.approx(1.0, abs=1e-10)
        # q_k is the degree pmf's tail mass at k+1
        pmf = limit_degree_pmf(a, d)
        assert q[1] == pytest.approx(pmf.tail_mass(2), abs=1e-12)
        assert q[3] == pytest.approx(pmf.tail_mass(4), abs=1e-12)


def test_solver_error_when_no_root_reachable():
    with pytest.raises((SolverError, ValueError)):
        solve_lambda_star(1.0, 0.0, tol=-1.0)

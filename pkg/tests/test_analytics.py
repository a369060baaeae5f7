import math

import numpy as np
import pytest

from depref.analytics import (
    DegreeHistogram,
    attachment_degree_frequency,
    chi_square_gof,
    clt_standardize,
    empirical_pk,
    expected_fixed_degree_linear,
    fixed_vertex_ratio,
    ks_normal,
    linear_limit_pmf,
    max_abs_deviation,
    statistical_tests,
    tv_distance,
)
from depref.core import AttachmentEvent, grow_to, init_graph
from depref.malthusian import limit_degree_pmf, solve_lambda_star
from depref.params import ParameterError, inverse, linear
from depref.runner import replica_rng


def test_histogram_identities_enforced():
    DegreeHistogram([0, 1, 1], n=2, m=1)  # seed: one degree-1, one degree-2
    with pytest.raises(ValueError):
        DegreeHistogram([0, 2, 1], n=2, m=1)  # mass 3 != n
    with pytest.raises(ValueError):
        DegreeHistogram([0, 2], n=2, m=1)  # degree mass 2 != 3


def test_empirical_pk_seed_and_growth():
    st = init_graph(inverse(alpha=1.0, delta=0.0, m=1))
    h = empirical_pk(st)
    assert h.as_dict() == {1: 1, 2: 1}
    assert h.proportion(1) == 0.5 and h.proportion(2) == 0.5

    st._attach_half_edge(1)
    st._settle_arrival()  # degrees (2, 2, 1)
    h3 = empirical_pk(st)
    assert h3.as_dict() == {1: 1, 2: 2}

    st2 = grow_to(init_graph(linear(m=1)), 400, replica_rng(40, 0))
    h400 = empirical_pk(st2)
    assert (np.arange(len(h400.counts)) * h400.counts).sum() == 2 * 400 - 1


def test_linear_limit_pmf_values():
    assert linear_limit_pmf(1) == 0.5
    assert linear_limit_pmf(3) == 0.125
    assert math.fsum(linear_limit_pmf(k) for k in range(1, 60)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        linear_limit_pmf(0)


def test_fixed_vertex_ratio_linear():
    p = linear(theta=1.0, alpha=1.0, m=2)
    out = fixed_vertex_ratio([(10, 2 * math.log(10))], p)
    assert out["ratio"][0][1] == pytest.approx(1.0, abs=1e-12)


def test_fixed_vertex_ratio_inverse_m1():
    ls = solve_lambda_star(1.0, 0.0).lambda_star
    p = inverse(alpha=1.0, delta=0.0, m=1)
    const = math.sqrt(2.0 / ls)
    assert const == pytest.approx(1.7651157712, abs=1e-6)
    out = fixed_vertex_ratio([(100, const * math.sqrt(math.log(100)))], p, lambda_star=ls)
    assert out["ratio"][0][1] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ParameterError):
        fixed_vertex_ratio([(100, 3.0)], p)  # lambda_star missing


def test_fixed_vertex_ratio_inverse_m2_both_series():
    p = inverse(alpha=1.0, delta=0.0, m=2)
    c_map = {100: 25.0}
    out = fixed_vertex_ratio([(100, 10.0)], p, c_of_n=c_map)
    assert out["ratio"][0][1] == pytest.approx(10.0 / (2 * math.sqrt(math.log(100))))
    assert out["ratio_tau"][0][1] == pytest.approx(10.0 / math.sqrt(2 * 25.0))


def test_expected_degree_recursion_first_step():
    # m=1, theta=alpha=1, arrival at 2: a_3 = (1 - 1/3) * 1 + 1 = 5/3
    p = linear(theta=1.0, alpha=1.0, m=1)
    series = expected_fixed_degree_linear(p, 2, 3, eval_ns=[2, 3])
    assert series[0] == (2, 1.0)
    assert series[1][1] == pytest.approx(5.0 / 3.0, abs=1e-14)


def test_expected_degree_recursion_trend():
    # a_n/(m log n) falls monotonically toward 1 over 1e2..1e5
    for p in (linear(1.0, 1.0, m=1), linear(2.0, 0.5, m=1), linear(1.0, 1.0, m=3)):
        pts = expected_fixed_degree_linear(p, 2, 10**5, eval_ns=[10**2, 10**3, 10**4, 10**5])
        ratios = [a / (p.m * math.log(n)) for n, a in pts]
        assert all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))
        assert ratios[-1] == pytest.approx(1.0, abs=0.08)


def test_expected_degree_recursion_mc_agreement():
    # Monte Carlo mean of the tracked degree vs the exact recursion
    p = linear(theta=1.0, alpha=1.0, m=1)
    n, reps = 2000, 400
    expected = expected_fixed_degree_linear(p, 2, n, eval_ns=[n])[0][1]
    finals = []
    for r in range(reps):
        st = grow_to(init_graph(p), n, replica_rng(41, r))
        finals.append(st.degrees[1])
    finals = np.asarray(finals, dtype=float)
    se = finals.std(ddof=1) / math.sqrt(reps)
    assert abs(finals.mean() - expected) <= 3.0 * se


def test_expected_degree_recursion_validation():
    with pytest.raises(ParameterError):
        expected_fixed_degree_linear(inverse(), 2, 100)
    with pytest.raises(ParameterError):
        expected_fixed_degree_linear(linear(), 1, 100)
    with pytest.raises(ParameterError):
        expected_fixed_degree_linear(linear(), 2, 100, eval_ns=[200])


def test_clt_standardize():
    assert clt_standardize(math.log(100), 100, 1) == pytest.approx(0.0, abs=1e-12)
    # n = e**100: z = (110 - 100) / 10 = 1
    n = math.exp(100)
    assert clt_standardize(110.0, n, 1) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        clt_standardize(1.0, 2, 1)


def test_attachment_degree_frequency_inputs():
    events = [
        AttachmentEvent(5, 0, 1, 1),
        AttachmentEvent(6, 0, 2, 1),
        AttachmentEvent(7, 0, 1, 2),
        AttachmentEvent(8, 0, 3, 1),
    ]
    freq = attachment_degree_frequency(events)
    assert freq == {1: 0.75, 2: 0.25}
    assert attachment_degree_frequency({1: 3, 2: 1}) == {1: 0.75, 2: 0.25}
    assert attachment_degree_frequency(np.array([0, 3, 1])) == {1: 0.75, 2: 0.25}
    assert math.fsum(freq.values()) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        attachment_degree_frequency([])


def test_max_abs_deviation_examples():
    # histogram equal to the pmf -> 0 needs matching transient; use the
    # two-vertex seed against 2**-k: max(|.5-.5|, |.5-.25|, .125, ...) = 0.25
    h = DegreeHistogram([0, 1, 1], n=2, m=1)
    assert max_abs_deviation(h, linear_limit_pmf) == pytest.approx(0.25, abs=1e-12)
    exact = {1: 0.5, 2: 0.5}
    assert max_abs_deviation(h, exact) == 0.0


def test_tv_distance_examples():
    assert tv_distance({1: 0.5, 2: 0.5}, {1: 0.5, 2: 0.5}) == 0.0
    assert tv_distance({1: 0.5, 2: 0.5}, {1: 0.25, 2: 0.75}) == pytest.approx(0.25)
    # unenumerated remainder mass counts as one lump
    assert tv_distance({1: 1.0}, {1: 0.9}) == pytest.approx(0.1)


def test_chi_square_self_consistency():
    # draws from the reference law itself: p should rarely fall below 1e-3
    rng = replica_rng(42, 0)
    pmf = limit_degree_pmf(1.0, 0.0)
    probs = np.array(pmf.probabilities)
    probs /= probs.sum()
    low = 0
    trials = 200
    for _ in range(trials):
        draws = rng.multinomial(20_000, probs)
        counts = {k + 1: int(c) for k, c in enumerate(draws) if c}
        _, p, _ = chi_square_gof(counts, pmf)
        if p < 1e-3:
            low += 1
    assert low <= max(2, trials * 0.01)


def test_chi_square_pools_rare_bins():
    counts = {1: 60, 2: 25, 3: 10, 4: 3, 5: 1, 6: 1}
    stat, p, nbins = chi_square_gof(counts, linear_limit_pmf)
    assert nbins >= 2
    assert 0.0 <= p <= 1.0


def test_chi_square_degenerate_reference():
    with pytest.raises(ValueError):
        chi_square_gof({1: 100}, {1: 1.0})
    with pytest.raises(ValueError):
        chi_square_gof({1: 10}, linear_limit_pmf)  # too few observations


def test_ks_normal():
    rng = replica_rng(43, 0)
    z = rng.standard_normal(4000)
    assert ks_normal(z) > 1e-3
    assert ks_normal(z * 3.0 + 2.0) < 1e-6
    with pytest.raises(ValueError):
        ks_normal(z[:10])


def test_statistical_tests_bundle():
    rng = replica_rng(44, 0)
    out = statistical_tests(
        samples=rng.standard_normal(500),
        hist={1: 500, 2: 240, 3: 130, 4: 70, 5: 60},
        reference=linear_limit_pmf,
    )
    assert out["ks_normal_p"] is not None
    assert out["chi_square_p"] is not None
    assert out["tv_distance"] is not None
    with pytest.raises(ValueError):
        statistical_tests()

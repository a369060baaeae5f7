import math

import numpy as np
import pytest
from scipy import stats as sps

from depref.embedding import (
    athreya_karlin_grow,
    birth_asymptotic_ratio,
    cmj_grow,
    enumerate_cmj_degree_law,
    simulate_birth_process,
    tau_normalization,
)
from depref.malthusian import solve_lambda_star
from depref.params import ParameterError, inverse
from depref.runner import replica_rng
from depref.samplers import enumerate_degree_law


def test_birth_unit_rates_when_alpha_zero():
    # alpha=0 degenerates to unit-mean holding times: E[T_n] = n-1
    tot = 0.0
    runs = 4000
    for r in range(runs):
        tr = simulate_birth_process(0.0, 0.0, 1, replica_rng(20, r), max_count=6)
        tot += tr.time_to_reach(6)
    assert tot / runs == pytest.approx(5.0, rel=0.05)


def test_birth_mean_t10():
    # alpha=1, delta=0, m0=1: E[T_10] = 1 + 2 + ... + 9 = 45
    tot = 0.0
    runs = 100_000
    for r in range(runs):
        tr = simulate_birth_process(1.0, 0.0, 1, replica_rng(21, r), max_count=10)
        tot += tr.time_to_reach(10)
    assert tot / runs == pytest.approx(45.0, rel=0.01)


def test_birth_increment_means():
    # increments L_j have mean (m0+j-1+delta)**alpha; check the first one
    vals = []
    for r in range(50_000):
        tr = simulate_birth_process(0.5, 1.0, 3, replica_rng(22, r), max_count=4)
        vals.append(tr.jump_times[0])
    assert np.mean(vals) == pytest.approx((3 + 1.0) ** 0.5, rel=0.02)


def test_birth_max_time_stop():
    tr = simulate_birth_process(1.0, 0.0, 1, replica_rng(23, 0), max_time=50.0)
    assert tr.jump_times[-1] <= 50.0
    assert tr.count_at(50.0) == 1 + tr.n_jumps
    assert tr.count_at(0.0) == 1


def test_birth_stop_rules_required():
    with pytest.raises(ParameterError):
        simulate_birth_process(1.0, 0.0, 1, replica_rng(23, 1))
    with pytest.raises(ParameterError):
        simulate_birth_process(1.0, 0.0, 0, replica_rng(23, 2), max_count=5)
    with pytest.raises(ParameterError):
        simulate_birth_process(1.0, -1.0, 1, replica_rng(23, 3), max_count=5)


def test_birth_ratio_limits():
    # alpha=1: Z(t)/sqrt(t) -> sqrt(2); T_n/n^2 -> 1/2
    tr = simulate_birth_process(1.0, 0.0, 1, replica_rng(24, 0), max_count=100_001)
    series = birth_asymptotic_ratio(tr)
    assert series.count_limit == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert series.count_ratio[-1][1] == pytest.approx(math.sqrt(2.0), rel=0.05)
    assert series.time_ratio[-1][1] == pytest.approx(0.5, rel=0.05)


def test_birth_ratio_alpha_half():
    # alpha=0.5, delta=1: limit 1.5**(2/3) ~ 1.3104
    tr = simulate_birth_process(0.5, 1.0, 1, replica_rng(24, 1), max_count=100_001)
    series = birth_asymptotic_ratio(tr)
    assert series.count_limit == pytest.approx(1.5 ** (2.0 / 3.0), abs=1e-12)
    assert series.count_ratio[-1][1] == pytest.approx(series.count_limit, rel=0.05)


def test_birth_ratio_needs_long_trajectory():
    tr = simulate_birth_process(1.0, 0.0, 1, replica_rng(24, 2), max_count=100)
    with pytest.raises(ValueError):
        birth_asymptotic_ratio(tr)


def test_cmj_tree_structure():
    tree = cmj_grow(1.0, 0.0, 200, replica_rng(25, 0))
    assert tree.n == 200
    assert tree.parents[0] == -1
    assert (tree.parents[1:] < np.arange(1, 200)).all()  # parents born earlier
    assert (np.diff(tree.birth_times[1:]) > 0).all()
    assert (np.diff(tree.taus) > 0).all()
    assert len(tree.tau) == 199
    # children counts consistent with parent pointers, degree = children+1
    children = np.zeros(200, dtype=int)
    for v in range(1, 200):
        children[tree.parents[v]] += 1
    assert (tree.degrees == children + 1).all()
    assert tree.degrees.sum() == 2 * 200 - 1


def test_cmj_tau2_mean():
    # first split: root rings at rate (1+delta)**-alpha, so E[tau_2] = (1+delta)**alpha
    for delta, alpha in [(0.0, 1.0), (1.0, 0.5)]:
        vals = [
            cmj_grow(alpha, delta, 2, replica_rng(26, r)).taus[1] for r in range(40_000)
        ]
        assert np.mean(vals) == pytest.approx((1 + delta) ** alpha, rel=0.02)


def test_cmj_law_equals_discrete_law_exactly():
    for alpha in (0.5, 1.0):
        for delta in (0.0, 1.0):
            for n in (4, 5):
                cmj = enumerate_cmj_degree_law(alpha, delta, n)
                disc = enumerate_degree_law(inverse(alpha=alpha, delta=delta, m=1), n)
                keys = set(cmj) | set(disc)
                sup = max(abs(cmj.get(k, 0.0) - disc.get(k, 0.0)) for k in keys)
                assert sup <= 1e-12


def test_cmj_n4_multiset_law():
    # alpha=1, delta=0 at n=4: P{4,1,1,1} = 1/21, P{3,2,1,1} = 13/21,
    # P{2,2,2,1} = 7/21 (exact enumeration of the jump chain)
    law = enumerate_cmj_degree_law(1.0, 0.0, 4)
    agg = {}
    for k, v in law.items():
        key = tuple(sorted(k, reverse=True))
        agg[key] = agg.get(key, 0.0) + v
    assert agg[(4, 1, 1, 1)] == pytest.approx(1 / 21, abs=1e-12)
    assert agg[(3, 2, 1, 1)] == pytest.approx(13 / 21, abs=1e-12)
    assert agg[(2, 2, 2, 1)] == pytest.approx(7 / 21, abs=1e-12)


def test_cmj_simulation_matches_law():
    law = enumerate_cmj_degree_law(1.0, 0.0, 5)
    counts = {}
    runs = 30_000
    for r in range(runs):
        tree = cmj_grow(1.0, 0.0, 5, replica_rng(27, r))
        key = tuple(tree.degrees)
        counts[key] = counts.get(key, 0) + 1
    keys = sorted(law)
    obs = np.array([counts.get(k, 0) for k in keys], dtype=float)
    exp = np.array([law[k] * runs for k in keys])
    _, pval = sps.chisquare(obs, exp * obs.sum() / exp.sum())
    assert pval >= 1e-3


def test_ensemble_invariants():
    params = inverse(alpha=1.0, delta=0.0, m=3)
    ens = athreya_karlin_grow(params, 500, replica_rng(28, 0), tracked=(0, 1))
    # tau gaps decompose into the m recorded inter-birth times
    gaps = ens.arrival_gaps()
    iv = ens.intervals.reshape(-1, 3).sum(axis=1)
    np.testing.assert_allclose(gaps, iv, rtol=1e-9, atol=1e-12)
    # total count mass at tau_n is (2n-1)m
    assert ens.counts.sum() == (2 * 500 - 1) * 3
    assert (np.diff(ens.taus) > 0).all()
    # b within the transported band m(m+d)^a/n <= b_n <= m(2m+d)^a/n
    j = np.arange(1, 500)
    assert (ens.b >= 3 * 3.0 / j * (1 - 1e-9)).all()
    assert (ens.b <= 3 * 6.0 / j * (1 + 1e-9)).all()
    # tracked traces nondecreasing
    assert (np.diff(ens.traces[:, 0]) >= 0).all()


def test_ensemble_m1_matches_discrete_law():
    # degree-sequence law of the m=1 ensemble at tau_5 equals the
    # enumerated discrete law (chi-square)
    law = enumerate_degree_law(inverse(alpha=1.0, delta=0.0, m=1), 5)
    counts = {}
    runs = 30_000
    for r in range(runs):
        ens = athreya_karlin_grow(inverse(alpha=1.0, delta=0.0, m=1), 5, replica_rng(29, r))
        key = tuple(ens.counts)
        counts[key] = counts.get(key, 0) + 1
    keys = sorted(law)
    obs = np.array([counts.get(k, 0) for k in keys], dtype=float)
    exp = np.array([law[k] * runs for k in keys])
    _, pval = sps.chisquare(obs, exp * obs.sum() / exp.sum())
    assert pval >= 1e-3


def test_tau_normalization_m1():
    ens = athreya_karlin_grow(inverse(alpha=1.0, delta=0.0, m=1), 50_000, replica_rng(30, 0))
    tn = tau_normalization(ens, i=1)
    ls = solve_lambda_star(1.0, 0.0).lambda_star
    assert tn.c_over_log[-1] == pytest.approx(1.0 / ls, rel=0.05)
    assert tn.ratio[-1] == pytest.approx(1.0, rel=0.15)
    assert tn.ns[0] == 2 and tn.ns[-1] == 50_000


def test_tau_normalization_arguments():
    ens = athreya_karlin_grow(inverse(alpha=1.0, delta=0.0, m=2), 50, replica_rng(30, 1))
    with pytest.raises(ParameterError):
        tau_normalization(ens, i=0)
    with pytest.raises(ParameterError):
        tau_normalization(ens, i=50)
    tn = tau_normalization(ens, i=10)
    assert tn.ns[0] == 11
    assert len(tn.c) == len(tn.ns) == 40


def test_ak_rejects_linear_params():
    from depref.params import linear

    with pytest.raises(ParameterError):
        athreya_karlin_grow(linear(), 10, replica_rng(31, 0))

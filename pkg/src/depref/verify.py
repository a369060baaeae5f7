"""Verification suites: every limit law the package claims, checked at
desk scale with fixed seeds.

Each criterion function returns a CriterionResult with the measured
numbers; the CLI `verify` subcommand and the acceptance test module both
run these.  The "quick" budget uses the normative sizes and tolerances;
"smoke" shrinks the runs (and doubles the statistical tolerances) for
fast iteration and is not a correctness gate.

Criteria sharing simulation runs (the linear limit law and the linear
attachment frequencies, for example) pull them from a shared per-context
cache, so `verify all` simulates each configuration once.
"""
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import analytics as A
from . import embedding as E
from . import malthusian as M
from .params import ModelParams, inverse, linear
from .runner import (
    EnsembleConfig,
    ExperimentConfig,
    cmj_degree_samples,
    run_ensembles,
    run_experiment,
)
from .samplers import enumerate_degree_law

ALPHA_GRID = (0.25, 0.5, 0.75, 1.0)
DELTA_GRID = (0.0, 0.5, 1.0, 5.0)

BUDGETS = {
    "quick": dict(
        c3_n=100_000, c3_reps=50,
        c4_nmax=1_000_000, c4_mc_n=10_000, c4_mc_reps=200,
        c5_n=100_000, c5_reps=2000,
        c6_n=100_000, c6_checkpoint=50_000, c6_reps=50,
        c8_draws=100_000,
        c9_jumps=100_000,
        c10_n=100_000, c10_reps=50,
        c11_n=100_000, c11_reps=100,
        tol_scale=1.0,
    ),
    "smoke": dict(
        c3_n=20_000, c3_reps=10,
        c4_nmax=100_000, c4_mc_n=3_000, c4_mc_reps=60,
        c5_n=20_000, c5_reps=400,
        c6_n=20_000, c6_checkpoint=10_000, c6_reps=10,
        c8_draws=20_000,
        c9_jumps=20_000,
        c10_n=20_000, c10_reps=10,
        c11_n=20_000, c11_reps=20,
        tol_scale=2.5,
    ),
}

SEED = {
    "c3": 93003, "c4": 94004, "c5": 95005, "c6": 96006,
    "c8": 98008, "c9": 99009, "c10": 91010, "c11": 91011,
}


def _py(value):
    """Numpy scalars -> plain Python, for JSON and stable rendering."""
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class CriterionResult:
    cid: str
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.measured = {k: _py(v) for k, v in self.measured.items()}

    def render(self):
        status = "PASS" if self.passed else "FAIL"
        parts = []
        for k, v in self.measured.items():
            if isinstance(v, float):
                parts.append(f"{k}={v:.6g}")
            else:
                parts.append(f"{k}={v}")
        return f"{status} {self.cid} {self.name} [{self.runtime_s:.1f}s] " + " ".join(parts)

    def to_dict(self):
        return {
            "cid": self.cid,
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "runtime_s": self.runtime_s,
        }


class VerifyContext:
    """Budget, thread count, and a cache of shared simulation runs."""

    def __init__(self, budget="quick", threads=1):
        if budget not in BUDGETS:
            raise ValueError(f"unknown budget {budget!r}")
        self.budget = budget
        self.sizes = BUDGETS[budget]
        self.threads = threads
        self._cache = {}

    def growth(self, tag, params, n_target, replicas, master_seed, **kw):
        key = ("growth", tag, params, n_target, replicas, master_seed, tuple(sorted(kw.items())))
        if key not in self._cache:
            cfg = ExperimentConfig(
                params=params, n_target=n_target, replicas=replicas,
                master_seed=master_seed, threads=self.threads, **kw,
            )
            self._cache[key] = run_experiment(cfg)
        return self._cache[key]

    def ensembles(self, tag, alpha, delta, m, n_target, replicas, master_seed):
        key = ("ens", tag, alpha, delta, m, n_target, replicas, master_seed)
        if key not in self._cache:
            cfg = EnsembleConfig(
                alpha=alpha, delta=delta, m=m, n_target=n_target,
                replicas=replicas, master_seed=master_seed, threads=self.threads,
            )
            self._cache[key] = run_ensembles(cfg)
        return self._cache[key]


def _timed(fn):
    def wrapper(ctx):
        t0 = time.perf_counter()
        res = fn(ctx)
        res.runtime_s = time.perf_counter() - t0
        return res

    return wrapper


# -- C1/C2: Malthusian machinery -------------------------------------------


@_timed
def criterion_1(ctx):
    """Root residual, pmf mass, mean 2, mode 1, super-exponential tail."""
    worst = dict(residual=0.0, mass_err=0.0, mean_err=0.0)
    mono_ok = True
    tails_ok = True
    for a in ALPHA_GRID:
        for d in DELTA_GRID:
            sol = M.solve_lambda_star(a, d, tol=1e-12)
            worst["residual"] = max(worst["residual"], sol.residual)
            pmf = M.limit_degree_pmf(a, d, eps=1e-12, lambda_star=sol.lambda_star)
            mass = math.fsum(pmf.probabilities)
            worst["mass_err"] = max(worst["mass_err"], abs(mass - 1.0))
            st = M.pmf_stats(pmf)
            worst["mean_err"] = max(worst["mean_err"], abs(st.mean - 2.0))
            p = pmf.probabilities
            mono_ok &= all(p[i + 1] <= p[i] for i in range(len(p) - 1))
            mono_ok &= st.mode == 1
            ratios = [r for _, r in st.tail_ratio_series]
            tails_ok &= all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))
            # closed-form probes far beyond the stored range: the ratio
            # 1/(1+(n+delta)**a ls) must keep falling to 0
            probes = [
                1.0 / (1.0 + (10.0 ** e + d) ** a * sol.lambda_star) for e in (3, 6, 9, 12)
            ]
            tails_ok &= all(r2 < r1 for r1, r2 in zip(probes, probes[1:]))
            tails_ok &= probes[-1] < 0.05
    passed = (
        worst["residual"] <= 1e-10
        and worst["mass_err"] <= 1e-8
        and worst["mean_err"] <= 1e-8
        and mono_ok
        and tails_ok
    )
    worst.update(mode1=mono_ok, tail_decay=tails_ok)
    return CriterionResult("C1", "malthusian-identities", passed, worst)


@_timed
def criterion_2(ctx):
    """lambda* strictly decreasing along both grid axes."""
    rows = M.lambda_star_sweep(ALPHA_GRID, DELTA_GRID, tol=1e-12)
    table = {(r.alpha, r.delta): r.lambda_star for r in rows}
    ok_alpha = all(
        table[(a2, d)] < table[(a1, d)]
        for d in DELTA_GRID
        for a1, a2 in zip(ALPHA_GRID, ALPHA_GRID[1:])
    )
    ok_delta = all(
        table[(a, d2)] < table[(a, d1)]
        for a in ALPHA_GRID
        for d1, d2 in zip(DELTA_GRID, DELTA_GRID[1:])
    )
    measured = dict(
        decreasing_in_alpha=ok_alpha,
        decreasing_in_delta=ok_delta,
        ls_min=min(table.values()),
        ls_max=max(table.values()),
    )
    return CriterionResult("C2", "lambda-sweep-monotone", ok_alpha and ok_delta, measured)


# -- C3/C4/C5: linear model -------------------------------------------------


def _c3_runs(ctx):
    s = ctx.sizes
    runs = {}
    for i, (theta, alpha) in enumerate([(1.0, 0.5), (1.0, 1.0), (2.0, 0.5), (2.0, 1.0)]):
        params = linear(theta=theta, alpha=alpha, m=1)
        runs[(theta, alpha)] = ctx.growth(
            "c3", params, s["c3_n"], s["c3_reps"], SEED["c3"] * 10 + i
        )
    return runs


@_timed
def criterion_3(ctx):
    """Mean over replicas of max_k |P_k(n) - 2**-k| <= 0.01 for every
    (theta, alpha) combination; the limit law ignores both parameters."""
    tol = 0.01 * ctx.sizes["tol_scale"]
    measured = {}
    passed = True
    for (theta, alpha), summaries in _c3_runs(ctx).items():
        devs = [A.max_abs_deviation(s.final_hist, A.linear_limit_pmf) for s in summaries]
        mean_dev = float(np.mean(devs))
        measured[f"dev(theta={theta:g},alpha={alpha:g})"] = mean_dev
        passed &= mean_dev <= tol
    measured["bound"] = tol
    return CriterionResult("C3", "linear-limit-law", passed, measured)


@_timed
def criterion_4(ctx):
    """Expected-degree recursion lands near m log n, and Monte Carlo means
    agree with the recursion within two standard errors."""
    s = ctx.sizes
    half_width = 0.05 * s["tol_scale"]  # the recursion band is pinned at n = 1e6
    measured = {}
    passed = True
    for i, (theta, alpha, m) in enumerate([(1.0, 1.0, 1), (2.0, 0.5, 1), (1.0, 1.0, 3)]):
        params = linear(theta=theta, alpha=alpha, m=m)
        series = A.expected_fixed_degree_linear(
            params, 2, s["c4_nmax"], eval_ns=[s["c4_mc_n"], s["c4_nmax"]]
        )
        ratio = series[-1][1] / (m * math.log(s["c4_nmax"]))
        measured[f"ratio(t={theta:g},a={alpha:g},m={m})"] = ratio
        passed &= 1.0 - half_width <= ratio <= 1.0 + half_width

        expected = series[0][1]
        summaries = ctx.growth(
            "c4", params, s["c4_mc_n"], s["c4_mc_reps"], SEED["c4"] * 10 + i
        )
        finals = np.array([dict(sm.traces[1])[s["c4_mc_n"]] for sm in summaries], dtype=float)
        se = finals.std(ddof=1) / math.sqrt(len(finals))
        gap = abs(finals.mean() - expected)
        measured[f"mc_gap_se(t={theta:g},a={alpha:g},m={m})"] = gap / se if se else 0.0
        passed &= gap <= 2.0 * se
    return CriterionResult("C4", "linear-fixed-vertex-growth", passed, measured)


@_timed
def criterion_5(ctx):
    """Standardized fixed-vertex degrees: near-zero mean, near-unit
    variance; the KS p-value is reported but not gated.

    Tracks the vertex arriving at size 3: the limit is the same for any
    fixed vertex, but the seed-adjacent vertex (arrival size 2) carries a
    +0.58 mean offset that the sqrt(log n) scale turns into a spurious
    +0.17 shift at n = 1e5, masking what the check is after (the exact
    recursion puts the arrival-3 offset at +0.08)."""
    s = ctx.sizes
    params = linear(theta=1.0, alpha=1.0, m=1)
    summaries = ctx.growth("c5", params, s["c5_n"], s["c5_reps"], SEED["c5"],
                           tracked=(2,))
    z = np.array(
        [A.clt_standardize(dict(sm.traces[2])[s["c5_n"]], s["c5_n"], 1) for sm in summaries]
    )
    mean_tol = 0.15 * s["tol_scale"]
    zm, zv = float(z.mean()), float(z.var(ddof=1))
    ks_p = A.ks_normal(z)
    passed = abs(zm) <= mean_tol and 0.7 <= zv <= 1.3
    measured = dict(z_mean=zm, z_var=zv, ks_p=ks_p, mean_bound=mean_tol)
    return CriterionResult("C5", "linear-clt", passed, measured)


# -- C6/C7: inverse model -----------------------------------------------------


def _c6_runs(ctx):
    s = ctx.sizes
    runs = {}
    for i, (alpha, delta) in enumerate([(1.0, 0.0), (0.5, 1.0)]):
        params = inverse(alpha=alpha, delta=delta, m=1)
        runs[(alpha, delta)] = ctx.growth(
            "c6", params, s["c6_n"], s["c6_reps"], SEED["c6"] * 10 + i,
            checkpoints=(s["c6_checkpoint"],),
        )
    return runs


@_timed
def criterion_6(ctx):
    """TV distance between the replica-mean empirical degree law at the
    checkpoint and the limiting pmf."""
    s = ctx.sizes
    tol = 0.02 * s["tol_scale"]
    measured = {}
    passed = True
    for (alpha, delta), summaries in _c6_runs(ctx).items():
        pmf = M.limit_degree_pmf(alpha, delta)
        n_chk = s["c6_checkpoint"]
        kmax = max(len(sm.hist_snapshots[n_chk].counts) for sm in summaries)
        tot = np.zeros(kmax)
        for sm in summaries:
            c = sm.hist_snapshots[n_chk].counts
            tot[: len(c)] += c
        emp = {k: tot[k] / tot.sum() for k in range(1, kmax) if tot[k]}
        ref = {k + 1: p for k, p in enumerate(pmf.probabilities)}
        tv = A.tv_distance(emp, ref)
        measured[f"tv(a={alpha:g},d={delta:g})"] = tv
        passed &= tv <= tol
    measured["bound"] = tol
    return CriterionResult("C6", "inverse-limit-pmf", passed, measured)


@_timed
def criterion_7(ctx):
    """Median relative gap between D_n/n and lambda* (the normalizer of
    the discrete chain converging to the embedding's fixed point)."""
    s = ctx.sizes
    tol = 0.03 * s["tol_scale"]
    measured = {}
    passed = True
    for (alpha, delta), summaries in _c6_runs(ctx).items():
        ls = M.solve_lambda_star(alpha, delta).lambda_star
        gaps = [abs(sm.normalizer_over_n(s["c6_n"]) - ls) / ls for sm in summaries]
        med = float(np.median(gaps))
        measured[f"gap(a={alpha:g},d={delta:g})"] = med
        passed &= med <= tol
    measured["bound"] = tol
    return CriterionResult("C7", "normalizer-limit", passed, measured)


# -- C8-C11: embeddings -------------------------------------------------------


@_timed
def criterion_8(ctx):
    """The branching tree's jump chain is the discrete model: exact law
    equality at n = 4, 5 and a chi-square check on simulated trees."""
    s = ctx.sizes
    measured = {}
    passed = True
    sup = 0.0
    for n in (4, 5):
        for alpha in (0.5, 1.0):
            for delta in (0.0, 1.0):
                law_c = E.enumerate_cmj_degree_law(alpha, delta, n)
                law_d = enumerate_degree_law(inverse(alpha=alpha, delta=delta, m=1), n)
                keys = set(law_c) | set(law_d)
                sup = max(
                    sup, max(abs(law_c.get(k, 0.0) - law_d.get(k, 0.0)) for k in keys)
                )
    measured["law_sup_diff"] = sup
    passed &= sup <= 1e-12

    min_p = 1.0
    for i, (alpha, delta) in enumerate(
        [(0.5, 0.0), (0.5, 1.0), (1.0, 0.0), (1.0, 1.0)]
    ):
        law = E.enumerate_cmj_degree_law(alpha, delta, 5)
        samples = cmj_degree_samples(
            alpha, delta, 5, s["c8_draws"], SEED["c8"] * 10 + i, threads=ctx.threads
        )
        observed = {}
        for row in samples:
            key = tuple(int(x) for x in row)
            observed[key] = observed.get(key, 0) + 1
        keys = sorted(law)
        obs = np.array([observed.get(k, 0) for k in keys], dtype=float)
        exp = np.array([law[k] * len(samples) for k in keys])
        from scipy import stats as sps

        exp *= obs.sum() / exp.sum()
        _, p = sps.chisquare(obs, exp)
        min_p = min(min_p, float(p))
    measured["min_chi2_p"] = min_p
    passed &= min_p >= 1e-3
    return CriterionResult("C8", "embedding-equivalence", passed, measured)


@_timed
def criterion_9(ctx):
    """Birth-process asymptotics: Z(t)/t**(1/(1+a)) and T_n/n**(1+a)
    both land within 5% of their limits."""
    s = ctx.sizes
    tol = 0.05 * s["tol_scale"]
    measured = {}
    passed = True
    i = 0
    worst = 0.0
    for alpha in (0.5, 1.0):
        for delta in (0.0, 1.0):
            for m in (1, 3):
                from .runner import replica_rng

                traj = E.simulate_birth_process(
                    alpha, delta, m, replica_rng(SEED["c9"] * 10 + i, 0),
                    max_count=m + s["c9_jumps"],
                )
                series = E.birth_asymptotic_ratio(traj)
                zdev = abs(series.count_ratio[-1][1] - series.count_limit) / series.count_limit
                tdev = abs(series.time_ratio[-1][1] - series.time_limit) / series.time_limit
                worst = max(worst, zdev, tdev)
                passed &= zdev <= tol and tdev <= tol
                i += 1
    measured = dict(worst_rel_dev=worst, bound=tol)
    return CriterionResult("C9", "birth-asymptotics", passed, measured)


@_timed
def criterion_10(ctx):
    """m > 1 growth through the ensemble: the compensator-normalized
    count of the first process stays near 1, and both normalizer bands
    hold at every step (also hard-asserted inside the kernels)."""
    s = ctx.sizes
    measured = {}
    passed = True
    for i, m in enumerate((2, 4)):
        ensembles = ctx.ensembles("c10", 1.0, 0.0, m, s["c10_n"], s["c10_reps"],
                                  SEED["c10"] * 10 + i)
        ratios = []
        band_ok = True
        for e in ensembles:
            tn = E.tau_normalization(e, i=1)
            c_n = tn.c[-1]
            d1 = e.counts[0]
            ratios.append(d1 / ((1.0 + e.alpha) * c_n) ** (1.0 / (1.0 + e.alpha)))
            j = np.arange(1, e.n)
            lo = m * (m + e.delta) ** e.alpha / j
            hi = m * (2 * m + e.delta) ** e.alpha / j
            band_ok &= bool(np.all(e.b >= lo * (1 - 1e-9)) and np.all(e.b <= hi * (1 + 1e-9)))
        med = float(np.median(ratios))
        measured[f"median_ratio(m={m})"] = med
        measured[f"b_band_ok(m={m})"] = band_ok
        passed &= 0.8 <= med <= 1.2 and band_ok
    return CriterionResult("C10", "m>1-inverse-growth", passed, measured)


@_timed
def criterion_11(ctx):
    """tau compensator: c_n/log n -> 1/lambda* and (tau_n - tau_1)/c_n -> 1
    (medians over replicas, both within 5%)."""
    s = ctx.sizes
    tol = 0.05 * s["tol_scale"]
    ensembles = ctx.ensembles("c11", 1.0, 0.0, 1, s["c11_n"], s["c11_reps"], SEED["c11"])
    ls = M.solve_lambda_star(1.0, 0.0).lambda_star
    cols = []
    ratios = []
    for e in ensembles:
        tn = E.tau_normalization(e, i=1)
        cols.append(tn.c_over_log[-1])
        ratios.append(tn.ratio[-1])
    med_col = float(np.median(cols))
    med_ratio = float(np.median(ratios))
    dev_col = abs(med_col - 1.0 / ls) * ls
    dev_ratio = abs(med_ratio - 1.0)
    passed = dev_col <= tol and dev_ratio <= tol
    measured = dict(
        c_over_log=med_col, target=1.0 / ls, rel_dev=dev_col,
        tau_ratio=med_ratio, bound=tol,
    )
    return CriterionResult("C11", "tau-normalization", passed, measured)


# -- C12: attachment frequencies ---------------------------------------------


def _freq_from_runs(summaries):
    kmax = max(len(sm.attach_counts) for sm in summaries)
    pooled = np.zeros(kmax, dtype=np.int64)
    for sm in summaries:
        c = sm.attach_counts
        pooled[: len(c)] += c
    return A.attachment_degree_frequency(pooled)


@_timed
def criterion_12_linear(ctx):
    """Late-window attachment frequencies match 2**-k for k <= 5."""
    tol = 0.02 * ctx.sizes["tol_scale"]
    measured = {}
    passed = True
    for (theta, alpha), summaries in _c3_runs(ctx).items():
        freq = _freq_from_runs(summaries)
        dev = max(abs(freq.get(k, 0.0) - 2.0 ** -k) for k in range(1, 6))
        measured[f"dev(theta={theta:g},alpha={alpha:g})"] = dev
        passed &= dev <= tol
    measured["bound"] = tol
    return CriterionResult("C12-linear", "attach-frequency-linear", passed, measured)


@_timed
def criterion_12_inverse(ctx):
    """Late-window attachment frequencies match the product law
    prod_{i<=k} 1/((i+delta)**alpha ls + 1) for k <= 5."""
    tol = 0.02 * ctx.sizes["tol_scale"]
    measured = {}
    passed = True
    for (alpha, delta), summaries in _c6_runs(ctx).items():
        freq = _freq_from_runs(summaries)
        qlim = M.attachment_limit_pmf(alpha, delta)
        dev = max(abs(freq.get(k, 0.0) - qlim.get(k, 0.0)) for k in range(1, 6))
        measured[f"dev(a={alpha:g},d={delta:g})"] = dev
        passed &= dev <= tol
    measured["bound"] = tol
    return CriterionResult("C12-inverse", "attach-frequency-inverse", passed, measured)


CRITERIA = {
    "C1": criterion_1,
    "C2": criterion_2,
    "C3": criterion_3,
    "C4": criterion_4,
    "C5": criterion_5,
    "C6": criterion_6,
    "C7": criterion_7,
    "C8": criterion_8,
    "C9": criterion_9,
    "C10": criterion_10,
    "C11": criterion_11,
    "C12-linear": criterion_12_linear,
    "C12-inverse": criterion_12_inverse,
}

SUITES = {
    "malthusian": ["C1", "C2"],
    "linear": ["C3", "C4", "C5", "C12-linear"],
    "inverse": ["C6", "C7", "C12-inverse"],
    "embedding": ["C8", "C9", "C10", "C11"],
    "all": list(CRITERIA),
}


def run_suite(suite, budget="quick", threads=1):
    """Run one suite; returns the list of CriterionResult."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    ctx = VerifyContext(budget=budget, threads=threads)
    return [CRITERIA[cid](ctx) for cid in SUITES[suite]]

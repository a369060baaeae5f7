"""Turn simulation output into the statistics under study.

Empirical degree distributions and their limit laws, fixed-vertex growth
ratios, the exact expected-degree recursion of the linear model, CLT
standardization, attachment-target frequencies, and the goodness-of-fit
machinery used by the verification suites.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .malthusian import LimitPmf, growth_constant
from .params import ParameterError

SUPPORT_EPS = 1e-12


class DegreeHistogram:
    """Degree-class counts N_k of a settled n-vertex graph.

    Validates the two sum identities on construction:
    sum_k N_k = n and sum_k k*N_k = (2n-1)*m.
    """

    def __init__(self, counts, n, m):
        counts = np.asarray(counts, dtype=np.int64)
        if counts.ndim == 0 or counts.ndim > 1:
            raise ValueError("counts must be a 1-d array indexed by degree")
        self.counts = counts
        self.n = int(n)
        self.m = int(m)
        if int(counts.sum()) != self.n:
            raise ValueError(f"histogram mass {counts.sum()} != n = {self.n}")
        ksum = int((np.arange(len(counts)) * counts).sum())
        if ksum != (2 * self.n - 1) * self.m:
            raise ValueError(
                f"degree mass {ksum} != (2n-1)m = {(2 * self.n - 1) * self.m}"
            )

    @classmethod
    def from_state(cls, state):
        hist = state.degree_hist
        counts = np.zeros(max(hist) + 1, dtype=np.int64)
        for d, c in hist.items():
            counts[d] = c
        return cls(counts, state.n, state.params.m)

    def proportion(self, k):
        """P_k(n) = N_k(n) / n."""
        if 0 <= k < len(self.counts):
            return self.counts[k] / self.n
        return 0.0

    def proportions(self):
        return self.counts / self.n

    def as_dict(self):
        return {int(k): int(c) for k, c in enumerate(self.counts) if c}

    def __repr__(self):
        return f"DegreeHistogram(n={self.n}, m={self.m}, {self.as_dict()})"


@dataclass
class ReplicaSummary:
    """Everything one growth replica contributes to the statistics."""

    replica: int
    seed_key: tuple
    n_target: int
    snap_ns: np.ndarray
    traces: dict                      # vertex -> list of (n, degree)
    hist_snapshots: dict              # n -> DegreeHistogram
    final_hist: "DegreeHistogram"
    normalizers: list = field(default_factory=list)   # (n, normalizer)
    attach_counts: np.ndarray = None  # counts by target degree, late window
    window_start: int = 0

    def normalizer_over_n(self, n):
        for nn, d in self.normalizers:
            if nn == n:
                return d / n
        raise KeyError(f"no normalizer sample at n={n}")


def empirical_pk(state):
    """Exact degree histogram of a settled state."""
    if state.k != 0:
        raise ValueError("empirical_pk needs a settled state (k = 0)")
    return DegreeHistogram.from_state(state)


def linear_limit_pmf(k):
    """Limiting degree fraction 2**(-k) of the linear model (m = 1)."""
    if k < 1:
        raise ValueError(f"degrees start at 1, got k={k}")
    return 2.0 ** -k


def fixed_vertex_ratio(trace, params, lambda_star=None, c_of_n=None):
    """Normalized fixed-vertex degree series, limit 1 where the constant
    is known.

    Linear: d/(m log n).  Inverse m=1: d/(((1+a)/ls)**(1/(1+a))
    (log n)**(1/(1+a))), needs lambda_star.  Inverse m>1: d/(m sqrt(log n))
    (bounded, unknown constant) under "ratio", plus "ratio_tau" =
    d/((1+a) c_n)**(1/(1+a)) (limit 1) when c_of_n maps n to the realized
    compensator.
    """
    trace = [(int(n), float(d)) for n, d in trace if n >= 2]
    if not trace:
        raise ValueError("empty trace")
    out = {}
    if params.is_linear:
        out["ratio"] = [(n, d / (params.m * math.log(n))) for n, d in trace]
        return out
    a = params.alpha
    if params.m == 1:
        if lambda_star is None:
            raise ParameterError("inverse model with m=1 needs lambda_star")
        const = growth_constant(a, lambda_star)
        expo = 1.0 / (1.0 + a)
        out["ratio"] = [(n, d / (const * math.log(n) ** expo)) for n, d in trace]
        return out
    out["ratio"] = [(n, d / (params.m * math.sqrt(math.log(n)))) for n, d in trace]
    if c_of_n is not None:
        getter = c_of_n.get if hasattr(c_of_n, "get") else c_of_n
        expo = 1.0 / (1.0 + a)
        series = []
        for n, d in trace:
            c = getter(n)
            if c is not None and c > 0:
                series.append((n, d / ((1.0 + a) * c) ** expo))
        out["ratio_tau"] = series
    return out


def expected_fixed_degree_linear(params, arrival_n, n_max, eval_ns=None):
    """Exact expected degree of the vertex arriving at size arrival_n.

    One recursion step per size: a_{n+1} = A_n a_n + theta B_n/(n theta -
    alpha), where A_n multiplies the per-half-edge survival factors
    1 - (alpha/(n theta - alpha)) / (j + (2n-1)m) over j = 0..m-1 and B_n
    is their partial-product sum.  Evaluated through a compensated sum of
    the integrated form (a_n = g_n * c_n with g_n the running product), so
    a million steps stay at full double precision.

    Returns [(n, a_n)] at eval_ns (default: the snapshot grid of n_max).
    """
    if not params.is_linear:
        raise ParameterError("the expected-degree recursion applies to the linear model")
    if arrival_n < 2:
        raise ParameterError(f"arrival_n must be >= 2, got {arrival_n}")
    if n_max < arrival_n:
        raise ParameterError(f"n_max={n_max} below arrival_n={arrival_n}")
    from .core import snapshot_grid

    if eval_ns is None:
        eval_ns = [n for n in snapshot_grid(n_max) if n >= arrival_n]
    evals = sorted(set(int(n) for n in eval_ns))
    for n in evals:
        if not arrival_n <= n <= n_max:
            raise ParameterError(f"eval point {n} outside [{arrival_n}, {n_max}]")

    theta, alpha, m = params.theta, params.alpha, params.m
    out = []
    ei = 0
    g = 1.0             # running product of A_j, j = arrival_n .. n-1
    c = float(m)        # compensated: a_n = g * c
    comp = 0.0
    if ei < len(evals) and evals[ei] == arrival_n:
        out.append((arrival_n, float(m)))
        ei += 1
    for n in range(arrival_n, n_max):
        norm = n * theta - alpha
        base = alpha / norm
        s_base = (2 * n - 1) * m
        A = 1.0
        B = 1.0
        pp = 1.0
        for j in range(m - 1, 0, -1):
            f = 1.0 - base / (j + s_base)
            A *= f
            pp *= f
            B += pp
        A *= 1.0 - base / s_base
        g *= A
        inc = theta * B / (norm * g)
        y = inc - comp
        t = c + y
        comp = (t - c) - y
        c = t
        if ei < len(evals) and evals[ei] == n + 1:
            out.append((n + 1, g * c))
            ei += 1
    return out


def clt_standardize(d, n, m):
    """(d - m log n) / sqrt(m log n)."""
    if n < 3:
        raise ValueError(f"standardization needs n >= 3, got {n}")
    mu = m * math.log(n)
    return (d - mu) / math.sqrt(mu)


def attachment_degree_frequency(events):
    """Fraction of attachment events whose target had degree k just before.

    Accepts a list of AttachmentEvent, a dict degree -> count, or an array
    of counts indexed by degree.
    """
    if isinstance(events, dict):
        counts = dict(events)
    elif isinstance(events, np.ndarray):
        counts = {int(k): int(c) for k, c in enumerate(events) if c}
    else:
        counts = {}
        for ev in events:
            counts[ev.target_degree_before] = counts.get(ev.target_degree_before, 0) + 1
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no attachment events in the window")
    return {k: c / total for k, c in sorted(counts.items())}


def _reference_items(reference, max_k):
    """(k, p_k) pairs of a limit law given as LimitPmf, dict, callable or
    array; enumeration stops once p_k stays below SUPPORT_EPS past max_k."""
    if isinstance(reference, LimitPmf):
        return [(k + 1, p) for k, p in enumerate(reference.probabilities)]
    if isinstance(reference, dict):
        return sorted(reference.items())
    if isinstance(reference, np.ndarray):
        return [(int(k), float(p)) for k, p in enumerate(reference) if p > 0]
    items = []
    k = 1
    while True:
        p = reference(k)
        if p > SUPPORT_EPS:
            items.append((k, p))
        elif k > max_k:
            break
        k += 1
        if k > max_k + 10_000:
            break
    return items


def max_abs_deviation(hist, limit_pmf):
    """max_k |P_k(n) - p_k| over k with either empirical mass or limit
    mass above 1e-12."""
    ref = dict(_reference_items(limit_pmf, max_k=len(hist.counts) + 64))
    ks = set(ref) | {int(k) for k, c in enumerate(hist.counts) if c}
    return max(abs(hist.proportion(k) - ref.get(k, 0.0)) for k in ks)


def tv_distance(p, q):
    """Total-variation distance between two finite pmfs (dicts); any mass
    they carry outside the enumerated support is compared as one lump."""
    keys = set(p) | set(q)
    s = sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
    rp = 1.0 - sum(p.values())
    rq = 1.0 - sum(q.values())
    return 0.5 * (s + abs(rp - rq))


def chi_square_gof(observed, reference, min_expected=5.0):
    """Chi-square goodness of fit of observed counts against a limit law.

    Bins are pooled from the upper tail until every pooled bin (plus the
    catch-all remainder) expects at least min_expected.
    """
    if isinstance(observed, DegreeHistogram):
        counts = observed.as_dict()
    elif isinstance(observed, np.ndarray):
        counts = {int(k): int(c) for k, c in enumerate(observed) if c}
    else:
        counts = dict(observed)
    total = sum(counts.values())
    if total < 50:
        raise ValueError(f"need at least 50 observations, got {total}")
    max_obs = max(counts) if counts else 1
    ref = dict(_reference_items(reference, max_k=max_obs))
    if not ref:
        raise ValueError("degenerate reference distribution")

    ks = sorted(set(ref) | set(counts))
    obs = np.array([counts.get(k, 0) for k in ks], dtype=float)
    exp = np.array([ref.get(k, 0.0) * total for k in ks], dtype=float)
    # fold everything beyond the enumerated support into a catch-all bin
    obs = np.append(obs, 0.0)
    exp = np.append(exp, max(total - exp.sum(), 0.0))
    # pool from the tail until each bin expects enough
    while len(exp) > 1 and exp[-1] < min_expected:
        exp[-2] += exp[-1]
        obs[-2] += obs[-1]
        exp = exp[:-1]
        obs = obs[:-1]
    while len(exp) > 1 and exp[0] < min_expected:
        exp[1] += exp[0]
        obs[1] += obs[0]
        exp = exp[1:]
        obs = obs[1:]
    if len(exp) < 2:
        raise ValueError("reference too degenerate to pool into >= 2 bins")
    # renormalize the tiny pooling residue so scipy's mass check passes
    exp *= obs.sum() / exp.sum()
    stat, p = sps.chisquare(obs, exp)
    return float(stat), float(p), len(exp)


def ks_normal(samples):
    """One-sample Kolmogorov-Smirnov p-value against the standard normal."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) < 50:
        raise ValueError(f"need at least 50 samples, got {len(samples)}")
    res = sps.kstest(samples, "norm")
    return float(res.pvalue)


def statistical_tests(samples=None, hist=None, reference=None):
    """Bundle of the three standard checks; entries are None when their
    inputs were not supplied.

    chi_square_p needs (hist, reference); ks_normal_p needs samples;
    tv_distance needs (hist, reference).
    """
    out = {"chi_square_p": None, "ks_normal_p": None, "tv_distance": None}
    if samples is not None:
        out["ks_normal_p"] = ks_normal(samples)
    if hist is not None and reference is not None:
        _, p, _ = chi_square_gof(hist, reference)
        out["chi_square_p"] = p
        if isinstance(hist, DegreeHistogram):
            emp = {k: c / hist.n for k, c in hist.as_dict().items()}
        else:
            counts = dict(hist)
            total = sum(counts.values())
            emp = {k: c / total for k, c in counts.items()}
        ref = dict(_reference_items(reference, max_k=max(emp) if emp else 1))
        out["tv_distance"] = tv_distance(emp, ref)
    if all(v is None for v in out.values()):
        raise ValueError("statistical_tests got no inputs")
    return out

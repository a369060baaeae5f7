"""Draw the attachment target from the current conditional law.

Three interchangeable samplers (identical target distributions):

  ExactScan  -- inverse CDF over all per-vertex weights, O(n); the oracle.
  Bucketed   -- inverse CDF over degree classes, then a uniform member of
                the chosen class, O(#distinct degrees); the default.
  Rejection  -- uniform proposal accepted with weight/w_max; expected O(1)
                proposals (acceptance >= 1 - alpha/theta for the linear
                rule and >= ((m+delta)/(2m+delta))**alpha for the inverse
                rule, from the normalizer band).

All of them consume rng.random() in a pinned order, so runs are
reproducible across samplers of the same kind anywhere in the package.
"""
import enum
import math

import numpy as np

from .core import InternalStateError

REJECTION_CAP = 1_000_000


class SamplerKind(enum.Enum):
    EXACT_SCAN = "scan"
    BUCKETED = "bucketed"
    REJECTION = "rejection"


def get_sampler(kind):
    if isinstance(kind, str):
        kind = SamplerKind(kind)
    return {
        SamplerKind.EXACT_SCAN: sample_target_scan,
        SamplerKind.BUCKETED: sample_target_bucketed,
        SamplerKind.REJECTION: sample_target_rejection,
    }[kind]


def _total_weight(state, params):
    if params.is_linear:
        return state.n * params.theta - params.alpha
    return state.D


def step_distribution(state, params=None):
    """Exact conditional attachment law over the existing vertices."""
    if params is None:
        params = state.params
    if state.n < 2:
        raise ValueError("need at least two vertices")
    w = np.array([state.weight_of_degree(d) for d in state.degrees[: state.n]])
    total = w.sum()
    if not total > 0:
        raise InternalStateError("all attachment weights vanished")
    return w / total


def sample_target_scan(state, params, rng):
    """Reference sampler: linear scan of per-vertex weights."""
    n = state.n
    x = rng.random() * _total_weight(state, params)
    acc = 0.0
    for v in range(n):
        acc += state.weight_of_degree(state.degrees[v])
        if x < acc:
            return v
    if acc <= 0.0:
        raise InternalStateError("all attachment weights vanished")
    return n - 1


def sample_target_bucketed(state, params, rng):
    """Degree-class sampler: pick a class with mass N_d * w(d), then a
    uniform member via the contiguous class blocks."""
    x = rng.random() * _total_weight(state, params)
    acc = 0.0
    last = -1
    m = params.m
    for d in range(m, state.dmax + 1):
        c = state.counts[d]
        if c == 0:
            continue
        wd = state.weight_of_degree(d)
        mass = c * wd
        if x < acc + mass:
            idx = int((x - acc) / wd)
            if idx >= c:
                idx = c - 1
            return state.by_deg[state.bstart[d] + idx]
        acc += mass
        last = d
    if last < 0:
        raise InternalStateError("degree histogram is empty")
    return state.by_deg[state.bstart[last] + state.counts[last] - 1]


def sample_target_rejection(state, params, rng):
    """Uniform proposal, accepted with probability weight/w_max."""
    n = state.n
    if params.is_linear:
        wmax = params.theta
    else:
        wmax = math.pow(params.delta + params.m, -params.alpha)
    for _ in range(REJECTION_CAP):
        v = int(rng.random() * n)
        if v >= n:
            v = n - 1
        w = state.weight_of_degree(state.degrees[v])
        if rng.random() * wmax < w:
            return v
    raise InternalStateError(
        f"rejection sampler exceeded {REJECTION_CAP} proposals; state is corrupt"
    )


def enumerate_degree_law(params, n_target):
    """Exact law of the degree tuple (d_0, ..., d_{n-1}) of G_{n_target},
    by exhaustive recursion over every target choice with its
    step_distribution probability.  Small n only."""
    from .core import init_graph

    if n_target < 2:
        raise ValueError(f"n_target must be >= 2, got {n_target}")
    out = {}

    def rec(state, prob):
        if state.n == n_target:
            key = tuple(state.degrees)
            out[key] = out.get(key, 0.0) + prob
            return
        # one arrival = m sequential half edges
        def half_edge(st, k, pr):
            if k == params.m:
                st._settle_arrival()
                rec(st, pr)
                return
            p = step_distribution(st, params)
            for v in range(st.n):
                child = st.clone()
                child._attach_half_edge(v)
                half_edge(child, k + 1, pr * float(p[v]))

        half_edge(state.clone(), 0, prob)

    rec(init_graph(params), 1.0)
    return out


def target_law(state, kind, params=None):
    """Exact per-vertex law each sampler realizes, computed symbolically
    along that sampler's own arithmetic route (no random draws)."""
    if params is None:
        params = state.params
    if isinstance(kind, str):
        kind = SamplerKind(kind)
    n = state.n
    if kind is SamplerKind.EXACT_SCAN:
        return step_distribution(state, params)
    if kind is SamplerKind.BUCKETED:
        p = np.zeros(n)
        masses = {}
        total = 0.0
        for d in range(params.m, state.dmax + 1):
            c = state.counts[d]
            if c == 0:
                continue
            wd = state.weight_of_degree(d)
            masses[d] = c * wd
            total += c * wd
        for d, mass in masses.items():
            share = mass / total / state.counts[d]
            lo = state.bstart[d]
            for p_idx in range(lo, lo + state.counts[d]):
                p[state.by_deg[p_idx]] = share
        return p
    if kind is SamplerKind.REJECTION:
        if params.is_linear:
            wmax = params.theta
        else:
            wmax = math.pow(params.delta + params.m, -params.alpha)
        acc = np.array(
            [state.weight_of_degree(d) / wmax for d in state.degrees[:n]]
        )
        return acc / acc.sum()
    raise ValueError(f"unknown sampler kind {kind!r}")

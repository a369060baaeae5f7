"""Continuous-time embeddings of the inverse de-preferential model.

Three constructions:

  * a pure birth process started at count m0, holding time at count i
    exponential with mean (i+delta)**alpha (rate (i+delta)**(-alpha));
  * the branching tree grown by racing one such clock per vertex (m = 1):
    observed at the stopping times tau_n (sizes 2, 3, ...) its degree
    sequence is distributed exactly as the discrete graph G_n;
  * the coupled ensemble of independent birth processes, one per vertex
    (any m >= 1): process j starts at count m at time tau_j, and between
    tau_n and tau_(n+1) exactly m cumulative births occur across the n
    live processes.  The counts at the intermediate birth times match the
    discrete degree sequences in distribution.

The heavy event loops live in the kernel backend; this module wraps them
in result types and adds the asymptotic diagnostics (count growth
Z(t)/t**(1/(1+alpha)) -> (1+alpha)**(1/(1+alpha)), the tau compensator
c_n, and exact small-n chain-law enumeration).
"""
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .core import snapshot_grid
from .params import ModelParams, ParameterError

MIN_RATIO_JUMPS = 1000


@dataclass(frozen=True)
class BirthTrajectory:
    """Jump times of one pure birth process.

    jump_times[j] (0-based) is the time the count first reaches
    start_count + j + 1.
    """

    start_count: int
    alpha: float
    delta: float
    jump_times: np.ndarray

    @property
    def n_jumps(self):
        return len(self.jump_times)

    def count_at(self, t):
        return self.start_count + int(np.searchsorted(self.jump_times, t, side="right"))

    def time_to_reach(self, count):
        """First time the count reaches `count` (0.0 for the start count)."""
        if count <= self.start_count:
            return 0.0
        j = count - self.start_count
        if j > self.n_jumps:
            raise ValueError(f"trajectory stops at count {self.start_count + self.n_jumps}")
        return float(self.jump_times[j - 1])


@dataclass(frozen=True)
class BirthRatioSeries:
    """Convergence diagnostics of a birth trajectory.

    count_ratio: (t, Z(t) / t**(1/(1+alpha))) on a log-time grid,
        with limit (1+alpha)**(1/(1+alpha)).
    time_ratio: (n, T_n / n**(1+alpha)) where T_n is the time the count
        first reaches start_count + n - 1, with limit 1/(1+alpha).
    """

    alpha: float
    count_ratio: tuple
    time_ratio: tuple
    count_limit: float
    time_limit: float


@dataclass(frozen=True)
class CMJTree:
    """Branching tree observed until it has n vertices.

    parents[v] is v's parent (-1 for the root), birth_times[v] the birth
    time, taus[j] the time the tree first had j+1 vertices (taus[0] = 0),
    degrees[v] = children + 1 (the root's +1 is its original half edge).
    """

    alpha: float
    delta: float
    parents: np.ndarray
    birth_times: np.ndarray
    taus: np.ndarray
    degrees: np.ndarray

    @property
    def n(self):
        return len(self.parents)

    @property
    def children_counts(self):
        return self.degrees - 1

    @property
    def tau(self):
        """Stopping times tau_2, tau_3, ... (tree sizes 2..n)."""
        return self.taus[1:]


@dataclass(frozen=True)
class YuleEnsemble:
    """Coupled birth-process ensemble (one process per vertex).

    taus[j] is the arrival time of process j+1 (taus[0] = 0);
    b[n-1] is the realized compensator sum_k 1/D(n+1,k) of the arrival
    between tau_n and tau_(n+1); intervals holds the m inter-birth times
    of each arrival, row-major; counts are the final process counts;
    traces samples tracked process counts at the snapshot arrivals.
    """

    alpha: float
    delta: float
    m: int
    taus: np.ndarray
    b: np.ndarray
    intervals: np.ndarray
    counts: np.ndarray
    snap_ns: np.ndarray
    traces: np.ndarray
    tracked: tuple

    @property
    def n(self):
        return len(self.taus)

    def arrival_gaps(self):
        return np.diff(self.taus)


@dataclass(frozen=True)
class TauNormalization:
    """(tau_n - tau_i) against the accumulated compensator c_n.

    ns[j] holds n, c[j] = sum of b over arrivals i..n-1, ratio[j] the
    normalized gap (limit 1), c_over_log[j] = c_n / log n (limit 1/lambda*
    for m = 1, delta = 0).
    """

    i: int
    ns: np.ndarray
    c: np.ndarray
    ratio: np.ndarray
    c_over_log: np.ndarray


def simulate_birth_process(alpha, delta, m0, rng, max_count=None, max_time=None):
    """Simulate a pure birth process until max_count or max_time.

    alpha may be 0 (unit-mean holding times) for degenerate sweeps;
    delta > -1 and m0 >= 1 are required.
    """
    if m0 < 1:
        raise ParameterError(f"m0 must be >= 1, got {m0}")
    if not delta > -1:
        raise ParameterError(f"delta must be > -1, got {delta}")
    if alpha < 0:
        raise ParameterError(f"alpha must be >= 0, got {alpha}")
    if max_count is None and max_time is None:
        raise ParameterError("need a stopping rule: max_count and/or max_time")
    if max_count is not None and max_count <= m0:
        raise ParameterError(f"max_count must exceed m0={m0}")
    max_jumps = (max_count - m0) if max_count is not None else (1 << 62)
    t_stop = math.inf if max_time is None else float(max_time)
    times = kernels.birth_jump_times(alpha, delta, m0, max_jumps, t_stop, rng)
    return BirthTrajectory(start_count=m0, alpha=alpha, delta=delta, jump_times=times)


def birth_asymptotic_ratio(trajectory, alpha=None, grid_points=64):
    """Sample the two convergence ratios of a birth trajectory.

    Needs at least 1000 jumps so the asymptotic regime is visible.
    """
    if alpha is None:
        alpha = trajectory.alpha
    nj = trajectory.n_jumps
    if nj < MIN_RATIO_JUMPS:
        raise ValueError(f"trajectory too short: {nj} < {MIN_RATIO_JUMPS} jumps")
    times = trajectory.jump_times
    m0 = trajectory.start_count
    expo = 1.0 / (1.0 + alpha)

    idx = np.unique(np.geomspace(1, nj, num=grid_points).astype(np.int64)) - 1
    count_ratio = tuple(
        (float(times[j]), (m0 + j + 1) / times[j] ** expo) for j in idx if times[j] > 0
    )
    # T_n = time the count first reaches m0 + n - 1, i.e. jump n-1 (n >= 2)
    time_ratio = tuple(
        (int(j + 2), float(times[j] / (j + 2.0) ** (1.0 + alpha))) for j in idx
    )
    return BirthRatioSeries(
        alpha=alpha,
        count_ratio=count_ratio,
        time_ratio=time_ratio,
        count_limit=(1.0 + alpha) ** expo,
        time_limit=1.0 / (1.0 + alpha),
    )


def cmj_grow(alpha, delta, n_target, rng):
    """Grow the branching tree to n_target vertices by racing the
    per-vertex clocks (rate (degree+delta)**(-alpha) each)."""
    if n_target < 2:
        raise ParameterError(f"n_target must be >= 2, got {n_target}")
    if not delta > -1:
        raise ParameterError(f"delta must be > -1, got {delta}")
    res = kernels.cmj_grow_core(alpha, delta, n_target, rng)
    return CMJTree(
        alpha=alpha,
        delta=delta,
        parents=res["parents"],
        birth_times=res["birth_times"],
        taus=res["taus"],
        degrees=res["degrees"],
    )


def athreya_karlin_grow(params, n_target, rng, tracked=(0,), extra_snapshots=()):
    """Grow the coupled birth-process ensemble to n_target processes."""
    if not isinstance(params, ModelParams) or params.is_linear:
        raise ParameterError("athreya_karlin_grow needs inverse-model params")
    if n_target < 2:
        raise ParameterError(f"n_target must be >= 2, got {n_target}")
    snaps = snapshot_grid(n_target, extras=extra_snapshots)
    res = kernels.ak_grow_core(
        params.alpha, params.delta, params.m, n_target, rng, snaps, list(tracked)
    )
    return YuleEnsemble(
        alpha=params.alpha,
        delta=params.delta,
        m=params.m,
        taus=res["taus"],
        b=res["b"],
        intervals=res["intervals"],
        counts=res["counts"],
        snap_ns=res["snap_ns"],
        traces=res["traces"],
        tracked=tuple(tracked),
    )


def tau_normalization(ensemble, i=1):
    """Normalize the arrival times by the realized compensator.

    c_n accumulates b_j over arrivals j = i..n-1 (the exact conditional
    compensator of tau_n - tau_i), reported for n = i+1 .. ensemble.n.
    """
    n_total = ensemble.n
    if not 1 <= i < n_total:
        raise ParameterError(f"need 1 <= i < {n_total}, got i={i}")
    b = ensemble.b
    taus = ensemble.taus
    ns = np.arange(i + 1, n_total + 1, dtype=np.int64)
    c = np.cumsum(b[i - 1 :])
    gaps = taus[i:] - taus[i - 1]
    ratio = gaps / c
    c_over_log = c / np.log(ns)
    return TauNormalization(i=i, ns=ns, c=c, ratio=ratio, c_over_log=c_over_log)


def enumerate_cmj_degree_law(alpha, delta, n_target):
    """Exact law of the tree's degree tuple at size n_target, from the
    clock-race semantics: each event picks a vertex with probability
    rate/sum(rates).  Small n only (the state tree is explored fully)."""
    if n_target < 2:
        raise ParameterError(f"n_target must be >= 2, got {n_target}")
    out = {}

    def rec(degs, prob):
        if len(degs) == n_target:
            out[degs] = out.get(degs, 0.0) + prob
            return
        rates = [math.pow(d + delta, -alpha) for d in degs]
        total = math.fsum(rates)
        for v, r in enumerate(rates):
            child = tuple(d + 1 if u == v else d for u, d in enumerate(degs)) + (1,)
            rec(child, prob * (r / total))

    rec((1,), 1.0)
    return out

"""Replica orchestration: derived RNG streams, parallel execution,
kernel dispatch, and packaging of raw kernel output into summaries.

Determinism contract: replica r always draws from
PCG64(SeedSequence(entropy=master_seed, spawn_key=(r,))), replicas never
share state, and results are collected in replica order, so a
configuration produces identical output for any worker count.
"""
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .analytics import DegreeHistogram, ReplicaSummary
from .core import snapshot_grid
from .embedding import YuleEnsemble, athreya_karlin_grow, cmj_grow
from .params import INVERSE, ModelParams, ParameterError
from .samplers import SamplerKind

_SAMPLER_ID = {
    SamplerKind.BUCKETED: 0,
    SamplerKind.REJECTION: 1,
    SamplerKind.EXACT_SCAN: 2,
}


def resolve_threads(threads=None):
    """--threads flag if given, else DEPREF_THREADS, else 1."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("DEPREF_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return 1


def replica_rng(master_seed, replica):
    """The documented stream of replica r: PCG64 seeded by
    SeedSequence(master_seed, spawn_key=(r,))."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(replica,))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class ExperimentConfig:
    """One reproducible growth experiment."""

    params: ModelParams
    n_target: int
    replicas: int = 1
    master_seed: int = 0
    sampler: SamplerKind = SamplerKind.BUCKETED
    tracked: tuple = (1,)          # 0-based vertex ids; 1 arrives at size 2
    checkpoints: tuple = ()        # extra snapshot sizes
    window_frac: float = 0.9       # late-window start as a fraction of n_target
    threads: int = 1

    def __post_init__(self):
        if self.n_target < 3:
            raise ParameterError(f"n_target must be >= 3, got {self.n_target}")
        if self.replicas < 1:
            raise ParameterError(f"replicas must be >= 1, got {self.replicas}")
        if not 0.0 <= self.window_frac <= 1.0:
            raise ParameterError(f"window_frac must be in [0, 1], got {self.window_frac}")

    @property
    def window_start(self):
        return int(math.ceil(self.window_frac * self.n_target))

    @property
    def snapshot_ns(self):
        return snapshot_grid(self.n_target, extras=self.checkpoints)


def run_growth_replica(cfg, replica):
    """Run one growth replica through the kernel backend."""
    p = cfg.params
    rng = replica_rng(cfg.master_seed, replica)
    res = kernels.grow_graph(
        1 if p.kind == INVERSE else 0,
        p.theta,
        p.alpha,
        p.delta,
        p.m,
        cfg.n_target,
        rng,
        cfg.snapshot_ns,
        list(cfg.tracked),
        cfg.window_start,
        _SAMPLER_ID[cfg.sampler],
    )
    snap_ns = res["snap_ns"]
    traces = {
        v: [
            (int(n), int(res["traces"][si, ti]))
            for si, n in enumerate(snap_ns)
            if n > v  # vertex v exists once the graph has > v vertices
        ]
        for ti, v in enumerate(cfg.tracked)
    }
    hist_snapshots = {
        int(n): DegreeHistogram(res["hists"][si], int(n), p.m)
        for si, n in enumerate(snap_ns)
    }
    normalizers = (
        [(int(n), float(res["normalizers"][si])) for si, n in enumerate(snap_ns)]
        if p.kind == INVERSE
        else []
    )
    return ReplicaSummary(
        replica=replica,
        seed_key=(cfg.master_seed, replica),
        n_target=cfg.n_target,
        snap_ns=snap_ns,
        traces=traces,
        hist_snapshots=hist_snapshots,
        final_hist=hist_snapshots[cfg.n_target],
        normalizers=normalizers,
        attach_counts=res["attach_counts"],
        window_start=cfg.window_start,
    )


def _growth_job(args):
    cfg, replica = args
    return run_growth_replica(cfg, replica)


def run_experiment(cfg):
    """All replicas of a growth experiment, in replica order."""
    jobs = [(cfg, r) for r in range(cfg.replicas)]
    return _pmap(_growth_job, jobs, cfg.threads)


@dataclass(frozen=True)
class EnsembleConfig:
    """One reproducible continuous-time embedding experiment."""

    alpha: float
    delta: float
    m: int
    n_target: int
    replicas: int = 1
    master_seed: int = 0
    tracked: tuple = (0,)
    checkpoints: tuple = ()
    threads: int = 1

    def params(self):
        return ModelParams(kind=INVERSE, m=self.m, alpha=self.alpha, delta=self.delta)


def _ensemble_job(args):
    cfg, replica = args
    rng = replica_rng(cfg.master_seed, replica)
    return athreya_karlin_grow(
        cfg.params(), cfg.n_target, rng,
        tracked=cfg.tracked, extra_snapshots=cfg.checkpoints,
    )


def run_ensembles(cfg):
    """All Yule-ensemble replicas, in replica order."""
    jobs = [(cfg, r) for r in range(cfg.replicas)]
    return _pmap(_ensemble_job, jobs, cfg.threads)


def _cmj_degrees_job(args):
    alpha, delta, n_target, master_seed, lo, hi = args
    out = np.empty((hi - lo, n_target), dtype=np.int64)
    for i, r in enumerate(range(lo, hi)):
        tree = cmj_grow(alpha, delta, n_target, replica_rng(master_seed, r))
        out[i] = tree.degrees
    return out


def cmj_degree_samples(alpha, delta, n_target, replicas, master_seed, threads=1,
                       chunk=2000):
    """Degree tuples of `replicas` independent branching trees at size
    n_target, stacked as a (replicas, n_target) array."""
    jobs = [
        (alpha, delta, n_target, master_seed, lo, min(lo + chunk, replicas))
        for lo in range(0, replicas, chunk)
    ]
    parts = _pmap(_cmj_degrees_job, jobs, threads)
    return np.concatenate(parts, axis=0)


def _pmap(fn, jobs, threads):
    threads = resolve_threads(threads)
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (threads * 4))))

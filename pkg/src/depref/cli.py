"""Command line front end.

Subcommands:
  simulate -- grow replicas, write degree_dist.csv / fixed_vertex.csv /
              normalizer.csv / attach_freq.csv and replicas.json
  lambda   -- sweep the Malthusian root, write lambda_sweep.csv
  pmf      -- dump the limiting degree pmf of the inverse model
  embed    -- continuous-time runs: tau.csv (ensemble), birth_ratio.csv
              (pure birth), cmj_law.json (small-n law comparison)
  verify   -- run the verification suites, exit 1 on any failure

Config precedence: explicit flags > --config file (JSON or key=value
lines) > defaults.  All floats are serialized with 17 significant digits
and every output is a pure function of (config, seed), so reruns are
byte-identical regardless of --threads.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from ._backend import BACKEND
from .analytics import attachment_degree_frequency, fixed_vertex_ratio, linear_limit_pmf
from .embedding import (
    birth_asymptotic_ratio,
    enumerate_cmj_degree_law,
    simulate_birth_process,
    tau_normalization,
)
from .malthusian import (
    attachment_limit_pmf,
    lambda_star_sweep,
    limit_degree_pmf,
    solve_lambda_star,
)
from .params import INVERSE, LINEAR, ModelParams, ParameterError
from .runner import (
    EnsembleConfig,
    ExperimentConfig,
    cmj_degree_samples,
    replica_rng,
    resolve_threads,
    run_ensembles,
    run_experiment,
)
from .samplers import SamplerKind

SCHEMA_VERSION = 1


def _fmt(x):
    """17 significant digits; enough to round-trip any double."""
    return format(float(x), ".17g")


def _write_csv(path, header, rows):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(str(c) if isinstance(c, (int, str)) else _fmt(c) for c in row))
            f.write("\n")


def _load_config_file(path):
    with open(path) as f:
        text = f.read()
    stripped = text.strip()
    if stripped.startswith("{"):
        return json.loads(stripped)
    out = {}
    for line in stripped.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _merge_config(args, defaults, casts):
    """flags > config file > defaults; argparse stores None for unset flags."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        for k, v in _load_config_file(args.config).items():
            if k not in defaults:
                raise ParameterError(f"unknown config key {k!r}")
            merged[k] = casts[k](v) if isinstance(v, str) else v
    for k in defaults:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    return merged


def _int_list(text):
    return tuple(int(x) for x in str(text).split(",") if str(x).strip())


def _float_list(text):
    return tuple(float(x) for x in str(text).split(",") if str(x).strip())


def _build_params(cfg):
    if cfg["model"] == LINEAR:
        return ModelParams(kind=LINEAR, m=cfg["m"], theta=cfg["theta"], alpha=cfg["alpha"])
    if cfg["model"] == INVERSE:
        return ModelParams(kind=INVERSE, m=cfg["m"], alpha=cfg["alpha"], delta=cfg["delta"])
    raise ParameterError(f"unknown model {cfg['model']!r}")


# -- simulate --------------------------------------------------------------

_SIM_DEFAULTS = {
    "model": INVERSE,
    "theta": 1.0,
    "alpha": 1.0,
    "delta": 0.0,
    "m": 1,
    "n": 10_000,
    "replicas": 10,
    "seed": 0,
    "sampler": "bucketed",
    "track": (1,),
    "checkpoint": (),
    "window_frac": 0.9,
}
_SIM_CASTS = {
    "model": str, "theta": float, "alpha": float, "delta": float, "m": int,
    "n": int, "replicas": int, "seed": int, "sampler": str,
    "track": _int_list, "checkpoint": _int_list, "window_frac": float,
}


def cmd_simulate(args):
    cfg = _merge_config(args, _SIM_DEFAULTS, _SIM_CASTS)
    params = _build_params(cfg)
    threads = resolve_threads(args.threads)
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)

    exp = ExperimentConfig(
        params=params,
        n_target=cfg["n"],
        replicas=cfg["replicas"],
        master_seed=cfg["seed"],
        sampler=SamplerKind(cfg["sampler"]),
        tracked=tuple(cfg["track"]),
        checkpoints=tuple(cfg["checkpoint"]),
        window_frac=cfg["window_frac"],
        threads=threads,
    )
    summaries = run_experiment(exp)
    n = exp.n_target
    reps = exp.replicas

    lam = None
    if params.kind == INVERSE:
        lam = solve_lambda_star(params.alpha, params.delta).lambda_star

    # degree_dist.csv: counts summed over replicas at the final size
    kmax = max(len(s.final_hist.counts) for s in summaries)
    tot = np.zeros(kmax, dtype=np.int64)
    for s in summaries:
        c = s.final_hist.counts
        tot[: len(c)] += c
    if params.kind == LINEAR:
        limit = {k: linear_limit_pmf(k) if params.m == 1 else math.nan for k in range(1, kmax)}
    else:
        pmf = limit_degree_pmf(params.alpha, params.delta, lambda_star=lam)
        limit = {k: pmf.prob(k) if params.m == 1 else math.nan for k in range(1, kmax)}
    rows = [
        (k, int(tot[k]), tot[k] / (reps * n), limit.get(k, 0.0))
        for k in range(1, kmax)
        if tot[k] or limit.get(k, 0.0) > 1e-12
    ]
    _write_csv(os.path.join(outdir, "degree_dist.csv"), ["k", "N_k", "P_k", "limit_pk"], rows)

    # fixed_vertex.csv: replica-mean trace of the first tracked vertex
    v0 = exp.tracked[0]
    ns = [p[0] for p in summaries[0].traces[v0]]
    mean_d = {
        nn: float(np.mean([dict(s.traces[v0])[nn] for s in summaries])) for nn in ns
    }
    ratios = dict(
        fixed_vertex_ratio(list(mean_d.items()), params, lambda_star=lam)["ratio"]
    )
    _write_csv(
        os.path.join(outdir, "fixed_vertex.csv"),
        ["n", "d_i", "ratio"],
        [(nn, mean_d[nn], ratios[nn]) for nn in ns],
    )

    # normalizer.csv: replica-mean D_n / n (inverse model only)
    if params.kind == INVERSE:
        ns_norm = [p[0] for p in summaries[0].normalizers]
        rows = []
        for i, nn in enumerate(ns_norm):
            vals = [s.normalizers[i][1] for s in summaries]
            rows.append((nn, float(np.mean(vals)) / nn))
        _write_csv(os.path.join(outdir, "normalizer.csv"), ["n", "D_n_over_n"], rows)

    # attach_freq.csv: pooled late-window target-degree frequencies
    pooled = np.zeros(kmax, dtype=np.int64)
    for s in summaries:
        c = s.attach_counts
        pooled[: len(c)] += c
    freq = attachment_degree_frequency(pooled) if pooled.sum() else {}
    if params.kind == LINEAR:
        flim = {k: linear_limit_pmf(k) if params.m == 1 else math.nan for k in freq}
    else:
        qlim = attachment_limit_pmf(params.alpha, params.delta, lambda_star=lam)
        flim = {k: qlim.get(k, 0.0) if params.m == 1 else math.nan for k in freq}
    _write_csv(
        os.path.join(outdir, "attach_freq.csv"),
        ["k", "frequency", "limit_pk"],
        [(k, f, flim[k]) for k, f in sorted(freq.items())],
    )

    # replicas.json: per-replica summaries
    payload = {
        "schema_version": SCHEMA_VERSION,
        "backend": BACKEND,
        "config": {
            "model": params.kind, "theta": params.theta, "alpha": params.alpha,
            "delta": params.delta, "m": params.m, "n": n, "replicas": reps,
            "seed": exp.master_seed, "sampler": exp.sampler.value,
            "track": list(exp.tracked), "window_start": exp.window_start,
        },
        "lambda_star": lam,
        "replicas": [
            {
                "replica": s.replica,
                "seed_key": list(s.seed_key),
                "final_hist": {str(k): v for k, v in s.final_hist.as_dict().items()},
                "traces": {str(v): tr for v, tr in s.traces.items()},
                "normalizers": s.normalizers,
                "attach_counts": {
                    str(k): int(c) for k, c in enumerate(s.attach_counts) if c
                },
            }
            for s in summaries
        ],
    }
    with open(os.path.join(outdir, "replicas.json"), "w") as f:
        json.dump(payload, f, sort_keys=True, indent=1)
    print(f"simulate: wrote {outdir}/ (backend={BACKEND}, threads={threads})")
    return 0


# -- lambda ----------------------------------------------------------------

def cmd_lambda(args):
    alphas = _float_list(args.alphas)
    deltas = _float_list(args.deltas)
    rows = lambda_star_sweep(alphas, deltas, tol=args.tol)
    failures = [r for r in rows if r.error]
    for r in failures:
        print(f"lambda: ({r.alpha}, {r.delta}) failed: {r.error}", file=sys.stderr)
    out = args.out or "lambda_sweep.csv"
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    _write_csv(
        out,
        ["alpha", "delta", "lambda_star", "residual"],
        [(_fmt(r.alpha), _fmt(r.delta), r.lambda_star, r.residual) for r in rows],
    )
    print(f"lambda: wrote {out} ({len(rows)} rows, {len(failures)} failures)")
    return 0


# -- pmf -------------------------------------------------------------------

def cmd_pmf(args):
    pmf = limit_degree_pmf(args.alpha, args.delta, eps=args.eps)
    out = args.out or "limit_pmf.csv"
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    _write_csv(
        out,
        ["k", "p_k"],
        [(k + 1, p) for k, p in enumerate(pmf.probabilities)],
    )
    print(
        f"pmf: wrote {out} (lambda_star={_fmt(pmf.lambda_star)}, "
        f"K={pmf.truncation}, tail={_fmt(pmf.tail_bound)})"
    )
    return 0


# -- embed -----------------------------------------------------------------

def cmd_embed(args):
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    threads = resolve_threads(args.threads)

    if args.mode == "birth":
        rng = replica_rng(args.seed, 0)
        traj = simulate_birth_process(
            args.alpha, args.delta, args.m, rng, max_count=args.m + args.jumps
        )
        series = birth_asymptotic_ratio(traj)
        # count_ratio and time_ratio are sampled at the same jump indices
        rows = [
            (n, t, zr, tr)
            for (t, zr), (n, tr) in zip(series.count_ratio, series.time_ratio)
        ]
        _write_csv(
            os.path.join(outdir, "birth_ratio.csv"),
            ["n", "t", "z_ratio", "t_ratio"],
            rows,
        )
        print(
            f"embed birth: final z_ratio={_fmt(series.count_ratio[-1][1])} "
            f"(limit {_fmt(series.count_limit)}), wrote {outdir}/birth_ratio.csv"
        )
        return 0

    if args.mode == "ak":
        cfg = EnsembleConfig(
            alpha=args.alpha, delta=args.delta, m=args.m, n_target=args.n,
            replicas=args.replicas, master_seed=args.seed, threads=threads,
        )
        ensembles = run_ensembles(cfg)
        norms = [tau_normalization(e, i=1) for e in ensembles]
        from .core import snapshot_grid

        grid = [g for g in snapshot_grid(args.n) if g >= 2]
        rows = []
        for g in grid:
            j = g - 2  # ns start at i+1 = 2
            taus = np.median([e.taus[g - 1] for e in ensembles])
            c = np.median([t.c[j] for t in norms])
            col = np.median([t.c_over_log[j] for t in norms])
            rat = np.median([t.ratio[j] for t in norms])
            rows.append((g, taus, c, col, rat))
        _write_csv(
            os.path.join(outdir, "tau.csv"),
            ["n", "tau_n", "c_n", "c_n_over_log_n", "tau_ratio"],
            rows,
        )
        print(f"embed ak: wrote {outdir}/tau.csv (medians over {args.replicas} replicas)")
        return 0

    if args.mode == "cmj":
        law = enumerate_cmj_degree_law(args.alpha, args.delta, args.n)
        samples = cmj_degree_samples(
            args.alpha, args.delta, args.n, args.draws, args.seed, threads=threads
        )
        observed = {}
        for row in samples:
            key = tuple(int(x) for x in row)
            observed[key] = observed.get(key, 0) + 1
        exp_counts = {k: p * args.draws for k, p in law.items()}
        from scipy import stats as sps

        keys = sorted(exp_counts)
        obs = np.array([observed.get(k, 0) for k in keys], dtype=float)
        exp = np.array([exp_counts[k] for k in keys])
        exp *= obs.sum() / exp.sum()
        stat, p = sps.chisquare(obs, exp)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "alpha": args.alpha, "delta": args.delta, "n": args.n,
            "draws": args.draws, "chi_square_stat": float(stat),
            "chi_square_p": float(p),
            "law": {" ".join(map(str, k)): v for k, v in sorted(law.items())},
            "observed": {" ".join(map(str, k)): v for k, v in sorted(observed.items())},
        }
        with open(os.path.join(outdir, "cmj_law.json"), "w") as f:
            json.dump(payload, f, sort_keys=True, indent=1)
        print(f"embed cmj: chi-square p={p:.4g}, wrote {outdir}/cmj_law.json")
        return 0

    raise ParameterError(f"unknown embed mode {args.mode!r}")


# -- verify ----------------------------------------------------------------

def cmd_verify(args):
    from . import verify as V

    threads = resolve_threads(args.threads)
    results = V.run_suite(args.suite, budget=args.budget, threads=threads)
    for r in results:
        print(r.render())
    n_fail = sum(not r.passed for r in results)
    if args.out:
        parent = os.path.dirname(args.out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(args.out, "w") as f:
            json.dump(
                {
                    "schema_version": SCHEMA_VERSION,
                    "suite": args.suite,
                    "budget": args.budget,
                    "passed": n_fail == 0,
                    "criteria": [r.to_dict() for r in results],
                },
                f,
                sort_keys=True,
                indent=1,
            )
    print(f"verify {args.suite}: {len(results) - n_fail}/{len(results)} criteria passed")
    return 0 if n_fail == 0 else 1


# -- parser ----------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="depref",
        description="De-preferential random graph laboratory",
    )
    ap.add_argument("--version", action="version", version=f"depref {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="grow replicas and write CSV/JSON outputs")
    sim.add_argument("--model", choices=[LINEAR, INVERSE])
    sim.add_argument("--theta", type=float)
    sim.add_argument("--alpha", type=float)
    sim.add_argument("--delta", type=float)
    sim.add_argument("--m", type=int)
    sim.add_argument("--n", type=int, help="target vertex count")
    sim.add_argument("--replicas", type=int)
    sim.add_argument("--seed", type=int, help="master seed (replica r uses spawn key (r,))")
    sim.add_argument("--sampler", choices=["bucketed", "rejection", "scan"])
    sim.add_argument("--track", type=_int_list, help="comma-separated 0-based vertex ids")
    sim.add_argument("--checkpoint", type=_int_list, help="extra snapshot sizes")
    sim.add_argument("--window-frac", dest="window_frac", type=float)
    sim.add_argument("--config", help="JSON or key=value config file")
    sim.add_argument("--threads", type=int, help="worker processes (or DEPREF_THREADS)")
    sim.add_argument("--out", required=True, help="output directory")
    sim.set_defaults(func=cmd_simulate)

    lam = sub.add_parser("lambda", help="sweep the Malthusian root over a grid")
    lam.add_argument("--alphas", required=True, help="comma-separated alpha grid")
    lam.add_argument("--deltas", required=True, help="comma-separated delta grid")
    lam.add_argument("--tol", type=float, default=1e-12)
    lam.add_argument("--out", help="output CSV (default lambda_sweep.csv)")
    lam.set_defaults(func=cmd_lambda)

    pmf = sub.add_parser("pmf", help="dump the limiting degree pmf (inverse model)")
    pmf.add_argument("--alpha", type=float, required=True)
    pmf.add_argument("--delta", type=float, required=True)
    pmf.add_argument("--eps", type=float, default=1e-12)
    pmf.add_argument("--out", help="output CSV (default limit_pmf.csv)")
    pmf.set_defaults(func=cmd_pmf)

    emb = sub.add_parser("embed", help="continuous-time embedding runs")
    emb.add_argument("--mode", choices=["ak", "cmj", "birth"], default="ak")
    emb.add_argument("--alpha", type=float, default=1.0)
    emb.add_argument("--delta", type=float, default=0.0)
    emb.add_argument("--m", type=int, default=1)
    emb.add_argument("--n", type=int, default=10_000)
    emb.add_argument("--replicas", type=int, default=1)
    emb.add_argument("--jumps", type=int, default=100_000, help="birth mode: jump count")
    emb.add_argument("--draws", type=int, default=100_000, help="cmj mode: MC draws")
    emb.add_argument("--seed", type=int, default=0)
    emb.add_argument("--threads", type=int)
    emb.add_argument("--out", required=True, help="output directory")
    emb.set_defaults(func=cmd_embed)

    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument(
        "suite", choices=["linear", "inverse", "embedding", "malthusian", "all"]
    )
    ver.add_argument("--budget", choices=["smoke", "quick"], default="quick")
    ver.add_argument("--threads", type=int)
    ver.add_argument("--out", help="JSON report path")
    ver.set_defaults(func=cmd_verify)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"depref: parameter error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"depref: invalid input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"depref: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

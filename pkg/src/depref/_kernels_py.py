"""Pure-Python growth kernels (fallback backend).

Same entry points as the compiled module depref._kernels, and the same
random-stream consumption: uniforms come one at a time from rng.random(),
exponentials are built as -log1p(-u), and weights use math.pow, so a run
is bit-identical on either backend for the same seed.

Vertices are kept in contiguous degree-class blocks (largest degree
first): bstart[d] is the first position of class d, new vertices enter at
the minimum degree and append at the end, and an increment swaps the
vertex to its block boundary.  All updates are O(1); a class draw walks
the O(max degree) distinct classes.

Model kinds: 0 linear, 1 inverse.  Samplers: 0 bucketed, 1 rejection,
2 exact scan.
"""
import math

import numpy as np

BACKEND = "python"

DEG_CAP = 1024
REBUILD_INTERVAL = 1 << 16
NORMALIZER_RTOL = 1e-9
BAND_RTOL = 1e-9
REJECTION_CAP = 1_000_000

KIND_LINEAR = 0
KIND_INVERSE = 1
SAMPLER_BUCKETED = 0
SAMPLER_REJECTION = 1
SAMPLER_SCAN = 2


class KernelStateError(RuntimeError):
    """A kernel-level consistency check failed (indicates a bug)."""


def grow_graph(kind, theta, alpha, delta, m, n_target, rng,
               snapshot_ns, tracked, window_start, sampler):
    """Grow the graph from the (2m, m) seed to n_target vertices.

    snapshot_ns : sorted unique ints in [2, n_target]; at each settled size
        in this grid the degree histogram, tracked-vertex degrees and the
        normalizer are recorded.
    tracked : 0-based vertex ids whose degrees are traced (0 until born).
    window_start : attachment events are tallied by target degree whenever
        the existing vertex count n is >= window_start.
    Returns a dict of numpy arrays (degrees, hists, traces, normalizers,
    attach_counts, final_normalizer, snap_ns).
    """
    snapshot_ns = [int(x) for x in snapshot_ns]
    tracked = [int(x) for x in tracked]
    n_snap = len(snapshot_ns)
    n_track = len(tracked)

    deg = [0] * n_target
    by_deg = [0] * n_target
    pos = [0] * n_target
    counts = [0] * (DEG_CAP + 2)
    bstart = [0] * (DEG_CAP + 2)
    wtab = [0.0] * (DEG_CAP + 2)

    hists = np.zeros((n_snap, DEG_CAP), dtype=np.int64)
    traces = np.zeros((n_snap, n_track), dtype=np.int64)
    norms = np.zeros(n_snap, dtype=np.float64)
    attach_counts = np.zeros(DEG_CAP, dtype=np.int64)

    # seed: vertex 0 at degree 2m, vertex 1 at degree m
    deg[0] = 2 * m
    deg[1] = m
    by_deg[0] = 0
    by_deg[1] = 1
    pos[0] = 0
    pos[1] = 1
    counts[2 * m] = 1
    counts[m] = 1
    bstart[2 * m] = 0
    for d in range(m, 2 * m):
        bstart[d] = 1
    dmax = 2 * m

    inverse = kind == KIND_INVERSE
    if inverse:
        for d in range(1, 2 * m + 2):
            wtab[d] = math.pow(delta + d, -alpha)
        wlen = 2 * m + 2
        D = wtab[2 * m] + wtab[m]
        wmax = wtab[m]
    else:
        wlen = 0
        D = 0.0
        wmax = theta

    n = 2
    si = 0
    rebuild = 0
    rand = rng.random

    def record():
        hists[si, : dmax + 1] = counts[: dmax + 1]
        for ti in range(n_track):
            v = tracked[ti]
            traces[si, ti] = deg[v] if v < n else 0
        norms[si] = D if inverse else n * theta - alpha

    if si < n_snap and snapshot_ns[si] == 2:
        record()
        si += 1

    while n < n_target:
        s_base = (2 * n - 1) * m
        for k in range(m):
            s_int = k + s_base
            # -- draw the target
            if sampler == SAMPLER_BUCKETED:
                if inverse:
                    x = rand() * D
                else:
                    x = rand() * (n * theta - alpha)
                acc = 0.0
                v = -1
                last = -1
                for d in range(m, dmax + 1):
                    c = counts[d]
                    if c == 0:
                        continue
                    wd = wtab[d] if inverse else theta - (alpha * d) / s_int
                    mass = c * wd
                    if x < acc + mass:
                        idx = int((x - acc) / wd)
                        if idx >= c:
                            idx = c - 1
                        v = by_deg[bstart[d] + idx]
                        break
                    acc += mass
                    last = d
                if v < 0:
                    v = by_deg[bstart[last] + counts[last] - 1]
            elif sampler == SAMPLER_REJECTION:
                v = -1
                for _ in range(REJECTION_CAP):
                    cand = int(rand() * n)
                    if cand >= n:
                        cand = n - 1
                    d = deg[cand]
                    w = wtab[d] if inverse else theta - (alpha * d) / s_int
                    if rand() * wmax < w:
                        v = cand
                        break
                if v < 0:
                    raise KernelStateError("rejection sampler exceeded its proposal cap")
            else:
                if inverse:
                    x = rand() * D
                else:
                    x = rand() * (n * theta - alpha)
                acc = 0.0
                v = n - 1
                for cand in range(n):
                    d = deg[cand]
                    acc += wtab[d] if inverse else theta - (alpha * d) / s_int
                    if x < acc:
                        v = cand
                        break

            d = deg[v]
            if n >= window_start:
                attach_counts[d] += 1

            # -- move v from class d to d+1
            if d + 1 >= DEG_CAP:
                raise KernelStateError("degree cap exceeded")
            s = bstart[d]
            p = pos[v]
            w2 = by_deg[s]
            by_deg[s] = v
            by_deg[p] = w2
            pos[v] = s
            pos[w2] = p
            if d == dmax:
                bstart[d + 1] = s
                dmax = d + 1
            bstart[d] = s + 1
            counts[d] -= 1
            counts[d + 1] += 1
            deg[v] = d + 1
            if inverse:
                while wlen <= d + 1:
                    wtab[wlen] = math.pow(delta + wlen, -alpha)
                    wlen += 1
                D += wtab[d + 1] - wtab[d]
                rebuild += 1
                if rebuild == REBUILD_INTERVAL:
                    rebuild = 0
                    exact = 0.0
                    for dd in range(m, dmax + 1):
                        if counts[dd]:
                            exact += counts[dd] * wtab[dd]
                    if abs(exact - D) > NORMALIZER_RTOL * abs(exact):
                        raise KernelStateError(
                            f"normalizer drift: incremental={D!r} exact={exact!r}"
                        )
                    D = exact

        # -- settle the arrival at degree m
        deg[n] = m
        by_deg[n] = n
        pos[n] = n
        counts[m] += 1
        if inverse:
            D += wtab[m]
        n += 1
        if si < n_snap and snapshot_ns[si] == n:
            record()
            si += 1

    return {
        "snap_ns": np.array(snapshot_ns, dtype=np.int64),
        "degrees": np.array(deg, dtype=np.int64),
        "hists": hists[:, : dmax + 1].copy(),
        "traces": traces,
        "normalizers": norms,
        "attach_counts": attach_counts[: dmax + 1].copy(),
        "final_normalizer": D if inverse else n * theta - alpha,
    }


def birth_jump_times(alpha, delta, m0, max_jumps, max_time, rng):
    """Jump times of a pure birth process started at count m0.

    The holding time at count i is exponential with mean (i+delta)**alpha;
    times[j] is when the count first reaches m0+j+1.  Stops after max_jumps
    jumps or past max_time, whichever comes first.
    """
    cap = min(max_jumps, 1 << 20)
    times = np.empty(cap, dtype=np.float64)
    rand = rng.random
    t = 0.0
    count = m0
    for j in range(max_jumps):
        t += math.pow(count + delta, alpha) * (-math.log1p(-rand()))
        if t > max_time:
            return times[:j].copy()
        if j == cap:
            cap = min(max_jumps, cap * 2)
            grown = np.empty(cap, dtype=np.float64)
            grown[:j] = times[:j]
            times = grown
        times[j] = t
        count += 1
    return times


def cmj_grow_core(alpha, delta, n_target, rng):
    """Grow the continuous-time branching tree to n_target vertices.

    Every vertex of current degree d rings at rate (d+delta)**(-alpha)
    (the root's initial half edge makes degree = children + 1 for all
    vertices).  Each event picks the parent proportionally to the rates
    and advances the clock by Exp(sum of rates).
    """
    parents = np.empty(n_target, dtype=np.int64)
    btimes = np.empty(n_target, dtype=np.float64)
    taus = np.empty(n_target, dtype=np.float64)
    degs = [0] * n_target
    by_deg = [0] * n_target
    pos = [0] * n_target
    counts = [0] * (DEG_CAP + 2)
    bstart = [0] * (DEG_CAP + 2)
    wtab = [0.0] * (DEG_CAP + 2)

    wtab[1] = math.pow(delta + 1, -alpha)
    wtab[2] = math.pow(delta + 2, -alpha)
    wlen = 3
    degs[0] = 1
    by_deg[0] = 0
    pos[0] = 0
    counts[1] = 1
    bstart[1] = 0
    dmax = 1
    D = wtab[1]

    parents[0] = -1
    btimes[0] = 0.0
    taus[0] = 0.0
    t = 0.0
    n = 1
    rebuild = 0
    rand = rng.random

    while n < n_target:
        # select the parent via the class buckets
        x = rand() * D
        acc = 0.0
        v = -1
        last = -1
        for d in range(1, dmax + 1):
            c = counts[d]
            if c == 0:
                continue
            wd = wtab[d]
            mass = c * wd
            if x < acc + mass:
                idx = int((x - acc) / wd)
                if idx >= c:
                    idx = c - 1
                v = by_deg[bstart[d] + idx]
                break
            acc += mass
            last = d
        if v < 0:
            v = by_deg[bstart[last] + counts[last] - 1]

        t += (-math.log1p(-rand())) / D

        # parent gains a child
        d = degs[v]
        if d + 1 >= DEG_CAP:
            raise KernelStateError("degree cap exceeded")
        s = bstart[d]
        p = pos[v]
        w2 = by_deg[s]
        by_deg[s] = v
        by_deg[p] = w2
        pos[v] = s
        pos[w2] = p
        if d == dmax:
            bstart[d + 1] = s
            dmax = d + 1
        bstart[d] = s + 1
        counts[d] -= 1
        counts[d + 1] += 1
        degs[v] = d + 1
        while wlen <= d + 1:
            wtab[wlen] = math.pow(delta + wlen, -alpha)
            wlen += 1
        D += wtab[d + 1] - wtab[d]

        # newborn enters at degree 1
        degs[n] = 1
        by_deg[n] = n
        pos[n] = n
        counts[1] += 1
        D += wtab[1]
        parents[n] = v
        btimes[n] = t
        taus[n] = t
        n += 1

        rebuild += 1
        if rebuild == REBUILD_INTERVAL:
            rebuild = 0
            exact = 0.0
            for dd in range(1, dmax + 1):
                if counts[dd]:
                    exact += counts[dd] * wtab[dd]
            if abs(exact - D) > NORMALIZER_RTOL * abs(exact):
                raise KernelStateError(
                    f"normalizer drift: incremental={D!r} exact={exact!r}"
                )
            D = exact

    return {
        "parents": parents,
        "birth_times": btimes,
        "taus": taus,
        "degrees": np.array(degs, dtype=np.int64),
    }


def ak_grow_core(alpha, delta, m, n_target, rng, snapshot_ns, tracked):
    """Coupled ensemble of pure birth processes, one per vertex.

    Process j starts at count m at time tau_j; between tau_n and tau_(n+1)
    exactly m cumulative births occur across the n live processes.  The
    per-arrival compensators b_n = sum_k 1/D(n+1,k) are recorded from the
    realized normalizers, and the normalizer band
    n/(2m+delta)**alpha <= D <= n/(m+delta)**alpha plus the transported
    b-band are hard-asserted at every step.
    """
    snapshot_ns = [int(x) for x in snapshot_ns]
    tracked = [int(x) for x in tracked]
    n_snap = len(snapshot_ns)
    n_track = len(tracked)

    taus = np.empty(n_target, dtype=np.float64)
    b = np.empty(n_target - 1, dtype=np.float64)
    intervals = np.empty((n_target - 1) * m, dtype=np.float64)
    traces = np.zeros((n_snap, n_track), dtype=np.int64)

    cnt = [0] * n_target
    by_deg = [0] * n_target
    pos = [0] * n_target
    counts = [0] * (DEG_CAP + 2)
    bstart = [0] * (DEG_CAP + 2)
    wtab = [0.0] * (DEG_CAP + 2)

    for d in range(m, 2 * m + 2):
        wtab[d] = math.pow(delta + d, -alpha)
    wlen = 2 * m + 2
    cnt[0] = m
    by_deg[0] = 0
    pos[0] = 0
    counts[m] = 1
    bstart[m] = 0
    dmax = m
    D = wtab[m]

    lo_unit = math.pow(2 * m + delta, -alpha)  # 1/(2m+delta)**alpha
    hi_unit = wtab[m]                          # 1/(m+delta)**alpha
    pma = math.pow(m + delta, alpha)
    p2ma = math.pow(2 * m + delta, alpha)

    taus[0] = 0.0
    t = 0.0
    n = 1
    si = 0
    rebuild = 0
    rand = rng.random

    if si < n_snap and snapshot_ns[si] == 1:
        for ti in range(n_track):
            v = tracked[ti]
            traces[si, ti] = cnt[v] if v < n else 0
        si += 1

    while n < n_target:
        bsum = 0.0
        for kb in range(m):
            lo = n * lo_unit
            hi = n * hi_unit
            if D < lo * (1.0 - BAND_RTOL) or D > hi * (1.0 + BAND_RTOL):
                raise KernelStateError(
                    f"normalizer band violated: D={D!r} not in [{lo!r}, {hi!r}] at n={n}, k={kb}"
                )
            bsum += 1.0 / D

            x = rand() * D
            acc = 0.0
            v = -1
            last = -1
            for d in range(m, dmax + 1):
                c = counts[d]
                if c == 0:
                    continue
                wd = wtab[d]
                mass = c * wd
                if x < acc + mass:
                    idx = int((x - acc) / wd)
                    if idx >= c:
                        idx = c - 1
                    v = by_deg[bstart[d] + idx]
                    break
                acc += mass
                last = d
            if v < 0:
                v = by_deg[bstart[last] + counts[last] - 1]

            dt = (-math.log1p(-rand())) / D
            t += dt
            intervals[(n - 1) * m + kb] = dt

            d = cnt[v]
            if d + 1 >= DEG_CAP:
                raise KernelStateError("count cap exceeded")
            s = bstart[d]
            p = pos[v]
            w2 = by_deg[s]
            by_deg[s] = v
            by_deg[p] = w2
            pos[v] = s
            pos[w2] = p
            if d == dmax:
                bstart[d + 1] = s
                dmax = d + 1
            bstart[d] = s + 1
            counts[d] -= 1
            counts[d + 1] += 1
            cnt[v] = d + 1
            while wlen <= d + 1:
                wtab[wlen] = math.pow(delta + wlen, -alpha)
                wlen += 1
            D += wtab[d + 1] - wtab[d]

            rebuild += 1
            if rebuild == REBUILD_INTERVAL:
                rebuild = 0
                exact = 0.0
                for dd in range(m, dmax + 1):
                    if counts[dd]:
                        exact += counts[dd] * wtab[dd]
                if abs(exact - D) > NORMALIZER_RTOL * abs(exact):
                    raise KernelStateError(
                        f"normalizer drift: incremental={D!r} exact={exact!r}"
                    )
                D = exact

        blo = m * pma / n
        bhi = m * p2ma / n
        if bsum < blo * (1.0 - BAND_RTOL) or bsum > bhi * (1.0 + BAND_RTOL):
            raise KernelStateError(
                f"compensator band violated: b={bsum!r} not in [{blo!r}, {bhi!r}] at n={n}"
            )
        b[n - 1] = bsum

        # spawn the next process at count m
        cnt[n] = m
        by_deg[n] = n
        pos[n] = n
        counts[m] += 1
        D += wtab[m]
        taus[n] = t
        n += 1
        if si < n_snap and snapshot_ns[si] == n:
            for ti in range(n_track):
                v = tracked[ti]
                traces[si, ti] = cnt[v] if v < n else 0
            si += 1

    return {
        "snap_ns": np.array(snapshot_ns, dtype=np.int64),
        "taus": taus,
        "b": b,
        "intervals": intervals,
        "counts": np.array(cnt, dtype=np.int64),
        "traces": traces,
    }

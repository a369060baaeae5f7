# cython: language_level=3
"""Compiled growth kernels.

Line-for-line port of depref._kernels_py (same arithmetic, same random
stream consumption via the BitGenerator's next_double), so results are
bit-identical across backends.  Compiled with -ffp-contract=off to keep
IEEE semantics aligned with CPython.
"""
import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport log1p, pow
from libc.stdint cimport int64_t
from numpy.random cimport bitgen_t

from ._kernels_py import KernelStateError

cnp.import_array()

BACKEND = "cython"

DEF DEG_CAP = 1024
DEF REBUILD_INTERVAL = 65536
DEF REJECTION_CAP = 1000000

cdef double NORMALIZER_RTOL = 1e-9
cdef double BAND_RTOL = 1e-9

KIND_LINEAR = 0
KIND_INVERSE = 1
SAMPLER_BUCKETED = 0
SAMPLER_REJECTION = 1
SAMPLER_SCAN = 2

cdef const char *CAPSULE_NAME = "BitGenerator"


cdef bitgen_t *_bitgen(object rng) except NULL:
    bit_generator = getattr(rng, "bit_generator", rng)
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("rng does not wrap a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


def grow_graph(int kind, double theta, double alpha, double delta, int64_t m,
               int64_t n_target, object rng, snapshot_ns, tracked,
               int64_t window_start, int sampler):
    """See depref._kernels_py.grow_graph."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef cnp.ndarray[int64_t, ndim=1] snap_arr = np.asarray(snapshot_ns, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] track_arr = np.asarray(tracked, dtype=np.int64)
    cdef int64_t n_snap = snap_arr.shape[0]
    cdef int64_t n_track = track_arr.shape[0]

    cdef cnp.ndarray[int64_t, ndim=1] deg_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] by_deg_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] pos_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] counts_a = np.zeros(DEG_CAP + 2, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] bstart_a = np.zeros(DEG_CAP + 2, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] wtab_a = np.zeros(DEG_CAP + 2, dtype=np.float64)

    cdef cnp.ndarray[int64_t, ndim=2] hists = np.zeros((n_snap, DEG_CAP), dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=2] traces = np.zeros((n_snap, max(n_track, 1)), dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] norms = np.zeros(n_snap, dtype=np.float64)
    cdef cnp.ndarray[int64_t, ndim=1] attach_counts = np.zeros(DEG_CAP, dtype=np.int64)

    cdef int64_t[::1] deg = deg_a
    cdef int64_t[::1] by_deg = by_deg_a
    cdef int64_t[::1] pos = pos_a
    cdef int64_t[::1] counts = counts_a
    cdef int64_t[::1] bstart = bstart_a
    cdef double[::1] wtab = wtab_a
    cdef int64_t[::1] snaps = snap_arr
    cdef int64_t[::1] track = track_arr

    cdef bint inverse = kind == KIND_INVERSE
    cdef int64_t d, dd, c, s, p, w2, v, cand, idx, last, dmax, wlen
    cdef int64_t n, si, rebuild, k, kb, s_int, s_base, ti, it
    cdef double D, wmax, x, acc, wd, mass, w, exact

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

    if inverse:
        for d in range(1, 2 * m + 2):
            wtab[d] = pow(delta + d, -alpha)
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

    if si < n_snap and snaps[si] == 2:
        for dd in range(dmax + 1):
            hists[si, dd] = counts[dd]
        for ti in range(n_track):
            v = track[ti]
            traces[si, ti] = deg[v] if v < n else 0
        norms[si] = D if inverse else n * theta - alpha
        si += 1

    while n < n_target:
        s_base = (2 * n - 1) * m
        for k in range(m):
            s_int = k + s_base
            # -- draw the target
            if sampler == 0:  # bucketed
                if inverse:
                    x = bg.next_double(bg.state) * D
                else:
                    x = bg.next_double(bg.state) * (n * theta - alpha)
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
                        idx = <int64_t>((x - acc) / wd)
                        if idx >= c:
                            idx = c - 1
                        v = by_deg[bstart[d] + idx]
                        break
                    acc += mass
                    last = d
                if v < 0:
                    v = by_deg[bstart[last] + counts[last] - 1]
            elif sampler == 1:  # rejection
                v = -1
                for it in range(REJECTION_CAP):
                    cand = <int64_t>(bg.next_double(bg.state) * n)
                    if cand >= n:
                        cand = n - 1
                    d = deg[cand]
                    w = wtab[d] if inverse else theta - (alpha * d) / s_int
                    if bg.next_double(bg.state) * wmax < w:
                        v = cand
                        break
                if v < 0:
                    raise KernelStateError("rejection sampler exceeded its proposal cap")
            else:  # exact scan
                if inverse:
                    x = bg.next_double(bg.state) * D
                else:
                    x = bg.next_double(bg.state) * (n * theta - alpha)
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
                    wtab[wlen] = pow(delta + wlen, -alpha)
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
        if si < n_snap and snaps[si] == n:
            for dd in range(dmax + 1):
                hists[si, dd] = counts[dd]
            for ti in range(n_track):
                v = track[ti]
                traces[si, ti] = deg[v] if v < n else 0
            norms[si] = D if inverse else n * theta - alpha
            si += 1

    return {
        "snap_ns": snap_arr,
        "degrees": deg_a,
        "hists": hists[:, : dmax + 1].copy(),
        "traces": traces[:, :n_track],
        "normalizers": norms,
        "attach_counts": attach_counts[: dmax + 1].copy(),
        "final_normalizer": D if inverse else n * theta - alpha,
    }


def birth_jump_times(double alpha, double delta, int64_t m0, int64_t max_jumps,
                     double max_time, object rng):
    """See depref._kernels_py.birth_jump_times."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef int64_t cap = min(max_jumps, 1 << 20)
    cdef cnp.ndarray[double, ndim=1] times_a = np.empty(cap, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] grown
    cdef double[::1] times = times_a
    cdef double t = 0.0
    cdef int64_t count = m0
    cdef int64_t j
    for j in range(max_jumps):
        t += pow(count + delta, alpha) * (-log1p(-bg.next_double(bg.state)))
        if t > max_time:
            return times_a[:j].copy()
        if j == cap:
            cap = min(max_jumps, cap * 2)
            grown = np.empty(cap, dtype=np.float64)
            grown[:j] = times_a[:j]
            times_a = grown
            times = times_a
        times[j] = t
        count += 1
    return times_a


def cmj_grow_core(double alpha, double delta, int64_t n_target, object rng):
    """See depref._kernels_py.cmj_grow_core."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef cnp.ndarray[int64_t, ndim=1] parents_a = np.empty(n_target, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] btimes_a = np.empty(n_target, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] taus_a = np.empty(n_target, dtype=np.float64)
    cdef cnp.ndarray[int64_t, ndim=1] degs_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] by_deg_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] pos_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] counts_a = np.zeros(DEG_CAP + 2, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] bstart_a = np.zeros(DEG_CAP + 2, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] wtab_a = np.zeros(DEG_CAP + 2, dtype=np.float64)

    cdef int64_t[::1] parents = parents_a
    cdef double[::1] btimes = btimes_a
    cdef double[::1] taus = taus_a
    cdef int64_t[::1] degs = degs_a
    cdef int64_t[::1] by_deg = by_deg_a
    cdef int64_t[::1] pos = pos_a
    cdef int64_t[::1] counts = counts_a
    cdef int64_t[::1] bstart = bstart_a
    cdef double[::1] wtab = wtab_a

    cdef int64_t d, dd, c, s, p, w2, v, idx, last, dmax, wlen, n, rebuild
    cdef double D, x, acc, wd, mass, exact, t

    wtab[1] = pow(delta + 1, -alpha)
    wtab[2] = pow(delta + 2, -alpha)
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

    while n < n_target:
        x = bg.next_double(bg.state) * D
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
                idx = <int64_t>((x - acc) / wd)
                if idx >= c:
                    idx = c - 1
                v = by_deg[bstart[d] + idx]
                break
            acc += mass
            last = d
        if v < 0:
            v = by_deg[bstart[last] + counts[last] - 1]

        t += (-log1p(-bg.next_double(bg.state))) / D

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
            wtab[wlen] = pow(delta + wlen, -alpha)
            wlen += 1
        D += wtab[d + 1] - wtab[d]

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
        "parents": parents_a,
        "birth_times": btimes_a,
        "taus": taus_a,
        "degrees": degs_a,
    }


def ak_grow_core(double alpha, double delta, int64_t m, int64_t n_target,
                 object rng, snapshot_ns, tracked):
    """See depref._kernels_py.ak_grow_core."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef cnp.ndarray[int64_t, ndim=1] snap_arr = np.asarray(snapshot_ns, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] track_arr = np.asarray(tracked, dtype=np.int64)
    cdef int64_t n_snap = snap_arr.shape[0]
    cdef int64_t n_track = track_arr.shape[0]

    cdef cnp.ndarray[double, ndim=1] taus_a = np.empty(n_target, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] b_a = np.empty(n_target - 1, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] intervals_a = np.empty((n_target - 1) * m, dtype=np.float64)
    cdef cnp.ndarray[int64_t, ndim=2] traces = np.zeros((n_snap, max(n_track, 1)), dtype=np.int64)

    cdef cnp.ndarray[int64_t, ndim=1] cnt_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] by_deg_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] pos_a = np.zeros(n_target, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] counts_a = np.zeros(DEG_CAP + 2, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] bstart_a = np.zeros(DEG_CAP + 2, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] wtab_a = np.zeros(DEG_CAP + 2, dtype=np.float64)

    cdef double[::1] taus = taus_a
    cdef double[::1] b = b_a
    cdef double[::1] intervals = intervals_a
    cdef int64_t[::1] cnt = cnt_a
    cdef int64_t[::1] by_deg = by_deg_a
    cdef int64_t[::1] pos = pos_a
    cdef int64_t[::1] counts = counts_a
    cdef int64_t[::1] bstart = bstart_a
    cdef double[::1] wtab = wtab_a
    cdef int64_t[::1] snaps = snap_arr
    cdef int64_t[::1] track = track_arr

    cdef int64_t d, dd, c, s, p, w2, v, idx, last, dmax, wlen
    cdef int64_t n, si, rebuild, kb, ti
    cdef double D, x, acc, wd, mass, exact, t, dt, bsum
    cdef double lo, hi, blo, bhi, lo_unit, hi_unit, pma, p2ma

    for d in range(m, 2 * m + 2):
        wtab[d] = pow(delta + d, -alpha)
    wlen = 2 * m + 2
    cnt[0] = m
    by_deg[0] = 0
    pos[0] = 0
    counts[m] = 1
    bstart[m] = 0
    dmax = m
    D = wtab[m]

    lo_unit = pow(2 * m + delta, -alpha)
    hi_unit = wtab[m]
    pma = pow(m + delta, alpha)
    p2ma = pow(2 * m + delta, alpha)

    taus[0] = 0.0
    t = 0.0
    n = 1
    si = 0
    rebuild = 0

    if si < n_snap and snaps[si] == 1:
        for ti in range(n_track):
            v = track[ti]
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

            x = bg.next_double(bg.state) * D
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
                    idx = <int64_t>((x - acc) / wd)
                    if idx >= c:
                        idx = c - 1
                    v = by_deg[bstart[d] + idx]
                    break
                acc += mass
                last = d
            if v < 0:
                v = by_deg[bstart[last] + counts[last] - 1]

            dt = (-log1p(-bg.next_double(bg.state))) / D
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
                wtab[wlen] = pow(delta + wlen, -alpha)
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

        cnt[n] = m
        by_deg[n] = n
        pos[n] = n
        counts[m] += 1
        D += wtab[m]
        taus[n] = t
        n += 1
        if si < n_snap and snaps[si] == n:
            for ti in range(n_track):
                v = track[ti]
                traces[si, ti] = cnt[v] if v < n else 0
            si += 1

    return {
        "snap_ns": snap_arr,
        "taus": taus_a,
        "b": b_a,
        "intervals": intervals_a,
        "counts": cnt_a,
        "traces": traces[:, :n_track],
    }

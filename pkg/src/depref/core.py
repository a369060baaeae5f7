"""Discrete-time growth of the de-preferential graph sequence G_n.

Vertices are indexed from 0; vertex 0 carries the seed half edge, so the
two-vertex seed has degrees (2m, m) and the degree sum is (2n-1)m at every
settled state.  While the arriving vertex has attached k of its m half
edges, the degrees of the n existing vertices sum to k + (2n-1)m.

The state keeps vertices grouped in contiguous blocks by degree (largest
degree first).  A degree increment swaps the vertex to its block boundary
and shifts the boundary, and an arriving vertex appends at the end (degree
m is always the minimum), so every update is O(1) and class members stay
exchangeable under uniform within-class picks.
"""
import math

from .params import ModelParams, LINEAR, ParameterError

# Half-edge attachments between exact rebuilds of the incremental
# inverse-model normalizer, and the relative drift that flags corruption.
NORMALIZER_REBUILD_INTERVAL = 1 << 16
NORMALIZER_RTOL = 1e-9

# Hard ceiling on any vertex degree; max degree grows like log n for both
# models, so hitting this indicates state corruption, not a big run.
DEGREE_CAP = 1024


class InternalStateError(RuntimeError):
    """Graph bookkeeping failed a consistency check (indicates a bug)."""


class AttachmentEvent:
    """One half edge choosing its target.

    arriving_vertex: index of the vertex being wired in.
    half_edge_index: which of its m half edges (0-based).
    target: chosen existing vertex.
    target_degree_before: target's degree when the edge arrived.
    """

    __slots__ = ("arriving_vertex", "half_edge_index", "target", "target_degree_before")

    def __init__(self, arriving_vertex, half_edge_index, target, target_degree_before):
        self.arriving_vertex = arriving_vertex
        self.half_edge_index = half_edge_index
        self.target = target
        self.target_degree_before = target_degree_before

    def __repr__(self):
        return (
            f"AttachmentEvent(arriving_vertex={self.arriving_vertex}, "
            f"half_edge_index={self.half_edge_index}, target={self.target}, "
            f"target_degree_before={self.target_degree_before})"
        )

    def __eq__(self, other):
        return isinstance(other, AttachmentEvent) and (
            self.arriving_vertex,
            self.half_edge_index,
            self.target,
            self.target_degree_before,
        ) == (
            other.arriving_vertex,
            other.half_edge_index,
            other.target,
            other.target_degree_before,
        )


class GraphState:
    """Mutable growth state: degrees, degree-class histogram, normalizer.

    Not built directly; use init_graph().
    """

    def __init__(self, params):
        self.params = params
        m = params.m
        self.n = 2
        self.k = 0
        self.degrees = [2 * m, m]
        self.total_degree = 3 * m

        # degree-class blocks, largest degree first
        self.by_deg = [0, 1]
        self.pos = [0, 1]
        self.counts = [0] * (DEGREE_CAP + 2)
        self.bstart = [0] * (DEGREE_CAP + 2)
        self.counts[2 * m] = 1
        self.counts[m] = 1
        self.bstart[2 * m] = 0
        for d in range(m, 2 * m):
            self.bstart[d] = 1
        self.dmax = 2 * m

        # inverse-model normalizer, maintained incrementally
        self._wtab = [0.0] * (DEGREE_CAP + 2)
        if not params.is_linear:
            for d in range(1, 2 * m + 2):
                self._wtab[d] = math.pow(params.delta + d, -params.alpha)
            self._wlen = 2 * m + 2
            self.D = self._wtab[2 * m] + self._wtab[m]
        else:
            self._wlen = 0
            self.D = 0.0
        self._attach_count = 0

    # -- weights ---------------------------------------------------------

    def weight_of_degree(self, d):
        """Unnormalized attachment weight of a degree-d vertex right now."""
        p = self.params
        if p.is_linear:
            s = self.k + (2 * self.n - 1) * p.m
            return p.theta - (p.alpha * d) / s
        return self._w(d)

    def _w(self, d):
        if d >= self._wlen:
            p = self.params
            for dd in range(self._wlen, d + 1):
                self._wtab[dd] = math.pow(p.delta + dd, -p.alpha)
            self._wlen = d + 1
        return self._wtab[d]

    def normalizer_exact(self):
        """Normalizer rebuilt from the degree-class histogram."""
        p = self.params
        if p.is_linear:
            return self.n * p.theta - p.alpha
        total = 0.0
        for d in range(p.m, self.dmax + 1):
            c = self.counts[d]
            if c:
                total += c * self._w(d)
        return total

    @property
    def degree_hist(self):
        """Map degree -> vertex count (only nonzero classes)."""
        return {d: self.counts[d] for d in range(self.params.m, self.dmax + 1) if self.counts[d]}

    @property
    def step_index(self):
        """Index of the arriving vertex (== current vertex count)."""
        return self.n

    # -- mutation --------------------------------------------------------

    def _increment(self, v):
        """Move vertex v from degree class d to d+1 in O(1)."""
        d = self.degrees[v]
        if d + 1 >= DEGREE_CAP:
            raise InternalStateError(f"degree cap {DEGREE_CAP} exceeded at vertex {v}")
        s = self.bstart[d]
        p = self.pos[v]
        w = self.by_deg[s]
        self.by_deg[s] = v
        self.by_deg[p] = w
        self.pos[v] = s
        self.pos[w] = p
        if d == self.dmax:
            self.bstart[d + 1] = s
            self.dmax = d + 1
        self.bstart[d] = s + 1
        self.counts[d] -= 1
        self.counts[d + 1] += 1
        self.degrees[v] = d + 1
        if not self.params.is_linear:
            self.D += self._w(d + 1) - self._w(d)

    def _attach_half_edge(self, target):
        self._increment(target)
        self.k += 1
        self.total_degree += 1
        self._attach_count += 1
        if (
            not self.params.is_linear
            and self._attach_count % NORMALIZER_REBUILD_INTERVAL == 0
        ):
            self._rebuild_normalizer()
        assert self.total_degree == self.k + (2 * self.n - 1) * self.params.m

    def _settle_arrival(self):
        m = self.params.m
        v = self.n
        self.degrees.append(m)
        self.by_deg.append(v)
        self.pos.append(v)
        self.counts[m] += 1
        self.n += 1
        self.k = 0
        self.total_degree += m
        if not self.params.is_linear:
            self.D += self._w(m)

    def _rebuild_normalizer(self):
        exact = self.normalizer_exact()
        if abs(exact - self.D) > NORMALIZER_RTOL * abs(exact):
            raise InternalStateError(
                f"incremental normalizer drifted: incremental={self.D!r} exact={exact!r}"
            )
        self.D = exact

    def clone(self):
        """Deep copy; used by the exact chain-law enumeration."""
        other = GraphState.__new__(GraphState)
        other.params = self.params
        other.n = self.n
        other.k = self.k
        other.degrees = self.degrees[:]
        other.total_degree = self.total_degree
        other.by_deg = self.by_deg[:]
        other.pos = self.pos[:]
        other.counts = self.counts[:]
        other.bstart = self.bstart[:]
        other.dmax = self.dmax
        other._wtab = self._wtab[:]
        other._wlen = self._wlen
        other.D = self.D
        other._attach_count = self._attach_count
        return other

    def check_consistency(self):
        """Full structural audit; raises InternalStateError on any breach."""
        m = self.params.m
        if self.total_degree != self.k + (2 * self.n - 1) * m:
            raise InternalStateError("degree sum identity violated")
        if sum(self.degrees) != self.total_degree:
            raise InternalStateError("total_degree out of sync with degrees")
        hist = {}
        for d in self.degrees:
            hist[d] = hist.get(d, 0) + 1
        if hist != self.degree_hist:
            raise InternalStateError("degree histogram out of sync")
        for v in range(self.n):
            if self.by_deg[self.pos[v]] != v:
                raise InternalStateError("position index out of sync")
            d = self.degrees[v]
            lo = self.bstart[d]
            if not (lo <= self.pos[v] < lo + self.counts[d]):
                raise InternalStateError("vertex outside its degree block")
        if not self.params.is_linear:
            exact = self.normalizer_exact()
            if abs(exact - self.D) > NORMALIZER_RTOL * abs(exact):
                raise InternalStateError("incremental normalizer drifted")


def init_graph(params):
    """The unique two-vertex seed: degrees (2m, m), degree sum 3m."""
    if not isinstance(params, ModelParams):
        raise ParameterError(f"expected ModelParams, got {type(params).__name__}")
    return GraphState(params)


def attachment_weight(params, d, n, k=0):
    """Unnormalized attachment weight of a degree-d vertex in state (n, k)."""
    if d < 1:
        raise ParameterError(f"degrees start at 1, got {d}")
    if n < 2:
        raise ParameterError(f"graphs start at n = 2, got {n}")
    if not 0 <= k <= params.m - 1:
        raise ParameterError(f"half-edge index must be in [0, m-1], got {k}")
    if params.is_linear:
        return params.theta - (params.alpha * d) / (k + (2 * n - 1) * params.m)
    return math.pow(params.delta + d, -params.alpha)


def normalizer(params, state):
    """Current normalizing constant (sum of all attachment weights).

    Linear: exactly n*theta - alpha, an identity of the weight formula.
    Inverse: the incrementally maintained D, audited here against an exact
    rebuild; drift beyond 1e-9 relative raises InternalStateError.
    """
    if params.is_linear:
        return state.n * params.theta - params.alpha
    exact = state.normalizer_exact()
    if abs(exact - state.D) > NORMALIZER_RTOL * abs(exact):
        raise InternalStateError(
            f"incremental normalizer drifted: incremental={state.D!r} exact={exact!r}"
        )
    return state.D


def grow_step(state, rng, sampler=None):
    """Wire in one arriving vertex: m sequential half edges, degrees updated
    between draws.  Returns (state, [AttachmentEvent] * m); state is mutated.
    """
    if state.k != 0:
        raise ParameterError("grow_step needs a settled state (k = 0)")
    if sampler is None:
        from .samplers import sample_target_bucketed

        sampler = sample_target_bucketed
    params = state.params
    arriving = state.n
    events = []
    for k in range(params.m):
        target = sampler(state, params, rng)
        events.append(AttachmentEvent(arriving, k, target, state.degrees[target]))
        state._attach_half_edge(target)
    state._settle_arrival()
    return state, events


def grow_to(state, n_target, rng, observers=(), sampler=None):
    """Grow to n_target vertices, feeding observers along the way.

    Observers get on_event(state, event) for every half edge and
    on_snapshot(state) at settled sizes on the log-uniform snapshot grid
    (plus n_target itself).
    """
    if n_target < state.n:
        raise ParameterError(f"n_target={n_target} below current size {state.n}")
    grid = [n for n in snapshot_grid(n_target) if n >= state.n]
    gi = 0
    if gi < len(grid) and grid[gi] == state.n:
        for obs in observers:
            obs.on_snapshot(state)
        gi += 1
    while state.n < n_target:
        _, events = grow_step(state, rng, sampler=sampler)
        for obs in observers:
            for ev in events:
                obs.on_event(state, ev)
        if gi < len(grid) and state.n == grid[gi]:
            for obs in observers:
                obs.on_snapshot(state)
            gi += 1
    return state


def snapshot_grid(n_target, extras=()):
    """Log-uniform snapshot sizes ceil(2**(j/2)) up to and including n_target."""
    if n_target < 2:
        raise ParameterError(f"n_target must be >= 2, got {n_target}")
    grid = {n_target}
    j = 2
    while True:
        n = math.ceil(2.0 ** (j / 2.0))
        if n > n_target:
            break
        grid.add(n)
        j += 1
    for e in extras:
        if 2 <= e <= n_target:
            grid.add(int(e))
    return sorted(grid)


# -- observers -----------------------------------------------------------


class Observer:
    """Base observer; subclasses override what they care about."""

    def on_event(self, state, event):
        pass

    def on_snapshot(self, state):
        pass


class FixedVertexTrace(Observer):
    """(n, degree of one fixed vertex) at each snapshot."""

    def __init__(self, vertex):
        self.vertex = vertex
        self.samples = []

    def on_snapshot(self, state):
        if self.vertex < state.n:
            self.samples.append((state.n, state.degrees[self.vertex]))


class NormalizerTrace(Observer):
    """(n, normalizer) at each snapshot."""

    def __init__(self):
        self.samples = []

    def on_snapshot(self, state):
        self.samples.append((state.n, normalizer(state.params, state)))


class HistogramSnapshots(Observer):
    """(n, degree histogram dict) at each snapshot."""

    def __init__(self):
        self.snaps = []

    def on_snapshot(self, state):
        self.snaps.append((state.n, dict(state.degree_hist)))


class EventWindowLog(Observer):
    """Collect attachment events once the graph has reached window_start."""

    def __init__(self, window_start=0):
        self.window_start = window_start
        self.events = []

    def on_event(self, state, event):
        if event.arriving_vertex >= self.window_start:
            self.events.append(event)

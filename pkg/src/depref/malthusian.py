"""Malthusian parameter of the inverse-power attachment law.

A vertex of current degree d waits an exponential time with rate
(d + delta)**(-alpha) before its next birth.  The expected Laplace
transform of that birth point process is

    rho_hat(lam) = sum_{n>=1} prod_{i=0}^{n-1} 1 / ((i+delta+1)**alpha * lam + 1)

which is strictly decreasing in lam on (0, inf); its unique root lambda*
(rho_hat(lambda*) = 1) drives every growth constant of the inverse model.
The limiting degree distribution and its summary statistics are expressed
through lambda* as well.
"""
import math
from dataclasses import dataclass, field

__all__ = [
    "RhoHatEval",
    "MalthusianResult",
    "LimitPmf",
    "PmfStats",
    "SweepRow",
    "SolverError",
    "rho_hat",
    "solve_lambda_star",
    "lambda_star_sweep",
    "limit_degree_pmf",
    "pmf_stats",
    "growth_constant",
]

LAMBDA_MIN = 1e-12
LAMBDA_MAX = 1e12
MAX_TERMS = 50_000_000
MAX_BISECTIONS = 400


class SolverError(RuntimeError):
    """Root finding for lambda* failed (bracket escaped the clamp window)."""


@dataclass(frozen=True)
class RhoHatEval:
    """A truncated evaluation of rho_hat with a certified tail bound.

    value underestimates the full series by at most tail_bound, except when
    the evaluation was cut off early by `cutoff` (then tail_bound is inf and
    value is only a lower bound).
    """

    value: float
    truncation_depth: int
    tail_bound: float
    lam: float
    alpha: float
    delta: float


@dataclass(frozen=True)
class MalthusianResult:
    lambda_star: float
    residual: float
    bracket: tuple
    iterations: int
    alpha: float
    delta: float


@dataclass(frozen=True)
class LimitPmf:
    """Limiting degree distribution p_k of the inverse model (m = 1).

    p_k = (k+delta)**alpha * ls / ((k+delta)**alpha * ls + 1)
          * prod_{i=1}^{k-1} 1 / ((i+delta)**alpha * ls + 1)

    probabilities[k-1] holds p_k for k = 1..truncation; tail_bound is the
    exact mass beyond the truncation (the tail product).
    """

    probabilities: tuple
    truncation: int
    tail_bound: float
    alpha: float
    delta: float
    lambda_star: float

    def prob(self, k):
        if k < 1:
            raise ValueError(f"degrees start at 1, got k={k}")
        if k <= self.truncation:
            return self.probabilities[k - 1]
        return 0.0

    def tail_mass(self, n):
        """Exact closed form for sum_{k>=n} p_k (a product over i < n)."""
        ls = self.lambda_star
        out = 1.0
        for i in range(1, n):
            out /= (i + self.delta) ** self.alpha * ls + 1.0
        return out


@dataclass(frozen=True)
class PmfStats:
    mean: float
    mode: int
    tail_ratio_series: tuple  # (n, ratio) with ratio = tail(n+1)/tail(n)


@dataclass
class SweepRow:
    alpha: float
    delta: float
    lambda_star: float = math.nan
    residual: float = math.nan
    error: str = field(default="")


def rho_hat(lam, alpha, delta, eps=1e-14, cutoff=None):
    """Evaluate rho_hat(lam) by summing products until the tail is < eps.

    The factors f_i = 1/((i+delta+1)**alpha * lam + 1) decrease in i, so
    after the N-th term the dropped tail is at most term_N * f/(1-f) with
    f the next factor; that certified bound drives the truncation.

    cutoff, if given, stops the summation as soon as the partial sum
    exceeds it (useful when only the sign of rho_hat - 1 matters near
    lam -> 0 where the series needs ~lam**(-1/alpha) terms).  A cutoff
    exit reports tail_bound = inf.
    """
    if not lam > 0:
        raise ValueError(f"rho_hat needs lam > 0 (the series diverges at 0), got {lam}")
    if not alpha > 0:
        raise ValueError(f"rho_hat needs alpha > 0, got {alpha}")
    if not delta > -1:
        raise ValueError(f"rho_hat needs delta > -1, got {delta}")
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")

    total = 0.0
    term = 1.0
    n = 0
    while True:
        term /= (n + delta + 1.0) ** alpha * lam + 1.0
        total += term
        n += 1
        if cutoff is not None and total >= cutoff:
            return RhoHatEval(total, n, math.inf, lam, alpha, delta)
        f = 1.0 / ((n + delta + 1.0) ** alpha * lam + 1.0)
        tail = term * f / (1.0 - f)
        if tail < eps:
            return RhoHatEval(total, n, tail, lam, alpha, delta)
        if n >= MAX_TERMS:
            raise SolverError(
                f"rho_hat did not converge within {MAX_TERMS} terms "
                f"(lam={lam}, alpha={alpha}, delta={delta})"
            )


def solve_lambda_star(alpha, delta, tol=1e-12):
    """Find the unique root of rho_hat(lam) = 1 by bracketing + bisection.

    The bracket grows geometrically from lam = 1 until rho_hat straddles 1,
    then bisection runs until |rho_hat(mid) - 1| <= tol.  rho_hat itself is
    evaluated with eps = tol/10 so evaluation noise cannot fake convergence.
    Deterministic: same inputs give the bitwise-identical result.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    eps = tol / 10.0

    def f(lam):
        # cutoff 4.0: far below the root the exact value is irrelevant,
        # only the fact that it exceeds 1.
        return rho_hat(lam, alpha, delta, eps=eps, cutoff=4.0).value

    lo = hi = 1.0
    v = f(1.0)
    iters = 1
    if abs(v - 1.0) <= tol:
        return MalthusianResult(1.0, abs(v - 1.0), (1.0, 1.0), iters, alpha, delta)
    if v > 1.0:
        while True:
            hi *= 2.0
            if hi > LAMBDA_MAX:
                raise SolverError(f"no root below {LAMBDA_MAX} (alpha={alpha}, delta={delta})")
            v = f(hi)
            iters += 1
            if v < 1.0:
                break
        lo = hi / 2.0
    else:
        while True:
            lo /= 2.0
            if lo < LAMBDA_MIN:
                raise SolverError(f"no root above {LAMBDA_MIN} (alpha={alpha}, delta={delta})")
            v = f(lo)
            iters += 1
            if v > 1.0:
                break
        hi = lo * 2.0

    bracket = (lo, hi)
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        v = f(mid)
        iters += 1
        if abs(v - 1.0) <= tol:
            return MalthusianResult(mid, abs(v - 1.0), bracket, iters, alpha, delta)
        if v > 1.0:
            lo = mid
        else:
            hi = mid
    raise SolverError(
        f"bisection stalled without reaching tol={tol} (alpha={alpha}, delta={delta})"
    )


def lambda_star_sweep(alpha_grid, delta_grid, tol=1e-12):
    """Solve lambda* on a parameter grid; rows in row-major (alpha outer) order.

    Per-cell solver failures are recorded in the row's error field instead
    of aborting the sweep.
    """
    alphas = list(alpha_grid)
    deltas = list(delta_grid)
    if not alphas or not deltas:
        raise ValueError("sweep grids must be nonempty")
    rows = []
    for a in alphas:
        for d in deltas:
            row = SweepRow(alpha=a, delta=d)
            try:
                res = solve_lambda_star(a, d, tol=tol)
                row.lambda_star = res.lambda_star
                row.residual = res.residual
            except (SolverError, ValueError) as exc:
                row.error = str(exc)
            rows.append(row)
    return rows


def limit_degree_pmf(alpha, delta, eps=1e-12, lambda_star=None):
    """Limiting degree pmf of the inverse model, truncated at tail mass < eps.

    The tail identity sum_{k>=n} p_k = prod_{i<n} 1/((i+delta)**alpha ls + 1)
    gives the exact dropped mass, so the truncation is certified.
    """
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if lambda_star is None:
        lambda_star = solve_lambda_star(alpha, delta).lambda_star
    ls = lambda_star
    probs = []
    tail = 1.0  # sum_{j>=k} p_j before emitting p_k
    k = 1
    while tail >= eps:
        w = (k + delta) ** alpha * ls
        probs.append(tail * w / (w + 1.0))
        tail /= w + 1.0
        k += 1
    return LimitPmf(tuple(probs), k - 1, tail, alpha, delta, ls)


def pmf_stats(pmf):
    """Mean, mode and tail-ratio decay witness of a LimitPmf.

    mean adds a certified correction for the truncated tail:
    sum_{k>K} k p_k = (K+1) tail(K+1) + sum_{k>=K+2} tail(k), with the
    trailing sum carried out until it is negligible.
    """
    probs = pmf.probabilities
    k_arr = range(1, pmf.truncation + 1)
    mean = math.fsum(k * p for k, p in zip(k_arr, probs))

    ls = pmf.lambda_star
    tail = pmf.tail_bound  # tail(K+1)
    corr = (pmf.truncation + 1) * tail
    k = pmf.truncation + 1
    while tail > 1e-30:
        tail /= (k + pmf.delta) ** pmf.alpha * ls + 1.0
        corr += tail
        k += 1
    mean += corr

    mode = 1 + max(range(len(probs)), key=probs.__getitem__)
    ratios = tuple(
        (n, 1.0 / ((n + pmf.delta) ** pmf.alpha * ls + 1.0))
        for n in range(1, pmf.truncation + 1)
    )
    return PmfStats(mean=mean, mode=mode, tail_ratio_series=ratios)


def growth_constant(alpha, lambda_star):
    """((1+alpha)/lambda*)**(1/(1+alpha)): the fixed-vertex degree growth
    constant of the inverse model with m = 1."""
    return ((1.0 + alpha) / lambda_star) ** (1.0 / (1.0 + alpha))


def attachment_limit_pmf(alpha, delta, eps=1e-12, lambda_star=None):
    """Limiting law of the target degree of a late attachment (m = 1):
    q_k = prod_{i=1}^{k} 1/((i+delta)**alpha * lambda* + 1), as a dict.

    Sums to 1 (q_k equals the degree pmf's tail mass at k+1, and those
    tails sum to rho_hat(lambda*) = 1); truncated once q_k < eps.
    """
    if lambda_star is None:
        lambda_star = solve_lambda_star(alpha, delta).lambda_star
    out = {}
    q = 1.0
    k = 1
    while True:
        q /= (k + delta) ** alpha * lambda_star + 1.0
        if q < eps:
            break
        out[k] = q
        k += 1
    return out

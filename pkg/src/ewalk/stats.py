"""Finite-shot measurement sampling and exact binomial confidence intervals.

Sampling uses one numpy PCG64 stream per CountsRecord with a fixed draw
discipline: the first `shots` uniforms pick sites by inverse-CDF lookup, the
next `shots` uniforms decide retrieval success. Lost shots are excluded from
the interval denominator (post-selection on retrieval).

Clopper-Pearson bounds are solved by bisection on the exact binomial CDF
(log-domain binomial coefficients), absolute tolerance 1e-9 on p, at most
200 iterations. The standard beta-quantile characterization is used only in
tests, as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DomainError
from .states import SiteWindow

__all__ = [
    "CountsRecord",
    "IntervalEstimate",
    "sample_measurements",
    "clopper_pearson",
    "empirical_distribution",
]

RNG_NAME = "pcg64"


@dataclass(frozen=True)
class CountsRecord:
    """Per-site detection counts out of `shots` attempts; `lost` failed retrieval."""

    window: SiteWindow
    counts: np.ndarray
    shots: int
    lost: int

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.shape != (self.window.size,):
            raise DomainError("counts array must match the window size")
        if counts.min() < 0 or self.lost < 0:
            raise DomainError("counts and lost must be non-negative")
        if int(counts.sum()) + self.lost != self.shots:
            raise DomainError("counts + lost must equal shots")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def retained(self):
        return self.shots - self.lost


@dataclass(frozen=True)
class IntervalEstimate:
    p_hat: float
    lower: float
    upper: float
    confidence: float


def sample_measurements(dist, shots, seed, detect_eff):
    """Draw `shots` site measurements from dist; deterministic given seed."""
    if shots < 1:
        raise DomainError("shots must be >= 1")
    if not 0.0 < detect_eff <= 1.0:
        raise DomainError("detect_eff must be in (0, 1]")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    cdf = np.cumsum(dist.p)
    sites = np.searchsorted(cdf, rng.random(shots), side="right")
    np.clip(sites, 0, dist.window.size - 1, out=sites)
    detected = rng.random(shots) < detect_eff
    counts = np.bincount(sites[detected], minlength=dist.window.size)
    lost = int(shots - detected.sum())
    return CountsRecord(dist.window, counts, int(shots), lost)


# ---------------------------------------------------------------------------
# Clopper-Pearson
# ---------------------------------------------------------------------------

def _log_binom_coeffs(n):
    i = np.arange(n + 1, dtype=float)
    return gammaln(n + 1.0) - gammaln(i + 1.0) - gammaln(n - i + 1.0)


def _binom_tail(ks, n, p, log_coeffs):
    # sum of pmf over the index array ks at success probability p in (0, 1)
    logp = np.log(p)
    log1mp = np.log1p(-p)
    return float(np.exp(logsumexp(log_coeffs[ks] + ks * logp + (n - ks) * log1mp)))


def _bisect(f, target, increasing):
    # solve f(p) = target for p in (0, 1); f monotone in the stated direction
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if hi - lo <= 1e-9:
            break
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if (val < target) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def clopper_pearson(k, n, confidence):
    """Exact equal-tail binomial interval for k successes in n trials.

    lower solves P(X >= k; n, p) = alpha/2 (0 when k = 0); upper solves
    P(X <= k; n, p) = alpha/2 (1 when k = n).
    """
    if int(k) != k or int(n) != n:
        raise DomainError("k and n must be integers")
    k, n = int(k), int(n)
    if n < 1 or not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n with n >= 1, got k={k}, n={n}")
    if not 0.0 < confidence < 1.0:
        raise DomainError("confidence must be in (0, 1)")
    alpha = 1.0 - confidence
    log_coeffs = _log_binom_coeffs(n)
    upper_ks = np.arange(k, n + 1)
    lower_ks = np.arange(0, k + 1)
    if k == 0:
        lower = 0.0
    else:
        # P(X >= k; p) increases from 0 to 1 in p
        lower = _bisect(lambda p: _binom_tail(upper_ks, n, p, log_coeffs),
                        alpha / 2.0, increasing=True)
    if k == n:
        upper = 1.0
    else:
        # P(X <= k; p) decreases from 1 to 0 in p
        upper = _bisect(lambda p: _binom_tail(lower_ks, n, p, log_coeffs),
                        alpha / 2.0, increasing=False)
    return IntervalEstimate(k / n, lower, upper, float(confidence))


def empirical_distribution(counts, confidence):
    """Per-site estimates with Clopper-Pearson intervals, n = retained shots."""
    n = int(counts.counts.sum())
    if n < 1:
        raise DomainError("no retained shots; cannot form estimates")
    cache = {}
    out = []
    for k in counts.counts:
        k = int(k)
        if k not in cache:
            cache[k] = clopper_pearson(k, n, confidence)
        out.append(cache[k])
    return out

"""Observables and experiment-level analyses.

Position distributions and their moments, return probabilities (revivals),
time averages, two-sided-exponential localization fits, total-variation
distance, field discrimination, and continued-fraction convergents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import WalkParams, evolve, evolve_density, _reduce_angle
from .errors import DomainError, FitError
from .states import DensityState, SiteWindow, SpinorState, density_from_pure, new_localized

__all__ = [
    "Distribution",
    "ExpFitResult",
    "WidthSeries",
    "DiscriminationReport",
    "position_distribution",
    "rms_width",
    "return_probability",
    "time_averaged_distribution",
    "fit_two_sided_exponential",
    "width_series",
    "tv_distance",
    "distinguishing_steps",
    "convergents",
]


@dataclass(frozen=True)
class Distribution:
    """Position probabilities over a window; step is the walk step it belongs
    to (None for aggregates such as time averages)."""

    window: SiteWindow
    p: np.ndarray
    step: int | None = 0

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.shape != (self.window.size,):
            raise DomainError("probability array must match the window size")
        if p.min() < -1e-10:
            raise DomainError(f"negative probability {p.min():.3e}")
        p[p < 0.0] = 0.0  # clip rounding dust
        if abs(p.sum() - 1.0) > 1e-8:
            raise DomainError(f"probabilities sum to {p.sum()}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    def probability_at(self, x):
        return float(self.p[self.window.index_of(x)])


@dataclass(frozen=True)
class ExpFitResult:
    """Two-sided exponential fit p(x) ~ amplitude * exp(-|x|/xi)."""

    xi: float
    amplitude: float
    r_squared: float


@dataclass(frozen=True)
class WidthSeries:
    steps: np.ndarray
    widths: np.ndarray


@dataclass(frozen=True)
class DiscriminationReport:
    """How many steps are needed to tell two fields apart.

    heuristic_steps = ceil(1 / |delta phi|); empirical_steps is the first
    step where the total-variation distance between the two evolutions
    reaches the threshold (None if it never does within the cap).
    """

    heuristic_steps: int
    empirical_steps: int | None
    tv_curve: np.ndarray
    threshold: float


# ---------------------------------------------------------------------------
# distributions and moments
# ---------------------------------------------------------------------------

def position_distribution(state, step=0):
    """P(x) = |up|^2 + |down|^2 for pure states, spin-traced diagonal for mixed."""
    if isinstance(state, SpinorState):
        return Distribution(state.window, state.probabilities(), step)
    if isinstance(state, DensityState):
        return Distribution(state.window, state.position_probabilities(), step)
    raise DomainError(f"unsupported state type {type(state).__name__}")


def rms_width(dist):
    """sqrt(sum x^2 p(x)), uncentered about x = 0 (the preparation site)."""
    xs = dist.window.sites().astype(float)
    return float(np.sqrt(np.sum(xs * xs * dist.p)))


def return_probability(dist, origin=0):
    """p(origin); origin must lie inside the window."""
    return dist.probability_at(origin)


def time_averaged_distribution(dists):
    """Arithmetic per-site mean of distributions sharing one window."""
    if len(dists) == 0:
        raise DomainError("need at least one distribution to average")
    window = dists[0].window
    for d in dists[1:]:
        if d.window != window:
            raise DomainError("distributions must share a common window")
    mean = np.mean([d.p for d in dists], axis=0)
    return Distribution(window, mean, None)


def tv_distance(a, b):
    """Total-variation distance (1/2) sum |a - b| on a common window."""
    if a.window != b.window:
        raise DomainError("distributions must share a common window")
    return float(0.5 * np.sum(np.abs(a.p - b.p)))


# ---------------------------------------------------------------------------
# localization fit
# ---------------------------------------------------------------------------

def fit_two_sided_exponential(dist, floor=1e-12):
    """Weighted least squares of ln p against |x|, weights = p.

    Sites with p <= floor are excluded (keeps exact zeros out of the log
    and de-emphasizes the noisy tail). Returns xi from slope = -1/xi. An
    exactly flat profile comes back with xi = inf and r_squared = 0; a
    profile that grows with |x| is a fit error.
    """
    xs = dist.window.sites().astype(float)
    keep = dist.p > floor
    if np.count_nonzero(keep) < 3:
        raise FitError("fewer than 3 sites above the probability floor")
    x = np.abs(xs[keep])
    y = np.log(dist.p[keep])
    w = dist.p[keep]
    wsum = w.sum()
    xbar = np.sum(w * x) / wsum
    ybar = np.sum(w * y) / wsum
    sxx = np.sum(w * (x - xbar) ** 2)
    sxy = np.sum(w * (x - xbar) * (y - ybar))
    if sxx == 0.0:
        raise FitError("all retained sites at the same |x|; slope undefined")
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    residual = y - (intercept + slope * x)
    ss_res = np.sum(w * residual ** 2)
    ss_tot = np.sum(w * (y - ybar) ** 2)
    r2 = 0.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    if slope > 0.0:
        raise FitError(f"profile grows with |x| (slope {slope:.3e}); no decay length")
    xi = math.inf if slope == 0.0 else -1.0 / slope
    return ExpFitResult(float(xi), float(math.exp(intercept)), float(r2))


# ---------------------------------------------------------------------------
# evolution-driven series
# ---------------------------------------------------------------------------

def _evolved_distributions(params, t_max, x0=0, spinor=(1.0, 0.0)):
    # Pure path when there is no dephasing; density path otherwise.
    window = SiteWindow(x0 - t_max, x0 + t_max)
    state = new_localized(x0, spinor, window)
    if params.dephase_p == 0.0:
        return [position_distribution(s, t) for t, s in enumerate(evolve(state, params, t_max))]
    rho = density_from_pure(state)
    return [position_distribution(s, t) for t, s in enumerate(evolve_density(rho, params, t_max))]


def width_series(params, t_max):
    """rms width at every step of a walk from |0, up>."""
    if t_max < 1:
        raise DomainError("t_max must be >= 1")
    dists = _evolved_distributions(params, t_max)
    widths = np.array([rms_width(d) for d in dists])
    return WidthSeries(np.arange(t_max + 1), widths)


def distinguishing_steps(phi1, phi2, threshold, theta=math.pi / 4.0, t_max=None):
    """Steps needed to distinguish fields phi1 and phi2 from |0, up>.

    The search cap defaults to 10x the heuristic ceil(1/|delta phi|).
    """
    if not 0.0 < threshold < 1.0:
        raise DomainError("threshold must be in (0, 1)")
    r1, r2 = _reduce_angle(phi1), _reduce_angle(phi2)
    if r1 == r2:
        raise DomainError("fields are identical mod 2*pi")
    d = abs(r1 - r2)
    delta = min(d, 2.0 * math.pi - d)
    heuristic = math.ceil(1.0 / delta)
    cap = int(t_max) if t_max is not None else 10 * heuristic
    dists1 = _evolved_distributions(WalkParams(phi=r1, theta=theta), cap)
    dists2 = _evolved_distributions(WalkParams(phi=r2, theta=theta), cap)
    tv_curve = np.array([tv_distance(a, b) for a, b in zip(dists1, dists2)])
    hits = np.nonzero(tv_curve >= threshold)[0]
    empirical = int(hits[0]) if hits.size else None
    return DiscriminationReport(heuristic, empirical, tv_curve, float(threshold))


# ---------------------------------------------------------------------------
# rational approximation
# ---------------------------------------------------------------------------

def convergents(x, depth):
    """Continued-fraction convergents of x > 0 as Fractions in lowest terms.

    Standard h/k recurrence including the leading integer-part convergent;
    expansion stops early when the fractional remainder drops below 1e-12
    (float-exact rationals terminate).
    """
    if not (math.isfinite(x) and x > 0):
        raise DomainError("x must be a positive finite real")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    out = []
    h_prev, h = 0, 1  # p_{-2}, p_{-1}
    k_prev, k = 1, 0  # q_{-2}, q_{-1}
    y = float(x)
    for _ in range(depth):
        a = int(math.floor(y))
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        out.append(Fraction(h, k))
        frac = y - a
        if frac < 1e-12:
            break
        y = 1.0 / frac
    return out

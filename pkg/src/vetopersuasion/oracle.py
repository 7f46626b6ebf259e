"""Brute-force verifiers and optimality certificates.

Everything here is deliberately slow and structurally independent of the
trusted solvers: payoffs are recomputed from the loss primitives, hulls are
built by pairwise-segment maxima instead of a hull walk, and optima are
located by exhaustive grids with a golden-section polish.  Agreement with
the fast paths is the evidence the fast paths are right.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .accept import three_type_best_proposal
from .dist import TypeDistribution
from .errors import DomainError
from .lsolve import BinaryTypeEnv, Envelope, utilde
from .prefs import ProposerPreferences

_REFINE_TOL = 1e-10


def _indirect(s: float, prefs: ProposerPreferences) -> float:
    # Recomputed from the loss primitive: the Proposer proposes
    # min(2s, 1) when that is accepted, else keeps the status quo.
    if s <= 0.0:
        return -prefs.loss(1.0)
    if s >= 0.5:
        return 0.0
    return -prefs.loss(1.0 - 2.0 * s)


def _partition_value(
    d: TypeDistribution, prefs: ProposerPreferences, cuts: Sequence[float]
) -> float:
    lo, hi = d.support
    edges = [lo, *sorted(cuts), hi]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        mass = d.cdf(b) - d.cdf(a)
        if mass <= 0.0:
            continue
        mean = (d.upper_partial_mean(a) - d.upper_partial_mean(b)) / mass
        total += mass * _indirect(mean, prefs)
    return total


def _golden(f: Callable[[float], float], lo: float, hi: float) -> Tuple[float, float]:
    invphi = (5.0 ** 0.5 - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > _REFINE_TOL:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    return x, f(x)


def partition_search(
    d: TypeDistribution,
    prefs: ProposerPreferences,
    k_max: int,
    grid_n: int = 400,
) -> Tuple[float, Tuple[float, ...]]:
    """Best interval-partition experiment with at most k_max cells.

    Exhausts cutoff tuples drawn from a uniform grid over the support, then
    polishes each cutoff of the winner by golden-section search.
    """
    if k_max not in (1, 2, 3):
        raise DomainError(f"k_max must be 1, 2 or 3, got {k_max}")
    if grid_n > 500:
        raise DomainError(f"grid_n capped at 500, got {grid_n}")
    lo, hi = d.support
    xs = np.linspace(lo, hi, grid_n)
    F = np.array([d.cdf(x) for x in xs])
    T = np.array([d.upper_partial_mean(x) for x in xs])

    def cell_u(i: np.ndarray, j: np.ndarray) -> np.ndarray:
        mass = F[j] - F[i]
        with np.errstate(invalid="ignore", divide="ignore"):
            mean = np.where(mass > 0.0, (T[i] - T[j]) / np.where(mass > 0, mass, 1.0), 0.0)
        u = np.array([_indirect(m, prefs) for m in np.atleast_1d(mean)])
        return np.where(np.atleast_1d(mass) > 0.0, np.atleast_1d(mass) * u, 0.0)

    best_val = _partition_value(d, prefs, [])
    best_cuts: Tuple[float, ...] = ()

    if k_max >= 2:
        idx = np.arange(1, grid_n - 1)
        vals = cell_u(np.zeros_like(idx), idx) + cell_u(idx, np.full_like(idx, grid_n - 1))
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best_cuts = float(vals[k]), (float(xs[idx[k]]),)

    if k_max >= 3:
        ii, jj = np.triu_indices(grid_n - 2, k=1)
        ii, jj = ii + 1, jj + 1
        vals = (
            cell_u(np.zeros_like(ii), ii)
            + cell_u(ii, jj)
            + cell_u(jj, np.full_like(jj, grid_n - 1))
        )
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val = float(vals[k])
            best_cuts = (float(xs[ii[k]]), float(xs[jj[k]]))

    # Coordinate-wise polish around the grid winner.
    step = (hi - lo) / (grid_n - 1)
    cuts = list(best_cuts)
    for _ in range(2 if cuts else 0):
        for m in range(len(cuts)):
            a = max(lo, cuts[m] - step)
            b = min(hi, cuts[m] + step)

            def f(c: float, m: int = m) -> float:
                trial = cuts.copy()
                trial[m] = c
                return _partition_value(d, prefs, trial)

            c_star, v_star = _golden(f, a, b)
            if v_star > best_val:
                cuts[m], best_val = c_star, v_star
    return best_val, tuple(cuts)


def verify_certificate(
    d: TypeDistribution,
    prefs: ProposerPreferences,
    s_star: float,
    s_upper: float,
    grid_n: int = 2000,
) -> Tuple[bool, float]:
    """Price-function certificate for a binary cutoff experiment.

    The candidate price function is the chord through (s_star, -c(1)) and
    (s_upper, U(s_upper)), floored at -c(1).  Optimality requires it to
    majorize the indirect utility everywhere, touch it at both posterior
    means, and satisfy E[theta | theta >= s_star] = s_upper.
    """
    lo, hi = d.support
    c1 = prefs.loss(1.0)
    u_up = _indirect(s_upper, prefs)
    if s_upper <= s_star:
        return False, float("inf")
    slope = (u_up + c1) / (s_upper - s_star)

    def price(s: float) -> float:
        return max(-c1, -c1 + slope * (s - s_star))

    viol = 0.0
    for s in np.linspace(lo, hi, grid_n):
        viol = max(viol, _indirect(s, prefs) - price(s))
    viol = max(viol, abs(price(s_star) + c1), abs(price(s_upper) - u_up))
    viol = max(viol, abs(d.cond_mean_above(s_star) - s_upper))
    return viol <= 1e-9, viol


def verify_no_info_certificate(
    d: TypeDistribution, prefs: ProposerPreferences, grid_n: int = 2000
) -> Tuple[bool, float]:
    """Tangent-line certificate that revealing nothing is optimal."""
    m = d.mean()
    if not 0.0 < m < 0.5:
        return False, float("inf")
    u_m = _indirect(m, prefs)
    slope = 2.0 * prefs.utility_deriv(2.0 * m)
    lo, hi = d.support
    viol = 0.0
    for s in np.linspace(lo, hi, grid_n):
        viol = max(viol, _indirect(s, prefs) - (u_m + slope * (s - m)))
    return viol <= 1e-9, viol


def concave_envelope_oracle(points: Sequence[Tuple[float, float]]) -> Envelope:
    """Upper concave envelope by brute force.

    The envelope value at each grid point is the maximum over all pairs of
    input points of the connecting segment evaluated there — no hull walk.
    """
    pts = sorted(points)
    if len(pts) < 2:
        raise DomainError("need at least 2 points")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    n = len(pts)
    env = y.copy()
    for j in range(n):
        for k in range(j + 1, n):
            if x[k] == x[j]:
                continue
            inside = (x >= x[j]) & (x <= x[k])
            t = (x[inside] - x[j]) / (x[k] - x[j])
            seg = (1.0 - t) * y[j] + t * y[k]
            env[inside] = np.maximum(env[inside], seg)
    contact = tuple(
        (float(xi), float(yi)) for xi, yi, ei in zip(x, y, env) if ei - yi <= 1e-12
    )
    return Envelope(tuple((float(a), float(b)) for a, b in zip(x, env)), contact)


def _split_value_atoms(
    weights: Sequence[float],
    levels: Sequence[float],
    prefs: ProposerPreferences,
    sigma: Sequence[float],
) -> float:
    total = 0.0
    for probs in (tuple(sigma), tuple(1.0 - s for s in sigma)):
        mass = sum(w * s for w, s in zip(weights, probs))
        if mass <= 1e-15:
            continue
        post = tuple(w * s / mass for w, s in zip(weights, probs))
        p = three_type_best_proposal((post[0], post[1]), tuple(levels))
        total += mass * (-prefs.loss(1.0 - p))
    return total


def binary_signal_search_atoms(
    prior: Tuple[float, float],
    levels: Tuple[float, float, float],
    prefs: ProposerPreferences,
    grid_n: int = 41,
) -> Tuple[float, Tuple[float, float, float]]:
    """Unrestricted search over binary signals for three atom types.

    sigma[i] is the probability type i sends the high signal; all of
    [0,1]^3 is scanned on a grid, then the winner is polished coordinate
    by coordinate.
    """
    if grid_n > 101:
        raise DomainError(f"grid_n capped at 101, got {grid_n}")
    w = np.array([prior[0], prior[1], 1.0 - prior[0] - prior[1]])
    if w.min() < -1e-12:
        raise DomainError(f"bad prior {prior}")
    th = np.array(levels)
    p_bar = min(2.0 * th[2], 1.0)
    breaks = np.array(sorted({0.0, *(t for t in th if 0.0 < t < p_bar), p_bar}))

    g = np.linspace(0.0, 1.0, grid_n)
    s0, s1, s2 = np.meshgrid(g, g, g, indexing="ij")
    sig = np.stack([s0.ravel(), s1.ravel(), s2.ravel()], axis=1)

    def signal_values(sigma: np.ndarray) -> np.ndarray:
        # Expected payoff contributed by one signal whose send-probability
        # per type is the columns of sigma, vectorized over rows.
        mass = sigma @ w
        wq = sigma * w  # unnormalized posterior weights
        # Acceptance gap A(p) = sum_i q_i (|theta_i| - |p - theta_i|),
        # evaluated (unnormalized) at each breakpoint.
        A = np.zeros((sigma.shape[0], len(breaks)))
        for m, b in enumerate(breaks):
            A[:, m] = wq @ (np.abs(th) - np.abs(b - th))
        # Largest root of the concave piecewise-linear gap, right to left.
        p = np.zeros(sigma.shape[0])
        done = A[:, -1] >= 0.0
        p[done] = breaks[-1]
        for m in range(len(breaks) - 1, 0, -1):
            lo_v, hi_v = A[:, m - 1], A[:, m]
            hit = (~done) & (lo_v >= 0.0) & (hi_v < 0.0)
            with np.errstate(invalid="ignore", divide="ignore"):
                root = breaks[m - 1] + lo_v * (breaks[m] - breaks[m - 1]) / (
                    lo_v - hi_v
                )
            p[hit] = root[hit]
            done |= hit
        u = np.array([-prefs.loss(1.0 - pi) for pi in p])
        return np.where(mass > 1e-15, mass * u, 0.0)

    total = signal_values(sig) + signal_values(1.0 - sig)
    k = int(np.argmax(total))
    sigma = list(sig[k])
    best = float(total[k])

    step = 1.0 / (grid_n - 1)
    for _ in range(3):
        for i in range(3):
            a, b = max(0.0, sigma[i] - step), min(1.0, sigma[i] + step)

            def f(s: float, i: int = i) -> float:
                trial = sigma.copy()
                trial[i] = s
                return _split_value_atoms(w, th, prefs, trial)

            s_star, v_star = _golden(f, a, b)
            if v_star > best:
                sigma[i], best = s_star, v_star
    return float(best), (float(sigma[0]), float(sigma[1]), float(sigma[2]))


def proposal_first_grid(
    env: BinaryTypeEnv, prefs: ProposerPreferences, grid_n: int = 4001
) -> Tuple[float, float]:
    """Arg-max of the committed-proposal payoff over a dense grid."""
    ps = np.linspace(0.0, env.p_bar, grid_n)
    vals = [utilde(env, prefs, p) for p in ps]
    k = int(np.argmax(vals))
    p_star, v_star = _golden(
        lambda p: utilde(env, prefs, p),
        float(ps[max(0, k - 1)]),
        float(ps[min(grid_n - 1, k + 1)]),
    )
    if v_star >= vals[k]:
        return p_star, v_star
    return float(ps[k]), float(vals[k])

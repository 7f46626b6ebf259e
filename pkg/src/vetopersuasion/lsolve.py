"""Solvers for a linear-loss Vetoer with two or three bliss-point atoms.

With two atoms {ell, h} a belief is the probability mu on the high type,
and the persuasion-first problem concavifies the indirect utility
Uhat(mu) = -c(1 - psi(mu)) over mu in [0, 1].  The proposal-first problem
maximizes Utilde(p), the best payoff from committing to p and then
choosing the acceptance-maximizing signal.  Three-atom instances are
handled through a restricted parametric family of binary signals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .accept import (
    BinaryTypeEnv,
    best_acceptable_proposal,
    phi_threshold,
    psi_cap,
    three_type_best_proposal,
)
from .errors import AssumptionViolatedError, DegenerateGridError, DomainError
from .prefs import ProposerPreferences

_GOLDEN_TOL = 1e-10


@dataclass(frozen=True)
class Envelope:
    """Upper concave envelope of a finite point set, piecewise linear."""

    breakpoints: Tuple[Tuple[float, float], ...]
    contact: Tuple[Tuple[float, float], ...]

    def value(self, mu: float) -> float:
        xs = [b[0] for b in self.breakpoints]
        ys = [b[1] for b in self.breakpoints]
        if not xs[0] <= mu <= xs[-1]:
            raise DomainError(f"{mu} outside envelope domain [{xs[0]}, {xs[-1]}]")
        return float(np.interp(mu, xs, ys))


@dataclass(frozen=True)
class BinarySolveOutcome:
    value: float
    posteriors: Tuple[Tuple[float, float, float], ...]  # (mu, weight, proposal)
    regime: str  # "NoInfo" | "Split"


def uhat(env: BinaryTypeEnv, prefs: ProposerPreferences, mu: float) -> float:
    """Proposer's payoff from the best accepted proposal at belief mu."""
    return -prefs.loss(1.0 - psi_cap(env, mu))


def concavify(
    points: Sequence[Tuple[float, float]], mu0: float
) -> Tuple[Envelope, float, Tuple[Tuple[float, float], ...]]:
    """Upper concave envelope of (mu, value) points plus its split at mu0.

    Returns the envelope, its value at mu0, and the supporting posteriors
    as ((mu, weight), ...) — the hull segment endpoints bracketing mu0 with
    the unique weights averaging to mu0 (a single degenerate support when
    mu0 is itself a hull vertex).
    """
    if len(points) < 2:
        raise DegenerateGridError("concavification needs at least 2 points")
    pts = sorted(points)
    # Deduplicate mu, keeping the highest value.
    dedup: List[Tuple[float, float]] = []
    for x, y in pts:
        if dedup and x == dedup[-1][0]:
            dedup[-1] = (x, max(dedup[-1][1], y))
        else:
            dedup.append((x, y))
    if len(dedup) < 2:
        raise DegenerateGridError("concavification needs at least 2 distinct mu")
    if not dedup[0][0] <= mu0 <= dedup[-1][0]:
        raise DomainError(f"mu0={mu0} outside the grid span")

    # Monotone-chain upper hull.  Collinear points stay on the hull so the
    # supports at mu0 are the nearest contact points, not the far ends of a
    # flat stretch.
    hull: List[Tuple[float, float]] = []
    for p in dedup:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (p[0] - x1) * (y2 - y1) > 1e-12:
                hull.pop()
            else:
                break
        hull.append(p)

    hull_set = set(hull)
    env = Envelope(tuple(hull), tuple(p for p in dedup if p in hull_set))

    xs = [p[0] for p in hull]
    k = int(np.searchsorted(xs, mu0, side="right")) - 1
    k = max(0, min(k, len(hull) - 2))
    (xa, ya), (xb, yb) = hull[k], hull[k + 1]
    if mu0 == xa or len(hull) == 1:
        return env, ya, ((xa, 1.0),)
    if mu0 == xb:
        return env, yb, ((xb, 1.0),)
    w = (xb - mu0) / (xb - xa)
    return env, w * ya + (1.0 - w) * yb, ((xa, w), (xb, 1.0 - w))


def _uhat_grid(env: BinaryTypeEnv, prefs: ProposerPreferences, n: int = 4001):
    mus = set(np.linspace(0.0, 1.0, n).tolist())
    for kink in (phi_threshold(env, env.h), phi_threshold(env, env.p_bar), env.mu0):
        if 0.0 <= kink <= 1.0:
            mus.add(float(kink))
    return [(mu, uhat(env, prefs, mu)) for mu in sorted(mus)]


def solve_persuasion_first_binary(
    env: BinaryTypeEnv, prefs: ProposerPreferences
) -> BinarySolveOutcome:
    """Optimal experiment-then-proposal outcome with two atom types.

    No information is optimal exactly when mu0 >= max(0, phi(h)); below
    that threshold the indirect utility is strictly below its envelope and
    a binary posterior split is used.
    """
    mu0 = env.mu0
    if mu0 >= max(0.0, phi_threshold(env, env.h)):
        return BinarySolveOutcome(
            uhat(env, prefs, mu0), ((mu0, 1.0, psi_cap(env, mu0)),), "NoInfo"
        )
    _, value, supports = concavify(_uhat_grid(env, prefs), mu0)
    if len(supports) == 1:
        mu, _ = supports[0]
        return BinarySolveOutcome(value, ((mu, 1.0, psi_cap(env, mu)),), "NoInfo")
    posteriors = tuple((mu, w, psi_cap(env, mu)) for mu, w in supports)
    return BinarySolveOutcome(value, posteriors, "Split")


def utilde(env: BinaryTypeEnv, prefs: ProposerPreferences, p: float) -> float:
    """Best payoff from committing to proposal p, then choosing the signal
    that maximizes its acceptance probability."""
    if not 0.0 <= p <= env.p_bar:
        raise DomainError(f"proposal must lie in [0, {env.p_bar}], got {p}")
    c1 = prefs.loss(1.0)
    phi = phi_threshold(env, p)
    if phi <= env.mu0:
        return -prefs.loss(1.0 - p)
    return -c1 + (env.mu0 / phi) * (c1 - prefs.loss(1.0 - p))


def quasiconvexity_check(prefs: ProposerPreferences, ell: float) -> bool:
    """Scan (c(1) - c(1-p))(p - ell)/(p - 2 ell) for interior local maxima.

    The loss is extended oddly past p = 1 so the scan covers p up to 10.
    Quasi-convexity of this ratio is what makes the three-candidate
    proposal-first logic exhaustive.
    """
    c1 = prefs.loss(1.0)

    def c_ext(x: float) -> float:
        return np.sign(x) * prefs.loss(abs(x))

    ps = 2.0 * ell + np.geomspace(1e-6, 10.0 - 2.0 * ell, 2000)
    v = np.array([(c1 - c_ext(1.0 - p)) * (p - ell) / (p - 2.0 * ell) for p in ps])
    interior_max = (v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])
    return not bool(interior_max.any())


def solve_proposal_first_binary(
    env: BinaryTypeEnv, prefs: ProposerPreferences
) -> Tuple[float, float, Optional[Tuple[Tuple[float, float], ...]]]:
    """Optimal proposal-then-experiment outcome: (p_opt, value, experiment).

    The experiment, when information is used, is the binary split of mu0
    into posteriors {0, phi(p_opt)}; None means no information.  Only
    three candidate proposals can be optimal: the largest surely-accepted
    proposal psi(mu0), the high bliss point h, and the cap p_bar.  A dense
    grid max over Utilde acts as a tripwire for that claim.
    """
    if not quasiconvexity_check(prefs, env.ell):
        raise AssumptionViolatedError(
            "acceptance-odds ratio is not quasi-convex for these preferences"
        )
    mu0, h, p_bar = env.mu0, env.h, env.p_bar

    if mu0 >= phi_threshold(env, p_bar):
        p_opt, value, experiment = p_bar, utilde(env, prefs, p_bar), None
    elif mu0 >= max(0.0, phi_threshold(env, h)):
        p_opt = psi_cap(env, mu0)
        value, experiment = utilde(env, prefs, p_opt), None
    else:
        p_lo = psi_cap(env, mu0)
        if utilde(env, prefs, p_lo) <= utilde(env, prefs, h):
            p_opt = h
            value = utilde(env, prefs, h)
            phi_h = phi_threshold(env, h)
            experiment = ((0.0, 1.0 - mu0 / phi_h), (phi_h, mu0 / phi_h))
        else:
            p_opt, value, experiment = p_lo, utilde(env, prefs, p_lo), None

    grid_best = max(utilde(env, prefs, p) for p in np.linspace(0.0, p_bar, 2000))
    if grid_best > value + 1e-6:
        raise AssumptionViolatedError(
            "grid search beat the candidate proposals; quasi-convexity premise broken"
        )
    return p_opt, value, experiment


def _golden_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float = _GOLDEN_TOL
) -> Tuple[float, float]:
    invphi = (5.0 ** 0.5 - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
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


@dataclass(frozen=True)
class ThreeTypeValues:
    v_noinfo: float
    v_fullinfo: float
    v_bestbinary: float
    sigma_star: Tuple[float, float, float]
    branch: str  # "reveal-low" (sigma on type 0) or "reveal-mid" (sigma on ell)
    branch_values: Tuple[float, float]


def three_type_values(
    prior: Tuple[float, float],
    levels: Tuple[float, float, float],
    prefs: ProposerPreferences,
) -> ThreeTypeValues:
    """No-info, full-info, and best-binary-signal payoffs for three atoms.

    prior = (w0, wl) on levels (0, ell, h); the residual weight sits on h.
    The binary-signal search restricts to the two parametric families that
    can be optimal when types are ordered: either the highest two types
    always send the high signal and type 0 mixes, or type 0 never sends it,
    the top type always does, and the middle type mixes.  Each branch is
    maximized with golden-section search.
    """
    w0, wl = prior
    wh = 1.0 - w0 - wl
    if min(w0, wl, wh) < 0.0:
        raise DomainError(f"bad prior {prior}")
    weights = (w0, wl, wh)

    p_flat = three_type_best_proposal(prior, levels)
    v_noinfo = prefs.utility(p_flat)

    v_fullinfo = sum(
        w * prefs.utility(min(2.0 * t, 1.0)) for w, t in zip(weights, levels)
    )

    def split_value(sigma: Tuple[float, float, float]) -> float:
        total = 0.0
        for probs in (sigma, tuple(1.0 - s for s in sigma)):
            mass = sum(w * s for w, s in zip(weights, probs))
            if mass <= 1e-15:
                continue
            post = tuple(w * s / mass for w, s in zip(weights, probs))
            p = best_acceptable_proposal(levels, post)
            total += mass * prefs.utility(p)
        return total

    # Branch A: types ell and h always send the high signal, type 0 mixes.
    # Past sigma0_cap the high posterior puts majority weight on type 0 and
    # the value is flat at its floor, so the cap loses nothing.
    sigma0_cap = min(1.0, (wl + wh) / w0) if w0 > 0.0 else 1.0
    sA, vA = _golden_max(lambda s: split_value((s, 1.0, 1.0)), 0.0, sigma0_cap)
    for s_end in (0.0, sigma0_cap):
        v_end = split_value((s_end, 1.0, 1.0))
        if v_end > vA:
            sA, vA = s_end, v_end

    # Branch B: type 0 never sends the high signal, type h always does,
    # type ell mixes.
    sB, vB = _golden_max(lambda s: split_value((0.0, s, 1.0)), 0.0, 1.0)
    for s_end in (0.0, 1.0):
        v_end = split_value((0.0, s_end, 1.0))
        if v_end > vB:
            sB, vB = s_end, v_end

    if vA >= vB:
        return ThreeTypeValues(
            v_noinfo, v_fullinfo, vA, (sA, 1.0, 1.0), "reveal-low", (vA, vB)
        )
    return ThreeTypeValues(
        v_noinfo, v_fullinfo, vB, (0.0, sB, 1.0), "reveal-mid", (vA, vB)
    )

"""Vetoer acceptance logic.

Quadratic loss admits the clean rule "accept p > 0 iff p <= 2 E[theta]";
absolute (linear) loss does not reduce to a mean comparison, so it is
handled only for small atom supports, where acceptance is a piecewise
linear inequality in the proposal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .dist import FiniteAtoms, TypeDistribution
from .errors import DomainError, UnsupportedCombinationError
from .prefs import VetoerLoss

_MAX_ABSOLUTE_ATOMS = 3


@dataclass(frozen=True)
class BinaryTypeEnv:
    """Two-point type environment for the linear-loss Vetoer.

    ell and h are the two possible bliss points (0 <= ell < h) and mu0 is
    the prior probability that the bliss point is h.
    """

    ell: float
    h: float
    mu0: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.ell < self.h:
            raise DomainError(f"need 0 <= ell < h, got ell={self.ell}, h={self.h}")
        if not 0.0 <= self.mu0 <= 1.0:
            raise DomainError(f"mu0 must be a probability, got {self.mu0}")

    @property
    def p_bar(self) -> float:
        """Largest proposal any belief can support: min(2h, 1)."""
        return min(2.0 * self.h, 1.0)


def vetoer_value(a: float, d: TypeDistribution, v: VetoerLoss) -> float:
    """Vetoer's expected payoff from policy a under belief d."""
    if v is VetoerLoss.QUADRATIC:
        return -d.expect(lambda t: (t - a) ** 2)
    if not isinstance(d, FiniteAtoms):
        raise UnsupportedCombinationError(
            "absolute vetoer loss is only supported for atom distributions"
        )
    if len(d.points) > _MAX_ABSOLUTE_ATOMS:
        raise UnsupportedCombinationError(
            f"absolute vetoer loss supports at most {_MAX_ABSOLUTE_ATOMS} atoms"
        )
    return -sum(p * abs(t - a) for t, p in d.points)


def accepts_quadratic(p: float, posterior_mean: float) -> bool:
    """Quadratic-loss acceptance; indifference breaks toward acceptance."""
    if p < 0.0:
        raise DomainError(f"proposals are nonnegative, got {p}")
    return p == 0.0 or p <= 2.0 * posterior_mean


def phi_threshold(env: BinaryTypeEnv, p: float) -> float:
    """Minimal belief on the high type at which proposal p is accepted.

    Values <= 0 mean "accepted at any belief", values > 1 mean "never
    accepted"; the result is deliberately not clamped so that psi_cap can
    invert it.
    """
    two_ell = 2.0 * env.ell
    if p <= two_ell:
        # Below 2*ell every belief accepts; extend linearly so the
        # threshold stays continuous and increasing through p = 2*ell.
        return (p - two_ell) / (2.0 * (env.h - env.ell))
    return (p - two_ell) / (2.0 * (min(p, env.h) - env.ell))


def psi_cap(env: BinaryTypeEnv, mu: float) -> float:
    """Highest proposal in [0, p_bar] accepted at belief mu."""
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"belief must lie in [0, 1], got {mu}")
    ell, h = env.ell, env.h
    if mu >= phi_threshold(env, env.p_bar):
        return env.p_bar
    if mu >= max(0.0, phi_threshold(env, h)):
        return 2.0 * ((1.0 - mu) * ell + mu * h)
    # Here mu < phi(h) < 1/2, so the denominator is positive.
    return 2.0 * ell * (1.0 - mu) / (1.0 - 2.0 * mu)


def three_type_best_proposal(
    prior: Tuple[float, float], levels: Tuple[float, float, float]
) -> float:
    """Highest acceptable proposal at a belief over three ordered bliss points.

    prior = (mu_0, mu_ell) puts mu_0 on levels[0] (which must be 0),
    mu_ell on levels[1], and the remainder on levels[2].  Returns the
    largest p in [0, min(2h, 1)] the Vetoer weakly prefers to the status
    quo under absolute loss, or 0 if no positive proposal is acceptable.
    """
    mu0, mul = prior
    if mu0 < 0.0 or mul < 0.0 or mu0 + mul > 1.0 + 1e-12:
        raise DomainError(f"bad belief {prior}")
    z, ell, h = levels
    if not (z == 0.0 and 0.0 <= ell < h):
        raise DomainError(f"levels must be (0, ell, h) with 0 <= ell < h, got {levels}")
    weights = (mu0, mul, 1.0 - mu0 - mul)
    return best_acceptable_proposal(levels, weights)


def best_acceptable_proposal(
    thetas: Sequence[float], weights: Sequence[float]
) -> float:
    """Largest p in [0, min(2*max theta, 1)] with V(p) >= V(0), absolute loss.

    A(p) = V(p) - V(0) is concave and piecewise linear with kinks at the
    atoms, and A(0) = 0, so the acceptance set is an interval [0, r]; r is
    found exactly on the linear pieces.
    """
    if any(t < 0.0 for t in thetas):
        raise DomainError("atom locations must be nonnegative here")
    p_bar = min(2.0 * max(thetas), 1.0)
    if p_bar <= 0.0:
        return 0.0

    v0 = -sum(w * t for t, w in zip(thetas, weights))

    def gap(p: float) -> float:
        return -sum(w * abs(t - p) for t, w in zip(thetas, weights)) - v0

    breaks = sorted({0.0, p_bar, *(t for t in thetas if 0.0 < t < p_bar)})
    values = [gap(b) for b in breaks]
    if values[-1] >= 0.0:
        return p_bar
    # Scan right to left for the sign change; concavity guarantees one.
    for k in range(len(breaks) - 1, 0, -1):
        lo_v, hi_v = values[k - 1], values[k]
        if lo_v >= 0.0 > hi_v:
            return breaks[k - 1] + lo_v * (breaks[k] - breaks[k - 1]) / (lo_v - hi_v)
    return 0.0

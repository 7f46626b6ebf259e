"""Optimal persuasion and proposals under quadratic Vetoer loss.

Since only the posterior mean of the Vetoer's belief matters for his
acceptance decision, the design problem reduces to choosing a distribution
of posterior means dominated by the prior in the convex order.  The optimum
is either no information or a binary cutoff experiment revealing whether
theta >= s_star, where s_star <= 0 solves a chord-tangency condition on the
Proposer's indirect utility

    U(s) = -c(1)            for s <= 0
         = -c(1 - 2s)       for 0 < s < 1/2
         = 0                for s >= 1/2.

Both timings (experiment-then-proposal and proposal-then-experiment) are
solved by genuinely different code paths; they must agree to ~1e-9, which
the test suite enforces.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from scipy.optimize import brentq

from .dist import FiniteAtoms, TypeDistribution
from .errors import (
    AssumptionViolatedError,
    DomainError,
    NoRootError,
    UnsupportedCombinationError,
)
from .prefs import ProposerPreferences

_S_TOL = 1e-13
_MAX_BISECT = 200


class Regime(Enum):
    IDEAL_ACCEPTED = "IdealAccepted"
    NO_INFO = "NoInfo"
    BINARY_CUTOFF = "BinaryCutoff"
    STATUS_QUO_ONLY = "StatusQuoOnly"


@dataclass(frozen=True)
class SolveOutcome:
    regime: Regime
    s_star: Optional[float]
    s_upper: Optional[float]
    proposal: float
    value: float
    veto_prob: float


@dataclass(frozen=True)
class Experiment:
    """A signal structure.

    For continuous distributions, ``cutoffs`` defines an interval partition
    of the support.  For atom distributions, ``signal_probs`` gives each
    atom's probability of sending the high signal in a two-signal map.
    """

    cutoffs: Optional[Tuple[float, ...]] = None
    signal_probs: Optional[Tuple[float, ...]] = None


def indirect_u(s: float, prefs: ProposerPreferences) -> float:
    """Proposer's indirect utility when the posterior mean is s."""
    if s <= 0.0:
        return -prefs.loss(1.0)
    if s >= 0.5:
        return 0.0
    return -prefs.loss(1.0 - 2.0 * s)


def no_info_optimal(d: TypeDistribution, prefs: ProposerPreferences) -> bool:
    """Whether the tangent line at the prior mean majorizes U.

    Equivalent to: no experiment improves on proposing 2 E[theta] outright.
    """
    mean = d.mean()
    if mean >= 0.5:
        raise AssumptionViolatedError(
            "E[theta] >= 1/2: the Proposer's ideal proposal is already accepted"
        )
    theta_lo, _ = d.support
    if theta_lo >= 0.0:
        return True
    if mean <= 0.0:
        return False
    lhs = 2.0 * prefs.utility_deriv(2.0 * mean) * (mean - theta_lo)
    rhs = prefs.utility(2.0 * mean) - prefs.utility(0.0)
    return lhs <= rhs


def _tangency_point(s: float, prefs: ProposerPreferences) -> float:
    """Contact point of the steepest line from (s, -c(1)) to the hump of U.

    Returns the m in (0, 1/2] where the chord from (s, U(s)) to (m, U(m))
    supports U from above on [s, theta_hi]; m = 1/2 is the corner case
    (possible for weakly convex u, e.g. the linear family).
    """
    u0 = prefs.utility(0.0)

    def g(m: float) -> float:
        return prefs.utility(2.0 * m) - u0 - 2.0 * prefs.utility_deriv(2.0 * m) * (m - s)

    # g is nondecreasing in m for concave u, g(0) <= 0 for s <= 0.
    if g(0.5) <= 0.0:
        return 0.5
    if s >= 0.0:
        return 0.0
    return brentq(g, 0.0, 0.5, xtol=1e-15, rtol=8.9e-16)


def solve_cutoff(
    d: TypeDistribution, prefs: ProposerPreferences
) -> Tuple[float, float]:
    """The optimal cutoff s_star in [theta_lo, 0] and s_upper = E[theta|theta>=s_star].

    Bisection on z(s) = t(s) - E[theta | theta >= s], where t(s) is the
    tangency (or corner) point of the supporting line anchored at
    (s, -c(1)).  z is positive at theta_lo whenever no information is
    suboptimal and negative near 0, so the bracket is guaranteed.
    """
    theta_lo, theta_hi = d.support
    if theta_lo >= 0.0:
        raise NoRootError("no cutoff exists when the whole support is nonnegative")

    def z(s: float) -> float:
        return _tangency_point(s, prefs) - d.cond_mean_above(s)

    z_hi = _tangency_point(0.0, prefs) - d.cond_mean_above(0.0)
    if z_hi >= 0.0:
        # Corner of a kinked u: the expected policy is maximized at cutoff 0.
        return 0.0, d.cond_mean_above(0.0)
    if z(theta_lo) <= 0.0:
        raise NoRootError(
            "no interior cutoff: no information is optimal for this instance"
        )

    lo, hi = theta_lo, 0.0
    for _ in range(_MAX_BISECT):
        if hi - lo <= _S_TOL:
            break
        mid = 0.5 * (lo + hi)
        if z(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    s_star = 0.5 * (lo + hi)
    return s_star, d.cond_mean_above(s_star)


def _require_continuous(d: TypeDistribution) -> None:
    if isinstance(d, FiniteAtoms):
        raise UnsupportedCombinationError(
            "the quadratic-loss solver assumes a continuous type density; "
            "use the linear-loss atom solvers for discrete types"
        )


def solve_persuasion_first(
    d: TypeDistribution, prefs: ProposerPreferences
) -> SolveOutcome:
    """Optimal experiment-then-proposal outcome."""
    _require_continuous(d)
    theta_lo, theta_hi = d.support
    c1 = prefs.loss(1.0)
    if theta_hi <= 0.0:
        return SolveOutcome(Regime.STATUS_QUO_ONLY, None, None, 0.0, -c1, 1.0)
    mean = d.mean()
    if mean >= 0.5:
        return SolveOutcome(Regime.IDEAL_ACCEPTED, None, None, 1.0, 0.0, 0.0)
    if mean > 0.0 and no_info_optimal(d, prefs):
        proposal = min(2.0 * mean, 1.0)
        return SolveOutcome(
            Regime.NO_INFO, None, None, proposal, indirect_u(mean, prefs), 0.0
        )
    s_star, s_upper = solve_cutoff(d, prefs)
    veto = d.cdf(s_star)
    value = veto * (-c1) + (1.0 - veto) * indirect_u(s_upper, prefs)
    return SolveOutcome(
        Regime.BINARY_CUTOFF,
        s_star,
        s_upper,
        min(2.0 * s_upper, 1.0),
        value,
        veto,
    )


def _acceptance_cutoff(d: TypeDistribution, target_mean: float) -> float:
    """Smallest s with E[theta | theta >= s] >= target_mean (bisection)."""
    theta_lo, theta_hi = d.support
    if d.cond_mean_above(theta_lo) >= target_mean:
        return theta_lo
    lo, hi = theta_lo, theta_hi - 1e-12 * max(1.0, abs(theta_hi))
    for _ in range(_MAX_BISECT):
        if hi - lo <= _S_TOL:
            break
        mid = 0.5 * (lo + hi)
        if d.cond_mean_above(mid) >= target_mean:
            hi = mid
        else:
            lo = mid
    return hi


def _proposal_value(d: TypeDistribution, prefs: ProposerPreferences, p: float) -> float:
    """Best attainable payoff from committing to proposal p, then choosing
    the experiment that maximizes its acceptance probability."""
    mean = d.mean()
    if p <= 0.0:
        return -prefs.loss(1.0)
    if mean > 0.0 and p <= 2.0 * mean:
        return prefs.utility(p)
    _, theta_hi = d.support
    if p >= 2.0 * theta_hi:
        return -prefs.loss(1.0)
    s = _acceptance_cutoff(d, 0.5 * p)
    accept = 1.0 - d.cdf(s)
    return accept * prefs.utility(p) + (1.0 - accept) * (-prefs.loss(1.0))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> Tuple[float, float]:
    """Golden-section maximization of a unimodal f on [lo, hi]."""
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


def solve_proposal_first(
    d: TypeDistribution, prefs: ProposerPreferences
) -> SolveOutcome:
    """Optimal proposal-then-experiment outcome, computed independently.

    Optimizes the committed proposal over a dense grid followed by local
    golden-section refinement; for each proposal the best experiment is the
    acceptance-probability-maximizing cutoff.
    """
    _require_continuous(d)
    theta_lo, theta_hi = d.support
    c1 = prefs.loss(1.0)
    if theta_hi <= 0.0:
        return SolveOutcome(Regime.STATUS_QUO_ONLY, None, None, 0.0, -c1, 1.0)
    mean = d.mean()

    p_max = min(2.0 * theta_hi, 1.0)
    n = 801
    step = p_max / (n - 1)
    grid = [i * step for i in range(n)]
    vals = [_proposal_value(d, prefs, p) for p in grid]
    k = max(range(n), key=vals.__getitem__)
    lo = grid[max(0, k - 1)]
    hi = grid[min(n - 1, k + 1)]
    p_opt, value = _golden_max(lambda p: _proposal_value(d, prefs, p), lo, hi)

    if mean >= 0.5:
        return SolveOutcome(Regime.IDEAL_ACCEPTED, None, None, 1.0, 0.0, 0.0)
    if mean > 0.0 and p_opt <= 2.0 * mean + 1e-9:
        return SolveOutcome(Regime.NO_INFO, None, None, p_opt, value, 0.0)
    s_star = _acceptance_cutoff(d, 0.5 * p_opt)
    return SolveOutcome(
        Regime.BINARY_CUTOFF, s_star, 0.5 * p_opt, p_opt, value, d.cdf(s_star)
    )


def full_info_optimal(d: TypeDistribution, prefs: ProposerPreferences) -> bool:
    """Whether revealing theta exactly is optimal: U convex on the support.

    Tested numerically through second differences on a 400-point grid;
    requires theta_hi <= 1/2 (otherwise the flat top region breaks
    convexity regardless of the loss family).
    """
    theta_lo, theta_hi = d.support
    if theta_hi > 0.5:
        return False
    n = 400
    step = (theta_hi - theta_lo) / (n - 1)
    u = [indirect_u(theta_lo + i * step, prefs) for i in range(n)]
    return all(u[i - 1] + u[i + 1] - 2.0 * u[i] >= -1e-9 for i in range(1, n - 1))


def payoff_of_experiment(
    d: TypeDistribution, prefs: ProposerPreferences, e: Experiment
) -> float:
    """Expected Proposer payoff of a given experiment: sum over signals of
    P(signal) * U(posterior mean)."""
    if e.cutoffs is not None:
        theta_lo, theta_hi = d.support
        edges = [theta_lo, *sorted(e.cutoffs), theta_hi]
        total = 0.0
        for a, b in zip(edges, edges[1:]):
            mass = d.cdf(b) - d.cdf(a)
            if mass <= 0.0:
                continue
            cell_mean = (d.upper_partial_mean(a) - d.upper_partial_mean(b)) / mass
            total += mass * indirect_u(cell_mean, prefs)
        return total
    if e.signal_probs is not None:
        if not isinstance(d, FiniteAtoms):
            raise DomainError("signal maps apply to atom distributions only")
        if len(e.signal_probs) != len(d.points):
            raise DomainError("one signal probability per atom is required")
        total = 0.0
        for probs in (e.signal_probs, tuple(1.0 - q for q in e.signal_probs)):
            mass = sum(p * q for (_, p), q in zip(d.points, probs))
            if mass <= 0.0:
                continue
            m = sum(t * p * q for (t, p), q in zip(d.points, probs)) / mass
            total += mass * indirect_u(m, prefs)
        return total
    raise DomainError("experiment must define cutoffs or signal probabilities")

"""Distributions of the Vetoer bliss point.

Three variants are supported: a uniform interval, a finite list of atoms,
and an exponential likelihood-ratio tilt of a uniform interval.  All values
are immutable after construction and safe to share across workers.

Uniform and atom queries are exact algebra; tilted densities are integrated
with adaptive quadrature at absolute tolerance 1e-12 (tighter than the
1e-10 contract).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Tuple

from scipy.integrate import quad

from .errors import DomainError, FullMassBelowError

_QUAD_EPS = 1e-12
# A conditioning event with mass below this is treated as empty.
_MASS_EPS = 1e-12


class TypeDistribution(ABC):
    """Belief over the Vetoer's bliss point theta."""

    @property
    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """(theta_lo, theta_hi), the smallest interval carrying all mass."""

    @abstractmethod
    def cdf(self, x: float) -> float:
        ...

    @abstractmethod
    def mean(self) -> float:
        ...

    @abstractmethod
    def upper_partial_mean(self, s: float) -> float:
        """Integral of theta over the event {theta >= s}."""

    @abstractmethod
    def expect(self, fn: Callable[[float], float]) -> float:
        """E[fn(theta)]."""

    def cond_mean_above(self, s: float) -> float:
        """E[theta | theta >= s] (weak inequality: an atom at s is included)."""
        mass = 1.0 - self.cdf_below(s)
        if mass <= _MASS_EPS:
            raise FullMassBelowError(
                f"no mass at or above s={s!r}; cannot condition on theta >= s"
            )
        return self.upper_partial_mean(s) / mass

    def cdf_below(self, x: float) -> float:
        """P(theta < x); differs from cdf only at atoms."""
        return self.cdf(x)


@dataclass(frozen=True)
class UniformInterval(TypeDistribution):
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not self.hi > 0.0:
            raise DomainError("upper support bound must be positive")

    @property
    def support(self) -> Tuple[float, float]:
        return (self.lo, self.hi)

    def cdf(self, x: float) -> float:
        if x <= self.lo:
            return 0.0
        if x >= self.hi:
            return 1.0
        return (x - self.lo) / (self.hi - self.lo)

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def upper_partial_mean(self, s: float) -> float:
        a = max(s, self.lo)
        if a >= self.hi:
            return 0.0
        return 0.5 * (self.hi * self.hi - a * a) / (self.hi - self.lo)

    def cond_mean_above(self, s: float) -> float:
        a = max(s, self.lo)
        if 1.0 - self.cdf(s) <= _MASS_EPS:
            raise FullMassBelowError(f"no mass above s={s!r}")
        return 0.5 * (a + self.hi)

    def expect(self, fn: Callable[[float], float]) -> float:
        val, _ = quad(fn, self.lo, self.hi, epsabs=_QUAD_EPS, epsrel=_QUAD_EPS)
        return val / (self.hi - self.lo)


@dataclass(frozen=True)
class FiniteAtoms(TypeDistribution):
    """Atoms as ((theta_1, p_1), ...), strictly increasing in theta."""

    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self) -> None:
        pts = tuple((float(t), float(p)) for t, p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise DomainError("need at least one atom")
        thetas = [t for t, _ in pts]
        probs = [p for _, p in pts]
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise DomainError("atom locations must be strictly increasing")
        if any(p <= 0.0 for p in probs):
            raise DomainError("atom probabilities must be strictly positive")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise DomainError(f"atom probabilities sum to {sum(probs)}, not 1")

    @property
    def support(self) -> Tuple[float, float]:
        return (self.points[0][0], self.points[-1][0])

    def cdf(self, x: float) -> float:
        return sum(p for t, p in self.points if t <= x)

    def cdf_below(self, x: float) -> float:
        return sum(p for t, p in self.points if t < x)

    def mean(self) -> float:
        return sum(t * p for t, p in self.points)

    def upper_partial_mean(self, s: float) -> float:
        return sum(t * p for t, p in self.points if t >= s)

    def expect(self, fn: Callable[[float], float]) -> float:
        return sum(p * fn(t) for t, p in self.points)


@dataclass(frozen=True)
class ExponentialTilt(TypeDistribution):
    """Density proportional to f(theta) * exp(lam * theta), renormalized."""

    base: UniformInterval
    lam: float

    def __post_init__(self) -> None:
        if not isinstance(self.base, UniformInterval):
            raise DomainError(
                "tilt base must be a UniformInterval; tilt atoms by reweighting"
            )
        # Normalizer cached once; the value is immutable afterwards.
        lo, hi = self.base.support
        z, _ = quad(lambda t: math.exp(self.lam * t), lo, hi,
                    epsabs=_QUAD_EPS, epsrel=_QUAD_EPS)
        object.__setattr__(self, "_norm", z)

    @property
    def support(self) -> Tuple[float, float]:
        return self.base.support

    def _weight(self, lo: float, hi: float, fn=None) -> float:
        if hi <= lo:
            return 0.0
        lam = self.lam
        if fn is None:
            g = lambda t: math.exp(lam * t)
        else:
            g = lambda t: fn(t) * math.exp(lam * t)
        val, _ = quad(g, lo, hi, epsabs=_QUAD_EPS, epsrel=_QUAD_EPS)
        return val

    def cdf(self, x: float) -> float:
        lo, hi = self.support
        if x <= lo:
            return 0.0
        if x >= hi:
            return 1.0
        return self._weight(lo, x) / self._norm

    def mean(self) -> float:
        lo, hi = self.support
        return self._weight(lo, hi, fn=lambda t: t) / self._norm

    def upper_partial_mean(self, s: float) -> float:
        lo, hi = self.support
        return self._weight(max(s, lo), hi, fn=lambda t: t) / self._norm

    def cond_mean_above(self, s: float) -> float:
        lo, hi = self.support
        a = max(s, lo)
        mass = self._weight(a, hi)
        if mass / self._norm <= _MASS_EPS:
            raise FullMassBelowError(f"no mass above s={s!r}")
        return self._weight(a, hi, fn=lambda t: t) / mass

    def expect(self, fn: Callable[[float], float]) -> float:
        lo, hi = self.support
        return self._weight(lo, hi, fn=fn) / self._norm


def lr_tilt(d: TypeDistribution, lam: float) -> TypeDistribution:
    """Reweight d by exp(lam * theta).

    Larger lam produces a likelihood-ratio rightward shift.  Atom
    distributions are reweighted exactly; uniform bases get a tilt wrapper.
    """
    if isinstance(d, ExponentialTilt):
        raise DomainError("distribution is already a tilt; tilt the base instead")
    if isinstance(d, FiniteAtoms):
        raw = [(t, p * math.exp(lam * t)) for t, p in d.points]
        z = sum(p for _, p in raw)
        return FiniteAtoms(tuple((t, p / z) for t, p in raw))
    return ExponentialTilt(d, lam)


def from_literal(text: str) -> TypeDistribution:
    """Parse a CLI/config distribution literal.

    Accepted forms::

        uniform:<lo>,<hi>
        atoms:<theta1>:<p1>,<theta2>:<p2>,...
        tilt:<base literal>;<lam>
    """
    text = text.strip()
    if text.startswith("uniform:"):
        body = text[len("uniform:"):]
        try:
            lo_s, hi_s = body.split(",")
            return UniformInterval(float(lo_s), float(hi_s))
        except ValueError as exc:
            raise DomainError(f"bad uniform literal {text!r}") from exc
    if text.startswith("atoms:"):
        body = text[len("atoms:"):]
        try:
            pts = []
            for part in body.split(","):
                t_s, p_s = part.split(":")
                pts.append((float(t_s), float(p_s)))
            return FiniteAtoms(tuple(pts))
        except ValueError as exc:
            raise DomainError(f"bad atoms literal {text!r}") from exc
    if text.startswith("tilt:"):
        body = text[len("tilt:"):]
        base_s, _, lam_s = body.rpartition(";")
        if not base_s:
            raise DomainError(f"bad tilt literal {text!r}")
        try:
            lam = float(lam_s)
        except ValueError as exc:
            raise DomainError(f"bad tilt parameter in {text!r}") from exc
        return lr_tilt(from_literal(base_s), lam)
    raise DomainError(f"unrecognized distribution literal {text!r}")

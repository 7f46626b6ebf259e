"""Proposer loss families and the induced policy utility.

The Proposer's ideal policy is 1 and her payoff from policy a in [0, 1] is
u(a) = -c(1 - a) for a convex, strictly increasing loss c with c(0) = 0.
Three families are provided:

* ``Linear``        c(x) = x                 (risk neutral over policy)
* ``Power(gamma)``  c(x) = x**gamma, gamma >= 1
* ``Exponential(alpha)`` u(a) = -(exp(alpha*(1-a)) - 1)/alpha, which has
  constant absolute risk aversion alpha.  This family exists to give a
  cleanly ordered risk-aversion comparative static; it is an extension
  beyond the linear/power menu.

All preference values are immutable and freely shareable.  Derivative
queries at the Linear kink (a = 1) use the left derivative: proposals never
exceed 1, so only the left limit is ever payoff relevant.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, SingularityError


class VetoerLoss(Enum):
    QUADRATIC = "quadratic"
    ABSOLUTE = "absolute"


class ProposerPreferences(ABC):
    """Convex loss c over |1 - a| and the induced utility u(a) = -c(1-a)."""

    @abstractmethod
    def _loss(self, x: float) -> float:
        ...

    @abstractmethod
    def _loss_deriv(self, x: float) -> float:
        ...

    @abstractmethod
    def risk_aversion(self, a: float) -> float:
        """-u''(a)/u'(a) for a in [0, 1)."""

    def loss(self, x: float) -> float:
        if x < 0.0:
            raise DomainError(f"loss argument must be >= 0, got {x}")
        return self._loss(x)

    def loss_deriv(self, x: float) -> float:
        if x < 0.0:
            raise DomainError(f"loss argument must be >= 0, got {x}")
        return self._loss_deriv(x)

    def utility(self, a: float) -> float:
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"policy must lie in [0, 1], got {a}")
        return -self._loss(1.0 - a)

    def utility_deriv(self, a: float) -> float:
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"policy must lie in [0, 1], got {a}")
        return self._loss_deriv(1.0 - a)


@dataclass(frozen=True)
class Linear(ProposerPreferences):
    def _loss(self, x: float) -> float:
        return x

    def _loss_deriv(self, x: float) -> float:
        return 1.0

    def risk_aversion(self, a: float) -> float:
        if not 0.0 <= a < 1.0:
            raise DomainError(f"risk aversion defined on [0, 1), got {a}")
        return 0.0


@dataclass(frozen=True)
class Power(ProposerPreferences):
    gamma: float

    def __post_init__(self) -> None:
        if self.gamma < 1.0:
            raise DomainError(f"power loss needs gamma >= 1, got {self.gamma}")

    def _loss(self, x: float) -> float:
        return x ** self.gamma

    def _loss_deriv(self, x: float) -> float:
        if x == 0.0 and self.gamma < 2.0 and self.gamma != 1.0:
            # x**(gamma-1) is still finite for gamma > 1; guard 0**negative.
            return 0.0
        return self.gamma * x ** (self.gamma - 1.0)

    def risk_aversion(self, a: float) -> float:
        if a >= 1.0:
            raise SingularityError("power-loss risk aversion diverges at a = 1")
        if a < 0.0:
            raise DomainError(f"risk aversion defined on [0, 1), got {a}")
        return (self.gamma - 1.0) / (1.0 - a)


@dataclass(frozen=True)
class Exponential(ProposerPreferences):
    alpha: float

    def __post_init__(self) -> None:
        if self.alpha <= 0.0:
            raise DomainError(f"CARA coefficient must be > 0, got {self.alpha}")

    def _loss(self, x: float) -> float:
        return math.expm1(self.alpha * x) / self.alpha

    def _loss_deriv(self, x: float) -> float:
        return math.exp(self.alpha * x)

    def risk_aversion(self, a: float) -> float:
        if not 0.0 <= a < 1.0:
            raise DomainError(f"risk aversion defined on [0, 1), got {a}")
        return self.alpha


def from_literal(text: str) -> ProposerPreferences:
    """Parse a CLI/config loss literal: ``linear``, ``power:<g>``, ``exp:<a>``."""
    text = text.strip()
    if text == "linear":
        return Linear()
    if text.startswith("power:"):
        try:
            return Power(float(text[len("power:"):]))
        except ValueError as exc:
            raise DomainError(f"bad power literal {text!r}") from exc
    if text.startswith("exp:"):
        try:
            return Exponential(float(text[len("exp:"):]))
        except ValueError as exc:
            raise DomainError(f"bad exponential literal {text!r}") from exc
    raise DomainError(f"unrecognized loss literal {text!r}")

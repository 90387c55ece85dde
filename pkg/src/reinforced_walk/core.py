"""Shared parameter, scaling and numeric-configuration types."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

log = logging.getLogger(__name__)

INTEGER_TOL = 1e-12


class DomainError(ValueError):
    """An input lies outside the domain of the requested operation."""


class ConvergenceError(ArithmeticError):
    """A series or quadrature did not reach its tolerance within budget."""


class CapacityError(MemoryError):
    """A table would exceed the configured memory budget."""


class SingularityError(ArithmeticError):
    """A series division left a nonzero remainder."""


def _near_integer(v: float) -> bool:
    return v >= -INTEGER_TOL and abs(v - round(v)) <= INTEGER_TOL


@dataclass(frozen=True)
class ReinforcementParam:
    """Reinforcement strength ``delta`` with the aliases ``m = delta/4`` and ``n = delta/2``.

    ``exact`` holds ``delta`` as a :class:`~fractions.Fraction` and is what the
    rational-arithmetic paths use.
    """

    delta: float
    m: float
    n: float
    is_integer_n: bool
    is_integer_m: bool
    exact: Fraction

    def int_m(self) -> int:
        if not self.is_integer_m:
            raise DomainError(f"m = delta/4 = {self.m!r} is not a non-negative integer")
        return int(round(self.m))

    def int_n(self) -> int:
        if not self.is_integer_n:
            raise DomainError(f"n = delta/2 = {self.n!r} is not a non-negative integer")
        return int(round(self.n))

    @property
    def up_at_max(self) -> float:
        """Probability of stepping onto a fresh edge from the running maximum."""
        return 1.0 / (2.0 + self.delta)

    @property
    def down_at_max(self) -> float:
        return (1.0 + self.delta) / (2.0 + self.delta)


def _as_fraction(delta) -> Fraction:
    if isinstance(delta, Fraction):
        return delta
    if isinstance(delta, (int, Rational)):
        return Fraction(delta)
    # repr() keeps the shortest decimal, so 0.1 becomes 1/10 rather than the binary value
    return Fraction(repr(float(delta)))


def make_param(delta) -> ReinforcementParam:
    """Build a :class:`ReinforcementParam`; ``delta`` may be int, float or Fraction."""
    if isinstance(delta, ReinforcementParam):
        return delta
    try:
        d = float(delta)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"delta must be a real number, got {delta!r}") from exc
    if not math.isfinite(d) or d <= -1.0:
        raise DomainError(f"delta must satisfy delta > -1, got {delta!r}")
    if d < -1.0 + 1e-6:
        log.warning("delta=%r is close to -1: the walk almost never steps back from its maximum", d)
    m, n = d / 4.0, d / 2.0
    return ReinforcementParam(
        delta=d,
        m=m,
        n=n,
        is_integer_n=_near_integer(n),
        is_integer_m=_near_integer(m),
        exact=_as_fraction(delta),
    )


@dataclass(frozen=True)
class GammaPoint:
    """A time/maximum pair together with its similarity variable ``gamma = 2 b^2 / (pi t)``."""

    t: float
    b_or_a_scaled: float
    gamma: float

    @property
    def b(self) -> float:
        return self.b_or_a_scaled


def gamma_of(t: float, b: float) -> GammaPoint:
    """Return the similarity variable for time ``t`` and maximum ``b``.

    On the lattice, pass ``t=N`` and ``b=a``; the same formula gives ``a^2/N = gamma*pi/2``.
    """
    if not (t > 0 and b > 0):
        raise DomainError(f"gamma_of needs t > 0 and b > 0, got t={t!r}, b={b!r}")
    t, b = float(t), float(b)
    return GammaPoint(t=t, b_or_a_scaled=b, gamma=2.0 * b * b / (math.pi * t))


@dataclass(frozen=True)
class NumericConfig:
    series_tol: float = 1e-12
    quad_tol: float = 1e-10
    ilt_terms: int = 32
    max_terms: int = 10_000

    def __post_init__(self):
        if not (self.series_tol > 0 and self.quad_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if self.ilt_terms < 4 or self.ilt_terms % 2:
            raise DomainError("ilt_terms must be an even integer >= 4")


DEFAULT_CONFIG = NumericConfig()

"""Moments of the Brownian-limit marginals.

``max_moment`` integrates the exact representation of ``E(b^k)``; ``walker_mean`` and
``walker_second_moment`` give ``E(y)`` and ``E(y^2)`` at reinforcement ``delta = 4m``.
Large-m expansions live in separate ``*_asymptotic`` helpers.

Several functions accept ``printed=True``. That switch reproduces an alternative,
as-published form of a formula (see the README section on published constants);
the default always returns the value of the underlying integral.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .core import DEFAULT_CONFIG, DomainError, NumericConfig

log = logging.getLogger(__name__)

CATALAN = 0.915965594177219015054603514932384110774


@dataclass(frozen=True)
class MomentResult:
    value: float
    method: str  # quadrature | closed_form | asymptotic
    t: float
    m: float
    k: int
    tolerance: float = 0.0

    def __float__(self) -> float:
        return self.value


def _check(t: float, m: float) -> None:
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    if not m >= 0:
        raise DomainError(f"m must be non-negative, got {m!r}")


def _quad(f, a, b, cfg: NumericConfig, **kw) -> tuple[float, float]:
    return integrate.quad(f, a, b, epsabs=cfg.quad_tol * 1e-2, epsrel=cfg.quad_tol, limit=400, **kw)


# ------------------------------------------------------------ maximum


def _max_prefactor(k: float, t: float, m: float) -> float:
    return (1.0 + 2.0 * m) * t ** (k / 2.0) / (2.0 ** (k / 2.0) * math.gamma(k / 2.0 + 1.0))


def max_moment(k: int, t: float, m: float, cfg: NumericConfig = DEFAULT_CONFIG) -> MomentResult:
    """``E(b^k) = (1+2m) t^(k/2) / (2^(k/2) Gamma(k/2+1)) * int_0^inf acosh(1+z)^k (1+z)^-(2+2m) dz``.

    The z-range is split at 1; on (0, 1) the substitution ``z = w^2`` removes the
    ``z^(k/2)`` cusp, on (1, inf) ``z = e^u - 1`` turns the algebraic tail into an
    exponential one. The integral converges for every ``k >= 0`` once ``m > -1/2``.
    """
    _check(t, m)
    if k < 0:
        raise DomainError(f"k must be non-negative, got {k!r}")
    if k == 0:
        return MomentResult(1.0, "closed_form", t, m, 0)
    p = 2.0 + 2.0 * m

    def inner(w):
        z = w * w
        return 2.0 * w * np.arccosh(1.0 + z) ** k * (1.0 + z) ** (-p)

    def outer(u):
        # z = e^u - 1, dz = e^u du
        if u > 700:
            return 0.0
        z = math.expm1(u)
        return math.acosh(1.0 + z) ** k * math.exp((1.0 - p) * u)

    a, ea = _quad(inner, 0.0, 1.0, cfg)
    b, eb = _quad(outer, math.log(2.0), np.inf, cfg)
    pref = _max_prefactor(k, t, m)
    return MomentResult(pref * (a + b), "quadrature", t, m, k, pref * (ea + eb))


def max_moment_laplace(k: int, t: float, m: float, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Same moment from the hyperbolic form ``int_0^inf X^k sinh X sech(X)^(2+2m) dX``
    (the Laplace-domain representation of the maximum's law)."""
    _check(t, m)
    p = 2.0 + 2.0 * m

    def f(x):
        # sinh x / cosh^p x in log space
        lc = x - math.log(2.0) + math.log1p(math.exp(-2.0 * x))
        ls = x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x)) if x > 0 else -np.inf
        return x**k * math.exp(ls - p * lc) if x > 0 else 0.0

    v, _ = _quad(f, 0.0, 60.0, cfg, points=[1.0, 5.0])
    return _max_prefactor(k, t, m) * v


def max_moment_asymptotic(k: int, t: float, m: float, printed: bool = False) -> MomentResult:
    """Two-term large-m expansion ``(t/(2m+1))^(k/2) * (1 + c k (k/2+1) / (2m+1))``.

    ``c = 1/6`` follows from expanding ``acosh(1+z)`` to second order; ``printed=True``
    uses ``c = 5/24``.
    """
    _check(t, m)
    c = 5.0 / 24.0 if printed else 1.0 / 6.0
    v = (t / (2 * m + 1)) ** (k / 2.0) * (1.0 + c * k * (k / 2.0 + 1.0) / (2 * m + 1))
    return MomentResult(v, "asymptotic", t, m, k)


def max_dispersion(m: float, printed: bool = False) -> float:
    """Large-m coefficient of variation of the maximum, ``sigma_b / E(b)``.

    From the two-term expansion: ``sqrt(1 / (6 (2m+1)))``; ``printed=True`` gives
    ``sqrt(5 / (24 (2m+1)))``.
    """
    if not m >= 0:
        raise DomainError("m must be non-negative")
    c = 5.0 / 24.0 if printed else 1.0 / 6.0
    return math.sqrt(c / (2 * m + 1))


def max_dispersion_exact(m: float, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """``sigma_b / E(b)`` from the quadrature moments (t-independent)."""
    e1 = max_moment(1, 1.0, m, cfg).value
    e2 = max_moment(2, 1.0, m, cfg).value
    return math.sqrt(e2 - e1 * e1) / e1


def acosh_maclaurin(z, order: int = 3):
    """Truncated expansion ``acosh(1+z) = sqrt(2z) (1 - z/12 + 3 z^2/160 - ...)``."""
    z = np.asarray(z, dtype=float)
    coeffs = [1.0, -1.0 / 12.0, 3.0 / 160.0, -5.0 / 896.0]
    s = sum(c * z**i for i, c in enumerate(coeffs[:order]))
    return np.sqrt(2.0 * z) * s


# ------------------------------------------------------------ walker


def _half_factorial_ratio(m: float) -> float:
    # (m-1)!/(m-1/2)! - (m-1/2)!/m!
    return math.exp(math.lgamma(m) - math.lgamma(m + 0.5)) - math.exp(math.lgamma(m + 0.5) - math.lgamma(m + 1.0))


def walker_mean_closed(t: float, m: float, printed: bool = False) -> float:
    """``E_m(y) = m sqrt(2t) [(m-1)!/(m-1/2)! - (m-1/2)!/m!]`` (any real ``m > 0``).

    ``printed=True`` uses the prefactor ``m sqrt(t/2)`` (half the value).
    """
    _check(t, m)
    if m == 0:
        return math.sqrt(2.0 * t / math.pi)
    pref = math.sqrt(t / 2.0) if printed else math.sqrt(2.0 * t)
    return m * pref * _half_factorial_ratio(m)


def walker_mean_integral(t: float, m: float, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """``E_m(y) = 2^(2m+2) t m / sqrt(2 pi t) * int_0^1 (1-u)^2 u^(2m-1) (1+u^2)^-(2m+1) du``."""
    _check(t, m)
    if m == 0:
        return math.sqrt(2.0 * t / math.pi)
    if m < 1.0:
        # u = v^(1/(2m)) absorbs the u^(2m-1) endpoint: m u^(2m-1) du = dv / 2
        def f(v):
            u = v ** (1.0 / (2.0 * m))
            return 0.5 * (1.0 - u) ** 2 * (1.0 + u * u) ** (-(2.0 * m + 1.0))

        val, _ = _quad(f, 0.0, 1.0, cfg)
        return 2.0 ** (2 * m + 2) * t / math.sqrt(2.0 * math.pi * t) * val

    # (2u/(1+u^2))^(2m+1) keeps the integrand O(1) for large m
    def g(u):
        if u == 0.0:
            return 0.0
        return ((1.0 - u) / u) ** 2 * (2.0 * u / (1.0 + u * u)) ** (2.0 * m + 1.0)

    val, _ = _quad(g, 0.0, 1.0, cfg)
    return 2.0 * m * math.sqrt(t / (2.0 * math.pi)) * val


def walker_mean(t: float, m: float, cfg: NumericConfig = DEFAULT_CONFIG, printed: bool = False) -> MomentResult:
    """Mean walker position. Integer ``m`` uses the closed form, real ``m`` the integral;
    ``m = 0`` is the half-Gaussian mean ``sqrt(2t/pi)``."""
    _check(t, m)
    if m == 0:
        return MomentResult(math.sqrt(2.0 * t / math.pi), "closed_form", t, m, 1)
    if float(m).is_integer() or printed:
        return MomentResult(walker_mean_closed(t, m, printed), "closed_form", t, m, 1)
    return MomentResult(walker_mean_integral(t, m, cfg), "quadrature", t, m, 1, cfg.quad_tol)


def walker_mean_asymptotic(t: float, m: float, printed: bool = False) -> MomentResult:
    """``E_m(y) ~ c sqrt(t / 2m)`` with ``c = 1/2`` (``printed=True``: ``c = 1/4``)."""
    _check(t, m)
    c = 0.25 if printed else 0.5
    return MomentResult(c * math.sqrt(t / (2.0 * m)), "asymptotic", t, m, 1)


def _second_moment_integral(m: float, cfg: NumericConfig) -> float:
    """``I_m = int_0^1 int_0^1 (1+x^2 z^2)^-(2m+1) (1-x)(1-z) x^(2m-1) z^(2m) dx dz``.

    With ``p = xz`` the x-integral is elementary and
    ``I_m = int_0^1 p^(2m) (1+p^2)^-(2m+1) (log p + (1-p^2)/(2p)) dp``.
    """
    if m < 1.0:
        # p = v^(1/(2m)); p^(2m-1) dp = dv / (2m)
        def f(v):
            if v == 0.0:
                return 0.5 / (2.0 * m)
            p = v ** (1.0 / (2.0 * m))
            return (p * math.log(p) + 0.5 * (1.0 - p * p)) * (1.0 + p * p) ** (-(2.0 * m + 1.0)) / (2.0 * m)

        val, _ = _quad(f, 0.0, 1.0, cfg)
        return val

    def g(p):
        if p == 0.0:
            return 0.0
        w = (2.0 * p / (1.0 + p * p)) ** (2.0 * m + 1.0)
        return w * (math.log(p) + (1.0 - p * p) / (2.0 * p)) / p

    val, _ = _quad(g, 0.0, 1.0, cfg)
    return val / 2.0 ** (2 * m + 1)


def second_moment_double_integral(m: float, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """``I_m`` by plain 2-D adaptive quadrature (cross-check of the reduced form; m >= 1/2)."""
    if m < 0.5:
        raise DomainError("2-D form needs m >= 1/2")
    val, _ = integrate.dblquad(
        lambda x, z: (1 + x * x * z * z) ** (-(2 * m + 1)) * (1 - x) * (1 - z) * x ** (2 * m - 1) * z ** (2 * m),
        0.0,
        1.0,
        0.0,
        1.0,
        epsabs=1e-14,
        epsrel=1e-12,
    )
    return val


def walker_second_moment(
    t: float, m: float, cfg: NumericConfig = DEFAULT_CONFIG, printed: bool = False, method: str = "quadrature"
) -> MomentResult:
    """``E_m(y^2) = 2m 2^(2m+1) t I_m`` with ``I_m`` the double integral above.

    ``printed=True`` replaces the leading ``2m`` by ``2m+1`` (not defined at ``m = 0``).
    ``method="asymptotic"`` returns ``t / (3(2m+1))``. ``m = 0`` gives ``t``.
    """
    _check(t, m)
    if method == "asymptotic":
        return MomentResult(t / (3.0 * (2 * m + 1)), "asymptotic", t, m, 2)
    if method != "quadrature":
        raise DomainError(f"unknown method {method!r}")
    if m == 0:
        if printed:
            raise DomainError("the (2m+1)-prefactor form diverges at m = 0")
        return MomentResult(t, "closed_form", t, m, 2)
    lead = (2.0 * m + 1.0) if printed else 2.0 * m
    val = lead * 2.0 ** (2 * m + 1) * t * _second_moment_integral(m, cfg)
    return MomentResult(val, "quadrature", t, m, 2, cfg.quad_tol * max(1.0, val))


def walker_moment_laplace(k: int, t: float, m: float, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """``E(y^k)`` for ``k in {0, 1, 2}`` from the Laplace-domain joint law, reduced to
    ``(2+4m) t^(k/2) / (2^((k+2)/2) Gamma(k/2+1)) * int_0^inf F_k(X) sech(X)^(2+2m) dX``."""
    _check(t, m)
    Fk = {
        0: lambda x: math.sinh(x),
        1: lambda x: x * math.sinh(x) - math.cosh(x) + 1.0,
        2: lambda x: x * x * math.sinh(x) - 2.0 * x * math.cosh(x) + 2.0 * math.sinh(x),
    }
    if k not in Fk:
        raise DomainError("walker_moment_laplace supports k in {0, 1, 2}")
    p = 2.0 + 2.0 * m

    def f(x):
        if x > 30.0:
            # F_k ~ x^k e^x / 2, sech^p ~ 2^p e^(-p x)
            lead = {0: 1.0, 1: x - 1.0, 2: x * x - 2.0 * x + 2.0}[k]
            return lead * 2.0 ** (p - 1.0) * math.exp((1.0 - p) * x)
        logcosh = x - math.log(2.0) + math.log1p(math.exp(-2.0 * x))
        return Fk[k](x) * math.exp(-p * logcosh)

    v, _ = _quad(f, 0.0, 200.0, cfg, points=[1.0, 5.0, 30.0])
    pref = (2.0 + 4.0 * m) * t ** (k / 2.0) / (2.0 ** ((k + 2) / 2.0) * math.gamma(k / 2.0 + 1.0))
    return pref * v


def walker_dispersion(m: float | None = None, printed: bool = False) -> float:
    """Large-m limit of ``sigma_y / E(y)``.

    With ``E(y^2) ~ t/(3(2m+1))`` and ``E(y) ~ (1/2) sqrt(t/2m)`` the ratio tends to
    ``sqrt(1/3)``. ``printed=True`` returns ``sqrt(13/3)``. ``m`` is accepted for
    interface symmetry and ignored.
    """
    return math.sqrt(13.0 / 3.0) if printed else math.sqrt(1.0 / 3.0)


def walker_dispersion_exact(m: float, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    e1 = walker_mean(1.0, m, cfg).value
    e2 = walker_second_moment(1.0, m, cfg).value
    return math.sqrt(e2 - e1 * e1) / e1



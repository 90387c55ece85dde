"""Brownian-limit densities: Laplace-domain joint law, the maximum marginal ``Q(t, b)``,
the walker marginal ``P_m(t, y)``, and a fixed-Talbot inverse Laplace transform.

The similarity variable is ``gamma = 2 b^2 / (pi t)`` throughout.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .core import (
    DEFAULT_CONFIG,
    ConvergenceError,
    DomainError,
    NumericConfig,
    gamma_of,
    make_param,
)

log = logging.getLogger(__name__)

LOG2 = math.log(2.0)
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SeriesValue:
    value: float
    terms_used: int
    tail_bound: float
    method: str  # direct_series | poisson_series | ilt_oracle | closed_form
    gamma: float | None = None

    def __float__(self) -> float:
        return self.value


# ------------------------------------------------------------ Laplace domain


def logcosh(w):
    """``log cosh w`` for real or complex ``w`` with ``Re w >= 0``, without overflow."""
    w = np.asarray(w)
    if np.iscomplexobj(w):
        return w - LOG2 + np.log1p(np.exp(-2.0 * w))
    a = np.abs(w)
    return a - LOG2 + np.log1p(np.exp(-2.0 * a))


def logsinh(w):
    """``log sinh w`` for ``Re w > 0`` (principal branch continued from the positive axis)."""
    w = np.asarray(w)
    return w - LOG2 + np.log1p(-np.exp(-2.0 * w))


def laplace_joint(s, y: float, b: float, delta):
    """Laplace transform in time of the joint density of walker ``y`` and maximum ``b``:
    ``(2+delta) cosh(y sqrt(2s)) / cosh(b sqrt(2s))^(2+delta/2)``; zero for ``y > b``.

    ``s`` may be a real or complex scalar or array with positive real part
    (or any point of the Talbot contour).
    """
    param = make_param(delta)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b!r}")
    if y < 0:
        raise DomainError(f"y must be non-negative, got {y!r}")
    s = np.asarray(s)
    if y > b:
        return np.zeros_like(s, dtype=complex if np.iscomplexobj(s) else float)[()]
    r = np.sqrt(2.0 * s)
    out = (2.0 + param.delta) * np.exp(logcosh(y * r) - (2.0 + param.delta / 2.0) * logcosh(b * r))
    return out[()]


def laplace_max(s, b: float, delta):
    """Laplace transform of ``Q(t, b)``:
    ``(2+delta) sinh(b sqrt(2s)) / (sqrt(2s) cosh(b sqrt(2s))^(2+delta/2))``."""
    param = make_param(delta)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b!r}")
    s = np.asarray(s)
    r = np.sqrt(2.0 * s)
    out = (2.0 + param.delta) / r * np.exp(logsinh(b * r) - (2.0 + param.delta / 2.0) * logcosh(b * r))
    return out[()]


# ------------------------------------------------------------ inverse Laplace


def _talbot(F: Callable, t: float, M: int) -> float:
    # Fixed Talbot contour s(th) = r th (cot th + i), r = 2M / (5t).
    k = np.arange(1, M)
    th = k * np.pi / M
    cot = 1.0 / np.tan(th)
    r = 2.0 * M / (5.0 * t)
    s = r * th * (cot + 1j)
    sigma = th + (th * cot - 1.0) * cot
    f0 = np.real(F(np.array([r], dtype=complex)))[0]
    fk = np.asarray(F(s), dtype=complex)
    total = 0.5 * math.exp(r * t) * f0 + np.sum(np.real(np.exp(t * s) * fk * (1.0 + 1j * sigma)))
    return float(r / M * total)


# Talbot error falls geometrically in M, so the comparison rule with 3/4 of the
# nodes is much less accurate than the main one; the check screens gross failures.
ILT_CHECK_RTOL = 1e-5


def ilt(F: Callable, t: float, cfg: NumericConfig = DEFAULT_CONFIG, check: bool = True) -> float:
    """Inverse Laplace transform at ``t`` by the fixed Talbot rule with ``cfg.ilt_terms`` nodes.

    ``F`` must accept a complex numpy array. With ``check`` the result is compared
    against the rule with three quarters as many nodes; a difference above ``ILT_CHECK_RTOL``
    (relative to ``max(1, |value|)``) raises :class:`ConvergenceError`.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    M = cfg.ilt_terms
    value = _talbot(F, t, M)
    if check:
        coarse = _talbot(F, t, max(4, 2 * round(0.375 * M)))
        if not math.isfinite(value) or abs(value - coarse) > ILT_CHECK_RTOL * max(1.0, abs(value)):
            raise ConvergenceError(f"Talbot inversion unstable at t={t}: {value!r} vs {coarse!r}")
    return value


def joint_density(t: float, y: float, b: float, delta, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Joint density ``P(t, y, b)`` by numerical inversion of :func:`laplace_joint`."""
    if y > b:
        return 0.0
    param = make_param(delta)
    return ilt(lambda s: laplace_joint(s, y, b, param), t, cfg)


def max_density_ilt(t: float, b: float, delta, cfg: NumericConfig = DEFAULT_CONFIG, route: str = "laplace") -> float:
    """``Q(t, b)`` without series: ``route="laplace"`` inverts :func:`laplace_max`;
    ``route="quadrature"`` integrates :func:`joint_density` over ``0 <= y <= b``."""
    param = make_param(delta)
    if route == "laplace":
        return ilt(lambda s: laplace_max(s, b, param), t, cfg)
    if route == "quadrature":
        val, _ = integrate.quad(
            lambda y: joint_density(t, y, b, param, cfg), 0.0, b, epsabs=cfg.quad_tol, epsrel=cfg.quad_tol, limit=200
        )
        return val
    raise DomainError(f"unknown route {route!r}")


GAMMA_FLOOR = 0.01


def walker_density_ilt(t: float, y: float, delta, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """``P(t, y)`` by integrating :func:`joint_density` over ``b >= y``."""
    param = make_param(delta)
    scale = math.sqrt(t)
    # Below gamma = GAMMA_FLOOR the maximum has density of order exp(-pi / (4 gamma)),
    # and the transform is too flat on the contour to invert reliably.
    lo = max(y, math.sqrt(GAMMA_FLOOR * math.pi * t / 2.0))
    hi = lo + 14.0 * scale
    pts = [lo, lo + 0.5 * scale, lo + 2.0 * scale, lo + 5.0 * scale, hi]
    total = 0.0
    for lo, up in zip(pts[:-1], pts[1:]):
        v, _ = integrate.quad(
            lambda b: joint_density(t, y, b, param, cfg), lo, up, epsabs=cfg.quad_tol, epsrel=cfg.quad_tol, limit=200
        )
        total += v
    return total


# ------------------------------------------------------------ maximum marginal Q


def _gen_binom_step(c: float, n: float, j: int) -> float:
    # C(j+n, j) from C(j-1+n, j-1)
    return c * (n + j) / j


def q_series(t: float, b: float, delta, cfg: NumericConfig = DEFAULT_CONFIG) -> SeriesValue:
    """``Q(t, b)`` from the large-gamma series

    ``b Q = 2^(1+n) sqrt(gamma) sum_j (-1)^j C(j+n, j) (2j+1+n) exp(-pi gamma (2j+1+n)^2 / 4)``

    with ``n = delta/2``. Fast for large gamma; raises :class:`ConvergenceError`
    when ``max_terms`` is reached first.
    """
    param = make_param(delta)
    g = gamma_of(t, b).gamma
    n = param.n
    kappa = math.pi * g / 4.0
    pref = 2.0 ** (1.0 + n) * math.sqrt(g) / b
    total = 0.0
    abs_sum = 0.0
    c = 1.0
    j = 0
    while True:
        if j >= cfg.max_terms:
            raise ConvergenceError(f"q_series: {cfg.max_terms} terms at gamma={g:.4g}, delta={param.delta}")
        w = 2 * j + 1 + n
        term = c * w * math.exp(-kappa * w * w)
        total += term if j % 2 == 0 else -term
        abs_sum += term
        # ratio bound for all later terms: decreasing in j
        c_next = _gen_binom_step(c, n, j + 1)
        w_next = w + 2.0
        nxt = c_next * w_next * math.exp(-kappa * w_next * w_next)
        ratio = max(1.0, (j + 2 + n) / (j + 2)) * (w_next + 2.0) / w_next * math.exp(-kappa * (4.0 * w_next + 4.0))
        j += 1
        c = c_next
        if ratio < 1.0 and pref * nxt <= cfg.series_tol * max(1.0, abs(pref * total)):
            break
    value = pref * total
    rounding = 8 * EPS * pref * abs_sum
    if rounding > 10 * cfg.series_tol * max(1.0, abs(value)):
        raise ConvergenceError(f"q_series: cancellation {rounding:.2e} at gamma={g:.4g}, delta={param.delta}")
    log.debug("q_series gamma=%.6g delta=%g terms=%d", g, param.delta, j)
    return SeriesValue(value=value, terms_used=j, tail_bound=pref * nxt, method="direct_series", gamma=g)


def _product_poly(m: int) -> list[int]:
    """Integer coefficients ``e_p`` of ``prod_{k=1..m} (W - (2k-1)^2)`` in powers of ``W``."""
    coeffs = [1]
    for k in range(1, m + 1):
        root = (2 * k - 1) ** 2
        nxt = [0] * (len(coeffs) + 1)
        for p, c in enumerate(coeffs):
            nxt[p + 1] += c
            nxt[p] -= root * c
        coeffs = nxt
    return coeffs


def _derivative_table(p_max: int) -> list[list[float]]:
    """``d^p/dg^p [g^(-3/2) e^(-c/g)] = sum_i T[p][i] c^i g^(-3/2-p-i) e^(-c/g)``."""
    table = [[1.0]]
    for q in range(p_max):
        old = table[-1]
        new = [0.0] * (len(old) + 1)
        for i, v in enumerate(old):
            new[i] += -(1.5 + q + i) * v
            new[i + 1] += v
        table.append(new)
    return table


def q_poisson(t: float, b: float, m_int: int, cfg: NumericConfig = DEFAULT_CONFIG) -> SeriesValue:
    """``Q(t, b)`` for ``delta = 4m`` (integer ``m``) from the Poisson-transformed series.

    ``b Q = (-1)^m sqrt(gamma)/(2m)! sum_p e_p A_p(gamma)`` where ``e_p`` expands
    ``prod_k (w^2 - (2k-1)^2)`` and ``A_p = (-4/pi)^p d^p A/dgamma^p`` with
    ``A(gamma) = 2 gamma^(-3/2) sum_{j>=0} (-1)^j (2j+1) exp(-pi (2j+1)^2 / (4 gamma))``.
    Fast for small gamma.
    """
    if isinstance(m_int, float) and not m_int.is_integer():
        raise DomainError(f"q_poisson needs integer m, got {m_int!r}")
    m = int(m_int)
    if m < 0:
        raise DomainError(f"q_poisson needs m >= 0, got {m_int!r}")
    g = gamma_of(t, b).gamma
    e = _product_poly(m)
    dtab = _derivative_table(m)
    # per-term polynomial in c = pi w^2 / 4:  sum_p e_p (-4/pi)^p sum_i T[p][i] c^i g^(-p-i)
    poly = [0.0] * (m + 1)
    for p, ep in enumerate(e):
        fac = ep * (-4.0 / math.pi) ** p
        for i, tv in enumerate(dtab[p]):
            poly[i] += fac * tv * g ** (-p - i)
    pref = (-1) ** m * math.sqrt(g) / math.factorial(2 * m) * 2.0 * g ** (-1.5) / b

    def majorant(w):
        c = math.pi * w * w / 4.0
        return w * sum(abs(pv) * c**i for i, pv in enumerate(poly)) * math.exp(-c / g)

    total = 0.0
    j = 0
    while True:
        if j >= cfg.max_terms:
            raise ConvergenceError(f"q_poisson: {cfg.max_terms} terms at gamma={g:.4g}, m={m}")
        w = 2 * j + 1
        c = math.pi * w * w / 4.0
        term = w * sum(pv * c**i for i, pv in enumerate(poly)) * math.exp(-c / g)
        total += term if j % 2 == 0 else -term
        j += 1
        w_next = w + 2.0
        nxt = majorant(w_next)
        # each c^i w e^{-c/g} decreases once w^2 > 2 g (2i+1) / pi
        monotone = w_next * w_next > 2.0 * g * (2 * m + 1) / math.pi
        ratio = ((w_next + 2.0) / w_next) ** (2 * m + 1) * math.exp(-math.pi * (4.0 * w_next + 4.0) / (4.0 * g))
        if monotone and ratio < 1.0:
            tail = abs(pref) * nxt / (1.0 - ratio)
            if tail <= cfg.series_tol * max(1.0, abs(pref * total)):
                break
    value = pref * total
    log.debug("q_poisson gamma=%.6g m=%d terms=%d", g, m, j)
    return SeriesValue(value=value, terms_used=j, tail_bound=tail, method="poisson_series", gamma=g)


def q_poisson_components(t: float, b: float, m_int: int, cfg: NumericConfig = DEFAULT_CONFIG) -> dict:
    """Split ``b Q`` from :func:`q_poisson` into its pieces ``(p, i)``: the part of
    ``e_p A_p`` carrying ``c^i gamma^(-3/2-p-i)`` with ``c = pi (2j+1)^2 / 4``.

    The values sum to ``b Q``. At ``m = 1`` the pieces ``(0,0)``, ``(1,0)``, ``(1,1)``
    are the three sums of :func:`q_poisson_m1_three_sum`.
    """
    m = int(m_int)
    if m != m_int or m < 0:
        raise DomainError(f"needs a non-negative integer m, got {m_int!r}")
    g = gamma_of(t, b).gamma
    e = _product_poly(m)
    dtab = _derivative_table(m)
    pref = (-1) ** m * math.sqrt(g) / math.factorial(2 * m) * 2.0 * g ** (-1.5)
    sums = [0.0] * (m + 1)  # sum_j (-1)^j w c^i e^{-c/g}
    for j in range(cfg.max_terms):
        w = 2 * j + 1
        c = math.pi * w * w / 4.0
        ex = math.exp(-c / g)
        sign = 1.0 if j % 2 == 0 else -1.0
        for i in range(m + 1):
            sums[i] += sign * w * c**i * ex
        if w * max(1.0, c) ** m * ex < EPS * 1e-6 * max(1e-300, max(abs(v) for v in sums)):
            break
    out = {}
    for p, ep in enumerate(e):
        fac = ep * (-4.0 / math.pi) ** p
        for i, tv in enumerate(dtab[p]):
            if tv != 0.0:
                out[(p, i)] = pref * fac * tv * g ** (-p - i) * sums[i]
    return out


def q_poisson_m1_three_sum(t: float, b: float, cfg: NumericConfig = DEFAULT_CONFIG) -> tuple[float, float, float]:
    """The three sums assembling ``b Q`` at ``delta = 4``:

    ``(1/g) S1 - 6/(pi g^2) S1 + (1/g^3) S3`` with
    ``S_k = sum_{j>=0} (-1)^j (2j+1)^k exp(-pi (2j+1)^2 / (4g))``.

    Returns the three terms separately; their sum is ``b Q``.
    """
    g = gamma_of(t, b).gamma
    s1 = s3 = 0.0
    for j in range(cfg.max_terms):
        w = 2 * j + 1
        e = math.exp(-math.pi * w * w / (4.0 * g))
        sign = 1.0 if j % 2 == 0 else -1.0
        s1 += sign * w * e
        s3 += sign * w**3 * e
        if w**3 * e < 1e-300 or (j > 2 and w**3 * e < EPS * 1e-6 * max(abs(s1), abs(s3), 1e-300)):
            break
    return s1 / g, -6.0 * s1 / (math.pi * g * g), s3 / g**3


def q_ilt(t: float, b: float, delta, cfg: NumericConfig = DEFAULT_CONFIG) -> SeriesValue:
    g = gamma_of(t, b).gamma
    v = max_density_ilt(t, b, delta, cfg, route="laplace")
    return SeriesValue(value=v, terms_used=cfg.ilt_terms, tail_bound=10 * cfg.quad_tol, method="ilt_oracle", gamma=g)


SWITCH_THRESHOLD = 1.0


def q_auto(t: float, b: float, delta, cfg: NumericConfig = DEFAULT_CONFIG) -> SeriesValue:
    """``Q(t, b)`` by whichever representation is efficient at this gamma.

    Direct series when ``gamma (1 + delta/2)^2 >= 1``, else the Poisson-transformed
    series for integer ``m = delta/4``, else numerical inversion.
    """
    param = make_param(delta)
    g = gamma_of(t, b).gamma
    if g * (1.0 + param.n) ** 2 >= SWITCH_THRESHOLD:
        try:
            return q_series(t, b, param, cfg)
        except ConvergenceError:
            log.info("q_series failed at gamma=%g; falling back", g)
    if param.is_integer_m:
        try:
            return q_poisson(t, b, param.int_m(), cfg)
        except ConvergenceError:
            log.info("q_poisson failed at gamma=%g; falling back", g)
    return q_ilt(t, b, param, cfg)


# ------------------------------------------------------------ walker marginal P_m


def walker_density_at_origin(t: float, m: float) -> float:
    """``P_m(t, 0) = sqrt(2/(pi t)) 4^m Gamma(m+1)^2 / Gamma(2m+1)``."""
    if not t > 0:
        raise DomainError("t must be positive")
    if m < 0:
        raise DomainError("m must be >= 0")
    logv = 0.5 * math.log(2.0 / (math.pi * t)) + 2 * m * LOG2 + 2 * math.lgamma(m + 1) - math.lgamma(2 * m + 1)
    return math.exp(logv)


def monotone_region(t: float, y: float, m: float) -> bool:
    """Whether ``y^2/t > log(2(m+1)) / (4(m+1))``, where the series terms shrink from the start."""
    return y * y / t > math.log(2.0 * (m + 1.0)) / (4.0 * (m + 1.0))


def p_series(
    t: float,
    y: float,
    m: float,
    cfg: NumericConfig = DEFAULT_CONFIG,
    printed: bool = False,
    fallback: bool = True,
) -> SeriesValue:
    """Walker density ``P_m(t, y)`` for ``delta = 4m``:

    ``(2+4m) 2^(1+2m) / sqrt(2 pi t) * [ exp(-y^2 (1+2m)^2 / 2t) / (2+2m)
    - sum_j (-1)^j C_j exp(-y^2 (3+2j+2m)^2 / 2t) ]``,
    ``C_j = 2m/(1+2m) * (2j+3+2m) / ((2j+3+2m)^2 - 1) * C(j+1+2m, 2m)``.

    ``printed=True`` uses ``2+2m`` for the leading factor instead of ``2+4m``
    (kept for comparison; it does not integrate to one for m > 0).
    At ``y = 0`` the closed form is returned. When rounding in the alternating
    sum would exceed the tolerance, the value comes from numerical inversion
    (``fallback=False`` raises :class:`ConvergenceError` instead).
    """
    if not t > 0:
        raise DomainError("t must be positive")
    if y < 0:
        raise DomainError("y must be >= 0")
    if m < 0:
        raise DomainError("m must be >= 0")
    lead = (2.0 + 2.0 * m) if printed else (2.0 + 4.0 * m)
    if y == 0.0:
        v = walker_density_at_origin(t, m)
        if printed:
            v *= lead / (2.0 + 4.0 * m)
        return SeriesValue(value=v, terms_used=0, tail_bound=0.0, method="closed_form")
    pref = lead * 2.0 ** (1.0 + 2.0 * m) / math.sqrt(2.0 * math.pi * t)
    h = y * y / (2.0 * t)
    head = math.exp(-h * (1.0 + 2.0 * m) ** 2) / (2.0 + 2.0 * m)
    if m == 0.0:
        return SeriesValue(value=pref * head, terms_used=1, tail_bound=0.0, method="direct_series")
    binom = 2.0 * m + 1.0  # C(1+2m, 2m)
    total = 0.0
    abs_sum = head
    j = 0
    ok = False
    tail = math.inf
    while j < cfg.max_terms:
        w = 2 * j + 3 + 2 * m
        cj = 2.0 * m / (1.0 + 2.0 * m) * w / (w * w - 1.0) * binom
        term = cj * math.exp(-h * w * w)
        total += term if j % 2 == 0 else -term
        abs_sum += term
        binom *= (j + 2 + 2 * m) / (j + 2)
        w_next = w + 2.0
        nxt = 2.0 * m / (1.0 + 2.0 * m) * w_next / (w_next * w_next - 1.0) * binom * math.exp(-h * w_next * w_next)
        ratio = (j + 3 + 2 * m) / (j + 3) * math.exp(-8.0 * h * (j + 3 + m))
        j += 1
        if ratio < 1.0 and nxt * pref <= cfg.series_tol * max(1.0, pref * abs(head - total)):
            ok = True
            tail = pref * nxt
            break
    value = pref * (head - total)
    rounding = 8 * EPS * pref * abs_sum
    if ok and rounding <= 10 * cfg.series_tol * max(1.0, abs(value)):
        log.debug("p_series y=%g t=%g m=%g terms=%d monotone=%s", y, t, m, j, monotone_region(t, y, m))
        return SeriesValue(value=value, terms_used=j, tail_bound=tail, method="direct_series")
    if not fallback or printed:
        raise ConvergenceError(f"p_series did not converge at y={y}, t={t}, m={m} (rounding {rounding:.2e})")
    v = walker_density_ilt(t, y, 4.0 * m, cfg)
    return SeriesValue(value=v, terms_used=cfg.ilt_terms, tail_bound=10 * cfg.quad_tol, method="ilt_oracle")


def half_gaussian(t: float, y):
    return np.sqrt(2.0 / (math.pi * t)) * np.exp(-np.asarray(y, dtype=float) ** 2 / (2.0 * t))


def walker_density(t: float, y: float, delta, cfg: NumericConfig = DEFAULT_CONFIG) -> SeriesValue:
    """``P(t, y)`` by the most reliable route: the series for ``delta = 4m`` with ``m``
    a non-negative integer inside its monotone region (or ``m = 0``, or ``y = 0``),
    numerical inversion otherwise."""
    param = make_param(delta)
    m = param.m
    if param.is_integer_m and m >= 0 and (y == 0.0 or m == 0 or monotone_region(t, y, m)):
        return p_series(t, y, param.int_m(), cfg)
    v = walker_density_ilt(t, y, param, cfg)
    return SeriesValue(value=v, terms_used=cfg.ilt_terms, tail_bound=10 * cfg.quad_tol, method="ilt_oracle")


def density_rows(t: float, delta, coord: str, grid, cfg: NumericConfig = DEFAULT_CONFIG, b: float | None = None):
    """Rows ``(t, delta, coord, value, method, terms, tail_bound)`` for a density table.

    ``coord`` is ``"Q"`` (maximum), ``"P"`` (walker) or ``"joint"`` (walker at fixed ``b``).
    """
    param = make_param(delta)
    for c in grid:
        c = float(c)
        if coord == "Q":
            sv = q_auto(t, c, param, cfg)
        elif coord == "P":
            sv = walker_density(t, c, param, cfg)
        elif coord == "joint":
            if b is None:
                raise DomainError("joint density needs b")
            v = joint_density(t, c, b, param, cfg)
            sv = SeriesValue(value=v, terms_used=cfg.ilt_terms, tail_bound=10 * cfg.quad_tol, method="ilt_oracle")
        else:
            raise DomainError(f"unknown coordinate {coord!r}")
        yield (t, param.delta, c, sv.value, sv.method, sv.terms_used, sv.tail_bound)


DENSITY_CSV_HEADER = "t,delta,coord,value,method,terms,tail_bound"


def joint_mass(t: float, delta, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """``int_0^inf int_0^b P(t, y, b) dy db`` by nested quadrature of the inverted
    joint density (inner over ``y``, outer over ``b``)."""
    param = make_param(delta)
    scale = math.sqrt(t)
    lo = math.sqrt(GAMMA_FLOOR * math.pi * t / 2.0)
    pts = [lo, 0.5 * scale, 1.0 * scale, 2.0 * scale, 4.0 * scale, 10.0 * scale]
    total = 0.0
    for a, c in zip(pts[:-1], pts[1:]):
        v, _ = integrate.quad(
            lambda b: max_density_ilt(t, b, param, cfg, route="quadrature"), a, c, epsabs=1e-10, epsrel=1e-10, limit=100
        )
        total += v
    return total

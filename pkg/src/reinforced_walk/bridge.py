"""Discrete-to-continuum checks: rescaled DP marginals against the Brownian-limit
densities, and the large-N bands for ``a P{A_N = a}`` without reinforcement."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .continuum import q_auto, walker_density
from .core import DEFAULT_CONFIG, DomainError, NumericConfig, make_param
from .discrete import DEFAULT_MAX_CELLS, default_workers, dp_evolve, marginal_maximum, marginal_position
from .discrete import maximum_law_unreinforced

log = logging.getLogger(__name__)

DEFAULT_GRID = tuple(0.25 * i for i in range(1, 13))  # 0.25, 0.5, ..., 3.0
MONOTONE_SLACK = 0.10
# Finite-N slack constant for max_bound_check, calibrated once at N = 10^4
# (largest deviation of a P{A_N = a} from the limiting band, times a, rounded up).
BOUND_SLACK_C = 2.0
CONVERGENCE_CSV_HEADER = "eps,N,delta,t,sup_err_Q,sup_err_P"

# Continuum parameter reached by the lattice walk with reinforcement delta.
# At its maximum the walker makes on average 1+delta downward excursions per unit
# advance, so the passage time to level b has transform cosh(b sqrt(2s))^-(1+delta);
# the continuum formulas carry the exponent 1+delta_c/2, hence delta_c = 2 delta.
# "printed" identifies the two parameters directly.
LIMIT_MAPPINGS = {"corrected": 2.0, "printed": 1.0}


def continuum_delta(delta, mapping: str = "corrected") -> float:
    """Continuum reinforcement parameter describing the scaling limit of the walk."""
    if mapping not in LIMIT_MAPPINGS:
        raise DomainError(f"unknown mapping {mapping!r}")
    return LIMIT_MAPPINGS[mapping] * make_param(delta).delta


def steps_for(t: float, eps: float) -> int:
    """``N = floor(t / eps^2)``, guarded against rounding just below an integer."""
    return int(math.floor(t / (eps * eps) + 1e-9))


@dataclass(frozen=True)
class ScaledMarginals:
    t: float
    eps: float
    N: int
    delta: float
    b_nodes: np.ndarray  # eps * a
    q_hat: np.ndarray  # P{A_N = a} / eps
    y_nodes: np.ndarray  # eps * x on x = N (mod 2)
    p_hat: np.ndarray  # P{S_N = x} / (2 eps)

    def Q(self, b):
        return np.interp(b, self.b_nodes, self.q_hat, left=0.0, right=0.0)

    def P(self, y):
        return np.interp(y, self.y_nodes, self.p_hat, left=self.p_hat[0], right=0.0)

    def mass_Q(self) -> float:
        return float(self.q_hat.sum() * self.eps)

    def mass_P(self) -> float:
        return float(self.p_hat.sum() * 2.0 * self.eps)


def scaled_marginals(t: float, eps: float, delta, max_cells: int = DEFAULT_MAX_CELLS) -> ScaledMarginals:
    """Run the exact recursion for ``N = floor(t/eps^2)`` steps and rescale both marginals
    into densities on ``b = eps a`` and ``y = eps x``."""
    if not (t > 0 and eps > 0):
        raise DomainError("t and eps must be positive")
    N = steps_for(t, eps)
    if N < 10:
        raise DomainError(f"eps={eps} gives N={N} < 10 steps")
    param = make_param(delta)
    pmf = dp_evolve(N, param, mode="float64", max_cells=max_cells)
    qa = marginal_maximum(pmf)
    px = marginal_position(pmf)
    a = np.arange(N + 1)
    x = np.arange(N % 2, N + 1, 2)
    return ScaledMarginals(
        t=t,
        eps=eps,
        N=N,
        delta=param.delta,
        b_nodes=eps * a,
        q_hat=qa / eps,
        y_nodes=eps * x,
        p_hat=px[x] / (2.0 * eps),
    )


@dataclass(frozen=True)
class ConvergenceRow:
    eps: float
    N: int
    delta: float  # lattice reinforcement
    t: float
    sup_err_Q: float
    sup_err_P: float
    limit_delta: float = float("nan")  # continuum parameter compared against
    grid_b: list = field(default_factory=list)
    grid_y: list = field(default_factory=list)

    def csv(self) -> str:
        return f"{self.eps!r},{self.N},{self.delta!r},{self.t!r},{self.sup_err_Q:.17g},{self.sup_err_P:.17g}"


def reference_densities(t: float, delta_c, grid, cfg: NumericConfig = DEFAULT_CONFIG):
    """``Q(t, b)`` and ``P(t, y)`` on ``grid`` at continuum parameter ``delta_c``."""
    param = make_param(delta_c)
    q = np.array([q_auto(t, b, param, cfg).value for b in grid])
    p = np.array([walker_density(t, y, param, cfg).value for y in grid])
    return q, p


def _row(t, eps, param, delta_c, grid, ref_q, ref_p, max_cells) -> ConvergenceRow:
    sm = scaled_marginals(t, eps, param, max_cells)
    keep = grid >= 2.0 * eps
    g = grid[keep]
    err_q = float(np.max(np.abs(sm.Q(g) - ref_q[keep])))
    err_p = float(np.max(np.abs(sm.P(g) - ref_p[keep])))
    log.info("bridge eps=%g N=%d delta=%g errQ=%.3e errP=%.3e", eps, sm.N, param.delta, err_q, err_p)
    return ConvergenceRow(eps, sm.N, param.delta, t, err_q, err_p, delta_c, list(g), list(g))


def convergence_report(
    t: float,
    delta,
    eps_list,
    grid=DEFAULT_GRID,
    cfg: NumericConfig = DEFAULT_CONFIG,
    workers: int | None = None,
    max_cells: int = DEFAULT_MAX_CELLS,
    mapping: str = "corrected",
) -> list[ConvergenceRow]:
    """Sup-norm gaps between the rescaled DP marginals of the walk with reinforcement
    ``delta`` and the continuum densities at ``continuum_delta(delta, mapping)``,
    one row per ``eps`` (rows computed concurrently)."""
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise DomainError("eps_list is empty")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError("eps_list must be strictly decreasing")
    param = make_param(delta)
    delta_c = continuum_delta(param, mapping)
    grid = np.asarray(grid, dtype=float)
    ref_q, ref_p = reference_densities(t, delta_c, grid, cfg)
    workers = workers or default_workers()
    with ThreadPoolExecutor(max_workers=max(1, min(workers, len(eps_list)))) as ex:
        futs = [ex.submit(_row, t, e, param, delta_c, grid, ref_q, ref_p, max_cells) for e in eps_list]
        return [f.result() for f in futs]


def is_non_increasing(values, slack: float = MONOTONE_SLACK) -> bool:
    return all(b <= (1.0 + slack) * a for a, b in zip(values, values[1:]))


def report_monotone(rows: list[ConvergenceRow], slack: float = MONOTONE_SLACK) -> bool:
    return is_non_increasing([r.sup_err_Q for r in rows], slack) and is_non_increasing(
        [r.sup_err_P for r in rows], slack
    )


# ------------------------------------------------------------ bands for a P{A_N = a}


def large_gamma_band(gamma: float, scale: float = 2.0) -> tuple[float, float]:
    """``[(1 - alpha) s sqrt(g) e^(-pi g/4), s sqrt(g) e^(-pi g/4)]`` with ``alpha = 3 e^(-2 pi g)``."""
    top = scale * math.sqrt(gamma) * math.exp(-math.pi * gamma / 4.0)
    return (1.0 - 3.0 * math.exp(-2.0 * math.pi * gamma)) * top, top


def small_gamma_band(gamma: float, scale: float = 2.0) -> tuple[float, float]:
    """``[(1 - alpha') (s/g) e^(-pi/(4g)), (s/g) e^(-pi/(4g))]`` with ``alpha' = 3 e^(-2 pi/g)``."""
    top = scale / gamma * math.exp(-math.pi / (4.0 * gamma))
    return (1.0 - 3.0 * math.exp(-2.0 * math.pi / gamma)) * top, top


def default_levels(N: int, gammas=None) -> list[int]:
    if gammas is None:
        gammas = np.linspace(0.25, 4.0, 16)
    return sorted({int(round(math.sqrt(g * math.pi * N / 2.0))) for g in gammas})


def max_bound_check(N: int, a_grid=None, slack_c: float = BOUND_SLACK_C, scale: float = 1.0) -> dict:
    """Compare ``a P{A_N = a}`` (no reinforcement) with the limiting bands, widened by ``c/a``.

    ``gamma = (2/pi) a^2 / N``; the large-gamma band applies for ``gamma >= 1``, the
    small-gamma band below. ``scale = 1`` is the band as published; ``scale = 2`` is
    the band implied by the series for the maximum density (``b Q`` at ``delta = 0``).
    Returns a JSON-serialisable report.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    levels = default_levels(N) if a_grid is None else [int(a) for a in a_grid]
    probs = maximum_law_unreinforced(N, levels)
    entries = []
    for a, p in zip(levels, probs):
        g = 2.0 * a * a / (math.pi * N)
        band = "large_gamma" if g >= 1.0 else "small_gamma"
        lo, hi = (large_gamma_band if g >= 1.0 else small_gamma_band)(g, scale)
        value = a * float(p)
        lo_s, hi_s = lo - slack_c / a, hi + slack_c / a
        entries.append(
            {
                "a": a,
                "gamma": g,
                "band": band,
                "value": value,
                "lower": lo,
                "upper": hi,
                "slack": slack_c / a,
                "ok": bool(lo_s <= value <= hi_s),
            }
        )
    violations = [e for e in entries if not e["ok"]]
    return {
        "N": N,
        "delta": 0,
        "scale": scale,
        "slack_c": slack_c,
        "passed": not violations,
        "entries": entries,
        "violations": [e["a"] for e in violations],
    }


def calibrate_slack(N: int, a_grid=None, scale: float = 2.0) -> float:
    """Smallest ``c`` for which every level lies in the band widened by ``c/a``."""
    rep = max_bound_check(N, a_grid, slack_c=0.0, scale=scale)
    worst = 0.0
    for e in rep["entries"]:
        gap = max(e["lower"] - e["value"], e["value"] - e["upper"], 0.0)
        worst = max(worst, gap * e["a"])
    return worst

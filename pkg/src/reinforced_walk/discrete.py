"""Exact joint law of (position, running maximum) and a Monte Carlo simulator.

The walk starts at x=1 with the edge (0, 1) already reinforced. Because it is
reflected at the origin, the set of traversed edges is always the interval
below the running maximum ``a``, so the pair ``(x, a)`` is a complete state:

* ``x == 0``: step to 1 with probability one;
* ``0 < x < a``: both incident edges reinforced, step up or down with 1/2;
* ``x == a``: up onto a fresh edge with ``1/(2+delta)``, down with ``(1+delta)/(2+delta)``.

Tables are indexed ``table[x, a]``.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np

from .core import CapacityError, DomainError, ReinforcementParam, make_param

EXACT_MAX_N = 64
DEFAULT_MAX_CELLS = 60_000_000


@dataclass(frozen=True)
class JointPmf:
    """``P_N(x, a)`` over the triangle ``0 <= x <= a <= N``."""

    N: int
    delta: ReinforcementParam
    table: np.ndarray
    mode: str  # "float64" or "exact"

    def p(self, x: int, a: int):
        if 0 <= x <= a <= self.N:
            return self.table[x, a]
        return Fraction(0) if self.mode == "exact" else 0.0

    def total(self):
        if self.mode == "exact":
            return sum((v for v in self.table.flat), Fraction(0))
        return float(self.table.sum())

    def nonzero(self):
        """Yield ``(x, a, p)`` for every nonzero entry, ordered by ``a`` then ``x``."""
        for a in range(1, self.N + 1):
            for x in range(a + 1):
                v = self.table[x, a]
                if v != 0:
                    yield x, a, v

    def to_float(self) -> np.ndarray:
        return self.table.astype(float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("N,delta,x,a,p\n")
        d = format_number(self.delta.exact if self.mode == "exact" else self.delta.delta)
        for x, a, v in self.nonzero():
            buf.write(f"{self.N},{d},{x},{a},{format_number(v)}\n")
        return buf.getvalue()


def format_number(v) -> str:
    """17 significant digits for floats, ``p/q`` for rationals."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _resolve_mode(mode: str | None, N: int) -> str:
    if mode in (None, "auto"):
        return "exact" if N <= EXACT_MAX_N else "float64"
    if mode in ("exact", "exact-rational", "rational"):
        return "exact"
    if mode in ("float", "float64"):
        return "float64"
    raise DomainError(f"unknown mode {mode!r}")


def _check_capacity(N: int, max_cells: int) -> None:
    if (N + 2) ** 2 > max_cells:
        raise CapacityError(f"a step-{N} table needs {(N + 2) ** 2} cells, budget is {max_cells}")


def dp_init(delta=0, mode: str = "float64") -> JointPmf:
    """The step-1 table: a unit atom at ``(x, a) = (1, 1)``."""
    param = make_param(delta)
    mode = _resolve_mode(mode, 1)
    if mode == "exact":
        table = np.full((2, 2), Fraction(0), dtype=object)
        table[1, 1] = Fraction(1)
    else:
        table = np.zeros((2, 2))
        table[1, 1] = 1.0
    return JointPmf(N=1, delta=param, table=table, mode=mode)


@numba.njit(cache=True, nogil=True)
def _step_float(P, Q, top, up_top, down_top):
    # Row-major by maximum: P[a, x] holds step-N mass for a <= top; Q receives step N+1.
    for a in range(1, top + 2):
        for x in range(a + 1):
            Q[a, x] = 0.0
    for a in range(1, top + 1):
        row = P[a]
        out = Q[a]
        for x in range(a + 1):
            p = row[x]
            if p == 0.0:
                continue
            if x == 0:
                out[1] += p
            elif x < a:
                out[x + 1] += 0.5 * p
                out[x - 1] += 0.5 * p
            else:
                Q[a + 1, a + 1] += up_top * p
                out[a - 1] += down_top * p


def _step_exact(table: np.ndarray, N: int, delta: Fraction) -> np.ndarray:
    up_top = 1 / (2 + delta)
    down_top = (1 + delta) / (2 + delta)
    half = Fraction(1, 2)
    out = np.full((N + 2, N + 2), Fraction(0), dtype=object)
    for a in range(1, N + 1):
        for x in range(a + 1):
            p = table[x, a]
            if not p:
                continue
            if x == 0:
                out[1, a] += p
            elif x < a:
                out[x + 1, a] += half * p
                out[x - 1, a] += half * p
            else:
                out[a + 1, a + 1] += up_top * p
                out[a - 1, a] += down_top * p
    return out


def dp_step(pmf: JointPmf, delta=None, max_cells: int = DEFAULT_MAX_CELLS) -> JointPmf:
    """Advance ``pmf`` by one step.

    ``delta`` defaults to the parameter carried by ``pmf``.
    """
    param = pmf.delta if delta is None else make_param(delta)
    N = pmf.N
    _check_capacity(N + 1, max_cells)
    if pmf.mode == "exact":
        new = _step_exact(pmf.table, N, param.exact)
    else:
        P = np.zeros((N + 2, N + 2))
        P[: N + 1, : N + 1] = pmf.table.T
        new = np.zeros((N + 2, N + 2))
        _step_float(P, new, N, param.up_at_max, param.down_at_max)
        new = new.T
    return JointPmf(N=N + 1, delta=param, table=new, mode=pmf.mode)


def dp_evolve(N: int, delta=0, mode: str | None = "auto", max_cells: int = DEFAULT_MAX_CELLS) -> JointPmf:
    """``P_N`` by ``N - 1`` applications of the one-step recursion.

    ``mode="auto"`` selects exact rationals for ``N <= 64`` and float64 beyond.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    param = make_param(delta)
    mode = _resolve_mode(mode, N)
    _check_capacity(N, max_cells)
    if mode == "exact":
        pmf = dp_init(param, "exact")
        for _ in range(N - 1):
            pmf = dp_step(pmf, param, max_cells)
        return pmf
    # Float path: double-buffer a single (N+1)x(N+1) allocation.
    P = np.zeros((N + 1, N + 1))
    Q = np.zeros((N + 1, N + 1))
    P[1, 1] = 1.0
    for n in range(1, N):
        _step_float(P, Q, n, param.up_at_max, param.down_at_max)
        P, Q = Q, P
    return JointPmf(N=N, delta=param, table=P.T, mode="float64")


def marginal_position(pmf: JointPmf) -> np.ndarray:
    """``P{S_N = x}`` for ``x = 0..N``."""
    return pmf.table.sum(axis=1)


def marginal_maximum(pmf: JointPmf) -> np.ndarray:
    """``P{A_N = a}`` for ``a = 0..N`` (entry 0 is always zero)."""
    return pmf.table.sum(axis=0)


@numba.njit(cache=True, nogil=True)
def _hit_probability(N, level):
    # Reflected simple walk from x=1 at step 1; probability the level is reached by step N.
    if level <= 1:
        return 1.0
    p = np.zeros(level + 1)
    q = np.zeros(level + 1)
    p[1] = 1.0
    hit = 0.0
    for _ in range(1, N):
        for i in range(level + 1):
            q[i] = 0.0
        q[1] += p[0]
        for x in range(1, level):
            v = 0.5 * p[x]
            q[x + 1] += v
            q[x - 1] += v
        hit += q[level]
        q[level] = 0.0
        p, q = q, p
    return hit


def maximum_law_unreinforced(N: int, a_values) -> np.ndarray:
    """``P{A_N = a}`` at ``delta = 0`` for selected ``a``, in O(a N) work per level.

    Without reinforcement the walker ignores its environment, so the law of the
    maximum follows from first-passage probabilities of the reflected walk.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    a_values = np.asarray(a_values, dtype=np.int64)
    if np.any(a_values < 1):
        raise DomainError("levels must be >= 1")
    out = np.empty(len(a_values))
    for i, a in enumerate(a_values):
        a = int(a)
        out[i] = 0.0 if a > N else _hit_probability(N, a) - _hit_probability(N, a + 1)
    return out


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class McHistogram:
    N: int
    delta: ReinforcementParam
    n_walks: int
    counts: dict = field(repr=False)  # (x, a) -> int
    seed: int
    batch_size: int

    def dense(self) -> np.ndarray:
        out = np.zeros((self.N + 1, self.N + 1), dtype=np.int64)
        for (x, a), c in self.counts.items():
            out[x, a] = c
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("N,delta,x,a,count\n")
        d = format_number(self.delta.delta)
        for (x, a) in sorted(self.counts, key=lambda k: (k[1], k[0])):
            buf.write(f"{self.N},{d},{x},{a},{self.counts[(x, a)]}\n")
        return buf.getvalue()


def batch_rng(seed: int, batch: int) -> np.random.Generator:
    """Generator keyed on ``(seed, batch)`` so results do not depend on scheduling."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(batch,)))


def _run_batch(N: int, param: ReinforcementParam, size: int, rng: np.random.Generator) -> np.ndarray:
    x = np.ones(size, dtype=np.int64)
    a = np.ones(size, dtype=np.int64)
    up_top = param.up_at_max
    for _ in range(1, N):
        u = rng.random(size)
        p_up = np.where(x == a, up_top, 0.5)
        p_up[x == 0] = 1.0
        x += np.where(u < p_up, 1, -1)
        np.maximum(a, x, out=a)
    return np.bincount(a * (N + 1) + x, minlength=(N + 1) ** 2)


def default_workers() -> int:
    env = os.environ.get("REINFORCED_WALK_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def mc_simulate(
    N: int,
    delta=0,
    n_walks: int = 100_000,
    seed: int = 0,
    batch_size: int = 100_000,
    workers: int | None = None,
) -> McHistogram:
    """Simulate ``n_walks`` independent walks of ``N`` steps and histogram ``(S_N, A_N)``."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if n_walks < 1:
        raise DomainError("n_walks must be >= 1")
    if batch_size < 1:
        raise DomainError("batch_size must be >= 1")
    param = make_param(delta)
    sizes = [batch_size] * (n_walks // batch_size)
    if n_walks % batch_size:
        sizes.append(n_walks % batch_size)

    def job(i):
        return _run_batch(N, param, sizes[i], batch_rng(seed, i))

    workers = workers or default_workers()
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(job, range(len(sizes))))
    else:
        parts = [job(i) for i in range(len(sizes))]
    flat = np.sum(parts, axis=0)
    counts = {}
    for idx in np.flatnonzero(flat):
        a, x = divmod(int(idx), N + 1)
        counts[(x, a)] = int(flat[idx])
    return McHistogram(N=N, delta=param, n_walks=n_walks, counts=counts, seed=seed, batch_size=batch_size)


def walk_path_compressed(N: int, delta, uniforms) -> list[tuple[int, int]]:
    """One path driven by ``uniforms`` (length ``N - 1``), tracking only ``(x, a)``."""
    param = make_param(delta)
    x = a = 1
    path = [(x, a)]
    for u in uniforms[: N - 1]:
        if x == 0:
            p_up = 1.0
        elif x == a:
            p_up = param.up_at_max
        else:
            p_up = 0.5
        x += 1 if u < p_up else -1
        a = max(a, x)
        path.append((x, a))
    return path


def walk_path_edges(N: int, delta, uniforms) -> list[tuple[int, int]]:
    """Same path law as :func:`walk_path_compressed` but with an explicit per-edge weight map.

    Edge ``i`` joins sites ``i`` and ``i + 1``; traversed edges carry weight ``1 + delta``.
    """
    param = make_param(delta)
    weight = np.ones(N + 2)
    weight[0] = 1.0 + param.delta
    x = 1
    a = 1
    path = [(x, a)]
    for u in uniforms[: N - 1]:
        if x == 0:
            p_up = 1.0
        else:
            left, right = weight[x - 1], weight[x]
            p_up = right / (left + right)
        if u < p_up:
            weight[x] = 1.0 + param.delta
            x += 1
        else:
            weight[x - 1] = 1.0 + param.delta
            x -= 1
        a = max(a, x)
        path.append((x, a))
    return path

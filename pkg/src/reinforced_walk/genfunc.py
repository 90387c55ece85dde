"""Truncated power series in the step variable and the walk's generating functions.

Everything here is an independent route to ``P_N(x, a)``: coefficients of the
double generating function are compared against the dynamic-programming table.
Arithmetic is exact (``Fraction``) by default up to order 64 and float64 beyond.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import DomainError, SingularityError, make_param
from .discrete import JointPmf

EXACT_MAX_K = 64
FLOAT_RTOL = 1e-12

VARIANTS = ("corrected", "printed")


class TruncatedSeries:
    """``c_0 + c_1 lam + ... + c_K lam^K``, arithmetic taken modulo ``lam^(K+1)``."""

    __slots__ = ("coeffs", "K", "exact")

    def __init__(self, coeffs: Sequence, K: int | None = None, exact: bool = True):
        K = len(coeffs) - 1 if K is None else K
        if K < 0:
            raise DomainError("truncation order must be >= 0")
        zero = Fraction(0) if exact else 0.0
        cs = [(Fraction(c) if exact else float(c)) for c in list(coeffs)[: K + 1]]
        cs.extend([zero] * (K + 1 - len(cs)))
        self.coeffs = cs
        self.K = K
        self.exact = exact

    # construction helpers
    @classmethod
    def constant(cls, c, K: int, exact: bool = True) -> "TruncatedSeries":
        return cls([c], K, exact)

    @classmethod
    def monomial(cls, power: int, K: int, exact: bool = True, c=1) -> "TruncatedSeries":
        cs = [0] * (K + 1)
        if power <= K:
            cs[power] = c
        return cls(cs, K, exact)

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.K != self.K or other.exact != self.exact:
                raise DomainError("series operands must share truncation order and scalar mode")
            return other
        return TruncatedSeries.constant(other, self.K, self.exact)

    def __getitem__(self, n: int):
        return self.coeffs[n] if 0 <= n <= self.K else (Fraction(0) if self.exact else 0.0)

    def __len__(self) -> int:
        return self.K + 1

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.coeffs!r}, K={self.K})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.K == other.K and self.coeffs == other.coeffs

    def __add__(self, other):
        o = self._lift(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, o.coeffs)], self.K, self.exact)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.K, self.exact)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other) if self.exact else float(other)
            return TruncatedSeries([a * c for a in self.coeffs], self.K, self.exact)
        o = self._lift(other)
        K = self.K
        if not self.exact:
            prod = np.convolve(self.coeffs, o.coeffs)[: K + 1]
            return TruncatedSeries(prod, K, False)
        a, b = self.coeffs, o.coeffs
        lo_a = next((i for i, v in enumerate(a) if v), K + 1)
        lo_b = next((i for i, v in enumerate(b) if v), K + 1)
        out = [Fraction(0)] * (K + 1)
        for i in range(lo_a, K + 1 - lo_b):
            ai = a[i]
            if not ai:
                continue
            for j in range(lo_b, K + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedSeries(out, K, True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return self * (1 / (Fraction(other) if self.exact else float(other)))

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        result = TruncatedSeries.constant(1, self.K, self.exact)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def reciprocal(self) -> "TruncatedSeries":
        a = self.coeffs
        if a[0] == 0:
            raise SingularityError("reciprocal of a series with zero constant term")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.K + 1):
            acc = sum((a[k] * out[n - k] for k in range(1, n + 1)), Fraction(0) if self.exact else 0.0)
            out.append(-acc * inv0)
        return TruncatedSeries(out, self.K, self.exact)

    def sqrt(self) -> "TruncatedSeries":
        a = self.coeffs
        if a[0] != 1:
            raise DomainError("sqrt is only defined here for series with constant term 1")
        out = [Fraction(1) if self.exact else 1.0]
        for n in range(1, self.K + 1):
            acc = sum((out[k] * out[n - k] for k in range(1, n)), Fraction(0) if self.exact else 0.0)
            out.append((a[n] - acc) / 2)
        return TruncatedSeries(out, self.K, self.exact)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``lam^k``; negative ``k`` divides and requires vanishing low coefficients."""
        if k >= 0:
            return TruncatedSeries([0] * k + self.coeffs[: self.K + 1 - k], self.K, self.exact)
        if any(self.coeffs[: -k]):
            raise SingularityError(f"series is not divisible by lam^{-k}")
        return TruncatedSeries(self.coeffs[-k:], self.K, self.exact)

    def truncate(self, K: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, K, self.exact)


@dataclass
class BivariateSeries:
    """Coefficients of ``lam^n u^x``: one :class:`TruncatedSeries` in ``lam`` per power of ``u``."""

    columns: list  # index x -> TruncatedSeries

    @property
    def u_degree(self) -> int:
        return len(self.columns) - 1

    def coeff(self, n: int, x: int):
        if 0 <= x < len(self.columns):
            return self.columns[x][n]
        return self.columns[0][-1] * 0

    def to_dict(self) -> dict:
        return {
            (n, x): col[n]
            for x, col in enumerate(self.columns)
            for n in range(len(col))
            if col[n] != 0
        }


def _scalar(delta, exact: bool):
    param = make_param(delta)
    return param.exact if exact else param.delta


def _exact_default(K: int, exact: bool | None) -> bool:
    return K <= EXACT_MAX_K if exact is None else exact


def theta_series(K: int, exact: bool | None = None) -> TruncatedSeries:
    """Small root ``theta = (1 - sqrt(1 - lam^2)) / lam`` of ``lam u^2 - 2u + lam``."""
    if K < 1:
        raise DomainError("K must be >= 1")
    exact = _exact_default(K, exact)
    one_minus = TruncatedSeries([1, 0, -1], K + 1, exact)
    root = one_minus.sqrt()
    return (1 - root).shift(-1).truncate(K)


def gf_11(delta, K: int, exact: bool | None = None) -> TruncatedSeries:
    """Generating function of ``P_N(1, 1)``: ``lam / (1 - lam^2 (1+delta)/(2+delta))``."""
    if K < 1:
        raise DomainError("K must be >= 1")
    exact = _exact_default(K, exact)
    d = _scalar(delta, exact)
    r = (1 + d) / (2 + d)
    cs = [0] * (K + 1)
    for n in range(0, (K - 1) // 2 + 1):
        cs[2 * n + 1] = r**n
    return TruncatedSeries(cs, K, exact)


class _GfContext:
    """Shared powers of theta for one (delta, K, variant)."""

    def __init__(self, delta, K: int, exact: bool, variant: str):
        if variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}")
        self.K, self.exact, self.variant = K, exact, variant
        self.d = _scalar(delta, exact)
        self.delta = delta
        self.theta = theta_series(K, exact)
        self.theta2 = self.theta * self.theta
        self.one = TruncatedSeries.constant(1, K, exact)
        self.lam = TruncatedSeries.monomial(1, K, exact)
        self.inv_1m_theta2 = (self.one - self.theta2).reciprocal()
        self.p11 = gf_11(delta, K, exact)
        self._theta_pows = [self.one, self.theta]
        self._diag = [None, self.p11]

    def theta_pow(self, k: int) -> TruncatedSeries:
        while len(self._theta_pows) <= k:
            self._theta_pows.append(self._theta_pows[-1] * self.theta)
        return self._theta_pows[k]

    def diag(self, a: int) -> TruncatedSeries:
        """Product formula for the generating function of ``P_N(a, a)``."""
        d = self.d
        ratio = d / (2 + d)
        while len(self._diag) <= a:
            i = len(self._diag)
            inner = self.theta_pow(2 * i - 2)
            inner = self.one + inner if self.variant == "corrected" else self.one - inner
            den = self.one + self.theta_pow(2 * i + 2) - self.theta2 * inner * ratio
            factor = (self.one + self.theta_pow(2 * i)) * den.reciprocal() * self.theta * (2 / (2 + d))
            self._diag.append(self._diag[-1] * factor)
        return self._diag[a]

    def origin(self, a: int) -> TruncatedSeries:
        """Generating function of ``P_N(0, a)`` from the diagonal ones."""
        d = self.d
        ratio = d / (2 + d)
        inv = self.inv_1m_theta2
        out = self.theta_pow(a) * inv * (ratio - self.theta2) * self.diag(a)
        if a == 1:
            out = out + self.theta2 * inv * 2
        else:
            out = out + self.theta_pow(a + 1) * inv * self.diag(a - 1) * (2 / (2 + d))
        return out

    def rhs(self, a: int) -> list:
        """u-coefficients (degree 0..a+2) of the right side of the double-g.f. identity,
        including the initial-condition term moved across."""
        d = self.d
        ratio = d / (2 + d)
        zero = self.one * 0
        R = [zero] * (a + 3)
        lam = self.lam
        if self.variant == "corrected":
            # lam (u^2 - 1) P(0,a) + lam u^a (ratio - u^2) P(a,a) + 2 lam/(2+d) u^(a+1) P(a-1,a-1)
            p0 = lam * self.origin(a)
            R[0] = R[0] - p0
            R[2] = R[2] + p0
        else:
            # Printed assembly: lam^2 prefactor on the a=1 term and 1 - theta^a in A.
            inv_a = (self.one - self.theta_pow(a)).reciprocal()
            A0 = lam * self.theta_pow(a) * inv_a * (ratio - self.theta2) * self.diag(a)
            R[0] = R[0] - A0
            R[2] = R[2] + A0
            if a == 1:
                t = lam * lam * self.theta2 * self.inv_1m_theta2 * 2
                R[0] = R[0] - t
                R[2] = R[2] + t
            else:
                B0 = lam * self.theta_pow(a + 1) * self.inv_1m_theta2 * self.diag(a - 1) * (2 / (2 + d))
                R[0] = R[0] - B0
                R[2] = R[2] + B0
        paa = lam * self.diag(a)
        R[a] = R[a] + paa * ratio
        R[a + 2] = R[a + 2] - paa
        if a == 1:
            R[2] = R[2] + lam * 2
        else:
            R[a + 1] = R[a + 1] + lam * self.diag(a - 1) * (2 / (2 + d))
        return R

    def double(self, a: int) -> BivariateSeries:
        R = self.rhs(a)
        K = self.K
        zero = Fraction(0) if self.exact else 0.0
        # D = 2u - lam - lam u^2; match u^(y+1): 2 p_y = R_{y+1} + lam (p_{y-1} + p_{y+1}).
        p = [[zero] * (K + 1) for _ in range(a + 1)]
        for n in range(K + 1):
            for y in range(a + 1):
                acc = R[y + 1][n]
                if n:
                    if y > 0:
                        acc += p[y - 1][n - 1]
                    if y < a:
                        acc += p[y + 1][n - 1]
                p[y][n] = acc / 2
        cols = [TruncatedSeries(c, K, self.exact) for c in p]
        self._multiply_back(cols, R, a)
        return BivariateSeries(cols)

    def _multiply_back(self, cols: list, R: list, a: int) -> None:
        K = self.K
        zero = self.one * 0
        for x in range(a + 3):
            lhs = zero
            if 1 <= x <= a + 1:
                lhs = lhs + cols[x - 1] * 2
            if x <= a:
                lhs = lhs - self.lam * cols[x]
            if 2 <= x <= a + 2:
                lhs = lhs - self.lam * cols[x - 2]
            diff = lhs - R[x]
            if self.exact:
                bad = any(diff.coeffs)
            else:
                scale = max(1.0, max(abs(c) for c in R[x].coeffs))
                bad = max(abs(c) for c in diff.coeffs) > FLOAT_RTOL * scale * (K + 1)
            if bad:
                raise SingularityError(
                    f"double generating function for a={a}: nonzero remainder at u^{x}"
                    f" (variant {self.variant!r})"
                )


def _ctx(delta, K, exact, variant) -> _GfContext:
    return _GfContext(delta, K, _exact_default(K, exact), variant)


def gf_diag(a: int, delta, K: int, exact: bool | None = None, variant: str = "corrected") -> TruncatedSeries:
    if a < 1:
        raise DomainError("a must be >= 1")
    return _ctx(delta, K, exact, variant).diag(a)


def gf_origin(a: int, delta, K: int, exact: bool | None = None, variant: str = "corrected") -> TruncatedSeries:
    """Generating function of ``P{S_N = 0, A_N = a}``."""
    if a < 1:
        raise DomainError("a must be >= 1")
    return _ctx(delta, K, exact, variant).origin(a)


def gf_double(a: int, delta, K: int, exact: bool | None = None, variant: str = "corrected") -> BivariateSeries:
    """Double generating function ``sum_N sum_x P_N(x, a) lam^N u^x`` modulo ``lam^(K+1)``.

    Raises :class:`SingularityError` when the division by ``2u - lam u^2 - lam``
    leaves a remainder, which is how an inconsistent assembly shows up.
    """
    if a < 1:
        raise DomainError("a must be >= 1")
    return _ctx(delta, K, exact, variant).double(a)


def gf_to_pmfs(N_max: int, delta, exact: bool | None = None, variant: str = "corrected") -> list:
    """Tables ``P_N`` for ``N = 1..N_max`` extracted from one pass at ``K = N_max + 2``."""
    if N_max < 1:
        raise DomainError("N must be >= 1")
    K = N_max + 2
    exact = _exact_default(K, exact)
    ctx = _GfContext(delta, K, exact, variant)
    param = make_param(delta)
    zero = Fraction(0) if exact else 0.0
    tables = []
    for N in range(1, N_max + 1):
        t = np.full((N + 1, N + 1), zero, dtype=object if exact else float)
        tables.append(t)
    for a in range(1, N_max + 1):
        bi = ctx.double(a)
        for x in range(a + 1):
            col = bi.columns[x]
            for N in range(a, N_max + 1):
                tables[N - 1][x, a] = col[N]
    mode = "exact" if exact else "float64"
    return [JointPmf(N=N, delta=param, table=tables[N - 1], mode=mode) for N in range(1, N_max + 1)]


def gf_to_pmf(N: int, delta, exact: bool | None = None, variant: str = "corrected") -> JointPmf:
    """``P_N(x, a)`` assembled from double-generating-function coefficients for ``a = 1..N``."""
    return gf_to_pmfs(N, delta, exact, variant)[-1]


def coefficient_rows(N_max: int, delta, exact: bool | None = None):
    """Rows ``(a, N, x, coeff)`` of every nonzero coefficient with ``N <= N_max``."""
    for pmf in gf_to_pmfs(N_max, delta, exact):
        for x, a, v in pmf.nonzero():
            yield a, pmf.N, x, v

"""Eigenvalue-free energy route through the Coulson integral.

The energy is ``(1/pi) * int_0^inf t^-2 log K(t) dt`` where
``K(t) = |t^n P(i/t)|^2`` is written in closed form per parity case through
four real functions ``Z, W, X, Y`` of ``t``.  All four are polynomials in
``t`` of degree at most ``n``; their coefficient tables are built once per
triple from the exact matching-number tables.

The infinite range is split at ``t = 1``.  With ``u = 1/t`` the upper half
becomes ``2n + int_0^1 log Krev(u) du`` where ``Krev(u) = u^(2n) K(1/u)`` is
the same kernel evaluated on the reversed coefficient tables, so nothing is
ever raised to a large power.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend
from .charpoly import EvenEvenCoeffs, even_even_coeffs, mixed_coeffs
from .graphs import DumbbellParams, ParityCase
from .matchpoly import IntPoly, mrst_polys

CASE_CODES = {ParityCase.EVEN_EVEN: 0, ParityCase.ODD_ODD: 1, ParityCase.MIXED: 2}
LOG_FLOOR = 1e-300


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (error estimate {estimate:.3e})")
        self.estimate = estimate


# ---------------------------------------------------------------------------
# kernel tables


@dataclass(frozen=True)
class KernelTables:
    """Coefficients (in ``t``, lowest first, length ``n+1``) of ``Z, W, X, Y``."""

    case: ParityCase
    n: int
    z: np.ndarray
    w: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def functions(self, t, reverse: bool = False):
        """Evaluate ``(Z, W, X, Y)`` at ``t``; with ``reverse`` evaluate ``t^n F(1/t)``."""
        t = np.asarray(t, dtype=float)
        out = []
        for c in (self.z, self.w, self.x, self.y):
            c = c[::-1] if reverse else c
            out.append(np.polynomial.polynomial.polyval(t, c))
        return tuple(out)


def _even_series(counts, n: int, odd: bool = False) -> np.ndarray:
    # sum_k counts[k] t^(2k [+1])
    out = np.zeros(n + 1)
    for k, c in enumerate(counts):
        d = 2 * k + (1 if odd else 0)
        if c:
            if d > n:
                raise AssertionError("coefficient table exceeds degree n")
            out[d] = float(c)
    return out


def _u_poly_to_t(p: IntPoly, n: int, scale: float, shift: int) -> np.ndarray:
    # scale * t^shift * p(t^2)
    out = np.zeros(n + 1)
    for k, c in enumerate(p.coeffs):
        if c:
            out[2 * k + shift] = scale * float(c)
    return out


@lru_cache(maxsize=1024)
def kernel_tables(params: DumbbellParams) -> KernelTables:
    params, _ = params.canonical()
    n, r, s = params.n, params.r, params.s
    case = params.case
    if case is ParityCase.EVEN_EVEN:
        cf = even_even_coeffs(params)
        z, x, y, w = (_even_series(v, n) for v in (cf.M, cf.R, cf.S, cf.T))
    elif case is ParityCase.ODD_ODD:
        m, rr, ss, tt = mrst_polys(params)
        z = _u_poly_to_t(m, n, 1.0, 0)
        w = _u_poly_to_t(tt, n, 4.0, r + s)
        x = _u_poly_to_t(rr, n, 2.0, r)
        y = _u_poly_to_t(ss, n, 2.0, s)
    else:
        mk, rk, sk, tk = mixed_coeffs(params)
        z = _even_series(mk, n)
        x = _even_series(rk, n)
        y = _even_series(sk, n, odd=True)
        w = _even_series(tk, n, odd=True)
    for arr in (z, w, x, y):
        arr.setflags(write=False)
    return KernelTables(case, n, z, w, x, y)


def combine(case: ParityCase, z, w, x, y, alpha, beta):
    """Closed-form kernel from the four functions."""
    if case is ParityCase.EVEN_EVEN:
        return (z - 2 * alpha * x - 2 * beta * y + 4 * alpha * beta * w) ** 2
    if case is ParityCase.ODD_ODD:
        return (z - alpha * beta * w) ** 2 + (alpha * x + beta * y) ** 2
    return (z - 2 * alpha * x) ** 2 + 4 * beta**2 * (y - 2 * alpha * w) ** 2


def kernel_even_even(coeffs: EvenEvenCoeffs, t, alpha: float, beta: float):
    """``(sum_k c_k(alpha, beta) t^(2k))^2``."""
    t = np.asarray(t, dtype=float)
    c = coeffs.c(alpha, beta)
    series = np.polynomial.polynomial.polyval(t**2, c)
    return series**2


def kernel_odd_odd(params: DumbbellParams, t, alpha: float, beta: float):
    """``(Z - alpha beta W)^2 + (alpha X + beta Y)^2`` with ``Z, W, X, Y`` from ``M, R, S, T``."""
    if params.case is not ParityCase.ODD_ODD:
        raise ValueError(f"odd-odd kernel needs odd r and s, got {params}")
    t = np.asarray(t, dtype=float)
    m, rr, ss, tt = mrst_polys(params)
    u = t**2
    z = m(u)
    w = 4 * t ** (params.r + params.s) * tt(u)
    x = 2 * t**params.r * rr(u)
    y = 2 * t**params.s * ss(u)
    return (z - alpha * beta * w) ** 2 + (alpha * x + beta * y) ** 2


def mixed_functions(params: DumbbellParams, t):
    """``(Z, W, X, Y)`` of the mixed case; ``Z, X`` even in ``t``, ``W, Y`` odd."""
    params, _ = params.canonical()
    if params.case is not ParityCase.MIXED:
        raise ValueError(f"mixed kernel needs one even and one odd cycle, got {params}")
    tab = kernel_tables(params)
    return tab.functions(t)


def kernel_mixed(params: DumbbellParams, t, alpha: float, beta: float):
    z, w, x, y = mixed_functions(params, t)
    return (z - 2 * alpha * x) ** 2 + 4 * beta**2 * (y - 2 * alpha * w) ** 2


def kernel_from_charpoly(poly: np.ndarray, t):
    """``|t^n P(i/t)|^2`` straight from real coefficients (lowest first)."""
    t = np.asarray(t, dtype=float)
    n = len(poly) - 1
    # t^n P(i/t) = sum_k p_k i^k t^(n-k)
    acc = np.zeros_like(t, dtype=complex)
    for k, p in enumerate(poly):
        acc = acc + p * (1j) ** k * t ** (n - k)
    return np.abs(acc) ** 2


# ---------------------------------------------------------------------------
# bound kernels and adaptive quadrature


@dataclass(frozen=True)
class CoulsonKernel:
    """Kernel ``K(t; alpha, beta)`` of one dumbbell with the gain point fixed."""

    tables: KernelTables
    alpha: float
    beta: float

    @property
    def n(self) -> int:
        return self.tables.n

    def __call__(self, t):
        return combine(self.tables.case, *self.tables.functions(t), self.alpha, self.beta)

    def reversed(self, u):
        """``u^(2n) K(1/u)``."""
        return combine(self.tables.case, *self.tables.functions(u, reverse=True), self.alpha, self.beta)


def make_kernel(params: DumbbellParams, alpha: float, beta: float) -> CoulsonKernel:
    return CoulsonKernel(kernel_tables(params), float(alpha), float(beta))


# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    vals = f(0.5 * (a + b) + half * GK_NODES)
    k = half * float(GK_WEIGHTS @ vals)
    g = half * float(G_WEIGHTS @ vals)
    return k, abs(k - g)


def adaptive_integrate(f, a: float, b: float, tol: float, max_panels: int = 4000) -> tuple[float, float]:
    """Globally adaptive Gauss-Kronrod 7/15 quadrature of a vectorised ``f``.

    Bisects the panel with the largest error estimate until the summed
    estimate drops below ``tol``.  Returns ``(value, error_estimate)``.
    """
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val)]
    total_val, total_err = val, err
    panels = 1
    while total_err > tol:
        if panels >= max_panels:
            raise QuadratureError(f"no convergence on [{a}, {b}] after {panels} panels", total_err)
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureError(f"panel [{lo}, {hi}] cannot be bisected", total_err)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total_val += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        panels += 1
    # re-sum to shed the drift of the running total
    return math.fsum(item[3] for item in heap), total_err


@dataclass
class _LogGuard:
    clamped: int = 0

    def log(self, k):
        k = np.asarray(k, dtype=float)
        low = k < LOG_FLOOR
        if low.any():
            self.clamped += int(low.sum())
            k = np.where(low, LOG_FLOOR, k)
        return np.log(k)


def coulson_energy(kernel: CoulsonKernel, n: int | None = None, tol: float = 1e-9) -> float:
    """Energy from the Coulson integral with absolute error target ``tol``.

    ``kernel`` must provide ``kernel(t)`` and ``kernel.reversed(u)``.
    """
    n = kernel.n if n is None else n
    guard = _LogGuard()
    lower, _ = adaptive_integrate(lambda t: guard.log(kernel(t)) / t**2, 0.0, 1.0, tol / 2)
    upper, _ = adaptive_integrate(lambda u: guard.log(kernel.reversed(u)), 0.0, 1.0, tol / 2)
    return (lower + upper + 2.0 * n) / math.pi


def coulson_energy_ab(params: DumbbellParams, alpha: float, beta: float, tol: float = 1e-9) -> float:
    return coulson_energy(make_kernel(params, alpha, beta), tol=tol)


# ---------------------------------------------------------------------------
# fixed graded rule for batched evaluation


@dataclass(frozen=True)
class GradedRule:
    """Composite Gauss-Legendre rule for the two halves of the Coulson integral.

    ``t`` in ``[0, 1]`` uses ``t_panels`` equal panels; ``u`` in ``[0, 1]`` uses
    dyadic panels ``[2^-(k+1), 2^-k]`` for ``k < u_levels`` plus ``[0, 2^-u_levels]``,
    which resolves the logarithmic behaviour of ``Krev`` near ``u = 0``.
    """

    t_panels: int = 4
    t_order: int = 20
    u_levels: int = 52
    u_order: int = 14

    @staticmethod
    def _panels(edges, order):
        x, w = np.polynomial.legendre.leggauss(order)
        nodes, weights = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            nodes.append(0.5 * (lo + hi) + half * x)
            weights.append(half * w)
        return np.concatenate(nodes), np.concatenate(weights)

    def t_nodes(self):
        return self._panels(np.linspace(0.0, 1.0, self.t_panels + 1), self.t_order)

    def u_nodes(self):
        edges = [0.0] + [2.0 ** (-k) for k in range(self.u_levels, -1, -1)]
        return self._panels(np.array(edges), self.u_order)


DEFAULT_RULE = GradedRule()


class CoulsonObjective:
    """Batched Coulson energies of one triple on a fixed quadrature rule.

    The four kernel functions are tabulated once at every node; an energy
    evaluation is then a single weighted sum of ``log K`` handled by the
    compiled core when it is available.
    """

    def __init__(self, params: DumbbellParams, rule: GradedRule = DEFAULT_RULE, backend: str = "auto"):
        self.params, self.swapped = params.canonical()
        self.n = self.params.n
        tab = kernel_tables(self.params)
        self.case = tab.case
        self.case_code = CASE_CODES[tab.case]
        t, wt = rule.t_nodes()
        u, wu = rule.u_nodes()
        fwd = tab.functions(t)
        rev = tab.functions(u, reverse=True)
        self._z, self._w, self._x, self._y = (
            np.ascontiguousarray(np.concatenate([a, b])) for a, b in zip(fwd, rev)
        )
        self._weights = np.ascontiguousarray(np.concatenate([wt / t**2, wu]))
        self._batch = _backend.get(backend)
        self.backend = backend if backend != "auto" else _backend.DEFAULT
        self.clamped = 0

    def __call__(self, alpha, beta) -> np.ndarray:
        a = np.ascontiguousarray(np.atleast_1d(np.asarray(alpha, dtype=float)))
        b = np.ascontiguousarray(np.atleast_1d(np.asarray(beta, dtype=float)))
        a, b = np.broadcast_arrays(a, b)
        sums, clamped = self._batch(
            self.case_code, self._z, self._w, self._x, self._y, self._weights,
            np.ascontiguousarray(a), np.ascontiguousarray(b), LOG_FLOOR,
        )
        self.clamped += clamped
        return (np.asarray(sums) + 2.0 * self.n) / math.pi

    def energy(self, alpha: float, beta: float) -> float:
        return float(self(alpha, beta)[0])

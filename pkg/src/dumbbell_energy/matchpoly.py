"""Exact integer matching-polynomial machinery.

Everything here works over Python integers, so counts never overflow.
Polynomials are dense, lowest degree first.  The same :class:`IntPoly`
type is used for matching polynomials in ``x`` and for the Fibonacci-type
recurrence polynomials in ``u = t**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import zip_longest
from typing import Iterable, Sequence

from .graphs import DumbbellParams, SimpleGraph, build_dumbbell


@dataclass(frozen=True)
class IntPoly:
    """Univariate polynomial with exact integer coefficients."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        # -1 for the zero polynomial
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: "IntPoly | int") -> "IntPoly":
        other = _lift(other)
        return IntPoly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly(-a for a in self.coeffs)

    def __sub__(self, other: "IntPoly | int") -> "IntPoly":
        return self + (-_lift(other))

    def __rsub__(self, other: "IntPoly | int") -> "IntPoly":
        return _lift(other) - self

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        other = _lift(other)
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPoly":
        out = IntPoly([1])
        for _ in range(e):
            out = out * self
        return out

    def shift(self, k: int) -> "IntPoly":
        """Multiply by ``var**k``."""
        return IntPoly([0] * k + list(self.coeffs)) if self.coeffs else IntPoly()

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"


def _lift(p: "IntPoly | int") -> IntPoly:
    return p if isinstance(p, IntPoly) else IntPoly([p])


X = IntPoly([0, 1])


# ---------------------------------------------------------------------------
# matching numbers of arbitrary small graphs


def matching_counts(graph: SimpleGraph) -> list[int]:
    """Numbers ``m(G, j)`` of ``j``-matchings, ``j = 0 .. n//2``.

    Uses the edge-deletion recursion ``m(G, j) = m(G-e, j) + m(G-u-v, j-1)``
    applied to every edge at the lowest live vertex ``u`` at once, so each
    residual graph is an induced subgraph keyed by its vertex bitmask.
    """
    n = graph.n
    if n > 64:
        raise ValueError(f"matching_counts supports n <= 64, got {n}")
    adj = [0] * n
    for u, v in graph.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    memo: dict[int, tuple[int, ...]] = {0: (1,)}

    def rec(mask: int) -> tuple[int, ...]:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        low = mask & -mask
        u = low.bit_length() - 1
        rest = mask ^ low
        out = list(rec(rest))
        nbrs = adj[u] & rest
        while nbrs:
            bit = nbrs & -nbrs
            nbrs ^= bit
            sub = rec(rest ^ bit)
            if len(out) < len(sub) + 1:
                out.extend([0] * (len(sub) + 1 - len(out)))
            for j, c in enumerate(sub):
                out[j + 1] += c
        res = tuple(out)
        memo[mask] = res
        return res

    counts = list(rec((1 << n) - 1)) if n else [1]
    counts.extend([0] * (n // 2 + 1 - len(counts)))
    return counts


def matching_poly_from_counts(counts: Sequence[int], n: int) -> IntPoly:
    """``sum_j (-1)**j m(G, j) x**(n - 2j)``."""
    c = [0] * (n + 1)
    for j, m in enumerate(counts):
        if m:
            c[n - 2 * j] = (-1) ** j * m
    return IntPoly(c)


def counts_from_matching_poly(p: IntPoly, n: int) -> list[int]:
    """Inverse of :func:`matching_poly_from_counts`."""
    return [(-1) ** j * p[n - 2 * j] for j in range(n // 2 + 1)]


def matching_poly(graph: SimpleGraph) -> IntPoly:
    return matching_poly_from_counts(matching_counts(graph), graph.n)


# ---------------------------------------------------------------------------
# paths, cycles and the f/g recurrence polynomials


@lru_cache(maxsize=None)
def _path(j: int) -> IntPoly:
    # backward extension of the three-term recurrence: P_{-1} -> 0, P_{-2} -> -1
    if j == -2:
        return IntPoly([-1])
    if j == -1:
        return IntPoly()
    if j == 0:
        return IntPoly([1])
    if j == 1:
        return X
    return X * _path(j - 1) - _path(j - 2)


def path_poly(j: int) -> IntPoly:
    """Matching polynomial of the path on ``j`` vertices (``P_0`` is empty)."""
    if j < 0:
        raise ValueError(f"path length must be >= 0, got {j}")
    return _path(j)


def cycle_poly(j: int) -> IntPoly:
    """Matching polynomial of the cycle ``C_j``, ``j >= 3``."""
    if j < 3:
        raise ValueError(f"cycle length must be >= 3, got {j}")
    return _path(j) - _path(j - 2)


@lru_cache(maxsize=None)
def f_poly(j: int) -> IntPoly:
    """``f_{-1} = 0``, ``f_0 = 1``, ``f_j = f_{j-1} + u f_{j-2}``."""
    if j < -1:
        raise ValueError(f"f_j defined for j >= -1, got {j}")
    if j == -1:
        return IntPoly()
    if j == 0:
        return IntPoly([1])
    return f_poly(j - 1) + f_poly(j - 2).shift(1)


def g_poly(j: int) -> IntPoly:
    """``g_j = f_j + u f_{j-2}`` for ``j >= 1``."""
    if j < 1:
        raise ValueError(f"g_j defined for j >= 1, got {j}")
    return f_poly(j) + f_poly(j - 2).shift(1)


def fg_polys(j: int) -> tuple[IntPoly, IntPoly | None]:
    """Return ``(f_j, g_j)``; ``g_j`` is ``None`` when ``j < 1``."""
    return f_poly(j), (g_poly(j) if j >= 1 else None)


# ---------------------------------------------------------------------------
# dumbbell component polynomials


@lru_cache(maxsize=256)
def dumbbell_component_polys(params: DumbbellParams) -> tuple[IntPoly, IntPoly, IntPoly, IntPoly]:
    """``(m_D, m_{D-C_r}, m_{D-C_s}, m_{P_{l-1}})`` in ``x``.

    Built from path/cycle factors via the coalescence identity.  The
    ``P_{l-2}`` and ``P_{l-3}`` factors use the backward extension of the
    path recurrence (``P_{-1} -> 0``, ``P_{-2} -> -1``), which reproduces the
    single-bridge formula ``m_D = m_{C_r} m_{C_s} - m_{P_{r-1}} m_{P_{s-1}}``
    at ``l = 1``.
    """
    r, s, ell = params.r, params.s, params.ell
    cr, cs = cycle_poly(r), cycle_poly(s)
    pr, ps = _path(r - 1), _path(s - 1)
    p1, p2, p3 = _path(ell - 1), _path(ell - 2), _path(ell - 3)
    minus_cr = p1 * cs - p2 * ps
    minus_cs = p1 * cr - p2 * pr
    m_d = p1 * cr * cs - p2 * (pr * cs + ps * cr) + p3 * pr * ps
    return m_d, minus_cr, minus_cs, p1


@lru_cache(maxsize=256)
def mrst_polys(params: DumbbellParams) -> tuple[IntPoly, IntPoly, IntPoly, IntPoly]:
    """The odd-odd polynomials ``(M, R, S, T)`` in ``u``."""
    r, s, ell = params.r, params.s, params.ell
    if r % 2 == 0 or s % 2 == 0:
        raise ValueError(f"M/R/S/T need odd cycle lengths, got r={r}, s={s}")
    f = f_poly
    gr, gs = g_poly(r), g_poly(s)
    fr, fs = f(r - 1), f(s - 1)
    t = f(ell - 1)
    r_ = t * gs + (f(ell - 2) * fs).shift(1)
    s_ = t * gr + (f(ell - 2) * fr).shift(1)
    if ell == 1:
        m = gr * gs + (fr * fs).shift(1)
    else:
        m = t * gr * gs + (f(ell - 2) * (fr * gs + fs * gr)).shift(1) + (f(ell - 3) * fr * fs).shift(2)
    return m, r_, s_, t


def shifted_counts(p: IntPoly, n_sub: int, shift: int, length: int) -> list[int]:
    """Counts of ``p`` (on ``n_sub`` vertices) re-indexed by ``k = j + shift``."""
    base = counts_from_matching_poly(p, n_sub)
    out = [0] * length
    for j, c in enumerate(base):
        k = j + shift
        if 0 <= k < length:
            out[k] = c
    return out


def dumbbell_subgraph_counts(params: DumbbellParams) -> dict[str, list[int]]:
    """Matching numbers of ``D``, ``D-C_r``, ``D-C_s`` and ``P_{l-1}`` by the general recursion.

    Works on the explicitly built graph; used to cross-check the product
    formulas above.
    """
    g = build_dumbbell(params)
    return {
        "D": matching_counts(g),
        "D-Cr": matching_counts(g.delete(g.cycle_r)),
        "D-Cs": matching_counts(g.delete(g.cycle_s)),
        "P": matching_counts(g.delete(g.cycle_r + g.cycle_s)),
    }

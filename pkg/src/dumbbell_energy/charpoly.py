"""Characteristic polynomials of gain graphs.

Real polynomials are plain ``float64`` arrays, lowest degree first.  Three
independent routes are provided: the dumbbell assembly from matching
polynomials, the general sum over vertex-disjoint cycle unions, and a
determinant oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import DumbbellParams, GainGraph
from .matchpoly import IntPoly, dumbbell_component_polys, matching_poly, shifted_counts

CYCLE_ORACLE_MAX_N = 20


def _as_float(p: IntPoly, length: int) -> np.ndarray:
    out = np.zeros(length)
    out[: len(p.coeffs)] = [float(c) for c in p.coeffs]
    return out


def char_poly_dumbbell(params: DumbbellParams, a: float, b: float) -> np.ndarray:
    """``m_D - 2a m_{D-C_r} - 2b m_{D-C_s} + 4ab m_{P_{l-1}}`` with ``a, b`` the real gain parts."""
    n = params.n
    m_d, m_r, m_s, m_p = dumbbell_component_polys(params)
    return (
        _as_float(m_d, n + 1)
        - 2.0 * a * _as_float(m_r, n + 1)
        - 2.0 * b * _as_float(m_s, n + 1)
        + 4.0 * a * b * _as_float(m_p, n + 1)
    )


def simple_cycles(graph: GainGraph) -> list[tuple[tuple[int, ...], complex]]:
    """All simple cycles of an undirected gain graph with their gains.

    Each cycle is listed once, starting at its smallest vertex; the gain is
    the product along that traversal.
    """
    adj = graph.underlying.neighbours()
    gain = {}
    for (u, v), g in zip(graph.edges, graph.gains):
        gain[(u, v)] = complex(g)
        gain[(v, u)] = complex(g).conjugate()
    found = []

    def dfs(start, path, seen):
        last = path[-1]
        for w in adj[last]:
            if w == start and len(path) >= 3 and path[1] < path[-1]:
                cyc = tuple(path)
                phi = 1 + 0j
                for x, y in zip(cyc, cyc[1:] + (start,)):
                    phi *= gain[(x, y)]
                found.append((cyc, phi))
            elif w > start and w not in seen:
                seen.add(w)
                path.append(w)
                dfs(start, path, seen)
                path.pop()
                seen.discard(w)

    for v in range(graph.n):
        dfs(v, [v], {v})
    return found


def char_poly_general(graph: GainGraph) -> np.ndarray:
    """Characteristic polynomial as ``m_G + sum_K (-2)^{|K|} prod Re(phi(C)) m_{G-K}``."""
    n = graph.n
    if n > CYCLE_ORACLE_MAX_N:
        raise ValueError(f"cycle-union oracle limited to n <= {CYCLE_ORACLE_MAX_N}, got {n}")
    g = graph.underlying
    cycles = [(sum(1 << v for v in cyc), cyc, phi.real) for cyc, phi in simple_cycles(graph)]
    total = _as_float(matching_poly(g), n + 1)

    def extend(start: int, used: int, verts: tuple[int, ...], weight: float):
        nonlocal total
        for i in range(start, len(cycles)):
            mask, cyc, re = cycles[i]
            if mask & used:
                continue
            w = -2.0 * re * weight
            vs = verts + cyc
            total = total + w * _as_float(matching_poly(g.delete(vs)), n + 1)
            extend(i + 1, used | mask, vs, w)

    extend(0, 0, (), 1.0)
    return total


def det_char_poly(matrix: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Coefficients of ``det(xI - A)`` by sampling determinants on a circle.

    The ``n+1`` samples at ``radius * exp(2 pi i k / (n+1))`` are inverted with
    a discrete Fourier transform.  No eigenvalues are involved.
    """
    a = np.asarray(matrix, dtype=complex)
    n = a.shape[0]
    m = n + 1
    zs = radius * np.exp(2j * np.pi * np.arange(m) / m)
    eye = np.eye(n)
    vals = np.array([np.linalg.det(z * eye - a) for z in zs])
    coeffs = np.fft.fft(vals) / m
    coeffs = coeffs / radius ** np.arange(m)
    return coeffs.real.copy()


@dataclass(frozen=True)
class EvenEvenCoeffs:
    """Quadruples ``(M_k, R_k, S_k, T_k)`` for ``k = 0 .. n//2`` of an even-even dumbbell."""

    params: DumbbellParams
    M: tuple[int, ...]
    R: tuple[int, ...]
    S: tuple[int, ...]
    T: tuple[int, ...]

    def c(self, alpha: float, beta: float) -> np.ndarray:
        """``c_k = M_k - 2 alpha R_k - 2 beta S_k + 4 alpha beta T_k``."""
        m, r, s, t = (np.array(v, dtype=float) for v in (self.M, self.R, self.S, self.T))
        return m - 2 * alpha * r - 2 * beta * s + 4 * alpha * beta * t

    def char_poly(self, alpha: float, beta: float) -> np.ndarray:
        """``sum_k (-1)^k c_k x^{n-2k}``."""
        n = self.params.n
        out = np.zeros(n + 1)
        for k, ck in enumerate(self.c(alpha, beta)):
            out[n - 2 * k] = (-1) ** k * ck
        return out


def _shifted(p: IntPoly, n_sub: int, shift: int, length: int) -> tuple[int, ...]:
    return tuple(shifted_counts(p, n_sub, shift, length))


def even_even_coeffs(params: DumbbellParams) -> EvenEvenCoeffs:
    r, s, ell, n = params.r, params.s, params.ell, params.n
    if r % 2 or s % 2:
        raise ValueError(f"even-even coefficients need even r and s, got r={r}, s={s}")
    m_d, m_r, m_s, m_p = dumbbell_component_polys(params)
    size = n // 2 + 1
    return EvenEvenCoeffs(
        params=params,
        M=_shifted(m_d, n, 0, size),
        R=_shifted(m_r, n - r, r // 2, size),
        S=_shifted(m_s, n - s, s // 2, size),
        T=_shifted(m_p, ell - 1, (r + s) // 2, size),
    )


def mixed_coeffs(params: DumbbellParams) -> tuple[tuple[int, ...], ...]:
    """``(M_k, R_k, S_k, T_k)`` tables for ``r`` even, ``s`` odd, ``k = 0 .. n//2``."""
    r, s, ell, n = params.r, params.s, params.ell, params.n
    if r % 2 or s % 2 == 0:
        raise ValueError(f"mixed coefficients need r even and s odd, got r={r}, s={s}")
    m_d, m_r, m_s, m_p = dumbbell_component_polys(params)
    size = n // 2 + 1
    return (
        _shifted(m_d, n, 0, size),
        _shifted(m_r, n - r, r // 2, size),
        _shifted(m_s, n - s, (s - 1) // 2, size),
        _shifted(m_p, ell - 1, (r + s - 1) // 2, size),
    )

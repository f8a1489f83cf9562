"""Dumbbell graphs, gain assignments and the eigenvalue energy route.

Vertex labels are fixed so fixtures stay stable:

* ``C_r`` occupies ``0 .. r-1`` (edges ``(i, i+1)`` then the closing edge ``(r-1, 0)``),
* the path interior occupies ``r .. r+l-2``,
* ``C_s`` occupies ``r+l-1 .. n-1``.

The path runs from vertex ``0`` to the first ``C_s`` vertex.  In the gauge
normal form every edge carries gain 1 except the two cycle-closing edges,
which carry ``gamma_r`` and ``gamma_s``.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

UNIT_TOL = 1e-12


class EigenSolverError(RuntimeError):
    """The dense Hermitian eigensolver failed or produced non-finite output."""


class ParityCase(str, enum.Enum):
    EVEN_EVEN = "even-even"
    ODD_ODD = "odd-odd"
    MIXED = "mixed"


@dataclass(frozen=True)
class DumbbellParams:
    r: int
    s: int
    ell: int

    def __post_init__(self):
        for name in ("r", "s", "ell"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise TypeError(f"{name} must be an integer")
        if self.r < 3 or self.s < 3:
            raise ValueError(f"cycle lengths must be >= 3, got r={self.r}, s={self.s}")
        if self.ell < 1:
            raise ValueError(f"path length must be >= 1, got ell={self.ell}")

    @property
    def n(self) -> int:
        return self.r + self.s + self.ell - 1

    @property
    def case(self) -> ParityCase:
        pr, ps = self.r % 2, self.s % 2
        if pr == ps == 0:
            return ParityCase.EVEN_EVEN
        if pr == ps == 1:
            return ParityCase.ODD_ODD
        return ParityCase.MIXED

    def canonical(self) -> tuple["DumbbellParams", bool]:
        """Mixed triples are reoriented so that ``r`` is even; returns ``(params, swapped)``."""
        if self.case is ParityCase.MIXED and self.r % 2 == 1:
            return DumbbellParams(self.s, self.r, self.ell), True
        return self, False

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.s, self.ell)


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def delete(self, vertices: Iterable[int]) -> "SimpleGraph":
        """Induced subgraph on the remaining vertices, relabelled in increasing order."""
        gone = set(vertices)
        keep = [v for v in range(self.n) if v not in gone]
        relabel = {v: i for i, v in enumerate(keep)}
        edges = tuple(
            (relabel[u], relabel[v]) for u, v in self.edges if u in relabel and v in relabel
        )
        return SimpleGraph(len(keep), edges)

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass(frozen=True)
class DumbbellGraph(SimpleGraph):
    params: DumbbellParams = field(default=None)
    cycle_r: tuple[int, ...] = ()
    cycle_s: tuple[int, ...] = ()
    path_interior: tuple[int, ...] = ()
    gauge_edges: tuple[tuple[int, int], tuple[int, int]] = ((0, 0), (0, 0))


def build_dumbbell(params: DumbbellParams) -> DumbbellGraph:
    """Underlying graph of ``D_{r,s,l}`` without gains (``n`` vertices, ``n+1`` edges)."""
    r, s, ell = params.r, params.s, params.ell
    cyc_r = tuple(range(r))
    interior = tuple(range(r, r + ell - 1))
    first_s = r + ell - 1
    cyc_s = tuple(range(first_s, first_s + s))
    edges: list[tuple[int, int]] = [(i, i + 1) for i in range(r - 1)] + [(r - 1, 0)]
    path = (0,) + interior + (first_s,)
    edges += list(zip(path, path[1:]))
    edges += [(cyc_s[i], cyc_s[i + 1]) for i in range(s - 1)] + [(cyc_s[-1], cyc_s[0])]
    return DumbbellGraph(
        n=params.n,
        edges=tuple(edges),
        params=params,
        cycle_r=cyc_r,
        cycle_s=cyc_s,
        path_interior=interior,
        gauge_edges=((r - 1, 0), (cyc_s[-1], cyc_s[0])),
    )


# ---------------------------------------------------------------------------
# gains


def case_sign(k: int) -> int:
    """``(-1)**(k/2)`` for even ``k``, ``(-1)**((k+1)/2)`` for odd ``k``."""
    return (-1) ** (k // 2) if k % 2 == 0 else (-1) ** ((k + 1) // 2)


@dataclass(frozen=True)
class GainSpec:
    """Cycle gains of a dumbbell together with their reduced coordinates.

    ``params`` is the canonical orientation; ``swapped`` records whether a
    mixed triple was reoriented (the gains are swapped along with it).
    """

    params: DumbbellParams
    gamma_r: complex
    gamma_s: complex
    a: float
    b: float
    alpha: float
    beta: float
    swapped: bool = False


def _check_unit(z: complex, name: str) -> complex:
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must lie on the unit circle, |{name}| = {abs(z)!r}")
    return z


def normalize_gains(params: DumbbellParams, gamma_r: complex, gamma_s: complex) -> GainSpec:
    gamma_r = _check_unit(gamma_r, "gamma_r")
    gamma_s = _check_unit(gamma_s, "gamma_s")
    canon, swapped = params.canonical()
    if swapped:
        gamma_r, gamma_s = gamma_s, gamma_r
    a, b = gamma_r.real, gamma_s.real
    return GainSpec(
        params=canon,
        gamma_r=gamma_r,
        gamma_s=gamma_s,
        a=a,
        b=b,
        alpha=case_sign(canon.r) * a,
        beta=case_sign(canon.s) * b,
        swapped=swapped,
    )


def _gain_from_real(x: float) -> complex:
    x = min(1.0, max(-1.0, float(x)))
    return complex(x, np.sqrt(1.0 - x * x))


def gains_from_alpha_beta(params: DumbbellParams, alpha: float, beta: float) -> GainSpec:
    """Gains with the given case-normalised coordinates (upper half circle).

    ``alpha`` refers to the even cycle of a mixed triple, whatever order
    ``params`` lists the cycles in.
    """
    if not (-1.0 <= alpha <= 1.0 and -1.0 <= beta <= 1.0):
        raise ValueError(f"alpha, beta must lie in [-1, 1], got ({alpha}, {beta})")
    canon, swapped = params.canonical()
    g_r = _gain_from_real(case_sign(canon.r) * alpha)
    g_s = _gain_from_real(case_sign(canon.s) * beta)
    spec = normalize_gains(canon, g_r, g_s)
    return replace(spec, swapped=swapped)


def gains_from_angles(params: DumbbellParams, theta_r: float, theta_s: float) -> GainSpec:
    return normalize_gains(params, cmath.exp(1j * theta_r), cmath.exp(1j * theta_s))


@dataclass(frozen=True)
class GainGraph:
    """Gain graph; ``gains[i]`` is the gain of ``edges[i]`` oriented as stored."""

    n: int
    edges: tuple[tuple[int, int], ...]
    gains: tuple[complex, ...]

    def gain(self, u: int, v: int) -> complex:
        for (a, b), g in zip(self.edges, self.gains):
            if (a, b) == (u, v):
                return g
            if (a, b) == (v, u):
                return g.conjugate()
        raise KeyError((u, v))

    @property
    def underlying(self) -> SimpleGraph:
        return SimpleGraph(self.n, self.edges)


def gain_graph(spec: GainSpec) -> GainGraph:
    """Dumbbell in gauge normal form for the given cycle gains."""
    g = build_dumbbell(spec.params)
    er, es = g.gauge_edges
    gains = []
    for e in g.edges:
        gains.append(spec.gamma_r if e == er else spec.gamma_s if e == es else 1 + 0j)
    return GainGraph(g.n, g.edges, tuple(gains))


def hermitian_adjacency(graph: GainGraph) -> np.ndarray:
    a = np.zeros((graph.n, graph.n), dtype=complex)
    for (u, v), g in zip(graph.edges, graph.gains):
        a[u, v] = g
        a[v, u] = np.conj(g)
    return a


def spectrum(matrix: np.ndarray) -> np.ndarray:
    """Sorted real eigenvalues of a Hermitian matrix."""
    try:
        w = np.linalg.eigvalsh(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver did not converge: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigenSolverError("eigensolver returned non-finite eigenvalues")
    return w


def energy_from_matrix(matrix: np.ndarray) -> float:
    return float(np.abs(spectrum(matrix)).sum())


def energy_eig(params: DumbbellParams, gains: GainSpec | Sequence[complex]) -> float:
    """Sum of absolute eigenvalues of the Hermitian adjacency matrix."""
    if not isinstance(gains, GainSpec):
        gains = normalize_gains(params, *gains)
    elif gains.params != params.canonical()[0]:
        raise ValueError(f"gain spec built for {gains.params}, not {params}")
    return energy_from_matrix(hermitian_adjacency(gain_graph(gains)))


def energy_eig_ab(params: DumbbellParams, alpha: float, beta: float) -> float:
    return energy_eig(params, gains_from_alpha_beta(params, alpha, beta))

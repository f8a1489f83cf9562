"""Grid-plus-refinement extremal search over the gain square ``[-1, 1]^2``.

Points live on an integer lattice whose unit is the final mesh width, so
every round samples exact lattice points and results are reproducible bit
for bit.  Within a round all candidates are evaluated in one batch and the
incumbent is chosen afterwards, so evaluation order never matters.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .coulson import CoulsonObjective
from .graphs import DumbbellParams, ParityCase, energy_eig_ab

EnergyFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

PASS, FAIL, UNDECIDED = "PASS", "FAIL", "UNDECIDED"
ENERGY_SLACK = 1e-7
COUNTEREXAMPLE_GAP = 1e-6
QUARTER_TOL = 0.02


class SearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    mesh: float = 0.1
    rounds: int = 10
    radius: int = 2
    objective: str = "min"

    def __post_init__(self):
        if self.objective not in ("min", "max"):
            raise ValueError(f"objective must be 'min' or 'max', got {self.objective!r}")
        if self.rounds < 0 or self.radius < 1:
            raise ValueError("rounds must be >= 0 and radius >= 1")
        per_unit = 1.0 / self.mesh
        if abs(per_unit - round(per_unit)) > 1e-9 or round(per_unit) < 1:
            raise ValueError(f"1/mesh must be a positive integer, got mesh={self.mesh}")

    @property
    def final_mesh(self) -> float:
        return self.mesh / 2**self.rounds

    @property
    def lattice(self) -> int:
        """Lattice units per 1.0."""
        return round(1.0 / self.mesh) * 2**self.rounds


@dataclass
class SearchResult:
    params: tuple[int, int, int]
    swapped: bool
    objective: str
    alpha: float
    beta: float
    energy: float
    e00: float
    delta_e: float
    reference: dict[str, float]
    trace: list[dict]
    n_evals: int

    def to_dict(self) -> dict:
        return asdict(self)


def eig_objective(params: DumbbellParams) -> EnergyFn:
    """Eigenvalue energies, vectorised over points.

    Odd-odd energies are invariant under ``(a, b) -> (-a, -b)``; both points
    are evaluated at the same representative so mirror images tie exactly,
    as they do on the Coulson route.
    """
    odd_odd = params.case is ParityCase.ODD_ODD

    def fn(alpha, beta):
        out = []
        for a, b in zip(alpha, beta):
            a, b = float(a), float(b)
            if odd_odd:
                a, b = max((a, b), (-a, -b))
            out.append(energy_eig_ab(params, a, b))
        return np.array(out)

    return fn


def _default_fn(params: DumbbellParams, method: str) -> EnergyFn:
    if method == "coulson":
        return CoulsonObjective(params)
    if method == "eig":
        return eig_objective(params)
    raise ValueError(f"unknown energy method {method!r}")


REFERENCE_POINTS = {
    "(0,0)": (0, 0),
    "(1,1)": (1, 1),
    "(1,-1)": (1, -1),
    "(-1,1)": (-1, 1),
    "(-1,-1)": (-1, -1),
}


def grid_refine_search(
    params: DumbbellParams,
    config: SearchConfig = SearchConfig(),
    energy_fn: EnergyFn | None = None,
    method: str = "coulson",
) -> SearchResult:
    """Grid search at ``config.mesh`` followed by ``config.rounds`` halving rounds.

    Each refinement round samples the box of half-width ``radius`` current
    mesh steps around the incumbent, clipped to the square.  Exact ties are
    broken toward the lexicographically largest ``(alpha, beta)``.
    """
    canon, swapped = params.canonical()
    fn = energy_fn if energy_fn is not None else _default_fn(canon, method)
    big = config.lattice
    sign = 1.0 if config.objective == "min" else -1.0
    cache: dict[tuple[int, int], float] = {}

    def evaluate(points: list[tuple[int, int]]) -> None:
        todo = [p for p in points if p not in cache]
        if not todo:
            return
        arr = np.array(todo, dtype=float) / big
        try:
            vals = np.asarray(fn(arr[:, 0], arr[:, 1]), dtype=float)
        except Exception as exc:
            raise SearchError(f"energy evaluation failed near {tuple(arr[0])} for {canon}: {exc}") from exc
        bad = ~np.isfinite(vals)
        if bad.any():
            raise SearchError(f"non-finite energy at {tuple(arr[bad.argmax()])} for {canon}")
        cache.update(zip(todo, vals.tolist()))

    def pick(points: Iterable[tuple[int, int]]) -> tuple[int, int]:
        return min(points, key=lambda p: (sign * cache[p], -p[0], -p[1]))

    step = 2**config.rounds
    axis = range(-big, big + 1, step)
    grid = [(i, j) for i in axis for j in axis]
    evaluate(grid)
    best = pick(grid)
    trace = [_trace_row(0, step / big, best, cache, big)]
    for rnd in range(1, config.rounds + 1):
        step //= 2
        offs = range(-config.radius * step, config.radius * step + 1, step)
        box = [
            (best[0] + di, best[1] + dj)
            for di in offs
            for dj in offs
            if abs(best[0] + di) <= big and abs(best[1] + dj) <= big
        ]
        evaluate(box)
        best = pick(box)
        trace.append(_trace_row(rnd, step / big, best, cache, big))

    refs = [(a * big, b * big) for a, b in REFERENCE_POINTS.values()]
    evaluate(refs)
    reference = {name: cache[(a * big, b * big)] for name, (a, b) in REFERENCE_POINTS.items()}
    energy = cache[best]
    return SearchResult(
        params=canon.as_tuple(),
        swapped=swapped,
        objective=config.objective,
        alpha=best[0] / big,
        beta=best[1] / big,
        energy=energy,
        e00=reference["(0,0)"],
        delta_e=reference["(0,0)"] - energy,
        reference=reference,
        trace=trace,
        n_evals=len(cache),
    )


def _trace_row(rnd, mesh, best, cache, big):
    return {"round": rnd, "mesh": mesh, "alpha": best[0] / big, "beta": best[1] / big, "energy": cache[best]}


# ---------------------------------------------------------------------------
# theorem verification


def predicted_extremizers(params: DumbbellParams, objective: str) -> list[tuple[float, float]] | None:
    """Predicted extremal points in case-normalised coordinates; ``None`` if open."""
    canon, _ = params.canonical()
    case = canon.case
    if case is ParityCase.EVEN_EVEN:
        return [(1.0, 1.0)] if objective == "min" else [(-1.0, -1.0)]
    if case is ParityCase.MIXED:
        return [(1.0, 0.0)] if objective == "min" else [(-1.0, -1.0), (-1.0, 1.0)]
    even_ell = canon.ell % 2 == 0
    if objective == "max":
        return [(-1.0, -1.0), (1.0, 1.0)] if even_ell else [(-1.0, 1.0), (1.0, -1.0)]
    return [(0.0, 0.0)] if even_ell else None


@dataclass
class ExtremumCheck:
    objective: str
    verdict: str
    predicted: list[tuple[float, float]] | None
    found: tuple[float, float]
    energy: float
    predicted_energy: float | None
    distance: float | None
    cross_check: dict | None = None


@dataclass
class TheoremReport:
    params: tuple[int, int, int]
    swapped: bool
    case: str
    verdict: str
    checks: list[ExtremumCheck] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _check_extremum(canon, config, fn, cross_check) -> ExtremumCheck:
    res = grid_refine_search(canon, config, energy_fn=fn)
    found = (res.alpha, res.beta)
    predicted = predicted_extremizers(canon, config.objective)
    extra = None
    if cross_check:
        alt = grid_refine_search(canon, config, method="eig")
        extra = {
            "alpha": alt.alpha,
            "beta": alt.beta,
            "energy": alt.energy,
            "point_gap": max(abs(alt.alpha - res.alpha), abs(alt.beta - res.beta)),
            "energy_gap": abs(alt.energy - res.energy),
        }
    if predicted is None:
        return ExtremumCheck(config.objective, UNDECIDED, None, found, res.energy, None, None, extra)
    pts = np.array(predicted)
    pred_e = fn(pts[:, 0], pts[:, 1])
    pred_best = float(pred_e.min() if config.objective == "min" else pred_e.max())
    dist = float(np.max(np.abs(pts - np.array(found)), axis=1).min())
    cell_ok = dist <= config.final_mesh * (1 + 1e-9)
    if config.objective == "min":
        energy_ok = res.energy >= pred_best - ENERGY_SLACK
    else:
        energy_ok = res.energy <= pred_best + ENERGY_SLACK
    verdict = PASS if cell_ok and energy_ok else FAIL
    if extra is not None and (extra["point_gap"] > config.final_mesh * (1 + 1e-9) or extra["energy_gap"] > 1e-6):
        verdict = FAIL
    return ExtremumCheck(config.objective, verdict, predicted, found, res.energy, pred_best, dist, extra)


def verify_theorem(
    params: DumbbellParams,
    config: SearchConfig = SearchConfig(),
    cross_check: bool = False,
) -> TheoremReport:
    """Run the min and max searches and compare against the predicted extremizers."""
    canon, swapped = params.canonical()
    fn = CoulsonObjective(canon)
    checks = [
        _check_extremum(canon, SearchConfig(config.mesh, config.rounds, config.radius, obj), fn, cross_check)
        for obj in ("min", "max")
    ]
    verdicts = {c.verdict for c in checks}
    overall = FAIL if FAIL in verdicts else UNDECIDED if UNDECIDED in verdicts else PASS
    return TheoremReport(canon.as_tuple(), swapped, canon.case.value, overall, checks)


# ---------------------------------------------------------------------------
# odd-odd-odd census


@dataclass
class ScanRow:
    r: int
    s: int
    ell: int
    alpha: float
    beta: float
    e_min: float
    e00: float
    delta_e: float
    counterexample: bool
    alphabeta: float
    near_quarter: bool


@dataclass
class ScanReport:
    rows: list[ScanRow]
    total: int
    counterexamples: int
    near_quarter: int

    def to_dict(self) -> dict:
        return asdict(self)


def _thread_cap() -> int:
    raw = os.environ.get("GAINSPEC_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = os.cpu_count() or 1
    return max(1, cap)


def _validate_odd(name: str, values: Sequence[int]) -> list[int]:
    vals = sorted(set(int(v) for v in values))
    if not vals:
        raise ValueError(f"{name} is empty")
    bad = [v for v in vals if v % 2 == 0]
    if bad:
        raise ValueError(f"{name} must contain odd values only, got {bad}")
    return vals


def scan_row(params: DumbbellParams, config: SearchConfig = SearchConfig()) -> ScanRow:
    res = grid_refine_search(params, SearchConfig(config.mesh, config.rounds, config.radius, "min"))
    prod = res.alpha * res.beta
    return ScanRow(
        r=params.r,
        s=params.s,
        ell=params.ell,
        alpha=res.alpha,
        beta=res.beta,
        e_min=res.energy,
        e00=res.e00,
        delta_e=res.delta_e,
        counterexample=res.energy < res.e00 - COUNTEREXAMPLE_GAP,
        alphabeta=prod,
        near_quarter=abs(prod - 0.25) < QUARTER_TOL,
    )


def scan_odd_odd_odd(
    r_set: Sequence[int],
    s_set: Sequence[int],
    ell_set: Sequence[int],
    config: SearchConfig = SearchConfig(),
    workers: int | None = None,
) -> ScanReport:
    """Minimum search on every odd triple; flags points beating ``E(0,0)`` by more than 1e-6."""
    rs = _validate_odd("r_set", r_set)
    ss = _validate_odd("s_set", s_set)
    ls = _validate_odd("ell_set", ell_set)
    for name, vals in (("r_set", rs), ("s_set", ss)):
        if min(vals) < 3:
            raise ValueError(f"{name} values must be >= 3")
    triples = [DumbbellParams(r, s, ell) for r in rs for s in ss for ell in ls]
    workers = min(workers or _thread_cap(), _thread_cap())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: scan_row(p, config), triples))
    else:
        rows = [scan_row(p, config) for p in triples]
    cex = [row for row in rows if row.counterexample]
    return ScanReport(
        rows=rows,
        total=len(rows),
        counterexamples=len(cex),
        near_quarter=sum(row.near_quarter for row in cex),
    )

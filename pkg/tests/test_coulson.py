import math
from fractions import Fraction
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy import integrate

from conftest import random_params
from dumbbell_energy import _backend
from dumbbell_energy.charpoly import char_poly_dumbbell, det_char_poly, even_even_coeffs
from dumbbell_energy.coulson import (
    G_WEIGHTS,
    GK_NODES,
    GK_WEIGHTS,
    CoulsonObjective,
    QuadratureError,
    _LogGuard,
    adaptive_integrate,
    coulson_energy,
    coulson_energy_ab,
    kernel_even_even,
    kernel_from_charpoly,
    kernel_mixed,
    kernel_odd_odd,
    kernel_tables,
    make_kernel,
    mixed_functions,
)
from dumbbell_energy.graphs import (
    DumbbellParams,
    energy_eig_ab,
    gain_graph,
    gains_from_alpha_beta,
    hermitian_adjacency,
)
from dumbbell_energy.matchpoly import mrst_polys


def poly_kernel(p, alpha, beta, t):
    spec = gains_from_alpha_beta(p, alpha, beta)
    return kernel_from_charpoly(char_poly_dumbbell(spec.params, spec.a, spec.b), t)


def det_kernel_at_one(p, alpha, beta):
    spec = gains_from_alpha_beta(p, alpha, beta)
    coeffs = det_char_poly(hermitian_adjacency(gain_graph(spec)))
    return abs(np.polynomial.polynomial.polyval(1j, coeffs)) ** 2


# --- quadrature ------------------------------------------------------------------


def test_gauss_kronrod_exactness():
    # Kronrod part exact to degree 22, embedded Gauss part to degree 13
    for deg in range(0, 23):
        exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
        assert GK_WEIGHTS @ GK_NODES**deg == pytest.approx(exact, abs=1e-14)
        if deg <= 13:
            assert G_WEIGHTS @ GK_NODES**deg == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize(
    "f, a, b",
    [
        (lambda x: np.log1p(x * x) / (1 + x), 0.0, 3.0),
        (lambda x: np.sqrt(x), 0.0, 1.0),
        (lambda x: np.exp(-x) * np.cos(7 * x), 0.0, 4.0),
    ],
)
def test_adaptive_matches_scipy(f, a, b):
    val, err = adaptive_integrate(f, a, b, 1e-11)
    ref, _ = integrate.quad(f, a, b, epsabs=1e-13, limit=200)
    assert abs(val - ref) < 1e-10
    assert err <= 1e-11


def test_quadrature_failure_reports_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_integrate(lambda x: np.abs(x - 1 / 3) ** 0.5, 0.0, 1.0, 1e-15, max_panels=3)
    assert info.value.estimate > 0


def test_log_guard_clamps_and_counts():
    guard = _LogGuard()
    out = guard.log(np.array([0.0, 1.0, 1e-320]))
    assert np.all(np.isfinite(out)) and guard.clamped == 2


# --- kernels ---------------------------------------------------------------------


def test_even_even_kernel_examples():
    p = DumbbellParams(4, 4, 1)
    cf = even_even_coeffs(p)
    assert kernel_even_even(cf, 1e-9, 0.7, -0.2) == pytest.approx(1.0)
    t = np.array([0.3, 1.0, 1.7])
    m_series = np.polynomial.polynomial.polyval(t**2, np.array(cf.M, float))
    assert np.allclose(kernel_even_even(cf, t, 0, 0), m_series**2, rtol=1e-14)
    assert kernel_even_even(cf, 1.0, 1, 1) == pytest.approx(det_kernel_at_one(p, 1, 1), rel=1e-9)


def test_odd_odd_kernel_examples():
    p = DumbbellParams(3, 3, 1)
    t = np.array([0.2, 0.9, 2.5])
    m = mrst_polys(p)[0]
    assert np.allclose(kernel_odd_odd(p, t, 0, 0), m(t**2) ** 2, rtol=1e-14)
    assert kernel_odd_odd(p, 1.0, 0.5, 0.5) == pytest.approx(det_kernel_at_one(p, 0.5, 0.5), rel=1e-9)
    with pytest.raises(ValueError):
        kernel_odd_odd(DumbbellParams(4, 3, 1), 1.0, 0, 0)


def test_mixed_kernel_examples():
    p = DumbbellParams(4, 3, 2)
    assert kernel_mixed(p, 1.0, 0.3, -0.7) == pytest.approx(det_kernel_at_one(p, 0.3, -0.7), rel=1e-9)
    t = np.array([0.4, 1.1])
    z, w, x, y = mixed_functions(p, t)
    assert np.allclose(kernel_mixed(p, t, 0.6, 0.0), (z - 1.2 * x) ** 2, rtol=1e-14)
    # parity of the four functions
    zm, wm, xm, ym = mixed_functions(p, -t)
    assert np.allclose(zm, z) and np.allclose(xm, x)
    assert np.allclose(wm, -w) and np.allclose(ym, -y)


@pytest.mark.parametrize("triple", [(4, 3, 2), (6, 5, 1), (8, 7, 4)])
def test_mixed_small_t_asymptotics(triple):
    p = DumbbellParams(*triple)
    for t in (1e-2, 3e-3):
        z, w, x, y = mixed_functions(p, t)
        assert y / t**p.s == pytest.approx(1.0, abs=30 * t**2)
        assert w / t ** (p.r + p.s) == pytest.approx(1.0, abs=30 * t**2)
    tt = np.linspace(0.01, 5, 50)
    assert all(np.all(f > 0) for f in mixed_functions(p, tt))


def test_kernel_equals_charpoly_modulus(rng):
    for case in ("even-even", "odd-odd", "mixed"):
        for _ in range(4):
            p = random_params(rng, 30, case)
            alpha, beta = rng.uniform(-1, 1, 2)
            t = rng.uniform(0.05, 3.0, 20)
            got = make_kernel(p, alpha, beta)(t)
            ref = poly_kernel(p, alpha, beta, t)
            assert np.max(np.abs(got - ref) / ref) < 1e-9


def test_case_kernels_agree_with_generic(rng):
    t = np.linspace(0.1, 2.0, 9)
    p = DumbbellParams(6, 4, 3)
    assert np.allclose(kernel_even_even(even_even_coeffs(p), t, 0.2, -0.4), make_kernel(p, 0.2, -0.4)(t), rtol=1e-12)
    p = DumbbellParams(5, 7, 2)
    assert np.allclose(kernel_odd_odd(p, t, 0.2, -0.4), make_kernel(p, 0.2, -0.4)(t), rtol=1e-12)
    p = DumbbellParams(3, 6, 2)
    assert np.allclose(kernel_mixed(p, t, 0.2, -0.4), make_kernel(p, 0.2, -0.4)(t), rtol=1e-12)


def test_charpoly_modulus_is_even_in_t(rng):
    for _ in range(10):
        p = random_params(rng, 25)
        spec = gains_from_alpha_beta(p, *rng.uniform(-1, 1, 2))
        poly = char_poly_dumbbell(spec.params, spec.a, spec.b)
        t = rng.uniform(0.1, 2.0, 10)
        assert np.allclose(kernel_from_charpoly(poly, t), kernel_from_charpoly(poly, -t), rtol=1e-12)


def test_reversed_kernel():
    k = make_kernel(DumbbellParams(5, 4, 3), 0.3, 0.8)
    u = np.array([0.05, 0.5, 1.0])
    assert np.allclose(k.reversed(u), u ** (2 * k.n) * k(1 / u), rtol=1e-12)


def exact_sign_xy_minus_zw(p, t):
    """Sign of ``X Y - Z W`` at rational ``t``, in exact arithmetic."""
    m, r_, s_, tt = mrst_polys(p)
    u = t * t
    z, w = m(u), 4 * t ** (p.r + p.s) * tt(u)
    x, y = 2 * t**p.r * r_(u), 2 * t**p.s * s_(u)
    d = x * y - z * w
    return (d > 0) - (d < 0)


@pytest.mark.parametrize("triple", [(r, s, ell) for r in (3, 5, 7, 9) for s in (3, 5, 7, 9) for ell in range(1, 7)])
def test_odd_odd_sign_law(triple):
    p = DumbbellParams(*triple)
    ts = [Fraction(v).limit_denominator(10**6) for v in np.geomspace(0.05, 20, 20)]
    assert all(exact_sign_xy_minus_zw(p, t) == (-1) ** p.ell for t in ts)


def test_odd_odd_sign_law_in_floats():
    # moderate t, where the float tables resolve the difference
    for ell in (1, 2, 3, 4):
        z, w, x, y = kernel_tables(DumbbellParams(3, 3, ell)).functions(np.array([0.5, 1.0, 2.0]))
        assert np.all(np.sign(x * y - z * w) == (-1) ** ell)


def test_odd_odd_convex_in_each_variable():
    grid = np.linspace(-1, 1, 11)
    for triple in [(3, 3, 1), (5, 3, 2), (7, 9, 3)]:
        p = DumbbellParams(*triple)
        for t in (0.3, 1.0, 2.0):
            for fixed in grid:
                ka = np.array([make_kernel(p, a, fixed)(t) for a in grid])
                kb = np.array([make_kernel(p, fixed, b)(t) for b in grid])
                scale = max(ka.max(), kb.max())
                assert np.diff(ka, 2).min() >= -1e-12 * scale
                assert np.diff(kb, 2).min() >= -1e-12 * scale


def test_even_ell_kernel_dominates_z_squared():
    grid = np.linspace(-1, 1, 9)
    for triple in [(3, 3, 2), (5, 7, 4), (3, 9, 6)]:
        p = DumbbellParams(*triple)
        tab = kernel_tables(p)
        for t in (0.2, 0.7, 1.5, 3.0):
            z = tab.functions(t)[0]
            for a in grid:
                for b in grid:
                    k = make_kernel(p, a, b)(t)
                    assert k >= z**2 * (1 - 1e-12)
                    if abs(a) + abs(b) > 0.2:
                        assert k > z**2


# --- energies ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "triple, alpha, beta, energy",
    [
        ((3, 3, 1), 0.0, 0.0, 7.924777),
        ((3, 3, 1), 0.5, 0.5, 7.841619),
        ((3, 3, 5), 0.197754, 0.197754, 13.000765),
    ],
)
def test_coulson_energy_examples(triple, alpha, beta, energy):
    assert coulson_energy_ab(DumbbellParams(*triple), alpha, beta) == pytest.approx(energy, abs=1e-5)


def test_coulson_matches_eigenvalues(rng):
    worst = 0.0
    for _ in range(100):
        p = random_params(rng, 40)
        a, b = rng.uniform(-1, 1, 2)
        worst = max(worst, abs(coulson_energy_ab(p, a, b) - energy_eig_ab(p, a, b)))
    assert worst < 1e-7


def test_coulson_energy_accepts_explicit_n():
    k = make_kernel(DumbbellParams(4, 4, 2), 0.1, 0.2)
    assert coulson_energy(k, n=k.n) == coulson_energy(k)


# --- batched objective and backends ---------------------------------------------------


def test_objective_matches_eigenvalues(rng):
    for _ in range(40):
        p = random_params(rng, 50)
        obj = CoulsonObjective(p)
        ab = rng.uniform(-1, 1, (5, 2))
        got = obj(ab[:, 0], ab[:, 1])
        ref = [energy_eig_ab(p, a, b) for a, b in ab]
        assert np.max(np.abs(got - ref)) < 1e-9


def test_objective_orientation_for_mixed():
    a = CoulsonObjective(DumbbellParams(3, 4, 2))
    b = CoulsonObjective(DumbbellParams(4, 3, 2))
    assert a.swapped and not b.swapped
    assert a.energy(0.3, -0.6) == b.energy(0.3, -0.6)


@pytest.mark.skipif("cython" not in _backend.AVAILABLE, reason="compiled core not built")
def test_backends_agree(rng):
    for case in ("even-even", "odd-odd", "mixed"):
        p = random_params(rng, 40, case)
        ab = rng.uniform(-1, 1, (300, 2))
        fast = CoulsonObjective(p, backend="cython")(ab[:, 0], ab[:, 1])
        slow = CoulsonObjective(p, backend="python")(ab[:, 0], ab[:, 1])
        assert np.max(np.abs(fast - slow)) < 1e-12


@pytest.mark.parametrize("backend", _backend.AVAILABLE)
def test_odd_odd_sign_flip_ties_exact(backend):
    obj = CoulsonObjective(DumbbellParams(3, 3, 1), backend=backend)
    e = obj([0.5, -0.5, 0.3], [0.5, -0.5, -0.7])
    f = obj([-0.3], [0.7])
    assert e[0] == e[1] and e[2] == f[0]


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _backend.get("fortran")


def test_pure_python_switch():
    env = dict(os.environ, DUMBBELL_ENERGY_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from dumbbell_energy import _backend; print(_backend.DEFAULT)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"

import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dumbbell_energy.graphs import DumbbellParams, SimpleGraph, build_dumbbell
from dumbbell_energy.matchpoly import (
    IntPoly,
    X,
    counts_from_matching_poly,
    cycle_poly,
    dumbbell_component_polys,
    dumbbell_subgraph_counts,
    f_poly,
    fg_polys,
    g_poly,
    matching_counts,
    matching_poly,
    matching_poly_from_counts,
    mrst_polys,
    path_poly,
)


def brute_counts(graph):
    out = [0] * (graph.n // 2 + 1)
    for k in range(len(out)):
        for sub in itertools.combinations(graph.edges, k):
            if len({v for e in sub for v in e}) == 2 * k:
                out[k] += 1
    return out


def cycle_graph(n):
    return SimpleGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n):
    return SimpleGraph(n, tuple((i, i + 1) for i in range(n - 1)))


graphs = st.integers(1, 6).flatmap(
    lambda n: st.lists(
        st.sampled_from(list(itertools.combinations(range(n), 2)) or [(0, 0)]),
        unique=True,
        max_size=n * (n - 1) // 2,
    ).map(lambda es: SimpleGraph(n, tuple(e for e in es if e[0] != e[1])))
)


# --- IntPoly -----------------------------------------------------------------


def test_intpoly_arithmetic():
    p = IntPoly([1, 2, 0, 0])
    assert p.coeffs == (1, 2) and p.degree == 1
    assert IntPoly().degree == -1 and IntPoly([0, 0]).is_zero()
    assert (p * p).coeffs == (1, 4, 4)
    assert (p - p).is_zero()
    assert (3 - p).coeffs == (2, -2)
    assert (p**3)(2) == 125
    assert p.shift(2).coeffs == (0, 0, 1, 2)
    assert p[5] == 0


def test_intpoly_is_exact_at_scale():
    big = path_poly(120)
    # leading coefficients stay exact Python ints well beyond 2**63
    assert max(abs(c) for c in big.coeffs) > 2**63
    assert all(type(c) is int for c in big.coeffs)


# --- matching counts -----------------------------------------------------------


def test_counts_small_examples():
    assert matching_counts(path_graph(3)) == [1, 2]
    assert matching_counts(cycle_graph(4)) == [1, 4, 2]
    assert matching_counts(SimpleGraph(0, ())) == [1]


def test_dumbbell_331_counts_brute_force():
    g = build_dumbbell(DumbbellParams(3, 3, 1))
    assert brute_counts(g) == [1, 7, 11, 1]
    assert matching_counts(g) == [1, 7, 11, 1]


def test_counts_reject_large():
    with pytest.raises(ValueError):
        matching_counts(path_graph(65))


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_counts_match_brute_force(g):
    counts = matching_counts(g)
    assert counts == brute_counts(g)
    assert counts[0] == 1
    if g.n >= 2:
        assert counts[1] == len(g.edges)
    assert all(0 <= c <= comb(len(g.edges), j) for j, c in enumerate(counts))


def test_counts_poly_round_trip():
    g = build_dumbbell(DumbbellParams(4, 5, 3))
    c = matching_counts(g)
    assert counts_from_matching_poly(matching_poly_from_counts(c, g.n), g.n) == c


# --- paths and cycles ----------------------------------------------------------


def test_path_cycle_examples():
    assert path_poly(0).coeffs == (1,)
    assert path_poly(2).coeffs == (-1, 0, 1)
    assert cycle_poly(3).coeffs == (0, -3, 0, 1)
    assert cycle_poly(6).coeffs == (-2, 0, 9, 0, -6, 0, 1)
    assert matching_poly(cycle_graph(6)) == cycle_poly(6)
    assert brute_counts(cycle_graph(6)) == [1, 6, 9, 2]


def test_path_cycle_reject_out_of_range():
    with pytest.raises(ValueError):
        path_poly(-1)
    with pytest.raises(ValueError):
        cycle_poly(2)


@pytest.mark.parametrize("j", range(0, 13))
def test_path_poly_matches_graph(j):
    assert path_poly(j) == matching_poly(path_graph(j))


def test_cycle_from_paths_up_to_30():
    for j in range(3, 31):
        assert cycle_poly(j) == path_poly(j) - path_poly(j - 2)
        if j <= 16:
            assert cycle_poly(j) == matching_poly(cycle_graph(j))


# --- f / g ---------------------------------------------------------------------


def test_fg_examples():
    assert f_poly(-1).is_zero()
    assert f_poly(0).coeffs == (1,)
    assert f_poly(2).coeffs == (1, 1)
    f3, g3 = fg_polys(3)
    assert f3.coeffs == (1, 2) and g3.coeffs == (1, 3)
    assert fg_polys(0)[1] is None
    with pytest.raises(ValueError):
        g_poly(0)
    with pytest.raises(ValueError):
        f_poly(-2)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.7])
def test_path_to_f_substitution(t):
    for j in range(21):
        lhs = t**j * path_poly(j)(1j / t)
        rhs = 1j**j * f_poly(j)(t * t)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_q_euler_cassini():
    for m in range(0, 41):
        lhs = f_poly(m) * f_poly(m) - f_poly(m + 1) * f_poly(m - 1)
        assert lhs == IntPoly.monomial(m, (-1) ** m)


# --- coalescence -----------------------------------------------------------------


def coalesce(g, u, h, v):
    """Identify vertex u of g with vertex v of h."""
    relabel = {}
    nxt = g.n
    for w in range(h.n):
        if w == v:
            relabel[w] = u
        else:
            relabel[w] = nxt
            nxt += 1
    edges = g.edges + tuple((relabel[a], relabel[b]) for a, b in h.edges)
    return SimpleGraph(nxt, edges)


def test_coalescence_identity():
    rng = np.random.default_rng(7)
    for _ in range(100):
        parts = []
        for _ in range(2):
            n = int(rng.integers(1, 7))
            pairs = list(itertools.combinations(range(n), 2))
            keep = [e for e in pairs if rng.random() < 0.5]
            parts.append(SimpleGraph(n, tuple(keep)))
        g, h = parts
        u, v = int(rng.integers(g.n)), int(rng.integers(h.n))
        lhs = matching_poly(coalesce(g, u, h, v))
        mg, mh = matching_poly(g), matching_poly(h)
        mgu, mhv = matching_poly(g.delete([u])), matching_poly(h.delete([v]))
        assert lhs == mg * mhv + mgu * mh - X * mgu * mhv


# --- dumbbell components -----------------------------------------------------------


def test_component_examples():
    m_d, m_r, m_s, m_p = dumbbell_component_polys(DumbbellParams(3, 3, 1))
    assert m_p.coeffs == (1,)
    assert m_r == cycle_poly(3) and m_s == cycle_poly(3)
    assert counts_from_matching_poly(m_d, 6) == [1, 7, 11, 1]


def _signed_counts(p, n):
    return counts_from_matching_poly(p, n)


def test_component_polys_against_general_recursion():
    for r in range(3, 15):
        for s in range(3, 15):
            for ell in range(1, 15):
                p = DumbbellParams(r, s, ell)
                if p.n > 16:
                    continue
                m_d, m_r, m_s, m_p = dumbbell_component_polys(p)
                ref = dumbbell_subgraph_counts(p)
                assert _signed_counts(m_d, p.n) == ref["D"]
                assert _signed_counts(m_r, p.n - r) == ref["D-Cr"]
                assert _signed_counts(m_s, p.n - s) == ref["D-Cs"]
                assert _signed_counts(m_p, ell - 1) == ref["P"]
                assert m_d.degree == p.n


def test_component_polys_5_7_4_coefficientwise():
    p = DumbbellParams(5, 7, 4)
    g = build_dumbbell(p)
    polys = dumbbell_component_polys(p)
    subs = [g, g.delete(g.cycle_r), g.delete(g.cycle_s), g.delete(g.cycle_r + g.cycle_s)]
    for poly, sub in zip(polys, subs):
        assert poly == matching_poly(sub)


# --- M, R, S, T --------------------------------------------------------------------


def test_mrst_examples():
    m, r_, s_, t = mrst_polys(DumbbellParams(3, 3, 1))
    assert t.coeffs == (1,)
    u = IntPoly([0, 1])
    assert m == IntPoly([1, 3]) ** 2 + u * IntPoly([1, 1]) ** 2
    with pytest.raises(ValueError):
        mrst_polys(DumbbellParams(4, 3, 1))


def test_rsmt_example_352():
    m, r_, s_, t = mrst_polys(DumbbellParams(3, 5, 2))
    assert r_ * s_ - m * t == (f_poly(2) * f_poly(4)).shift(2)


def test_rsmt_identity_sweep():
    for r in range(3, 12, 2):
        for s in range(3, 12, 2):
            for ell in range(1, 9):
                m, r_, s_, t = mrst_polys(DumbbellParams(r, s, ell))
                rhs = (f_poly(r - 1) * f_poly(s - 1)).shift(ell) * (-1) ** ell
                assert r_ * s_ - m * t == rhs


def test_mrst_match_matching_polynomials():
    # t^n m_D(i/t) = i^n M(t^2) for odd-odd dumbbells
    for triple in [(3, 3, 1), (3, 5, 2), (5, 7, 3), (7, 3, 6)]:
        p = DumbbellParams(*triple)
        m_d = dumbbell_component_polys(p)[0]
        m = mrst_polys(p)[0]
        for t in (0.4, 1.3):
            lhs = t**p.n * m_d(1j / t)
            assert abs(lhs - 1j**p.n * m(t * t)) <= 1e-9 * abs(lhs)

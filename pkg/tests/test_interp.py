"""Interpolation on the 2n-1 equidistant nodes and the Lebesgue function.

The frozen Lebesgue value was computed independently with mpmath (dps 30)
as the 11-term absolute Dirichlet sum at n = 6, x = 0.4.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psikern import (
    TrigPoly,
    deviation,
    interpolate,
    lebesgue_fn,
    lebesgue_residual,
    node_sum_eval,
    nodes,
)

LEBESGUE_N6_X04 = 2.21796968266546293


def _rand_poly(rng, order):
    return TrigPoly(rng.standard_normal(),
                    rng.standard_normal(order),
                    rng.standard_normal(order))


def test_nodes_layout():
    ns = nodes(4)
    assert ns.n == 4 and len(ns.nodes) == 7
    assert ns.nodes[0] == 0.0
    assert np.all(np.diff(ns.nodes) > 0.0)
    assert ns.nodes[-1] < 2 * math.pi
    assert np.allclose(np.diff(ns.nodes), 2 * math.pi / 7)
    with pytest.raises(ValueError):
        nodes(0)


@given(n=st.integers(1, 24), seed=st.integers(0, 2 ** 31))
@settings(max_examples=60, deadline=None)
def test_interpolation_is_projection(n, seed):
    # order n-1 polynomials are fixed points of the operator
    rng = np.random.default_rng(seed)
    p = _rand_poly(rng, n - 1) if n > 1 else TrigPoly(rng.standard_normal(), [], [])
    xk = nodes(n).nodes
    q = interpolate(p(xk), n)
    assert q.a0 == pytest.approx(p.a0, rel=1e-11, abs=1e-11)
    assert np.allclose(q.a, p.a, rtol=1e-11, atol=1e-11)
    assert np.allclose(q.b, p.b, rtol=1e-11, atol=1e-11)


def test_interpolant_hits_samples():
    n = 7
    rng = np.random.default_rng(3)
    xk = nodes(n).nodes
    samples = rng.standard_normal(2 * n - 1)
    p = interpolate(samples, n)
    assert p.order == n - 1
    assert np.allclose(p(xk), samples, atol=1e-12)


def test_node_sum_route_agrees_with_coefficients():
    n = 9
    rng = np.random.default_rng(11)
    samples = rng.standard_normal(2 * n - 1)
    p = interpolate(samples, n)
    xs = np.linspace(0.0, 2 * math.pi, 101)
    assert np.allclose(node_sum_eval(samples, n, xs), p(xs), atol=1e-10)
    assert node_sum_eval(samples, n, 0.5) == pytest.approx(p(0.5), abs=1e-10)


def test_sample_count_is_enforced():
    with pytest.raises(ValueError):
        interpolate(np.zeros(6), 4)
    with pytest.raises(ValueError):
        node_sum_eval(np.zeros(6), 4, 0.0)


def test_deviation_vanishes_at_nodes_and_matches_brute():
    n = 5
    f = TrigPoly(0.3, np.zeros(n + 3), np.zeros(n + 3))
    f.a[n + 2] = 1.0  # harmonic above the interpolation order
    xk = nodes(n).nodes
    assert np.max(np.abs(deviation(f, n, xk))) < 1e-12
    xs = np.linspace(0.1, 6.0, 17)
    p = interpolate(f(xk), n)
    assert np.allclose(deviation(f, n, xs), f(xs) - p(xs), atol=1e-12)


def test_aliasing_of_high_harmonics():
    # cos((2n-1)x) samples like the constant 1 on the nodes
    n = 6
    N = 2 * n - 1
    f = TrigPoly.harmonic(N, a=1.0)
    p = interpolate(f(nodes(n).nodes), n)
    assert p.a0 == pytest.approx(2.0, rel=1e-12)
    assert np.allclose(p.a, 0.0, atol=1e-12) and np.allclose(p.b, 0.0, atol=1e-12)


def test_lebesgue_oracle_value():
    assert lebesgue_fn(6, 0.4) == pytest.approx(LEBESGUE_N6_X04, rel=1e-14)


def test_lebesgue_fn_floor_and_nodes():
    for n in (2, 5, 16):
        xk = nodes(n).nodes
        at_nodes = lebesgue_fn(n, xk)
        assert np.allclose(at_nodes, 1.0, atol=5e-13)
        xs = np.linspace(0.0, 2 * math.pi, 257)
        assert np.min(lebesgue_fn(n, xs)) >= 1.0 - 1e-12


def test_lebesgue_fn_is_operator_norm():
    """Dual route: L_n(x) equals the sup of |interpolant(x)| over sign
    patterns at the nodes, realized by the sign pattern of D_{n-1}(x-x_k)."""
    n, x = 4, 0.9
    from psikern.trig import dirichlet
    xk = nodes(n).nodes
    signs = np.sign(dirichlet(n, x - xk))
    p = interpolate(signs, n)
    assert p(x) == pytest.approx(lebesgue_fn(n, x), rel=1e-12)
    # any other bounded sample vector does no better
    rng = np.random.default_rng(0)
    for _ in range(25):
        s = rng.uniform(-1.0, 1.0, 2 * n - 1)
        assert abs(interpolate(s, n)(x)) <= lebesgue_fn(n, x) + 1e-12


def test_lebesgue_residual_at_nodes():
    for n in (2, 8, 64):
        xk = nodes(n).nodes
        r = lebesgue_residual(n, xk)
        assert np.allclose(r, 1.0, atol=1e-11)
    with pytest.raises(ValueError):
        lebesgue_residual(1, 0.3)


def test_lebesgue_residual_bounded_as_n_grows():
    xs = np.linspace(0.0, 2 * math.pi, 513)
    sup = [float(np.max(np.abs(lebesgue_residual(n, xs)))) for n in (8, 32, 128)]
    assert max(sup) < 2.5
    # while the Lebesgue function itself keeps growing
    assert np.max(lebesgue_fn(128, xs)) > np.max(lebesgue_fn(8, xs)) + 1.0


@given(n=st.integers(2, 20), t=st.floats(0.0, 2 * math.pi))
@settings(max_examples=80, deadline=None)
def test_lebesgue_symmetry_and_periodicity(n, t):
    N = 2 * n - 1
    v = lebesgue_fn(n, t)
    assert lebesgue_fn(n, t + 2 * math.pi / N) == pytest.approx(v, rel=1e-10, abs=1e-10)
    assert lebesgue_fn(n, -t) == pytest.approx(v, rel=1e-10, abs=1e-10)

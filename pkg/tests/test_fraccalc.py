import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subdiffinv.errors import DomainError
from subdiffinv.fraccalc import GridFunction, TimeGrid, caputo_l1, caputo_power, l1_weights


def test_grid_nodes():
    g = TimeGrid(2.0, 4)
    assert g.h == 0.5
    np.testing.assert_array_equal(g.nodes, [0, 0.5, 1, 1.5, 2])


@pytest.mark.parametrize("T, M", [(0.0, 10), (-1.0, 10), (1.0, 1), (1.0, 2.5), (math.inf, 10)])
def test_grid_validation(T, M):
    with pytest.raises(DomainError):
        TimeGrid(T, M)


def test_power_rule_values():
    # D^{1/2} t = 2 sqrt(t / pi)
    assert caputo_power(1.0, 0.5, 1.0) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-15)
    # rho = 1 is the ordinary derivative
    t = np.linspace(0, 2, 9)
    np.testing.assert_allclose(caputo_power(3.0, 1.0, t), 3 * t**2, rtol=1e-14)


@pytest.mark.parametrize("p, rho, t", [(0.0, 0.5, 1.0), (1.0, 0.0, 1.0), (1.0, 1.2, 1.0), (1.0, 0.5, -0.1)])
def test_power_rule_domain(p, rho, t):
    with pytest.raises(DomainError):
        caputo_power(p, rho, t)


@given(n=st.integers(1, 500), rho=st.floats(0.01, 0.99))
def test_l1_weights_positive_decreasing_telescoping(n, rho):
    w = l1_weights(n, rho)
    assert np.all(w > 0)
    assert np.all(np.diff(w) <= 0)
    assert math.fsum(w) == pytest.approx(n ** (1 - rho), rel=1e-12)


def test_l1_first_node_is_nan():
    g = TimeGrid(1.0, 8)
    d = caputo_l1(GridFunction(g, g.nodes**2), 0.5)
    assert np.isnan(d.values[0])
    assert np.all(np.isfinite(d.values[1:]))


@given(rho=st.floats(0.05, 1.0), c=st.floats(-10, 10), a=st.floats(-10, 10))
def test_l1_exact_on_linear(rho, c, a):
    g = TimeGrid(1.0, 64)
    t = g.nodes
    d = caputo_l1(GridFunction(g, c + a * t), rho).values[1:]
    expected = a * caputo_power(1.0, rho, t[1:])
    np.testing.assert_allclose(d, expected, atol=1e-11 * (1 + abs(a)))


def test_l1_annihilates_constants_bitwise():
    g = TimeGrid(1.0, 256)
    d = caputo_l1(GridFunction(g, np.full(257, 3.7)), 0.4).values[1:]
    assert np.all(d == 0.0)


@pytest.mark.parametrize("rho", [0.3, 0.5, 0.8])
def test_l1_convergence_order(rho):
    # error of D^rho t^2 at t = 1 decays like h^(2 - rho)
    errs = []
    for M in (128, 256, 512, 1024):
        g = TimeGrid(1.0, M)
        d = caputo_l1(GridFunction(g, g.nodes**2), rho).values
        errs.append(abs(d[-1] - caputo_power(2.0, rho, 1.0)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 2 - rho - 0.1)


def test_rho_one_matches_derivative():
    g = TimeGrid(1.0, 200)
    d = caputo_l1(GridFunction(g, np.sin(g.nodes)), 1.0).values[1:]
    np.testing.assert_allclose(d, np.cos(g.nodes[1:]), atol=1e-4)


def test_grid_function_arithmetic():
    g = TimeGrid(1.0, 4)
    a = GridFunction(g, np.arange(5.0))
    b = 2.0 * a + a
    np.testing.assert_array_equal(b.values, 3 * np.arange(5.0))
    with pytest.raises(DomainError):
        GridFunction(g, np.zeros(3))

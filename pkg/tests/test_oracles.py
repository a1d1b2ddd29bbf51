"""Checks on the brute-force references themselves."""

import math

import numpy as np
import pytest

from oracles import LD, fd_heat, gl_left, gl_right, gl_weights, rl_power


def test_weights():
    np.testing.assert_allclose(np.asarray(gl_weights(0.5, 4), dtype=float),
                               [1, -0.5, -0.125, -0.0625], rtol=1e-15)
    # integer order two gives the second difference
    np.testing.assert_allclose(np.asarray(gl_weights(2.0, 4), dtype=float), [1, -2, 1, 0], atol=1e-18)


@pytest.mark.parametrize("sigma", [0.3, 0.5, 1.5, 1.8])
@pytest.mark.parametrize("p", [1, 2, 3])
def test_power_rule(sigma, p):
    for x in (0.2, 0.55, 0.9):
        assert gl_left(lambda y: y**p, sigma, x) == pytest.approx(
            float(rl_power(p, sigma, x)), abs=1e-6)


def test_linear_half_order():
    x = 0.64
    assert gl_left(lambda y: y, 0.5, x) == pytest.approx(x**0.5 / math.gamma(1.5), abs=1e-6)


@pytest.mark.parametrize("sigma", [0.2, 0.5, 0.8])
def test_constant(sigma):
    x = 0.7
    ref = 3.0 * x**-sigma / math.gamma(1 - sigma)
    assert gl_left(lambda y: 3.0 + 0 * y, sigma, x) == pytest.approx(ref, abs=1e-6)


def test_integer_order_two_on_cubic():
    f = lambda y: y**3 - 2 * y  # noqa: E731
    assert gl_left(f, 2.0, 0.4) == pytest.approx(2.4, abs=1e-6)
    assert gl_right(f, 2.0, 0.4) == pytest.approx(2.4, abs=1e-6)


@pytest.mark.parametrize("sigma", [0.3, 0.5, 1.5, 1.8])
def test_reflection_identity(sigma):
    ell = 1.6
    f = lambda y: np.sin(3 * y) * y  # noqa: E731
    for x in (0.3, 0.8, 1.3):
        lhs = gl_right(f, sigma, x, ell)
        rhs = gl_left(lambda y: f(LD(ell) - y), sigma, ell - x, ell)
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_fd_heat_zero():
    _, _, u = fd_heat(lambda x: 0 * x, 1.0, 0.5, nx=50, nt=50)
    assert np.all(u == 0)


def test_fd_heat_separable():
    ell, horizon = 2.0, 0.3
    x, t, u = fd_heat(lambda y: np.sin(np.pi * y / ell), ell, horizon)
    exact = np.exp(-(np.pi / ell) ** 2 * t)[:, None] * np.sin(np.pi * x / ell)[None, :]
    assert np.max(np.abs(u - exact)) <= 1e-4


def test_fd_heat_second_order():
    errs = []
    for m in (40, 80, 160):
        x, t, u = fd_heat(lambda y: np.sin(np.pi * y), 1.0, 0.2, nx=m, nt=m)
        errs.append(np.max(np.abs(u[-1] - np.exp(-np.pi**2 * 0.2) * np.sin(np.pi * x))))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.1)

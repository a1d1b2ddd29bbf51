import json
import math

import numpy as np
import pytest

from fracmol.expr import ExprError
from fracmol.problems import (
    BUILTINS,
    EXAMPLE3_CASES,
    ConfigError,
    ProblemConfig,
    UnknownProblemError,
    builtin,
    builtin_config,
    load_config,
)
from fracmol.solver import ProblemSpec
from oracles import LD, gl_left, gl_right

# Exact solutions written out independently of the registry, in extended precision.


def u1(t):
    return lambda x: 4 * np.exp(-LD(t)) * x**2 * (2 - x) ** 2


def u2(t, alpha, gamma):
    return lambda x: LD(t) ** gamma * np.exp(LD(alpha * t)) * x**2 * (1 - x) ** 2


def u3(t):
    return lambda x: np.exp(-LD(t)) * np.sin(4 * x)


def residual_source(spec: ProblemSpec, u, u_t, x, t):
    """s = u_t + c_a^+ D_a^+ u + c_a^- D_a^- u - c_b^+ D_b^+ u - c_b^- D_b^- u at one point."""
    ell = spec.ell
    xs = np.array([x])

    def c(fn):
        return float(np.broadcast_to(fn(xs, t), xs.shape)[0])

    total = u_t
    for coef, order, sign in [(spec.c_alpha_plus, spec.alpha, 1), (spec.c_beta_plus, spec.beta, -1)]:
        cv = c(coef)
        if cv:
            total += sign * cv * gl_left(u, order, x, ell)
    for coef, order, sign in [(spec.c_alpha_minus, spec.alpha, 1), (spec.c_beta_minus, spec.beta, -1)]:
        cv = c(coef)
        if cv:
            total += sign * cv * gl_right(u, order, x, ell)
    return total


def _points(ell, horizon, seed):
    rng = np.random.default_rng(seed)
    return zip(rng.uniform(0.02 * ell, 0.98 * ell, 20), rng.uniform(0.0, horizon, 20))


def _check(spec, make_u, make_ut, seed):
    for x, t in _points(spec.ell, spec.horizon, seed):
        ref = residual_source(spec, make_u(t), make_ut(x, t), x, t)
        got = float(np.broadcast_to(spec.source(np.array([x]), t), (1,))[0])
        assert abs(got - ref) <= 1e-5 * max(1.0, abs(ref)), (x, t, got, ref)


def test_example1_source_consistency():
    spec = builtin(1)
    _check(spec, u1, lambda x, t: -4 * math.exp(-t) * x**2 * (2 - x) ** 2, seed=1)


@pytest.mark.parametrize("alpha, beta", [(0.2, 1.2), (0.4, 1.6), (0.8, 1.8), (0.6, 1.4)])
def test_example2_source_consistency(alpha, beta):
    g = 2.0
    spec = builtin(2, alpha=alpha, beta=beta, gamma=g)

    def ut(x, t):
        return (g * t ** (g - 1) + alpha * t**g) * math.exp(alpha * t) * x**2 * (1 - x) ** 2

    _check(spec, lambda t: u2(t, alpha, g), ut, seed=2)


def test_example2_non_integer_gamma():
    g = 1.5
    spec = builtin(2, alpha=0.4, beta=1.4, gamma=g)

    def ut(x, t):
        return (g * t ** (g - 1) + 0.4 * t**g) * math.exp(0.4 * t) * x**2 * (1 - x) ** 2

    _check(spec, lambda t: u2(t, 0.4, g), ut, seed=5)


def test_example3_fresnel_source_consistency():
    spec = builtin(3)
    _check(spec, u3, lambda x, t: -math.exp(-t) * math.sin(4 * x), seed=3)


def test_registry_values():
    assert builtin(1).exact(np.array([1.0]), 0.0)[0] == pytest.approx(4.0)
    assert builtin(1).initial(np.array([1.0]))[0] == pytest.approx(4.0)
    zero = builtin(3, table_case=4)
    assert zero.exact is None
    assert np.all(np.broadcast_to(zero.source(np.linspace(0, np.pi, 5), 1.3), 5) == 0)
    case1 = builtin(4, case=1)
    assert case1.c_beta_plus(np.array([5.0]), 0.0)[0] == 0.001
    assert case1.c_beta_plus(np.array([7.0]), 0.0)[0] == 0.001
    assert case1.c_beta_plus(np.array([4.5]), 0.0)[0] == 0.001
    assert case1.c_beta_plus(np.array([4.4]), 0.0)[0] == 0.1
    case2 = builtin(4, case=2)
    assert case2.c_beta_minus(np.array([2.0]), 0.0)[0] == 0.0
    assert case2.c_beta_minus(np.array([6.0]), 0.0)[0] == 0.7
    np.testing.assert_array_equal(case1.initial(np.array([0.5, 1.0, 3.5, 5.5, 6.0])), [0, 1, 2, 4, 0])
    assert case1.exact is None


def test_registry_shape():
    assert sorted(BUILTINS) == [1, 2, 3, 4]
    ex1 = builtin(1)
    assert (ex1.beta, ex1.ell, ex1.horizon) == (1.8, 2.0, 5.0)
    assert np.all(np.broadcast_to(ex1.c_alpha_plus(np.linspace(0, 2, 5), 0.0), 5) == 0)
    ex2 = builtin(2)
    assert (ex2.alpha, ex2.beta, ex2.ell, ex2.horizon) == (0.2, 1.2, 1.0, 1.0)
    ex3 = builtin(3)
    assert ex3.ell == pytest.approx(math.pi) and ex3.horizon == 4.0
    assert len(EXAMPLE3_CASES) == 9


def test_example2_exponent_terms_vanish_at_ends():
    spec = builtin(2, alpha=0.8, beta=1.8)
    vals = spec.source(np.array([0.0, 1.0]), 0.5)
    assert np.all(np.isfinite(vals))


def test_zero_source_cases_are_pure():
    for case, (ka, a, kb, b) in EXAMPLE3_CASES.items():
        cfg = builtin_config(3, table_case=case)
        assert (cfg.alpha, cfg.beta) == (a, b)
        assert builtin_config(3, table_case=case).to_dict() == cfg.to_dict()


def test_unknown_examples_and_variants():
    with pytest.raises(UnknownProblemError):
        builtin(5)
    with pytest.raises(UnknownProblemError):
        builtin(1, alpha=0.3)
    with pytest.raises(UnknownProblemError):
        builtin(4, case=3)
    with pytest.raises(ValueError):
        builtin(3, alpha=0.3, manufactured=True)


def test_config_round_trip(tmp_path):
    cfg = builtin_config(2, alpha=0.4, beta=1.6)
    path = tmp_path / "p.json"
    path.write_text(json.dumps(cfg.to_dict()))
    back = load_config(path)
    assert back.to_dict() == cfg.to_dict()
    x = np.linspace(0, 1, 7)
    np.testing.assert_allclose(back.to_spec().source(x, 0.3), cfg.to_spec().source(x, 0.3), rtol=1e-15)


def test_config_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"alpha": 0.5, "beta": 1.5, "ell": 1, "horizon": 1,
                                "initial": "x*(1-x", "colour": "red"}))
    with pytest.raises(ConfigError, match="unknown fields"):
        load_config(path)
    path.write_text(json.dumps({"alpha": 0.5, "beta": 1.5, "ell": 1, "horizon": 1,
                                "initial": "x*(1-x"}))
    with pytest.raises(ConfigError, match="offset 6"):
        load_config(path)
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text(json.dumps({"alpha": 0.5, "beta": 1.5}))
    with pytest.raises(ConfigError, match="missing"):
        load_config(path)
    path.write_text(json.dumps({"alpha": 1.5, "beta": 1.5, "ell": 1, "horizon": 1, "initial": "0"}))
    with pytest.raises(ConfigError):
        load_config(path)


def test_from_texts_defaults_to_zero():
    cfg = ProblemConfig.from_texts(alpha=0.5, beta=1.5, ell=1, horizon=1, initial="x*(1-x)")
    spec = cfg.to_spec()
    assert spec.exact is None and spec.steady_coefficients
    with pytest.raises(ExprError):
        ProblemConfig.from_texts(alpha=0.5, beta=1.5, ell=1, horizon=1, initial="q")

"""Benchmark problems and user-defined problems from JSON configs.

Every built-in is written in the expression language of :mod:`fracmol.expr`
so that the same code path serves built-ins and configs.

Example 1 uses only diffusion, of order 1.8, and is stored with
``beta = 1.8``; its advection coefficients are zero, so its ``alpha`` is a
placeholder with no effect on the solution.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from fracmol.expr import Expr, compile_expr, parse_expr, to_text, uses_variable
from fracmol.solver import ProblemSpec

CONFIG_FIELDS = (
    "alpha", "beta", "ell", "horizon",
    "c_alpha_plus", "c_alpha_minus", "c_beta_plus", "c_beta_minus",
    "source", "initial", "exact",
)
_EXPR_FIELDS = CONFIG_FIELDS[4:]

#: order used where the advection terms vanish identically
PLACEHOLDER_ALPHA = 0.5


class UnknownProblemError(KeyError):
    pass


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemConfig:
    """Problem data with every function given as an expression."""

    alpha: float
    beta: float
    ell: float
    horizon: float
    c_alpha_plus: Expr
    c_alpha_minus: Expr
    c_beta_plus: Expr
    c_beta_minus: Expr
    source: Expr
    initial: Expr
    exact: Optional[Expr] = None
    name: str = "config"

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 1.0 < self.beta <= 2.0:
            raise ConfigError(f"beta must lie in (1, 2], got {self.beta}")
        if not (self.ell > 0 and self.horizon > 0):
            raise ConfigError("ell and horizon must be positive")

    @classmethod
    def from_texts(cls, name: str = "config", **fields: Any) -> "ProblemConfig":
        kwargs: dict[str, Any] = {}
        for key in ("alpha", "beta", "ell", "horizon"):
            kwargs[key] = float(fields[key])
        for key in _EXPR_FIELDS:
            text = fields.get(key)
            if text is None:
                if key == "exact":
                    kwargs[key] = None
                    continue
                text = "0"
            kwargs[key] = parse_expr(str(text))
        return cls(name=name, **kwargs)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {k: getattr(self, k) for k in ("alpha", "beta", "ell", "horizon")}
        for key in _EXPR_FIELDS:
            e = getattr(self, key)
            if e is not None:
                out[key] = to_text(e)
        return out

    def to_spec(self) -> ProblemSpec:
        def coef(e: Expr):
            return compile_expr(e)

        steady = not any(
            uses_variable(getattr(self, k), "t")
            for k in ("c_alpha_plus", "c_alpha_minus", "c_beta_plus", "c_beta_minus")
        )
        init = compile_expr(self.initial)
        return ProblemSpec(
            alpha=self.alpha,
            beta=self.beta,
            ell=self.ell,
            horizon=self.horizon,
            c_alpha_plus=coef(self.c_alpha_plus),
            c_alpha_minus=coef(self.c_alpha_minus),
            c_beta_plus=coef(self.c_beta_plus),
            c_beta_minus=coef(self.c_beta_minus),
            source=coef(self.source),
            initial=lambda x: init(x, 0.0),
            exact=None if self.exact is None else coef(self.exact),
            steady_coefficients=steady,
            name=self.name,
        )


def load_config(path) -> ProblemConfig:
    """Read a JSON problem config; unknown keys are rejected."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    unknown = set(data) - set(CONFIG_FIELDS)
    if unknown:
        raise ConfigError(f"{path}: unknown fields {sorted(unknown)}")
    missing = [k for k in ("alpha", "beta", "ell", "horizon", "initial") if k not in data]
    if missing:
        raise ConfigError(f"{path}: missing fields {missing}")
    try:
        return ProblemConfig.from_texts(name=path.stem, **data)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _num(v: float) -> str:
    # parenthesised so negative values survive substitution into any context
    return f"({v!r})"


def example1() -> ProblemConfig:
    return ProblemConfig.from_texts(
        name="example1",
        alpha=PLACEHOLDER_ALPHA,
        beta=1.8,
        ell=2.0,
        horizon=5.0,
        c_alpha_plus="0",
        c_alpha_minus="0",
        c_beta_plus="gamma(1.2)*x^1.8",
        c_beta_minus="gamma(1.2)*(2-x)^1.8",
        source="-4/11*exp(-t)*(211*x^4 - 844*x^3 + 1300*x^2 - 912*x + 192)",
        initial="4*(2-x)^2*x^2",
        exact="4*exp(-t)*x^2*(2-x)^2",
    )


def example2(alpha: float = 0.2, beta: float = 1.2, gamma: float = 2.0,
             horizon: float = 1.0) -> ProblemConfig:
    """Manufactured solution ``t^gamma exp(alpha t) x^2 (1-x)^2`` on ``[0, 1]``."""
    if gamma < 1:
        raise ValueError("gamma must be >= 1 so the source is finite at t = 0")
    a, b, g = _num(alpha), _num(beta), _num(gamma)

    def bracket(order: str) -> str:
        return (
            f"(x^(2-{order}) + (1-x)^(2-{order}))/(12*gamma(3-{order}))"
            f" - (x^(3-{order}) + (1-x)^(3-{order}))/(2*gamma(4-{order}))"
            f" + (x^(4-{order}) + (1-x)^(4-{order}))/gamma(5-{order})"
        )

    growth = f"t^{g}*exp({a}*t)"
    source = (
        f"24*{growth}/cos({a}*pi/2)*({bracket(a)})"
        f" + 24*{growth}/cos({b}*pi/2)*({bracket(b)})"
        f" + t^({g}-1)*exp({a}*t)*({a}*t + {g})*x^2*(1-x)^2"
    )
    return ProblemConfig.from_texts(
        name=f"example2(alpha={alpha}, beta={beta}, gamma={gamma})",
        alpha=alpha,
        beta=beta,
        ell=1.0,
        horizon=horizon,
        c_alpha_plus=f"1/cos({a}*pi/2)",
        c_alpha_minus=f"1/cos({a}*pi/2)",
        c_beta_plus=f"-1/cos({b}*pi/2)",
        c_beta_minus=f"-1/cos({b}*pi/2)",
        source=source,
        initial="0",
        exact=f"{growth}*x^2*(1-x)^2",
    )


#: (K_alpha, alpha, K_beta, beta) for the zero-source parameter study;
#: alpha is a placeholder where K_alpha = 0
EXAMPLE3_CASES = {
    1: (0.0, PLACEHOLDER_ALPHA, 0.1, 2.0),
    2: (0.0, PLACEHOLDER_ALPHA, 0.2, 2.0),
    3: (0.0, PLACEHOLDER_ALPHA, 0.3, 2.0),
    4: (0.0, PLACEHOLDER_ALPHA, 0.1, 1.5),
    5: (0.0, PLACEHOLDER_ALPHA, 0.2, 1.5),
    6: (0.0, PLACEHOLDER_ALPHA, 0.3, 1.5),
    7: (0.2, 0.1, 0.01, 2.0),
    8: (0.3, 0.5, 0.01, 2.0),
    9: (0.4, 0.9, 0.01, 2.0),
}


def example3(alpha: float = 0.5, beta: float = 1.5, k_alpha: float = 2.0, k_beta: float = 0.1,
             manufactured: bool | None = None) -> ProblemConfig:
    """``sin(4x)`` initial data on ``[0, pi]``.

    With ``alpha = 0.5`` and ``beta = 1.5`` the default adds the Fresnel
    source whose exact solution is ``exp(-t) sin(4x)``; otherwise the source
    is zero and no exact solution is known.
    """
    if manufactured is None:
        manufactured = alpha == 0.5 and beta == 1.5
    if manufactured and not (alpha == 0.5 and beta == 1.5):
        raise ValueError("the manufactured source exists only for alpha=0.5, beta=1.5")
    a, b, ka, kb = _num(alpha), _num(beta), _num(k_alpha), _num(k_beta)
    c_a = f"{ka}/(2*cos(pi/2*{a}))"
    c_b = f"-{kb}/(2*cos(pi/2*{b}))"
    if manufactured:
        z1 = "sqrt(8/pi*x)"
        z2 = "sqrt(8 - 8/pi*x)"
        source = (
            "2*exp(-t)*("
            f"2*{kb}/(sqrt(2*pi - 2*x)*sqrt(pi)) - sqrt(2)*{kb}/sqrt(x*pi) - sin(4*x)/2"
            f" + ({ka}*sin(4*x) - 4*{kb}*cos(4*x))*fresnels({z1})"
            f" + ({ka}*sin(4*x) + 4*{kb}*cos(4*x))*fresnels({z2})"
            f" + ({ka}*cos(4*x) + 4*{kb}*sin(4*x))*fresnelc({z1})"
            f" - ({ka}*cos(4*x) - 4*{kb}*sin(4*x))*fresnelc({z2})"
            ")"
        )
        exact = "exp(-t)*sin(4*x)"
    else:
        source, exact = "0", None
    return ProblemConfig.from_texts(
        name=f"example3(alpha={alpha}, beta={beta}, K_alpha={k_alpha}, K_beta={k_beta})",
        alpha=alpha,
        beta=beta,
        ell=math.pi,
        horizon=4.0,
        c_alpha_plus=c_a,
        c_alpha_minus=c_a,
        c_beta_plus=c_b,
        c_beta_minus=c_b,
        source=source,
        initial="sin(4*x)",
        exact=exact,
    )


EXAMPLE4_DIFFUSION = {
    1: "piecewise((0, 4.5, 0.1), 0.001)",
    2: "piecewise((0, 4.5, 0), 0.7)",
}


def example4(case: int = 1, alpha: float = 0.5, beta: float = 1.5) -> ProblemConfig:
    """Discontinuous initial data and diffusion coefficients on ``[0, 7]``.

    The orders are free parameters; ``x = 7`` falls in the default branch of
    the diffusion coefficient, so the upper interval is closed.
    """
    if case not in EXAMPLE4_DIFFUSION:
        raise UnknownProblemError(f"example 4 has cases 1 and 2, got {case}")
    c_b = EXAMPLE4_DIFFUSION[case]
    return ProblemConfig.from_texts(
        name=f"example4(case={'I' if case == 1 else 'II'}, alpha={alpha}, beta={beta})",
        alpha=alpha,
        beta=beta,
        ell=7.0,
        horizon=1.0,
        c_alpha_plus="1",
        c_alpha_minus="1",
        c_beta_plus=c_b,
        c_beta_minus=c_b,
        source="0",
        initial="piecewise((1, 2, 1), (3, 4, 2), (5, 6, 4), 0)",
        exact=None,
    )


@dataclass(frozen=True)
class BuiltinInfo:
    example_id: int
    summary: str
    flags: tuple[str, ...]
    reference: str
    factory: Any = field(repr=False, compare=False)


BUILTINS = {
    1: BuiltinInfo(1, "diffusion of order 1.8 with variable coefficients on [0, 2], T = 5",
                   (), "Meerschaert & Tadjeran benchmark", example1),
    2: BuiltinInfo(2, "two-sided advection-diffusion on [0, 1] with manufactured "
                      "solution t^gamma exp(alpha t) x^2 (1-x)^2, T = 1; "
                      "alpha in (0, 1), beta in (1, 2], gamma >= 1",
                   ("--alpha", "--beta", "--gamma"), "Li et al. benchmark", example2),
    3: BuiltinInfo(3, "sin(4x) initial data on [0, pi], T = 4; Fresnel source with exact "
                      "solution exp(-t) sin(4x) at alpha=0.5, beta=1.5, zero source otherwise",
                   ("--alpha", "--beta", "--kalpha", "--kbeta", "--table-case"),
                   "Li et al. / Yang et al. benchmark", example3),
    4: BuiltinInfo(4, "discontinuous initial data and diffusion on [0, 7], T = 1; "
                      "case I or II",
                   ("--case", "--alpha", "--beta"), "discontinuous-data test", example4),
}


def builtin(example_id: int, **variant: Any) -> ProblemSpec:
    """Build one of the four benchmark problems as a :class:`ProblemSpec`."""
    return builtin_config(example_id, **variant).to_spec()


def builtin_config(example_id: int, **variant: Any) -> ProblemConfig:
    if example_id not in BUILTINS:
        raise UnknownProblemError(f"unknown example {example_id!r}; choose from {sorted(BUILTINS)}")
    variant = {k: v for k, v in variant.items() if v is not None}
    if example_id == 3 and "table_case" in variant:
        k_a, a, k_b, b = EXAMPLE3_CASES[int(variant.pop("table_case"))]
        # the parameter study is always source-free, even where the orders
        # coincide with the manufactured case
        variant = {"alpha": a, "beta": b, "k_alpha": k_a, "k_beta": k_b,
                   "manufactured": False, **variant}
    try:
        return BUILTINS[example_id].factory(**variant)
    except TypeError as exc:
        raise UnknownProblemError(f"example {example_id}: bad variant {variant}: {exc}") from exc


def sample_grid(spec: ProblemSpec, count: int = 257) -> np.ndarray:
    return np.linspace(0.0, spec.ell, count)

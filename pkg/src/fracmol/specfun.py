"""Scalar special functions: gamma and the Fresnel integrals.

These are thin, contract-checked wrappers over :func:`math.gamma` and
:func:`scipy.special.fresnel`. Both accept scalars or arrays.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special


class SpecialFunctionError(ValueError):
    """Raised for arguments outside the domain of a special function."""


def gamma(z):
    """Gamma function of a real argument.

    Raises :class:`SpecialFunctionError` at the poles ``0, -1, -2, ...`` and
    when the result overflows a double.
    """
    if np.ndim(z) == 0:
        z = float(z)
        if not math.isfinite(z):
            raise SpecialFunctionError(f"gamma: non-finite argument {z!r}")
        if z <= 0 and z == math.floor(z):
            raise SpecialFunctionError(f"gamma: pole at z = {z:g}")
        try:
            return math.gamma(z)
        except OverflowError:
            raise SpecialFunctionError(f"gamma: overflow at z = {z:g}") from None

    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise SpecialFunctionError("gamma: non-finite argument")
    if np.any((z <= 0) & (z == np.floor(z))):
        raise SpecialFunctionError("gamma: pole in argument array")
    out = special.gamma(z)
    if not np.all(np.isfinite(out)):
        raise SpecialFunctionError("gamma: overflow in argument array")
    return out


def gamma_ratio(a, b):
    r"""Return :math:`\Gamma(a) / \Gamma(b)` without forming either factor.

    Stays finite when both gammas overflow, e.g. ``gamma_ratio(203, 201.5)``.
    """
    # poch(b, a - b) = Gamma(a) / Gamma(b)
    return special.poch(b, np.subtract(a, b))


def _fresnel(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise SpecialFunctionError("fresnel: non-finite argument")
    # scipy's fresnel is odd in x already, but pin the symmetry explicitly
    s, c = special.fresnel(np.abs(x))
    sign = np.sign(x)
    return sign * s, sign * c


def fresnel_c(x):
    r"""Fresnel cosine integral :math:`\int_0^x \cos(\pi \mu^2 / 2)\,d\mu`."""
    _, c = _fresnel(x)
    return float(c) if np.ndim(c) == 0 else c


def fresnel_s(x):
    r"""Fresnel sine integral :math:`\int_0^x \sin(\pi \mu^2 / 2)\,d\mu`."""
    s, _ = _fresnel(x)
    return float(s) if np.ndim(s) == 0 else s

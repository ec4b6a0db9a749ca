"""Residuals, finite differences, canonical Poisson brackets and RK4."""

from __future__ import annotations

from typing import Callable

import numpy as np

FD_STEP = 1e-4


def rel_residual(lhs, rhs) -> float:
    """|lhs - rhs| / max(1, |lhs|, |rhs|), max-norm for arrays."""
    a = np.asarray(lhs, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    num = float(np.max(np.abs(a - b))) if a.size else 0.0
    den = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0, float(np.max(np.abs(b))) if b.size else 0.0)
    return num / den


def _central4(f: Callable, x: complex, h: float):
    return (8 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12 * h)


def derivative(f: Callable, x: complex, h: float | None = None, richardson: bool = True):
    """4th-order central difference along the real direction of x.

    For holomorphic f this is the complex derivative.  One Richardson
    halving removes the h^4 term.  Works for scalar- or array-valued f.
    """
    x = complex(x)
    if h is None:
        h = FD_STEP * max(1.0, abs(x))
    d1 = _central4(f, x, h)
    if not richardson:
        return d1
    d2 = _central4(f, x, h / 2)
    return d2 + (d2 - d1) / 15.0


def poisson_bracket(F: Callable, G: Callable, p: complex, q: complex,
                    h: float | None = None, richardson: bool = True):
    """{F, G} = dF/dp dG/dq - dF/dq dG/dp for observables F(p, q), G(p, q)."""
    left, right = bracket_terms(F, G, p, q, h, richardson)
    return left - right


def bracket_terms(F: Callable, G: Callable, p: complex, q: complex,
                  h: float | None = None, richardson: bool = True) -> tuple:
    """(dF/dp dG/dq, dF/dq dG/dp); their equality is the statement {F, G} = 0."""
    Fp = derivative(lambda s: F(s, q), p, h, richardson)
    Fq = derivative(lambda s: F(p, s), q, h, richardson)
    Gp = derivative(lambda s: G(s, q), p, h, richardson)
    Gq = derivative(lambda s: G(p, s), q, h, richardson)
    return Fp * Gq, Fq * Gp


def rk4_step(field: Callable, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = field(y)
    k2 = field(y + 0.5 * dt * k1)
    k3 = field(y + 0.5 * dt * k2)
    k4 = field(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

"""One-site classical XYZ chain with boundaries in the (p, q) representation."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .elliptic import Torus, check_pole, eisenstein, phi_alpha, varphi, weierstrass_p
from .errors import ZeroCouplingError
from .gyrostat import _CYCLIC, levi_civita, reflection_rhs
from .matrix import IDENTITY, mat2, sigma_flip
from .numerics import rel_residual
from .potential import CouplingSet, v


@dataclass(frozen=True)
class BoundaryParams:
    """K-matrix constants in the reciprocal-phi form (rho tilde)."""

    rho_plus: tuple
    rho_minus: tuple

    def __post_init__(self):
        for name in ("rho_plus", "rho_minus"):
            vals = tuple(complex(x) for x in getattr(self, name))
            if len(vals) != 3:
                raise ValueError(f"{name} has exactly three components")
            object.__setattr__(self, name, vals)

    @classmethod
    def from_rho(cls, rho_plus, rho_minus, torus: Torus) -> "BoundaryParams":
        return cls(rho_to_tilde(rho_plus, torus), rho_to_tilde(rho_minus, torus))

    def to_rho(self, torus: Torus) -> tuple:
        return tilde_to_rho(self.rho_plus, torus), tilde_to_rho(self.rho_minus, torus)

    def side(self, sign: str) -> tuple:
        if sign == "+":
            return self.rho_plus
        if sign == "-":
            return self.rho_minus
        raise ValueError("sign must be '+' or '-'")


_RHO_SIGN = (1, 1, -1)


def rho_to_tilde(rho, torus: Torus) -> tuple:
    cs = torus.constants
    return tuple(_RHO_SIGN[k] * complex(rho[k]) / cs[k] for k in range(3))


def tilde_to_rho(rho_tilde, torus: Torus) -> tuple:
    cs = torus.constants
    return tuple(_RHO_SIGN[k] * complex(rho_tilde[k]) * cs[k] for k in range(3))


def sklyanin_d(eta: complex, torus: Torus) -> tuple:
    """(d_0, ..., d_3) with d_0 = 1 and d_alpha = -1 / phi_alpha(eta - omega_alpha)."""
    return (1.0 + 0j,) + tuple(-1.0 / phi_alpha(a, eta - torus.omega[a], torus) for a in (1, 2, 3))


def _exp_half(p: complex, c: complex) -> complex:
    return cmath.exp(p / (2 * c))


def bold_generators(state, eta: complex, c: complex, torus: Torus) -> tuple:
    """Bold generators: half the symmetrized phi_a(+-2q, eta + omega_a) e^{+-p/2c}."""
    q = state.q
    check_pole(2 * q, torus, "2q")
    ep = _exp_half(state.p, c)
    return tuple(0.5 * (varphi(a, 2 * q, eta, torus) * ep + varphi(a, -2 * q, eta, torus) / ep)
                 for a in range(4))


def standard_generators(state, eta: complex, c: complex, torus: Torus) -> tuple:
    d = sklyanin_d(eta, torus)
    return tuple(2 * d[a] * s for a, s in enumerate(bold_generators(state, eta, c, torus)))


def sklyanin_generator(style: str, a: int, state, eta: complex, c: complex, torus: Torus) -> complex:
    if style == "bold":
        return bold_generators(state, eta, c, torus)[a]
    if style == "standard":
        return standard_generators(state, eta, c, torus)[a]
    raise ValueError("style must be 'standard' or 'bold'")


def interaction_constants(eta: complex, torus: Torus) -> tuple:
    """I_alpha = E_1(eta + omega_alpha) - E_1(omega_alpha) - E_1(eta)."""
    e_eta = eisenstein(1, eta, torus)
    om = torus.omega
    return tuple(eisenstein(1, eta + om[a], torus) - eisenstein(1, om[a], torus) - e_eta for a in (1, 2, 3))


def standard_bracket(a: int, b: int, S, c: complex, torus: Torus) -> complex:
    """{S_a, S_b} of the classical Sklyanin algebra (no extra constants)."""
    if a == b:
        return 0j
    if a and b:
        g = 6 - a - b
        return -1j * levi_civita(a, b, g) * S[0] * S[g] / c
    if b == 0:
        return -standard_bracket(b, a, S, c, torus)
    wp = torus.wp_half
    be, ga = _CYCLIC[b]
    return -1j * S[be] * S[ga] * (wp[be - 1] - wp[ga - 1]) / c


def bold_bracket(a: int, b: int, S, eta: complex, c: complex, torus: Torus) -> complex:
    if a == b:
        return 0j
    interaction = interaction_constants(eta, torus)
    if a and b:
        g = 6 - a - b
        return -(interaction[a - 1] - interaction[b - 1]) * S[0] * S[g] / c
    if b == 0:
        return -bold_bracket(b, a, S, eta, c, torus)
    be, ga = _CYCLIC[b]
    return interaction[b - 1] * S[be] * S[ga] / c


def lax_xyz(z: complex, state, eta: complex, c: complex, torus: Torus) -> np.ndarray:
    S = standard_generators(state, eta, c, torus)
    return lax_from_generators(z, S, torus)


def lax_from_generators(z: complex, S, torus: Torus) -> np.ndarray:
    check_pole(z, torus, "z")
    return S[0] * IDENTITY + sum(S[a] * phi_alpha(a, z, torus) * sigma_flip(a) for a in (1, 2, 3))


def lax_bold(z: complex, state, eta: complex, nu: CouplingSet, c: complex, torus: Torus) -> np.ndarray:
    """Factor of the lax_chalykh product with the off-diagonal exponentials swapped."""
    q = state.q
    ep = _exp_half(state.p, c)
    return mat2(v(eta, q, nu, torus) * ep, -v(z, q, nu, torus) / ep,
                -v(z, -q, nu, torus) * ep, v(eta, -q, nu, torus) / ep)


def k_matrix(sign: str, z: complex, boundary: BoundaryParams, torus: Torus) -> np.ndarray:
    rho = boundary.side(sign)
    check_pole(z, torus, "z")
    return IDENTITY + sum(rho[a - 1] / phi_alpha(a, z, torus) * sigma_flip(a) for a in (1, 2, 3))


def k_matrix_shifted_form(sign: str, z: complex, boundary: BoundaryParams, torus: Torus) -> np.ndarray:
    """sigma_0 + sum rho_alpha phi_alpha(z + omega_alpha) sigma_{4-alpha} with converted constants."""
    rho = boundary.to_rho(torus)[0 if sign == "+" else 1]
    return IDENTITY + sum(rho[a - 1] * phi_alpha(a, z + torus.omega[a], torus) * sigma_flip(a)
                          for a in (1, 2, 3))


def k_reflection_residual(z: complex, w: complex, rho_tilde, torus: Torus) -> float:
    b = BoundaryParams(rho_tilde, rho_tilde)
    kz, kw = k_matrix("+", z, b, torus), k_matrix("+", w, b, torus)
    rhs = reflection_rhs("quadratic", kz, kw, z, w, torus)
    return rel_residual(np.zeros((4, 4)), rhs)


def xyz_casimirs(S, torus: Torus) -> tuple:
    wp = torus.wp_half
    c1 = S[1] ** 2 + S[2] ** 2 + S[3] ** 2
    c2 = S[0] ** 2 + sum(S[k] ** 2 * wp[k - 1] for k in (1, 2, 3))
    return c1, c2


def transfer_matrix(z: complex, state, eta: complex, c: complex, boundary: BoundaryParams,
                    torus: Torus) -> complex:
    lax = lax_xyz(z, state, eta, c, torus)
    return complex(0.5 * np.trace(k_matrix("+", z, boundary, torus) @ lax @ k_matrix("-", z, boundary, torus) @ lax))


def transfer_closed_form(z: complex, S, boundary: BoundaryParams, torus: Torus) -> complex:
    rp, rm = boundary.rho_plus, boundary.rho_minus
    c1, c2 = xyz_casimirs(S, torus)
    phis = [phi_alpha(a, z, torus) for a in (1, 2, 3)]
    plus = S[0] + sum(rp[k] * S[k + 1] for k in range(3))
    minus = S[0] + sum(rm[k] * S[k + 1] for k in range(3))
    factor = 1 - sum(rp[k] * rm[k] / phis[k] ** 2 for k in range(3))
    return 2 * plus * minus - factor * (c2 - c1 * weierstrass_p(z, torus))


def hamiltonian_xyz(state, eta: complex, c: complex, boundary: BoundaryParams, torus: Torus) -> complex:
    S = standard_generators(state, eta, c, torus)
    plus = S[0] + sum(boundary.rho_plus[k] * S[k + 1] for k in range(3))
    minus = S[0] + sum(boundary.rho_minus[k] * S[k + 1] for k in range(3))
    return plus * minus


def matched_boundary(nu: CouplingSet, nu_bar: CouplingSet, eta: complex, torus: Torus) -> BoundaryParams:
    nd, ndb = nu.dual(), nu_bar.dual()
    if nd[0] == 0 or ndb[0] == 0:
        raise ZeroCouplingError("the zeroth dual coupling must be nonzero on both sides")
    d = sklyanin_d(eta, torus)
    return BoundaryParams(tuple(d[0] / nd[0] * nd[a] / d[a] for a in (1, 2, 3)),
                          tuple(d[0] / ndb[0] * ndb[a] / d[a] for a in (1, 2, 3)))


def h1_from_generators(state, eta: complex, nu: CouplingSet, c: complex, torus: Torus) -> complex:
    """sum_a (dual nu_a / d_a) S_a."""
    nd = nu.dual()
    d = sklyanin_d(eta, torus)
    S = standard_generators(state, eta, c, torus)
    return sum(nd[a] / d[a] * S[a] for a in range(4))

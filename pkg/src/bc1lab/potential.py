"""The four-coupling potential v(z, u | nu) and its dual."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .elliptic import POLE_TOL, Torus, check_pole, near_lattice, kronecker_f, kronecker_phi, theta, theta_all

# the involutive sign matrix mapping nu -> dual nu (rows/columns indexed 0..3)
DUAL_MATRIX = 0.5 * np.array(
    [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
    dtype=float,
)


@dataclass(frozen=True)
class CouplingSet:
    """Four complex couplings nu_0..nu_3."""

    nu: tuple

    def __post_init__(self):
        nu = tuple(complex(x) for x in self.nu)
        if len(nu) != 4:
            raise ValueError("a coupling set has exactly four entries")
        object.__setattr__(self, "nu", nu)

    def __getitem__(self, a: int) -> complex:
        return self.nu[a]

    def __iter__(self):
        return iter(self.nu)

    def dual(self) -> "CouplingSet":
        return dual_transform(self)


def dual_transform(nu: CouplingSet) -> CouplingSet:
    """nu_breve = 1/2 H nu with the 4x4 sign matrix H."""
    vec = np.asarray(nu.nu, dtype=complex)
    return CouplingSet(tuple(complex(x) for x in DUAL_MATRIX @ vec))


def _prefactor(a: int, z: complex, torus: Torus) -> complex:
    # exp(4 pi i z d_tau omega_a) = (1, 1, e^{2 pi i z}, e^{2 pi i z})
    d = torus.dtau_omega[a]
    return cmath.exp(4j * math.pi * z * d) if d else 1.0


def v_definition(z: complex, u: complex, nu: CouplingSet, torus: Torus) -> complex:
    """v(z, u | nu) = sum_a nu_a e^{4 pi i z d_tau omega_a} phi(2z, u + omega_a), term by term."""
    total = 0j
    for a in range(4):
        if nu.nu[a] == 0:
            continue
        total += nu.nu[a] * _prefactor(a, z, torus) * kronecker_phi(2 * z, u + torus.omega[a], torus)
    return total


def v_prime_definition(z: complex, u: complex, nu: CouplingSet, torus: Torus) -> complex:
    total = 0j
    for a in range(4):
        if nu.nu[a] == 0:
            continue
        total += nu.nu[a] * _prefactor(a, z, torus) * kronecker_f(2 * z, u + torus.omega[a], torus)
    return total


def _ratio_terms(z: complex, u: complex, nu: CouplingSet, torus: Torus, order: int):
    # theta-ratio form: each term is theta'(0) theta_{a+1}(2z+u) / (theta_1(2z) theta_{a+1}(u))
    z, u = complex(z), complex(u)
    scale = _scale(2 * z, torus)
    # u + omega_a near the lattice forces 2u near it, so one test screens all four
    if near_lattice(2 * u, torus, 2 * POLE_TOL):
        for a in range(4):
            if nu.nu[a] != 0:
                check_pole(u + torus.omega[a], torus, "u + omega_a")
    return scale, theta_all(2 * z + u, torus, order), theta_all(u, torus, order)


@lru_cache(maxsize=256)
def _scale(z2: complex, torus: Torus) -> complex:
    # trajectories hold z fixed, so this is usually a cache hit
    check_pole(z2, torus, "2z")
    return torus.theta1_odd_derivs[0] / theta(1, z2, torus)


def v(z: complex, u: complex, nu: CouplingSet, torus: Torus) -> complex:
    """v(z, u | nu), evaluated through shared theta values."""
    scale, top, bottom = _ratio_terms(z, u, nu, torus, 0)
    return scale * sum(nu.nu[a] * top[a] / bottom[a] for a in range(4) if nu.nu[a] != 0)


def v_and_prime(z: complex, u: complex, nu: CouplingSet, torus: Torus) -> tuple:
    """(v(z, u), d/du v(z, u)) from one set of theta evaluations."""
    scale, top, bottom = _ratio_terms(z, u, nu, torus, 1)
    val = der = 0j
    for a in range(4):
        if nu.nu[a] == 0:
            continue
        (t, dt), (b, db) = top[a], bottom[a]
        val += nu.nu[a] * t / b
        der += nu.nu[a] * (dt * b - t * db) / (b * b)
    return scale * val, scale * der


def v_prime(z: complex, u: complex, nu: CouplingSet, torus: Torus) -> complex:
    """d/du v(z, u | nu)."""
    return v_and_prime(z, u, nu, torus)[1]


def v_dual(z: complex, u: complex, nu: CouplingSet, torus: Torus) -> complex:
    """The breve function: v(z, u | dual nu)."""
    return v(z, u, nu.dual(), torus)

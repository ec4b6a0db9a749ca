"""Zhukovsky-Volterra gyrostat: Lax matrix, r-matrix, Poisson structures, dynamics.

Generators are indexed 0..3; generator a >= 1 is paired with the Pauli
matrix sigma_{4-a} through ``matrix.sigma_flip``.  The bracket matrix
{L_1(z), L_2(w)} is assembled exactly from structure constants, since L is
linear in the generators.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .elliptic import Torus, check_pole, phi_alpha, weierstrass_p
from .errors import ZeroDenominatorError
from .matrix import IDENTITY, commutator, det2, kron, lift1, lift2, sigma_flip
from .numerics import derivative, rel_residual, rk4_step

_CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def levi_civita(a: int, b: int, g: int) -> int:
    if (a, b, g) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        return 1
    if (a, b, g) in ((2, 1, 3), (3, 2, 1), (1, 3, 2)):
        return -1
    return 0


class Structure(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class SpinState:
    S0: complex
    S1: complex
    S2: complex
    S3: complex

    def __post_init__(self):
        for name in ("S0", "S1", "S2", "S3"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def __getitem__(self, a: int) -> complex:
        return (self.S0, self.S1, self.S2, self.S3)[a]

    def as_array(self) -> np.ndarray:
        return np.array([self.S0, self.S1, self.S2, self.S3], dtype=complex)

    @classmethod
    def from_array(cls, y) -> "SpinState":
        return cls(*(complex(x) for x in y))


@dataclass(frozen=True)
class GyrostatParams:
    lam: tuple
    c: complex
    torus: Torus

    def __post_init__(self):
        lam = tuple(complex(x) for x in self.lam)
        if len(lam) != 3:
            raise ValueError("lambda has exactly three components")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "c", complex(self.c))
        if self.c == 0:
            raise ValueError("bracket constant c must be nonzero")


def generator_matrix(a: int, z: complex, torus: Torus) -> np.ndarray:
    """dL/dS_a: sigma_0 for a = 0, phi_a(z) sigma_{4-a} otherwise."""
    if a == 0:
        return IDENTITY
    return phi_alpha(a, z, torus) * sigma_flip(a)


def _phis(z: complex, torus: Torus) -> tuple:
    check_pole(z, torus, "z")
    return tuple(phi_alpha(a, z, torus) for a in (1, 2, 3))


def lax_zhv(z: complex, spin: SpinState, params: GyrostatParams, include_s0: bool = True) -> np.ndarray:
    phis = _phis(z, params.torus)
    m = spin.S0 * IDENTITY if include_s0 else np.zeros((2, 2), dtype=complex)
    for a in (1, 2, 3):
        ph = phis[a - 1]
        lam = params.lam[a - 1]
        if lam != 0 and abs(ph) < 1e-12:
            raise ZeroDenominatorError(f"phi_{a}(z) vanishes at z = {z}")
        m = m + (spin[a] * ph - (lam / ph if lam != 0 else 0)) * sigma_flip(a)
    return m


def r_matrix(x: complex, torus: Torus) -> np.ndarray:
    check_pole(x, torus, "x")
    return 0.5 * sum(phi_alpha(a, x, torus) * kron(sigma_flip(a), sigma_flip(a)) for a in (1, 2, 3))


def bracket(structure: Structure, a: int, b: int, spin: SpinState, params: GyrostatParams) -> complex:
    """{S_a, S_b} for the linear or quadratic structure (quadratic includes 1/c)."""
    structure = Structure(structure)
    if a == b:
        return 0j
    if structure is Structure.LINEAR:
        if a == 0 or b == 0:
            return 0j
        g = 6 - a - b
        return -1j * levi_civita(a, b, g) * spin[g]
    if a and b:
        g = 6 - a - b
        return -1j * levi_civita(a, b, g) * spin.S0 * spin[g] / params.c
    if b == 0:
        return -bracket(structure, b, a, spin, params)
    wp = params.torus.wp_half
    lam = params.lam
    be, ga = _CYCLIC[b]
    value = (-1j * spin[be] * spin[ga] * (wp[be - 1] - wp[ga - 1])
             + 1j * (spin[be] * lam[ga - 1] - lam[be - 1] * spin[ga]))
    return value / params.c


def bracket_table(structure: Structure, spin: SpinState, params: GyrostatParams) -> np.ndarray:
    return np.array([[bracket(structure, a, b, spin, params) for b in range(4)] for a in range(4)])


def lax_bracket(structure: Structure, z: complex, w: complex, spin: SpinState,
                params: GyrostatParams) -> np.ndarray:
    """{L_1(z), L_2(w)} = sum_ab {S_a, S_b} dL/dS_a(z) (x) dL/dS_b(w)."""
    table = bracket_table(structure, spin, params)
    gz = [generator_matrix(a, z, params.torus) for a in range(4)]
    gw = [generator_matrix(b, w, params.torus) for b in range(4)]
    out = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            if table[a, b] != 0:
                out += table[a, b] * kron(gz[a], gw[b])
    return out


def reflection_rhs(structure: Structure, lz: np.ndarray, lw: np.ndarray, z: complex, w: complex,
                   torus: Torus, c: complex = 1.0) -> np.ndarray:
    r_minus = r_matrix(z - w, torus)
    r_plus = r_matrix(z + w, torus)
    a, b = lift1(lz), lift2(lw)
    if Structure(structure) is Structure.LINEAR:
        return 0.5 * commutator(a + b, r_minus) - 0.5 * commutator(a - b, r_plus)
    return (commutator(a @ b, r_minus) + b @ r_plus @ a - a @ r_plus @ b) / (2 * c)


def reflection_residual(structure: Structure, z: complex, w: complex, spin: SpinState,
                        params: GyrostatParams, include_s0: bool = True) -> float:
    structure = Structure(structure)
    check_pole(z - w, params.torus, "z-w")
    check_pole(z + w, params.torus, "z+w")
    lz = lax_zhv(z, spin, params, include_s0)
    lw = lax_zhv(w, spin, params, include_s0)
    lhs = lax_bracket(structure, z, w, spin, params)
    rhs = reflection_rhs(structure, lz, lw, z, w, params.torus, params.c)
    return rel_residual(lhs, rhs)


def casimirs(spin: SpinState, params: GyrostatParams) -> tuple:
    wp = params.torus.wp_half
    c1 = spin.S1 ** 2 + spin.S2 ** 2 + spin.S3 ** 2
    c2 = spin.S0 ** 2 + sum(spin[k] ** 2 * wp[k - 1] + 2 * spin[k] * params.lam[k - 1] for k in (1, 2, 3))
    return c1, c2


def casimir_gradients(spin: SpinState, params: GyrostatParams) -> tuple:
    wp = params.torus.wp_half
    g1 = np.array([0, 2 * spin.S1, 2 * spin.S2, 2 * spin.S3], dtype=complex)
    g2 = np.array([2 * spin.S0] + [2 * spin[k] * wp[k - 1] + 2 * params.lam[k - 1] for k in (1, 2, 3)],
                  dtype=complex)
    return g1, g2


def casimir_bracket_residual(structure: Structure, spin: SpinState, params: GyrostatParams) -> float:
    """max_a |{C_i, S_a}| via the Leibniz rule (C_2 only for the quadratic structure)."""
    table = bracket_table(structure, spin, params)
    g1, g2 = casimir_gradients(spin, params)
    grads = (g1, g2) if Structure(structure) is Structure.QUADRATIC else (g1,)
    return max(float(np.max(np.abs(g @ table))) for g in grads)


def jacobi_residual(structure: Structure, spin: SpinState, params: GyrostatParams) -> float:
    """Max over triples of the cyclic sum {S_a,{S_b,S_c}} + cyclic, via Leibniz."""
    base = spin.as_array()
    table = bracket_table(structure, spin, params)

    def grad(b, c):
        out = np.zeros(4, dtype=complex)
        for d in range(4):
            def f(x, d=d):
                y = base.copy()
                y[d] = x
                return bracket(structure, b, c, SpinState.from_array(y), params)
            out[d] = derivative(f, base[d])
        return out

    grads = {(b, c): grad(b, c) for b in range(4) for c in range(4)}
    worst = 0.0
    for a in range(4):
        for b in range(4):
            for c in range(4):
                total = (grads[(b, c)] @ table[a] + grads[(c, a)] @ table[b] + grads[(a, b)] @ table[c])
                scale = max(1.0, float(np.max(np.abs(table))) ** 2)
                worst = max(worst, abs(total) / scale)
    return worst


def hamiltonian_zhv(spin: SpinState, params: GyrostatParams) -> complex:
    wp = params.torus.wp_half
    return -0.5 * sum(spin[a] ** 2 * wp[a - 1] for a in (1, 2, 3)) - sum(
        spin[a] * params.lam[a - 1] for a in (1, 2, 3))


def _vector_matrix(components) -> np.ndarray:
    return sum(components[a - 1] * sigma_flip(a) for a in (1, 2, 3))


def gyrostat_eom(spin: SpinState, params: GyrostatParams) -> SpinState:
    """S' = [S, wp(S)] + [S, lambda] in matrix form; S_0 is constant."""
    wp = params.torus.wp_half
    s = _vector_matrix([spin[a] for a in (1, 2, 3)])
    ws = _vector_matrix([spin[a] * wp[a - 1] for a in (1, 2, 3)])
    lam = _vector_matrix(params.lam)
    d = commutator(s, ws) + commutator(s, lam)
    return SpinState(0, *(0.5 * np.trace(d @ sigma_flip(a)) for a in (1, 2, 3)))


def m_zhv(z: complex, spin: SpinState, torus: Torus) -> np.ndarray:
    """M with L' = [L, M] for the flow of ``gyrostat_eom``."""
    phis = _phis(z, torus)
    prod = phis[0] * phis[1] * phis[2]
    return sum(spin[a] * (prod / phis[a - 1]) * sigma_flip(a) for a in (1, 2, 3))


def lax_residual(z: complex, spin: SpinState, params: GyrostatParams) -> float:
    sdot = gyrostat_eom(spin, params)
    ldot = sum(sdot[a] * generator_matrix(a, z, params.torus) for a in (1, 2, 3))
    lax = lax_zhv(z, spin, params)
    return rel_residual(ldot, commutator(lax, m_zhv(z, spin, params.torus)))


def determinant_closed_form(z: complex, spin: SpinState, params: GyrostatParams) -> complex:
    """det L(z) = C_2 - wp(z) C_1 - sum_k lambda_k^2 / phi_k(z)^2."""
    c1, c2 = casimirs(spin, params)
    phis = _phis(z, params.torus)
    tail = sum(params.lam[k] ** 2 / phis[k] ** 2 for k in range(3))
    return c2 - weierstrass_p(z, params.torus) * c1 - tail


def trace_square_tail(z: complex, params: GyrostatParams) -> complex:
    phis = _phis(z, params.torus)
    return 0.5 * sum(params.lam[k] ** 2 / phis[k] ** 2 for k in range(3))


@dataclass
class GyrostatTrajectory:
    dt: float
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    c1: list = field(default_factory=list)
    c2: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    spectral: list = field(default_factory=list)

    INVARIANTS = ("c1", "c2", "energy", "spectral")

    def drift(self, series: str) -> float:
        values = getattr(self, series)
        if not values:
            return 0.0
        ref = values[0]
        return max(abs(x - ref) for x in values) / max(abs(ref), 1e-300)

    def drifts(self) -> dict:
        return {name: self.drift(name) for name in self.INVARIANTS}


def integrate_gyrostat(spin0: SpinState, params: GyrostatParams, dt: float, steps: int,
                       probe: complex = 0.17 + 0.23j) -> GyrostatTrajectory:
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    traj = GyrostatTrajectory(dt=dt)

    def field_(y):
        return gyrostat_eom(SpinState.from_array(y), params).as_array()

    def record(t, s):
        c1, c2 = casimirs(s, params)
        traj.times.append(t)
        traj.states.append(s)
        traj.c1.append(c1)
        traj.c2.append(c2)
        traj.energy.append(hamiltonian_zhv(s, params))
        traj.spectral.append(det2(lax_zhv(probe, s, params)))

    y = spin0.as_array()
    record(0.0, spin0)
    for n in range(1, steps + 1):
        y = rk4_step(field_, y, dt)
        record(n * dt, SpinState.from_array(y))
    return traj


CSV_HEADER = ("t", "re_S0", "im_S0", "re_S1", "im_S1", "re_S2", "im_S2", "re_S3", "im_S3",
              "re_C1", "im_C1", "re_C2", "im_C2", "re_H", "im_H")


def write_csv(traj: GyrostatTrajectory, path) -> None:
    """One row per completed step, matching the van Diejen trajectory files."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        rows = zip(traj.times, traj.states, traj.c1, traj.c2, traj.energy)
        next(rows, None)
        for t, s, c1, c2, h in rows:
            row = [repr(t)]
            for x in (s.S0, s.S1, s.S2, s.S3, c1, c2, h):
                row += [repr(x.real), repr(x.imag)]
            w.writerow(row)

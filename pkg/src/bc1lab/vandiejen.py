"""BC1 Ruijsenaars-van Diejen model: Lax pairs, Hamiltonians, flows.

Phase space is one complex canonical pair (p, q) with {p, q} = 1.  The
eight-coupling model uses two coupling sets (nu, eta) and (nu_bar, eta_bar);
the four-coupling flows use only the unbarred set.

Lax equations are taken in the form dL/dt = [L, M] = LM - ML for every flow.
"""

from __future__ import annotations

import cmath
import csv
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .elliptic import Torus, check_pole, eisenstein, kronecker_phi, lattice_distance, phi_alpha, wp_half_shifts
from .errors import NearPoleError, PoleApproachError
from .matrix import commutator, det2, mat2
from .numerics import derivative, rel_residual, rk4_step
from .potential import CouplingSet, v, v_and_prime, v_prime

Z_STAR = 0.17 + 0.23j
POLE_APPROACH = 1e-3


class FlowId(str, Enum):
    VD8 = "vd8"
    VD4_1 = "vd4-1"
    VD4_2 = "vd4-2"
    INOZ = "inoz"


@dataclass(frozen=True)
class PhaseState:
    p: complex
    q: complex

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "q", complex(self.q))

    def as_array(self) -> np.ndarray:
        return np.array([self.p, self.q], dtype=complex)

    @classmethod
    def from_array(cls, y) -> "PhaseState":
        return cls(complex(y[0]), complex(y[1]))


@dataclass(frozen=True)
class ModelParams:
    c: complex
    eta: complex
    nu: CouplingSet
    torus: Torus
    eta_bar: complex | None = None
    nu_bar: CouplingSet | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "eta", complex(self.eta))
        if self.c == 0:
            raise ValueError("the relativistic parameter c must be nonzero")
        if self.eta_bar is None:
            object.__setattr__(self, "eta_bar", self.eta)
        else:
            object.__setattr__(self, "eta_bar", complex(self.eta_bar))
        if self.nu_bar is None:
            object.__setattr__(self, "nu_bar", self.nu)
        for name, e in (("eta", self.eta), ("eta_bar", self.eta_bar)):
            check_pole(2 * e, self.torus, f"2*{name}")

    def barred(self) -> "ModelParams":
        """The four-coupling data of the second factor, as an unbarred set."""
        return replace(self, eta=self.eta_bar, nu=self.nu_bar, eta_bar=self.eta_bar, nu_bar=self.nu_bar)


# ---- building blocks ---------------------------------------------------------

def _vv(params: ModelParams, bar: bool):
    nu = params.nu_bar if bar else params.nu
    eta = params.eta_bar if bar else params.eta
    T = params.torus
    return (lambda z, u: v(z, u, nu, T)), (lambda z, u: v_prime(z, u, nu, T)), eta


def _eta_pairs(q: complex, params: ModelParams, bar: bool):
    """(v(eta, q), v'(eta, q), v(eta, -q), v'(eta, -q)) for the chosen coupling set."""
    nu = params.nu_bar if bar else params.nu
    eta = params.eta_bar if bar else params.eta
    a, da = v_and_prime(eta, q, nu, params.torus)
    b, db = v_and_prime(eta, -q, nu, params.torus)
    return a, da, b, db


def _factor(z: complex, state: PhaseState, params: ModelParams, bar: bool) -> np.ndarray:
    V, _, eta = _vv(params, bar)
    p, q, c = state.p, state.q, params.c
    e = cmath.exp(p / (2 * c))
    return mat2(V(eta, q) * e, V(z, q), V(z, -q), V(eta, -q) / e)


def lax_symmetric(z: complex, state: PhaseState, params: ModelParams):
    """(L, Lbar); their product is the symmetric eight-coupling Lax matrix."""
    return _factor(z, state, params, False), _factor(z, state, params, True)


def lax_product(z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    L, Lb = lax_symmetric(z, state, params)
    return L @ Lb


def lax_chalykh(z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    """Two-factor product form of the eight-coupling Lax matrix."""
    V, _, eta = _vv(params, False)
    Vb, _, etab = _vv(params, True)
    p, q, c = state.p, state.q, params.c
    e = cmath.exp(p / c)
    first = mat2(V(eta, q), -V(z, q), -V(z, -q), V(eta, -q))
    second = mat2(Vb(etab, q) * e, -Vb(z, q), -Vb(z, -q), Vb(etab, -q) / e)
    return first @ second


def chalykh_gauge(state: PhaseState, params: ModelParams) -> np.ndarray:
    """D with lax_chalykh = D (L Lbar) D^{-1}."""
    e = cmath.exp(state.p / (4 * params.c))
    return mat2(1 / e, 0, 0, -e)


def lax_matrix(flow: FlowId, z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    flow = FlowId(flow)
    if flow is FlowId.VD8:
        return lax_product(z, state, params)
    if flow is FlowId.INOZ:
        return inozemtsev_lax(z, state, params)
    return _factor(z, state, params, False)


# ---- Hamiltonians and vector fields ---------------------------------------------

def _wp_sum(coeffs, q: complex, torus: Torus, derivative_: bool = False) -> complex:
    values = wp_half_shifts(q, torus, derivative_)
    return sum(coeffs[a] * values[a] for a in range(4))


def h1(state: PhaseState, params: ModelParams, bar: bool = False) -> complex:
    """Trace of the four-coupling factor."""
    V, _, eta = _vv(params, bar)
    e = cmath.exp(state.p / (2 * params.c))
    return V(eta, state.q) * e + V(eta, -state.q) / e


def hamiltonian(flow: FlowId, state: PhaseState, params: ModelParams) -> complex:
    flow = FlowId(flow)
    p, q, c, T = state.p, state.q, params.c, params.torus
    nu = params.nu
    if flow is FlowId.VD8:
        V, _, eta = _vv(params, False)
        Vb, _, etab = _vv(params, True)
        nb = params.nu_bar
        e = cmath.exp(p / c)
        return (
            V(eta, q) * Vb(etab, q) * e
            + V(eta, -q) * Vb(etab, -q) / e
            - 2 * _wp_sum([nu[a] * nb[a] for a in range(4)], q, T)
        )
    if flow is FlowId.VD4_1:
        return h1(state, params)
    if flow is FlowId.VD4_2:
        V, _, eta = _vv(params, False)
        e = cmath.exp(p / c)
        return 0.5 * V(eta, q) ** 2 * e + 0.5 * V(eta, -q) ** 2 / e - _wp_sum([x * x for x in nu], q, T)
    # the Lax matrix fixes the potential coefficients at 2 nu_a^2
    return p * p / 2 - _wp_sum([2 * x * x for x in nu], q, T)


def _dq_h8(state: PhaseState, params: ModelParams, pairs=None) -> complex:
    p, q, c, T = state.p, state.q, params.c, params.torus
    nu, nb = params.nu, params.nu_bar
    if pairs is None:
        pairs = _eta_pairs(q, params, False), _eta_pairs(q, params, True)
    (a, da, b, db), (ab, dab, bb, dbb) = pairs
    # d/dq of v(eta, q) vbar(etabar, q) and of v(eta, -q) vbar(etabar, -q)
    g_plus = da * ab + a * dab
    g_minus = -(db * bb + b * dbb)
    e = cmath.exp(p / c)
    return g_plus * e + g_minus / e - 2 * _wp_sum([nu[k] * nb[k] for k in range(4)], q, T, True)


def equations_of_motion(flow: FlowId, state: PhaseState, params: ModelParams):
    """(q_dot, p_dot) = (dH/dp, -dH/dq) in closed form."""
    flow = FlowId(flow)
    p, q, c, T = state.p, state.q, params.c, params.torus
    nu = params.nu
    if flow is FlowId.INOZ:
        return p, _wp_sum([2 * x * x for x in nu], q, T, True)
    if flow is FlowId.VD8:
        pairs = _eta_pairs(q, params, False), _eta_pairs(q, params, True)
        (a, _, b, _), (ab, _, bb, _) = pairs
        e = cmath.exp(p / c)
        qd = (a * ab * e - b * bb / e) / c
        return qd, -_dq_h8(state, params, pairs)
    a, da, b, db = _eta_pairs(q, params, False)
    if flow is FlowId.VD4_1:
        e = cmath.exp(p / (2 * c))
        return (a * e - b / e) / (2 * c), -da * e + db / e
    e = cmath.exp(p / c)
    qd = (a * a * e - b * b / e) / (2 * c)
    pd = -a * da * e + b * db / e + _wp_sum([x * x for x in nu], q, T, True)
    return qd, pd


def gradient_residual(flow: FlowId, state: PhaseState, params: ModelParams) -> float:
    """Closed-form vector field against finite-difference gradients of the Hamiltonian."""
    flow = FlowId(flow)
    qd, pd = equations_of_motion(flow, state, params)
    dh_dp = derivative(lambda s: hamiltonian(flow, PhaseState(s, state.q), params), state.p)
    dh_dq = derivative(lambda s: hamiltonian(flow, PhaseState(state.p, s), params), state.q)
    return max(rel_residual(qd, dh_dp), rel_residual(pd, -dh_dq))


def _m8(z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    V, Vp, eta = _vv(params, False)
    Vb, Vbp, etab = _vv(params, True)
    p, q, c = state.p, state.q, params.c
    h = _dq_h8(state, params) / 4
    e1 = cmath.exp(p / c)
    eh = cmath.exp(p / (2 * c))
    m11 = -Vp(eta, q) * Vb(etab, q) * e1 + Vbp(z, -q) * V(z, q) + h
    m12 = V(eta, q) * Vbp(z, q) * eh + Vb(etab, -q) * Vp(z, q) / eh
    m21 = V(eta, -q) * Vbp(z, -q) / eh + Vb(etab, q) * Vp(z, -q) * eh
    m22 = -Vp(eta, -q) * Vb(etab, -q) / e1 + Vbp(z, q) * V(z, -q) - h
    return mat2(m11, m12, m21, m22) / c


def m_matrix(flow: FlowId, z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    flow = FlowId(flow)
    if flow is FlowId.VD8:
        return _m8(z, state, params)
    if flow is FlowId.INOZ:
        nd, T = params.nu.dual(), params.torus
        dv = [derivative(lambda x: v(x, z, nd, T), s * state.q) for s in (1, -1)]
        return mat2(0, dv[0], dv[1], 0)
    _, Vp, _ = _vv(params, False)
    m1 = mat2(0, Vp(z, state.q), Vp(z, -state.q), 0) / (2 * params.c)
    if flow is FlowId.VD4_1:
        return m1
    return h1(state, params) * m1


def lax_time_derivative(flow: FlowId, z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    """dL/dt by the chain rule with finite-difference partials of L."""
    qd, pd = equations_of_motion(flow, state, params)
    dLdp = derivative(lambda s: lax_matrix(flow, z, PhaseState(s, state.q), params), state.p)
    dLdq = derivative(lambda s: lax_matrix(flow, z, PhaseState(state.p, s), params), state.q)
    return dLdq * qd + dLdp * pd


def lax_residual(flow: FlowId, z: complex, state: PhaseState, params: ModelParams,
                 relative: bool = True, sign: int = 1) -> float:
    """Residual of dL/dt = [L, M] (``sign = -1`` tests the opposite ordering [M, L]).

    ``relative`` divides by max(1, |dL/dt|, |[L, M]|); the absolute max-norm is
    available for comparison but grows with the scale of dL/dt.
    """
    lhs = lax_time_derivative(flow, z, state, params)
    L = lax_matrix(flow, z, state, params)
    rhs = commutator(L, m_matrix(flow, z, state, params))
    if sign < 0:
        rhs = -rhs
    if relative:
        return rel_residual(lhs, rhs)
    return float(np.max(np.abs(lhs - rhs)))


# ---- reductions and limits ---------------------------------------------------

def rs_lax_reduced(z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    """Centre-of-mass two-particle Ruijsenaars-Schneider Lax matrix."""
    T, p, q, c, eta = params.torus, state.p, state.q, params.c, params.eta
    e = cmath.exp(p / c)
    return mat2(
        kronecker_phi(eta, 2 * q, T) * e,
        kronecker_phi(z, 2 * q, T),
        kronecker_phi(z, -2 * q, T),
        kronecker_phi(eta, -2 * q, T) / e,
    )


def _inoz(z: complex, P: complex, q: complex, nu: CouplingSet, torus: Torus) -> np.ndarray:
    nd = nu.dual()
    return mat2(P / 2, v(q, z, nd, torus), v(-q, z, nd, torus), -P / 2)


def inozemtsev_lax(z: complex, state: PhaseState, params: ModelParams) -> np.ndarray:
    """Traceless Calogero-Inozemtsev Lax matrix; off-diagonals are written with the dual couplings."""
    return _inoz(z, state.p, state.q, params.nu, params.torus)


def limit_momentum(P: complex, q: complex, nu: CouplingSet, torus: Torus) -> complex:
    """Relativistic momentum whose large-c expansion starts at the Inozemtsev momentum P."""
    nd = nu.dual()
    shift = nd[0] * eisenstein(1, 2 * q, torus) + sum(nd[k] * phi_alpha(k, 2 * q, torus) for k in (1, 2, 3))
    return P - 2 * shift


def limit_check(c_values, z: complex, state: PhaseState, nu: CouplingSet, torus: Torus) -> list:
    """[(c, r(c))] with r(c) = |L(z) - c 1 - L_Inoz(z)|, eta = kappa / c, kappa = dual nu_0.

    ``state`` carries the Inozemtsev momentum P and position q.
    """
    kappa = nu.dual()[0]
    if kappa == 0:
        raise ValueError("the limit needs a nonzero leading dual coupling")
    target = _inoz(z, state.p, state.q, nu, torus)
    p_rel = limit_momentum(state.p, state.q, nu, torus)
    rows = []
    for c in c_values:
        params = ModelParams(c, kappa / c, nu, torus)
        L = _factor(z, PhaseState(p_rel, state.q), params, False)
        rows.append((c, float(np.max(np.abs(L - c * np.eye(2) - target)))))
    return rows


# ---- integration ---------------------------------------------------------------

@dataclass
class Trajectory:
    flow: str
    dt: float
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    spectral: list = field(default_factory=list)
    trace1: list = field(default_factory=list)
    trace2: list = field(default_factory=list)
    aborted: bool = False
    reason: str = ""

    INVARIANTS = ("energy", "spectral", "trace1", "trace2")

    def drift(self, series: str) -> float:
        values = getattr(self, series)
        if not values:
            return 0.0
        ref = values[0]
        return max(abs(x - ref) for x in values) / max(abs(ref), 1e-300)

    def drifts(self) -> dict:
        return {name: self.drift(name) for name in self.INVARIANTS}


def _pole_guard(state: PhaseState, torus: Torus) -> None:
    if lattice_distance(2 * state.q, torus) < POLE_APPROACH:
        raise NearPoleError(f"2q = {2 * state.q} approached the period lattice")


def integrate(flow: FlowId, state0: PhaseState, params: ModelParams, dt: float, steps: int,
              probe: complex = Z_STAR, strict: bool = False) -> Trajectory:
    """Fixed-step RK4 recording H, det L(probe), tr L(probe) and tr L(probe)^2 at every step.

    On pole approach the partial trajectory is returned with ``aborted`` set,
    or PoleApproachError is raised when ``strict``.
    """
    flow = FlowId(flow)
    if steps < 0:
        raise ValueError("steps must be nonnegative")

    def field_(y):
        qd, pd = equations_of_motion(flow, PhaseState.from_array(y), params)
        return np.array([pd, qd], dtype=complex)

    traj = Trajectory(flow=flow.value, dt=dt)

    def record(t, s):
        traj.times.append(t)
        traj.states.append(s)
        traj.energy.append(hamiltonian(flow, s, params))
        lax = lax_matrix(flow, probe, s, params)
        traj.spectral.append(det2(lax))
        traj.trace1.append(complex(np.trace(lax)))
        traj.trace2.append(complex(np.trace(lax @ lax)))

    y = state0.as_array()
    try:
        _pole_guard(state0, params.torus)
        record(0.0, state0)
        for n in range(1, steps + 1):
            y = rk4_step(field_, y, dt)
            s = PhaseState.from_array(y)
            _pole_guard(s, params.torus)
            record(n * dt, s)
    except (NearPoleError, ZeroDivisionError, OverflowError) as exc:
        traj.aborted = True
        traj.reason = str(exc)
        if strict:
            raise PoleApproachError(traj.reason, traj) from exc
    return traj


CSV_HEADER = ("t", "re_p", "im_p", "re_q", "im_q", "re_H", "im_H", "re_det", "im_det")


def write_csv(traj: Trajectory, path) -> None:
    """One row per completed step; the initial point lives in the run summary."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        rows = zip(traj.times, traj.states, traj.energy, traj.spectral)
        next(rows, None)
        for t, s, h, d in rows:
            w.writerow([repr(t), repr(s.p.real), repr(s.p.imag), repr(s.q.real), repr(s.q.imag),
                        repr(h.real), repr(h.imag), repr(d.real), repr(d.imag)])

"""IRF-Vertex gauge matrices and the maps from (p, q) to gyrostat generators."""

from __future__ import annotations

import cmath

import numpy as np

from .elliptic import Torus, check_pole, phi_alpha, theta, theta_2tau, weierstrass_p
from .gyrostat import GyrostatParams, SpinState, Structure, bracket, casimirs, lax_zhv
from .matrix import det2, inv2, mat2
from .numerics import bracket_terms, poisson_bracket, rel_residual
from .potential import CouplingSet, v
from .vandiejen import ModelParams, PhaseState, inozemtsev_lax, lax_product, lax_symmetric
from .xyz import bold_generators, lax_bold


def xi_matrix(z: complex, q: complex, torus: Torus, eta_shift: complex = 0j) -> np.ndarray:
    """Theta matrix at modulus 2 tau; eta_shift moves z to z + eta_shift."""
    x = z + eta_shift
    return mat2(
        theta_2tau(3, x - 2 * q, torus), -theta_2tau(3, x + 2 * q, torus),
        -theta_2tau(2, x - 2 * q, torus), theta_2tau(2, x + 2 * q, torus),
    )


def xi_inverse(z: complex, q: complex, torus: Torus, eta_shift: complex = 0j) -> np.ndarray:
    return inv2(xi_matrix(z, q, torus, eta_shift))


def conjugate(m: np.ndarray, z: complex, q: complex, torus: Torus, eta_shift: complex = 0j) -> np.ndarray:
    xi = xi_matrix(z, q, torus, eta_shift)
    return xi @ m @ inv2(xi)


def lambda_from_couplings(nu: CouplingSet, torus: Torus) -> tuple:
    nd = nu.dual()
    cs = torus.constants
    return tuple(nd[a] / cs[a - 1] for a in (1, 2, 3))


def _spin_vector(half_diff: complex, q: complex, nu: CouplingSet, torus: Torus) -> list:
    nd = nu.dual()
    cs = torus.constants
    ph = [None] + [phi_alpha(a, 2 * q, torus) for a in (1, 2, 3)]
    tail = sum(nd[k] * ph[k] for k in (1, 2, 3))
    out = []
    for a in (1, 2, 3):
        b, g = [k for k in (1, 2, 3) if k != a]
        out.append(cs[a - 1] * (half_diff * ph[a] + nd[0] * ph[b] * ph[g] + ph[a] * tail))
    return out


def spin_from_phase(state: PhaseState, eta: complex, nu: CouplingSet, c: complex, torus: Torus):
    """(SpinState, lambda) for the relativistic change of variables."""
    p, q = state.p, state.q
    check_pole(2 * q, torus, "2q")
    ep = cmath.exp(p / (2 * c))
    a = v(eta, q, nu, torus) * ep
    b = v(eta, -q, nu, torus) / ep
    s = _spin_vector(0.5 * (a - b), q, nu, torus)
    return SpinState(0.5 * (a + b), *s), lambda_from_couplings(nu, torus)


def spin_from_phase_breve(state: PhaseState, eta: complex, nu: CouplingSet, c: complex, torus: Torus):
    """Same map written with the breve potential v(u, z | dual nu) with swapped arguments."""
    nd = nu.dual()
    p, q = state.p, state.q
    ep = cmath.exp(p / (2 * c))
    a = v(q, eta, nd, torus) * ep
    b = v(-q, eta, nd, torus) / ep
    s = _spin_vector(0.5 * (a - b), q, nu, torus)
    return SpinState(0.5 * (a + b), *s), lambda_from_couplings(nu, torus)


def spin_from_phase_nonrel(state: PhaseState, nu: CouplingSet, torus: Torus):
    """Non-relativistic map: P/2 replaces the half difference, no S_0."""
    check_pole(2 * state.q, torus, "2q")
    s = _spin_vector(0.5 * state.p, state.q, nu, torus)
    return SpinState(0, *s), lambda_from_couplings(nu, torus)


def gyrostat_params(params: ModelParams, bar: bool = False) -> GyrostatParams:
    nu = params.nu_bar if bar else params.nu
    return GyrostatParams(lambda_from_couplings(nu, params.torus), params.c, params.torus)


def _spin(state: PhaseState, params: ModelParams, bar: bool = False) -> SpinState:
    eta = params.eta_bar if bar else params.eta
    nu = params.nu_bar if bar else params.nu
    return spin_from_phase(state, eta, nu, params.c, params.torus)[0]


def theorem1_matrices(z: complex, state: PhaseState, params: ModelParams):
    lax = lax_symmetric(z, state, params)[0]
    gauged = conjugate(lax, z, state.q, params.torus)
    target = lax_zhv(z, _spin(state, params), gyrostat_params(params))
    return lax, gauged, target


def verify_theorem1(z: complex, state: PhaseState, params: ModelParams) -> float:
    _, gauged, target = theorem1_matrices(z, state, params)
    return rel_residual(gauged, target)


def spectral_invariance(z: complex, state: PhaseState, params: ModelParams) -> float:
    """Largest relative mismatch of (tr, det) between L and the gyrostat Lax matrix at S(p, q)."""
    lax, _, target = theorem1_matrices(z, state, params)
    return max(rel_residual(np.trace(lax), np.trace(target)), rel_residual(det2(lax), det2(target)))


def _det_wide(m: np.ndarray):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def similarity_invariance(z: complex, state: PhaseState, params: ModelParams) -> float:
    """(tr, det) of L against Xi L Xi^{-1}.

    Products and determinants run in extended precision from the double inputs;
    in double precision the determinant loses digits to cancellation near poles.
    """
    lax = lax_symmetric(z, state, params)[0].astype(np.clongdouble)
    xi = xi_matrix(z, state.q, params.torus).astype(np.clongdouble)
    adj = np.array([[xi[1, 1], -xi[0, 1]], [-xi[1, 0], xi[0, 0]]])
    gauged = xi @ lax @ adj / _det_wide(xi)
    pairs = ((np.trace(lax), np.trace(gauged)), (_det_wide(lax), _det_wide(gauged)))
    return max(float(abs(a - b) / max(1.0, abs(a), abs(b))) for a, b in pairs)


def numeric_poisson_bracket(F, G, state: PhaseState, h: float | None = None, richardson: bool = True) -> complex:
    """{F, G} for observables on PhaseState."""
    return poisson_bracket(lambda p, q: F(PhaseState(p, q)), lambda p, q: G(PhaseState(p, q)),
                           state.p, state.q, h, richardson)


def involution_residual(F, G, state: PhaseState) -> float:
    """Residual of {F, G} = 0 posed as dF/dp dG/dq = dF/dq dG/dp."""
    left, right = bracket_terms(lambda p, q: F(PhaseState(p, q)), lambda p, q: G(PhaseState(p, q)),
                                state.p, state.q)
    return rel_residual(left, right)


def quadratic_casimir_residual(generators, weights, g: int, state: PhaseState) -> float:
    """{C, S_g} = 0 for C = sum_b w_b S_b^2, expanded by Leibniz into 2 w_b S_b {S_b, S_g}.

    The sum is measured against its largest term; numeric brackets carry the dynamics.
    """
    values = generators(state)
    terms = [2 * w * values[b] * numeric_poisson_bracket(lambda st, b=b: generators(st)[b],
                                                          lambda st: generators(st)[g], state)
             for b, w in enumerate(weights) if w != 0 and b != g]
    scale = max([1.0] + [abs(t) for t in terms])
    return abs(sum(terms)) / scale


def generator_observable(a: int, params: ModelParams, bar: bool = False):
    return lambda s: _spin(s, params, bar)[a]


def theorem2_table(state: PhaseState, params: ModelParams, h: float | None = None,
                   richardson: bool = True) -> tuple:
    """(numeric 4x4 table, exact 4x4 table) of {S_a, S_b}."""
    spin = _spin(state, params)
    gp = gyrostat_params(params)
    obs = [generator_observable(a, params) for a in range(4)]
    numeric = np.zeros((4, 4), dtype=complex)
    exact = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            if a != b:
                numeric[a, b] = numeric_poisson_bracket(obs[a], obs[b], state, h, richardson)
            exact[a, b] = bracket(Structure.QUADRATIC, a, b, spin, gp)
    return numeric, exact


def table_residual(numeric: np.ndarray, exact: np.ndarray) -> float:
    return max(rel_residual(numeric[a, b], exact[a, b]) for a in range(4) for b in range(4))


def verify_theorem2(state: PhaseState, params: ModelParams) -> float:
    return table_residual(*theorem2_table(state, params))


def theorem2_convergence_ratio(state: PhaseState, params: ModelParams, h: float = 0.01) -> float:
    """Error ratio of the plain 4th-order stencil at h and h/2 (about 16 when in the asymptotic regime)."""
    e1 = table_residual(*theorem2_table(state, params, h, richardson=False))
    e2 = table_residual(*theorem2_table(state, params, h / 2, richardson=False))
    return e1 / e2


def casimir_values(state: PhaseState, params: ModelParams) -> tuple:
    """((C1, C2) on S(p, q), (C1, C2) predicted from the couplings)."""
    spin = _spin(state, params)
    got = casimirs(spin, gyrostat_params(params))
    nd = params.nu.dual()
    T = params.torus
    wp_eta = [weierstrass_p(params.eta + T.omega[a], T) for a in range(4)]
    pred2 = sum(nd[a] ** 2 * wp_eta[a] for a in range(4)) - sum(nd[a] ** 2 * T.wp_half[a - 1] for a in (1, 2, 3))
    return got, (nd[0] ** 2, pred2)


def verify_coupled(z: complex, state: PhaseState, params: ModelParams) -> float:
    gauged = conjugate(lax_product(z, state, params), z, state.q, params.torus)
    left = lax_zhv(z, _spin(state, params), gyrostat_params(params))
    right = lax_zhv(z, _spin(state, params, bar=True), gyrostat_params(params, bar=True))
    return rel_residual(gauged, left @ right)


def mixed_bracket_table(state: PhaseState, params: ModelParams) -> np.ndarray:
    """Numeric {S_a, S-bar_b}; no closed form is asserted."""
    obs = [generator_observable(a, params) for a in range(4)]
    obs_bar = [generator_observable(b, params, bar=True) for b in range(4)]
    return np.array([[numeric_poisson_bracket(obs[a], obs_bar[b], state) for b in range(4)] for a in range(4)])


def verify_inozemtsev_gauge(z: complex, state: PhaseState, nu: CouplingSet, torus: Torus) -> float:
    params = ModelParams(1.0, 0.25, nu, torus)
    spin, lam = spin_from_phase_nonrel(state, nu, torus)
    gauged = conjugate(inozemtsev_lax(z, state, params), z, state.q, torus)
    target = lax_zhv(z, spin, GyrostatParams(lam, 1.0, torus), include_s0=False)
    return rel_residual(gauged, target)


def inozemtsev_linear_brackets(state: PhaseState, nu: CouplingSet, torus: Torus) -> tuple:
    """(numeric, exact) 3x3 tables of {S_alpha, S_beta} for the non-relativistic map."""
    gp = GyrostatParams(lambda_from_couplings(nu, torus), 1.0, torus)
    spin = spin_from_phase_nonrel(state, nu, torus)[0]
    numeric = np.zeros((3, 3), dtype=complex)
    exact = np.zeros((3, 3), dtype=complex)
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            if a != b:
                numeric[a - 1, b - 1] = numeric_poisson_bracket(
                    lambda s, a=a: spin_from_phase_nonrel(s, nu, torus)[0][a],
                    lambda s, b=b: spin_from_phase_nonrel(s, nu, torus)[0][b], state)
            exact[a - 1, b - 1] = bracket(Structure.LINEAR, a, b, spin, gp)
    return numeric, exact


# ---------------------------------------------------------------------------
# the lax_chalykh factor written in Sklyanin generators


def _ratio(j: int, k: int, x: complex, torus: Torus) -> complex:
    return theta(j, x, torus) / theta(k, x, torus)


def theorem3_closed_form(z: complex, bold, nu_breve: CouplingSet, eta: complex, torus: Torus) -> np.ndarray:
    """Entries of the gauged factor through bold generators (corrected signs)."""
    n, S = nu_breve, bold

    def rr(j, k):
        return _ratio(j, k, eta, torus) * _ratio(j, k, z, torus)

    total = sum(n[a] * S[a] for a in range(4))
    e11 = (total - n[0] * S[1] * rr(2, 1) - n[1] * S[0] * rr(1, 2)
           - n[2] * S[3] * rr(4, 3) - n[3] * S[2] * rr(3, 4))
    a_ = (-n[0] * S[2] * rr(3, 1) + n[1] * S[3] * rr(4, 2)
          + n[2] * S[0] * rr(1, 3) - n[3] * S[1] * rr(2, 4))
    b_ = (-n[0] * S[3] * rr(4, 1) + n[1] * S[2] * rr(3, 2)
          + n[2] * S[1] * rr(2, 3) - n[3] * S[0] * rr(1, 4))
    return mat2(e11, a_ + b_, -a_ + b_, 2 * total - e11)


def theorem3_closed_form_printed(z: complex, bold, nu_breve: CouplingSet, eta: complex, torus: Torus) -> np.ndarray:
    """The same entries with the printed signs."""
    n, S = nu_breve, bold

    def rr(j, k):
        return _ratio(j, k, eta, torus) * _ratio(j, k, z, torus)

    total = sum(n[a] * S[a] for a in range(4))
    e11 = (total - n[0] * S[1] * rr(2, 1) + n[1] * S[0] * rr(1, 2)
           - n[2] * S[3] * rr(4, 3) - n[3] * S[2] * rr(3, 4))
    a_ = (-n[0] * S[2] * rr(3, 1) + n[1] * S[3] * rr(4, 2)
          - n[2] * S[0] * rr(1, 3) + n[3] * S[1] * rr(2, 4))
    b_ = (-n[0] * S[3] * rr(4, 1) + n[1] * S[2] * rr(3, 2)
          + n[2] * S[1] * rr(2, 3) + n[3] * S[0] * rr(1, 4))
    return mat2(e11, a_ + b_, -a_ + b_, 2 * total - e11)


def verify_theorem3(z: complex, state: PhaseState, params: ModelParams, which: str = "L") -> dict:
    """Residuals of the closed form against the gauged bold factor.

    ``conjugation``: Xi_eta L Xi_eta^{-1} vs corrected signs (the normative check).
    ``product``: Xi_eta L Xi_eta vs printed signs, kept for the record.
    ``which = "Lbar"`` runs the same check on the barred factor with barred constants.
    """
    if which not in ("L", "Lbar"):
        raise ValueError("which must be 'L' or 'Lbar'")
    p = params.barred() if which == "Lbar" else params
    T = p.torus
    lax = lax_bold(z, state, p.eta, p.nu, p.c, T)
    xi = xi_matrix(z, state.q, T, p.eta)
    bold = bold_generators(state, p.eta, p.c, T)
    nd = p.nu.dual()
    closed = theorem3_closed_form(z, bold, nd, p.eta, T)
    printed = theorem3_closed_form_printed(z, bold, nd, p.eta, T)
    conj = xi @ lax @ inv2(xi)
    return {
        "conjugation": rel_residual(conj, closed),
        "product": rel_residual(xi @ lax @ xi, printed),
        "trace_sum": rel_residual(closed[0, 0] + closed[1, 1], 2 * sum(nd[a] * bold[a] for a in range(4))),
    }


def conjugation_closed_form(a_fn, b_fn, q: complex, p: complex, z: complex, torus: Torus) -> np.ndarray:
    """Xi A Xi^{-1} for A = [[a(q,p,z), b(q,p,z)], [b(-q,-p,z), a(-q,-p,z)]], entrywise.

    Off-diagonal entries carry the prefactor -1/(2 theta(z) theta(2q)).
    """
    t = lambda k, x: theta(k, x, torus)  # noqa: E731
    th0 = torus.theta_zero

    def half(sq):
        qq, pp = sq * q, sq * p
        a, b = a_fn(qq, pp, z), b_fn(qq, pp, z)
        den = 2 * t(1, z) * t(1, 2 * qq)
        d11 = -(a * t(2, z) * t(2, 2 * qq) + b * th0[1] * t(2, z - 2 * qq)) / den + 0.5 * a
        d22 = (a * t(2, z) * t(2, 2 * qq) + b * th0[1] * t(2, z - 2 * qq)) / den + 0.5 * a
        d12 = -(a * (t(3, z) * t(3, 2 * qq) + t(4, z) * t(4, 2 * qq))
               + b * (th0[2] * t(3, z - 2 * qq) + th0[3] * t(4, z - 2 * qq))) / den
        d21 = -(a * (-t(3, z) * t(3, 2 * qq) + t(4, z) * t(4, 2 * qq))
               + b * (-th0[2] * t(3, z - 2 * qq) + th0[3] * t(4, z - 2 * qq))) / den
        return mat2(d11, d12, d21, d22)

    return half(1) + half(-1)


def symmetric_form(a_fn, b_fn, q: complex, p: complex, z: complex) -> np.ndarray:
    return mat2(a_fn(q, p, z), b_fn(q, p, z), b_fn(-q, -p, z), a_fn(-q, -p, z))

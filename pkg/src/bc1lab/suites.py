"""Verification suites: each produces VerificationRecords from seeded random scenes."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import gauge, gyrostat, identities, vandiejen, xyz
from .config import RunConfig
from .elliptic import Torus, weierstrass_p
from .errors import NearPoleError, SingularError, ZeroDenominatorError
from .gyrostat import GyrostatParams, SpinState, Structure
from .matrix import det2, inv2
from .numerics import rel_residual
from .potential import CouplingSet
from .records import VerificationRecord, digest
from .rng import complex_box, draw, guard, guard_half, stream, torus_point
from .vandiejen import FlowId, ModelParams, PhaseState

LAX_FLOWS = (FlowId.VD8, FlowId.VD4_1, FlowId.VD4_2, FlowId.INOZ)
LIMIT_PAIRS = ((100.0, 200.0), (1000.0, 2000.0))


@dataclass
class Scene:
    z: complex
    w: complex
    state: PhaseState
    state2: PhaseState
    params: ModelParams
    spin: SpinState
    gparams: GyrostatParams
    rho_plus: tuple
    rho_minus: tuple

    @property
    def torus(self) -> Torus:
        return self.params.torus


def _couplings(gen, radius: float) -> CouplingSet:
    return CouplingSet(tuple(complex_box(gen, radius) for _ in range(4)))


def scene_sampler(torus: Torus, radius: float = 1.0):
    """Sampler for draw(): one random configuration away from every singular locus."""

    def sample(gen) -> Scene:
        z, w, q, q2, eta, eta_bar = (torus_point(gen, torus) for _ in range(6))
        for x in (z, w, q, q2, eta, eta_bar):
            guard_half(torus, x)
        guard(torus, z + w, z - w, z + eta, z + eta_bar)
        guard_half(torus, z + w)
        guard_half(torus, z - w)
        c = complex(gen.uniform(0.5, 1.5), gen.uniform(-0.5, 0.5))
        p, p2 = complex_box(gen), complex_box(gen)
        nu, nu_bar = _couplings(gen, radius), _couplings(gen, radius)
        params = ModelParams(c, eta, nu, torus, eta_bar, nu_bar)
        spin = SpinState(*(complex_box(gen) for _ in range(4)))
        lam = tuple(complex_box(gen) for _ in range(3))
        rho_plus = tuple(complex_box(gen) for _ in range(3))
        rho_minus = tuple(complex_box(gen) for _ in range(3))
        return Scene(z, w, PhaseState(p, q), PhaseState(p2, q2), params, spin, GyrostatParams(lam, c, torus), rho_plus, rho_minus)

    return sample


def _run(cfg: RunConfig, suite: str, tag: str, count: int, evaluate, tolerance: float,
         sampler=None, details=None) -> VerificationRecord:
    """Draw ``count`` scenes from the (suite, tag) stream and record the worst residual.

    ``evaluate`` returns a float residual or a (residual, extra) pair; extras are
    handed to ``details`` (a callable) when given.
    """
    gen = stream(cfg.seed, f"{suite}:{tag}")
    sampler = sampler or scene_sampler(cfg.torus, cfg.coupling_radius)
    start = time.perf_counter()

    def guarded(scene):
        try:
            return evaluate(scene)
        except (SingularError, ZeroDenominatorError) as exc:
            raise NearPoleError(str(exc)) from exc

    values, attempted = draw(gen, sampler, guarded, count)
    extras = [v[1] for v in values if isinstance(v, tuple)]
    residuals = [float(v[0] if isinstance(v, tuple) else v) for v in values]
    worst = max(residuals) if residuals else 0.0
    if any(math.isnan(r) for r in residuals):
        worst = math.inf
    rec = VerificationRecord(
        suite=suite, tag=tag, samples_attempted=attempted, samples_accepted=len(values),
        max_residual=worst, tolerance=tolerance, seed=cfg.seed,
        params_digest=digest({"tau": cfg.tau, "radius": cfg.coupling_radius, "suite": suite, "tag": tag}),
        wall_time=time.perf_counter() - start,
        details=details(extras) if details else {},
    )
    return rec


def _single(cfg: RunConfig, suite: str, tag: str, residual: float, tolerance: float, details=None,
            params=None, wall_time: float = 0.0) -> VerificationRecord:
    return VerificationRecord(
        suite=suite, tag=tag, samples_attempted=1, samples_accepted=1, max_residual=float(residual),
        tolerance=tolerance, seed=cfg.seed, params_digest=digest(params or {"tau": cfg.tau, "tag": tag}),
        wall_time=wall_time, details=details or {},
    )


# ---- identity battery -----------------------------------------------------------

def identity_records(cfg: RunConfig) -> list:
    n = cfg.samples["identities"]
    out = []
    for ident in identities.IdentityId:
        suite = "potential_v" if ident in identities.POTENTIAL_IDS else "elliptic_core"
        out.append(identities.verify_identity(ident, n, cfg.seed, cfg.torus, cfg.tolerance(suite)))
    return out


# ---- van Diejen ---------------------------------------------------------------------

def vandiejen_records(cfg: RunConfig) -> list:
    tol = cfg.tolerance("vandiejen")
    out = []
    for flow in LAX_FLOWS:
        def lax(s, flow=flow):
            return (vandiejen.lax_residual(flow, s.z, s.state, s.params),
                    vandiejen.lax_residual(flow, s.z, s.state, s.params, sign=-1))

        out.append(_run(cfg, "vandiejen", f"lax:{flow.value}", cfg.samples["lax"], lax, tol,
                        details=lambda ex: {"ordering": "dL/dt = L M - M L",
                                            "opposite_ordering_min_residual": min(ex)}))
    for flow in FlowId:
        out.append(_run(cfg, "vandiejen", f"gradient:{flow.value}", cfg.samples["gradient"],
                        lambda s, flow=flow: vandiejen.gradient_residual(flow, s.state, s.params),
                        cfg.tolerance("gradient")))

    def chalykh(s):
        d = vandiejen.chalykh_gauge(s.state, s.params)
        gauged = d @ vandiejen.lax_product(s.z, s.state, s.params) @ inv2(d)
        return rel_residual(vandiejen.lax_chalykh(s.z, s.state, s.params), gauged)

    out.append(_run(cfg, "vandiejen", "chalykh_gauge", cfg.samples["gauge"], chalykh, cfg.tolerance("exact")))

    rs_nu = CouplingSet((1, 0, 0, 0)).dual()

    def rs(s):
        p = s.params
        reduced = ModelParams(p.c / 2, p.eta, rs_nu, p.torus)
        return rel_residual(vandiejen.rs_lax_reduced(s.z, s.state, p),
                            vandiejen.lax_symmetric(s.z, s.state, reduced)[0])

    out.append(_run(cfg, "vandiejen", "rs_reduction", cfg.samples["gauge"], rs, cfg.tolerance("exact")))

    def commute(s):
        h1 = lambda st: vandiejen.hamiltonian(FlowId.VD4_1, st, s.params)  # noqa: E731
        h2 = lambda st: vandiejen.hamiltonian(FlowId.VD4_2, st, s.params)  # noqa: E731
        return gauge.involution_residual(h1, h2, s.state)

    out.append(_run(cfg, "vandiejen", "h1_h2_commute", cfg.samples["gauge"], commute, cfg.tolerance("commuting")))

    def offset(quantity):
        # quantity(z, state, params) minus its Hamiltonian must not depend on the state
        def evaluate(s):
            return rel_residual(quantity(s.z, s.state, s.params), quantity(s.z, s.state2, s.params))
        return evaluate

    def chalykh_trace(z, st, p):
        return np.trace(vandiejen.lax_chalykh(z, st, p)) - vandiejen.hamiltonian(FlowId.VD8, st, p)

    def half_trace_square(z, st, p):
        lax = vandiejen.lax_matrix(FlowId.VD4_2, z, st, p)
        return 0.5 * np.trace(lax @ lax) - vandiejen.hamiltonian(FlowId.VD4_2, st, p)

    def h1_product(z, st, p):
        # holds on the slice eta_bar = eta only
        p = ModelParams(p.c, p.eta, p.nu, p.torus, p.eta, p.nu_bar)
        return vandiejen.h1(st, p) * vandiejen.h1(st, p, bar=True) - vandiejen.hamiltonian(FlowId.VD8, st, p)

    indep = cfg.tolerance("state_independence")
    for tag, quantity in (("chalykh_trace_offset", chalykh_trace), ("h2_trace_offset", half_trace_square),
                          ("h1_product_offset", h1_product)):
        out.append(_run(cfg, "vandiejen", tag, cfg.samples["gauge"], offset(quantity), indep))
    return out


def limit_records(cfg: RunConfig) -> list:
    """Halving of the distance to the Inozemtsev matrix as c doubles."""
    out = []
    for c1, c2 in LIMIT_PAIRS:
        def ratio(s, c1=c1, c2=c2):
            nu = s.params.nu
            if abs(nu.dual()[0]) < 0.1:
                raise NearPoleError("leading dual coupling too small for the limit")
            rows = vandiejen.limit_check((c1, c2), s.z, PhaseState(s.state.p, s.state.q), nu, s.torus)
            r = rows[1][1] / rows[0][1]
            return abs(r - 0.5), r

        out.append(_run(cfg, "limit", f"halving:c={c1:g}", 10, ratio, cfg.tolerance("limit"),
                        details=lambda ex: {"ratios": sorted(ex)}))
    return out


# ---- gyrostat -----------------------------------------------------------------------------

def gyrostat_records(cfg: RunConfig) -> list:
    tol = cfg.tolerance("gyrostat")
    n = cfg.samples["reflection"]
    out = [
        _run(cfg, "gyrostat", "lax", cfg.samples["lax"],
             lambda s: gyrostat.lax_residual(s.z, s.spin, s.gparams), cfg.tolerance("vandiejen")),
        _run(cfg, "gyrostat", "reflection:linear", n,
             lambda s: max(gyrostat.reflection_residual(Structure.LINEAR, s.z, s.w, s.spin, s.gparams, flag)
                           for flag in (True, False)), tol),
        _run(cfg, "gyrostat", "reflection:quadratic", n,
             lambda s: gyrostat.reflection_residual(Structure.QUADRATIC, s.z, s.w, s.spin, s.gparams), tol),
        _run(cfg, "gyrostat", "reflection:k_matrix", n,
             lambda s: max(
                 xyz.k_reflection_residual(s.z, s.w, s.rho_plus, s.torus),
                 *(gyrostat.reflection_residual(Structure.QUADRATIC, s.z, s.w, SpinState(1, 0, 0, 0),
                                                GyrostatParams(tuple(sg * x for x in s.rho_plus), s.params.c, s.torus))
                   for sg in (1, -1))), tol),
        _run(cfg, "gyrostat", "casimir_brackets", n,
             lambda s: gyrostat.casimir_bracket_residual(Structure.QUADRATIC, s.spin, s.gparams),
             cfg.tolerance("exact")),
        _run(cfg, "gyrostat", "jacobi", 10,
             lambda s: max(gyrostat.jacobi_residual(Structure.QUADRATIC, s.spin, s.gparams),
                           gyrostat.jacobi_residual(Structure.LINEAR, s.spin, s.gparams)), tol),
        _run(cfg, "gyrostat", "determinant", n,
             lambda s: rel_residual(det2(gyrostat.lax_zhv(s.z, s.spin, s.gparams)),
                                    gyrostat.determinant_closed_form(s.z, s.spin, s.gparams)), tol),
        _run(cfg, "gyrostat", "trace_square", n, _trace_square, tol),
        _run(cfg, "gyrostat", "flow_generators", n, _flow_generators, tol,
             details=lambda ex: {"linear_factor": 2, "quadratic_factor": "2c"}),
    ]
    return out


def _trace_square(s: Scene) -> float:
    lax = gyrostat.lax_zhv(s.z, s.spin, s.gparams, include_s0=False)
    c1, _ = gyrostat.casimirs(s.spin, s.gparams)
    lhs = 0.25 * np.trace(lax @ lax) - gyrostat.trace_square_tail(s.z, s.gparams)
    return rel_residual(lhs, 0.5 * c1 * weierstrass_p(s.z, s.torus) + gyrostat.hamiltonian_zhv(s.spin, s.gparams))


def _flow_generators(s: Scene) -> float:
    """S' = 2 {S, H}_linear = 2c {S, S_0}_quadratic."""
    sdot = gyrostat.gyrostat_eom(s.spin, s.gparams).as_array()
    lam = s.gparams.lam
    wp = s.torus.wp_half
    grad_h = [0] + [-s.spin[a] * wp[a - 1] - lam[a - 1] for a in (1, 2, 3)]
    lin = np.array([sum(gyrostat.bracket(Structure.LINEAR, a, b, s.spin, s.gparams) * grad_h[b]
                        for b in range(4)) for a in range(4)])
    quad = np.array([gyrostat.bracket(Structure.QUADRATIC, a, 0, s.spin, s.gparams) for a in range(4)])
    return max(rel_residual(sdot, 2 * lin), rel_residual(sdot, 2 * s.gparams.c * quad))


# ---- gauge maps ---------------------------------------------------------------------------

def gauge_records(cfg: RunConfig) -> list:
    tol = cfg.tolerance("gauge")
    n = cfg.samples["gauge"]
    out = [
        _run(cfg, "gauge", "theorem1", cfg.samples["theorem1"],
             lambda s: gauge.verify_theorem1(s.z, s.state, s.params), tol),
        _run(cfg, "gauge", "theorem1:similarity", cfg.samples["theorem1"],
             lambda s: gauge.similarity_invariance(s.z, s.state, s.params), cfg.tolerance("spectral")),
        _run(cfg, "gauge", "theorem1:spectrum", cfg.samples["theorem1"],
             lambda s: gauge.spectral_invariance(s.z, s.state, s.params), tol),
        _run(cfg, "gauge", "theorem1:printings", n, _printings, tol),
        _run(cfg, "gauge", "theorem1:period", n, _period, tol),
        _run(cfg, "gauge", "theorem1:sklyanin_image", n, _pure_sklyanin, tol),
        _run(cfg, "gauge", "theorem2", cfg.samples["theorem2"],
             lambda s: gauge.verify_theorem2(s.state, s.params), cfg.tolerance("brackets")),
        _run(cfg, "gauge", "theorem2:casimirs", n, _casimirs, cfg.tolerance("casimir")),
        _run(cfg, "gauge", "theorem2:c1_brackets", cfg.samples["brackets"], _c1_brackets, cfg.tolerance("brackets")),
        _run(cfg, "gauge", "coupled", n, lambda s: gauge.verify_coupled(s.z, s.state, s.params), tol),
        _run(cfg, "gauge", "inozemtsev", n,
             lambda s: gauge.verify_inozemtsev_gauge(s.z, s.state, s.params.nu, s.torus), tol),
        _run(cfg, "gauge", "inozemtsev:c1", n, _inoz_c1, tol),
        _run(cfg, "gauge", "inozemtsev:linear_brackets", cfg.samples["brackets"], _inoz_brackets,
             cfg.tolerance("brackets"), details=lambda ex: {"sign": "{S_1, S_2} = -i S_3"}),
        _run(cfg, "gauge", "theorem3", cfg.samples["theorem3"], _theorem3("L"), tol,
             details=_theorem3_details),
        _run(cfg, "gauge", "theorem3:bar", cfg.samples["theorem3"], _theorem3("Lbar"), tol,
             details=_theorem3_details),
        _run(cfg, "gauge", "conjugation_formulas", n, _conjugation, cfg.tolerance("conjugation")),
    ]
    out.append(_convergence(cfg))
    return out


def _printings(s: Scene) -> float:
    p = s.params
    a = gauge.spin_from_phase(s.state, p.eta, p.nu, p.c, p.torus)[0].as_array()
    b = gauge.spin_from_phase_breve(s.state, p.eta, p.nu, p.c, p.torus)[0].as_array()
    return rel_residual(a, b)


def _period(s: Scene) -> float:
    p = s.params
    shifted = PhaseState(s.state.p + 2j * math.pi * p.c * 2, s.state.q)
    a = gauge.spin_from_phase(s.state, p.eta, p.nu, p.c, p.torus)[0].as_array()
    b = gauge.spin_from_phase(shifted, p.eta, p.nu, p.c, p.torus)[0].as_array()
    return rel_residual(a, b)


def _pure_sklyanin(s: Scene) -> float:
    """Dual couplings (1, 0, 0, 0): lambda vanishes and the image is the Sklyanin Lax matrix."""
    nu = CouplingSet((1, 0, 0, 0)).dual()
    p = ModelParams(s.params.c, s.params.eta, nu, s.torus)
    lam = gauge.lambda_from_couplings(nu, s.torus)
    return max(gauge.verify_theorem1(s.z, s.state, p), max(abs(x) for x in lam))


def _casimirs(s: Scene) -> float:
    got, pred = gauge.casimir_values(s.state, s.params)
    return max(rel_residual(got[0], pred[0]), rel_residual(got[1], pred[1]))


def _c1_brackets(s: Scene) -> float:
    p = s.params

    def gens(st):
        return gauge._spin(st, p).as_array()

    return max(gauge.quadratic_casimir_residual(gens, (0, 1, 1, 1), a, s.state) for a in range(4))


def _inoz_c1(s: Scene) -> float:
    spin = gauge.spin_from_phase_nonrel(s.state, s.params.nu, s.torus)[0]
    return rel_residual(spin.S1 ** 2 + spin.S2 ** 2 + spin.S3 ** 2, s.params.nu.dual()[0] ** 2)


def _inoz_brackets(s: Scene) -> float:
    numeric, exact = gauge.inozemtsev_linear_brackets(s.state, s.params.nu, s.torus)
    return max(rel_residual(numeric[i, j], exact[i, j]) for i in range(3) for j in range(3))


def _theorem3(which: str):
    def evaluate(s: Scene):
        res = gauge.verify_theorem3(s.z, s.state, s.params, which)
        return max(res["conjugation"], res["trace_sum"]), res["product"]

    return evaluate


def _theorem3_details(extras) -> dict:
    return {"normative": "Xi_eta L Xi_eta^-1 with corrected signs",
            "two_sided_product_min_residual": min(extras) if extras else None}


def _conjugation(s: Scene) -> float:
    gen_coeffs = [complex(x) for x in np.cos(np.arange(1, 9) * (1 + abs(s.state.p)))]

    def a_fn(q, p, z):
        return gen_coeffs[0] + gen_coeffs[1] * q * p + gen_coeffs[2] * np.exp(p) * z + gen_coeffs[3] * q ** 2

    def b_fn(q, p, z):
        return gen_coeffs[4] * q + gen_coeffs[5] * p * p * z + gen_coeffs[6] + gen_coeffs[7] * np.exp(-q) * p

    st, T = s.state, s.torus
    direct = gauge.conjugate(gauge.symmetric_form(a_fn, b_fn, st.q, st.p, s.z), s.z, st.q, T)
    return rel_residual(direct, gauge.conjugation_closed_form(a_fn, b_fn, st.q, st.p, s.z, T))


def _convergence(cfg: RunConfig) -> VerificationRecord:
    """Plain-stencil error ratio under step halving; 16 for a fourth-order method."""
    gen = stream(cfg.seed, "gauge:theorem2:convergence")
    sampler = scene_sampler(cfg.torus, cfg.coupling_radius)
    start = time.perf_counter()
    (ratio,), attempted = draw(gen, sampler, lambda s: gauge.theorem2_convergence_ratio(s.state, s.params), 1)
    return VerificationRecord(
        suite="gauge", tag="theorem2:convergence", samples_attempted=attempted, samples_accepted=1,
        max_residual=8.0 / ratio, tolerance=cfg.tolerance("convergence"), seed=cfg.seed,
        params_digest=digest({"tau": cfg.tau, "tag": "theorem2:convergence"}),
        wall_time=time.perf_counter() - start, details={"ratio": ratio, "required_ratio": 8.0},
    )


# ---- XYZ chain ------------------------------------------------------------------------

def _boundary(cfg: RunConfig, s: Scene) -> xyz.BoundaryParams:
    if cfg.boundary is not None:
        return xyz.BoundaryParams(cfg.boundary["rho_plus"], cfg.boundary["rho_minus"])
    return xyz.BoundaryParams(s.rho_plus, s.rho_minus)


def xyz_records(cfg: RunConfig) -> list:
    tol = cfg.tolerance("xyz")
    n = cfg.samples["xyz"]

    def transfer(s):
        p, b = s.params, _boundary(cfg, s)
        S = xyz.standard_generators(s.state, p.eta, p.c, s.torus)
        return rel_residual(xyz.transfer_matrix(s.z, s.state, p.eta, p.c, b, s.torus),
                            xyz.transfer_closed_form(s.z, S, b, s.torus))

    def even(s):
        p, b = s.params, _boundary(cfg, s)
        return rel_residual(xyz.transfer_matrix(s.z, s.state, p.eta, p.c, b, s.torus),
                            xyz.transfer_matrix(-s.z, s.state, p.eta, p.c, b, s.torus))

    def k_forms(s):
        b = _boundary(cfg, s)
        back = xyz.BoundaryParams.from_rho(*b.to_rho(s.torus), s.torus)
        return max(rel_residual(xyz.k_matrix(sg, s.z, b, s.torus), xyz.k_matrix_shifted_form(sg, s.z, b, s.torus))
                   for sg in "+-") + rel_residual(np.array(back.rho_plus + back.rho_minus),
                                                  np.array(b.rho_plus + b.rho_minus))

    def match(s):
        p = s.params
        nd, ndb = p.nu.dual(), p.nu_bar.dual()
        if min(abs(nd[0]), abs(ndb[0])) < 0.05:
            raise NearPoleError("leading dual coupling too small for the boundary match")
        same = ModelParams(p.c, p.eta, p.nu, p.torus, p.eta, p.nu_bar)
        b = xyz.matched_boundary(p.nu, p.nu_bar, p.eta, s.torus)
        lhs = nd[0] * ndb[0] * xyz.hamiltonian_xyz(s.state, p.eta, p.c, b, s.torus)
        rhs = vandiejen.h1(s.state, same) * vandiejen.h1(s.state, same, bar=True)
        return rel_residual(lhs, rhs)

    def h1_linear(s):
        p = s.params
        return rel_residual(xyz.h1_from_generators(s.state, p.eta, p.nu, p.c, s.torus),
                            vandiejen.h1(s.state, p))

    def transfer_commuting(s):
        p, b = s.params, _boundary(cfg, s)

        def t_at(x):
            return lambda st: xyz.transfer_matrix(x, st, p.eta, p.c, b, s.torus)

        return gauge.involution_residual(t_at(s.z), t_at(s.w), s.state)

    def inverse(s):
        p = s.params
        lz = xyz.lax_xyz(s.z, s.state, p.eta, p.c, s.torus)
        lm = xyz.lax_xyz(-s.z, s.state, p.eta, p.c, s.torus)
        return rel_residual(inv2(lm), lz / det2(lz))

    out = [
        _run(cfg, "xyz", "transfer_closed_form", n, transfer, tol),
        _run(cfg, "xyz", "transfer_even", n, even, cfg.tolerance("evenness")),
        _run(cfg, "xyz", "k_matrix_forms", n, k_forms, cfg.tolerance("exact")),
        _run(cfg, "xyz", "transfer_commuting", cfg.samples["brackets"], transfer_commuting, cfg.tolerance("brackets")),
        _run(cfg, "xyz", "casimirs_central", cfg.samples["brackets"], _s0_casimirs, cfg.tolerance("brackets")),
        _run(cfg, "xyz", "vd_match", n, match, tol),
        _run(cfg, "xyz", "h1_linear", n, h1_linear, cfg.tolerance("linear_combination")),
        _run(cfg, "xyz", "lax_inverse", n, inverse, tol),
        _run(cfg, "xyz", "brackets:standard", cfg.samples["brackets"], _bracket_check("standard"),
             cfg.tolerance("brackets")),
        _run(cfg, "xyz", "brackets:bold", cfg.samples["brackets"], _bracket_check("bold"),
             cfg.tolerance("brackets")),
        _run(cfg, "xyz", "r_matrix_structure", 2, _r_structure, cfg.tolerance("brackets")),
        _constancy(cfg),
    ]
    return out


def _bracket_check(style: str):
    def evaluate(s: Scene) -> float:
        p = s.params
        gens = (lambda st: xyz.standard_generators(st, p.eta, p.c, s.torus)) if style == "standard" else (
            lambda st: xyz.bold_generators(st, p.eta, p.c, s.torus))
        S = gens(s.state)
        worst = 0.0
        for a in range(4):
            for b in range(a + 1, 4):
                num = gauge.numeric_poisson_bracket(lambda st, a=a: gens(st)[a], lambda st, b=b: gens(st)[b], s.state)
                if style == "standard":
                    exact = xyz.standard_bracket(a, b, S, p.c, s.torus)
                else:
                    exact = xyz.bold_bracket(a, b, S, p.eta, p.c, s.torus)
                worst = max(worst, rel_residual(num, exact))
        return worst

    return evaluate


def _s0_casimirs(s: Scene) -> float:
    p = s.params

    def gens(st):
        return xyz.standard_generators(st, p.eta, p.c, s.torus)

    wp = s.torus.wp_half
    return max(gauge.quadratic_casimir_residual(gens, weights, 0, s.state)
               for weights in ((0, 1, 1, 1), (1, wp[0], wp[1], wp[2])))


def _r_structure(s: Scene) -> float:
    """Numeric {L_1(z), L_2(w)} against (1/c)[L_1 L_2, r(z - w)] for the XYZ Lax matrix."""
    p = s.params
    T = s.torus

    def lax_at(x):
        return lambda st: xyz.lax_xyz(x, st, p.eta, p.c, T)

    lz, lw = lax_at(s.z), lax_at(s.w)
    lhs = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for m in range(2):
                    lhs[2 * i + k, 2 * j + m] = gauge.numeric_poisson_bracket(
                        lambda st, i=i, j=j: lz(st)[i, j], lambda st, k=k, m=m: lw(st)[k, m], s.state)
    prod = np.kron(lz(s.state), np.eye(2)) @ np.kron(np.eye(2), lw(s.state))
    r = gyrostat.r_matrix(s.z - s.w, T)
    return rel_residual(lhs, (prod @ r - r @ prod) / p.c)


def _constancy(cfg: RunConfig) -> VerificationRecord:
    """H_1 H-bar_1 - H_8 takes one value across states of a fixed model."""
    gen = stream(cfg.seed, "xyz:h8_constancy")
    sampler = scene_sampler(cfg.torus, cfg.coupling_radius)
    start = time.perf_counter()
    (base,), attempted = draw(gen, sampler, lambda s: s, 1)
    p = base.params
    same = ModelParams(p.c, p.eta, p.nu, p.torus, p.eta, p.nu_bar)

    def state_sampler(g):
        q = torus_point(g, cfg.torus)
        guard_half(cfg.torus, q)
        return PhaseState(complex_box(g), q)

    def diff(st):
        return (vandiejen.h1(st, same) * vandiejen.h1(st, same, bar=True)
                - vandiejen.hamiltonian(FlowId.VD8, st, same))

    values, more = draw(gen, state_sampler, diff, cfg.samples["states"])
    ref = values[0]
    worst = max(rel_residual(v, ref) for v in values)
    return VerificationRecord(
        suite="xyz", tag="h8_constancy", samples_attempted=attempted + more, samples_accepted=len(values),
        max_residual=worst, tolerance=cfg.tolerance("xyz"), seed=cfg.seed,
        params_digest=digest({"tau": cfg.tau, "tag": "h8_constancy"}),
        wall_time=time.perf_counter() - start, details={"constant": ref},
    )


# ---- Poisson tables ---------------------------------------------------------------------

def poisson_records(cfg: RunConfig) -> list:
    """Bracket tables: gauge-image generators, Sklyanin generators, mixed brackets, canonical smoke test."""
    gen = stream(cfg.seed, "poisson:tables")
    (scene,), attempted = draw(gen, scene_sampler(cfg.torus, cfg.coupling_radius), lambda s: s, 1)
    st, p, T = scene.state, scene.params, scene.torus
    digest_ = {"tau": cfg.tau, "scene": "poisson"}
    out = []

    canon = gauge.numeric_poisson_bracket(lambda s: s.p, lambda s: s.q, st)
    out.append(_single(cfg, "poisson", "canonical", rel_residual(canon, 1.0), cfg.tolerance("canonical"),
                       {"value": canon}, digest_))

    start = time.perf_counter()
    numeric, exact = gauge.theorem2_table(st, p)
    out.append(_single(cfg, "poisson", "theorem2_table", gauge.table_residual(numeric, exact),
                       cfg.tolerance("brackets"), {"numeric": numeric.tolist(), "exact": exact.tolist()},
                       digest_, time.perf_counter() - start))

    for style in ("standard", "bold"):
        start = time.perf_counter()
        gens = (lambda s: xyz.standard_generators(s, p.eta, p.c, T)) if style == "standard" else (
            lambda s: xyz.bold_generators(s, p.eta, p.c, T))
        S = gens(st)
        num = np.zeros((4, 4), dtype=complex)
        ex = np.zeros((4, 4), dtype=complex)
        for a in range(4):
            for b in range(4):
                if a != b:
                    num[a, b] = gauge.numeric_poisson_bracket(lambda s, a=a: gens(s)[a], lambda s, b=b: gens(s)[b], st)
                ex[a, b] = (xyz.standard_bracket(a, b, S, p.c, T) if style == "standard"
                            else xyz.bold_bracket(a, b, S, p.eta, p.c, T))
        out.append(_single(cfg, "poisson", f"sklyanin_{style}_table", gauge.table_residual(num, ex),
                           cfg.tolerance("brackets"), {"numeric": num.tolist(), "exact": ex.tolist()},
                           digest_, time.perf_counter() - start))

    start = time.perf_counter()
    mixed = gauge.mixed_bracket_table(st, p)
    out.append(_single(cfg, "poisson", "mixed_table", 0.0, 0.0,
                       {"asserted": False, "entries": int(mixed.size), "table": mixed.tolist()},
                       digest_, time.perf_counter() - start))
    return out


# ---- conservation -------------------------------------------------------------------------

def simulation_params(cfg: RunConfig) -> ModelParams:
    sim = cfg.simulation
    nu, nu_bar = cfg.simulation_couplings()
    return ModelParams(sim["c"], sim["eta"], nu, cfg.torus, sim["eta_bar"], nu_bar)


def inozemtsev_params(cfg: RunConfig) -> ModelParams:
    sim = cfg.simulation
    return ModelParams(1.0, 0.25, CouplingSet(sim["inoz_nu"]), cfg.torus)


def run_flow(cfg: RunConfig, flow: str, dt: float, steps: int):
    """Trajectory object for any flow name accepted by the CLI."""
    sim = cfg.simulation
    if flow == "gyrostat":
        params = GyrostatParams(sim["lam"], sim["gyrostat_c"], cfg.torus)
        return gyrostat.integrate_gyrostat(SpinState(*sim["spin0"]), params, dt, steps, cfg.probe)
    flow = FlowId(flow)
    if flow is FlowId.INOZ:
        return vandiejen.integrate(flow, PhaseState(sim["inoz_p0"], sim["inoz_q0"]), inozemtsev_params(cfg),
                                   dt, steps, cfg.probe)
    return vandiejen.integrate(flow, PhaseState(sim["p0"], sim["q0"]), simulation_params(cfg), dt, steps,
                               cfg.probe)


def conservation_records(cfg: RunConfig, dt: float = 1e-3, steps: int = 1000) -> list:
    out = []
    for flow in [f.value for f in FlowId] + ["gyrostat"]:
        start = time.perf_counter()
        traj = run_flow(cfg, flow, dt, steps)
        drifts = traj.drifts()
        aborted = getattr(traj, "aborted", False)
        worst = math.inf if aborted else max(drifts.values())
        out.append(VerificationRecord(
            suite="conservation", tag=flow, samples_attempted=steps, samples_accepted=len(traj.times) - 1,
            max_residual=worst, tolerance=cfg.tolerance("conservation"), seed=cfg.seed,
            params_digest=digest({"tau": cfg.tau, "simulation": cfg.simulation, "dt": dt, "steps": steps}),
            wall_time=time.perf_counter() - start, details={"drifts": drifts, "aborted": aborted},
        ))
    return out


SUITE_BUILDERS = {
    "identities": identity_records,
    "vandiejen": vandiejen_records,
    "limit": limit_records,
    "gyrostat": gyrostat_records,
    "gauge": gauge_records,
    "xyz": xyz_records,
}


def verify_records(cfg: RunConfig, only=None) -> list:
    records = []
    for name, builder in SUITE_BUILDERS.items():
        if only is None or name in only:
            records.extend(builder(cfg))
    return records

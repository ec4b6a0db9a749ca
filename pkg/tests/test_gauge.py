import numpy as np
import pytest

from bc1lab import gauge
from bc1lab.gyrostat import Structure, bracket
from bc1lab.matrix import inv2
from bc1lab.numerics import rel_residual
from bc1lab.potential import CouplingSet
from bc1lab.vandiejen import ModelParams, PhaseState

from scenes import scenes

SCENES = scenes("gauge-tests", 6)


def test_xi_inverse():
    for s in SCENES:
        xi = gauge.xi_matrix(s.z, s.state.q, s.torus)
        assert rel_residual(gauge.xi_inverse(s.z, s.state.q, s.torus), inv2(xi)) < 1e-12


def test_theorem1():
    for s in SCENES:
        assert gauge.verify_theorem1(s.z, s.state, s.params) < 1e-10
        assert gauge.similarity_invariance(s.z, s.state, s.params) < 1e-12
        assert gauge.spectral_invariance(s.z, s.state, s.params) < 1e-10


def test_two_spin_formulas_agree():
    for s in SCENES:
        p = s.params
        a = gauge.spin_from_phase(s.state, p.eta, p.nu, p.c, p.torus)
        b = gauge.spin_from_phase_breve(s.state, p.eta, p.nu, p.c, p.torus)
        assert rel_residual(a[0].as_array(), b[0].as_array()) < 1e-12
        assert a[1] == pytest.approx(b[1])


def test_spin_is_periodic_in_momentum():
    s = SCENES[0]
    p = s.params
    shifted = PhaseState(s.state.p + 4j * np.pi * p.c, s.state.q)
    a = gauge.spin_from_phase(s.state, p.eta, p.nu, p.c, p.torus)[0].as_array()
    b = gauge.spin_from_phase(shifted, p.eta, p.nu, p.c, p.torus)[0].as_array()
    assert rel_residual(a, b) < 1e-12


def test_theorem2_table():
    for s in SCENES[:2]:
        numeric, exact = gauge.theorem2_table(s.state, s.params)
        assert numeric.shape == (4, 4)
        assert gauge.table_residual(numeric, exact) < 1e-6


def test_theorem2_difference_engine_converges():
    assert gauge.theorem2_convergence_ratio(SCENES[0].state, SCENES[0].params) >= 8


def test_casimir_values():
    for s in SCENES:
        got, predicted = gauge.casimir_values(s.state, s.params)
        assert rel_residual(got[0], predicted[0]) < 1e-9
        assert rel_residual(got[1], predicted[1]) < 1e-9


def test_casimir_c1_is_central_numerically():
    s = SCENES[0]

    def gens(st):
        return gauge._spin(st, s.params).as_array()

    for a in range(4):
        assert gauge.quadratic_casimir_residual(gens, (0, 1, 1, 1), a, s.state) < 1e-6


def test_coupled_product():
    for s in SCENES:
        assert gauge.verify_coupled(s.z, s.state, s.params) < 1e-10
    assert gauge.mixed_bracket_table(SCENES[0].state, SCENES[0].params).shape == (4, 4)


def test_inozemtsev_gauge_and_linear_brackets():
    for s in SCENES:
        assert gauge.verify_inozemtsev_gauge(s.z, s.state, s.params.nu, s.torus) < 1e-10
    s = SCENES[0]
    numeric, exact = gauge.inozemtsev_linear_brackets(s.state, s.params.nu, s.torus)
    assert rel_residual(numeric, exact) < 1e-6
    spin = gauge.spin_from_phase_nonrel(s.state, s.params.nu, s.torus)[0]
    assert rel_residual(numeric[0, 1], -1j * spin.S3) < 1e-6


def test_lambda_vanishes_for_pure_sklyanin_couplings(torus):
    lam = gauge.lambda_from_couplings(CouplingSet((1, 0, 0, 0)).dual(), torus)
    assert max(abs(x) for x in lam) < 1e-15


@pytest.mark.parametrize("which", ["L", "Lbar"])
def test_theorem3(which):
    for s in SCENES:
        res = gauge.verify_theorem3(s.z, s.state, s.params, which)
        assert res["conjugation"] < 1e-10
        assert res["trace_sum"] < 1e-12


def test_theorem3_printed_product_does_not_hold():
    s = SCENES[0]
    assert gauge.verify_theorem3(s.z, s.state, s.params)["product"] > 1e-3


def _test_functions(seed):
    c = np.cos(np.arange(1, 9) * seed)

    def a_fn(q, p, z):
        return c[0] + c[1] * q * p + c[2] * np.exp(p) * z + c[3] * q ** 2

    def b_fn(q, p, z):
        return c[4] * q + c[5] * p * p * z + c[6] + c[7] * np.exp(-q) * p

    return a_fn, b_fn


def test_conjugation_closed_form():
    for k, s in enumerate(SCENES):
        a_fn, b_fn = _test_functions(k + 1.3)
        st = s.state
        direct = gauge.conjugate(gauge.symmetric_form(a_fn, b_fn, st.q, st.p, s.z), s.z, st.q, s.torus)
        closed = gauge.conjugation_closed_form(a_fn, b_fn, st.q, st.p, s.z, s.torus)
        assert rel_residual(direct, closed) < 1e-11
        flipped = closed.copy()
        flipped[0, 1] *= -1
        flipped[1, 0] *= -1
        assert rel_residual(direct, flipped) > 1e-6


def test_gyrostat_params_of_each_factor():
    s = SCENES[0]
    p = s.params
    assert gauge.gyrostat_params(p).lam == pytest.approx(gauge.lambda_from_couplings(p.nu, p.torus))
    assert gauge.gyrostat_params(p, bar=True).lam == pytest.approx(gauge.lambda_from_couplings(p.nu_bar, p.torus))
    same = ModelParams(p.c, p.eta, p.nu, p.torus)
    assert rel_residual(gauge._spin(s.state, same).as_array(), gauge._spin(s.state, same, bar=True).as_array()) == 0


def test_theorem2_exact_table_is_the_quadratic_structure():
    s = SCENES[1]
    _, exact = gauge.theorem2_table(s.state, s.params)
    spin = gauge._spin(s.state, s.params)
    gp = gauge.gyrostat_params(s.params)
    assert exact[1, 2] == bracket(Structure.QUADRATIC, 1, 2, spin, gp)

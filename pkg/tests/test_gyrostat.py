import csv

import numpy as np
import pytest

from bc1lab import gyrostat as gy
from bc1lab.elliptic import weierstrass_p
from bc1lab.gyrostat import GyrostatParams, SpinState, Structure
from bc1lab.matrix import commutator, det2
from bc1lab.numerics import rel_residual

from scenes import scenes

SCENES = scenes("gyrostat-tests", 6)


def _cross_product_field(spin, params):
    # sigma_k coefficients: T_k = S_{4-k}
    wp = params.torus.wp_half
    t = np.array([spin[3], spin[2], spin[1]])
    w = np.array([spin[3] * wp[2], spin[2] * wp[1], spin[1] * wp[0]])
    lam = np.array([params.lam[2], params.lam[1], params.lam[0]])
    d = 2j * np.cross(t, w + lam)
    return np.array([0, d[2], d[1], d[0]])


def test_equations_of_motion_cross_product_oracle():
    for s in SCENES:
        assert rel_residual(gy.gyrostat_eom(s.spin, s.gparams).as_array(),
                            _cross_product_field(s.spin, s.gparams)) < 1e-14


@pytest.mark.parametrize("structure", list(Structure))
def test_brackets_antisymmetric(structure):
    s = SCENES[0]
    table = gy.bracket_table(structure, s.spin, s.gparams)
    assert np.allclose(table, -table.T, atol=0)


def test_linear_bracket_sign():
    s = SCENES[0]
    assert gy.bracket(Structure.LINEAR, 1, 2, s.spin, s.gparams) == -1j * s.spin.S3
    assert gy.bracket(Structure.LINEAR, 0, 2, s.spin, s.gparams) == 0


def test_flow_generated_by_hamiltonian():
    for s in SCENES:
        sdot = gy.gyrostat_eom(s.spin, s.gparams).as_array()
        grad = [0] + [-s.spin[a] * s.torus.wp_half[a - 1] - s.gparams.lam[a - 1] for a in (1, 2, 3)]
        lin = [sum(gy.bracket(Structure.LINEAR, a, b, s.spin, s.gparams) * grad[b] for b in range(4))
               for a in range(4)]
        quad = [gy.bracket(Structure.QUADRATIC, a, 0, s.spin, s.gparams) for a in range(4)]
        assert rel_residual(sdot, 2 * np.array(lin)) < 1e-13
        assert rel_residual(sdot, 2 * s.gparams.c * np.array(quad)) < 1e-13


@pytest.mark.parametrize("structure", list(Structure))
def test_jacobi(structure):
    for s in SCENES[:3]:
        assert gy.jacobi_residual(structure, s.spin, s.gparams) < 1e-10


def test_casimirs_are_central():
    for s in SCENES:
        assert gy.casimir_bracket_residual(Structure.QUADRATIC, s.spin, s.gparams) < 1e-12
        assert gy.casimir_bracket_residual(Structure.LINEAR, s.spin, s.gparams) < 1e-12


@pytest.mark.parametrize("structure", list(Structure))
def test_reflection_equation(structure):
    for s in SCENES:
        assert gy.reflection_residual(structure, s.z, s.w, s.spin, s.gparams) < 1e-10


def test_linear_reflection_without_s0():
    for s in SCENES:
        assert gy.reflection_residual(Structure.LINEAR, s.z, s.w, s.spin, s.gparams, include_s0=False) < 1e-10


def test_quadratic_reflection_normalization():
    s = SCENES[0]
    lz = gy.lax_zhv(s.z, s.spin, s.gparams)
    lw = gy.lax_zhv(s.w, s.spin, s.gparams)
    lhs = gy.lax_bracket(Structure.QUADRATIC, s.z, s.w, s.spin, s.gparams)
    rhs = gy.reflection_rhs(Structure.QUADRATIC, lz, lw, s.z, s.w, s.torus, s.gparams.c)
    assert rel_residual(lhs, rhs) < 1e-10
    assert rel_residual(lhs, 2 * rhs) > 1e-2


def test_determinant_closed_form_and_tail_sign():
    for s in SCENES:
        det = det2(gy.lax_zhv(s.z, s.spin, s.gparams))
        assert rel_residual(det, gy.determinant_closed_form(s.z, s.spin, s.gparams)) < 1e-11
    s = SCENES[0]
    flipped = gy.determinant_closed_form(s.z, s.spin, s.gparams) + 4 * gy.trace_square_tail(s.z, s.gparams)
    assert rel_residual(det2(gy.lax_zhv(s.z, s.spin, s.gparams)), flipped) > 1e-3


def test_trace_square():
    for s in SCENES:
        lax = gy.lax_zhv(s.z, s.spin, s.gparams, include_s0=False)
        c1, _ = gy.casimirs(s.spin, s.gparams)
        lhs = 0.25 * np.trace(lax @ lax) - gy.trace_square_tail(s.z, s.gparams)
        rhs = 0.5 * c1 * weierstrass_p(s.z, s.torus) + gy.hamiltonian_zhv(s.spin, s.gparams)
        assert rel_residual(lhs, rhs) < 1e-11


def test_lax_pair_and_m_normalization():
    for s in SCENES:
        assert gy.lax_residual(s.z, s.spin, s.gparams) < 1e-7
    s = SCENES[0]
    sdot = gy.gyrostat_eom(s.spin, s.gparams)
    ldot = sum(sdot[a] * gy.generator_matrix(a, s.z, s.torus) for a in (1, 2, 3))
    half = commutator(gy.lax_zhv(s.z, s.spin, s.gparams), 0.5 * gy.m_zhv(s.z, s.spin, s.torus))
    assert rel_residual(ldot, half) > 1e-2


def test_euler_top_conservation(torus):
    params = GyrostatParams((0, 0, 0), 1.0, torus)
    traj = gy.integrate_gyrostat(SpinState(0, 1, 0.5, 0.25), params, 1e-3, 1000)
    assert max(traj.drifts().values()) < 1e-8


def test_gyrostat_conservation_with_lambda(torus):
    params = GyrostatParams((0.3, -0.2, 0.1j), 1.0, torus)
    traj = gy.integrate_gyrostat(SpinState(0.4, 1, 0.5, 0.25), params, 1e-3, 400)
    assert max(traj.drifts().values()) < 1e-8
    assert all(s.S0 == traj.states[0].S0 for s in traj.states)


def test_csv_layout(tmp_path, torus):
    params = GyrostatParams((0, 0, 0), 1.0, torus)
    path = tmp_path / "g.csv"
    gy.write_csv(gy.integrate_gyrostat(SpinState(0, 1, 0.5, 0.25), params, 1e-3, 0), path)
    assert list(csv.reader(path.open())) == [list(gy.CSV_HEADER)]
    gy.write_csv(gy.integrate_gyrostat(SpinState(0, 1, 0.5, 0.25), params, 1e-3, 3), path)
    assert len(list(csv.reader(path.open()))) == 4


def test_params_validation(torus):
    with pytest.raises(ValueError):
        GyrostatParams((1, 2), 1.0, torus)
    with pytest.raises(ValueError):
        GyrostatParams((1, 2, 3), 0, torus)

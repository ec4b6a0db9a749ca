import numpy as np
import pytest

from bc1lab import gauge, vandiejen as vd, xyz
from bc1lab.errors import ZeroCouplingError
from bc1lab.matrix import det2, inv2
from bc1lab.numerics import rel_residual
from bc1lab.potential import CouplingSet
from bc1lab.suites import _r_structure
from bc1lab.vandiejen import ModelParams
from bc1lab.xyz import BoundaryParams

from scenes import scenes

SCENES = scenes("xyz-tests", 6)


def _boundary(s):
    return BoundaryParams(s.rho_plus, s.rho_minus)


def test_rho_round_trip(torus):
    b = BoundaryParams((0.3, -0.2j, 0.5), (1, 2, 3))
    back = BoundaryParams.from_rho(*b.to_rho(torus), torus)
    assert rel_residual(np.array(back.rho_plus + back.rho_minus), np.array(b.rho_plus + b.rho_minus)) < 1e-12


def test_third_constant_changes_sign(torus):
    tilde = xyz.rho_to_tilde((1, 1, 1), torus)
    cs = torus.constants
    assert tilde[0] == pytest.approx(1 / cs[0]) and tilde[2] == pytest.approx(-1 / cs[2])


def test_k_matrix_forms_and_reflection():
    for s in SCENES:
        b = _boundary(s)
        for sign in "+-":
            assert rel_residual(xyz.k_matrix(sign, s.z, b, s.torus), xyz.k_matrix_shifted_form(sign, s.z, b, s.torus)) < 1e-12
        assert xyz.k_reflection_residual(s.z, s.w, s.rho_plus, s.torus) < 1e-10


def test_transfer_matrix_closed_form_and_parity():
    for s in SCENES:
        p, b = s.params, _boundary(s)
        t = xyz.transfer_matrix(s.z, s.state, p.eta, p.c, b, s.torus)
        S = xyz.standard_generators(s.state, p.eta, p.c, s.torus)
        assert rel_residual(t, xyz.transfer_closed_form(s.z, S, b, s.torus)) < 1e-9
        assert rel_residual(t, xyz.transfer_matrix(-s.z, s.state, p.eta, p.c, b, s.torus)) < 1e-10


@pytest.mark.parametrize("style", ["standard", "bold"])
def test_generator_brackets(style):
    s = SCENES[0]
    p = s.params

    def gens(st):
        return (xyz.standard_generators if style == "standard" else xyz.bold_generators)(st, p.eta, p.c, s.torus)

    S = gens(s.state)
    for a in range(4):
        for b in range(4):
            if a == b:
                continue
            num = gauge.numeric_poisson_bracket(lambda st: gens(st)[a], lambda st: gens(st)[b], s.state)
            exact = (xyz.standard_bracket(a, b, S, p.c, s.torus) if style == "standard"
                     else xyz.bold_bracket(a, b, S, p.eta, p.c, s.torus))
            assert rel_residual(num, exact) < 1e-6


def test_standard_generators_rescale_bold():
    s = SCENES[0]
    p = s.params
    d = xyz.sklyanin_d(p.eta, s.torus)
    bold = xyz.bold_generators(s.state, p.eta, p.c, s.torus)
    std = xyz.standard_generators(s.state, p.eta, p.c, s.torus)
    assert d[0] == 1
    assert rel_residual(np.array(std), 2 * np.array(d) * np.array(bold)) < 1e-15


def test_r_matrix_structure():
    assert _r_structure(SCENES[0]) < 1e-6


def test_lax_inverse_at_opposite_point():
    for s in SCENES:
        p = s.params
        lz = xyz.lax_xyz(s.z, s.state, p.eta, p.c, s.torus)
        lm = xyz.lax_xyz(-s.z, s.state, p.eta, p.c, s.torus)
        assert rel_residual(inv2(lm), lz / det2(lz)) < 1e-9


def test_van_diejen_match():
    for s in SCENES:
        p = s.params
        same = ModelParams(p.c, p.eta, p.nu, p.torus, p.eta, p.nu_bar)
        b = xyz.matched_boundary(p.nu, p.nu_bar, p.eta, s.torus)
        nd, ndb = p.nu.dual(), p.nu_bar.dual()
        lhs = nd[0] * ndb[0] * xyz.hamiltonian_xyz(s.state, p.eta, p.c, b, s.torus)
        assert rel_residual(lhs, vd.h1(s.state, same) * vd.h1(s.state, same, bar=True)) < 1e-9
        assert rel_residual(xyz.h1_from_generators(s.state, p.eta, p.nu, p.c, s.torus), vd.h1(s.state, p)) < 1e-11


def test_match_needs_leading_dual_coupling(torus):
    dead = CouplingSet((1, -1, 0, 0))
    with pytest.raises(ZeroCouplingError):
        xyz.matched_boundary(dead, dead, 0.3j, torus)


def test_bold_lax_has_product_factor_shape():
    s = SCENES[0]
    p = s.params
    lax = xyz.lax_bold(s.z, s.state, p.eta, p.nu, p.c, s.torus)
    assert rel_residual(np.trace(lax), vd.h1(s.state, p)) < 1e-13


def test_boundary_validation():
    with pytest.raises(ValueError):
        BoundaryParams((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        BoundaryParams((1, 2, 3), (1, 2, 3)).side("x")

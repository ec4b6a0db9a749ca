import pytest

from bc1lab.numerics import derivative
from bc1lab.potential import CouplingSet, v, v_and_prime, v_definition, v_dual, v_prime, v_prime_definition

from conftest import close

POINTS = [(0.21 + 0.13j, -0.17 + 0.31j), (-0.12 + 0.2j, 0.3 - 0.05j), (0.33 - 0.18j, 0.08 + 0.41j)]


def test_dual_is_an_involution(nu):
    back = nu.dual().dual()
    assert all(close(a, b, 1e-15) for a, b in zip(back, nu))


def test_dual_of_unit_coupling_is_flat():
    assert CouplingSet((1, 0, 0, 0)).dual().nu == pytest.approx((0.5, 0.5, 0.5, 0.5))


def test_coupling_set_has_four_entries():
    with pytest.raises(ValueError):
        CouplingSet((1, 2, 3))


@pytest.mark.parametrize("z,u", POINTS)
def test_theta_form_matches_definition(z, u, nu, skew_torus):
    assert close(v(z, u, nu, skew_torus), v_definition(z, u, nu, skew_torus), 1e-12)
    assert close(v_prime(z, u, nu, skew_torus), v_prime_definition(z, u, nu, skew_torus), 1e-12)


@pytest.mark.parametrize("z,u", POINTS)
def test_u_derivative_by_differences(z, u, nu, torus):
    val, der = v_and_prime(z, u, nu, torus)
    assert close(val, v(z, u, nu, torus), 1e-15)
    assert close(der, derivative(lambda x: v(z, x, nu, torus), u), 1e-8)


def test_linear_in_couplings(nu, nu_bar, torus):
    z, u = POINTS[0]
    total = CouplingSet(tuple(a + 2 * b for a, b in zip(nu, nu_bar)))
    assert close(v(z, u, total, torus), v(z, u, nu, torus) + 2 * v(z, u, nu_bar, torus), 1e-13)


def test_breve_uses_dual(nu, torus):
    z, u = POINTS[1]
    assert v_dual(z, u, nu, torus) == v(z, u, nu.dual(), torus)

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bc1lab.elliptic import Torus, kronecker_phi, lattice_distance, phi_alpha, theta, weierstrass_p
from bc1lab.matrix import IDENTITY, inv2, mat2
from bc1lab.numerics import rel_residual
from bc1lab.potential import CouplingSet, v

T = Torus(0.1 + 1.2j)
coord = st.floats(-0.5, 0.5, allow_nan=False)
small = st.floats(-2, 2, allow_nan=False)


def point(x, y):
    return complex(x) + complex(y) * T.tau


def away(z, margin=0.05):
    return lattice_distance(z, T) > margin


@settings(max_examples=60, deadline=None)
@given(coord, coord)
def test_theta1_odd_others_even(x, y):
    z = point(x, y)
    assert rel_residual(theta(1, -z, T), -theta(1, z, T)) < 1e-13
    for k in (2, 3, 4):
        assert rel_residual(theta(k, -z, T), theta(k, z, T)) < 1e-13


@settings(max_examples=60, deadline=None)
@given(coord, coord)
def test_wp_even_and_periodic(x, y):
    z = point(x, y)
    assume(away(z))
    w = weierstrass_p(z, T)
    assert rel_residual(weierstrass_p(-z, T), w) < 1e-11
    assert rel_residual(weierstrass_p(z + 1, T), w) < 1e-11
    assert rel_residual(weierstrass_p(z + T.tau, T), w) < 1e-11


@settings(max_examples=60, deadline=None)
@given(coord, coord, coord, coord)
def test_kronecker_symmetric(x1, y1, x2, y2):
    z, u = point(x1, y1), point(x2, y2)
    assume(away(z) and away(u) and away(z + u, 1e-3))
    assert rel_residual(kronecker_phi(z, u, T), kronecker_phi(u, z, T)) < 1e-10
    assert rel_residual(kronecker_phi(z, u, T), -kronecker_phi(-z, -u, T)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(coord, coord)
def test_phi_alpha_odd(x, y):
    z = point(x, y)
    assume(away(z))
    for a in (1, 2, 3):
        assume(away(z - T.omega[a]))
        assert rel_residual(phi_alpha(a, -z, T), -phi_alpha(a, z, T)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=8, max_size=8))
def test_dual_involution(xs):
    nu = CouplingSet(tuple(complex(xs[2 * k], xs[2 * k + 1]) for k in range(4)))
    back = nu.dual().dual()
    assert max(abs(a - b) for a, b in zip(back, nu)) < 1e-14


@settings(max_examples=40, deadline=None)
@given(coord, coord, coord, coord, st.lists(small, min_size=4, max_size=4))
def test_v_linear_scaling(x1, y1, x2, y2, xs):
    z, u = point(x1, y1), point(x2, y2)
    assume(away(2 * z) and all(away(u + T.omega[a]) for a in range(4)))
    nu = CouplingSet(tuple(xs))
    scaled = CouplingSet(tuple(3 * x for x in xs))
    assert rel_residual(v(z, u, scaled, T), 3 * v(z, u, nu, T)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=8, max_size=8))
def test_inverse_of_regular_matrix(xs):
    m = mat2(*(complex(xs[2 * k], xs[2 * k + 1]) for k in range(4)))
    d = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    assume(abs(d) > 1e-3 * max(1.0, np.max(np.abs(m))) ** 2)
    assert rel_residual(inv2(m) @ m, IDENTITY) < 1e-9


def test_half_periods_listed():
    assert T.omega[1] == 0.5 and math.isclose(abs(T.omega[3] - T.tau / 2), 0)

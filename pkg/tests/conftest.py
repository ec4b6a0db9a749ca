import numpy as np
import pytest

from bc1lab.elliptic import Torus
from bc1lab.potential import CouplingSet

mp = pytest.importorskip("mpmath")
mp.mp.dps = 30


@pytest.fixture(scope="session")
def torus():
    return Torus(1j)


@pytest.fixture(scope="session")
def skew_torus():
    return Torus(0.3 + 1.1j)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def nu():
    return CouplingSet((0.4 + 0.1j, -0.3 + 0.2j, 0.25 - 0.15j, 0.1 + 0.3j))


@pytest.fixture(scope="session")
def nu_bar():
    return CouplingSet((0.2 - 0.3j, 0.35 + 0.05j, -0.1 + 0.2j, 0.3 - 0.1j))


def mp_theta(k, z, torus):
    q = mp.exp(1j * mp.pi * mp.mpc(torus.tau))
    return mp.jtheta(k, mp.pi * mp.mpc(z), q)


def mp_phi(z, u, torus):
    th1 = lambda x: mp_theta(1, x, torus)  # noqa: E731
    return mp.diff(th1, 0) * th1(mp.mpc(z) + u) / (th1(z) * th1(u))


def close(a, b, tol):
    a, b = complex(a), complex(b)
    return abs(a - b) / max(1.0, abs(a), abs(b)) <= tol

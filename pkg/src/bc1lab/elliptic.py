"""Jacobi theta functions and the elliptic toolkit built on them.

Everything here is evaluated from the q-series of the four Jacobi theta
functions on the torus C / (Z + tau Z).  Arguments are first reduced into the
fundamental cell with the quasi-periodicity factors, so the series length is
bounded uniformly in z.  Derivatives in z are always term-wise series
derivatives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb

from .errors import NearPoleError, NonConvergentError, TorusError

POLE_TOL = 1e-6
MIN_IM_TAU = 0.05
SERIES_RTOL = 1e-16
MAX_TERMS = 64

_PI = math.pi
_I = 1j


@dataclass(frozen=True)
class Torus:
    """Elliptic curve with modular parameter ``tau`` (Im tau >= 0.05)."""

    tau: complex
    omega: tuple = field(init=False, repr=False, compare=False)
    dtau_omega: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tau = complex(self.tau)
        if not cmath.isfinite(tau) or tau.imag < MIN_IM_TAU:
            raise TorusError(f"Im(tau) must be >= {MIN_IM_TAU}, got tau={tau}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "omega", (0j, 0.5 + 0j, (1 + tau) / 2, tau / 2))
        object.__setattr__(self, "dtau_omega", (0.0, 0.0, 0.5, 0.5))

    @cached_property
    def nome(self) -> complex:
        return cmath.exp(_I * _PI * self.tau)

    @cached_property
    def doubled(self) -> "Torus":
        return Torus(2 * self.tau)

    @cached_property
    def theta_zero(self) -> tuple:
        """(theta_1(0), ..., theta_4(0)); the first entry is exactly zero."""
        return (0j,) + tuple(theta(k, 0j, self) for k in (2, 3, 4))

    @cached_property
    def theta1_odd_derivs(self) -> tuple:
        """theta_1'(0) and theta_1'''(0)."""
        d = theta_z_derivatives(1, 0j, self, 3)
        return d[1], d[3]

    @cached_property
    def wp_shift(self) -> complex:
        """The constant theta'''(0) / (3 theta'(0)) with wp = E_2 + shift."""
        t1, t3 = self.theta1_odd_derivs
        return t3 / (3 * t1)

    @cached_property
    def wp_half(self) -> tuple:
        """(wp_1, wp_2, wp_3) = wp at the three nonzero half-periods."""
        return tuple(weierstrass_p(self.omega[k], self) for k in (1, 2, 3))

    @cached_property
    def constants(self) -> tuple:
        return theta_constants(self)


# ---------------------------------------------------------------------------
# lattice bookkeeping


def _cell_coords(z: complex, tau: complex):
    n = round(z.imag / tau.imag)
    z1 = z - n * tau
    m = round(z1.real)
    return m, n, z1 - m


def lattice_distance(z: complex, torus: Torus) -> float:
    """Euclidean distance from z to the nearest point of Z + tau Z."""
    z = complex(z)
    _, _, r = _cell_coords(z, torus.tau)
    tau = torus.tau
    return min(abs(r - i - j * tau) for i in (-1, 0, 1) for j in (-1, 0, 1))


def near_lattice(z: complex, torus: Torus, tol: float) -> bool:
    """True when z is within tol of a lattice point (exact for tol below the cell inradius)."""
    tau = torus.tau
    y = z.imag / tau.imag
    x = z.real - y * tau.real
    fx, fy = math.floor(x), math.floor(y)
    for i in (0, 1):
        for j in (0, 1):
            if abs(z - (fx + i) - (fy + j) * tau) < tol:
                return True
    return False


def check_pole(z: complex, torus: Torus, what: str = "argument") -> None:
    if near_lattice(complex(z), torus, POLE_TOL):
        raise NearPoleError(f"{what} {z} is within {POLE_TOL} of the period lattice")


# ---------------------------------------------------------------------------
# theta series


@lru_cache(maxsize=64)
def _coefficients(kind: int, tau: complex) -> tuple:
    """Signed nome powers of the theta_kind series, one per retained frequency."""
    half = kind in (1, 2)
    alternating = kind in (1, 4)
    out = []
    for k in range(MAX_TERMS):
        expo = (k + 0.5) ** 2 if half else (k + 1) ** 2
        qp = cmath.exp(_I * _PI * tau * expo)
        idx = k if half else k + 1
        if alternating and idx % 2:
            qp = -qp
        out.append(qp)
    return tuple(out)


def _series0(kind: int, u: complex, tau: complex) -> complex:
    """theta_kind at a reduced argument u (value only, same truncation rule as _series)."""
    half = kind in (1, 2)
    coeffs = _coefficients(kind, tau)
    step = cmath.exp(2 * _I * _PI * u)
    istep = 1 / step
    if half:
        ep = cmath.exp(_I * _PI * u)
        em = 1 / ep
        total = 0j
        running = 0.0
    else:
        ep, em = step, istep
        total = 1 + 0j
        running = 1.0
    for count, qp in enumerate(coeffs):
        term = qp * (ep - em) if kind == 1 else qp * (ep + em)
        total += term
        mag = abs(qp) * (abs(ep) + abs(em))
        running = max(running, mag)
        if mag < SERIES_RTOL * running and count >= 1:
            return -_I * total if kind == 1 else total
        ep *= step
        em *= istep
    raise NonConvergentError(f"theta_{kind} series did not converge (tau={tau})")


def _series(kind: int, u: complex, tau: complex, order: int) -> list:
    """Derivatives 0..order of theta_kind at a reduced argument u."""
    out = [0j] * (order + 1)
    half = kind in (1, 2)
    alternating = kind in (1, 4)
    if not half:
        out[0] = 1 + 0j
    running = 1.0 if not half else 0.0
    k = 0 if half else 1
    for count in range(MAX_TERMS + 1):
        if count == MAX_TERMS:
            raise NonConvergentError(f"theta_{kind} series did not converge (tau={tau})")
        if half:
            freq = _PI * (2 * k + 1)
            q_pow = cmath.exp(_I * _PI * tau * (k + 0.5) ** 2)
        else:
            freq = 2 * _PI * k
            q_pow = cmath.exp(_I * _PI * tau * k * k)
        if alternating and k % 2:
            q_pow = -q_pow
        ep = cmath.exp(_I * freq * u)
        em = cmath.exp(-_I * freq * u)
        a = _I * freq
        a_pow = 1 + 0j
        for n in range(order + 1):
            if kind == 1:
                # -i * [e^{+} a^n - (-a)^n e^{-}]
                term = -_I * q_pow * a_pow * (ep - (-1) ** n * em)
            else:
                term = q_pow * a_pow * (ep + (-1) ** n * em)
            out[n] += term
            a_pow *= a
        mag = abs(q_pow) * (abs(ep) + abs(em)) * max(1.0, freq) ** order
        running = max(running, mag)
        if mag < SERIES_RTOL * running and count >= 1:
            break
        k += 1
    return out


# sign picked up by theta_k under z -> z + 1 and z -> z + tau respectively
_SHIFT_ONE = {1: -1, 2: -1, 3: 1, 4: 1}
_SHIFT_TAU = {1: -1, 2: 1, 3: 1, 4: -1}


def theta_z_derivatives(kind: int, z: complex, torus: Torus, order: int) -> list:
    """All z-derivatives 0..order of theta_kind(z|tau)."""
    if kind not in (1, 2, 3, 4):
        raise ValueError(f"theta kind must be 1..4, got {kind}")
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    z = complex(z)
    tau = torus.tau
    m, n, z0 = _cell_coords(z, tau)
    base = [_series0(kind, z0, tau)] if order == 0 else _series(kind, z0, tau, order)
    if m == 0 and n == 0:
        return base
    # theta(z) = sign * q^{-n^2} e^{-2 pi i n z0} theta(z0), z0 = z - m - n tau
    sign = _SHIFT_ONE[kind] ** (m % 2) * _SHIFT_TAU[kind] ** (n % 2)
    a = -2j * _PI * n
    factor = sign * cmath.exp(-_I * _PI * tau * n * n + a * z0)
    out = []
    for N in range(order + 1):
        acc = 0j
        for k in range(N + 1):
            acc += comb(N, k) * a ** (N - k) * base[k]
        out.append(factor * acc)
    return out


def theta_all(z: complex, torus: Torus, order: int = 0) -> tuple:
    """(theta_1, ..., theta_4) at one argument, sharing the exponentials.

    With order >= 1 each entry is the list [value, d/dz, ..., d^order/dz^order].
    """
    if not 0 <= order <= 3:
        raise ValueError("theta_all supports orders 0..3")
    z = complex(z)
    if order <= 1:
        return _theta_all_low(z, torus, order)
    tau = torus.tau
    m, n, u = _cell_coords(z, tau)
    step = cmath.exp(2 * _I * _PI * u)
    istep = 1 / step
    # acc[kind][d] collects sum coeff * freq^d * (e^+ +- (-1)^d e^-)
    acc = [[0j] * (order + 1) for _ in range(4)]
    acc[2][0] = acc[3][0] = 1 + 0j
    for half in (True, False):
        coeffs = _coefficients(2 if half else 3, tau)
        if half:
            ep = cmath.exp(_I * _PI * u)
            em = 1 / ep
            running = 0.0
        else:
            ep, em = step, istep
            running = 1.0
        for k, qp in enumerate(coeffs):
            freq = _PI * (2 * k + 1) if half else 2 * _PI * (k + 1)
            if half:
                pair = ((0, -qp if k % 2 else qp, -1), (1, qp, 1))
            else:
                pair = ((2, qp, 1), (3, -qp if k % 2 == 0 else qp, 1))
            fp = 1.0
            for d in range(order + 1):
                par = 1 if d % 2 == 0 else -1
                for kind, coeff, base_sign in pair:
                    acc[kind][d] += coeff * fp * (ep + base_sign * par * em)
                fp *= freq
            mag = abs(qp) * (abs(ep) + abs(em)) * max(1.0, freq) ** order
            running = max(running, mag)
            if mag < SERIES_RTOL * running and k >= 1:
                break
            ep *= step
            em *= istep
        else:
            raise NonConvergentError(f"theta series did not converge (tau={tau})")
    out = []
    for kind in range(4):
        # d-th derivative picks up i^d; theta_1 carries an overall -i
        pre = -_I if kind == 0 else 1
        out.append([pre * _I ** d * acc[kind][d] for d in range(order + 1)])
    if m or n:
        a = -2j * _PI * n
        factor = cmath.exp(-_I * _PI * tau * n * n + a * u)
        for kind in range(4):
            sign = _SHIFT_ONE[kind + 1] ** (m % 2) * _SHIFT_TAU[kind + 1] ** (n % 2)
            base = out[kind]
            shifted = []
            for N in range(order + 1):
                acc_n = 0j
                for j in range(N + 1):
                    acc_n += comb(N, j) * a ** (N - j) * base[j]
                shifted.append(sign * factor * acc_n)
            out[kind] = shifted
    if order == 0:
        return tuple(x[0] for x in out)
    return tuple(out)


def _theta_all_low(z: complex, torus: Torus, order: int) -> tuple:
    # unrolled orders 0 and 1 of theta_all
    tau = torus.tau
    m, n, u = _cell_coords(z, tau)
    step = cmath.exp(2 * _I * _PI * u)
    istep = 1 / step
    vals = [0j, 0j, 1 + 0j, 1 + 0j]
    ders = [0j, 0j, 0j, 0j]
    for half in (True, False):
        coeffs = _coefficients(2 if half else 3, tau)
        if half:
            ep = cmath.exp(_I * _PI * u)
            em = 1 / ep
            running = 0.0
        else:
            ep, em = step, istep
            running = 1.0
        for k, qp in enumerate(coeffs):
            s_sum = ep + em
            s_dif = ep - em
            if half:
                alt = -qp if k % 2 else qp
                vals[0] += alt * s_dif
                vals[1] += qp * s_sum
                if order:
                    freq = _PI * (2 * k + 1)
                    ders[0] += alt * freq * s_sum
                    ders[1] += qp * freq * s_dif
            else:
                alt = -qp if k % 2 == 0 else qp
                vals[2] += qp * s_sum
                vals[3] += alt * s_sum
                if order:
                    freq = 2 * _PI * (k + 1)
                    ders[2] += qp * freq * s_dif
                    ders[3] += alt * freq * s_dif
            mag = abs(qp) * (abs(ep) + abs(em))
            if order:
                mag *= max(1.0, _PI * (2 * k + 1) if half else 2 * _PI * (k + 1))
            running = max(running, mag)
            if mag < SERIES_RTOL * running and k >= 1:
                break
            ep *= step
            em *= istep
        else:
            raise NonConvergentError(f"theta series did not converge (tau={tau})")
    vals[0] *= -_I
    ders = [ders[0], _I * ders[1], _I * ders[2], _I * ders[3]]
    if m or n:
        a = -2j * _PI * n
        factor = cmath.exp(-_I * _PI * tau * n * n + a * u)
        for k in range(4):
            f = _SHIFT_ONE[k + 1] ** (m % 2) * _SHIFT_TAU[k + 1] ** (n % 2) * factor
            vals[k], ders[k] = f * vals[k], f * (a * vals[k] + ders[k])
    if order == 0:
        return tuple(vals)
    return tuple([vals[k], ders[k]] for k in range(4))


def wp_half_shifts(z: complex, torus: Torus, derivative: bool = False) -> tuple:
    """(wp(z + omega_a))_{a=0..3}, or their z-derivatives, from the four thetas at z.

    Half-period shifts permute the theta functions, so wp = wp_1 + phi_1^2 and
    wp' = -2 phi_1 phi_2 phi_3 at z + omega_a become theta ratios at z.  The
    Eisenstein route in weierstrass_p stays the reference definition.
    """
    z = complex(z)
    for a in range(4):
        check_pole(z + torus.omega[a], torus, "z + omega_a")
    t1, t2, t3, t4 = theta_all(z, torus, 0)
    t1p = torus.theta1_odd_derivs[0]
    _, z2, z3, z4 = torus.theta_zero
    if derivative:
        k = -2 * t1p ** 3 / (z2 * z3 * z4)
        return (
            k * t2 * t3 * t4 / t1 ** 3,
            -k * t1 * t3 * t4 / t2 ** 3,
            k * t1 * t2 * t4 / t3 ** 3,
            -k * t1 * t2 * t3 / t4 ** 3,
        )
    k = (t1p / z2) ** 2
    wp1 = torus.wp_half[0]
    return (
        wp1 + k * (t2 / t1) ** 2,
        wp1 + k * (t1 / t2) ** 2,
        wp1 - k * (t4 / t3) ** 2,
        wp1 - k * (t3 / t4) ** 2,
    )


def theta(kind: int, z: complex, torus: Torus) -> complex:
    """Jacobi theta function theta_kind(z|tau), kind in 1..4."""
    return theta_z_derivatives(kind, z, torus, 0)[0]


def theta_z_derivative(kind: int, z: complex, torus: Torus, order: int) -> complex:
    if not 0 <= order <= 3:
        raise ValueError("order must be in 0..3")
    return theta_z_derivatives(kind, z, torus, order)[order]


def theta_2tau(kind: int, z: complex, torus: Torus) -> complex:
    """theta_kind(z|2 tau) for kind 2 or 3."""
    if kind not in (2, 3):
        raise ValueError("theta_2tau is defined for kinds 2 and 3")
    return theta(kind, z, torus.doubled)


# ---------------------------------------------------------------------------
# Kronecker function, Eisenstein and Weierstrass functions


def eisenstein(order: int, z: complex, torus: Torus) -> complex:
    """E_1(z) = theta'(z)/theta(z) and E_2(z) = -E_1'(z)."""
    check_pole(z, torus)
    if order == 1:
        t0, t1 = theta_z_derivatives(1, z, torus, 1)
        return t1 / t0
    if order == 2:
        t0, t1, t2 = theta_z_derivatives(1, z, torus, 2)
        return -(t2 * t0 - t1 * t1) / (t0 * t0)
    raise ValueError("Eisenstein order must be 1 or 2")


def weierstrass_p(z: complex, torus: Torus, derivative: bool = False) -> complex:
    check_pole(z, torus)
    if not derivative:
        return eisenstein(2, z, torus) + torus.wp_shift
    t0, t1, t2, t3 = theta_z_derivatives(1, z, torus, 3)
    r1, r2, r3 = t1 / t0, t2 / t0, t3 / t0
    return -(r3 - 3 * r2 * r1 + 2 * r1 ** 3)


def kronecker_phi(z: complex, u: complex, torus: Torus) -> complex:
    """phi(z, u) = theta'(0) theta(z+u) / (theta(z) theta(u))."""
    check_pole(z, torus, "z")
    check_pole(u, torus, "u")
    check_pole(z + u, torus, "z+u")
    t1p = torus.theta1_odd_derivs[0]
    return t1p * theta(1, z + u, torus) / (theta(1, z, torus) * theta(1, u, torus))


def kronecker_f(z: complex, u: complex, torus: Torus) -> complex:
    """f(z, u) = d/du phi(z, u) = phi(z, u) (E_1(z+u) - E_1(u))."""
    return kronecker_phi(z, u, torus) * (eisenstein(1, z + u, torus) - eisenstein(1, u, torus))


def kronecker_phi_dz(z: complex, u: complex, torus: Torus) -> complex:
    """d/dz phi(z, u) = phi(z, u) (E_1(z+u) - E_1(z))."""
    return kronecker_phi(z, u, torus) * (eisenstein(1, z + u, torus) - eisenstein(1, z, torus))


def varphi(a: int, z: complex, x: complex, torus: Torus) -> complex:
    """phi_a(z, x + omega_a) in the theta-ratio form.

    ``varphi(alpha, z, 0)`` is the one-argument family phi_alpha(z).
    """
    if a not in (0, 1, 2, 3):
        raise ValueError("index a must be in 0..3")
    check_pole(z, torus, "z")
    check_pole(x + torus.omega[a], torus, "x + omega_a")
    t1p = torus.theta1_odd_derivs[0]
    num = theta(a + 1, z + x, torus)
    return t1p * num / (theta(1, z, torus) * theta(a + 1, x, torus))


def phi_alpha(alpha: int, z: complex, torus: Torus) -> complex:
    """phi_alpha(z) = theta'(0) theta_{alpha+1}(z) / (theta(z) theta_{alpha+1}(0))."""
    if alpha not in (1, 2, 3):
        raise ValueError("alpha must be in 1..3")
    return varphi(alpha, z, 0j, torus)


def theta_constants(torus: Torus) -> tuple:
    """(c_1, c_2, c_3) built from theta constants."""
    t1p = torus.theta1_odd_derivs[0]
    _, t2, t3, t4 = torus.theta_zero
    return (-((t2 / t1p) ** 2), -_I * (t3 / t1p) ** 2, -((t4 / t1p) ** 2))

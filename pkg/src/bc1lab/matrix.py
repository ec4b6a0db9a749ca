"""2x2 and 4x4 complex matrix helpers on plain numpy arrays."""

from __future__ import annotations

import numpy as np

from .errors import SingularError

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
IDENTITY = SIGMA[0]


def sigma_flip(a: int) -> np.ndarray:
    """Pauli matrix paired with generator index a: sigma_0 for a = 0, sigma_{4-a} otherwise."""
    if a == 0:
        return SIGMA[0]
    if a not in (1, 2, 3):
        raise ValueError(f"generator index must be 0..3, got {a}")
    return SIGMA[4 - a]


def mat2(a11, a12, a21, a22) -> np.ndarray:
    return np.array([[a11, a12], [a21, a22]], dtype=complex)


def det2(m: np.ndarray) -> complex:
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def inv2(m: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Adjugate inverse; SingularError when |det| < rtol * ||m||^2."""
    d = det2(m)
    scale = float(np.max(np.abs(m))) ** 2
    if abs(d) < rtol * max(scale, 1e-300):
        raise SingularError(f"matrix is numerically singular (|det|={abs(d):.3e})")
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex) / d


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def lift1(a: np.ndarray) -> np.ndarray:
    """A_1 = A tensor 1."""
    return np.kron(a, IDENTITY)


def lift2(a: np.ndarray) -> np.ndarray:
    """A_2 = 1 tensor A."""
    return np.kron(IDENTITY, a)


def max_norm(m) -> float:
    return float(np.max(np.abs(np.asarray(m))))

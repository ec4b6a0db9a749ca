"""Counter-based random streams and torus sampling.

Every suite draws from its own Philox stream keyed by (seed, crc32(name)),
so adding or reordering suites never shifts another suite's samples.
"""

from __future__ import annotations

import zlib

import numpy as np

from .elliptic import Torus, lattice_distance
from .errors import NearPoleError

MASK64 = (1 << 64) - 1
SAMPLE_MARGIN = 0.04
MAX_REDRAWS = 1000


def stream(seed: int, name: str) -> np.random.Generator:
    key = [int(seed) & MASK64, zlib.crc32(name.encode("utf-8"))]
    return np.random.Generator(np.random.Philox(key=key))


def torus_point(rng: np.random.Generator, torus: Torus) -> complex:
    """Uniform point of the fundamental cell centred at the origin."""
    x, y = rng.random(2) - 0.5
    return complex(x) + complex(y) * torus.tau


def complex_box(rng: np.random.Generator, radius: float = 1.0) -> complex:
    x, y = rng.uniform(-radius, radius, 2)
    return complex(x, y)


def guard(torus: Torus, *points: complex, margin: float = SAMPLE_MARGIN) -> None:
    """Reject a sample when any listed point is within ``margin`` of the lattice."""
    for z in points:
        if lattice_distance(z, torus) < margin:
            raise NearPoleError(f"sample point {z} within {margin} of the lattice")


def guard_half(torus: Torus, z: complex, margin: float = SAMPLE_MARGIN) -> None:
    """Reject z near any half-period (zeros of the phi_alpha family)."""
    guard(torus, z, *(z - torus.omega[k] for k in (1, 2, 3)), margin=margin)


def draw(rng, sampler, evaluate, count: int):
    """Run ``evaluate(sampler(rng))`` ``count`` times, redrawing on NearPoleError.

    Returns (values, attempted).  Redraws are bounded per accepted sample.
    """
    values = []
    attempted = 0
    for _ in range(count):
        for _retry in range(MAX_REDRAWS):
            attempted += 1
            try:
                values.append(evaluate(sampler(rng)))
                break
            except NearPoleError:
                continue
        else:
            raise NearPoleError("exceeded the redraw budget while sampling")
    return values, attempted

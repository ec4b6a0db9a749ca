import cmath

import numpy as np
import pytest

from bc1lab import rng as rngmod
from bc1lab.errors import NearPoleError, SingularError
from bc1lab.matrix import IDENTITY, SIGMA, commutator, det2, inv2, kron, lift1, lift2, mat2, sigma_flip
from bc1lab.numerics import bracket_terms, derivative, poisson_bracket, rel_residual, rk4_step
from bc1lab.records import (
    VerificationRecord,
    canonical_json,
    decode_complex,
    digest,
    dump_report,
    encode,
    strip_timing,
    validate_report,
)


def test_rel_residual_convention():
    assert rel_residual(3.0, 3.0) == 0
    assert rel_residual(0.0, 1e-3) == pytest.approx(1e-3)
    assert rel_residual(1000.0, 1001.0) == pytest.approx(1 / 1001)
    assert rel_residual(np.eye(2), 2 * np.eye(2)) == pytest.approx(0.5)


def test_derivative_fourth_order():
    f = cmath.exp
    for x in (0.3, 1.2 - 0.4j, 25.0):
        assert abs(derivative(f, x) - f(x)) / abs(f(x)) < 1e-10


def test_derivative_error_shrinks_with_step():
    f, x = cmath.sin, 0.7 + 0.2j
    e1 = abs(derivative(f, x, h=0.1, richardson=False) - cmath.cos(x))
    e2 = abs(derivative(f, x, h=0.05, richardson=False) - cmath.cos(x))
    assert 12 < e1 / e2 < 20


def test_canonical_bracket():
    assert abs(poisson_bracket(lambda p, q: p, lambda p, q: q, 0.3, 0.2) - 1) < 1e-12
    left, right = bracket_terms(lambda p, q: p * q, lambda p, q: p * q, 0.4, 1.1)
    assert left == pytest.approx(right)


def test_rk4_local_error_is_fifth_order():
    errs = []
    for dt in (0.1, 0.05):
        y = rk4_step(lambda v: -v, np.array([1.0 + 0j]), dt)
        errs.append(abs(y[0] - np.exp(-dt)))
    assert 25 < errs[0] / errs[1] < 40


def test_pauli_flip_and_algebra():
    for a in (1, 2, 3):
        assert np.array_equal(sigma_flip(a), SIGMA[4 - a])
        assert np.allclose(sigma_flip(a) @ sigma_flip(a), IDENTITY)
    assert np.allclose(commutator(SIGMA[1], SIGMA[2]), 2j * SIGMA[3])


def test_inverse_and_singular():
    m = mat2(1 + 1j, 2, 0.5, -1j)
    assert np.allclose(inv2(m) @ m, IDENTITY, atol=1e-12)
    assert det2(m) == pytest.approx((1 + 1j) * -1j - 1)
    with pytest.raises(SingularError):
        inv2(mat2(1, 2, 2, 4))


def test_kronecker_lifts(rng):
    a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
    assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)
    assert np.allclose(lift1(a) @ lift2(b), kron(a, b))


def test_streams_are_independent_and_reproducible():
    a = rngmod.stream(5, "x").random(4)
    b = rngmod.stream(5, "x").random(4)
    c = rngmod.stream(5, "y").random(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_draw_counts_redraws(torus):
    gen = rngmod.stream(1, "redraw")
    calls = {"n": 0}

    def evaluate(x):
        calls["n"] += 1
        if calls["n"] % 2:
            raise NearPoleError("odd")
        return x

    values, attempted = rngmod.draw(gen, lambda g: g.random(), evaluate, 3)
    assert len(values) == 3 and attempted == 6


def test_guard_rejects_half_periods(torus):
    with pytest.raises(NearPoleError):
        rngmod.guard_half(torus, 0.5 + 0.01j)
    rngmod.guard_half(torus, 0.2 + 0.3j)


def test_complex_encoding_round_trip():
    data = {"z": 1 + 2j, "xs": (0.5, 3j)}
    enc = encode(data)
    assert enc == {"z": [1.0, 2.0], "xs": [0.5, [0.0, 3.0]]}
    assert decode_complex(enc["z"]) == 1 + 2j
    assert canonical_json(data) == canonical_json(dict(reversed(list(data.items()))))
    assert digest(data) == digest({"xs": (0.5, 3j), "z": 1 + 2j})


def test_record_contract(tmp_path):
    rec = VerificationRecord("s", "t", 3, 2, 1e-11, 1e-10, 42, "abc", 0.5, {"v": 1j})
    assert rec.passed
    assert not VerificationRecord("s", "t", 1, 1, 2.0, 1.0, 42, "abc").passed
    with pytest.raises(ValueError):
        VerificationRecord("s", "t", 1, 2, 0.0, 1.0, 42, "abc")
    path = tmp_path / "r.json"
    dump_report([rec], path)
    import json

    report = json.loads(path.read_text())
    validate_report(report)
    assert report[0]["details"]["v"] == [0.0, 1.0]
    assert "wall_time" not in strip_timing(report)[0]

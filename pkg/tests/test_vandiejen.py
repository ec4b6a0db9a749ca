import csv

import numpy as np
import pytest

from bc1lab import vandiejen as vd
from bc1lab.config import RunConfig
from bc1lab.errors import PoleApproachError
from bc1lab.matrix import det2, inv2
from bc1lab.numerics import rel_residual
from bc1lab.potential import CouplingSet
from bc1lab.suites import run_flow, simulation_params
from bc1lab.vandiejen import FlowId, ModelParams, PhaseState

from scenes import scenes

SCENES = scenes("vandiejen-tests", 6)


@pytest.mark.parametrize("flow", list(FlowId), ids=lambda f: f.value)
def test_vector_field_is_hamiltonian(flow):
    for s in SCENES:
        assert vd.gradient_residual(flow, s.state, s.params) < 1e-8


@pytest.mark.parametrize("flow", list(FlowId), ids=lambda f: f.value)
def test_lax_equation(flow):
    for s in SCENES:
        assert vd.lax_residual(flow, s.z, s.state, s.params) < 1e-7


def test_lax_ordering_is_not_reversible():
    s = SCENES[0]
    assert vd.lax_residual(FlowId.VD4_1, s.z, s.state, s.params, sign=-1) > 1e-3


def test_factor_entry_symmetry():
    for s in SCENES:
        lax = vd.lax_symmetric(s.z, s.state, s.params)[0]
        flipped = vd.lax_symmetric(s.z, PhaseState(-s.state.p, -s.state.q), s.params)[0]
        assert rel_residual(lax[1, 1], flipped[0, 0]) < 1e-13
        assert rel_residual(lax[1, 0], flipped[0, 1]) < 1e-13


def test_product_and_gauged_product_agree():
    for s in SCENES:
        L, Lbar = vd.lax_symmetric(s.z, s.state, s.params)
        assert rel_residual(vd.lax_product(s.z, s.state, s.params), L @ Lbar) < 1e-15
        d = vd.chalykh_gauge(s.state, s.params)
        gauged = d @ vd.lax_product(s.z, s.state, s.params) @ inv2(d)
        assert rel_residual(vd.lax_chalykh(s.z, s.state, s.params), gauged) < 1e-12


def test_traces_give_hamiltonians():
    for s in SCENES:
        assert rel_residual(np.trace(vd.lax_matrix(FlowId.VD4_1, s.z, s.state, s.params)),
                            vd.hamiltonian(FlowId.VD4_1, s.state, s.params)) < 1e-13


def test_h8_offset_from_trace_is_state_independent():
    s = SCENES[0]

    def offset(st):
        return np.trace(vd.lax_chalykh(s.z, st, s.params)) - vd.hamiltonian(FlowId.VD8, st, s.params)

    assert rel_residual(offset(s.state), offset(SCENES[1].state)) < 1e-9


def test_h1_product_offset_needs_equal_eta():
    s, other = SCENES[0], SCENES[1].state
    equal = ModelParams(s.params.c, s.params.eta, s.params.nu, s.params.torus, s.params.eta, s.params.nu_bar)

    def offset(st, p):
        return vd.h1(st, p) * vd.h1(st, p, bar=True) - vd.hamiltonian(FlowId.VD8, st, p)

    assert rel_residual(offset(s.state, equal), offset(other, equal)) < 1e-9
    assert rel_residual(offset(s.state, s.params), offset(other, s.params)) > 1e-3


def test_rs_reduction():
    rs_nu = CouplingSet((1, 0, 0, 0)).dual()
    for s in SCENES:
        p = s.params
        reduced = ModelParams(p.c / 2, p.eta, rs_nu, p.torus)
        assert rel_residual(vd.rs_lax_reduced(s.z, s.state, p), vd.lax_symmetric(s.z, s.state, reduced)[0]) < 1e-12


def test_inozemtsev_determinant_tracks_hamiltonian():
    s = SCENES[0]
    p = s.params

    def offset(st):
        lax = vd.inozemtsev_lax(s.z, st, p)
        return det2(lax) + vd.hamiltonian(FlowId.INOZ, st, p) / 2

    assert abs(np.trace(vd.inozemtsev_lax(s.z, s.state, p))) == 0
    assert rel_residual(offset(s.state), offset(SCENES[2].state)) < 1e-12


def test_limit_halving(torus):
    nu = CouplingSet((0.7, 0.2, -0.1, 0.3))
    rows = vd.limit_check((100.0, 200.0, 1000.0, 2000.0), 0.21 + 0.13j, PhaseState(0.3, 0.27 + 0.05j), nu, torus)
    r = [row[1] for row in rows]
    assert 0.4 <= r[1] / r[0] <= 0.6
    assert 0.4 <= r[3] / r[2] <= 0.6


def test_limit_requires_leading_dual_coupling(torus):
    with pytest.raises(ValueError):
        vd.limit_check((100.0,), 0.2, PhaseState(0.1, 0.3), CouplingSet((1, -1, 0, 0)), torus)


def test_model_params_validation(torus, nu):
    with pytest.raises(ValueError):
        ModelParams(0, 0.3j, nu, torus)
    p = ModelParams(2.0, 0.3j, nu, torus)
    assert p.eta_bar == p.eta and p.nu_bar is p.nu


def test_conservation_default_run():
    cfg = RunConfig()
    traj = run_flow(cfg, "vd4-1", 1e-3, 300)
    assert not traj.aborted
    assert max(traj.drifts().values()) < 1e-8


def test_zero_steps_gives_header_only_csv(tmp_path):
    traj = run_flow(RunConfig(), "vd4-1", 1e-3, 0)
    path = tmp_path / "t.csv"
    vd.write_csv(traj, path)
    rows = list(csv.reader(path.open()))
    assert rows == [list(vd.CSV_HEADER)]


def test_csv_rows_per_step(tmp_path):
    traj = run_flow(RunConfig(), "vd4-1", 1e-3, 5)
    path = tmp_path / "t.csv"
    vd.write_csv(traj, path)
    rows = list(csv.reader(path.open()))
    assert len(rows) == 6 and float(rows[1][0]) == pytest.approx(1e-3)


def test_pole_approach_returns_partial_trajectory():
    cfg = RunConfig()
    start = PhaseState(0.0, 0.051)
    traj = vd.integrate(FlowId.INOZ, start, ModelParams(1.0, 0.25, CouplingSet((1, 0, 0, 0)), cfg.torus),
                        1e-2, 500)
    assert traj.aborted and len(traj.times) < 501
    with pytest.raises(PoleApproachError) as info:
        vd.integrate(FlowId.INOZ, start, ModelParams(1.0, 0.25, CouplingSet((1, 0, 0, 0)), cfg.torus),
                     1e-2, 500, strict=True)
    assert info.value.trajectory is not None


def test_simulation_couplings_are_duals():
    cfg = RunConfig()
    params = simulation_params(cfg)
    assert params.nu.dual().nu == pytest.approx(cfg.simulation["nu_breve"])

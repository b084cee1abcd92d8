"""Master-equation integration: invariants and analytic limits."""

import numpy as np
import pytest

from qdcascade import (
    DecayParams,
    DotParams,
    PulseParams,
    Scenario,
    TimeGrid,
    evolve,
    evolve_pure_4level,
)
from qdcascade.dynamics import MasterEquation, default_grid
from qdcascade.hilbert import BasisState, DotLevel

from conftest import biexciton_state, make_scenario


def ground_state(space):
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    i = space.index(BasisState(DotLevel.G, 0, 0))
    rho[i, i] = 1.0
    return rho


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0.0)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, dt_out=0.0)
    assert len(TimeGrid(0.0, 10.0, 1.0).times()) == 11


def test_trace_hermiticity_positivity_preserved():
    sc = make_scenario()
    grid = TimeGrid(-10.8, 40.0, 2.0)
    traj = evolve(ground_state(sc.space()), sc, grid, store_states=True)
    for rho in traj.rhos:
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-7)
        assert np.linalg.norm(rho - rho.conj().T) < 1e-8
        assert np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() > -1e-7


def test_exciton_decay_rate_no_cavity():
    """A bare exciton decays exponentially at gamma_x."""
    sc = Scenario(
        dot=DotParams(), cavity=None,
        decay=DecayParams(gamma_x=0.01, gamma_b=0.02), pulses=(),
    )
    space = sc.space()
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[DotLevel.X, DotLevel.X] = 1.0
    traj = evolve(rho0, sc, TimeGrid(0.0, 200.0, 10.0))
    assert np.allclose(
        traj.occupations["X"], np.exp(-0.01 * traj.times), atol=1e-7
    )


def test_biexciton_cascade_populations_no_cavity():
    """B -> X/Y -> G rate equations hold for the diagonal of rho."""
    sc = Scenario(
        dot=DotParams(), cavity=None,
        decay=DecayParams(gamma_x=0.01, gamma_b=0.02), pulses=(),
    )
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[DotLevel.B, DotLevel.B] = 1.0
    traj = evolve(rho0, sc, TimeGrid(0.0, 300.0, 5.0))
    gb, gx = 0.02, 0.01
    t = traj.times
    b = np.exp(-gb * t)
    # each exciton branch: dX/dt = (gb/2) B - gx X
    x = (gb / 2) / (gx - gb) * (np.exp(-gb * t) - np.exp(-gx * t))
    assert np.allclose(traj.occupations["B"], b, atol=1e-7)
    assert np.allclose(traj.occupations["X"], x, atol=1e-7)
    assert np.allclose(traj.occupations["Y"], x, atol=1e-7)
    total = sum(traj.occupations[k] for k in "GXYB")
    assert np.allclose(total, 1.0, atol=1e-7)


def test_rabi_oscillation_resonant_pulse():
    """An X-polarized resonant pi pulse inverts G -> X when delta_B decouples B."""
    sc = Scenario(
        dot=DotParams(delta_b=1000.0),  # push |B> far out of resonance
        cavity=None,
        decay=DecayParams(gamma_x=0.0, gamma_b=0.0),
        pulses=(PulseParams(alpha=1.0, sigma=2.7, delta=0.0, polarization="X"),),
    )
    traj = evolve(ground_state(sc.space()), sc, TimeGrid(-10.8, 10.8, 1.0))
    assert traj.occupations["X"][-1] == pytest.approx(1.0, abs=1e-3)
    assert traj.occupations["Y"][-1] == pytest.approx(0.0, abs=1e-6)


def test_x_y_symmetry_diagonal_drive():
    """Diagonal polarization treats both linear components identically."""
    sc = make_scenario()
    traj = evolve(ground_state(sc.space()), sc, TimeGrid(-10.8, 60.0, 2.0))
    assert np.allclose(traj.occupations["X"], traj.occupations["Y"], atol=1e-9)
    assert np.allclose(traj.n_x, traj.n_y, atol=1e-9)


def test_photon_emission_into_cavity():
    """Starting from |B>, photons appear in the cavity modes and leak out."""
    sc = make_scenario(pulses=())
    traj = evolve(biexciton_state(sc.space()), sc, TimeGrid(0.0, 600.0, 1.0))
    assert traj.n_x.max() > 0.02
    assert traj.n_x[-1] < 1e-3
    assert traj.occupations["G"][-1] == pytest.approx(1.0, abs=1e-3)


def test_liouvillian_matches_rhs():
    sc = make_scenario()
    eq = MasterEquation(sc)
    rng = np.random.default_rng(7)
    r = rng.normal(size=(eq.dim, eq.dim)) + 1j * rng.normal(size=(eq.dim, eq.dim))
    rho = r + r.conj().T
    for t in (None, 0.5):
        lv = eq.liouvillian(t)
        direct = eq.rhs(t if t is not None else 1e9, rho)
        assert np.allclose(lv @ rho.ravel(), direct.ravel(), atol=1e-10)


def test_pure_4level_matches_master_equation():
    """With no dissipation the pure path equals the density-matrix path."""
    pulses = (PulseParams(alpha=5.0, sigma=2.7, delta=-5.0),)
    dot = DotParams(delta_b=1.0)
    grid = TimeGrid(-10.8, 16.2, 27.0)
    psi0 = np.zeros(4, dtype=complex)
    psi0[DotLevel.G] = 1.0
    pure = evolve_pure_4level(psi0, pulses, dot, grid)
    sc = Scenario(dot=dot, cavity=None,
                  decay=DecayParams(gamma_x=0.0, gamma_b=0.0), pulses=pulses)
    mixed = evolve(np.outer(psi0, psi0.conj()), sc, grid)
    for k in "GXYB":
        assert mixed.occupations[k][-1] == pytest.approx(
            pure.occupations[k][-1], abs=1e-7
        )


def test_default_grid_window():
    sc = make_scenario()
    grid = default_grid(sc)
    assert grid.t_start == pytest.approx(-10.8)
    assert grid.t_end == pytest.approx(600.0)


def test_trajectory_csv_roundtrip(tmp_path):
    sc = make_scenario(pulses=())
    traj = evolve(biexciton_state(sc.space()), sc, TimeGrid(0.0, 10.0, 5.0))
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    data = np.genfromtxt(path, delimiter=",", names=True)
    assert data.shape == (3,)
    assert data["occ_B"][0] == pytest.approx(1.0)

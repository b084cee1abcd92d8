"""Parameter containers, pulse envelope, Hamiltonian and dissipator assembly."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdcascade import hilbert, model
from qdcascade.constants import HBAR
from qdcascade.hilbert import BasisState, DotLevel, Truncation
from qdcascade.model import (
    CavityParams,
    DecayParams,
    DotParams,
    PulseParams,
    Scenario,
    SpaceMismatchError,
    envelope,
    scenario_from_yaml,
    scenario_to_yaml,
)

from conftest import make_scenario


def test_pulse_area_integrates_to_alpha():
    p = PulseParams(alpha=3.0, sigma=2.7, delta=0.0, t0=5.0)
    t = np.linspace(-40, 50, 20001)
    area = np.trapezoid(np.abs(envelope(p, t)), t)
    assert area == pytest.approx(3.0 * np.pi, rel=1e-8)


def test_envelope_phase_rotates_at_detuning():
    p = PulseParams(alpha=1.0, sigma=2.7, delta=-5.0, t0=0.0)
    t = 1.3
    expected_phase = np.exp(-1j * (p.delta / HBAR) * t)
    val = envelope(p, t)
    assert val / abs(val) == pytest.approx(expected_phase)


def test_envelope_peak_amplitude():
    p = PulseParams(alpha=2.0, sigma=2.7)
    assert abs(envelope(p, 0.0)) == pytest.approx(
        2.0 * np.pi / np.sqrt(2 * np.pi * 2.7**2)
    )


def test_polarization_weights():
    assert PulseParams(alpha=1.0).weights == pytest.approx((2**-0.5, 2**-0.5))
    assert PulseParams(alpha=1.0, polarization="X").weights == (1.0, 0.0)
    assert PulseParams(alpha=1.0, polarization="Y").weights == (0.0, 1.0)


def test_invalid_pulse_params():
    with pytest.raises(ValueError):
        PulseParams(alpha=-1.0)
    with pytest.raises(ValueError):
        PulseParams(alpha=1.0, sigma=0.0)
    with pytest.raises(ValueError):
        PulseParams(alpha=1.0, polarization="circular")


def test_negative_binding_energy_warns():
    with pytest.warns(UserWarning):
        DotParams(delta_b=-1.0)


def test_invalid_rates():
    with pytest.raises(ValueError):
        DecayParams(gamma_x=-0.01)
    with pytest.raises(ValueError):
        CavityParams(g=-0.1)


def test_rotating_frame_diagonal():
    sc = make_scenario()
    space = sc.space()
    h = model.static_hamiltonian(sc, space)
    for i, s in enumerate(space.basis):
        expected = -sc.dot.delta_b / 2 * (s.n_x + s.n_y)
        if s.dot_level == DotLevel.B:
            expected -= sc.dot.delta_b
        assert h[i, i].real == pytest.approx(expected)
        assert h[i, i].imag == 0.0


def test_fss_splits_excitons():
    sc = make_scenario(truncation=Truncation.reduced18())
    sc = Scenario(dot=DotParams(delta_b=1.0, delta_0=0.1), cavity=sc.cavity,
                  decay=sc.decay, pulses=(), truncation=sc.truncation)
    space = sc.space()
    h = model.static_hamiltonian(sc, space)
    ix = space.index(BasisState(DotLevel.X, 0, 0))
    iy = space.index(BasisState(DotLevel.Y, 0, 0))
    assert h[ix, ix].real == pytest.approx(0.05)
    assert h[iy, iy].real == pytest.approx(-0.05)


def test_hamiltonian_is_hermitian_during_pulse():
    sc = make_scenario()
    space = sc.space()
    for t in (-5.0, 0.0, 1.7, 8.0):
        h = model.hamiltonian_at(t, sc, space)
        assert np.allclose(h, h.conj().T)


def test_cavity_coupling_reduced_equals_projected_full2():
    """Reduced-basis operators are the full two-photon operators projected."""
    sc = make_scenario(truncation=Truncation.reduced18())
    red = sc.space()
    full_sc = make_scenario(truncation=Truncation.full(2))
    full = full_sc.space()
    h_red = model.static_hamiltonian(sc, red)
    h_full = model.static_hamiltonian(full_sc, full)
    idx = [full.index(s) for s in red.basis]
    assert np.allclose(h_red, h_full[np.ix_(idx, idx)])


def test_cavity_coupling_connects_exciton_to_two_photon_state():
    """|X,1,0> must couple to |G,2,0> through the h.c. term."""
    sc = make_scenario(truncation=Truncation.reduced18())
    space = sc.space()
    h = model.static_hamiltonian(sc, space)
    i = space.index(BasisState(DotLevel.G, 2, 0))
    j = space.index(BasisState(DotLevel.X, 1, 0))
    assert abs(h[i, j]) == pytest.approx(sc.cavity.g * np.sqrt(2))


def test_lindblad_operator_count_and_order():
    sc = make_scenario()
    ops = model.lindblad_ops(sc, sc.space())
    assert len(ops) == 6
    rates = [r for _, r in ops]
    assert rates == pytest.approx([0.01, 0.01, 0.01, 0.01, 0.12 / HBAR, 0.12 / HBAR])
    sc_free = make_scenario(cavity=False)
    assert len(model.lindblad_ops(sc_free, sc_free.space())) == 4


def test_space_mismatch_raises():
    sc = make_scenario(truncation=Truncation.reduced18())
    wrong = hilbert.build_space(Truncation.full(2))
    with pytest.raises(SpaceMismatchError):
        model.static_hamiltonian(sc, wrong)


def test_scenario_yaml_roundtrip():
    sc = make_scenario()
    assert scenario_from_yaml(scenario_to_yaml(sc)) == sc
    sc2 = make_scenario(cavity=False, pulses=(
        PulseParams(alpha=2.0, sigma=3.0, delta=-0.5, t0=1.0, polarization="X"),
    ))
    assert scenario_from_yaml(scenario_to_yaml(sc2)) == sc2


def test_scenario_from_bad_document():
    with pytest.raises(ValueError):
        scenario_from_yaml("pulses:\n  - {sigma_ps: 1.0}\n")
    with pytest.raises(ValueError):
        scenario_from_yaml("- not a mapping\n")


@settings(max_examples=25, deadline=None)
@given(
    alpha=st.floats(0.0, 40.0),
    delta=st.floats(-40.0, 10.0),
    t=st.floats(-20.0, 20.0),
)
def test_drive_hamiltonian_always_hermitian(alpha, delta, t):
    sc = make_scenario(pulses=(PulseParams(alpha=alpha, sigma=2.7, delta=delta),))
    h = model.drive_hamiltonian(t, sc, sc.space())
    assert np.allclose(h, h.conj().T)

"""Shared fixtures: reference scenarios and session-cached engines."""

from __future__ import annotations

import numpy as np
import pytest

from qdcascade import (
    CavityParams,
    CorrelationEngine,
    CorrelationGrid,
    DecayParams,
    DotParams,
    PulseParams,
    Scenario,
)
from qdcascade.hilbert import BasisState, DotLevel


SUPER_PULSES = (
    PulseParams(alpha=32.0, sigma=2.7, delta=-5.0, t0=0.0),
    PulseParams(alpha=12.8, sigma=2.7, delta=-12.96, t0=0.0),
)
# first biexciton-preparation maximum of the resonant two-photon pulse
# (see optimize_tpe_area; B_final = 0.9986 at delta_B = 1 meV, sigma = 2.7 ps)
TPE_AREA = 2.585287322998047
TPE_PULSE = (PulseParams(alpha=TPE_AREA, sigma=2.7, delta=-0.5, t0=0.0),)


def make_scenario(pulses=SUPER_PULSES, cavity=True, **kw) -> Scenario:
    return Scenario(
        dot=DotParams(delta_b=1.0, delta_0=0.0),
        cavity=CavityParams(g=0.06, kappa=0.12) if cavity else None,
        decay=DecayParams(gamma_x=0.01, gamma_b=0.02),
        pulses=pulses,
        **kw,
    )


def biexciton_state(space) -> np.ndarray:
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    i = space.index(BasisState(DotLevel.B, 0, 0))
    rho[i, i] = 1.0
    return rho


@pytest.fixture(scope="session")
def super_cavity_engine():
    sc = make_scenario()
    return CorrelationEngine(sc, CorrelationGrid.for_scenario(sc))


@pytest.fixture(scope="session")
def super_nocavity_engine():
    sc = make_scenario(cavity=False)
    return CorrelationEngine(sc, CorrelationGrid.for_scenario(sc))


@pytest.fixture(scope="session")
def tpe_nocavity_engine():
    sc = make_scenario(pulses=TPE_PULSE, cavity=False)
    return CorrelationEngine(sc, CorrelationGrid.for_scenario(sc))


@pytest.fixture(scope="session")
def initial_value_engine():
    sc = make_scenario(pulses=())
    return CorrelationEngine(
        sc,
        CorrelationGrid(t_start=0.0, t_end=600.0, dt=1.0, tau_end=600.0, dtau=0.5),
        rho0=biexciton_state(sc.space()),
    )

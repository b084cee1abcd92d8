"""Physical model: parameters, pulse envelopes, Hamiltonian, dissipators.

Everything is expressed in the frame rotating at the exciton frequency for
both the dot levels and the cavity modes. In this frame the diagonal reads
0 for |X>/|Y> (plus/minus delta_0/2 for finite fine-structure splitting),
-delta_B for |B| and -delta_B/2 per cavity photon; a laser pulse detuned by
``delta`` keeps only the residual phase exp(-i*delta*(t-t0)/hbar).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import yaml

from .constants import HBAR
from . import hilbert
from .hilbert import DotLevel, Mode, StateSpace, Truncation


@dataclass(frozen=True)
class DotParams:
    """Dot energies relative to the exciton, in meV."""

    delta_b: float = 1.0   # biexciton binding energy
    delta_0: float = 0.0   # fine-structure splitting

    def __post_init__(self):
        if self.delta_b < 0:
            warnings.warn("negative biexciton binding energy", stacklevel=2)


@dataclass(frozen=True)
class CavityParams:
    """Two-photon-resonant cavity: both modes sit at -delta_B/2."""

    g: float = 0.06      # coupling hbar*g, meV
    kappa: float = 0.12  # out-coupling hbar*kappa, meV

    def __post_init__(self):
        if self.g < 0 or self.kappa < 0:
            raise ValueError("cavity coupling and out-coupling must be >= 0")

    @property
    def kappa_rate(self) -> float:
        """Out-coupling rate in 1/ps."""
        return self.kappa / HBAR


@dataclass(frozen=True)
class DecayParams:
    gamma_x: float = 0.01  # exciton radiative rate, 1/ps
    gamma_b: float = 0.02  # biexciton radiative rate, 1/ps (default 2*gamma_x)

    def __post_init__(self):
        if self.gamma_x < 0 or self.gamma_b < 0:
            raise ValueError("decay rates must be >= 0")


@dataclass(frozen=True)
class PulseParams:
    """Gaussian pulse, diagonally polarized by default.

    ``alpha`` is the total pulse area in units of pi. For diagonal
    polarization each linear component is driven with Omega/sqrt(2) so the
    quoted area is the total; "X"/"Y" address a single component.
    """

    alpha: float          # pulse area / pi
    sigma: float = 2.7    # duration, ps
    delta: float = 0.0    # detuning from the G-X transition, meV
    t0: float = 0.0       # center time, ps
    polarization: str = "diagonal"

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("pulse duration must be positive")
        if self.alpha < 0:
            raise ValueError("pulse area must be >= 0")
        if self.polarization not in ("diagonal", "X", "Y"):
            raise ValueError(f"unknown polarization {self.polarization!r}")

    @property
    def weights(self) -> tuple[float, float]:
        """Amplitude fractions (X, Y) of the total envelope."""
        if self.polarization == "diagonal":
            r = 1 / np.sqrt(2)
            return (r, r)
        return (1.0, 0.0) if self.polarization == "X" else (0.0, 1.0)


def envelope(pulse: PulseParams, t) -> complex:
    """Rotating-frame complex amplitude Omega(t) in rad/ps.

    The Gaussian integrates to alpha exactly; the carrier is reduced to the
    residual phase exp(-i*delta*(t-t0)/hbar).
    """
    area = pulse.alpha * np.pi
    tt = np.asarray(t, dtype=float) - pulse.t0
    amp = area / np.sqrt(2 * np.pi * pulse.sigma**2)
    gauss = np.exp(-(tt**2) / (2 * pulse.sigma**2))
    phase = np.exp(-1j * (pulse.delta / HBAR) * tt)
    out = amp * gauss * phase
    return complex(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class Scenario:
    """Complete physical configuration of one simulation."""

    dot: DotParams = field(default_factory=DotParams)
    cavity: CavityParams | None = field(default_factory=CavityParams)
    decay: DecayParams = field(default_factory=DecayParams)
    pulses: tuple[PulseParams, ...] = ()
    truncation: Truncation = field(default_factory=Truncation.reduced18)

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))

    def space(self) -> StateSpace:
        """Dot-only space without a cavity, truncated dot+photon space with."""
        if self.cavity is None:
            return hilbert.dot_space()
        return hilbert.build_space(self.truncation)

    def pulse_window(self, width: float = 5.0) -> tuple[float, float]:
        """Finite support window [min(t0 - w*sigma), max(t0 + w*sigma)]."""
        if not self.pulses:
            return (0.0, 0.0)
        lo = min(p.t0 - width * p.sigma for p in self.pulses)
        hi = max(p.t0 + width * p.sigma for p in self.pulses)
        return (lo, hi)

    def drive_free_after(self) -> float:
        """Time after which the Hamiltonian is time-independent."""
        if not self.pulses:
            return -np.inf
        return max(p.t0 + 8.0 * p.sigma for p in self.pulses)


class SpaceMismatchError(ValueError):
    pass


def static_hamiltonian(scenario: Scenario, space: StateSpace) -> np.ndarray:
    """Drive-free part: dot diagonal, photon diagonal, cavity coupling (meV)."""
    _check_space(scenario, space)
    diag = np.zeros(space.dim)
    for i, s in enumerate(space.basis):
        if s.dot_level == DotLevel.X:
            diag[i] += scenario.dot.delta_0 / 2
        elif s.dot_level == DotLevel.Y:
            diag[i] -= scenario.dot.delta_0 / 2
        elif s.dot_level == DotLevel.B:
            diag[i] -= scenario.dot.delta_b
        diag[i] -= scenario.dot.delta_b / 2 * (s.n_x + s.n_y)
    h = np.diag(diag).astype(complex)
    if scenario.cavity is not None and scenario.cavity.g != 0:
        h += scenario.cavity.g * _cavity_coupling(space)
    return h


def _cavity_coupling(space: StateSpace) -> np.ndarray:
    """Matrix of a_X sigma_X^dag + a_Y sigma_Y^dag + h.c. on the space.

    Operator products are formed in an embedding space with full photon
    content and projected matrix-element-wise; composing already-projected
    operators would lose elements whose intermediate state (e.g. |X,2,0>)
    lies outside a reduced basis.
    """
    if space.truncation.is_reduced:
        embed = hilbert.build_space(hilbert.Truncation.full(2))
        full = _cavity_coupling(embed)
        idx = [embed.index(s) for s in space.basis]
        return full[np.ix_(idx, idx)]
    term = np.zeros((space.dim, space.dim), dtype=complex)
    for mode in (Mode.X, Mode.Y):
        a = hilbert.annihilation(mode, space)
        sig = hilbert.dot_transition(mode, space)
        term += a @ sig.conj().T
    return term + term.conj().T


def drive_hamiltonian(t: float, scenario: Scenario, space: StateSpace) -> np.ndarray:
    """Laser part -(hbar/2) * sum_S Omega_S(t) sigma_S^dag + h.c. (meV)."""
    _check_space(scenario, space)
    h = np.zeros((space.dim, space.dim), dtype=complex)
    if not scenario.pulses:
        return h
    omega_x = sum(p.weights[0] * envelope(p, t) for p in scenario.pulses)
    omega_y = sum(p.weights[1] * envelope(p, t) for p in scenario.pulses)
    for mode, omega in ((Mode.X, omega_x), (Mode.Y, omega_y)):
        sig_dag = hilbert.dot_transition(mode, space).conj().T
        h += (-HBAR / 2 * omega) * sig_dag
    return h + h.conj().T


def hamiltonian_at(t: float, scenario: Scenario, space: StateSpace) -> np.ndarray:
    """Full rotating-frame Hamiltonian at time t, in meV."""
    return static_hamiltonian(scenario, space) + drive_hamiltonian(t, scenario, space)


def lindblad_ops(scenario: Scenario, space: StateSpace) -> list[tuple[np.ndarray, float]]:
    """(operator, rate in 1/ps) pairs: radiative decay plus cavity out-coupling."""
    _check_space(scenario, space)
    proj = {lvl: hilbert.projector(lvl, space) for lvl in DotLevel}
    sig = {m: hilbert.dot_transition(m, space) for m in (Mode.X, Mode.Y)}
    # |G><S| parts decay with gamma_x, |S><B| parts with gamma_b/2
    ops = [
        (proj[DotLevel.G] @ sig[Mode.X], scenario.decay.gamma_x),
        (proj[DotLevel.G] @ sig[Mode.Y], scenario.decay.gamma_x),
        (proj[DotLevel.X] @ sig[Mode.X], scenario.decay.gamma_b / 2),
        (proj[DotLevel.Y] @ sig[Mode.Y], scenario.decay.gamma_b / 2),
    ]
    if scenario.cavity is not None:
        for mode in (Mode.X, Mode.Y):
            ops.append((hilbert.annihilation(mode, space), scenario.cavity.kappa_rate))
    return ops


def _check_space(scenario: Scenario, space: StateSpace) -> None:
    expected = scenario.space()
    if space.basis != expected.basis:
        raise SpaceMismatchError(
            f"state space {space.truncation.name()} does not match scenario "
            f"({expected.truncation.name()})"
        )


# --- configuration documents -------------------------------------------------

def scenario_to_dict(s: Scenario) -> dict:
    doc: dict = {
        "dot": {"delta_b_mev": s.dot.delta_b, "delta_0_mev": s.dot.delta_0},
        "decay": {
            "gamma_x_per_ps": s.decay.gamma_x,
            "gamma_b_per_ps": s.decay.gamma_b,
        },
        "pulses": [
            {
                "alpha_pi": p.alpha,
                "sigma_ps": p.sigma,
                "delta_mev": p.delta,
                "t0_ps": p.t0,
                **(
                    {}
                    if p.polarization == "diagonal"
                    else {"polarization": p.polarization}
                ),
            }
            for p in s.pulses
        ],
        "truncation": s.truncation.name(),
    }
    if s.cavity is not None:
        doc["cavity"] = {"g_mev": s.cavity.g, "kappa_mev": s.cavity.kappa}
    return doc


def scenario_from_dict(doc: dict) -> Scenario:
    try:
        dot = doc.get("dot", {})
        decay = doc.get("decay", {})
        cav = doc.get("cavity")
        pulses = tuple(
            PulseParams(
                alpha=float(p["alpha_pi"]),
                sigma=float(p.get("sigma_ps", 2.7)),
                delta=float(p.get("delta_mev", 0.0)),
                t0=float(p.get("t0_ps", 0.0)),
                polarization=str(p.get("polarization", "diagonal")),
            )
            for p in doc.get("pulses", [])
        )
        return Scenario(
            dot=DotParams(
                delta_b=float(dot.get("delta_b_mev", 1.0)),
                delta_0=float(dot.get("delta_0_mev", 0.0)),
            ),
            cavity=None
            if cav is None
            else CavityParams(
                g=float(cav.get("g_mev", 0.06)),
                kappa=float(cav.get("kappa_mev", 0.12)),
            ),
            decay=DecayParams(
                gamma_x=float(decay.get("gamma_x_per_ps", 0.01)),
                gamma_b=float(decay.get("gamma_b_per_ps", 0.02)),
            ),
            pulses=pulses,
            truncation=Truncation.from_name(doc.get("truncation", "reduced18")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid scenario document: {exc}") from exc


def scenario_to_yaml(s: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(s), sort_keys=False)


def scenario_from_yaml(text: str) -> Scenario:
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise ValueError("scenario document must be a mapping")
    return scenario_from_dict(doc)

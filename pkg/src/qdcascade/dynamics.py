"""Time evolution: Lindblad master equation and a pure-state fast path.

``evolve`` integrates drho/dt = -(i/hbar)[H(t), rho] + sum_k L_k rho with an
adaptive explicit Runge-Kutta scheme (DOP853); ``evolve_pure_4level`` runs the
dissipation-free four-level dot for the pulse optimizer.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .constants import HBAR
from . import hilbert, model
from .hilbert import DotLevel, Mode, StateSpace
from .model import DotParams, Scenario


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    dt_out: float = 1.0
    rtol: float = 1e-8
    atol: float = 1e-10

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.dt_out <= 0:
            raise ValueError("dt_out must be positive")

    def times(self) -> np.ndarray:
        n = int(round((self.t_end - self.t_start) / self.dt_out))
        return self.t_start + self.dt_out * np.arange(n + 1)


@dataclass
class Trajectory:
    """Time grid plus observable series; optional state snapshots."""

    times: np.ndarray
    occupations: dict[str, np.ndarray]       # keys G, X, Y, B
    n_x: np.ndarray
    n_y: np.ndarray
    rhos: np.ndarray | None = None           # (nt, dim, dim) if retained
    states: np.ndarray | None = None         # (nt, dim) for the pure path

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t_ps", "occ_G", "occ_X", "occ_Y", "occ_B", "N_X", "N_Y"])
            for i, t in enumerate(self.times):
                w.writerow(
                    [f"{t:.6g}"]
                    + [
                        f"{self.occupations[k][i]:.10g}"
                        for k in ("G", "X", "Y", "B")
                    ]
                    + [f"{self.n_x[i]:.10g}", f"{self.n_y[i]:.10g}"]
                )


def default_grid(scenario: Scenario, t_end: float | None = None, **kw) -> TimeGrid:
    """Simulation window [t0 - 4*sigma, t0 + 600 ps] around the pulses."""
    if scenario.pulses:
        start = min(p.t0 - 4 * p.sigma for p in scenario.pulses)
        anchor = min(p.t0 for p in scenario.pulses)
    else:
        start, anchor = 0.0, 0.0
    return TimeGrid(start, anchor + (600.0 if t_end is None else t_end), **kw)


def _observable_diagonals(space: StateSpace):
    occ = {
        lvl.name: np.array([1.0 if s.dot_level == lvl else 0.0 for s in space.basis])
        for lvl in DotLevel
    }
    nx = np.array([float(s.n_x) for s in space.basis])
    ny = np.array([float(s.n_y) for s in space.basis])
    return occ, nx, ny


class MasterEquation:
    """Precompiled right-hand side of the Lindblad equation for one scenario."""

    def __init__(self, scenario: Scenario, space: StateSpace | None = None):
        self.scenario = scenario
        self.space = scenario.space() if space is None else space
        self.h_static = model.static_hamiltonian(scenario, self.space)
        self.dim = self.space.dim
        # drive structure: H_d(t) = sum_S Omega_S(t) * base_S + h.c.
        self._drive_bases = tuple(
            -HBAR / 2 * hilbert.dot_transition(m, self.space).conj().T
            for m in (Mode.X, Mode.Y)
        )
        self._jumps = model.lindblad_ops(scenario, self.space)
        self._k = sum(
            0.5 * rate * op.conj().T @ op for op, rate in self._jumps
        ) if self._jumps else np.zeros((self.dim, self.dim))
        self._jump_pairs = [
            (np.sqrt(rate) * op, np.sqrt(rate) * op.conj().T)
            for op, rate in self._jumps
            if rate > 0
        ]

    def hamiltonian(self, t: float) -> np.ndarray:
        h = self.h_static.copy()
        if self.scenario.pulses:
            envs = [model.envelope(p, t) for p in self.scenario.pulses]
            for k in (0, 1):
                omega = sum(p.weights[k] * e for p, e in zip(self.scenario.pulses, envs))
                d = omega * self._drive_bases[k]
                h += d + d.conj().T
        return h

    def rhs(self, t: float, rho: np.ndarray) -> np.ndarray:
        h = self.hamiltonian(t)
        out = (-1j / HBAR) * (h @ rho - rho @ h)
        out -= self._k @ rho + rho @ self._k
        for o, od in self._jump_pairs:
            out += o @ rho @ od
        return out

    def rhs_batch(self, t: float, rhos: np.ndarray) -> np.ndarray:
        """Lindblad generator applied to a stack of matrices (..., dim, dim)."""
        h = self.hamiltonian(t)
        out = (-1j / HBAR) * (h @ rhos - rhos @ h)
        out -= self._k @ rhos + rhos @ self._k
        for o, od in self._jump_pairs:
            out += o @ rhos @ od
        return out

    def liouvillian(self, t: float | None = None) -> np.ndarray:
        """Dense superoperator on row-major vec(rho); drive-free if t is None."""
        h = self.h_static if t is None else self.hamiltonian(t)
        eye = np.eye(self.dim)
        lv = (-1j / HBAR) * (np.kron(h, eye) - np.kron(eye, h.T))
        lv -= np.kron(self._k, eye) + np.kron(eye, self._k.T)
        for o, od in self._jump_pairs:
            lv += np.kron(o, od.T)
        return lv


def _trajectory_from_rhos(times, rhos, space) -> Trajectory:
    occ_diag, nx_diag, ny_diag = _observable_diagonals(space)
    diags = np.einsum("tii->ti", rhos).real
    occ = {k: diags @ d for k, d in occ_diag.items()}
    return Trajectory(
        times=np.asarray(times),
        occupations=occ,
        n_x=diags @ nx_diag,
        n_y=diags @ ny_diag,
    )


def evolve(
    rho0: np.ndarray,
    scenario: Scenario,
    grid: TimeGrid,
    store_states: bool = False,
) -> Trajectory:
    """Integrate the master equation, recording observables on the grid."""
    eq = MasterEquation(scenario)
    dim = eq.dim
    if rho0.shape != (dim, dim):
        raise model.SpaceMismatchError(
            f"rho0 has shape {rho0.shape}, expected {(dim, dim)}"
        )
    times = grid.times()
    sol = solve_ivp(
        lambda t, y: eq.rhs(t, y.reshape(dim, dim)).ravel(),
        (times[0], times[-1]),
        rho0.astype(complex).ravel(),
        t_eval=times,
        method="DOP853",
        rtol=grid.rtol,
        atol=grid.atol,
    )
    if not sol.success:
        raise IntegrationError(f"master equation integration failed at t={sol.t[-1]:.3f} ps: {sol.message}")
    rhos = sol.y.T.reshape(-1, dim, dim)
    traj = _trajectory_from_rhos(sol.t, rhos, eq.space)
    if store_states:
        traj.rhos = rhos
    return traj


def evolve_pure_4level(
    psi0: np.ndarray,
    pulses,
    dot: DotParams,
    grid: TimeGrid,
) -> Trajectory:
    """Schroedinger evolution of the bare four-level dot (no dissipation)."""
    scenario = Scenario(
        dot=dot,
        cavity=None,
        decay=model.DecayParams(gamma_x=0.0, gamma_b=0.0),
        pulses=tuple(pulses),
    )
    space = scenario.space()
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (4,):
        raise ValueError("psi0 must be a 4-vector")
    eq = MasterEquation(scenario, space)
    times = grid.times()
    sol = solve_ivp(
        lambda t, y: (-1j / HBAR) * (eq.hamiltonian(t) @ y),
        (times[0], times[-1]),
        psi0,
        t_eval=times,
        method="DOP853",
        rtol=grid.rtol,
        atol=grid.atol,
    )
    if not sol.success:
        raise IntegrationError(f"pure-state integration failed at t={sol.t[-1]:.3f} ps: {sol.message}")
    states = sol.y.T
    rhos = np.einsum("ti,tj->tij", states, states.conj())
    traj = _trajectory_from_rhos(sol.t, rhos, space)
    traj.states = states
    return traj

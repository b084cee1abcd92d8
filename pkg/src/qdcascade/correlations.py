"""Two-time correlation functions and the two-photon density matrix.

G2_{AB,CD}(t, tau) is evaluated with the quantum regression theorem: seed
rho~ = s_C rho(t) s_A^dag, propagate it from t to t+tau under the full
Liouvillian, and take tr[s_B^dag s_D rho~]. The transition operators s_X/s_Y
are the cavity annihilation operators when a cavity is present and the dot
polarization operators otherwise.

Once all pulses are over the Liouvillian is time independent, so the tau leg
is evaluated from the eigendecomposition of the drive-free superoperator;
only outer times inside the pulse window need an ODE propagation.
"""

from __future__ import annotations

import csv
import itertools
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import hilbert
from .hilbert import DotLevel, BasisState, Mode
from .dynamics import IntegrationError, MasterEquation, TimeGrid, Trajectory, evolve
from .model import Scenario

POLS = ("X", "Y")
# fixed two-photon basis ordering
PAIR_BASIS = ("XX", "XY", "YX", "YY")


class DegenerateEmissionError(RuntimeError):
    """Raised when the integrated correlation signal carries no photon pairs."""


@dataclass(frozen=True)
class CorrelationGrid:
    """Outer-time and delay grids for the double integration, in ps."""

    t_start: float
    t_end: float
    dt: float = 1.0
    tau_end: float = 600.0
    dtau: float = 0.5
    tau_start: float = 0.0

    def __post_init__(self):
        if self.dt <= 0 or self.dtau <= 0:
            raise ValueError("grid steps must be positive")
        if self.t_end <= self.t_start or self.tau_end <= self.tau_start:
            raise ValueError("grid windows must have positive extent")

    @classmethod
    def for_scenario(cls, scenario: Scenario, window: float = 600.0,
                     dt: float = 1.0, dtau: float = 0.5) -> "CorrelationGrid":
        start = scenario.pulse_window(4.0)[0] if scenario.pulses else 0.0
        return cls(t_start=start, t_end=start + window, dt=dt,
                   tau_end=window, dtau=dtau)

    def outer_times(self) -> np.ndarray:
        n = int(round((self.t_end - self.t_start) / self.dt))
        return self.t_start + self.dt * np.arange(n + 1)

    def taus(self) -> np.ndarray:
        n = int(round((self.tau_end - self.tau_start) / self.dtau))
        return self.tau_start + self.dtau * np.arange(n + 1)

    def halved(self) -> "CorrelationGrid":
        return CorrelationGrid(self.t_start, self.t_end, self.dt / 2,
                               self.tau_end, self.dtau / 2, self.tau_start)


@dataclass(frozen=True)
class TwoPhotonMatrix:
    """Normalized 4x4 polarization density matrix with diagnostics."""

    matrix: np.ndarray           # trace-normalized, hermitized
    norm: float                  # raw trace of the double integral
    hermiticity_defect: float    # relative defect before symmetrization
    min_eigenvalue: float

    def fidelity_phi_plus(self) -> float:
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1 / np.sqrt(2)
        return float((phi.conj() @ self.matrix @ phi).real)

    def to_jsonable(self) -> dict:
        return {
            "basis": list(PAIR_BASIS),
            "matrix_re": self.matrix.real.tolist(),
            "matrix_im": self.matrix.imag.tolist(),
            "norm": self.norm,
            "hermiticity_defect": self.hermiticity_defect,
            "min_eigenvalue": self.min_eigenvalue,
        }


def _block_index(a: str, b: str, c: str, d: str) -> tuple[int, int]:
    """Map G2_{AB,CD} onto the engine's internal (B,D) x (A,C) block axes."""
    return PAIR_BASIS.index(b + d), PAIR_BASIS.index(a + c)


def _trapezoid_weights(x: np.ndarray) -> np.ndarray:
    w = np.empty_like(x)
    w[0] = (x[1] - x[0]) / 2
    w[-1] = (x[-1] - x[-2]) / 2
    w[1:-1] = (x[2:] - x[:-2]) / 2
    return w


class CorrelationEngine:
    """Shared state for all correlation quantities of one scenario."""

    def __init__(
        self,
        scenario: Scenario,
        grid: CorrelationGrid | None = None,
        rho0: np.ndarray | None = None,
        rtol: float = 1e-8,
        atol: float = 1e-10,
    ):
        self.scenario = scenario
        self.grid = grid or CorrelationGrid.for_scenario(scenario)
        self.eq = MasterEquation(scenario)
        self.space = self.eq.space
        self.rtol, self.atol = rtol, atol
        dim = self.space.dim

        if scenario.cavity is not None:
            self.s_ops = {p: hilbert.annihilation(Mode[p], self.space) for p in POLS}
        else:
            self.s_ops = {p: hilbert.dot_transition(Mode[p], self.space) for p in POLS}

        if rho0 is None:
            ground = BasisState(DotLevel.G, 0, 0)
            rho0 = np.zeros((dim, dim), dtype=complex)
            rho0[self.space.index(ground), self.space.index(ground)] = 1.0
        self.rho0 = rho0

        self._trajectory: Trajectory | None = None
        self._eig = None
        self._raw_integral: np.ndarray | None = None

    # -- outer-time state snapshots ------------------------------------------

    @property
    def trajectory(self) -> Trajectory:
        if self._trajectory is None:
            g = self.grid
            t_init = min(g.t_start, self.scenario.pulse_window(4.0)[0]) \
                if self.scenario.pulses else g.t_start
            rho = self.rho0
            if t_init < g.t_start:
                pre = evolve(rho, self.scenario,
                             TimeGrid(t_init, g.t_start, g.t_start - t_init,
                                      rtol=self.rtol, atol=self.atol),
                             store_states=True)
                rho = pre.rhos[-1]
            self._trajectory = evolve(
                rho, self.scenario,
                TimeGrid(g.t_start, g.t_end, g.dt, rtol=self.rtol, atol=self.atol),
                store_states=True,
            )
        return self._trajectory

    def rho_at_index(self, i: int) -> np.ndarray:
        return self.trajectory.rhos[i]

    # -- drive-free propagator ----------------------------------------------

    def _eigensystem(self):
        if self._eig is None:
            lv = self.eq.liouvillian(None)
            d, v = np.linalg.eig(lv)
            vinv = np.linalg.inv(v)
            err = np.linalg.norm((v * d) @ vinv - lv) / max(np.linalg.norm(lv), 1e-300)
            if err > 1e-7:
                warnings.warn(
                    f"drive-free Liouvillian eigendecomposition defect {err:.2e}",
                    stacklevel=2,
                )
            # observable rows tr[s_B^dag s_D rho] = vec((s_B^dag s_D)^T) . vec(rho)
            self._eig = (d, v, vinv, self._observable_rows() @ v)
        return self._eig

    # -- quantum regression --------------------------------------------------

    def _seed(self, rho: np.ndarray, a: str, c: str) -> np.ndarray:
        return self.s_ops[c] @ rho @ self.s_ops[a].conj().T

    def _propagate_seeds_ode(self, seeds: np.ndarray, t_from: float,
                             t_eval: np.ndarray) -> np.ndarray:
        """Propagate a (4, dim, dim) stack under the full Liouvillian."""
        dim = self.space.dim

        def rhs(t, y):
            r = y.reshape(4, dim, dim)
            return self.eq.rhs_batch(t, r).ravel()

        sol = solve_ivp(
            rhs, (t_from, t_eval[-1]), seeds.ravel(), t_eval=t_eval,
            method="DOP853", rtol=self.rtol, atol=self.atol,
        )
        if not sol.success:
            raise IntegrationError(f"regression propagation failed: {sol.message}")
        return sol.y.T.reshape(len(t_eval), 4, dim, dim)

    def _observable_rows(self) -> np.ndarray:
        if not hasattr(self, "_w_rows"):
            self._w_rows = np.stack([
                (self.s_ops[b].conj().T @ self.s_ops[d_]).T.ravel()
                for b, d_ in itertools.product(POLS, POLS)
            ])
        return self._w_rows

    def _exp_taus(self, d: np.ndarray) -> np.ndarray:
        if not hasattr(self, "_e_taus"):
            self._e_taus = np.exp(np.outer(d, self.grid.taus()))
        return self._e_taus

    def _g2_vs_tau(self, i: int) -> np.ndarray:
        """G2 for outer index i: array (4 bd, 4 ac, ntau)."""
        taus = self.grid.taus()
        t = self.trajectory.times[i]
        rho = self.rho_at_index(i)
        seeds = np.stack([
            self._seed(rho, a, c) for a, c in itertools.product(POLS, POLS)
        ])  # (A,C) order: XX, XY, YX, YY
        d, v, vinv, wv = self._eigensystem()
        out = np.empty((4, 4, len(taus)), dtype=complex)
        t_free = self.scenario.drive_free_after()

        if t >= t_free or t + taus[0] >= t_free:
            coef = vinv @ seeds.reshape(4, -1).T        # (dim^2, 4ac)
            e = self._exp_taus(d)
            for ac in range(4):
                out[:, ac, :] = (wv * coef[:, ac]) @ e
            return out

        # pulse still active: ODE through the drive window, eigenbasis after
        tau_cut = min(t_free - t, taus[-1])
        n_ode = int(np.searchsorted(taus, tau_cut + 1e-12, side="right"))
        t_eval = t + taus[:n_ode]
        t_switch = t + tau_cut
        if n_ode == 0 or t_eval[-1] < t_switch - 1e-12:
            t_eval = np.concatenate([t_eval, [t_switch]])
        states = self._propagate_seeds_ode(seeds, t, t_eval)
        w = self._observable_rows()
        for j in range(n_ode):
            out[:, :, j] = w @ states[j].reshape(4, -1).T
        if n_ode < len(taus):
            coef = vinv @ states[-1].reshape(4, -1).T
            rest = t + taus[n_ode:] - t_switch
            for ac in range(4):
                out[:, ac, n_ode:] = (wv * coef[:, ac]) @ np.exp(np.outer(d, rest))
        return out

    def g2(self, a: str, b: str, c: str, d: str, t: float, tau: float) -> complex:
        """Single G2_{AB,CD}(t, tau) value; t must lie on the outer grid."""
        times = self.trajectory.times
        i = int(np.argmin(np.abs(times - t)))
        if abs(times[i] - t) > 1e-9:
            raise ValueError(f"t={t} is not an outer-grid time")
        if tau == 0.0:
            return self.g2_tau0(a, b, c, d, times[i])
        taus = self.grid.taus()
        j = int(np.argmin(np.abs(taus - tau)))
        if abs(taus[j] - tau) > 1e-9:
            raise ValueError(f"tau={tau} is not an inner-grid delay")
        return complex(self._g2_vs_tau(i)[_block_index(a, b, c, d) + (j,)])

    def g2_tau0(self, a: str, b: str, c: str, d: str, t: float) -> complex:
        """Direct normally ordered expectation <s_A^dag s_B^dag s_D s_C>(t)."""
        times = self.trajectory.times
        i = int(np.argmin(np.abs(times - t)))
        rho = self.rho_at_index(i)
        op = (self.s_ops[a].conj().T @ self.s_ops[b].conj().T
              @ self.s_ops[d] @ self.s_ops[c])
        return complex(np.trace(op @ rho))

    def g2_tau0_series(self, a: str, b: str, c: str, d: str) -> np.ndarray:
        op = (self.s_ops[a].conj().T @ self.s_ops[b].conj().T
              @ self.s_ops[d] @ self.s_ops[c])
        return np.einsum("ij,tji->t", op, self.trajectory.rhos)

    # -- double integrals ----------------------------------------------------

    def raw_integral(self) -> np.ndarray:
        """Unnormalized 4x4 matrix S[(A,B),(C,D)] of double-integrated G2."""
        if self._raw_integral is None:
            taus = self.grid.taus()
            times = self.trajectory.times
            wt = _trapezoid_weights(times)
            wtau = _trapezoid_weights(taus)
            acc = np.zeros((4, 4), dtype=complex)   # axes (B,D) x (A,C)
            for i in range(len(times)):
                acc += wt[i] * (self._g2_vs_tau(i) @ wtau)
            s = np.empty((4, 4), dtype=complex)
            for row, (a, b) in enumerate(PAIR_BASIS):
                for col, (c, d) in enumerate(PAIR_BASIS):
                    s[row, col] = acc[_block_index(a, b, c, d)]
            self._raw_integral = s
        return self._raw_integral

    def two_photon_matrix(self, trace_floor: float = 1e-12) -> TwoPhotonMatrix:
        s = self.raw_integral()
        norm = float(np.trace(s).real)
        if not norm > trace_floor:
            raise DegenerateEmissionError(
                f"integrated pair signal {norm:.3e} below floor {trace_floor:.3e}"
            )
        m = s / norm
        defect = float(np.linalg.norm(m - m.conj().T) / np.linalg.norm(m))
        m = (m + m.conj().T) / 2
        m /= np.trace(m).real
        evals = np.linalg.eigvalsh(m)
        return TwoPhotonMatrix(
            matrix=m,
            norm=norm,
            hermiticity_defect=defect,
            min_eigenvalue=float(evals.min()),
        )

    def pair_counts(self) -> dict[str, float]:
        """N^P_{AB} = kappa^2 * double integral of G2_{AB,AB}."""
        if self.scenario.cavity is None:
            raise ValueError("photon-pair counts require a cavity scenario")
        kappa = self.scenario.cavity.kappa_rate
        s = self.raw_integral()
        return {
            pair: float(kappa**2 * s[k, k].real) for k, pair in enumerate(PAIR_BASIS)
        }

    # -- exports -------------------------------------------------------------

    def export_g2_csv(self, path, indices=None, t_stride: int = 1,
                      tau_stride: int = 1) -> None:
        """CSV of G2 slices: t_ps, tau_ps, re, im, A, B, C, D."""
        if indices is None:
            indices = [("X", "X", "X", "X")]
        times = self.trajectory.times
        taus = self.grid.taus()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t_ps", "tau_ps", "re", "im", "A", "B", "C", "D"])
            for i in range(0, len(times), t_stride):
                block = self._g2_vs_tau(i)
                for a, b, c, d in indices:
                    row, col = _block_index(a, b, c, d)
                    for j in range(0, len(taus), tau_stride):
                        val = block[row, col, j]
                        w.writerow([
                            f"{times[i]:.6g}", f"{taus[j]:.6g}",
                            f"{val.real:.10g}", f"{val.imag:.10g}", a, b, c, d,
                        ])

"""Search for swing-up pulse parameters maximizing biexciton preparation.

The objective is the final biexciton population of the dissipation-free
four-level dot driven by two simultaneous diagonally polarized pulses; the
pulse area of the second pulse is capped at 35 pi. A coarse deterministic
grid seeds a bounded Nelder-Mead refinement of the top cells.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize

from .constants import HBAR
from .dynamics import IntegrationError, TimeGrid, evolve_pure_4level
from .hilbert import DotLevel
from .model import DotParams, PulseParams, envelope


@dataclass(frozen=True)
class SearchSpec:
    delta_b: float = 1.0           # meV
    alpha1: float = 32.0           # pi units
    delta1: float = -5.0           # meV
    sigma: float = 2.7             # ps
    t0: float = 0.0                # common pulse center, ps
    delta_0: float = 0.0           # meV
    alpha2_bounds: tuple[float, float] = (0.0, 35.0)     # pi units
    delta2_bounds: tuple[float, float] = (-35.0, -5.0)   # meV
    n_alpha2: int = 36
    n_delta2: int = 31
    n_refine: int = 5              # seed cells passed to the simplex stage
    refine_fatol: float = 1e-7
    rtol: float = 1e-8
    atol: float = 1e-10


@dataclass(frozen=True)
class OptimizationResult:
    alpha2: float
    delta2: float
    b_final: float
    evaluations: int
    seed_best: tuple[float, float, float]  # (alpha2, delta2, b_final) before refinement


def objective(alpha2: float, delta2: float, spec: SearchSpec) -> float:
    """Final biexciton population at t0 + 6 sigma, pure four-level dynamics."""
    pulses = [
        PulseParams(alpha=spec.alpha1, sigma=spec.sigma, delta=spec.delta1, t0=spec.t0),
        PulseParams(alpha=alpha2, sigma=spec.sigma, delta=delta2, t0=spec.t0),
    ]
    grid = TimeGrid(
        spec.t0 - 4 * spec.sigma,
        spec.t0 + 6 * spec.sigma,
        10 * spec.sigma,
        rtol=spec.rtol,
        atol=spec.atol,
    )
    psi0 = np.zeros(4, dtype=complex)
    psi0[DotLevel.G] = 1.0
    traj = evolve_pure_4level(
        psi0, pulses, DotParams(delta_b=spec.delta_b, delta_0=spec.delta_0), grid
    )
    return float(abs(traj.states[-1][DotLevel.B]) ** 2)


def objective_batch(alpha2s, delta2s, spec: SearchSpec) -> np.ndarray:
    """Final biexciton populations for many second-pulse settings at once.

    All four-level Schroedinger problems share the time axis and the first
    pulse, so they are integrated as one stacked ODE; this is what makes the
    36x31 seed grid affordable.
    """
    alpha2s = np.asarray(alpha2s, dtype=float)
    delta2s = np.asarray(delta2s, dtype=float)
    n = len(alpha2s)
    dot_diag = np.array([0.0, spec.delta_0 / 2, -spec.delta_0 / 2, -spec.delta_b])
    # (sigma_X^dag + sigma_Y^dag)/sqrt(2) for a diagonally polarized drive
    d_op = np.zeros((4, 4))
    for upper, lower in ((DotLevel.X, DotLevel.G), (DotLevel.Y, DotLevel.G),
                         (DotLevel.B, DotLevel.X), (DotLevel.B, DotLevel.Y)):
        d_op[upper, lower] = 1 / np.sqrt(2)
    p1 = PulseParams(alpha=spec.alpha1, sigma=spec.sigma, delta=spec.delta1,
                     t0=spec.t0)
    amp2 = alpha2s * np.pi / np.sqrt(2 * np.pi * spec.sigma**2)

    def rhs(t, y):
        psi = y.reshape(n, 4)
        tt = t - spec.t0
        omega = envelope(p1, t) + amp2 * np.exp(
            -(tt**2) / (2 * spec.sigma**2) - 1j * (delta2s / HBAR) * tt
        )
        out = (-1j / HBAR) * (psi * dot_diag)
        out += 0.5j * (omega[:, None] * (psi @ d_op.T)
                       + omega.conj()[:, None] * (psi @ d_op))
        return out.ravel()

    psi0 = np.zeros((n, 4), dtype=complex)
    psi0[:, DotLevel.G] = 1.0
    t_span = (spec.t0 - 4 * spec.sigma, spec.t0 + 6 * spec.sigma)
    sol = solve_ivp(rhs, t_span, psi0.ravel(), method="DOP853",
                    rtol=spec.rtol, atol=spec.atol)
    if not sol.success:
        raise IntegrationError(f"batched pure-state integration failed: {sol.message}")
    final = sol.y[:, -1].reshape(n, 4)
    return np.abs(final[:, DotLevel.B]) ** 2


def optimize_second_pulse(spec: SearchSpec) -> OptimizationResult:
    """Coarse grid over (alpha2, delta2) followed by bounded simplex refinement.

    Deterministic: fixed evaluation order and tie-breaks toward smaller alpha2,
    then smaller |delta2|.
    """
    alphas = np.linspace(*spec.alpha2_bounds, spec.n_alpha2)
    deltas = np.linspace(*spec.delta2_bounds, spec.n_delta2)
    grid_a, grid_d = np.meshgrid(alphas, deltas, indexing="ij")
    values = objective_batch(grid_a.ravel(), grid_d.ravel(), spec)
    evals = values.size
    cells = [
        (float(v), float(a2), float(d2))
        for v, a2, d2 in zip(values, grid_a.ravel(), grid_d.ravel())
    ]
    cells.sort(key=lambda c: (-c[0], c[1], abs(c[2])))
    seed_best = (cells[0][1], cells[0][2], cells[0][0])

    bounds = [spec.alpha2_bounds, spec.delta2_bounds]
    candidates = []
    for val, a2, d2 in cells[: spec.n_refine]:
        res = minimize(
            lambda x: -objective(x[0], x[1], spec),
            x0=[a2, d2],
            method="Nelder-Mead",
            bounds=bounds,
            options={"fatol": spec.refine_fatol, "xatol": 1e-4},
        )
        evals += res.nfev
        candidates.append((-res.fun, float(res.x[0]), float(res.x[1])))
        candidates.append((val, a2, d2))  # seed always remains a candidate
    candidates.sort(key=lambda c: (-c[0], c[1], abs(c[2])))
    best = candidates[0]
    return OptimizationResult(
        alpha2=best[1],
        delta2=best[2],
        b_final=best[0],
        evaluations=evals,
        seed_best=seed_best,
    )


@dataclass
class MapCell:
    delta_b: float
    alpha1: float
    result: OptimizationResult | None
    error: str | None = None


def biexciton_map(
    delta_b_values,
    alpha1_values,
    template: SearchSpec = SearchSpec(),
    progress=None,
) -> list[MapCell]:
    """Per-cell second-pulse optimization over a (delta_B, alpha1) grid.

    Cell failures are recorded and do not abort the remaining cells.
    """
    cells = []
    for db in delta_b_values:
        for a1 in alpha1_values:
            spec = replace(template, delta_b=float(db), alpha1=float(a1))
            try:
                cell = MapCell(float(db), float(a1), optimize_second_pulse(spec))
            except Exception as exc:  # recorded, map completes
                cell = MapCell(float(db), float(a1), None, error=str(exc))
            cells.append(cell)
            if progress is not None:
                progress(cell)
    return cells


def map_to_csv(cells: list[MapCell], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["delta_b_mev", "alpha1_pi", "alpha2_pi", "delta2_mev", "b_final"])
        for c in cells:
            if c.result is None:
                continue
            w.writerow([
                f"{c.delta_b:.6g}", f"{c.alpha1:.6g}",
                f"{c.result.alpha2:.8g}", f"{c.result.delta2:.8g}",
                f"{c.result.b_final:.8g}",
            ])


def optimize_tpe_area(
    delta_b: float = 1.0,
    sigma: float = 2.7,
    t0: float = 0.0,
    alpha_bounds: tuple[float, float] = (0.0, 10.0),
    n_seed: int = 101,
    delta_0: float = 0.0,
) -> tuple[float, float]:
    """Pulse area (pi units) maximizing biexciton preparation for the
    two-photon-resonant pulse, plus the achieved population."""
    dot = DotParams(delta_b=delta_b, delta_0=delta_0)
    grid = TimeGrid(t0 - 4 * sigma, t0 + 6 * sigma, 10 * sigma)
    psi0 = np.zeros(4, dtype=complex)
    psi0[DotLevel.G] = 1.0

    def b_final(alpha: float) -> float:
        pulse = PulseParams(alpha=alpha, sigma=sigma, delta=-delta_b / 2, t0=t0)
        traj = evolve_pure_4level(psi0, [pulse], dot, grid)
        return float(abs(traj.states[-1][DotLevel.B]) ** 2)

    seeds = np.linspace(*alpha_bounds, n_seed)
    values = [b_final(a) for a in seeds]
    a0 = float(seeds[int(np.argmax(values))])
    res = minimize(
        lambda x: -b_final(x[0]),
        x0=[a0],
        method="Nelder-Mead",
        bounds=[alpha_bounds],
        options={"fatol": 1e-9, "xatol": 1e-6},
    )
    best = max([(-res.fun, float(res.x[0])), (max(values), a0)])
    return best[1], best[0]

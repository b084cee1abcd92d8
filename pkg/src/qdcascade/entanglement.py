"""Wootters concurrence of a two-photon polarization density matrix.

The 4x4 matrix lives in the fixed product basis (XX, XY, YX, YY); the
spin-flip matrix T is anti-diagonal (-1, 1, 1, -1) in this basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# anti-diagonal spin-flip, fixed (XX, XY, YX, YY) basis
SPIN_FLIP = np.zeros((4, 4))
SPIN_FLIP[0, 3] = -1.0
SPIN_FLIP[1, 2] = 1.0
SPIN_FLIP[2, 1] = 1.0
SPIN_FLIP[3, 0] = -1.0

EIGENVALUE_DUST = 1e-10   # clamp threshold for eigenvalues of M
POSITIVITY_TOL = 1e-6     # allowed eigen-negativity of the input state


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    sqrt_eigenvalues: tuple[float, float, float, float]
    repaired_negativity: float  # total weight clamped from rho's spectrum


def concurrence(rho2p: np.ndarray) -> ConcurrenceResult:
    """Concurrence C = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}."""
    rho = np.asarray(rho2p, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("two-photon matrix must be 4x4")
    if not np.all(np.isfinite(rho)):
        raise ValueError("two-photon matrix contains non-finite entries")
    if abs(np.trace(rho) - 1.0) > POSITIVITY_TOL:
        raise ValueError(f"two-photon matrix trace {np.trace(rho):.8f} != 1")

    # repair numerical eigen-negativity below the tolerance
    herm = (rho + rho.conj().T) / 2
    evals, evecs = np.linalg.eigh(herm)
    repaired = float(-np.sum(evals[evals < 0]))
    if evals.min() < -POSITIVITY_TOL:
        raise ValueError(
            f"two-photon matrix has eigenvalue {evals.min():.3e} below tolerance"
        )
    if repaired > 0:
        evals = np.clip(evals, 0.0, None)
        herm = (evecs * evals) @ evecs.conj().T
        herm /= np.trace(herm).real

    m = herm @ SPIN_FLIP @ herm.conj() @ SPIN_FLIP
    lam = np.linalg.eigvals(m).real
    if lam.min() < -EIGENVALUE_DUST:
        raise ValueError(f"spin-flip spectrum has eigenvalue {lam.min():.3e}")
    lam = np.sort(np.clip(lam, 0.0, None))[::-1]
    roots = np.sqrt(lam)
    value = max(0.0, roots[0] - roots[1] - roots[2] - roots[3])
    return ConcurrenceResult(
        value=float(min(value, 1.0)),
        sqrt_eigenvalues=tuple(float(r) for r in roots),
        repaired_negativity=repaired,
    )

"""Composite dot-cavity basis and dense operators.

The quantum dot is a four-level system (ground G, the two linearly polarized
excitons X and Y, biexciton B) coupled to two degenerate cavity modes, one per
polarization. Basis states are ``|level, n_x, n_y>`` and operators are dense
complex matrices over a fixed, deterministic ordering (dot level major, then
n_x, then n_y).

Truncations:

* ``Truncation.reduced18()`` keeps one photon per mode plus the auxiliary
  states |G,2,0> and |G,0,2>, dimension 18.
* ``Truncation.full(n)`` keeps up to n photons per mode, dimension 4*(n+1)^2.

Any operator action leading out of the truncated basis is projected to zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class DotLevel(enum.IntEnum):
    G = 0
    X = 1
    Y = 2
    B = 3


class Mode(enum.Enum):
    X = "X"
    Y = "Y"


@dataclass(frozen=True, order=True)
class BasisState:
    """A single product state |dot_level, n_x, n_y>."""

    dot_level: DotLevel
    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 0 or self.n_y < 0:
            raise ValueError(f"negative photon count in {self!r}")

    def label(self) -> str:
        return f"|{self.dot_level.name},{self.n_x},{self.n_y}>"


@dataclass(frozen=True)
class Truncation:
    """Basis truncation scheme.

    ``n_max is None`` selects the reduced 18-dimensional scheme; otherwise
    all states with up to ``n_max`` photons per mode are kept.
    """

    n_max: int | None = None

    @classmethod
    def reduced18(cls) -> "Truncation":
        return cls(n_max=None)

    @classmethod
    def full(cls, n_max: int) -> "Truncation":
        if n_max < 1:
            raise ValueError("full truncation requires n_max >= 1")
        return cls(n_max=n_max)

    @property
    def is_reduced(self) -> bool:
        return self.n_max is None

    def states(self) -> list[BasisState]:
        if self.is_reduced:
            out = [
                BasisState(level, nx, ny)
                for level in DotLevel
                for nx in (0, 1)
                for ny in (0, 1)
            ]
            out += [BasisState(DotLevel.G, 2, 0), BasisState(DotLevel.G, 0, 2)]
        else:
            n = self.n_max
            out = [
                BasisState(level, nx, ny)
                for level in DotLevel
                for nx in range(n + 1)
                for ny in range(n + 1)
            ]
        return sorted(out)

    def name(self) -> str:
        return "reduced18" if self.is_reduced else f"full{self.n_max}"

    @classmethod
    def from_name(cls, name: str) -> "Truncation":
        name = name.strip().lower()
        if name == "reduced18":
            return cls.reduced18()
        if name.startswith("full"):
            return cls.full(int(name[4:]))
        raise ValueError(f"unknown truncation {name!r}")


@dataclass(frozen=True)
class StateSpace:
    """Ordered basis with its index map; immutable after construction."""

    truncation: Truncation
    basis: tuple[BasisState, ...] = field(init=False)

    def __post_init__(self):
        states = self.truncation.states()
        object.__setattr__(self, "basis", tuple(states))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(states)})

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, state: BasisState) -> int:
        return self._index[state]

    def __contains__(self, state: BasisState) -> bool:
        return state in self._index

    def basis_vector(self, state: BasisState) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(state)] = 1.0
        return v


def build_space(truncation: Truncation) -> StateSpace:
    """Construct the deterministic ordered basis for a truncation."""
    return StateSpace(truncation)


def dot_space() -> StateSpace:
    """Four-level dot without photon modes (cavity-free scenarios)."""
    return StateSpace(Truncation(n_max=0))


def annihilation(mode: Mode, space: StateSpace) -> np.ndarray:
    """Photon annihilation operator a_mode; out-of-basis targets drop out."""
    a = np.zeros((space.dim, space.dim), dtype=complex)
    for j, s in enumerate(space.basis):
        n = s.n_x if mode is Mode.X else s.n_y
        if n == 0:
            continue
        if mode is Mode.X:
            target = BasisState(s.dot_level, s.n_x - 1, s.n_y)
        else:
            target = BasisState(s.dot_level, s.n_x, s.n_y - 1)
        if target in space:
            a[space.index(target), j] = np.sqrt(n)
    return a


def creation(mode: Mode, space: StateSpace) -> np.ndarray:
    # adjoint of the projected annihilation equals the projected creation
    return annihilation(mode, space).conj().T


def dot_transition(pol: Mode, space: StateSpace) -> np.ndarray:
    """Lowering operator |G><S| + |S><B| acting on the dot factor only."""
    lower = DotLevel.X if pol is Mode.X else DotLevel.Y
    sigma = np.zeros((space.dim, space.dim), dtype=complex)
    for j, s in enumerate(space.basis):
        if s.dot_level == lower:
            target = BasisState(DotLevel.G, s.n_x, s.n_y)
        elif s.dot_level == DotLevel.B:
            target = BasisState(lower, s.n_x, s.n_y)
        else:
            continue
        if target in space:
            sigma[space.index(target), j] = 1.0
    return sigma


def projector(level: DotLevel, space: StateSpace) -> np.ndarray:
    diag = np.array([1.0 if s.dot_level == level else 0.0 for s in space.basis])
    return np.diag(diag).astype(complex)


def number_op(mode: Mode, space: StateSpace) -> np.ndarray:
    diag = np.array(
        [float(s.n_x if mode is Mode.X else s.n_y) for s in space.basis]
    )
    return np.diag(diag).astype(complex)

"""Coupler circuit parameters in normalized units (4e² = 1, phases in radians)."""
import dataclasses
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from ..errors import PassivityError


@dataclass(frozen=True)
class CircuitParams:
    """One coupler loop (index 0) and the ``n`` circuits attached to it."""
    L_c: float
    L: Tuple[float, ...]
    M: Tuple[float, ...]
    E_c: float
    E: Tuple[float, ...]
    phi_cx: float = 0.0

    def __post_init__(self):
        for name in ("L", "M", "E"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if len(self.L) < 2:
            raise ValueError(f"a coupler needs at least 2 attached circuits, got {len(self.L)}")
        if not len(self.L) == len(self.M) == len(self.E):
            raise ValueError(f"L, M and E must have equal lengths, got "
                             f"{len(self.L)}, {len(self.M)}, {len(self.E)}")
        if not self.L_c > 0 or any(not l > 0 for l in self.L):
            raise PassivityError("self-inductances must be positive")
        for i, (l, m) in enumerate(zip(self.L, self.M)):
            if not abs(m) < math.sqrt(self.L_c * l):
                raise PassivityError(f"|M_{i + 1}c|={abs(m)} >= sqrt(L_c*L_{i + 1})={math.sqrt(self.L_c * l)}")
        if not self.L_c - sum(m * m / l for l, m in zip(self.L, self.M)) > 0:
            raise PassivityError("inductance matrix is not positive definite")

    @property
    def n(self) -> int:
        return len(self.L)

    @classmethod
    def uniform(cls,
                n: int,
                L: float = 1.0,
                M: float = 0.1,
                E: float = 1.0,
                L_c: float = 1.0,
                E_c: float = 1.0,
                phi_cx: float = 0.0) -> "CircuitParams":
        return cls(L_c, (L,) * n, (M,) * n, E_c, (E,) * n, phi_cx)

    def with_mutual(self, index: int, value: float) -> "CircuitParams":
        mutuals = list(self.M)
        mutuals[index] = value
        return dataclasses.replace(self, M=tuple(mutuals))

    def scaled_mutuals(self, factor: float) -> "CircuitParams":
        return dataclasses.replace(self, M=tuple(factor * m for m in self.M))

    def restricted(self, indices: Tuple[int, ...]) -> "CircuitParams":
        """The same coupler with only the circuits in ``indices`` attached."""
        return dataclasses.replace(self,
                                   L=tuple(self.L[i] for i in indices),
                                   M=tuple(self.M[i] for i in indices),
                                   E=tuple(self.E[i] for i in indices))

DEFAULT_CIRCUIT = CircuitParams.uniform(8)


def three_local_circuit(M: float = 0.1, doubled: bool = True) -> CircuitParams:
    """Three logical circuits plus one ancilla whose mutual inductance is ``2M``."""
    p = CircuitParams.uniform(4, M=M)
    return p.with_mutual(3, 2 * M) if doubled else p


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"coupling matrix must be square, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, key) -> float:
        return float(self.values[key])

    def off_diagonal(self) -> np.ndarray:
        return self.values[~np.eye(self.n, dtype=bool)]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, columns=[str(i) for i in range(self.n)])

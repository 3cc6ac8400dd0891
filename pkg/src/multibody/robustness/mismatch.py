"""Mutual-inductance mismatch model for counting gadgets.

Every circuit on the outer loop carries a relative error ε, and the ancillae
carry a second error on the inner loop. To first order a coupling mediated
by a loop scales by ``1 + ε_k + ε_l``; the inner loop only mediates the
ancilla-ancilla cancellation, so its residue enters with the opposite sign.
"""
import math
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from ..errors import DimensionMismatchError
from ..gadget import THREE_LOCAL, GadgetSpec, counting_pattern
from ..rng import stream
from ..spin import IsingHamiltonian
from ..spin.hamiltonian import Term


@dataclass(frozen=True)
class MismatchSample:
    """Unit-scale relative errors; ``outer`` lists logical spins then ancillae."""
    outer: Tuple[float, ...]
    inner: Tuple[float, ...]
    seed: Optional[int] = None
    index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "outer", tuple(float(v) for v in self.outer))
        object.__setattr__(self, "inner", tuple(float(v) for v in self.inner))
        if len(self.outer) != 2 * len(self.inner):
            raise DimensionMismatchError(f"outer errors ({len(self.outer)}) must be twice the "
                                         f"inner errors ({len(self.inner)})")
        if not all(math.isfinite(v) for v in self.outer + self.inner):
            raise ValueError("mismatch values must be finite")

    @property
    def N(self) -> int:
        return len(self.inner)

    @classmethod
    def zero(cls, N: int) -> "MismatchSample":
        return cls((0.0,) * (2 * N), (0.0,) * N)


def mismatch_sample(N: int, seed: int, index: int) -> MismatchSample:
    """3N unit normals drawn from the stream of ``(seed, index)``."""
    z = stream(seed, index).standard_normal(3 * N)
    return MismatchSample(tuple(z[:2 * N]), tuple(z[2 * N:]), seed, index)


def _check(spec: GadgetSpec, m: MismatchSample):
    if spec.kind == THREE_LOCAL:
        raise ValueError("the mismatch model covers counting gadgets with N ancillae")
    if m.N != spec.N:
        raise DimensionMismatchError(f"mismatch sample sized for N={m.N}, gadget has N={spec.N}")


def build_error_hamiltonian(spec: GadgetSpec, m: MismatchSample) -> IsingHamiltonian:
    _check(spec, m)
    n = 2 * spec.N
    terms: List[Term] = []
    for k, l in combinations(range(n), 2):
        terms.append(((k, l), spec.J_a * (m.outer[k] + m.outer[l])))
    for i, j in combinations(range(spec.N), 2):
        terms.append(((spec.N + i, spec.N + j), -spec.J_a * (m.inner[i] + m.inner[j])))
    return IsingHamiltonian(n, tuple(terms))


def sector_error_means(spec: GadgetSpec, err: IsingHamiltonian) -> np.ndarray:
    """Mean of ``err`` over the counting states of every ``N_up`` sector."""
    N = spec.N
    logical = np.arange(1 << N, dtype=np.int64)
    popcount = np.array([bin(b).count("1") for b in logical])
    patterns = np.array([counting_pattern(spec, k).bits for k in range(N + 1)], dtype=np.int64)
    energies = err.energies(logical | (patterns[popcount] << N))
    return np.array([energies[popcount == k].mean() for k in range(N + 1)])


def correct_ancilla_fields(spec: GadgetSpec, err: IsingHamiltonian) -> np.ndarray:
    """Ancilla field deltas that flatten the mean error energy across sectors.

    Ancilla ``k`` flips between sectors ``k-1`` and ``k``, so a field
    ``δ_k = (ḡ(k) - ḡ(k-1)) / 2`` on it cancels the mean slope there. Logical
    fields are left alone.
    """
    if spec.kind == THREE_LOCAL:
        raise ValueError("ancilla field correction covers counting gadgets with N ancillae")
    if err.n != 2 * spec.N:
        raise DimensionMismatchError(f"error Hamiltonian has {err.n} spins, gadget has {2 * spec.N}")
    means = sector_error_means(spec, err)
    return np.diff(means) / 2

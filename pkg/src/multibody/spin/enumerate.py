"""Exhaustive enumeration over the 2^n configurations of a Hamiltonian.

Configurations are processed in chunks of ``CHUNK`` so memory stays bounded;
outputs are ordered canonically (energy, then bit pattern) regardless of the
chunking.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple

import numpy as np

from ..errors import EnumerationLimitError, IndexSetError
from .config import SpinConfig
from .hamiltonian import IsingHamiltonian

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 28
ANCILLA_LIMIT = 24
CHUNK = 1 << 20


def check_size(n: int, limit: int = ENUMERATION_LIMIT, what: str = "spins"):
    if n > limit:
        raise EnumerationLimitError(f"{n} {what} exceeds the enumeration bound of {limit}")


def _chunks(n: int) -> Iterator[np.ndarray]:
    total = 1 << n
    for start in range(0, total, CHUNK):
        yield np.arange(start, min(start + CHUNK, total), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """All configurations with their energies, ascending by (energy, bits)."""
    n: int
    bits: np.ndarray
    energies: np.ndarray

    def __len__(self):
        return len(self.bits)

    def __iter__(self) -> Iterator[Tuple[SpinConfig, float]]:
        for b, e in zip(self.bits, self.energies):
            yield SpinConfig(int(b), self.n), float(e)

    def __getitem__(self, idx: int) -> Tuple[SpinConfig, float]:
        return SpinConfig(int(self.bits[idx]), self.n), float(self.energies[idx])

    @property
    def entries(self) -> List[Tuple[SpinConfig, float]]:
        return list(self)

    @property
    def minimum(self) -> float:
        return float(self.energies[0])


def enumerate_spectrum(h: IsingHamiltonian) -> Spectrum:
    check_size(h.n)
    bits = np.arange(1 << h.n, dtype=np.int64)
    energies = np.concatenate([h.energies(chunk) for chunk in _chunks(h.n)])
    order = np.lexsort((bits, energies))
    bits, energies = bits[order], energies[order]
    bits.setflags(write=False)
    energies.setflags(write=False)
    logger.debug("enumerated %d configurations, minimum %.12g", len(bits), energies[0])
    return Spectrum(h.n, bits, energies)


def ground_states(h: IsingHamiltonian, tol: float = 0.0) -> FrozenSet[SpinConfig]:
    """All configurations within ``tol`` of the minimum energy."""
    if tol < 0:
        raise ValueError(f"tol must be non-negative, got {tol}")
    check_size(h.n)
    best = np.inf
    kept_bits: List[np.ndarray] = []
    kept_energies: List[np.ndarray] = []
    for chunk in _chunks(h.n):
        e = h.energies(chunk)
        best = min(best, float(e.min()))
        mask = e <= best + tol
        kept_bits.append(chunk[mask])
        kept_energies.append(e[mask])
    bits = np.concatenate(kept_bits)
    energies = np.concatenate(kept_energies)
    return frozenset(SpinConfig(int(b), h.n) for b in bits[energies <= best + tol])


def _scatter(indices: Sequence[int]) -> np.ndarray:
    """Map each sub-pattern over ``indices`` to its packed joint bits."""
    patterns = np.arange(1 << len(indices), dtype=np.int64)
    out = np.zeros_like(patterns)
    for t, idx in enumerate(indices):
        out |= ((patterns >> t) & 1) << idx
    return out


def effective_logical_spectrum(h: IsingHamiltonian,
                               logical: Sequence[int],
                               ancilla: Sequence[int]) -> Dict[SpinConfig, Tuple[float, SpinConfig]]:
    """Minimize the energy over ancilla spins for every logical configuration.

    Bit ``t`` of a logical (ancilla) configuration is spin ``logical[t]``
    (``ancilla[t]``). Ties between ancilla configurations go to the lowest
    bit pattern. The result is keyed in ascending logical bit order.
    """
    logical, ancilla = list(logical), list(ancilla)
    if set(logical) & set(ancilla):
        raise IndexSetError(f"logical and ancilla sets overlap: {sorted(set(logical) & set(ancilla))}")
    if len(set(logical)) != len(logical) or len(set(ancilla)) != len(ancilla):
        raise IndexSetError("index sets must not repeat indices")
    if sorted(logical + ancilla) != list(range(h.n)):
        raise IndexSetError(f"logical and ancilla sets must cover all {h.n} spins exactly")
    check_size(len(ancilla), ANCILLA_LIMIT, "ancilla spins")
    check_size(h.n)

    lmap = _scatter(logical)
    amap = _scatter(ancilla)
    rows = max(1, CHUNK >> len(ancilla))
    result: Dict[SpinConfig, Tuple[float, SpinConfig]] = {}
    for start in range(0, len(lmap), rows):
        block = lmap[start:start + rows]
        joint = (block[:, None] | amap[None, :]).reshape(-1)
        e = h.energies(joint).reshape(len(block), len(amap))
        arg = np.argmin(e, axis=1)
        for r, a in enumerate(arg):
            result[SpinConfig(start + r, len(logical))] = (float(e[r, a]), SpinConfig(int(a), len(ancilla)))
    return result

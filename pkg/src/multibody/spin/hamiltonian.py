from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple, TypeAlias

import numpy as np

from ..errors import DimensionMismatchError, IndexSetError
from .config import SpinConfig

Support: TypeAlias = Tuple[int, ...]
Term: TypeAlias = Tuple[Support, float]


def _canonical_terms(n: int, terms: Iterable[Term]) -> Tuple[float, Tuple[Term, ...]]:
    merged: Dict[Support, float] = defaultdict(float)
    extra = 0.0
    for support, weight in terms:
        support = tuple(sorted(int(i) for i in support))
        if len(set(support)) != len(support):
            raise IndexSetError(f"repeated spin index in term support {support}")
        for i in support:
            if not 0 <= i < n:
                raise IndexSetError(f"spin index {i} out of range [0, {n})")
        if not np.isfinite(weight):
            raise ValueError(f"non-finite weight {weight} on support {support}")
        if support:
            merged[support] += float(weight)
        else:
            extra += float(weight)
    canon = tuple((s, w) for s, w in sorted(merged.items(), key=lambda item: (len(item[0]), item[0]))
                  if w != 0.0)
    return extra, canon


@dataclass(frozen=True)
class IsingHamiltonian:
    """A sum of weighted products of distinct spins plus a constant.

    Terms are kept canonical: one entry per support, supports sorted, ordered
    by (order, support), zero weights dropped, empty supports folded into
    ``constant``.
    """
    n: int
    terms: Tuple[Term, ...] = ()
    constant: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatchError(f"spin count must be >= 1, got {self.n}")
        extra, canon = _canonical_terms(self.n, self.terms)
        object.__setattr__(self, "terms", canon)
        object.__setattr__(self, "constant", float(self.constant) + extra)
        if not np.isfinite(self.constant):
            raise ValueError("constant must be finite")

    @classmethod
    def zero(cls, n: int) -> "IsingHamiltonian":
        return cls(n)

    @classmethod
    def from_fields_and_couplings(cls,
                                  n: int,
                                  fields: Dict[int, float],
                                  couplings: Dict[Tuple[int, int], float],
                                  constant: float = 0.0) -> "IsingHamiltonian":
        terms: List[Term] = [((i,), h) for i, h in fields.items()]
        terms += [((i, j), J) for (i, j), J in couplings.items()]
        return cls(n, tuple(terms), constant)

    def weight(self, support: Iterable[int]) -> float:
        key = tuple(sorted(support))
        for s, w in self.terms:
            if s == key:
                return w
        return 0.0

    def fields(self) -> np.ndarray:
        out = np.zeros(self.n)
        for s, w in self.terms:
            if len(s) == 1:
                out[s[0]] = w
        return out

    def couplings(self) -> Dict[Tuple[int, int], float]:
        return {s: w for s, w in self.terms if len(s) == 2}

    @property
    def order(self) -> int:
        return max((len(s) for s, _ in self.terms), default=0)

    @property
    def max_abs_weight(self) -> float:
        return max((abs(w) for _, w in self.terms), default=0.0)

    def scaled(self, factor: float) -> "IsingHamiltonian":
        return IsingHamiltonian(self.n, tuple((s, factor * w) for s, w in self.terms),
                                factor * self.constant)

    def __add__(self, other: "IsingHamiltonian") -> "IsingHamiltonian":
        if other.n != self.n:
            raise DimensionMismatchError(f"cannot add Hamiltonians on {self.n} and {other.n} spins")
        return IsingHamiltonian(self.n, self.terms + other.terms, self.constant + other.constant)

    def energies(self, bits: np.ndarray) -> np.ndarray:
        """Energies of many configurations given as packed integers."""
        bits = np.asarray(bits, dtype=np.int64).reshape(-1)
        spins = (((bits[:, None] >> np.arange(self.n, dtype=np.int64)) & 1) * 2 - 1).astype(np.int8)
        out = np.full(bits.shape[0], self.constant, dtype=np.float64)
        for support, w in self.terms:
            prod = spins[:, support[0]].astype(np.float64)
            for i in support[1:]:
                prod = prod * spins[:, i]
            out += w * prod
        return out

    def energy(self, c: SpinConfig) -> float:
        if c.n != self.n:
            raise DimensionMismatchError(f"configuration has {c.n} spins, Hamiltonian has {self.n}")
        return float(self.energies(np.array([c.bits]))[0])


def energy(h: IsingHamiltonian, c: SpinConfig) -> float:
    return h.energy(c)

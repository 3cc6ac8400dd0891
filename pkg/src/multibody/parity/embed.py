"""Parity embedding of all-to-all pair problems onto local plaquette constraints.

Physical spin ``(i, j)`` carries the product ``σ_i σ_j``. Spins are ordered by
their closing logical index ``j`` and then ``i``, so adding a logical spin only
appends physical spins and plaquettes.
"""
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple, TypeAlias

import numpy as np

from ..errors import ConstraintStrengthError, DimensionMismatchError, IndexSetError
from ..rng import stream
from ..spin import IsingHamiltonian, SpinConfig, enumerate_spectrum, ground_states
from ..spin.enumerate import check_size
from ..spin.hamiltonian import Term

logger = logging.getLogger(__name__)

Pair: TypeAlias = Tuple[int, int]

ROUNDTRIP_LIMIT = 6
TOLERANCE = 1e-9


@dataclass(frozen=True)
class LogicalProblem:
    M: int
    couplings: Tuple[Tuple[int, int, float], ...] = ()

    def __post_init__(self):
        if self.M < 3:
            raise ValueError(f"parity embedding needs M >= 3 logical spins, got {self.M}")
        merged: Dict[Pair, float] = {}
        for i, j, w in self.couplings:
            i, j = int(i), int(j)
            if i == j or not (0 <= i < self.M and 0 <= j < self.M):
                raise IndexSetError(f"invalid coupling indices ({i}, {j}) for M={self.M}")
            if not math.isfinite(w):
                raise ValueError(f"coupling ({i}, {j}) is not finite")
            key = (min(i, j), max(i, j))
            merged[key] = merged.get(key, 0.0) + float(w)
        object.__setattr__(self, "couplings", tuple((i, j, w) for (i, j), w in sorted(merged.items())))

    @classmethod
    def random(cls, M: int, seed: int, index: int = 0) -> "LogicalProblem":
        """Couplings drawn uniformly from [-1, 1] on every pair."""
        rng = stream(seed, index)
        pairs = list(combinations(range(M), 2))
        values = rng.uniform(-1.0, 1.0, size=len(pairs))
        return cls(M, tuple((i, j, float(w)) for (i, j), w in zip(pairs, values)))

    def J(self, i: int, j: int) -> float:
        key = (min(i, j), max(i, j))
        for a, b, w in self.couplings:
            if (a, b) == key:
                return w
        return 0.0

    def hamiltonian(self) -> IsingHamiltonian:
        return IsingHamiltonian(self.M, tuple(((i, j), w) for i, j, w in self.couplings))

    def total_weight(self) -> float:
        return sum(abs(w) for _, _, w in self.couplings)


def default_constraint(p: LogicalProblem) -> float:
    return 1.0 + p.total_weight()


@dataclass(frozen=True)
class Plaquette:
    """Four members: physical spins plus pinned +1 boundary spins."""
    spins: Tuple[Pair, ...]
    fixed: Tuple[str, ...] = ()

    @property
    def members(self) -> int:
        return len(self.spins) + len(self.fixed)


def physical_labels(M: int) -> Tuple[Pair, ...]:
    return tuple((i, j) for j in range(1, M) for i in range(j))


def plaquettes(M: int) -> Tuple[Plaquette, ...]:
    """Boundary triangles (closed by one fixed spin) and interior squares, by closing index."""
    out: List[Plaquette] = []
    for c in range(2, M):
        i = c - 2
        out.append(Plaquette(((i, i + 1), (i, i + 2), (i + 1, i + 2)), (f"fixed{i}",)))
        for i in range(c - 2):
            j = c - 1
            out.append(Plaquette(((i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1))))
    return tuple(out)


@dataclass(frozen=True)
class EmbeddingMap:
    M: int
    labels: Tuple[Pair, ...]
    plaquettes: Tuple[Plaquette, ...]
    fixed: Tuple[str, ...]
    fields: Tuple[float, ...]
    C: float
    _index: Dict[Pair, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {label: k for k, label in enumerate(self.labels)})

    @property
    def K(self) -> int:
        return len(self.labels)

    def index(self, pair: Pair) -> int:
        return self._index[pair]

    def coordinates(self, pair: Pair) -> Tuple[int, int]:
        """(row, column) of a physical spin in the triangular layout."""
        i, j = pair
        return i, j - i - 1

    def member_indices(self, plaquette: Plaquette) -> Tuple[int, ...]:
        return tuple(self._index[s] for s in plaquette.spins)


def compile_problem(p: LogicalProblem, C: Optional[float] = None) -> Tuple[EmbeddingMap, IsingHamiltonian]:
    """Fields ``b̃_(i,j) = J_ij`` plus ``-C`` times every plaquette product."""
    C = default_constraint(p) if C is None else float(C)
    if not C > 0:
        raise ConstraintStrengthError(f"constraint strength must be positive, got {C}")
    labels = physical_labels(p.M)
    cells = plaquettes(p.M)
    fields = tuple(p.J(i, j) for i, j in labels)
    e = EmbeddingMap(M=p.M,
                     labels=labels,
                     plaquettes=cells,
                     fixed=tuple(name for cell in cells for name in cell.fixed),
                     fields=fields,
                     C=C)
    terms: List[Term] = [((k,), b) for k, b in enumerate(fields)]
    terms += [(e.member_indices(cell), -C) for cell in cells]
    h = IsingHamiltonian(e.K, tuple(terms))
    logger.debug("compiled M=%d into K=%d spins with %d plaquettes", p.M, e.K, len(cells))
    return e, h


def encode(p: LogicalProblem, logical: SpinConfig) -> SpinConfig:
    if logical.n != p.M:
        raise DimensionMismatchError(f"logical configuration has {logical.n} spins, problem has {p.M}")
    return SpinConfig.from_spins(logical.spin(i) * logical.spin(j) for i, j in physical_labels(p.M))


def _violation_counts(e: EmbeddingMap, bits: np.ndarray) -> np.ndarray:
    counts = np.zeros(len(bits), dtype=np.int64)
    for cell in e.plaquettes:
        odd = np.zeros(len(bits), dtype=np.int64)
        for k in e.member_indices(cell):
            odd ^= ((bits >> k) & 1) ^ 1
        counts += odd
    return counts


def violations(e: EmbeddingMap, physical: SpinConfig) -> int:
    """Number of plaquettes whose spin product is -1."""
    if physical.n != e.K:
        raise DimensionMismatchError(f"physical configuration has {physical.n} spins, embedding has {e.K}")
    return int(_violation_counts(e, np.array([physical.bits], dtype=np.int64))[0])


@dataclass(frozen=True)
class DecodedState:
    logical: SpinConfig
    violations: int


def decode(e: EmbeddingMap, physical: SpinConfig) -> DecodedState:
    """Read the logical state off the line of spins ``(0, j)`` with ``σ_0 = +1``."""
    values = [1] + [physical.spin(e.index((0, j))) for j in range(1, e.M)]
    return DecodedState(SpinConfig.from_spins(values), violations(e, physical))


def valid_sector(e: EmbeddingMap) -> FrozenSet[SpinConfig]:
    check_size(e.K)
    bits = np.arange(1 << e.K, dtype=np.int64)
    return frozenset(SpinConfig(int(b), e.K) for b in bits[_violation_counts(e, bits) == 0])


def gauge_fixed(c: SpinConfig) -> SpinConfig:
    return c if c.spin(0) == 1 else c.flipped()


@dataclass(frozen=True)
class RoundTripReport:
    M: int
    C: float
    plaquette_count: int
    valid_sector_size: int
    ground_degeneracy: int
    offset: float
    offset_error: float
    failures: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def roundtrip_validate(p: LogicalProblem, C: Optional[float] = None) -> RoundTripReport:
    """Check by double enumeration that the embedding reproduces the logical problem."""
    if p.M > ROUNDTRIP_LIMIT:
        raise ValueError(f"round-trip validation enumerates at most M={ROUNDTRIP_LIMIT}, got {p.M}")
    C = default_constraint(p) if C is None else float(C)
    if not C > p.total_weight():
        raise ConstraintStrengthError(f"C={C} must exceed the total coupling weight {p.total_weight()}")
    e, h = compile_problem(p, C)
    failures: List[str] = []

    embedded_ground = ground_states(h, TOLERANCE * max(1.0, C))
    for g in sorted(embedded_ground):
        v = violations(e, g)
        if v:
            failures.append(f"ground state {g} violates {v} plaquettes")

    logical_h = p.hamiltonian()
    logical_ground = {gauge_fixed(c) for c in ground_states(logical_h, TOLERANCE * max(1.0, C))}
    decoded_ground = {decode(e, g).logical for g in embedded_ground}
    for c in sorted(logical_ground - decoded_ground):
        failures.append(f"logical ground state {c} missing from the decoded set")
    for c in sorted(decoded_ground - logical_ground):
        failures.append(f"decoded state {c} is not a logical ground state")

    offset = -C * len(e.plaquettes)
    sector = valid_sector(e)
    spectrum = enumerate_spectrum(h)
    energies = dict(zip(spectrum.bits.tolist(), spectrum.energies.tolist()))
    worst, witness = 0.0, None
    for c in sorted(sector):
        gap = abs(energies[c.bits] - logical_h.energy(decode(e, c).logical) - offset)
        if gap > worst:
            worst, witness = gap, c
    if worst > TOLERANCE * max(1.0, C):
        failures.append(f"valid state {witness} is {worst:.3g} away from the constant offset {offset}")
    expected = 1 << (p.M - 1)
    if len(sector) != expected:
        failures.append(f"valid sector holds {len(sector)} states, expected {expected}")

    report = RoundTripReport(p.M, C, len(e.plaquettes), len(sector), len(embedded_ground),
                             offset, worst, tuple(failures))
    logger.info("round trip M=%d C=%g: %s", p.M, C, "passed" if report.passed else f"{len(failures)} failures")
    return report

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..spin import IsingHamiltonian, SpinConfig, effective_logical_spectrum
from .build import (
    SYMMETRIC,
    THREE_LOCAL,
    GadgetSpec,
    ancilla_biases,
    counting_pattern,
    gadget_from_spec,
    target_energy,
)

logger = logging.getLogger(__name__)

# Absolute tolerance in units of the largest |weight| of the checked Hamiltonian.
TOLERANCE = 1e-9


@dataclass(frozen=True)
class SectorRow:
    n_up: int
    multiplicity: int
    energy: float
    target: float
    ancilla: str
    counting: bool


@dataclass(frozen=True)
class GadgetReport:
    deviation: float
    counting_correct: bool
    offset: float
    sectors: Tuple[SectorRow, ...]
    scale: float = 1.0

    @property
    def passed(self) -> bool:
        return self.counting_correct and self.deviation <= TOLERANCE * max(self.scale, 1.0)


def verify_gadget(h: IsingHamiltonian, spec: GadgetSpec) -> GadgetReport:
    """Compare the effective logical spectrum of ``h`` against ``spec``'s target."""
    effective = effective_logical_spectrum(h, spec.logical, spec.ancilla)
    energies = [e for e, _ in effective.values()]
    targets = [target_energy(spec, c) for c in effective]
    offset = sum(energies) / len(energies) - sum(targets) / len(targets)
    deviation = max(abs(e - t - offset) for e, t in zip(energies, targets))

    by_sector: Dict[int, List[Tuple[float, float, SpinConfig]]] = defaultdict(list)
    for (logical, (e, anc)), t in zip(effective.items(), targets):
        by_sector[bin(logical.bits).count("1")].append((e - offset, t, anc))

    rows: List[SectorRow] = []
    counting_correct = True
    for k in sorted(by_sector):
        entries = by_sector[k]
        expected = counting_pattern(spec, k)
        ok = all(anc == expected for _, _, anc in entries)
        counting_correct &= ok
        rows.append(SectorRow(n_up=k,
                              multiplicity=len(entries),
                              energy=sum(e for e, _, _ in entries) / len(entries),
                              target=entries[0][1],
                              ancilla=str(entries[0][2]),
                              counting=ok))
    report = GadgetReport(deviation, counting_correct, offset, tuple(rows), h.max_abs_weight)
    logger.info("verified %s gadget N=%d: deviation %.3g, counting %s",
                spec.kind, spec.N, deviation, counting_correct)
    return report


def validity_margin(spec: GadgetSpec) -> float:
    """Distance from the edge of the ground-state validity region; positive inside."""
    if spec.kind == THREE_LOCAL:
        return spec.J_a / 2 - abs(spec.J_N)
    room = min(spec.q_0, spec.J_a - spec.q_0)
    if spec.kind == SYMMETRIC:
        return room - max(abs(b - a) for a, b in zip(spec.f, spec.f[1:]))
    return room - abs(spec.J_N)


def thermal_reliability(spec: GadgetSpec, T: float) -> float:
    """Boltzmann estimate of the chance of a miscounting ancilla at temperature ``T``.

    An order-of-magnitude estimate, not an exact excitation probability. It is
    ``exp(-margin / T)`` capped at 1, which outside the validity region
    (negative margin) means miscounting is taken as certain.
    """
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    return math.exp(min(0.0, -validity_margin(spec) / T))


def spectral_margin(spec: GadgetSpec) -> float:
    """Exact gap between the highest non-spurious and the lowest spurious energy.

    For counting gadgets the ancillae are independent once the logical sector
    is fixed, so the cheapest spurious state flips either ancilla ``k`` up
    (cost ``2 q_k``) or ancilla ``k+1`` down (cost ``2 (2 J_a - q_{k+1})``).
    The single-ancilla gadget is measured by enumeration.
    """
    targets = spec.sector_targets()
    if spec.kind == THREE_LOCAL:
        return _enumerated_margin(spec)
    q = ancilla_biases(spec)
    lowest = math.inf
    for k in range(spec.N + 1):
        if k >= 1:
            lowest = min(lowest, targets[k] + 2 * q[k - 1])
        if k <= spec.N - 1:
            lowest = min(lowest, targets[k] + 2 * (2 * spec.J_a - q[k]))
    return lowest - max(targets)


def _enumerated_margin(spec: GadgetSpec) -> float:
    h = gadget_from_spec(spec)
    non_spurious, spurious = -math.inf, math.inf
    n = spec.N
    for bits in range(1 << h.n):
        logical = bits & ((1 << n) - 1)
        anc = SpinConfig(bits >> n, spec.ancilla_count)
        e = h.energy(SpinConfig(bits, h.n))
        if anc == counting_pattern(spec, bin(logical).count("1")):
            non_spurious = max(non_spurious, e)
        else:
            spurious = min(spurious, e)
    return spurious - non_spurious

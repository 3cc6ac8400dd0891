"""Spurious-state crossing tests on the full configuration space of a gadget."""
import functools
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..gadget import GadgetSpec, counting_pattern, gadget_from_spec
from ..spin.enumerate import ENUMERATION_LIMIT, check_size
from .mismatch import MismatchSample, build_error_hamiltonian, correct_ancilla_fields

logger = logging.getLogger(__name__)

BISECTION_TOLERANCE = 1e-6
SIGMA_CEILING = 1.0


@dataclass(frozen=True)
class FailureVerdict:
    failed: bool
    margin: float
    corrected_fields: Tuple[float, ...]


@dataclass(frozen=True, eq=False)
class Landscape:
    """Gadget energies over all ``2^(2N)`` configurations and the non-spurious mask."""
    spins: np.ndarray
    energies: np.ndarray
    non_spurious: np.ndarray

    def margin(self, energies: np.ndarray) -> float:
        return float(energies[~self.non_spurious].min() - energies[self.non_spurious].max())


@functools.lru_cache(maxsize=32)
def landscape(spec: GadgetSpec) -> Landscape:
    h = gadget_from_spec(spec)
    check_size(h.n, ENUMERATION_LIMIT)
    N = spec.N
    bits = np.arange(1 << h.n, dtype=np.int64)
    logical = bits & ((1 << N) - 1)
    popcount = np.array([bin(b).count("1") for b in range(1 << N)])[logical]
    patterns = np.array([counting_pattern(spec, k).bits for k in range(N + 1)], dtype=np.int64)
    mask = (bits >> N) == patterns[popcount]
    spins = ((bits[:, None] >> np.arange(h.n)) & 1) * 2 - 1
    return Landscape(spins, h.energies(bits), mask)


@dataclass(frozen=True, eq=False)
class SampleDirection:
    """Error energies of one sample per unit σ, with and without field correction."""
    raw: np.ndarray
    corrected: np.ndarray
    fields: np.ndarray

    def margins(self, scape: Landscape, sigma: float) -> Tuple[float, float]:
        return (scape.margin(scape.energies + sigma * self.raw),
                scape.margin(scape.energies + sigma * self.corrected))


def sample_direction(spec: GadgetSpec, m: MismatchSample) -> SampleDirection:
    scape = landscape(spec)
    err = build_error_hamiltonian(spec, m)
    raw = err.energies(np.arange(1 << err.n, dtype=np.int64))
    fields = correct_ancilla_fields(spec, err)
    corrected = raw + scape.spins[:, spec.N:] @ fields
    return SampleDirection(raw, corrected, fields)


def _verdict(direction: SampleDirection, scape: Landscape, sigma: float, correct: bool) -> FailureVerdict:
    raw, corrected = direction.margins(scape, sigma)
    if correct and corrected >= raw:
        return FailureVerdict(corrected < 0, corrected, tuple(float(f) for f in sigma * direction.fields))
    return FailureVerdict(raw < 0, raw, (0.0,) * len(direction.fields))


def failure_check(spec: GadgetSpec, sigma: float, m: MismatchSample, correct: bool) -> FailureVerdict:
    """Does a spurious state drop below the non-spurious band of ``gadget + σ·error``?

    In corrected mode the ancilla field correction is kept only when it does
    not shrink the margin, so the corrected margin never falls below the raw one.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    return _verdict(sample_direction(spec, m), landscape(spec), sigma, correct)


def critical_sigma(spec: GadgetSpec, m: MismatchSample, correct: bool) -> float:
    """Smallest σ at which the margin crosses zero, or ``inf`` when none below 1.

    The margin is concave in σ along a fixed sample direction, so the safe
    region is an interval starting at zero and bisection applies.
    """
    scape = landscape(spec)
    direction = sample_direction(spec, m)
    return critical_along(direction, scape, correct)


def critical_along(direction: SampleDirection, scape: Landscape, correct: bool) -> float:
    def safe(sigma: float) -> bool:
        raw, corrected = direction.margins(scape, sigma)
        return (max(raw, corrected) if correct else raw) >= 0

    if safe(SIGMA_CEILING):
        return math.inf
    lo, hi = 0.0, SIGMA_CEILING
    while hi - lo > BISECTION_TOLERANCE:
        mid = 0.5 * (lo + hi)
        if safe(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

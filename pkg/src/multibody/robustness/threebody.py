import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..gadget import GadgetSpec
from ..spin import IsingHamiltonian
from .failure import landscape

logger = logging.getLogger(__name__)

ALL_TRIPLES = "all"
NO_ANCILLA_INTERNAL = "no-ancilla-internal"
CONVENTIONS = (ALL_TRIPLES, NO_ANCILLA_INTERNAL)


@dataclass(frozen=True)
class ThreeBodyOptions:
    """Which triples carry the spurious three-body term and how far to search."""
    convention: str = ALL_TRIPLES
    ceiling: float = 2.0
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown triple convention {self.convention!r}; expected one of {CONVENTIONS}")
        if not self.ceiling > 0 or not self.tolerance > 0:
            raise ValueError("ceiling and tolerance must be positive")

DEFAULT_THREE_BODY = ThreeBodyOptions()


def three_body_term(spec: GadgetSpec, convention: str = ALL_TRIPLES) -> IsingHamiltonian:
    """Unit-weight sum of ``σ_i σ_j σ_k`` over the triples selected by ``convention``."""
    n = spec.n_spins
    ancilla = set(spec.ancilla)
    triples = [t for t in combinations(range(n), 3)
               if convention == ALL_TRIPLES or not set(t) <= ancilla]
    return IsingHamiltonian(n, tuple((t, 1.0) for t in triples))


def three_body_tolerance(spec: GadgetSpec, same_sign: bool,
                         options: ThreeBodyOptions = DEFAULT_THREE_BODY) -> float:
    """Largest ``|E3/E2|`` before a spurious state falls below the highest non-spurious one.

    ``E2`` is the pair coupling ``J_a``; the three-body weight is ``±r·J_a``.
    Returns ``options.ceiling`` when no failure occurs below it.
    """
    scape = landscape(spec)
    cubic = three_body_term(spec, options.convention).energies(np.arange(len(scape.energies)))
    sign = 1.0 if same_sign else -1.0

    def safe(ratio: float) -> bool:
        return scape.margin(scape.energies + sign * ratio * spec.J_a * cubic) >= 0

    if safe(options.ceiling):
        return options.ceiling
    lo, hi = 0.0, options.ceiling
    while hi - lo > options.tolerance:
        mid = 0.5 * (lo + hi)
        if safe(mid):
            lo = mid
        else:
            hi = mid
    threshold = 0.5 * (lo + hi)
    logger.info("three-body tolerance N=%d J_N=%g %s sign (%s): %.6g",
                spec.N, spec.J_N, "same" if same_sign else "opposite", options.convention, threshold)
    return threshold

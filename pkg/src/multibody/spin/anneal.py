import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..rng import stream
from .config import SpinConfig
from .hamiltonian import IsingHamiltonian

logger = logging.getLogger(__name__)


def geometric_ladder(t_hot: float, t_cold: float, rungs: int) -> Tuple[float, ...]:
    return tuple(float(t) for t in np.geomspace(t_hot, t_cold, rungs))


@dataclass(frozen=True)
class AnnealSchedule:
    """Metropolis schedule: ``sweeps`` full sweeps at every rung of ``temperatures``."""
    sweeps: int = 20
    temperatures: Tuple[float, ...] = geometric_ladder(5.0, 0.05, 24)
    seed: int = 0

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        temps = tuple(float(t) for t in self.temperatures)
        if not temps or any(t <= 0 for t in temps):
            raise ValueError("temperature ladder must be non-empty and positive")
        if any(b >= a for a, b in zip(temps, temps[1:])):
            raise ValueError("temperature ladder must be strictly descending")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        object.__setattr__(self, "temperatures", temps)

DEFAULT_SCHEDULE = AnnealSchedule()


def _incidence(h: IsingHamiltonian) -> Dict[int, List[Tuple[float, Tuple[int, ...]]]]:
    # For each spin, the terms containing it with that spin removed from the support.
    inc: Dict[int, List[Tuple[float, Tuple[int, ...]]]] = defaultdict(list)
    for support, w in h.terms:
        for i in support:
            inc[i].append((w, tuple(j for j in support if j != i)))
    return inc


def simulated_anneal(h: IsingHamiltonian,
                     s: AnnealSchedule = DEFAULT_SCHEDULE) -> Tuple[SpinConfig, float]:
    """Single-spin-flip Metropolis annealing over ``s.temperatures``.

    Spins are visited in index order within a sweep. The lowest-energy
    configuration visited is returned together with its re-evaluated energy,
    so the result is deterministic in ``s.seed`` and never below the true
    minimum.
    """
    rng = stream(s.seed)
    inc = _incidence(h)
    spins = [1 if b else -1 for b in rng.integers(0, 2, size=h.n)]
    current = h.energy(SpinConfig.from_spins(spins))
    best, best_spins = current, list(spins)

    for temperature in s.temperatures:
        for _ in range(s.sweeps):
            draws = rng.random(h.n)
            for i in range(h.n):
                local = 0.0
                for w, others in inc.get(i, ()):
                    prod = w
                    for j in others:
                        prod *= spins[j]
                    local += prod
                delta = -2.0 * spins[i] * local
                if delta <= 0.0 or draws[i] < math.exp(-delta / temperature):
                    spins[i] = -spins[i]
                    current += delta
                    if current < best:
                        best, best_spins = current, list(spins)

    config = SpinConfig.from_spins(best_spins)
    result = h.energy(config)
    logger.debug("anneal seed=%d finished at %.12g", s.seed, result)
    return config, result

"""Seeded Monte Carlo over mismatch samples: yield curves and critical-σ statistics."""
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.stats import binomtest

from ..errors import GadgetValidityError
from ..gadget import GadgetSpec
from .failure import critical_along, landscape, sample_direction
from .mismatch import mismatch_sample

logger = logging.getLogger(__name__)

THREADS_ENV = "MULTIBODY_THREADS"
CONFIDENCE = 0.95
# Numerical stand-in for |J_N| << J_a.
J_N_SMALL = 1e-3


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if value is None:
        return 1
    try:
        threads = int(value)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {value!r}") from None
    return max(threads, 1)


@dataclass(frozen=True)
class YieldPoint:
    sigma: float
    samples: int
    passes: int
    yield_: float
    ci_low: float
    ci_high: float


def _map_samples(fn, samples: int, threads: int) -> list:
    if threads <= 1:
        return [fn(i) for i in range(samples)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(samples)))


def yield_curve(spec: GadgetSpec,
                sigmas: Sequence[float],
                samples: int,
                seed: int,
                correct: bool = True,
                threads: int = 1) -> List[YieldPoint]:
    """Fraction of samples without a spurious crossing at each σ, with a Wilson interval."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if any(s < 0 for s in sigmas):
        raise ValueError("sigma grid must be non-negative")
    scape = landscape(spec)

    def passes(index: int) -> np.ndarray:
        direction = sample_direction(spec, mismatch_sample(spec.N, seed, index))
        out = np.empty(len(sigmas), dtype=bool)
        for g, sigma in enumerate(sigmas):
            raw, corrected = direction.margins(scape, sigma)
            out[g] = (max(raw, corrected) if correct else raw) >= 0
        return out

    counts = np.sum(_map_samples(passes, samples, threads), axis=0)
    points = []
    for sigma, k in zip(sigmas, counts):
        ci = binomtest(int(k), samples).proportion_ci(confidence_level=CONFIDENCE, method="wilson")
        points.append(YieldPoint(float(sigma), samples, int(k), int(k) / samples, float(ci.low), float(ci.high)))
    logger.info("yield curve over %d samples at %d sigma values", samples, len(points))
    return points


def critical_sigmas(spec: GadgetSpec,
                    samples: int,
                    seed: int,
                    correct: bool = True,
                    threads: int = 1) -> np.ndarray:
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    scape = landscape(spec)

    def one(index: int) -> float:
        direction = sample_direction(spec, mismatch_sample(spec.N, seed, index))
        return critical_along(direction, scape, correct)

    return np.array(_map_samples(one, samples, threads))


def minimum_critical_sigma(spec: GadgetSpec,
                           samples: int,
                           seed: int,
                           correct: bool = True,
                           threads: int = 1) -> float:
    lowest = float(np.min(critical_sigmas(spec, samples, seed, correct, threads)))
    logger.info("minimum critical sigma over %d samples: %.6g", samples, lowest)
    return lowest


def correctability_bound(N: int, J_a: float, q_0: float, J_N: float) -> float:
    """Relative mismatch below which every sample is certainly correctable.

    Each of the ``2N(N-1) + 2N(2N-1)`` mismatch-carrying coupling slots can move
    a sector by at most ``|J_a|·ε``; the bound spends the validity margin on all
    of them at once, so it is not tight.
    """
    if J_a == 0:
        raise GadgetValidityError("J_a != 0")
    room = min(abs(J_a - q_0) - abs(J_N), q_0 - abs(J_N))
    if room < 0:
        raise GadgetValidityError("|J_N| <= min(q_0, |J_a - q_0|)", f"J_N={J_N}, q_0={q_0}, J_a={J_a}")
    return room / (abs(J_a) * (2 * N * (N - 1) + 2 * N * (2 * N - 1)))

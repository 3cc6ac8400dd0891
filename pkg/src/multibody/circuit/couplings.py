"""Effective qubit couplings mediated by the coupler loop.

The coupler phase is eliminated by minimizing the potential over it
(Born-Oppenheimer), and each attached circuit is reduced to two levels by
displacing its phase to ``π ± δ``.
"""
import logging
import math
from itertools import combinations, product
from typing import Sequence, Tuple

import numpy as np
import scipy.optimize

from ..errors import BistableCouplerError
from .inductance import build_inductance_matrix, truncated_inverse
from .params import CircuitParams, CouplingMatrix
from .potential import bias_fluxes, potential_with_inverse

logger = logging.getLogger(__name__)

GRID_POINTS = 2001
DEFAULT_DELTA = 0.1


def _coupler_phase(E_c: float, beta: float, target: float) -> float:
    """Minimize ``-E_c cos φ + β/2 (φ - target)²`` over φ.

    Every stationary point lies within ``E_c/β`` of ``target``, so a fixed grid
    over that window finds all of them; more than one minimum is rejected.
    """
    if E_c == 0:
        return target
    half = abs(E_c) / beta + 0.1
    grid = np.linspace(target - half, target + half, GRID_POINTS)
    slope = E_c * np.sin(grid) + beta * (grid - target)
    rising = np.flatnonzero((slope[:-1] < 0) & (slope[1:] >= 0))
    if len(rising) != 1:
        raise BistableCouplerError(f"coupler potential has {len(rising)} local minima "
                                   f"(E_c={E_c}, stiffness={beta:.6g}); outside the monostable regime")
    k = rising[0]
    return scipy.optimize.brentq(lambda x: E_c * math.sin(x) + beta * (x - target),
                                 grid[k], grid[k + 1], xtol=1e-14)


def solve_coupler_phase(p: CircuitParams) -> float:
    """Coupler phase with every attached circuit held at its external flux."""
    beta = truncated_inverse(build_inductance_matrix(p))[0, 0]
    return _coupler_phase(p.E_c, beta, p.phi_cx)


class BornOppenheimerSurface:
    """Potential of the attached circuits with the coupler phase minimized out.

    External fluxes follow the bias prescription for the solved coupler phase.
    """

    def __init__(self, p: CircuitParams):
        self.params = p
        self.inverse = truncated_inverse(build_inductance_matrix(p))
        self.phi_c0 = _coupler_phase(p.E_c, self.inverse[0, 0], p.phi_cx)
        self.phix = bias_fluxes(p, self.phi_c0)

    def coupler_phase(self, qubits: np.ndarray) -> float:
        beta = self.inverse[0, 0]
        pull = self.inverse[0, 1:] @ (qubits - self.phix[1:])
        return _coupler_phase(self.params.E_c, beta, self.phix[0] - pull / beta)

    def energy(self, qubits: np.ndarray) -> float:
        qubits = np.asarray(qubits, dtype=np.float64)
        phi = np.concatenate(([self.coupler_phase(qubits)], qubits))
        return potential_with_inverse(self.params, self.inverse, phi, self.phix)

    def spin_energy(self, displaced: Sequence[int], signs: Sequence[int], delta: float) -> float:
        qubits = np.full(self.params.n, np.pi)
        for i, s in zip(displaced, signs):
            qubits[i] += s * delta
        return self.energy(qubits)


def extract_effective_couplings(p: CircuitParams, delta: float = DEFAULT_DELTA) -> CouplingMatrix:
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    surface = BornOppenheimerSurface(p)
    values = np.zeros((p.n, p.n))
    for i, j in combinations(range(p.n), 2):
        total = sum(x * y * surface.spin_energy((i, j), (x, y), delta)
                    for x, y in product((1, -1), repeat=2))
        values[i, j] = values[j, i] = total / (4 * delta**2)
    logger.debug("extracted %dx%d coupling matrix at phi_cx=%g", p.n, p.n, p.phi_cx)
    return CouplingMatrix(values)


def coupling_prefactor(p: CircuitParams) -> float:
    """The tuning factor F in ``K_ij = M_i M_j F / (L_c L_i L_j)``.

    Evaluated from the curvature of the decoupled coupler at its minimum.
    """
    beta = 1 / p.L_c
    phi0 = _coupler_phase(p.E_c, beta, p.phi_cx)
    stiffness = p.E_c * math.cos(phi0)
    return p.L_c * beta * stiffness / (stiffness + beta)


def second_order_couplings(p: CircuitParams) -> CouplingMatrix:
    F = coupling_prefactor(p)
    values = np.zeros((p.n, p.n))
    for i, j in combinations(range(p.n), 2):
        values[i, j] = values[j, i] = p.M[i] * p.M[j] * F / (p.L_c * p.L[i] * p.L[j])
    return CouplingMatrix(values)


def truncation_spurious_scale(p: CircuitParams, delta: float = DEFAULT_DELTA) -> Tuple[float, float]:
    """Mean pair energy of the second-order theory and mean three-body energy of the full potential.

    ``E2`` is the second-order coupling times ``δ²``; ``E3`` is
    ``⅛ Σ x y z U(π + xδ, π + yδ, π + zδ)`` averaged over qubit triples.
    """
    e2 = float(np.mean(second_order_couplings(p).off_diagonal())) * delta**2
    surface = BornOppenheimerSurface(p)
    triples = list(combinations(range(p.n), 3))
    if not triples:
        return e2, 0.0
    e3 = 0.0
    for triple in triples:
        e3 += sum(x * y * z * surface.spin_energy(triple, (x, y, z), delta)
                  for x, y, z in product((1, -1), repeat=3)) / 8
    return e2, e3 / len(triples)


def double_loop_couplings(outer: CircuitParams,
                          inner: CircuitParams,
                          ancillae: Sequence[int],
                          delta: float = DEFAULT_DELTA) -> CouplingMatrix:
    """Outer loop couplings plus the inner loop's, scattered onto ``ancillae``."""
    if len(ancillae) != inner.n:
        raise ValueError(f"inner loop has {inner.n} circuits but {len(ancillae)} ancilla indices were given")
    total = np.array(extract_effective_couplings(outer, delta).values)
    idx = np.asarray(ancillae)
    total[np.ix_(idx, idx)] += extract_effective_couplings(inner, delta).values
    return CouplingMatrix(total)


def _mean_pair(matrix: np.ndarray) -> float:
    upper = np.triu_indices(matrix.shape[0], k=1)
    return float(np.mean(matrix[upper]))


def balance_inner_flux(outer: CircuitParams,
                       inner: CircuitParams,
                       ancillae: Sequence[int],
                       delta: float = DEFAULT_DELTA) -> float:
    """Inner loop flux bias whose couplings cancel the outer loop's mean ancilla-ancilla coupling.

    The inner prefactor must turn negative, so the search runs from zero flux
    to π; the inner coupler has to stay monostable there (``E_c L_c < 1``).
    """
    idx = np.asarray(ancillae)
    residue = _mean_pair(extract_effective_couplings(outer, delta).values[np.ix_(idx, idx)])

    def imbalance(phi_cx: float) -> float:
        trial = CircuitParams(inner.L_c, inner.L, inner.M, inner.E_c, inner.E, phi_cx)
        return residue + _mean_pair(extract_effective_couplings(trial, delta).values)

    lo, hi = imbalance(0.0), imbalance(math.pi)
    if lo * hi > 0:
        raise ValueError(f"inner loop cannot cancel the ancilla coupling {residue:.6g} "
                         f"(imbalance {lo:.6g} at 0, {hi:.6g} at π)")
    phi = scipy.optimize.brentq(imbalance, 0.0, math.pi, xtol=1e-12)
    logger.info("inner loop flux %.12g cancels ancilla coupling %.6g", phi, residue)
    return phi

import numpy as np

from ..errors import DimensionMismatchError
from .inductance import build_inductance_matrix, truncated_inverse
from .params import CircuitParams


def _check_phases(p: CircuitParams, *vectors: np.ndarray):
    for v in vectors:
        if v.shape != (p.n + 1,):
            raise DimensionMismatchError(f"phase vector must have length {p.n + 1}, got {v.shape}")


def _josephson(p: CircuitParams) -> np.ndarray:
    return np.array((p.E_c,) + p.E)


def potential_with_inverse(p: CircuitParams, inverse: np.ndarray, phi: np.ndarray, phix: np.ndarray) -> float:
    d = phi - phix
    return float(-np.dot(_josephson(p), np.cos(phi)) + 0.5 * d @ inverse @ d)


def circuit_potential(p: CircuitParams, phi, phix) -> float:
    """``-E_c cos φ_c - Σ E_i cos φ_i + ½ (φ - φx)ᵀ L⁻¹ (φ - φx)``."""
    phi, phix = np.asarray(phi, dtype=np.float64), np.asarray(phix, dtype=np.float64)
    _check_phases(p, phi, phix)
    return potential_with_inverse(p, truncated_inverse(build_inductance_matrix(p)), phi, phix)


def potential_gradient(p: CircuitParams, phi, phix) -> np.ndarray:
    phi, phix = np.asarray(phi, dtype=np.float64), np.asarray(phix, dtype=np.float64)
    _check_phases(p, phi, phix)
    inverse = truncated_inverse(build_inductance_matrix(p))
    return _josephson(p) * np.sin(phi) + inverse @ (phi - phix)


def bias_fluxes(p: CircuitParams, phi_c0: float) -> np.ndarray:
    """External fluxes that hold each attached circuit at π despite the coupler's flux."""
    shift = phi_c0 - p.phi_cx
    return np.array([p.phi_cx] + [np.pi + (m / l) * shift for m, l in zip(p.M, p.L)])

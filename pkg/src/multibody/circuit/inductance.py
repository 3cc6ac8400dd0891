import logging

import numpy as np
import scipy.linalg

from ..errors import SingularMatrixError
from .params import CircuitParams

logger = logging.getLogger(__name__)

EXACT = "exact"
M2 = "M2"


def build_inductance_matrix(p: CircuitParams) -> np.ndarray:
    """Coupler at index 0, ``-M_ic`` on the first row and column, ``L_i`` on the diagonal."""
    n = p.n
    lmat = np.zeros((n + 1, n + 1))
    lmat[0, 0] = p.L_c
    lmat[0, 1:] = lmat[1:, 0] = [-m for m in p.M]
    lmat[1:, 1:] = np.diag(p.L)
    return lmat


def _star_parts(lmat: np.ndarray):
    l_c = lmat[0, 0]
    mutual = -lmat[0, 1:]
    selfs = np.diag(lmat)[1:]
    rest = lmat[1:, 1:] - np.diag(selfs)
    if np.any(rest != 0) or np.any(lmat[1:, 0] != lmat[0, 1:]):
        raise ValueError("second-order inverse needs a symmetric coupler-star inductance matrix")
    if l_c == 0 or np.any(selfs == 0):
        raise SingularMatrixError("zero self-inductance on the diagonal")
    return l_c, mutual, selfs


def truncated_inverse(lmat: np.ndarray, order: str = EXACT) -> np.ndarray:
    """Inverse of the inductance matrix, exact or through second order in ``M``.

    The second-order form expands the Schur complement
    ``L_c - sum(M_i^2 / L_i)`` about ``L_c``; its error is third order in ``M``.
    """
    lmat = np.asarray(lmat, dtype=np.float64)
    if order == EXACT:
        if not np.isfinite(np.linalg.cond(lmat)) or np.linalg.cond(lmat) > 1e12:
            raise SingularMatrixError(f"inductance matrix is singular (condition {np.linalg.cond(lmat):.3g})")
        try:
            return scipy.linalg.inv(lmat)
        except scipy.linalg.LinAlgError as exc:
            raise SingularMatrixError(str(exc)) from exc
    if order != M2:
        raise ValueError(f"unknown inverse order {order!r}; expected {EXACT!r} or {M2!r}")

    l_c, mutual, selfs = _star_parts(lmat)
    ratio = mutual / selfs
    out = np.empty_like(lmat)
    out[0, 0] = 1 / l_c + np.sum(mutual * ratio) / l_c**2
    out[0, 1:] = out[1:, 0] = ratio / l_c
    out[1:, 1:] = np.diag(1 / selfs) + np.outer(ratio, ratio) / l_c
    return out

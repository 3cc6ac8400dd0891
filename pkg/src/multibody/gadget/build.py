"""Ancilla gadgets that reproduce multi-body Ising terms with pair couplings.

Spin layout: logical spins occupy indices ``0..N-1`` and ancilla ``i``
(1-based) sits at index ``N + i - 1``. Every logical spin couples to every
other spin at ``J_a``; ancillae do not couple to each other.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import GadgetValidityError
from ..spin import IsingHamiltonian, SpinConfig

logger = logging.getLogger(__name__)

N_LOCAL = "n-local"
THREE_LOCAL = "three-local-single-ancilla"
SYMMETRIC = "symmetric"
KINDS = (N_LOCAL, THREE_LOCAL, SYMMETRIC)

STRICT_GUARD = 1e-12


def _strictly_less(a: float, b: float) -> bool:
    return b - a > STRICT_GUARD * max(abs(a), abs(b), 1.0)


@dataclass(frozen=True)
class GadgetSpec:
    """Parameters of one gadget.

    For the three-local kind ``N`` is 3, ``J_a`` is the ancilla coupling
    ``2J`` and ``q_0`` is unused. For the symmetric kind ``f`` holds the
    target energy of every ``N_up`` sector, ``f[0]..f[N]``.
    """
    N: int
    J_N: float = 0.0
    J_a: float = 1.0
    q_0: float = 0.5
    kind: str = N_LOCAL
    f: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gadget kind {self.kind!r}; expected one of {KINDS}")
        if self.N < 2:
            raise ValueError(f"gadget needs N >= 2 logical spins, got {self.N}")
        if self.kind == THREE_LOCAL and self.N != 3:
            raise ValueError(f"the single-ancilla gadget is 3-local, got N={self.N}")
        if self.kind == SYMMETRIC:
            if self.f is None or len(self.f) != self.N + 1:
                raise ValueError(f"symmetric gadget needs N+1={self.N + 1} target energies")
            object.__setattr__(self, "f", tuple(float(v) for v in self.f))
        elif self.f is not None:
            raise ValueError(f"target table f only applies to the {SYMMETRIC} kind")

    @property
    def ancilla_count(self) -> int:
        return 1 if self.kind == THREE_LOCAL else self.N

    @property
    def n_spins(self) -> int:
        return self.N + self.ancilla_count

    @property
    def logical(self) -> Tuple[int, ...]:
        return tuple(range(self.N))

    @property
    def ancilla(self) -> Tuple[int, ...]:
        return tuple(range(self.N, self.n_spins))

    def sector_targets(self) -> Tuple[float, ...]:
        """Target energy per ``N_up`` sector, before any offset."""
        if self.kind == SYMMETRIC:
            return self.f
        return tuple(self.J_N * (-1) ** (self.N - k) for k in range(self.N + 1))


def ancilla_biases(spec: GadgetSpec) -> List[float]:
    """The per-ancilla offsets ``q_1..q_N``."""
    if spec.kind == N_LOCAL:
        return [spec.q_0 + spec.J_N if (spec.N - i) % 2 else spec.q_0 - spec.J_N
                for i in range(1, spec.N + 1)]
    if spec.kind == SYMMETRIC:
        f = spec.f
        return [spec.q_0 - (f[k] - f[k - 1]) / 2 for k in range(1, spec.N + 1)]
    raise ValueError(f"{spec.kind} gadget has no per-ancilla biases")


def ancilla_fields(spec: GadgetSpec) -> List[float]:
    if spec.kind == THREE_LOCAL:
        return [2 * spec.J_N]
    return [-spec.J_a * (2 * i - spec.N) + q
            for i, q in enumerate(ancilla_biases(spec), start=1)]


def _counting_hamiltonian(N: int, J_a: float, q_0: float, fields: Sequence[float]) -> IsingHamiltonian:
    logical_fields: Dict[int, float] = {i: -J_a + q_0 for i in range(N)}
    for i, h in enumerate(fields):
        logical_fields[N + i] = h
    couplings: Dict[Tuple[int, int], float] = {}
    for i in range(N):
        for j in range(i + 1, 2 * N):
            couplings[(i, j)] = J_a
    return IsingHamiltonian.from_fields_and_couplings(2 * N, logical_fields, couplings)


def _check_counting_regime(N: int, J_a: float, q_0: float):
    if N < 2:
        raise GadgetValidityError("N >= 2", f"N={N}")
    if not J_a > 0:
        raise GadgetValidityError("J_a > 0", f"J_a={J_a}")
    if not _strictly_less(q_0, J_a):
        raise GadgetValidityError("q_0 < J_a", f"q_0={q_0}, J_a={J_a}")


def build_n_local(spec: GadgetSpec) -> IsingHamiltonian:
    if spec.kind != N_LOCAL:
        raise ValueError(f"build_n_local needs an {N_LOCAL} spec, got {spec.kind}")
    _check_counting_regime(spec.N, spec.J_a, spec.q_0)
    if not _strictly_less(abs(spec.J_N), spec.q_0):
        raise GadgetValidityError("|J_N| < q_0", f"J_N={spec.J_N}, q_0={spec.q_0}")
    if not _strictly_less(abs(spec.J_N), spec.J_a - spec.q_0):
        raise GadgetValidityError("|J_N| < J_a - q_0", f"J_N={spec.J_N}, J_a={spec.J_a}, q_0={spec.q_0}")
    h = _counting_hamiltonian(spec.N, spec.J_a, spec.q_0, ancilla_fields(spec))
    logger.debug("built %d-local gadget with ancilla fields %s", spec.N, ancilla_fields(spec))
    return h


def build_three_local(J: float, J_N: float) -> IsingHamiltonian:
    """Three logical spins and one ancilla realizing ``J_N σ1σ2σ3``."""
    if not _strictly_less(abs(J_N), 2 * J):
        raise GadgetValidityError("2J > |J_N|", f"J={J}, J_N={J_N}")
    if abs(J_N) >= J:
        logger.warning("three-local gadget with |J_N|=%g >= J=%g: ancilla no longer tracks the "
                       "logical majority and the target spectrum is not reproduced", abs(J_N), J)
    fields = {0: J_N, 1: J_N, 2: J_N, 3: 2 * J_N}
    couplings = {(0, 1): J, (0, 2): J, (1, 2): J,
                 (0, 3): 2 * J, (1, 3): 2 * J, (2, 3): 2 * J}
    return IsingHamiltonian.from_fields_and_couplings(4, fields, couplings)


def build_symmetric(N: int, f: Sequence[float], J_a: float, q_0: float) -> IsingHamiltonian:
    """Gadget whose effective energy at ``N_up = k`` is ``f[k]`` plus a constant.

    Ancilla ``k`` flips exactly when the sector moves from ``k-1`` to ``k``,
    so its bias carries the increment: ``q_k = q_0 - (f[k] - f[k-1]) / 2``.
    """
    spec = GadgetSpec(N=N, J_a=J_a, q_0=q_0, kind=SYMMETRIC, f=tuple(f))
    _check_counting_regime(N, J_a, q_0)
    if not q_0 > 0:
        raise GadgetValidityError("q_0 > 0", f"q_0={q_0}")
    step = max(abs(b - a) for a, b in zip(spec.f, spec.f[1:]))
    bound = min(q_0, J_a - q_0)
    if not _strictly_less(step, bound):
        raise GadgetValidityError("max_k |f(k+1) - f(k)| < min(q_0, J_a - q_0)",
                                  f"step={step}, bound={bound}")
    return _counting_hamiltonian(N, J_a, q_0, ancilla_fields(spec))


def gadget_from_spec(spec: GadgetSpec) -> IsingHamiltonian:
    if spec.kind == N_LOCAL:
        return build_n_local(spec)
    if spec.kind == THREE_LOCAL:
        return build_three_local(spec.J_a / 2, spec.J_N)
    return build_symmetric(spec.N, spec.f, spec.J_a, spec.q_0)


def counting_pattern(spec: GadgetSpec, n_up: int) -> SpinConfig:
    """Ancilla configuration expected in the ground state of sector ``n_up``.

    Counting gadgets flip ancillae ``1..n_up`` down; the single ancilla of the
    three-local gadget points down iff the logical magnetization is positive.
    """
    if not 0 <= n_up <= spec.N:
        raise ValueError(f"n_up must lie in [0, {spec.N}], got {n_up}")
    if spec.kind == THREE_LOCAL:
        return SpinConfig(0 if 2 * n_up - spec.N > 0 else 1, 1)
    full = (1 << spec.N) - 1
    return SpinConfig(full ^ ((1 << n_up) - 1), spec.N)


def target_energy(spec: GadgetSpec, logical: SpinConfig) -> float:
    if logical.n != spec.N:
        raise ValueError(f"logical configuration has {logical.n} spins, gadget has {spec.N}")
    return spec.sector_targets()[bin(logical.bits).count("1")]

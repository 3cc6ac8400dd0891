from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import DimensionMismatchError, IndexSetError

UP = "↑"
DOWN = "↓"


@dataclass(eq=True, frozen=True, order=True)
class SpinConfig:
    """An assignment of +1/-1 to ``n`` ordered spins packed into an integer.

    Bit ``i`` of ``bits`` is spin ``i``; a set bit means +1. Ordering compares
    ``bits`` first, which is the tie-break order used everywhere.
    """
    bits: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatchError(f"spin count must be >= 1, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise DimensionMismatchError(f"bits {self.bits:#x} do not fit in {self.n} spins")

    @classmethod
    def from_spins(cls, values: Iterable[int]) -> "SpinConfig":
        values = list(values)
        bits = 0
        for i, v in enumerate(values):
            if v not in (1, -1):
                raise ValueError(f"spin {i} must be +1 or -1, got {v}")
            if v == 1:
                bits |= 1 << i
        return cls(bits, len(values))

    @classmethod
    def from_arrows(cls, text: str) -> "SpinConfig":
        return cls.from_spins(1 if ch == UP else -1 for ch in text if ch in (UP, DOWN))

    @classmethod
    def all_up(cls, n: int) -> "SpinConfig":
        return cls((1 << n) - 1, n)

    def spin(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexSetError(f"spin index {i} out of range [0, {self.n})")
        return 1 if (self.bits >> i) & 1 else -1

    def spins(self) -> np.ndarray:
        return np.array([self.spin(i) for i in range(self.n)], dtype=np.int8)

    def flipped(self) -> "SpinConfig":
        return SpinConfig(self.bits ^ ((1 << self.n) - 1), self.n)

    def __str__(self):
        return "".join(UP if (self.bits >> i) & 1 else DOWN for i in range(self.n))


def magnetization(c: SpinConfig, subset: Sequence[int]) -> int:
    """Sum of spin values over ``subset``."""
    return sum(c.spin(i) for i in subset)

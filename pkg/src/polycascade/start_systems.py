"""Total-degree start systems with closed-form roots.

The start system paired with a target of degrees (d_1..d_n) is

    g_k(x) = x_k^{d_k} - c_k,   |c_k| = 1 random,

whose roots are all combinations of d_k-th roots of the c_k.  Slack
variables appended by an embedding get the fixed start equation z - 1 = 0
instead of a random constant, so their start value is exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import RandomSource


class ZeroPolynomialError(ValueError):
    """An identically-zero equation has no meaningful start degree."""


@dataclass(frozen=True, eq=False)
class StartSystem:
    """g(x) = x**degrees - constants, componentwise."""

    degrees: tuple[int, ...]
    constants: np.ndarray
    _principal: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.degrees) != self.constants.shape[0]:
            raise ValueError("degrees and constants must have equal length")
        if any(d < 1 for d in self.degrees):
            raise ValueError("start degrees must be positive")
        d = np.array(self.degrees, dtype=np.float64)
        # principal d-th roots; the remaining roots differ by roots of unity
        object.__setattr__(self, "_principal", self.constants ** (1.0 / d))

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def root_count(self) -> int:
        return int(np.prod(self.degrees, dtype=np.int64))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128)
        return x ** np.array(self.degrees) - self.constants

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128)
        d = np.array(self.degrees)
        return np.diag(d * x ** (d - 1))

    def root(self, index: int) -> np.ndarray:
        """Root number index in mixed-radix order over the degrees."""
        if not 0 <= index < self.root_count:
            raise IndexError(f"root index {index} out of range")
        out = np.empty(self.n, dtype=np.complex128)
        rem = index
        for k in range(self.n - 1, -1, -1):
            d = self.degrees[k]
            rem, digit = divmod(rem, d)
            angle = 2.0 * math.pi * digit / d
            out[k] = self._principal[k] * complex(math.cos(angle), math.sin(angle))
        return out

    def roots(self):
        for index in range(self.root_count):
            yield self.root(index)


def build_start_system(target, rng: RandomSource, slack_vars: int = 0) -> StartSystem:
    """Build the total-degree start system for a target.

    Args:
        target: PolynomialSystem-like with a degrees() method, or a plain
            sequence of degrees.  The trailing slack_vars rows are treated as
            slack equations regardless of their listed degree.
        rng: source for the unit-modulus constants.
        slack_vars: how many trailing equations are slack rows (z - 1 = 0).

    Raises:
        ZeroPolynomialError: if any non-slack equation is identically zero
            (degree sentinel -1).
    """
    degs = list(target.degrees() if hasattr(target, "degrees") else target)
    lead = len(degs) - slack_vars
    if lead < 0:
        raise ValueError("more slack variables than equations")
    for k, d in enumerate(degs[:lead]):
        if d < 0:
            raise ZeroPolynomialError(f"equation {k + 1} is identically zero")
    # a nonzero-constant row still gets one path; it can only diverge
    clamped = tuple(max(int(d), 1) for d in degs[:lead]) + (1,) * slack_vars
    constants = np.empty(len(degs), dtype=np.complex128)
    constants[:lead] = rng.unit_complex_array(lead)
    constants[lead:] = 1.0
    return StartSystem(degrees=clamped, constants=constants)

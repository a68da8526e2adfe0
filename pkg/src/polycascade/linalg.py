"""Dense complex linear algebra for path tracking.

LU factorization with partial pivoting, triangular solves, a Hager-style
infinity-norm condition estimator, and the deterministic random stream used
to draw homotopy parameters.  Everything works on numpy complex128 arrays.
The factorization is written out by hand because the tracker needs a hard
singularity signal at a fixed relative pivot tolerance rather than whatever
a LAPACK driver happens to do with an exactly singular matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# A pivot below this fraction of its column's original magnitude is treated
# as structurally zero.
PIVOT_RTOL = 1e-14


class SingularMatrixError(ArithmeticError):
    """Raised when elimination finds no usable pivot in some column."""

    def __init__(self, column: int):
        super().__init__(f"matrix is singular to working precision at column {column}")
        self.column = column


@dataclass(frozen=True)
class LUFactors:
    """Packed LU factorization of a square complex matrix.

    Attributes:
        lu: Combined factors; strictly lower part holds the multipliers of L
            (unit diagonal implied), upper triangle holds U.
        perm: Row permutation applied to the input, as an index array.
        inf_norm: Infinity norm of the original matrix, kept for conditioning.
    """

    lu: np.ndarray
    perm: np.ndarray
    inf_norm: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]


def lu_factor(a: np.ndarray) -> LUFactors:
    """Factor a square matrix as P A = L U with partial pivoting.

    Args:
        a: Square array-like with complex entries.

    Returns:
        LUFactors holding the packed factors.

    Raises:
        SingularMatrixError: if the best pivot available in some column is
            smaller than PIVOT_RTOL times that column's original inf-norm.
    """
    lu = np.array(a, dtype=np.complex128)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {lu.shape}")
    n = lu.shape[0]
    inf_norm = float(np.max(np.sum(np.abs(lu), axis=1))) if n else 0.0
    # Column scales from the unfactored matrix define "zero" for pivots.
    col_scale = np.max(np.abs(lu), axis=0) if n else np.zeros(0)
    perm = np.arange(n)
    for k in range(n):
        pivot_row = k + int(np.argmax(np.abs(lu[k:, k])))
        pivot_mag = abs(lu[pivot_row, k])
        if pivot_mag <= PIVOT_RTOL * col_scale[k] or pivot_mag == 0.0:
            raise SingularMatrixError(k)
        if pivot_row != k:
            lu[[k, pivot_row]] = lu[[pivot_row, k]]
            perm[[k, pivot_row]] = perm[[pivot_row, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return LUFactors(lu=lu, perm=perm, inf_norm=inf_norm)


def lu_solve(factors: LUFactors, b: np.ndarray) -> np.ndarray:
    """Solve A x = b given the LU factorization of A."""
    lu = factors.lu
    n = factors.n
    x = np.asarray(b, dtype=np.complex128)[factors.perm].copy()
    for k in range(n):  # forward: L y = P b
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):  # backward: U x = y
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def _solve_transpose(factors: LUFactors, b: np.ndarray) -> np.ndarray:
    """Solve A^T y = b using the factors of A (A^T = U^T L^T P)."""
    lu = factors.lu
    n = factors.n
    w = np.asarray(b, dtype=np.complex128).copy()
    for k in range(n):  # U^T w = b, forward since U^T is lower
        w[k] = (w[k] - lu[:k, k] @ w[:k]) / lu[k, k]
    for k in range(n - 1, -1, -1):  # L^T v = w, unit diagonal
        w[k] -= lu[k + 1:, k] @ w[k + 1:]
    y = np.empty_like(w)
    y[factors.perm] = w
    return y


def condition_estimate(factors: LUFactors) -> float:
    """Estimate the infinity-norm condition number from an LU factorization.

    Uses Hager's one-norm power iteration on (A^T)^-1, whose one-norm equals
    the infinity-norm of A^-1.  Costs a handful of triangular solves.  Returns
    math.inf if the estimate overflows or loses meaning.
    """
    n = factors.n
    if n == 0:
        return 1.0
    x = np.full(n, 1.0 / n, dtype=np.complex128)
    est = 0.0
    for _ in range(5):
        y = _solve_transpose(factors, x)
        if not np.all(np.isfinite(y)):
            return math.inf
        new_est = float(np.sum(np.abs(y)))
        mags = np.abs(y)
        xi = np.where(mags > 0, y / np.where(mags > 0, mags, 1.0), 1.0)
        # (A^T)^-H xi = conj(A^-1 conj(xi))
        z = np.conj(lu_solve(factors, np.conj(xi)))
        if not np.all(np.isfinite(z)):
            return math.inf
        j = int(np.argmax(np.abs(z)))
        if new_est <= est or abs(z[j]) <= float(np.real(np.vdot(x, z))) + 1e-16:
            est = max(est, new_est)
            break
        est = new_est
        x = np.zeros(n, dtype=np.complex128)
        x[j] = 1.0
    kappa = factors.inf_norm * est
    return kappa if math.isfinite(kappa) else math.inf


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One-shot linear solve, factoring and discarding."""
    return lu_solve(lu_factor(a), b)


class RandomSource:
    """Deterministic stream of unit-modulus complex numbers.

    Every random constant in the solver (start-system roots of unity offsets,
    hyperplane coefficients, multiplier columns, the accessory path constant)
    comes from one of these so a run is reproducible from its seed alone.
    Child streams get an independent generator derived from the same seed.
    """

    def __init__(self, seed: int, _spawn_key: tuple = ()):
        self.seed = int(seed)
        self._spawn_key = tuple(_spawn_key)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self._spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def unit_complex(self) -> complex:
        """Draw one number uniformly from the unit circle."""
        angle = self._gen.uniform(0.0, 2.0 * math.pi)
        return complex(math.cos(angle), math.sin(angle))

    def unit_complex_array(self, count: int) -> np.ndarray:
        angles = self._gen.uniform(0.0, 2.0 * math.pi, size=count)
        return np.cos(angles) + 1j * np.sin(angles)

    def child(self, key: int) -> "RandomSource":
        """Independent stream for retries; stable under call order."""
        return RandomSource(self.seed, self._spawn_key + (int(key),))


def random_unit_complex(source: RandomSource) -> complex:
    return source.unit_complex()

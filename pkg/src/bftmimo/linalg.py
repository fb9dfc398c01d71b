"""Dense complex linear algebra and reproducible complex Gaussian sampling.

Matrices are plain ``numpy`` complex128 arrays. Every routine accepts an
optional leading batch shape so that a whole chunk of Monte Carlo trials can be
processed at once; a single ``(m, n)`` matrix is the batch-free special case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PIVOT_TOL",
    "RngStream",
    "SingularMatrixError",
    "conj",
    "conj_transpose",
    "draw_cn_matrix",
    "frob_norm_sq",
    "invert_small",
    "matmul",
    "stable_mean",
    "trace",
    "transpose",
]

PIVOT_TOL = 1e-12
MAX_INVERT_DIM = 64


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when Gaussian elimination meets a pivot below ``PIVOT_TOL``."""


@dataclass(frozen=True)
class RngStream:
    """Identifies one independent random stream: ``(master_seed, stream_index)``.

    The stream for a given pair is the same no matter which worker consumes it
    or in which order trials are executed.
    """

    master_seed: int
    stream_index: int

    def generator(self) -> np.random.Generator:
        return np.random.default_rng([self.master_seed, self.stream_index])


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def draw_cn_matrix(rng, m: int, n: int, variance: float = 1.0) -> np.ndarray:
    """Draw an ``m x n`` matrix with i.i.d. CN(0, variance) entries.

    ``rng`` is an :class:`RngStream` or a ``numpy.random.Generator``. Real and
    imaginary parts are independent N(0, variance/2), drawn as one block of
    ``2*m*n`` normals (real parts first) so the draw order is fixed.
    """
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance!r}")
    gen = _as_generator(rng)
    z = gen.standard_normal(2 * m * n)
    scale = math.sqrt(variance / 2.0)
    return (scale * (z[: m * n] + 1j * z[m * n:])).reshape(m, n)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[-2]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def transpose(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(np.asarray(a), -1, -2)


def conj(a: np.ndarray) -> np.ndarray:
    return np.conj(a)


def conj_transpose(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(a), -1, -2))


def trace(a: np.ndarray):
    a = np.asarray(a)
    if a.shape[-1] != a.shape[-2]:
        raise ValueError(f"trace needs a square matrix, got shape {a.shape}")
    return np.trace(a, axis1=-2, axis2=-1)


def frob_norm_sq(a: np.ndarray):
    a = np.asarray(a)
    return np.sum(a.real**2 + a.imag**2, axis=(-2, -1))


def invert_small(a: np.ndarray) -> np.ndarray:
    """Invert a small square matrix (or a batch of them) by Gauss-Jordan
    elimination with partial pivoting.

    The elimination runs column by column; the row swap and the update are
    vectorised over any leading batch dimensions.

    Raises
    ------
    SingularMatrixError
        If any pivot magnitude falls below ``PIVOT_TOL``.
    """
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"invert_small needs square matrices, got shape {a.shape}")
    n = a.shape[-1]
    if n > MAX_INVERT_DIM:
        raise ValueError(f"matrix dimension {n} exceeds {MAX_INVERT_DIM}")

    batch_shape = a.shape[:-2]
    work = np.array(a, dtype=np.complex128).reshape(-1, n, n)
    inv = np.broadcast_to(np.eye(n, dtype=np.complex128), work.shape).copy()
    rows = np.arange(work.shape[0])

    for col in range(n):
        piv = col + np.argmax(np.abs(work[:, col:, col]), axis=1)
        pivot_mag = np.abs(work[rows, piv, col])
        if np.any(pivot_mag < PIVOT_TOL):
            raise SingularMatrixError(
                f"pivot {pivot_mag.min():.3e} below {PIVOT_TOL:g} in column {col}"
            )
        swap = piv != col
        if np.any(swap):
            idx = rows[swap]
            for m in (work, inv):
                top = m[idx, col].copy()
                m[idx, col] = m[idx, piv[swap]]
                m[idx, piv[swap]] = top

        p = work[:, col, col][:, None].copy()
        work[:, col] /= p
        inv[:, col] /= p
        factor = work[:, :, col].copy()
        factor[:, col] = 0.0
        work -= factor[:, :, None] * work[:, col][:, None, :]
        inv -= factor[:, :, None] * inv[:, col][:, None, :]

    return inv.reshape(*batch_shape, n, n)


def stable_mean(values) -> float:
    """Order-insensitive mean of real samples (compensated summation)."""
    values = np.asarray(values, dtype=float).ravel()
    return math.fsum(values) / values.size

"""Input validation helpers and the package's exception types."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class ShapeError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class NonFiniteError(ValueError):
    """A matrix contains NaN or infinite entries."""


class SingularMatrixError(np.linalg.LinAlgError):
    """The matrix is (numerically) singular."""


class BranchError(np.linalg.LinAlgError):
    """The principal logarithm is undefined or could not be computed."""


class SymmetryClassError(ValueError):
    """A map does not belong to the RT-symmetry class an operation requires."""


class BlockDims(NamedTuple):
    """Block structure ``(m, n)`` of a matrix in ``M_m (x) M_n``.

    An ``mn x mn`` matrix is read as ``m x m`` blocks, each ``n x n``.
    """

    m: int
    n: int

    @property
    def size(self) -> int:
        return self.m * self.n

    def swapped(self) -> "BlockDims":
        return BlockDims(self.n, self.m)

    def __str__(self) -> str:
        return f"{self.m}x{self.n}"


def check_dims(dims) -> BlockDims:
    """Coerce ``dims`` to :class:`BlockDims`, rejecting non-positive sizes."""
    if isinstance(dims, str):
        parts = dims.lower().split("x")
        if len(parts) != 2:
            raise ValueError(f"bad dims {dims!r}; expected e.g. '2x3'")
        try:
            dims = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise ValueError(f"bad dims {dims!r}; expected e.g. '2x3'") from None
    try:
        m, n = dims
    except (TypeError, ValueError):
        raise ValueError(f"dims must be a pair (m, n), got {dims!r}") from None
    if int(m) != m or int(n) != n or m < 1 or n < 1:
        raise ValueError(f"dims must be positive integers, got {dims!r}")
    return BlockDims(int(m), int(n))


def check_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array (copied if conversion needed)."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return arr


def check_square(a, name: str = "matrix") -> np.ndarray:
    arr = check_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_block_matrix(x, dims, name: str = "matrix") -> tuple[np.ndarray, BlockDims]:
    """Validate that ``x`` is ``mn x mn`` for ``dims = (m, n)``."""
    dims = check_dims(dims)
    arr = check_square(x, name)
    if arr.shape[0] != dims.size:
        raise ShapeError(
            f"{name} has shape {arr.shape}, expected {dims.size}x{dims.size} for dims {dims}"
        )
    return arr, dims


def check_random_state(seed) -> np.random.Generator:
    """Turn ``seed`` (None, int or Generator) into a ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (int, np.integer)):
        return np.random.default_rng(seed)
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    raise ValueError(f"{seed!r} cannot be used to seed a numpy Generator")


def max_abs(a) -> float:
    """Max-norm of an array; 0.0 for empty input."""
    arr = np.asarray(a)
    return float(np.max(np.abs(arr))) if arr.size else 0.0

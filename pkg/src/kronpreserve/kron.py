"""Kronecker products and sums, vec, the perfect shuffle, the rearrangement
operator and the two partial traces on ``M_m (x) M_n``.

Conventions
-----------
``vec`` stacks ROWS: ``vec(E_jv) = e_j (x) e_v``, i.e. ``vec(X) = X.reshape(-1)``.
With this convention ``vec(L X R) = (L (x) R^T) vec(X)``.

An ``mn x mn`` matrix is addressed as ``m x m`` blocks of size ``n x n``; the
partial traces reshape it to ``(m, n, m, n)`` and reduce, so no Kronecker
product is ever built inside them.
"""

from __future__ import annotations

import numpy as np

from ._validation import (
    BlockDims,
    ShapeError,
    check_block_matrix,
    check_dims,
    check_matrix,
    check_square,
)

__all__ = [
    "kron_product",
    "kron_sum",
    "vec",
    "unvec",
    "perfect_shuffle",
    "rearrange",
    "rearrange_inverse",
    "partial_trace_1",
    "partial_trace_2",
]


def kron_product(a, b) -> np.ndarray:
    """Block matrix ``(a_ij * b)`` of shape ``(a.rows*b.rows, a.cols*b.cols)``."""
    return np.kron(check_matrix(a, "a"), check_matrix(b, "b"))


def kron_sum(a, b) -> np.ndarray:
    """``a (+) b = a (x) I_n + I_m (x) b`` for square ``a`` (m x m), ``b`` (n x n)."""
    a = check_square(a, "a")
    b = check_square(b, "b")
    m, n = a.shape[0], b.shape[0]
    return np.kron(a, np.eye(n)) + np.kron(np.eye(m), b)


def vec(a) -> np.ndarray:
    """Row-stacked column vector of ``a``, shape ``(rows*cols, 1)``."""
    return check_matrix(a).reshape(-1, 1)


def unvec(v, shape=None) -> np.ndarray:
    """Inverse of :func:`vec`. ``shape`` defaults to square."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if shape is None:
        d = int(round(np.sqrt(v.size)))
        if d * d != v.size:
            raise ShapeError(f"cannot unvec length {v.size} into a square matrix")
        shape = (d, d)
    if shape[0] * shape[1] != v.size:
        raise ShapeError(f"cannot unvec length {v.size} into shape {shape}")
    return v.reshape(shape)


def perfect_shuffle(m: int, n: int) -> np.ndarray:
    """Vec-permutation matrix ``P`` with ``P.T @ kron(A, B) @ P == kron(B, A)``.

    ``A`` is ``m x m`` and ``B`` is ``n x n``. ``P`` maps ``e_b (x) e_a`` in
    ``C^n (x) C^m`` to ``e_a (x) e_b`` in ``C^m (x) C^n``.
    """
    m, n = check_dims((m, n))
    p = np.zeros((m * n, m * n))
    a, b = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    p[(a * n + b).ravel(), (b * m + a).ravel()] = 1.0
    return p


def _rearrange_dims(x, dims):
    if dims is None:
        x = check_square(x)
        d = int(round(np.sqrt(x.shape[0])))
        if d * d != x.shape[0]:
            raise ShapeError(f"rearrange needs a d^2 x d^2 matrix, got {x.shape}")
        return x, BlockDims(d, d)
    if isinstance(dims, (int, np.integer)):
        dims = (dims, dims)
    return check_block_matrix(x, dims)


def rearrange(x, dims=None) -> np.ndarray:
    """Rearrangement operator: the linear map with ``R(A (x) B) = vec(A) vec(B)^T``.

    ``dims`` is the block structure ``(m, n)`` of ``x`` (an int ``d`` means
    ``(d, d)``; omitted means ``x`` is ``d^2 x d^2``). The result is
    ``m^2 x n^2``.
    """
    x, (m, n) = _rearrange_dims(x, dims)
    return x.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)


def rearrange_inverse(y, dims) -> np.ndarray:
    """Inverse of :func:`rearrange`: maps ``vec(A) vec(B)^T`` back to ``A (x) B``."""
    if isinstance(dims, (int, np.integer)):
        dims = (dims, dims)
    m, n = check_dims(dims)
    y = check_matrix(y)
    if y.shape != (m * m, n * n):
        raise ShapeError(f"expected shape {(m * m, n * n)}, got {y.shape}")
    return y.reshape(m, m, n, n).transpose(0, 2, 1, 3).reshape(m * n, m * n)


def partial_trace_1(x, dims) -> np.ndarray:
    """First partial trace: the sum of the diagonal ``n x n`` blocks."""
    x, (m, n) = check_block_matrix(x, dims)
    return np.einsum("iaib->ab", x.reshape(m, n, m, n))


def partial_trace_2(x, dims) -> np.ndarray:
    """Second partial trace: each ``n x n`` block replaced by its trace."""
    x, (m, n) = check_block_matrix(x, dims)
    return np.einsum("iaja->ij", x.reshape(m, n, m, n))

"""Dense complex matrix arithmetic.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every public
function validates its operands (shape, finiteness) and returns a new array;
inputs are never modified.
"""

from __future__ import annotations

import numpy as np

from ._validation import (
    BranchError,
    ShapeError,
    SingularMatrixError,
    check_matrix,
    check_random_state,
    check_square,
)

__all__ = [
    "mat_add",
    "mat_mul",
    "trace",
    "commutator",
    "anticommutator",
    "determinant",
    "lu_factor",
    "mat_exp",
    "principal_log",
    "sqrtm_denman_beavers",
    "sample_matrix",
    "unit_matrix",
]


def _same_shape(a, b):
    a = check_matrix(a, "a")
    b = check_matrix(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def _same_square(a, b):
    a = check_square(a, "a")
    b = check_square(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def unit_matrix(i: int, j: int, n: int) -> np.ndarray:
    """The ``n x n`` matrix unit with a single one at zero-based ``(i, j)``."""
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def mat_add(a, b) -> np.ndarray:
    a, b = _same_shape(a, b)
    return a + b


def mat_mul(a, b) -> np.ndarray:
    a = check_matrix(a, "a")
    b = check_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(a) -> complex:
    a = check_square(a)
    return complex(np.trace(a))


def commutator(a, b) -> np.ndarray:
    """``[a, b] = ab - ba``."""
    a, b = _same_square(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    """``[a, b]_+ = ab + ba``."""
    a, b = _same_square(a, b)
    return a @ b + b @ a


def lu_factor(a):
    """LU factorization with partial pivoting, ``a[perm] = L @ U``.

    Returns ``(lu, perm, sign)`` where ``lu`` packs the unit lower factor below
    the diagonal and ``U`` on and above it, ``perm`` is the row permutation and
    ``sign`` its parity (+1 or -1). A zero pivot column is skipped, so singular
    input yields a zero on the diagonal of ``U`` rather than an error.
    """
    lu = check_square(a).copy()
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = lu[k, k]
        if pivot == 0:
            continue
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def determinant(a) -> complex:
    """Determinant as the signed product of the LU pivots."""
    lu, _, sign = lu_factor(a)
    return complex(sign * np.prod(np.diag(lu)))


# Pade coefficients and switching thresholds for the [m/m] approximant of exp
# (scaling-and-squaring, Higham 2005).
_PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
_PADE_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}


def _pade_uv(a, m):
    b = _PADE_COEFFS[m]
    n = a.shape[0]
    ident = np.eye(n, dtype=complex)
    a2 = a @ a
    if m < 13:
        powers = [ident, a2]
        for _ in range(2, m // 2 + 1):
            powers.append(powers[-1] @ a2)
        u = a @ sum(b[2 * k + 1] * powers[k] for k in range(m // 2 + 1))
        v = sum(b[2 * k] * powers[k] for k in range(m // 2 + 1))
        return u, v
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def mat_exp(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a diagonal Pade core."""
    a = check_square(a)
    norm1 = float(np.linalg.norm(a, 1))
    for m in (3, 5, 7, 9):
        if norm1 <= _PADE_THETA[m]:
            u, v = _pade_uv(a, m)
            return np.linalg.solve(v - u, v + u)
    s = max(0, int(np.ceil(np.log2(norm1 / _PADE_THETA[13])))) if norm1 > 0 else 0
    scaled = a / (2.0 ** s)
    u, v = _pade_uv(scaled, 13)
    x = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        x = x @ x
    return x


def sqrtm_denman_beavers(a, tol: float = 1e-14, max_iter: int = 100) -> np.ndarray:
    """Principal square root via the scaled Denman-Beavers iteration.

    Raises :class:`BranchError` if the iteration does not settle within
    ``max_iter`` steps (typically an eigenvalue on or near the negative real
    axis).
    """
    y = check_square(a)
    n = y.shape[0]
    z = np.eye(n, dtype=complex)
    for k in range(max_iter):
        try:
            y_inv = np.linalg.inv(y)
            z_inv = np.linalg.inv(z)
        except np.linalg.LinAlgError as exc:
            raise BranchError("square-root iteration hit a singular iterate") from exc
        # determinant scaling speeds up the early iterations only
        if k < 10:
            dy = abs(determinant(y))
            dz = abs(determinant(z))
            mu = (dy * dz) ** (-1.0 / (2 * n)) if dy > 0 and dz > 0 else 1.0
        else:
            mu = 1.0
        y_next = 0.5 * (mu * y + z_inv / mu)
        z_next = 0.5 * (mu * z + y_inv / mu)
        delta = np.linalg.norm(y_next - y, 1)
        y, z = y_next, z_next
        if delta <= tol * np.linalg.norm(y, 1):
            return y
    raise BranchError("Denman-Beavers square root did not converge")


def _log_near_identity(x, tol=1e-18):
    # log X = 2 atanh(Z), Z = (X - I)(X + I)^{-1}; converges fast for X near I
    n = x.shape[0]
    ident = np.eye(n, dtype=complex)
    z = np.linalg.solve((x + ident).T, (x - ident).T).T
    z2 = z @ z
    term = z.copy()
    total = z.copy()
    for k in range(1, 200):
        term = term @ z2
        contrib = term / (2 * k + 1)
        total += contrib
        if np.linalg.norm(contrib, 1) <= tol * max(1.0, np.linalg.norm(total, 1)):
            break
    return 2.0 * total


def principal_log(a, root_radius: float = 0.1) -> np.ndarray:
    """Principal matrix logarithm by inverse scaling and squaring.

    Takes repeated principal square roots (Denman-Beavers) until the argument
    is within ``root_radius`` of the identity, applies a Gregory series, and
    scales back by ``2**k``. The input must be non-singular with no eigenvalue
    on the closed negative real axis.
    """
    a = check_square(a)
    n = a.shape[0]
    scale = max(float(np.linalg.norm(a, 2)), np.finfo(float).tiny)
    sv_min = float(np.linalg.svd(a, compute_uv=False)[-1])
    if sv_min <= 1e-14 * scale:
        raise SingularMatrixError("principal_log of a singular matrix")
    eig = np.linalg.eigvals(a)
    on_cut = (eig.real < 0) & (np.abs(eig.imag) <= 1e-12 * np.abs(eig))
    if np.any(on_cut):
        raise BranchError("eigenvalue on the negative real axis; principal log undefined")
    ident = np.eye(n, dtype=complex)
    x = a
    k = 0
    while np.linalg.norm(x - ident, 1) > root_radius:
        if k >= 60:
            raise BranchError("too many square roots; input too close to the branch cut")
        x = sqrtm_denman_beavers(x)
        k += 1
    return (2.0 ** k) * _log_near_identity(x)


def sample_matrix(dims, seed=None, kind: str = "general") -> np.ndarray:
    """Random complex matrix with real and imaginary parts uniform on [-1, 1].

    ``dims`` is ``n`` (square) or ``(rows, cols)``. ``kind`` is one of
    ``general``, ``traceless`` (subtracts ``tr/n * I``) or ``hermitian``
    (returns ``(X + X*) / 2``); the last two need square dims. ``seed`` may be
    an int or a ``numpy.random.Generator``; a fixed int gives a fixed matrix.
    """
    if isinstance(dims, (int, np.integer)):
        rows = cols = int(dims)
    else:
        rows, cols = (int(d) for d in dims)
    if rows < 1 or cols < 1:
        raise ValueError(f"dims must be positive, got {dims!r}")
    if kind not in ("general", "traceless", "hermitian"):
        raise ValueError(f"unknown kind {kind!r}")
    rng = check_random_state(seed)
    x = rng.uniform(-1.0, 1.0, (rows, cols)) + 1j * rng.uniform(-1.0, 1.0, (rows, cols))
    if kind == "general":
        return x
    if rows != cols:
        raise ShapeError(f"kind={kind!r} requires a square shape, got {(rows, cols)}")
    if kind == "traceless":
        return x - (np.trace(x) / rows) * np.eye(rows)
    return 0.5 * (x + x.conj().T)

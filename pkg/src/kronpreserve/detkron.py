"""Normalized traces and set-valued determinants on ``M_mn(C)``.

``Det(X)`` is the coset ``det(X)^(1/k) R_k`` where ``R_k`` is the group of
k-th roots of unity and ``k`` the size of ``X``. Partial determinants are
defined by transport through the exponential::

    Det_1(e^M) = e^{Tr_1(M)} R_m,    Det_2(e^M) = e^{Tr_2(M)} R_n,

with ``Tr_1 = tr_1 / m`` and ``Tr_2 = tr_2 / n``. The logarithm ``M`` comes
from a witness when one is available and from :func:`core.principal_log`
otherwise. :func:`blockwise_det` is a different object (determinants of the
individual blocks), not multiplicative in general, and is never used in
place of a partial determinant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import core
from ._validation import (
    BlockDims,
    ShapeError,
    SingularMatrixError,
    SymmetryClassError,
    check_block_matrix,
    check_dims,
    check_random_state,
    check_square,
    max_abs,
)
from .kron import kron_sum, partial_trace_1, partial_trace_2
from .preserver import KroneckerTerm, oracle_preserves_trace, terms_superop
from .superop import (
    DEFAULT_TOL,
    SuperOperator,
    is_rt_hermitian,
    is_rt_skew,
    is_rt_skew_hermitian,
    is_rt_symmetric,
    superop_apply,
)

__all__ = [
    "COSET_TOL",
    "RootCoset",
    "CosetMatrix",
    "OmegaWitness",
    "PsiMap",
    "omega_witness",
    "witness_from_value",
    "norm_trace",
    "norm_det",
    "norm_partial_trace",
    "partial_det",
    "blockwise_det",
    "psi_apply",
    "det_preserver_iff_trace",
    "sampled_det_probe",
    "corollary_uv",
    "corollary_det_check",
    "theorem_det_rt",
]

COSET_TOL = 1e-7


@dataclass(frozen=True)
class RootCoset:
    """The set ``rep * R_order``."""

    rep: complex
    order: int

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"order must be a positive integer, got {self.order!r}")
        object.__setattr__(self, "rep", complex(self.rep))
        object.__setattr__(self, "order", int(self.order))

    def members(self) -> np.ndarray:
        k = self.order
        return self.rep * np.exp(2j * np.pi * np.arange(k) / k)

    def equals(self, other: "RootCoset", tol: float = COSET_TOL) -> bool:
        """Set equality: same order and ``(rep/other.rep)^k = 1`` within ``tol``."""
        if self.order != other.order:
            return False
        if self.rep == 0 or other.rep == 0:
            return self.rep == other.rep
        return abs((self.rep / other.rep) ** self.order - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class CosetMatrix:
    """The set ``{z * base : z in coset}``."""

    base: np.ndarray
    coset: RootCoset = field(default_factory=lambda: RootCoset(1.0, 1))

    def equals(self, other: "CosetMatrix", tol: float = COSET_TOL) -> bool:
        """True when the two sets coincide.

        Scans the ``k`` roots of unity ``w`` for one with
        ``other.rep * other.base = w * self.rep * self.base`` to relative
        ``tol`` in the max-norm.
        """
        if self.coset.order != other.coset.order:
            return False
        a = self.coset.rep * np.asarray(self.base)
        b = other.coset.rep * np.asarray(other.base)
        if a.shape != b.shape:
            return False
        scale = max(max_abs(a), max_abs(b))
        if scale == 0:
            return True
        k = self.coset.order
        for w in np.exp(2j * np.pi * np.arange(k) / k):
            if max_abs(b - w * a) <= tol * scale:
                return True
        return False


@dataclass(frozen=True, eq=False)
class OmegaWitness:
    """A non-singular matrix ``value`` together with a logarithm ``log_part``."""

    log_part: np.ndarray
    value: np.ndarray


@dataclass(frozen=True, eq=False)
class PsiMap:
    """``psi(e^M) = e^{phi(M)}`` for a linear ``phi`` on ``M_mn``."""

    phi: SuperOperator
    dims: BlockDims

    def __post_init__(self):
        dims = check_dims(self.dims)
        if self.phi.d != dims.size:
            raise ShapeError(f"phi acts on M_{self.phi.d}, dims {dims} need M_{dims.size}")
        object.__setattr__(self, "dims", dims)


def omega_witness(log_part) -> OmegaWitness:
    log_part = check_square(log_part, "log_part")
    return OmegaWitness(log_part, core.mat_exp(log_part))


def witness_from_value(x) -> OmegaWitness:
    """Attach the principal logarithm to ``x``."""
    x = check_square(x)
    return OmegaWitness(core.principal_log(x), x)


def _log_of(x) -> np.ndarray:
    if isinstance(x, OmegaWitness):
        return x.log_part
    return core.principal_log(x)


def norm_trace(x) -> complex:
    """``Tr(x) = tr(x) / n``."""
    x = check_square(x)
    return complex(np.trace(x) / x.shape[0])


def norm_det(x) -> RootCoset:
    """``Det(x) = det(x)^(1/n) R_n`` with the principal n-th root as representative."""
    x = check_square(x)
    n = x.shape[0]
    det = core.determinant(x)
    if det == 0:
        raise SingularMatrixError("Det of a singular matrix")
    return RootCoset(det ** (1.0 / n), n)


def norm_partial_trace(x, dims, which: int) -> np.ndarray:
    """``Tr_1 = tr_1 / m`` (in ``M_n``) or ``Tr_2 = tr_2 / n`` (in ``M_m``)."""
    x, dims = check_block_matrix(x, dims)
    if which == 1:
        return partial_trace_1(x, dims) / dims.m
    if which == 2:
        return partial_trace_2(x, dims) / dims.n
    raise ValueError(f"which must be 1 or 2, got {which!r}")


def partial_det(x: Union[np.ndarray, OmegaWitness], dims, which: int) -> CosetMatrix:
    """``Det_1(e^M) = e^{Tr_1 M} R_m`` or ``Det_2(e^M) = e^{Tr_2 M} R_n``."""
    dims = check_dims(dims)
    log_part = _log_of(x)
    order = dims.m if which == 1 else dims.n
    base = core.mat_exp(norm_partial_trace(log_part, dims, which))
    return CosetMatrix(base, RootCoset(1.0, order))


def blockwise_det(x, dims) -> np.ndarray:
    """``m x m`` matrix whose ``(i, j)`` entry is ``det`` of block ``X_ij``."""
    x, (m, n) = check_block_matrix(x, dims)
    blocks = x.reshape(m, n, m, n).transpose(0, 2, 1, 3)
    out = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            out[i, j] = core.determinant(blocks[i, j])
    return out


def psi_apply(psi: PsiMap, x: Union[np.ndarray, OmegaWitness]) -> OmegaWitness:
    """``psi(e^M) = e^{phi(M)}``; the result carries ``phi(M)`` as its log.

    ``phi(M)`` need not have eigenvalues in the principal strip, but it is an
    exact logarithm of the value, which is all :func:`partial_det` needs.
    """
    image = superop_apply(psi.phi, _log_of(x))
    return omega_witness(image)


def det_preserver_iff_trace(psi: PsiMap, dims=None, tol: float = DEFAULT_TOL) -> bool:
    """``det psi(A (x) B) = det(A (x) B)`` on exponentials iff ``phi`` preserves ``tr(A (+) B)``.

    The comparison is made at the level of traces of logarithms; see
    :func:`sampled_det_probe` for the weaker check on determinants themselves.
    """
    dims = psi.dims if dims is None else check_dims(dims)
    return oracle_preserves_trace(psi.phi, dims, tol)


def sampled_det_probe(psi: PsiMap, trials: int = 50, seed=None, scale: Optional[float] = None) -> float:
    """Largest relative gap ``|det psi(e^{A(+)B}) - det e^{A(+)B}| / |det e^{A(+)B}|``
    over random ``A``, ``B`` with entries of modulus at most ``scale * sqrt(2)``.

    The default scale is ``0.5 / max(1, ||Phi||_2)``: large exponents make
    ``det e^X`` unrecoverable in floating point even though ``e^{tr X}`` is
    modest.
    """
    m, n = psi.dims
    rng = check_random_state(seed)
    if scale is None:
        scale = 0.5 / max(1.0, float(np.linalg.norm(psi.phi.phi_matrix, 2)))
    worst = 0.0
    for _ in range(trials):
        a = scale * core.sample_matrix(m, rng)
        b = scale * core.sample_matrix(n, rng)
        w = omega_witness(kron_sum(a, b))
        lhs = core.determinant(psi_apply(psi, w).value)
        rhs = core.determinant(w.value)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return float(worst)


def corollary_uv(terms: Sequence[KroneckerTerm], dims):
    """``U = exp((1/m) sum tr(A_j B_j) [C_j, D_j])`` in ``M_n`` and
    ``V = exp((1/n) sum tr(C_j D_j) [A_j, B_j])`` in ``M_m``."""
    m, n = check_dims(dims)
    gen_u = np.zeros((n, n), dtype=complex)
    gen_v = np.zeros((m, m), dtype=complex)
    for t in terms:
        if t.dims != (m, n):
            raise ShapeError(f"term has dims {t.dims}, expected {(m, n)}")
        gen_u += np.trace(t.A @ t.B) * core.commutator(t.C, t.D)
        gen_v += np.trace(t.C @ t.D) * core.commutator(t.A, t.B)
    return core.mat_exp(gen_u / m), core.mat_exp(gen_v / n)


def corollary_det_check(terms: Sequence[KroneckerTerm], dims, tol: float = COSET_TOL):
    """``(condition, preserves)`` for ``phi(M) = M + sum (A_j(x)C_j) M (B_j(x)D_j)``.

    condition: ``Det_1(psi(e^I)) = e^{I_n} U R_m`` and
    ``Det_2(psi(e^I)) = e^{I_m} V R_n``. The argument of ``psi`` is read as
    ``e^{I_mn}``.
    """
    dims = check_dims(dims)
    m, n = dims
    terms = list(terms)
    psi = PsiMap(terms_superop(terms, dims), dims)
    u, v = corollary_uv(terms, dims)
    image = psi_apply(psi, omega_witness(np.eye(dims.size)))
    ok_1 = partial_det(image, dims, 1).equals(CosetMatrix(np.e * u, RootCoset(1.0, m)), tol)
    ok_2 = partial_det(image, dims, 2).equals(CosetMatrix(np.e * v, RootCoset(1.0, n)), tol)
    return ok_1 and ok_2, det_preserver_iff_trace(psi)


def theorem_det_rt(psi: PsiMap, dims=None, tol: float = COSET_TOL, skew: bool = False,
                   class_tol: float = DEFAULT_TOL, image: Optional[OmegaWitness] = None):
    """``(condition, preserves)`` for RT-symmetric/Hermitian ``phi`` (or skew variants).

    condition: ``Det_1(psi(e^I)) = e^{s I_n} R_m`` and
    ``Det_2(psi(e^I)) = e^{s I_m} R_n`` with ``s = -1`` if ``skew`` else ``1``.
    ``image`` overrides ``psi(e^I)`` (used to probe coset invariance).

    Raises :class:`SymmetryClassError` when ``phi`` is outside the class.
    """
    dims = psi.dims if dims is None else check_dims(dims)
    m, n = dims
    phi = psi.phi
    if skew:
        in_class = is_rt_skew(phi, class_tol) or is_rt_skew_hermitian(phi, class_tol)
    else:
        in_class = is_rt_symmetric(phi, class_tol) or is_rt_hermitian(phi, class_tol)
    if not in_class:
        kind = "skew RT-symmetric or skew RT-Hermitian" if skew else "RT-symmetric or RT-Hermitian"
        raise SymmetryClassError(f"map is not {kind}")
    s = -1.0 if skew else 1.0
    if image is None:
        image = psi_apply(psi, omega_witness(np.eye(dims.size)))
    want_1 = CosetMatrix(np.exp(s) * np.eye(n), RootCoset(1.0, m))
    want_2 = CosetMatrix(np.exp(s) * np.eye(m), RootCoset(1.0, n))
    condition = (partial_det(image, dims, 1).equals(want_1, tol)
                 and partial_det(image, dims, 2).equals(want_2, tol))
    return condition, det_preserver_iff_trace(psi, dims, class_tol)

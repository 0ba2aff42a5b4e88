"""Linear maps on ``M_mn`` that preserve ``tr(A (+) B)``.

Every check returns a :class:`PreserverReport` pairing the algebraic condition
with the brute-force oracle, so a caller can see both verdicts and whether
they agree.

The oracle is exact up to rounding: by linearity, ``tr phi(A (+) B) =
tr(A (+) B)`` for all ``A``, ``B`` iff it holds on ``E_ij (x) I_n`` and
``I_m (x) E_kl``, which is a finite set of ``m^2 + n^2`` evaluations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import core
from ._validation import (
    BlockDims,
    ShapeError,
    SymmetryClassError,
    check_block_matrix,
    check_dims,
    check_random_state,
    check_square,
    max_abs,
)
from .kron import partial_trace_1, partial_trace_2
from .superop import (
    DEFAULT_TOL,
    SuperOperator,
    conjugate,
    is_rt_skew,
    is_rt_symmetric,
    left_mult,
    prime_transform,
    superop_apply,
    superop_from_terms,
)

__all__ = [
    "PreserverReport",
    "KroneckerTerm",
    "TracelessVerdict",
    "trace_defect",
    "oracle_preserves_trace",
    "check_left_mult",
    "synth_left_mult_preserver",
    "sample_traceless_factors",
    "corollary_traceless_iff",
    "terms_superop",
    "lemma_commutator_check",
    "lemma_anticommutator_check",
    "theorem_phiprime_check",
    "corollary_rt_check",
    "operator_sum_factorization",
    "random_preserver",
    "NoPreserverError",
]


@dataclass(frozen=True)
class PreserverReport:
    """Verdicts of a characterization and of the oracle on the same map.

    ``residual_1`` lives in ``M_n`` (first partial trace condition) and
    ``residual_2`` in ``M_m``. ``max_defect`` is the larger of the residual
    max-norms and the oracle's own defect.
    """

    holds_oracle: bool
    holds_condition: bool
    residual_1: np.ndarray
    residual_2: np.ndarray
    max_defect: float

    @property
    def agree(self) -> bool:
        return self.holds_oracle == self.holds_condition

    def to_dict(self) -> dict:
        def pairs(a):
            return [[[float(z.real), float(z.imag)] for z in row] for row in a]

        return {
            "holds_oracle": self.holds_oracle,
            "holds_condition": self.holds_condition,
            "agree": self.agree,
            "max_defect": self.max_defect,
            "residual_1": pairs(self.residual_1),
            "residual_2": pairs(self.residual_2),
        }


@dataclass(frozen=True)
class KroneckerTerm:
    """One term ``(A (x) C) M (B (x) D)``; ``A, B`` in ``M_m`` and ``C, D`` in ``M_n``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, check_square(getattr(self, name), name))
        if self.A.shape != self.B.shape or self.C.shape != self.D.shape:
            raise ShapeError("A, B must share a shape and C, D must share a shape")

    @property
    def dims(self) -> BlockDims:
        return BlockDims(self.A.shape[0], self.C.shape[0])

    @property
    def left(self) -> np.ndarray:
        return np.kron(self.A, self.C)

    @property
    def right(self) -> np.ndarray:
        return np.kron(self.B, self.D)


class TracelessVerdict(NamedTuple):
    traceless: bool
    preserves: bool
    independent: bool


class NoPreserverError(ValueError):
    """The requested RT class contains no trace preserver."""


def _check_map(phi: SuperOperator, dims) -> BlockDims:
    dims = check_dims(dims)
    if phi.d != dims.size:
        raise ShapeError(f"map acts on M_{phi.d}, dims {dims} need M_{dims.size}")
    return dims


def trace_defect(phi: SuperOperator, dims) -> float:
    """Largest ``|tr phi(X) - tr X|`` over ``X = E_ij (x) I_n`` and ``I_m (x) E_kl``."""
    m, n = _check_map(phi, dims)
    worst = 0.0
    eye_m, eye_n = np.eye(m), np.eye(n)
    for i in range(m):
        for j in range(m):
            x = np.kron(core.unit_matrix(i, j, m), eye_n)
            worst = max(worst, abs(np.trace(superop_apply(phi, x)) - (n if i == j else 0)))
    for k in range(n):
        for l in range(n):
            x = np.kron(eye_m, core.unit_matrix(k, l, n))
            worst = max(worst, abs(np.trace(superop_apply(phi, x)) - (m if k == l else 0)))
    return float(worst)


def oracle_preserves_trace(phi: SuperOperator, dims, tol: float = DEFAULT_TOL) -> bool:
    return trace_defect(phi, dims) <= tol


def _report(phi, dims, residual_1, residual_2, tol) -> PreserverReport:
    oracle = trace_defect(phi, dims)
    r1, r2 = max_abs(residual_1), max_abs(residual_2)
    return PreserverReport(
        holds_oracle=oracle <= tol,
        holds_condition=r1 <= tol and r2 <= tol,
        residual_1=residual_1,
        residual_2=residual_2,
        max_defect=max(r1, r2, oracle),
    )


def check_left_mult(p, dims, tol: float = DEFAULT_TOL) -> PreserverReport:
    """``M -> P M`` preserves ``tr(A (+) B)`` iff ``tr_1 P = m I_n`` and ``tr_2 P = n I_m``."""
    p, dims = check_block_matrix(p, dims, "P")
    m, n = dims
    residual_1 = partial_trace_1(p, dims) - m * np.eye(n)
    residual_2 = partial_trace_2(p, dims) - n * np.eye(m)
    return _report(left_mult(p), dims, residual_1, residual_2, tol)


def sample_traceless_factors(dims, r: int, seed=None) -> list:
    """``r`` pairs ``(A_j, B_j)`` of random traceless matrices in ``M_m x M_n``."""
    m, n = check_dims(dims)
    if r < 0:
        raise ValueError("r must be non-negative")
    rng = check_random_state(seed)
    return [
        (core.sample_matrix(m, rng, "traceless"), core.sample_matrix(n, rng, "traceless"))
        for _ in range(r)
    ]


def synth_left_mult_preserver(dims, r: int, seed=None) -> np.ndarray:
    """``P = I + sum_{j<=r} A_j (x) B_j`` with traceless random factors.

    Linear independence of the factors is generic when ``r <= min(m^2, n^2)``.
    """
    dims = check_dims(dims)
    p = np.eye(dims.size, dtype=complex)
    for a, b in sample_traceless_factors(dims, r, seed):
        p += np.kron(a, b)
    return p


def _independent(mats, thresh=1e-8) -> bool:
    if not mats:
        return True
    stacked = np.stack([np.asarray(x).reshape(-1) for x in mats], axis=1)
    sv = np.linalg.svd(stacked, compute_uv=False)
    return bool(sv[-1] > thresh * sv[0]) if sv[0] > 0 else False


def corollary_traceless_iff(terms: Sequence, dims, tol: float = DEFAULT_TOL) -> TracelessVerdict:
    """For ``P = I + sum A_j (x) B_j``: are all factors traceless, and does ``M -> PM`` preserve?

    The two flags are claimed equal only when both factor families are
    linearly independent (``r`` is then the tensor rank of ``P - I``). If the
    rank check fails the verdict is still returned, with
    ``independent=False`` and a warning.
    """
    dims = check_dims(dims)
    m, n = dims
    p = np.eye(dims.size, dtype=complex)
    traceless = True
    for a, b in terms:
        a = check_square(a, "A")
        b = check_square(b, "B")
        if a.shape != (m, m) or b.shape != (n, n):
            raise ShapeError(f"factors must be {m}x{m} and {n}x{n}")
        traceless &= abs(np.trace(a)) <= tol and abs(np.trace(b)) <= tol
        p += np.kron(a, b)
    independent = _independent([a for a, _ in terms]) and _independent([b for _, b in terms])
    if not independent:
        warnings.warn(
            "factor families are linearly dependent; the traceless iff is not claimed",
            stacklevel=2,
        )
    preserves = oracle_preserves_trace(left_mult(p), dims, tol)
    return TracelessVerdict(bool(traceless), preserves, independent)


def terms_superop(terms: Sequence[KroneckerTerm], dims) -> SuperOperator:
    """``phi(M) = M + sum_j (A_j (x) C_j) M (B_j (x) D_j)``."""
    dims = check_dims(dims)
    pairs = [(np.eye(dims.size), np.eye(dims.size))]
    for t in terms:
        if t.dims != dims:
            raise ShapeError(f"term has dims {t.dims}, expected {dims}")
        pairs.append((t.left, t.right))
    return superop_from_terms(pairs, dims.size)


def _lemma_check(terms, dims, tol, bracket) -> PreserverReport:
    dims = check_dims(dims)
    m, n = dims
    terms = list(terms)
    phi = terms_superop(terms, dims)
    defect = superop_apply(phi, np.eye(dims.size)) - np.eye(dims.size)
    rhs_1 = np.zeros((n, n), dtype=complex)
    rhs_2 = np.zeros((m, m), dtype=complex)
    for t in terms:
        rhs_1 += np.trace(t.A @ t.B) * bracket(t.C, t.D)
        rhs_2 += np.trace(t.C @ t.D) * bracket(t.A, t.B)
    residual_1 = partial_trace_1(defect, dims) - rhs_1
    residual_2 = partial_trace_2(defect, dims) - rhs_2
    return _report(phi, dims, residual_1, residual_2, tol)


def lemma_commutator_check(terms: Sequence[KroneckerTerm], dims, tol: float = DEFAULT_TOL) -> PreserverReport:
    """Condition: ``tr_1(phi(I) - I) = sum tr(A_j B_j) [C_j, D_j]`` and
    ``tr_2(phi(I) - I) = sum tr(C_j D_j) [A_j, B_j]``."""
    return _lemma_check(terms, dims, tol, core.commutator)


def lemma_anticommutator_check(terms: Sequence[KroneckerTerm], dims, tol: float = DEFAULT_TOL) -> PreserverReport:
    """As :func:`lemma_commutator_check` with anticommutators in place of commutators."""
    return _lemma_check(terms, dims, tol, core.anticommutator)


def _identity_traces(phi, dims):
    m, n = dims
    image = superop_apply(phi, np.eye(dims.size))
    return partial_trace_1(image, dims), partial_trace_2(image, dims)


def theorem_phiprime_check(phi: SuperOperator, dims, tol: float = DEFAULT_TOL) -> PreserverReport:
    """Condition: ``tr_1 phi'(I) = m I_n`` and ``tr_2 phi'(I) = n I_m``."""
    dims = _check_map(phi, dims)
    m, n = dims
    t1, t2 = _identity_traces(prime_transform(phi), dims)
    return _report(phi, dims, t1 - m * np.eye(n), t2 - n * np.eye(m), tol)


def corollary_rt_check(phi: SuperOperator, dims, tol: float = DEFAULT_TOL, skew: bool = False) -> PreserverReport:
    """For RT-symmetric ``phi``: condition ``tr_k phi(I) = tr_k I``.
    For skew RT-symmetric ``phi`` (``skew=True``): ``tr_k phi(I) = -tr_k I``.

    Raises :class:`SymmetryClassError` if ``phi`` is not in the stated class.
    """
    dims = _check_map(phi, dims)
    if skew and not is_rt_skew(phi, tol):
        raise SymmetryClassError("map is not skew RT-symmetric")
    if not skew and not is_rt_symmetric(phi, tol):
        raise SymmetryClassError("map is not RT-symmetric")
    m, n = dims
    sign = -1.0 if skew else 1.0
    t1, t2 = _identity_traces(phi, dims)
    return _report(phi, dims, t1 - sign * m * np.eye(n), t2 - sign * n * np.eye(m), tol)


def operator_sum_factorization(p, r: int, seed=None) -> list:
    """Random ``[(P_i, Q_i)]`` with ``sum_i Q_i P_i = P``.

    The map ``M -> sum_i P_i M Q_i`` then has the same trace behaviour as
    ``M -> P M``. Built as ``Q_i = T_i G_i``, ``P_i = G_i^{-1} S_i`` for random
    invertible ``G_i`` and ``sum T_i S_i = P``.
    """
    p = check_square(p, "P")
    if r < 1:
        raise ValueError("r must be at least 1")
    d = p.shape[0]
    rng = check_random_state(seed)
    ts = [core.sample_matrix(d, rng) for _ in range(r - 1)]
    ss = [core.sample_matrix(d, rng) for _ in range(r - 1)]
    ts.append(np.eye(d, dtype=complex))
    ss.append(p - sum((t @ s for t, s in zip(ts, ss)), np.zeros_like(p)))
    out = []
    for t, s in zip(ts, ss):
        g = core.sample_matrix(d, rng) + 2.0 * np.eye(d)
        out.append((np.linalg.solve(g, s), t @ g))
    return out


_PROJECTORS = {
    None: lambda phi: phi,
    "symmetric": lambda phi: 0.5 * (phi + prime_transform(phi)),
    "skew": lambda phi: 0.5 * (phi - prime_transform(phi)),
    "hermitian": lambda phi: 0.5 * (phi + conjugate(prime_transform(phi))),
    "skew_hermitian": lambda phi: 0.5 * (phi - conjugate(prime_transform(phi))),
}


def _functional(phi, dims) -> np.ndarray:
    t1, t2 = _identity_traces(prime_transform(phi), dims)
    v = np.concatenate([t1.ravel(), t2.ravel()])
    return np.concatenate([v.real, v.imag])


def _random_map(d, rng) -> SuperOperator:
    return SuperOperator(d, core.sample_matrix(d * d, rng))


def random_preserver(dims, seed=None, symmetry: Optional[str] = None, tol: float = 1e-10) -> SuperOperator:
    """A random trace preserver, optionally inside an RT class.

    ``symmetry`` is None, ``symmetric``, ``skew``, ``hermitian`` or
    ``skew_hermitian``. A random member of the class is corrected by a real
    least-squares combination of further random members so that
    ``tr_k phi'(I) = tr_k I``. Raises :class:`NoPreserverError` when the class
    cannot reach that target; this is always the case for the two skew
    classes, whose members have ``tr phi(I)`` equal to 0 (or purely imaginary)
    whereas a preserver needs ``mn``.
    """
    if symmetry not in _PROJECTORS:
        raise ValueError(f"unknown symmetry class {symmetry!r}")
    dims = check_dims(dims)
    m, n = dims
    d = dims.size
    rng = check_random_state(seed)
    project = _PROJECTORS[symmetry]
    base = project(_random_map(d, rng))
    target = np.concatenate([(m * np.eye(n)).ravel(), (n * np.eye(m)).ravel()])
    target = np.concatenate([target.real, target.imag])
    count = 2 * (m * m + n * n) + 4
    basis = [project(_random_map(d, rng)) for _ in range(count)]
    jac = np.stack([_functional(b, dims) for b in basis], axis=1)
    rhs = target - _functional(base, dims)
    coef, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
    if np.max(np.abs(jac @ coef - rhs)) > tol * max(1.0, np.max(np.abs(rhs))):
        raise NoPreserverError(f"no trace preserver in class {symmetry!r} for dims {dims}")
    matrix = base.phi_matrix + sum(c * b.phi_matrix for c, b in zip(coef, basis))
    return SuperOperator(d, matrix)

"""Linear maps on ``M_d`` and their RT-symmetry structure.

A :class:`SuperOperator` is held canonically as the ``d^2 x d^2`` matrix
``Phi`` acting on row-stacked vectors, ``vec(phi(X)) = Phi @ vec(X)``. A map
built from an operator-sum ``phi(M) = sum_i L_i M R_i`` also keeps the term
list, which is then a witness for ``Phi = sum_i L_i (x) R_i^T``.

The prime transform swaps the left and right factors of every term,
``phi'(M) = sum_i R_i M L_i``; on matrices it is ``Phi' = P Phi^T P^T`` with
``P = perfect_shuffle(d, d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ._validation import ShapeError, check_matrix, check_square, max_abs
from .kron import perfect_shuffle, rearrange, unvec

__all__ = [
    "SuperOperator",
    "DEFAULT_TOL",
    "superop_from_terms",
    "superop_from_matrix",
    "superop_from_function",
    "identity_superop",
    "zero_superop",
    "left_mult",
    "right_mult",
    "superop_apply",
    "apply_terms",
    "prime_transform",
    "conjugate",
    "rt_symmetric_part",
    "rt_skew_part",
    "rt_hermitian_part",
    "rt_skew_hermitian_part",
    "rt_defect",
    "is_rt_symmetric",
    "is_rt_skew",
    "is_rt_hermitian",
    "is_rt_skew_hermitian",
    "rearrangement_characterization",
]

DEFAULT_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """A linear map ``M_d -> M_d``.

    Attributes
    ----------
    d : int
        Size of the matrices the map acts on.
    phi_matrix : ndarray
        ``d^2 x d^2`` representation on row-stacked vectors.
    terms : tuple of (L, R) pairs or None
        Optional operator-sum witness, ``phi(M) = sum L M R``.
    """

    d: int
    phi_matrix: np.ndarray
    terms: Optional[tuple] = None

    def __post_init__(self):
        phi = check_square(self.phi_matrix, "phi_matrix")
        if phi.shape[0] != self.d * self.d:
            raise ShapeError(f"phi_matrix must be {self.d ** 2}x{self.d ** 2}, got {phi.shape}")
        object.__setattr__(self, "phi_matrix", _frozen(phi))
        if self.terms is not None:
            object.__setattr__(
                self, "terms", tuple((_frozen(l), _frozen(r)) for l, r in self.terms)
            )

    def __call__(self, x) -> np.ndarray:
        return superop_apply(self, x)

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        if not isinstance(other, SuperOperator):
            return NotImplemented
        if other.d != self.d:
            raise ShapeError(f"cannot add maps on M_{self.d} and M_{other.d}")
        terms = None
        if self.terms is not None and other.terms is not None:
            terms = self.terms + other.terms
        return SuperOperator(self.d, self.phi_matrix + other.phi_matrix, terms)

    def __neg__(self) -> "SuperOperator":
        return (-1.0) * self

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        if not isinstance(other, SuperOperator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "SuperOperator":
        if not np.isscalar(scalar):
            return NotImplemented
        terms = None
        if self.terms is not None:
            terms = tuple((scalar * l, r) for l, r in self.terms)
        return SuperOperator(self.d, scalar * self.phi_matrix, terms)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        nterms = "none" if self.terms is None else len(self.terms)
        return f"SuperOperator(d={self.d}, terms={nterms})"


def superop_from_terms(terms: Sequence, d: Optional[int] = None) -> SuperOperator:
    """Build ``phi(M) = sum_i L_i M R_i`` from ``[(L_1, R_1), ...]``."""
    terms = [(check_square(l, "L"), check_square(r, "R")) for l, r in terms]
    if d is None:
        if not terms:
            raise ValueError("d is required for an empty term list")
        d = terms[0][0].shape[0]
    for l, r in terms:
        if l.shape != (d, d) or r.shape != (d, d):
            raise ShapeError(f"terms must be {d}x{d}, got {l.shape} and {r.shape}")
    phi = np.zeros((d * d, d * d), dtype=complex)
    for l, r in terms:
        phi += np.kron(l, r.T)
    return SuperOperator(d, phi, tuple(terms))


def superop_from_matrix(phi_matrix) -> SuperOperator:
    phi = check_square(phi_matrix, "phi_matrix")
    d = int(round(np.sqrt(phi.shape[0])))
    if d * d != phi.shape[0]:
        raise ShapeError(f"phi_matrix must be d^2 x d^2, got {phi.shape}")
    return SuperOperator(d, phi)


def superop_from_function(func: Callable[[np.ndarray], np.ndarray], d: int) -> SuperOperator:
    """Tabulate a linear function on the matrix units ``E_pq``."""
    phi = np.zeros((d * d, d * d), dtype=complex)
    for p in range(d):
        for q in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[p, q] = 1.0
            phi[:, p * d + q] = np.asarray(func(e), dtype=complex).reshape(-1)
    return SuperOperator(d, phi)


def identity_superop(d: int) -> SuperOperator:
    return superop_from_terms([(np.eye(d), np.eye(d))], d)


def zero_superop(d: int) -> SuperOperator:
    return superop_from_terms([], d)


def left_mult(p) -> SuperOperator:
    """The map ``M -> P M``."""
    p = check_square(p, "P")
    return superop_from_terms([(p, np.eye(p.shape[0]))])


def right_mult(q) -> SuperOperator:
    """The map ``M -> M Q``."""
    q = check_square(q, "Q")
    return superop_from_terms([(np.eye(q.shape[0]), q)])


def superop_apply(phi: SuperOperator, x) -> np.ndarray:
    """``phi(x)``, evaluated through ``Phi``."""
    x = check_matrix(x, "x")
    if x.shape != (phi.d, phi.d):
        raise ShapeError(f"map acts on {phi.d}x{phi.d} matrices, got {x.shape}")
    return unvec(phi.phi_matrix @ x.reshape(-1), (phi.d, phi.d))


def apply_terms(phi: SuperOperator, x) -> np.ndarray:
    """``phi(x)`` evaluated from the operator-sum witness instead of ``Phi``."""
    if phi.terms is None:
        raise ValueError("map carries no term list")
    x = check_matrix(x, "x")
    if x.shape != (phi.d, phi.d):
        raise ShapeError(f"map acts on {phi.d}x{phi.d} matrices, got {x.shape}")
    out = np.zeros((phi.d, phi.d), dtype=complex)
    for l, r in phi.terms:
        out += l @ x @ r
    return out


def _shuffle(d: int) -> np.ndarray:
    return perfect_shuffle(d, d)


def prime_transform(phi: SuperOperator) -> SuperOperator:
    """The map ``phi'`` obtained by swapping left and right coefficients."""
    p = _shuffle(phi.d)
    # P is a real permutation, so this only moves entries around
    matrix = p @ phi.phi_matrix.T @ p.T
    terms = None
    if phi.terms is not None:
        terms = tuple((r, l) for l, r in phi.terms)
    return SuperOperator(phi.d, matrix, terms)


def conjugate(phi: SuperOperator) -> SuperOperator:
    """Entrywise conjugate of ``Phi``, i.e. ``M -> conj(phi(conj(M)))``."""
    terms = None
    if phi.terms is not None:
        terms = tuple((l.conj(), r.conj()) for l, r in phi.terms)
    return SuperOperator(phi.d, phi.phi_matrix.conj(), terms)


def rt_symmetric_part(phi: SuperOperator) -> SuperOperator:
    return 0.5 * (phi + prime_transform(phi))


def rt_skew_part(phi: SuperOperator) -> SuperOperator:
    return 0.5 * (phi - prime_transform(phi))


def rt_hermitian_part(phi: SuperOperator) -> SuperOperator:
    return 0.5 * (phi + conjugate(prime_transform(phi)))


def rt_skew_hermitian_part(phi: SuperOperator) -> SuperOperator:
    return 0.5 * (phi - conjugate(prime_transform(phi)))


def rt_defect(phi: SuperOperator, kind: str = "symmetric", method: str = "entrywise") -> float:
    """Max-norm distance of ``phi`` from an RT class.

    ``kind``: ``symmetric`` (phi = phi'), ``skew`` (phi = -phi'),
    ``hermitian`` (phi = conj(phi')) or ``skew_hermitian``.

    ``method`` selects how ``phi'`` enters. ``entrywise`` compares ``Phi`` with
    ``Phi'``; ``shuffle`` compares ``Phi^T`` with ``P^T Phi P`` (symmetric and
    skew only); ``rearrangement`` compares ``R(Phi)^T`` with ``R(Phi^T)``
    (symmetric only).
    """
    sign = {"symmetric": 1, "skew": -1, "hermitian": 1, "skew_hermitian": -1}.get(kind)
    if sign is None:
        raise ValueError(f"unknown RT class {kind!r}")
    conj = kind in ("hermitian", "skew_hermitian")
    phi_m = phi.phi_matrix
    if method == "entrywise":
        other = prime_transform(phi).phi_matrix
        if conj:
            other = other.conj()
        return max_abs(phi_m - sign * other)
    if conj:
        raise ValueError(f"method {method!r} only tests the symmetric and skew classes")
    if method == "shuffle":
        p = _shuffle(phi.d)
        return max_abs(phi_m.T - sign * (p.T @ phi_m @ p))
    if method == "rearrangement":
        if sign != 1:
            raise ValueError("the rearrangement test characterizes RT-symmetry only")
        return max_abs(rearrange(phi_m, phi.d).T - rearrange(phi_m.T, phi.d))
    raise ValueError(f"unknown method {method!r}")


def is_rt_symmetric(phi: SuperOperator, tol: float = DEFAULT_TOL, method: str = "entrywise") -> bool:
    return rt_defect(phi, "symmetric", method) <= tol


def is_rt_skew(phi: SuperOperator, tol: float = DEFAULT_TOL, method: str = "entrywise") -> bool:
    return rt_defect(phi, "skew", method) <= tol


def is_rt_hermitian(phi: SuperOperator, tol: float = DEFAULT_TOL) -> bool:
    return rt_defect(phi, "hermitian") <= tol


def is_rt_skew_hermitian(phi: SuperOperator, tol: float = DEFAULT_TOL) -> bool:
    return rt_defect(phi, "skew_hermitian") <= tol


def rearrangement_characterization(phi: SuperOperator, tol: float = DEFAULT_TOL) -> bool:
    """RT-symmetry tested as ``R(Phi)^T == R(Phi^T)``."""
    return is_rt_symmetric(phi, tol, method="rearrangement")

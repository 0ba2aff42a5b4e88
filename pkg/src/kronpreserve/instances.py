"""Random instance generators shared by the property suite and the tests.

Each generator takes a ``numpy.random.Generator`` and returns the instance
together with the verdict it was built to have (``True`` for a preserver),
or ``None`` when the construction leaves the verdict to chance.
"""

from __future__ import annotations

import numpy as np

from . import core
from ._validation import check_dims
from .preserver import (
    KroneckerTerm,
    random_preserver,
    synth_left_mult_preserver,
)
from .superop import SuperOperator, left_mult

LEFT_MULT_KINDS = ("preserver", "perturbed", "tr1_only", "tr2_only", "random")


def left_mult_instance(dims, rng, kind: str):
    """A matrix ``P`` for ``M -> PM`` of the given kind.

    ``preserver``: ``I + sum A_j (x) B_j`` with traceless factors, r in 0..3.
    ``perturbed``: a preserver plus a random matrix (fails generically).
    ``tr1_only`` / ``tr2_only``: a preserver plus ``A (x) B`` that spoils only
    the second / first partial-trace condition.
    ``random``: a uniform random matrix.
    """
    m, n = dims = check_dims(dims)
    if kind == "random":
        return core.sample_matrix(dims.size, rng), False
    p = synth_left_mult_preserver(dims, int(rng.integers(0, 4)), rng)
    if kind == "preserver":
        return p, True
    if kind == "perturbed":
        return p + 0.5 * core.sample_matrix(dims.size, rng), False
    if kind == "tr1_only":
        # tr_1(A (x) B) = tr(A) B = 0 while tr_2(A (x) B) = tr(B) A != 0
        a = core.sample_matrix(m, rng, "traceless")
        b = core.sample_matrix(n, rng, "traceless") + np.eye(n)
        return p + np.kron(a, b), False
    if kind == "tr2_only":
        a = core.sample_matrix(m, rng, "traceless") + np.eye(m)
        b = core.sample_matrix(n, rng, "traceless")
        return p + np.kron(a, b), False
    raise ValueError(f"unknown kind {kind!r}")


def _kill_trace(x, y):
    """Shift ``y`` along ``x*`` so that ``tr(x y) = 0``."""
    return y - (np.trace(x @ y) / np.vdot(x, x)) * x.conj().T


def _annihilating_pair(k, rng):
    """Random ``(x, y)`` in ``M_k`` with ``y x = 0`` but ``x y`` generically nonzero."""
    w = rng.normal(size=k) + 1j * rng.normal(size=k)
    # rows of the projector are orthogonal to w, so w^T x = 0
    proj = np.eye(k) - np.outer(w.conj(), w) / np.vdot(w, w)
    x = proj @ core.sample_matrix(k, rng)
    y = np.outer(rng.normal(size=k) + 1j * rng.normal(size=k), w)
    return x, y


TERM_KINDS = ("preserver", "annihilating", "half", "random")


def kronecker_terms(dims, rng, kind: str, r: int = None):
    """Terms of ``phi(M) = M + sum (A_j (x) C_j) M (B_j (x) D_j)``.

    ``preserver`` forces ``tr(A_j B_j) = tr(C_j D_j) = 0`` for every j, which
    makes ``phi`` a trace preserver. ``annihilating`` is also a preserver but
    with ``D_j C_j = 0`` (or ``B_j A_j = 0``) in place of the trace condition on
    that side, so the commutator terms do not vanish. ``half`` forces only
    ``tr(C_j D_j) = 0`` and ``random`` forces nothing.
    """
    m, n = check_dims(dims)
    if r is None:
        r = int(rng.integers(1, 4))
    terms = []
    for _ in range(r):
        a, b = core.sample_matrix(m, rng), core.sample_matrix(m, rng)
        c, d = core.sample_matrix(n, rng), core.sample_matrix(n, rng)
        if kind == "annihilating":
            if rng.uniform() < 0.5:
                c, d = _annihilating_pair(n, rng)
            else:
                a, b = _annihilating_pair(m, rng)
            terms.append(KroneckerTerm(a, b, c, d))
            continue
        if kind in ("preserver", "half"):
            d = _kill_trace(c, d)
        if kind == "preserver":
            b = _kill_trace(a, b)
        elif kind not in ("half", "random"):
            raise ValueError(f"unknown kind {kind!r}")
        terms.append(KroneckerTerm(a, b, c, d))
    return terms, (True if kind in ("preserver", "annihilating") else None)


SUPEROP_KINDS = ("preserver", "perturbed", "random", "left_mult")


def superop_instance(dims, rng, kind: str, symmetry=None):
    """A map on ``M_mn``; ``symmetry`` restricts ``preserver`` and ``perturbed``
    to an RT class (see :func:`random_preserver`)."""
    dims = check_dims(dims)
    d = dims.size
    if kind == "random":
        return SuperOperator(d, core.sample_matrix(d * d, rng)), False
    if kind == "left_mult":
        p, expected = left_mult_instance(dims, rng, "preserver")
        return left_mult(p), expected
    phi = random_preserver(dims, rng, symmetry)
    if kind == "preserver":
        return phi, True
    if kind == "perturbed":
        # adding c * identity shifts tr phi(I_m (x) E_kk) by c * m, so it always fails
        c = 0.2 + 0.8 * rng.uniform()
        shift = SuperOperator(d, c * np.eye(d * d))
        return phi + shift, False
    raise ValueError(f"unknown kind {kind!r}")

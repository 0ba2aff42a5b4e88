"""Seeded property suite over the whole library.

Each property is a function ``(rng, dims, tol) -> (ok, defect)`` for a single
trial. Trial ``t`` of property ``name`` is seeded from
``sha256(master_seed, name, t)``, so results do not depend on execution order
and can be computed in parallel and merged by (name, trial).
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Sequence

import numpy as np

from . import core, detkron, kron, preserver, superop
from ._validation import BlockDims, check_dims, max_abs
from .instances import (
    LEFT_MULT_KINDS,
    SUPEROP_KINDS,
    TERM_KINDS,
    kronecker_terms,
    left_mult_instance,
    superop_instance,
)
from .preserver import NoPreserverError

DEFAULT_TRIALS = 200
DEFAULT_DIMS = ("2x2", "2x3", "3x3")

Property = Callable[[np.random.Generator, BlockDims, float], tuple]
PROPERTIES: Dict[str, Property] = {}


def prop(name: str):
    def register(func):
        PROPERTIES[name] = func
        return func
    return register


def _rel(a, b) -> float:
    scale = max(max_abs(a), max_abs(b), 1e-300)
    return max_abs(np.asarray(a) - np.asarray(b)) / scale


def _small(rng, k, scale=0.5):
    return scale * core.sample_matrix(k, rng)


# -- core ------------------------------------------------------------------

@prop("core.trace_cyclic")
def _trace_cyclic(rng, dims, tol):
    k = dims.size
    x = core.sample_matrix((k, k + 1), rng)
    y = core.sample_matrix((k + 1, k), rng)
    lhs, rhs = core.trace(core.mat_mul(x, y)), core.trace(core.mat_mul(y, x))
    defect = abs(lhs - rhs) / max(abs(lhs), 1.0)
    return defect <= 1e-10, defect


@prop("core.commutator_traceless")
def _commutator_traceless(rng, dims, tol):
    x, y = core.sample_matrix(dims.size, rng), core.sample_matrix(dims.size, rng)
    defect = abs(core.trace(core.commutator(x, y)))
    return defect <= 1e-10, defect


@prop("core.det_multiplicative")
def _det_multiplicative(rng, dims, tol):
    x, y = core.sample_matrix(dims.size, rng), core.sample_matrix(dims.size, rng)
    lhs = core.determinant(x @ y)
    rhs = core.determinant(x) * core.determinant(y)
    defect = abs(lhs - rhs) / abs(rhs)
    return defect <= 1e-9, defect


@prop("core.exp_log_roundtrip")
def _exp_log_roundtrip(rng, dims, tol):
    m = core.sample_matrix(dims.size, rng)
    m *= 0.9 / max(np.max(np.abs(np.linalg.eigvals(m))), 1e-12)
    x = core.mat_exp(m)
    log = core.principal_log(x)
    defect = max(_rel(core.mat_exp(log), x), _rel(log, m))
    return defect <= 1e-8, defect


# -- kron ------------------------------------------------------------------

@prop("kron.partial_traces_preserve_trace")
def _ptrace_trace(rng, dims, tol):
    x = core.sample_matrix(dims.size, rng)
    t = np.trace(x)
    defect = max(abs(np.trace(kron.partial_trace_1(x, dims)) - t),
                 abs(np.trace(kron.partial_trace_2(x, dims)) - t))
    return defect <= 1e-10, defect


@prop("kron.partial_traces_linear")
def _ptrace_linear(rng, dims, tol):
    x, y = core.sample_matrix(dims.size, rng), core.sample_matrix(dims.size, rng)
    a, b = complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-1, 1, 2))
    defect = 0.0
    for pt in (kron.partial_trace_1, kron.partial_trace_2):
        defect = max(defect, max_abs(pt(a * x + b * y, dims) - a * pt(x, dims) - b * pt(y, dims)))
    return defect <= 1e-10, defect


@prop("kron.mixed_product")
def _mixed_product(rng, dims, tol):
    m, n = dims
    a, c = core.sample_matrix(m, rng), core.sample_matrix(m, rng)
    b, d = core.sample_matrix(n, rng), core.sample_matrix(n, rng)
    lhs = kron.kron_product(a, b) @ kron.kron_product(c, d)
    defect = max_abs(lhs - kron.kron_product(a @ c, b @ d))
    return defect <= 1e-10, defect


@prop("kron.det_of_product")
def _det_kron(rng, dims, tol):
    m, n = dims
    a, b = core.sample_matrix(m, rng), core.sample_matrix(n, rng)
    lhs = core.determinant(kron.kron_product(a, b))
    rhs = core.determinant(a) ** n * core.determinant(b) ** m
    defect = abs(lhs - rhs) / abs(rhs)
    return defect <= 1e-8, defect


@prop("kron.exp_of_sum")
def _exp_kron_sum(rng, dims, tol):
    m, n = dims
    a, b = _small(rng, m), _small(rng, n)
    defect = _rel(core.mat_exp(kron.kron_sum(a, b)),
                  kron.kron_product(core.mat_exp(a), core.mat_exp(b)))
    return defect <= 1e-8, defect


@prop("kron.det_exp_of_sum")
def _det_exp_kron_sum(rng, dims, tol):
    m, n = dims
    a, b = _small(rng, m), _small(rng, n)
    s = kron.kron_sum(a, b)
    lhs = core.determinant(core.mat_exp(s))
    rhs = np.exp(core.trace(s))
    defect = abs(lhs - rhs) / abs(rhs)
    return defect <= 1e-8, defect


@prop("kron.shuffle_swaps_factors")
def _shuffle_factors(rng, dims, tol):
    m, n = dims
    a, b = core.sample_matrix(m, rng), core.sample_matrix(n, rng)
    p = kron.perfect_shuffle(m, n)
    defect = max_abs(p.T @ np.kron(a, b) @ p - np.kron(b, a))
    return defect <= 1e-12, defect


@prop("kron.shuffle_swaps_partial_traces")
def _shuffle_ptrace(rng, dims, tol):
    x = core.sample_matrix(dims.size, rng)
    p = kron.perfect_shuffle(*dims)
    y = p.T @ x @ p
    defect = max(max_abs(kron.partial_trace_1(x, dims) - kron.partial_trace_2(y, dims.swapped())),
                 max_abs(kron.partial_trace_2(x, dims) - kron.partial_trace_1(y, dims.swapped())))
    return defect <= 1e-12, defect


# -- superop ---------------------------------------------------------------

def _random_map(rng, dims):
    return superop.SuperOperator(dims.size, core.sample_matrix(dims.size ** 2, rng))


@prop("superop.prime_involution")
def _prime_involution(rng, dims, tol):
    phi = _random_map(rng, dims)
    twice = superop.prime_transform(superop.prime_transform(phi))
    defect = max_abs(twice.phi_matrix - phi.phi_matrix)
    return defect == 0.0, defect


@prop("superop.prime_conjugation")
def _prime_conjugation(rng, dims, tol):
    phi = _random_map(rng, dims)
    p = kron.perfect_shuffle(phi.d, phi.d)
    prime = superop.prime_transform(phi).phi_matrix
    defect = max_abs(phi.phi_matrix.T - p.T @ prime @ p)
    return defect <= 1e-12, defect


@prop("superop.rt_tests_agree")
def _rt_tests_agree(rng, dims, tol):
    phi = _random_map(rng, dims)
    cases = [phi, superop.rt_symmetric_part(phi), superop.rt_skew_part(phi)]
    ok = True
    for c in cases:
        verdicts = {superop.is_rt_symmetric(c, tol, meth)
                    for meth in ("entrywise", "shuffle", "rearrangement")}
        ok &= len(verdicts) == 1
    ok &= superop.is_rt_symmetric(cases[1], tol) and not superop.is_rt_symmetric(cases[0], tol)
    return bool(ok), 0.0 if ok else 1.0


@prop("superop.decomposition")
def _decomposition(rng, dims, tol):
    phi = _random_map(rng, dims)
    sym, skew = superop.rt_symmetric_part(phi), superop.rt_skew_part(phi)
    recon = max_abs(sym.phi_matrix + skew.phi_matrix - phi.phi_matrix)
    inner = abs(np.vdot(sym.phi_matrix, skew.phi_matrix))
    classes = superop.is_rt_symmetric(sym, tol) and superop.is_rt_skew(skew, tol)
    return recon <= 1e-12 and inner <= 1e-10 and classes, max(recon, inner)


@prop("superop.terms_match_matrix")
def _terms_match(rng, dims, tol):
    k = dims.size
    terms = [(core.sample_matrix(k, rng), core.sample_matrix(k, rng)) for _ in range(3)]
    phi = superop.superop_from_terms(terms, k)
    x = core.sample_matrix(k, rng)
    defect = max_abs(superop.superop_apply(phi, x) - superop.apply_terms(phi, x))
    return defect <= 1e-10, defect


@prop("superop.prime_of_left_mult")
def _prime_left(rng, dims, tol):
    p = core.sample_matrix(dims.size, rng)
    defect = max_abs(superop.prime_transform(superop.left_mult(p)).phi_matrix
                     - superop.right_mult(p).phi_matrix)
    return defect <= 1e-12, defect


# -- preserver -------------------------------------------------------------

def _agreement(report: preserver.PreserverReport, expected=None):
    ok = report.agree and (expected is None or report.holds_oracle == expected)
    return ok, report.max_defect if ok else float("inf")


def _defect_of(ok, report):
    # a passing check carries its residual; a failing one only its verdict
    return ok, (report.max_defect if ok and report.holds_condition else 0.0)


@prop("preserver.left_mult_theorem")
def _left_mult_theorem(rng, dims, tol):
    kind = LEFT_MULT_KINDS[int(rng.integers(len(LEFT_MULT_KINDS)))]
    p, expected = left_mult_instance(dims, rng, kind)
    report = preserver.check_left_mult(p, dims, tol)
    return _defect_of(report.agree and report.holds_oracle == expected, report)


@prop("preserver.traceless_corollary")
def _traceless_corollary(rng, dims, tol):
    m, n = dims
    r = int(rng.integers(1, 4))
    factors = preserver.sample_traceless_factors(dims, r, rng)
    good = preserver.corollary_traceless_iff(factors, dims, tol)
    j = int(rng.integers(r))
    a, b = factors[j]
    if rng.uniform() < 0.5:
        a = a + np.eye(m)
    else:
        b = b + np.eye(n)
    bad_factors = factors[:j] + [(a, b)] + factors[j + 1:]
    bad = preserver.corollary_traceless_iff(bad_factors, dims, tol)
    ok = tuple(good) == (True, True, True) and tuple(bad) == (False, False, True)
    return ok, 0.0


@prop("preserver.commutator_lemma")
def _commutator_lemma(rng, dims, tol):
    kind = TERM_KINDS[int(rng.integers(len(TERM_KINDS)))]
    terms, expected = kronecker_terms(dims, rng, kind)
    report = preserver.lemma_commutator_check(terms, dims, tol)
    return _defect_of(report.agree and expected in (None, report.holds_oracle), report)


@prop("preserver.anticommutator_lemma")
def _anticommutator_lemma(rng, dims, tol):
    kind = TERM_KINDS[int(rng.integers(len(TERM_KINDS)))]
    terms, expected = kronecker_terms(dims, rng, kind)
    report = preserver.lemma_anticommutator_check(terms, dims, tol)
    return _defect_of(report.agree and expected in (None, report.holds_oracle), report)


@prop("preserver.lemmas_agree")
def _lemmas_agree(rng, dims, tol):
    kind = TERM_KINDS[int(rng.integers(len(TERM_KINDS)))]
    terms, _ = kronecker_terms(dims, rng, kind)
    a = preserver.lemma_commutator_check(terms, dims, tol)
    b = preserver.lemma_anticommutator_check(terms, dims, tol)
    return a.holds_condition == b.holds_condition, 0.0


@prop("preserver.phiprime_theorem")
def _phiprime_theorem(rng, dims, tol):
    kind = SUPEROP_KINDS[int(rng.integers(len(SUPEROP_KINDS)))]
    phi, expected = superop_instance(dims, rng, kind)
    report = preserver.theorem_phiprime_check(phi, dims, tol)
    return _defect_of(report.agree and report.holds_oracle == expected, report)


@prop("preserver.left_mult_consistency")
def _left_mult_consistency(rng, dims, tol):
    kind = LEFT_MULT_KINDS[int(rng.integers(len(LEFT_MULT_KINDS)))]
    p, _ = left_mult_instance(dims, rng, kind)
    a = preserver.check_left_mult(p, dims, tol)
    b = preserver.theorem_phiprime_check(superop.left_mult(p), dims, tol)
    return a.holds_condition == b.holds_condition, 0.0


@prop("preserver.operator_sum_reduction")
def _operator_sum(rng, dims, tol):
    kind = LEFT_MULT_KINDS[int(rng.integers(len(LEFT_MULT_KINDS)))]
    p, _ = left_mult_instance(dims, rng, kind)
    pairs = preserver.operator_sum_factorization(p, int(rng.integers(1, 4)), rng)
    phi = superop.superop_from_terms(pairs, dims.size)
    verdict = preserver.oracle_preserves_trace(phi, dims, tol)
    return verdict == preserver.check_left_mult(p, dims, tol).holds_condition, 0.0


@prop("preserver.rt_corollary")
def _rt_corollary(rng, dims, tol):
    kind = ("preserver", "perturbed", "random")[int(rng.integers(3))]
    if kind == "random":
        phi, expected = superop.rt_symmetric_part(_random_map(rng, dims)), False
    else:
        phi, expected = superop_instance(dims, rng, kind, "symmetric")
    report = preserver.corollary_rt_check(phi, dims, tol)
    return _defect_of(report.agree and report.holds_oracle == expected, report)


@prop("preserver.skew_rt_corollary")
def _skew_rt_corollary(rng, dims, tol):
    # no skew RT-symmetric map preserves the trace, so every instance is a non-preserver
    phi = superop.rt_skew_part(_random_map(rng, dims))
    report = preserver.corollary_rt_check(phi, dims, tol, skew=True)
    return report.agree and not report.holds_oracle, 0.0


# -- detkron ---------------------------------------------------------------

@prop("detkron.norm_det_identity")
def _norm_det_identity(rng, dims, tol):
    m, n = dims
    a, b = _small(rng, m), _small(rng, n)
    got = detkron.norm_det(np.kron(core.mat_exp(a), core.mat_exp(b)))
    want = detkron.RootCoset(np.exp(detkron.norm_trace(kron.kron_sum(a, b))), m * n)
    return got.equals(want), 0.0


@prop("detkron.partial_det_identities")
def _partial_det_identities(rng, dims, tol):
    m, n = dims
    a, b = _small(rng, m, 0.3), _small(rng, n, 0.3)
    x = np.kron(core.mat_exp(a), core.mat_exp(b))
    s = kron.kron_sum(a, b)
    ok = True
    for which, order in ((1, m), (2, n)):
        got = detkron.partial_det(x, dims, which)
        want = detkron.CosetMatrix(core.mat_exp(detkron.norm_partial_trace(s, dims, which)),
                                   detkron.RootCoset(1.0, order))
        ok &= got.equals(want)
    return bool(ok), 0.0


@prop("detkron.uv_unimodular")
def _uv_unimodular(rng, dims, tol):
    terms, _ = kronecker_terms(dims, rng, "random")
    u, v = detkron.corollary_uv(terms, dims)
    defect = max(abs(core.determinant(u) - 1), abs(core.determinant(v) - 1))
    return defect <= 1e-8, defect


@prop("detkron.corollary_det")
def _corollary_det(rng, dims, tol):
    kind = TERM_KINDS[int(rng.integers(len(TERM_KINDS)))]
    terms, _ = kronecker_terms(dims, rng, kind)
    cond, preserves = detkron.corollary_det_check(terms, dims)
    return cond == preserves, 0.0


@prop("detkron.det_iff_trace")
def _det_iff_trace(rng, dims, tol):
    kind = ("preserver", "random")[int(rng.integers(2))]
    phi, _ = superop_instance(dims, rng, kind)
    psi = detkron.PsiMap(phi, dims)
    verdict = detkron.det_preserver_iff_trace(psi, dims, tol)
    gap = detkron.sampled_det_probe(psi, trials=5, seed=rng)
    return verdict == (gap <= 1e-7), gap if verdict else 0.0


def _rt_instance(rng, dims, symmetry):
    if rng.uniform() < 0.5:
        try:
            return superop_instance(dims, rng, "preserver", symmetry)
        except NoPreserverError:
            pass
    project = {"symmetric": superop.rt_symmetric_part, "hermitian": superop.rt_hermitian_part,
               "skew": superop.rt_skew_part, "skew_hermitian": superop.rt_skew_hermitian_part}
    return project[symmetry](_random_map(rng, dims)), False


@prop("detkron.theorem_det_rt")
def _theorem_det_rt(rng, dims, tol):
    symmetry = ("symmetric", "hermitian")[int(rng.integers(2))]
    phi, expected = _rt_instance(rng, dims, symmetry)
    cond, preserves = detkron.theorem_det_rt(detkron.PsiMap(phi, dims), class_tol=tol)
    return cond == preserves == expected, 0.0


@prop("detkron.theorem_det_rt_skew")
def _theorem_det_rt_skew(rng, dims, tol):
    symmetry = ("skew", "skew_hermitian")[int(rng.integers(2))]
    phi, expected = _rt_instance(rng, dims, symmetry)
    cond, preserves = detkron.theorem_det_rt(detkron.PsiMap(phi, dims), skew=True, class_tol=tol)
    return cond == preserves == expected, 0.0


@prop("detkron.coset_invariance")
def _coset_invariance(rng, dims, tol):
    m, n = dims
    phi, _ = superop_instance(dims, rng, ("preserver", "perturbed")[int(rng.integers(2))],
                              "symmetric")
    psi = detkron.PsiMap(phi, dims)
    image = detkron.psi_apply(psi, detkron.omega_witness(np.eye(dims.size)))
    ok = True
    for which, order in ((1, m), (2, n)):
        base = detkron.partial_det(image, dims, which)
        k = int(rng.integers(order))
        # multiplying the value by w I, w = e^{2 pi i k/order}, adds log(w) I to the log
        shifted = detkron.omega_witness(image.log_part + (2j * np.pi * k / order) * np.eye(dims.size))
        ok &= base.equals(detkron.partial_det(shifted, dims, which))
    return bool(ok), 0.0


@prop("detkron.coset_equivalence")
def _coset_equivalence(rng, dims, tol):
    k = dims.size
    z = complex(*rng.uniform(-2, 2, 2))
    roots = np.exp(2j * np.pi * rng.integers(0, k, 2) / k)
    a = detkron.RootCoset(z, k)
    b = detkron.RootCoset(z * roots[0], k)
    c = detkron.RootCoset(z * roots[0] * roots[1], k)
    other = detkron.RootCoset(z * np.exp(1j * np.pi / k), k)
    ok = (a.equals(a) and a.equals(b) and b.equals(a) and b.equals(c) and a.equals(c)
          and not a.equals(other))
    return bool(ok), 0.0


# -- runner ----------------------------------------------------------------

@dataclass
class PropertyRecord:
    name: str
    trials: int
    failures: int
    max_defect: float
    seed: int


@dataclass
class SuiteReport:
    properties: List[PropertyRecord]
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {"properties": [asdict(p) for p in self.properties], "verdict": self.verdict}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        width = max((len(p.name) for p in self.properties), default=10)
        lines = []
        for p in self.properties:
            status = "ok  " if p.failures == 0 else "FAIL"
            lines.append(f"{status} {p.name:<{width}}  trials={p.trials:<4d} failures={p.failures:<4d}"
                         f" max_defect={p.max_defect:.3e}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def derive_seed(*parts) -> int:
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _run_property(name, func, dims, seed, trials, tol) -> PropertyRecord:
    prop_seed = derive_seed(seed, name)
    failures = 0
    worst = 0.0
    for t in range(trials):
        rng = np.random.default_rng(derive_seed(prop_seed, t))
        try:
            ok, defect = func(rng, dims, tol)
        except Exception:
            ok, defect = False, 0.0
        if not ok:
            failures += 1
        if np.isfinite(defect):
            worst = max(worst, float(defect))
    return PropertyRecord(name, trials, failures, worst, prop_seed)


def run_suite(seed: int = 0, trials: int = DEFAULT_TRIALS, dims_list: Sequence = DEFAULT_DIMS,
              tol: float = superop.DEFAULT_TOL, names: Sequence[str] = None,
              workers: int = 1) -> SuiteReport:
    """Run every registered property for every dims; deterministic in all arguments."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    dims_list = [check_dims(d) for d in dims_list]
    selected = [n for n in PROPERTIES if names is None or n in names]
    jobs = [(f"{name}[{dims}]", PROPERTIES[name], dims) for dims in dims_list for name in selected]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(lambda j: _run_property(*j, seed, trials, tol), jobs))
    else:
        records = [_run_property(*j, seed, trials, tol) for j in jobs]
    records.sort(key=lambda r: r.name)
    verdict = "pass" if all(r.failures == 0 for r in records) else "fail"
    return SuiteReport(records, verdict)

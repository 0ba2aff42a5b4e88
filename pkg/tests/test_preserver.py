import warnings

import numpy as np
import pytest

from kronpreserve import core, instances
from kronpreserve import preserver as pv
from kronpreserve import superop as so
from kronpreserve._validation import ShapeError, SymmetryClassError
from oracles import sampled_trace_preserver, unit

E = unit
I2 = np.eye(2)


def single_term():
    return [pv.KroneckerTerm(I2, I2, E(0, 1, 2), E(1, 0, 2))]


def test_oracle_examples():
    assert pv.oracle_preserves_trace(so.identity_superop(6), (2, 3))
    assert not pv.oracle_preserves_trace(2 * so.identity_superop(6), (2, 3))
    p = np.eye(4) + np.kron(E(0, 1, 2), E(1, 0, 2))
    assert pv.oracle_preserves_trace(so.left_mult(p), (2, 2))
    with pytest.raises(ShapeError):
        pv.oracle_preserves_trace(so.identity_superop(4), (2, 3))


def test_oracle_vs_sampled_oracle(rng):
    for kind in ("preserver", "perturbed", "random"):
        for _ in range(10):
            phi, expected = instances.superop_instance((2, 3), rng, kind)
            assert pv.oracle_preserves_trace(phi, (2, 3)) == expected
            assert sampled_trace_preserver(phi, 2, 3, rng) == expected


def test_verdict_depends_only_on_basis_traces(rng):
    # post-compose with a similarity: traces of the image do not change
    phi, _ = instances.superop_instance((2, 2), rng, "preserver")
    u = core.sample_matrix(4, rng) + 3 * np.eye(4)
    sim = so.superop_from_terms([(u, np.linalg.inv(u))])
    composed = so.SuperOperator(4, sim.phi_matrix @ phi.phi_matrix)
    assert abs(pv.trace_defect(composed, (2, 2)) - pv.trace_defect(phi, (2, 2))) <= 1e-9


def test_check_left_mult_examples():
    rep = pv.check_left_mult(np.eye(6), (2, 3))
    assert rep.holds_condition and rep.holds_oracle and rep.agree and rep.max_defect == 0
    p = np.eye(4) + np.kron(E(0, 1, 2), E(1, 0, 2))
    rep = pv.check_left_mult(p, (2, 2))
    assert rep.holds_condition and rep.holds_oracle
    rep = pv.check_left_mult(2 * np.eye(4), (2, 2))
    assert not rep.holds_condition and not rep.holds_oracle
    np.testing.assert_array_equal(rep.residual_1, 2 * I2)
    np.testing.assert_array_equal(rep.residual_2, 2 * I2)
    with pytest.raises(ShapeError):
        pv.check_left_mult(np.eye(5), (2, 2))


def test_report_serializes():
    d = pv.check_left_mult(2 * np.eye(4), (2, 2)).to_dict()
    assert d["agree"] and not d["holds_oracle"]
    assert d["residual_1"][0][0] == [2.0, 0.0]


@pytest.mark.parametrize("kind", instances.LEFT_MULT_KINDS)
def test_left_mult_theorem_by_kind(kind, rng):
    for dims in ((2, 2), (2, 3), (3, 3)):
        for _ in range(10):
            p, expected = instances.left_mult_instance(dims, rng, kind)
            rep = pv.check_left_mult(p, dims)
            assert rep.agree and rep.holds_oracle == expected
            assert pv.theorem_phiprime_check(so.left_mult(p), dims).holds_condition == expected


def test_additivity_of_partial_trace_conditions(rng):
    p = pv.synth_left_mult_preserver((2, 3), 2, rng)
    # blocks traceless and block traces summing to zero: both partial traces vanish
    t = np.kron(core.sample_matrix(2, rng, "traceless"), core.sample_matrix(3, rng, "traceless"))
    assert pv.check_left_mult(p + t, (2, 3)).holds_condition


def test_synth_examples():
    np.testing.assert_array_equal(pv.synth_left_mult_preserver((2, 3), 0, 1), np.eye(6))
    for a, b in pv.sample_traceless_factors((2, 2), 1, 4):
        assert abs(np.trace(a)) <= 1e-12 and abs(np.trace(b)) <= 1e-12
    assert pv.check_left_mult(pv.synth_left_mult_preserver((2, 2), 1, 4), (2, 2)).holds_oracle
    p = pv.synth_left_mult_preserver((2, 3), 2, 9)
    assert pv.oracle_preserves_trace(so.left_mult(p), (2, 3))
    np.testing.assert_array_equal(p, pv.synth_left_mult_preserver((2, 3), 2, 9))
    with pytest.raises(ValueError):
        pv.synth_left_mult_preserver((2, 2), -1)


def test_corollary_traceless_examples():
    b = E(0, 1, 2) + E(1, 0, 2)
    assert pv.corollary_traceless_iff([(np.diag([1.0, -1.0]), b)], (2, 2))[:2] == (True, True)
    assert pv.corollary_traceless_iff([(E(0, 0, 2), b)], (2, 2))[:2] == (False, False)
    assert pv.corollary_traceless_iff([], (2, 2)) == (True, True, True)


def test_corollary_traceless_random(rng):
    for _ in range(50):
        r = int(rng.integers(1, 4))
        terms = pv.sample_traceless_factors((2, 3), r, rng)
        assert pv.corollary_traceless_iff(terms, (2, 3)) == (True, True, True)
        j = int(rng.integers(r))
        a, b = terms[j]
        terms[j] = (a + np.eye(2), b) if rng.uniform() < 0.5 else (a, b + np.eye(3))
        assert pv.corollary_traceless_iff(terms, (2, 3)) == (False, False, True)


def test_corollary_traceless_dependent_factors_warns():
    a, b = np.diag([1.0, -1.0]), E(0, 1, 2)
    with pytest.warns(UserWarning, match="dependent"):
        verdict = pv.corollary_traceless_iff([(a, b), (a, E(1, 0, 2))], (2, 2))
    assert not verdict.independent
    # A_1 = -A_2 with B_1 = B_2: the sum cancels, so traceless-ness is not decisive
    with pytest.warns(UserWarning):
        verdict = pv.corollary_traceless_iff([(E(0, 0, 2), b), (-E(0, 0, 2), b)], (2, 2))
    assert verdict == (False, True, False)


def test_lemma_examples():
    for check in (pv.lemma_commutator_check, pv.lemma_anticommutator_check):
        rep = check([], (2, 2))
        assert rep.holds_condition and rep.holds_oracle and rep.max_defect == 0
    terms = single_term()
    phi = pv.terms_superop(terms, (2, 2))
    defect_1 = np.einsum("iaib->ab", (phi(np.eye(4)) - np.eye(4)).reshape(2, 2, 2, 2))
    np.testing.assert_array_equal(defect_1, 2 * E(0, 0, 2))
    rep = pv.lemma_commutator_check(terms, (2, 2))
    np.testing.assert_allclose(rep.residual_1, 2 * E(0, 0, 2) - 2 * (E(0, 0, 2) - E(1, 1, 2)))
    assert not rep.holds_condition and not rep.holds_oracle
    rep = pv.lemma_anticommutator_check(terms, (2, 2))
    np.testing.assert_allclose(rep.residual_1, 2 * E(0, 0, 2) - 2 * I2)
    assert not rep.holds_condition and not rep.holds_oracle


@pytest.mark.parametrize("kind", instances.TERM_KINDS)
def test_lemmas_agree_with_oracle(kind, rng):
    for dims in ((2, 2), (2, 3), (3, 3)):
        for _ in range(34):
            terms, expected = instances.kronecker_terms(dims, rng, kind)
            com = pv.lemma_commutator_check(terms, dims)
            anti = pv.lemma_anticommutator_check(terms, dims)
            assert com.agree and anti.agree
            assert com.holds_condition == anti.holds_condition
            if expected is not None:
                assert com.holds_oracle == expected


def test_terms_superop_shape_check():
    with pytest.raises(ShapeError):
        pv.terms_superop(single_term(), (2, 3))
    with pytest.raises(ShapeError):
        pv.KroneckerTerm(I2, np.eye(3), I2, I2)


def test_phiprime_examples(rng):
    assert pv.theorem_phiprime_check(so.identity_superop(6), (2, 3)).holds_condition
    p = pv.synth_left_mult_preserver((2, 3), 2, rng)
    rep = pv.theorem_phiprime_check(so.left_mult(p), (2, 3))
    assert rep.holds_condition and rep.holds_oracle
    phi = so.superop_from_terms([(np.eye(4), np.eye(4)),
                                 (np.kron(E(0, 1, 2), I2), np.kron(E(0, 0, 2), I2))])
    rep = pv.theorem_phiprime_check(phi, (2, 2))
    # phi'(I) = I + E_12 (x) I_2, so only the second partial trace moves
    assert np.abs(rep.residual_1).max() == 0
    np.testing.assert_allclose(rep.residual_2, 2 * E(0, 1, 2))
    assert rep.agree and not rep.holds_oracle


def test_phiprime_random(rng):
    for kind in instances.SUPEROP_KINDS:
        for dims in ((2, 2), (2, 3)):
            for _ in range(5):
                phi, expected = instances.superop_instance(dims, rng, kind)
                rep = pv.theorem_phiprime_check(phi, dims)
                assert rep.agree and rep.holds_oracle == expected


def test_operator_sum_factorization(rng):
    p = pv.synth_left_mult_preserver((2, 3), 2, rng)
    for r in (1, 2, 4):
        pairs = pv.operator_sum_factorization(p, r, rng)
        np.testing.assert_allclose(sum(q @ pi for pi, q in pairs), p, atol=1e-10)
        phi = so.superop_from_terms(pairs)
        rep = pv.theorem_phiprime_check(phi, (2, 3))
        assert rep.agree and rep.holds_oracle
    with pytest.raises(ValueError):
        pv.operator_sum_factorization(p, 0)


def test_rt_corollary_examples(rng):
    rep = pv.corollary_rt_check(so.identity_superop(4), (2, 2))
    assert rep.holds_condition and rep.holds_oracle
    p = pv.synth_left_mult_preserver((2, 2), 2, rng)
    rep = pv.corollary_rt_check(so.rt_symmetric_part(so.left_mult(p)), (2, 2))
    assert rep.holds_condition and rep.holds_oracle
    a, b = np.kron(E(0, 1, 2), I2), np.kron(E(1, 0, 2), I2)
    skew = so.superop_from_terms([(a, b), (-b, a)])
    rep = pv.corollary_rt_check(skew, (2, 2), skew=True)
    assert rep.agree and not rep.holds_oracle
    with pytest.raises(SymmetryClassError):
        pv.corollary_rt_check(skew, (2, 2))
    with pytest.raises(SymmetryClassError):
        pv.corollary_rt_check(so.identity_superop(4), (2, 2), skew=True)


def test_rt_corollary_random(rng):
    for dims in ((2, 2), (2, 3)):
        for kind in ("preserver", "perturbed"):
            for _ in range(5):
                phi, expected = instances.superop_instance(dims, rng, kind, "symmetric")
                rep = pv.corollary_rt_check(phi, dims)
                assert rep.agree and rep.holds_oracle == expected
        for _ in range(10):
            phi = so.rt_skew_part(so.SuperOperator(dims[0] * dims[1],
                                                   core.sample_matrix((dims[0] * dims[1]) ** 2, rng)))
            rep = pv.corollary_rt_check(phi, dims, skew=True)
            assert rep.agree and not rep.holds_oracle


@pytest.mark.parametrize("symmetry", [None, "symmetric", "hermitian"])
def test_random_preserver_classes(symmetry, rng):
    phi = pv.random_preserver((2, 3), rng, symmetry)
    assert pv.oracle_preserves_trace(phi, (2, 3))
    if symmetry == "symmetric":
        assert so.is_rt_symmetric(phi)
    if symmetry == "hermitian":
        assert so.is_rt_hermitian(phi)


@pytest.mark.parametrize("symmetry", ["skew", "skew_hermitian"])
def test_no_skew_preservers(symmetry, rng):
    with pytest.raises(pv.NoPreserverError):
        pv.random_preserver((2, 2), rng, symmetry)


def test_random_preserver_unknown_class():
    with pytest.raises(ValueError):
        pv.random_preserver((2, 2), 0, "unitary")


def test_no_warning_for_independent_factors(rng):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        pv.corollary_traceless_iff(pv.sample_traceless_factors((3, 3), 3, rng), (3, 3))

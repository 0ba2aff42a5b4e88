import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronpreserve import core, kron, superop as so
from kronpreserve._validation import ShapeError
from oracles import prime_by_coefficients, tabulate, unit

E = unit


def swap_map():
    """phi(M) = E_12 M E_21 on M_2 (one-based indices)."""
    return so.superop_from_terms([(E(0, 1, 2), E(1, 0, 2))])


def random_map(rng, d):
    return so.SuperOperator(d, core.sample_matrix(d * d, rng))


def test_apply_examples(rng):
    x = core.sample_matrix(2, rng)
    np.testing.assert_array_equal(so.superop_apply(so.identity_superop(2), x), x)
    np.testing.assert_array_equal(so.superop_apply(swap_map(), E(1, 1, 2)), E(0, 0, 2))
    p = core.sample_matrix(3, rng)
    np.testing.assert_allclose(so.left_mult(p)(np.eye(3)), p)
    with pytest.raises(ShapeError):
        so.superop_apply(so.identity_superop(2), np.eye(3))


def test_from_terms_examples(rng):
    np.testing.assert_array_equal(so.superop_from_terms([(np.eye(3), np.eye(3))]).phi_matrix,
                                  np.eye(9))
    p, x = core.sample_matrix(3, rng), core.sample_matrix(3, rng)
    np.testing.assert_allclose(so.superop_from_terms([(p, np.eye(3))])(x), p @ x, atol=1e-14)
    phi = swap_map().phi_matrix
    assert np.count_nonzero(phi) == 1
    # E_12 M E_21 sends E_22 to E_11: column vec(E_22) = 3, row vec(E_11) = 0
    assert phi[0, 3] == 1
    with pytest.raises(ShapeError):
        so.superop_from_terms([(np.eye(2), np.eye(3))])


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_terms_match_tabulated_map(d, rng):
    terms = [(core.sample_matrix(d, rng), core.sample_matrix(d, rng)) for _ in range(3)]
    phi = so.superop_from_terms(terms, d)
    want = tabulate(lambda m: sum(l @ m @ r for l, r in terms), d)
    np.testing.assert_allclose(phi.phi_matrix, want, atol=1e-13)
    x = core.sample_matrix(d, rng)
    np.testing.assert_allclose(so.superop_apply(phi, x), so.apply_terms(phi, x), atol=1e-10)
    # columns of Phi are vec(phi(E_pq))
    np.testing.assert_allclose(so.superop_from_function(phi, d).phi_matrix, phi.phi_matrix,
                               atol=1e-14)


def test_superoperator_is_immutable(rng):
    phi = random_map(rng, 2)
    with pytest.raises(ValueError):
        phi.phi_matrix[0, 0] = 1
    with pytest.raises(AttributeError):
        phi.d = 3


def test_prime_examples(rng):
    phi = random_map(rng, 3)
    np.testing.assert_array_equal(so.prime_transform(so.prime_transform(phi)).phi_matrix,
                                  phi.phi_matrix)
    prime = so.prime_transform(swap_map())
    want = so.superop_from_terms([(E(1, 0, 2), E(0, 1, 2))])
    np.testing.assert_array_equal(prime.phi_matrix, want.phi_matrix)
    np.testing.assert_array_equal(prime(E(0, 0, 2)), E(1, 1, 2))
    np.testing.assert_array_equal(so.prime_transform(so.identity_superop(3)).phi_matrix, np.eye(9))


@pytest.mark.parametrize("d", [2, 3])
def test_prime_vs_coefficient_oracle(d, rng):
    phi = random_map(rng, d)
    np.testing.assert_allclose(so.prime_transform(phi).phi_matrix,
                               prime_by_coefficients(phi.phi_matrix, d), atol=1e-13)


def test_prime_swaps_terms(rng):
    terms = [(core.sample_matrix(3, rng), core.sample_matrix(3, rng)) for _ in range(2)]
    prime = so.prime_transform(so.superop_from_terms(terms))
    assert all(np.array_equal(l2, r1) and np.array_equal(r2, l1)
               for (l1, r1), (l2, r2) in zip(terms, prime.terms))
    np.testing.assert_allclose(so.superop_from_terms(prime.terms).phi_matrix, prime.phi_matrix,
                               atol=1e-13)


def test_prime_conjugation_relation(rng):
    for d in (2, 3, 4):
        phi = random_map(rng, d)
        p = kron.perfect_shuffle(d, d)
        prime = so.prime_transform(phi).phi_matrix
        assert np.max(np.abs(phi.phi_matrix.T - p.T @ prime @ p)) <= 1e-12


def test_prime_of_left_mult_is_right_mult(rng):
    p = core.sample_matrix(4, rng)
    np.testing.assert_allclose(so.prime_transform(so.left_mult(p)).phi_matrix,
                               so.right_mult(p).phi_matrix, atol=1e-15)


def test_rt_symmetric_examples(rng):
    assert so.is_rt_symmetric(so.identity_superop(3))
    swap = swap_map()
    assert not so.is_rt_symmetric(swap)
    both = so.superop_from_terms([(E(0, 1, 2), E(1, 0, 2)), (E(1, 0, 2), E(0, 1, 2))])
    assert so.is_rt_symmetric(both)
    assert so.is_rt_symmetric(so.rt_symmetric_part(random_map(rng, 3)))


def test_decomposition_examples():
    sym, skew = so.rt_symmetric_part(so.identity_superop(2)), so.rt_skew_part(so.identity_superop(2))
    np.testing.assert_array_equal(sym.phi_matrix, np.eye(4))
    np.testing.assert_array_equal(skew.phi_matrix, np.zeros((4, 4)))
    swap = swap_map()
    a, b = E(0, 1, 2), E(1, 0, 2)
    for part, sign in ((so.rt_symmetric_part(swap), 1), (so.rt_skew_part(swap), -1)):
        want = so.superop_from_terms([(0.5 * a, b), (0.5 * sign * b, a)])
        np.testing.assert_array_equal(part.phi_matrix, want.phi_matrix)


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4]))
@settings(max_examples=40)
def test_decomposition_properties(seed, d):
    phi = random_map(np.random.default_rng(seed), d)
    sym, skew = so.rt_symmetric_part(phi), so.rt_skew_part(phi)
    assert np.max(np.abs(sym.phi_matrix + skew.phi_matrix - phi.phi_matrix)) <= 1e-12
    assert abs(np.vdot(sym.phi_matrix, skew.phi_matrix)) <= 1e-10
    assert so.is_rt_symmetric(sym) and so.is_rt_skew(skew)
    assert not so.is_rt_symmetric(phi) and not so.is_rt_skew(phi)


def test_rt_hermitian_examples():
    assert so.is_rt_hermitian(so.identity_superop(2))
    a, b = E(0, 1, 2), E(1, 0, 2)
    phi = so.superop_from_terms([(1j * a, b), (-1j * b, a)])
    assert so.is_rt_hermitian(phi)
    assert not so.is_rt_hermitian(swap_map())
    assert so.is_rt_skew_hermitian(1j * so.identity_superop(2))


def test_rt_hermitian_parts(rng):
    phi = random_map(rng, 3)
    herm, skew = so.rt_hermitian_part(phi), so.rt_skew_hermitian_part(phi)
    assert so.is_rt_hermitian(herm) and so.is_rt_skew_hermitian(skew)
    np.testing.assert_allclose(herm.phi_matrix + skew.phi_matrix, phi.phi_matrix, atol=1e-14)


def test_rearrangement_examples():
    assert so.rearrangement_characterization(so.identity_superop(2))
    assert not so.rearrangement_characterization(swap_map())


def test_three_rt_tests_agree(rng):
    for _ in range(100):
        phi = random_map(rng, 2 if rng.uniform() < 0.5 else 3)
        for case in (phi, so.rt_symmetric_part(phi), so.rt_skew_part(phi)):
            verdicts = {so.is_rt_symmetric(case, method=m)
                        for m in ("entrywise", "shuffle", "rearrangement")}
            assert len(verdicts) == 1
            assert so.rearrangement_characterization(case) == so.is_rt_symmetric(case)
        skew = so.rt_skew_part(phi)
        assert so.is_rt_skew(skew, method="shuffle") and so.is_rt_skew(skew)


def test_rt_defect_argument_errors(rng):
    phi = random_map(rng, 2)
    with pytest.raises(ValueError):
        so.rt_defect(phi, "diagonal")
    with pytest.raises(ValueError):
        so.rt_defect(phi, "hermitian", "shuffle")
    with pytest.raises(ValueError):
        so.rt_defect(phi, "skew", "rearrangement")
    with pytest.raises(ValueError):
        so.rt_defect(phi, "symmetric", "fourier")


def test_arithmetic_keeps_terms(rng):
    a = so.superop_from_terms([(core.sample_matrix(2, rng), core.sample_matrix(2, rng))])
    b = so.superop_from_terms([(core.sample_matrix(2, rng), core.sample_matrix(2, rng))])
    c = 2 * a - b
    assert len(c.terms) == 2
    np.testing.assert_allclose(so.superop_from_terms(c.terms).phi_matrix, c.phi_matrix, atol=1e-14)
    assert (a + so.SuperOperator(2, np.eye(4))).terms is None
    with pytest.raises(ShapeError):
        a + so.identity_superop(3)

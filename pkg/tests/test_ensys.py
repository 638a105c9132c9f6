import numpy as np
import pytest

from fockband import (CERTIFIED_NO, CERTIFIED_YES, UNDECIDED, DomainError,
                      DualElement, InputError, dual_cp_check, dual_element,
                      dual_map, dual_positive, en_decompose, en_element,
                      image_operator, kernel_membership, lam_min,
                      pattern_matrix, phi_apply, psd_margin, theta_embed)

from support import random_matrix, random_psd_arrowhead


def one(v):
    return np.array([[v]], dtype=complex)


class TestPhi:
    def test_scalar_coefficients(self):
        e = en_element(one(2.0), one(4.0), [one(6.0)])
        img = phi_apply(e)
        assert img.unit == pytest.approx(one(3.0))
        assert img.s[0] == pytest.approx(one(3.0))
        assert img.s_adj[0] == pytest.approx(one(3.0))

    def test_adjoint_side_is_conjugated(self):
        e = en_element(one(0.0), one(0.0), [one(2.0j)])
        img = phi_apply(e)
        assert img.s[0] == pytest.approx(one(1.0j))
        assert img.s_adj[0] == pytest.approx(one(-1.0j))

    def test_image_operator_layout(self):
        e = en_element(one(1.0), one(1.0), [one(0.6), one(0.8)])
        op = image_operator(phi_apply(e), depth=1).toarray()
        expected = np.array([[1.0, 0.3, 0.4],
                             [0.3, 1.0, 0.0],
                             [0.4, 0.0, 1.0]])
        assert op == pytest.approx(expected, abs=1e-15)

    def test_positive_elements_have_positive_images(self, rng):
        for _ in range(5):
            e = random_psd_arrowhead(rng, 2, 2)
            assert float(np.linalg.eigvalsh(e.matrix())[0]) >= -1e-10
            for depth in (1, 2, 3):
                assert lam_min(image_operator(phi_apply(e), depth)) >= -1e-8


class TestKernel:
    def test_difference_of_units_is_in_kernel(self):
        assert kernel_membership(en_element(one(1.0), one(-1.0), [one(0.0)]))

    def test_unit_is_not_in_kernel(self):
        assert not kernel_membership(en_element(one(1.0), one(1.0), [one(0.0)]))

    def test_arm_blocks_membership(self):
        assert not kernel_membership(en_element(one(1.0), one(-1.0), [one(0.5)]))

    def test_tolerance_is_respected(self):
        e = en_element(one(1.0), one(-1.0 + 1e-12), [one(1e-12)])
        assert kernel_membership(e, tol=1e-8)
        assert not kernel_membership(e, tol=1e-14)


class TestPattern:
    def test_single_letter_pattern_frozen(self):
        expected = np.array([[0.0, 0.0, 0.0, 0.0],
                             [0.0, 1.0, 1.0, 0.0],
                             [0.0, 1.0, 1.0, 0.0],
                             [0.0, 0.0, 0.0, 0.0]])
        assert np.array_equal(pattern_matrix(1), expected)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_pattern_is_psd_with_rank_n(self, n):
        p = pattern_matrix(n)
        assert np.array_equal(p, p.T)
        w = np.linalg.eigvalsh(p)
        assert w[0] >= -1e-12
        assert int(np.sum(w > 1e-8)) == n

    def test_rejects_nonpositive_n(self):
        with pytest.raises(InputError):
            pattern_matrix(0)


class TestDecompose:
    def test_scalar_example_frozen(self):
        e = en_element(one(1.0), one(1.0), [one(0.5), one(0.5)])
        dec = en_decompose(e, epsilon=0.0)
        assert dec.D == pytest.approx(one(0.5))
        expected_q = np.array([[1.0, 0.5, 0.5],
                               [0.5, 0.25, 0.25],
                               [0.5, 0.25, 0.25]])
        assert dec.Q == pytest.approx(expected_q, abs=1e-15)
        assert np.linalg.norm(dec.reconstruction() - e.matrix(), 2) == 0.0

    def test_zero_arms(self):
        e = en_element(np.eye(2), np.eye(2), [np.zeros((2, 2))])
        dec = en_decompose(e, epsilon=1e-6)
        shifted = e.matrix() + 1e-6 * np.eye(4)
        assert np.linalg.norm(dec.reconstruction() - shifted, 2) <= 1e-12

    def test_random_invariants(self, rng):
        for _ in range(5):
            e = random_psd_arrowhead(rng, 2, 2)
            dec = en_decompose(e, epsilon=1e-6)
            scale = max(1.0, float(np.linalg.norm(e.matrix(), 2)))
            assert psd_margin(dec.Q).min_eigenvalue >= -1e-10 * scale
            assert psd_margin(dec.D).min_eigenvalue >= -1e-10 * scale
            shifted = e.matrix() + 1e-6 * np.eye((e.n + 1) * e.p)
            gap = float(np.linalg.norm(dec.reconstruction() - shifted, 2))
            assert gap <= 1e-10 * scale

    def test_pattern_is_element_independent(self, rng):
        e1 = random_psd_arrowhead(rng, 3, 2)
        e2 = random_psd_arrowhead(rng, 3, 2)
        d1 = en_decompose(e1, epsilon=1e-6)
        d2 = en_decompose(e2, epsilon=1e-6)
        assert np.array_equal(d1.P, d2.P)

    def test_rejects_indefinite_element(self):
        e = en_element(one(0.0), one(1.0), [one(1.0)])
        with pytest.raises(DomainError):
            en_decompose(e, epsilon=0.0)

    def test_rejects_singular_tail_without_shift(self):
        e = en_element(one(1.0), one(0.0), [one(0.0)])
        with pytest.raises(DomainError):
            en_decompose(e, epsilon=0.0)

    def test_rejects_negative_epsilon(self):
        e = en_element(one(1.0), one(1.0), [one(0.0)])
        with pytest.raises(InputError):
            en_decompose(e, epsilon=-1e-3)


class TestDualPositive:
    def test_identity_diagonal_boundary(self):
        v = dual_positive(dual_element(np.eye(1), [one(0.6), one(0.8)]))
        assert v.status == CERTIFIED_YES
        assert v.witness == pytest.approx(1.0, abs=1e-12)

    def test_identity_diagonal_refuted(self):
        v = dual_positive(dual_element(np.eye(1), [one(1.1)]))
        assert v.status == CERTIFIED_NO
        assert v.witness == pytest.approx(1.21, abs=1e-12)

    def test_general_diagonal_positive(self):
        v = dual_positive(dual_element(2.0 * np.eye(1), [one(1.9)]))
        assert v.status == CERTIFIED_YES
        assert len(v.row_norms) == 3
        assert v.witness <= 1.0

    def test_general_diagonal_refuted(self):
        v = dual_positive(dual_element(0.25 * np.eye(1), [one(1.0)]))
        assert v.status == CERTIFIED_NO
        assert v.witness > 1.0

    def test_negative_diagonal_refuted_directly(self):
        v = dual_positive(dual_element(-np.eye(1), [one(0.0)]))
        assert v.status == CERTIFIED_NO
        assert v.witness == pytest.approx(-1.0, abs=1e-12)
        assert v.row_norms == ()

    def test_singular_diagonal_disagreeing_rungs(self):
        d = dual_element(np.diag([0.0, 1.0]),
                         [np.array([[1e-3, 0.0], [0.0, 0.0]])])
        v = dual_positive(d)
        assert v.status == UNDECIDED

    def test_rejects_non_hermitian_diagonal(self):
        with pytest.raises(InputError):
            dual_positive(dual_element(np.array([[0.0, 1.0], [0.0, 0.0]]), [one(0.0)]))

    def test_matches_arrowhead_eigenfloor(self, rng):
        agree = 0
        for _ in range(20):
            p = int(rng.integers(1, 4))
            n = int(rng.integers(1, 4))
            target = float(rng.choice([0.3, 0.8, 1.2, 2.0]))
            arms = [random_matrix(rng, p) for _ in range(n)]
            g = sum(m @ m.conj().T for m in arms)
            top = float(np.sqrt(np.linalg.eigvalsh(g)[-1].real))
            arms = [m * (target / top) for m in arms]
            d = dual_element(np.eye(p), arms)
            v = dual_positive(d)
            embed_psd = psd_margin(theta_embed(d)).min_eigenvalue >= -1e-9
            assert (v.status == CERTIFIED_YES) == embed_psd
            agree += 1
        assert agree == 20


class TestThetaEmbed:
    def test_layout(self):
        d = dual_element(one(7.0), [one(2.0), one(3.0)])
        expected = np.array([[7.0, 2.0, 3.0],
                             [2.0, 7.0, 0.0],
                             [3.0, 0.0, 7.0]])
        assert np.array_equal(theta_embed(d), expected)

    def test_identity_floor_is_one_minus_row_norm(self, rng):
        for _ in range(5):
            p = int(rng.integers(1, 4))
            arms = [random_matrix(rng, p, scale=0.4) for _ in range(2)]
            d = dual_element(np.eye(p), arms)
            g = sum(m @ m.conj().T for m in arms)
            row = float(np.sqrt(np.linalg.eigvalsh(g)[-1].real))
            floor = float(np.linalg.eigvalsh(theta_embed(d))[0])
            assert floor == pytest.approx(1.0 - row, abs=1e-12)


class TestDualMap:
    def test_requires_unital(self):
        with pytest.raises(InputError):
            dual_map(2.0 * np.eye(2), [np.zeros((2, 2))])

    def test_zero_map_is_cp(self):
        v = dual_cp_check(dual_map(np.eye(1), [one(0.0)]))
        assert v.status == CERTIFIED_YES
        assert v.margin == pytest.approx(1.0, abs=1e-12)

    def test_expanding_map_is_not_cp(self):
        v = dual_cp_check(dual_map(np.eye(1), [one(0.6)]))
        assert v.status == CERTIFIED_NO
        assert v.depth == 4

    def test_contractive_map_is_cp_with_certificate(self):
        v = dual_cp_check(dual_map(np.eye(1), [one(0.45)]))
        assert v.status == CERTIFIED_YES
        assert v.certificate is not None
        assert v.certificate.strictly_valid(1e-8)

import numpy as np
import pytest

import symdisk as sd
from symdisk import kernels
from symdisk.errors import InputError
from symdisk.pick import gram_on_nodes, kernel_basis_operators

from conftest import random_g_points


class TestPickData:
    def test_rejects_length_mismatch(self):
        with pytest.raises(InputError):
            sd.PickData((sd.GammaPoint(0, 0),), (0, 0.5))

    def test_rejects_coincident_nodes(self):
        with pytest.raises(InputError):
            sd.PickData((sd.GammaPoint(0, 0), sd.GammaPoint(0, 0)), (0, 0.5))

    def test_rejects_node_outside_domain(self):
        with pytest.raises(InputError):
            sd.PickData((sd.GammaPoint(2, 1),), (0,))

    def test_rejects_large_target(self):
        with pytest.raises(InputError):
            sd.PickData((sd.GammaPoint(0, 0),), (1.5,))


class TestPickMatrix:
    def test_sheet_datum_all_ones(self, data_sheet, kernel_sheet):
        # model kernel of {s=0} on the 4.10 nodes: all-ones Pick matrix
        P = sd.pick_matrix(data_sheet, kernel_sheet)
        assert np.allclose(P, np.ones((2, 2)), atol=1e-12)

    def test_royal_example(self, data_royal, kernel_royal):
        P = sd.pick_matrix(data_royal, kernel_royal)
        target = np.array([[1, 2 / np.sqrt(5)], [2 / np.sqrt(5), 0.8]])
        assert np.allclose(P, target, atol=1e-12)

    def test_single_node_szego(self):
        data = sd.PickData((sd.GammaPoint(0, 0),), (0,))
        P = sd.pick_matrix(data, kernels.szego())
        assert np.allclose(P, [[1]])

    def test_hermitian_and_reorder_invariant(self, rng):
        pts = random_g_points(rng, 4)
        w = 0.9 * rng.uniform(size=4) * np.exp(2j * np.pi * rng.uniform(size=4))
        data = sd.PickData(tuple(pts), tuple(w))
        P = sd.pick_matrix(data, kernels.szego())
        assert np.linalg.norm(P - P.conj().T) <= 1e-12 * np.linalg.norm(P)
        perm = rng.permutation(4)
        data2 = sd.PickData(tuple(pts[i] for i in perm), tuple(w[i] for i in perm))
        P2 = sd.pick_matrix(data2, kernels.szego())
        assert np.allclose(P2, P[np.ix_(perm, perm)], atol=1e-12)


class TestPsdReport:
    def test_rank_one(self):
        rep = sd.psd_report(np.ones((2, 2)))
        assert abs(rep.min_eigenvalue) <= 1e-12
        g = rep.null_vector
        assert g is not None
        assert abs(abs(g[0]) - 1 / np.sqrt(2)) < 1e-12
        assert abs(g[0] + g[1]) < 1e-12  # proportional to (1, -1)

    def test_strictly_positive(self):
        rep = sd.psd_report(np.array([[1, 1], [1, 4 / 3]]))
        assert rep.min_eigenvalue > 0.1
        assert rep.null_vector is None

    def test_indefinite(self):
        rep = sd.psd_report(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert rep.min_eigenvalue < -0.5

    def test_rejects_non_hermitian(self):
        with pytest.raises(InputError):
            sd.psd_report(np.array([[0, 1], [0, 0]]))


class TestKernelBasisOperators:
    def test_single_node(self):
        K = sd.KernelMatrix((sd.GammaPoint(0, 0),), np.array([[1.0]]))
        ops = kernel_basis_operators(K)
        assert np.allclose(ops.Ms, 0) and np.allclose(ops.Mp, 0)
        assert np.allclose(ops.D, [[1.0]])

    def test_sheet_model_contractive(self, kernel_sheet):
        ops = kernel_basis_operators(kernel_sheet)
        assert np.linalg.norm(ops.Mp, 2) <= 1.0 + 1e-10

    def test_rank_collapse_rejected(self):
        K = sd.KernelMatrix((sd.GammaPoint(0, 0), sd.GammaPoint(0, 0.9)),
                            np.ones((2, 2)))
        with pytest.raises(InputError):
            kernel_basis_operators(K)


class TestFundamentalOperator:
    def test_single_node_is_conj_beta(self, rng):
        for _ in range(5):
            x = random_g_points(rng, 1)[0]
            K = sd.KernelMatrix((x,), np.array([[1.0 + rng.uniform()]]))
            F = sd.fundamental_operator(K)
            assert abs(F[0, 0] - np.conj(sd.beta_of(x))) < 1e-10

    def test_sheet_model_zero(self, kernel_sheet):
        F = sd.fundamental_operator(kernel_sheet)
        assert F.shape == (2, 2)
        assert np.linalg.norm(F) <= 1e-12

    def test_royal_model_vanishes_on_royal_points(self, kernel_royal):
        F = sd.fundamental_operator(kernel_royal)
        V = sd.PencilVariety(F)
        for z in (0.3, -0.2 + 0.4j, 0.6j):
            assert sd.membership_residual(V, sd.GammaPoint(2 * z, z * z)) <= 1e-8

    def test_model_restrictions_are_numerical_contractions(self, rng):
        # restrict a model kernel to variety nodes inside the domain; the
        # fundamental operator must come back a numerical contraction
        from symdisk.gamma import Region
        from symdisk.sweeps import ginibre_contraction
        for _ in range(5):
            F0 = ginibre_contraction(rng, 3)
            if not sd.is_cnu(F0):
                continue
            V0 = sd.PencilVariety(F0)
            nodes = []
            for p in (0.2, -0.3j, 0.4):
                for s in sd.slice_points(V0, p):
                    x = sd.GammaPoint(s, p)
                    if sd.classify_region(x) is Region.OPEN_G:
                        nodes.append(x)
            nodes = nodes[:4]
            if len(nodes) < 2:
                continue
            data = sd.PickData(tuple(nodes), tuple(0.0 for _ in nodes))
            K = gram_on_nodes(data, kernels.model(F0))
            Fp = sd.fundamental_operator(K)
            assert sd.numerical_radius(Fp) <= 1.0 + 1e-10


class TestAdmissibilityAudit:
    def test_szego_restrictions_pass(self, rng):
        for _ in range(5):
            pts = random_g_points(rng, int(rng.integers(2, 5)))
            data = sd.PickData(tuple(pts), tuple(0.0 for _ in pts))
            K = gram_on_nodes(data, kernels.szego())
            report = sd.admissibility_audit(K)
            assert report.passed, report.failures

    def test_sheet_model_passes(self, kernel_sheet):
        report = sd.admissibility_audit(kernel_sheet)
        assert report.passed
        assert report.nu_fundamental <= 1e-10

    def test_rank_collapse_errors(self):
        K = sd.KernelMatrix((sd.GammaPoint(0, 0), sd.GammaPoint(0, 0.9)),
                            np.ones((2, 2)))
        with pytest.raises(InputError):
            sd.admissibility_audit(K)


class TestNonextremalPerturbation:
    def test_delta_zero_is_f(self, data_unique):
        h = sd.nonextremal_perturbation(data_unique, lambda x: x.s / 2, 1.0, 0.0)
        for x in (sd.GammaPoint(0.3, 0.02), sd.GammaPoint(-0.4, 0.1j)):
            assert abs(h(x) - x.s / 2) < 1e-15

    def test_single_node_formula(self):
        data = sd.PickData((sd.GammaPoint(0, 0),), (0,))
        h = sd.nonextremal_perturbation(data, lambda x: 0.0, 1.0, 0.1)
        x = sd.GammaPoint(0.2, 0.3j)
        assert abs(h(x) - 0.1 * (0.2 + 0.3j)) < 1e-15
        assert abs(h(sd.GammaPoint(0, 0))) < 1e-15

    def test_nodes_unchanged(self, data_unique):
        h = sd.nonextremal_perturbation(data_unique, lambda x: x.s / 2, 0.7j, 1e-3)
        for nd, w in zip(data_unique.nodes, data_unique.targets):
            assert abs(h(nd) - w) < 1e-12

    def test_rejects_non_interpolant(self, data_unique):
        with pytest.raises(InputError):
            sd.nonextremal_perturbation(data_unique, lambda x: 0.0, 1.0, 0.1)


class TestAgreementLocus:
    def _grid(self, rng, n=300):
        return random_g_points(rng, n)

    def test_royal_pair(self, rng):
        # -s/2 and (2p-s)/(2-s) agree exactly on s^2 = 4p
        grid = self._grid(rng) + [sd.GammaPoint(2 * z, z * z)
                                  for z in (0.3, -0.5j, 0.1 + 0.2j)]
        locus = sd.agreement_locus(
            [lambda x: -x.s / 2, lambda x: (2 * x.p - x.s) / (2 - x.s)],
            grid, 1e-8)
        assert len(locus) >= 3
        for x in locus:
            assert abs(x.s ** 2 - 4 * x.p) <= 1e-6

    def test_sheet_pair(self, rng):
        # p and (2p-s)/(2-s) agree exactly on s = 0
        grid = self._grid(rng) + [sd.GammaPoint(0, p) for p in (0.2, -0.5j, 0.7)]
        locus = sd.agreement_locus(
            [lambda x: x.p, lambda x: (2 * x.p - x.s) / (2 - x.s)],
            grid, 1e-8)
        assert len(locus) >= 3
        for x in locus:
            assert abs(x.s) <= 1e-6

    def test_identical_evaluators(self, rng):
        grid = self._grid(rng, 50)
        f = lambda x: x.s * x.p
        assert sd.agreement_locus([f, f], grid, 1e-12) == grid

    def test_monotone_in_tolerance(self, rng):
        grid = self._grid(rng, 100)
        fs = [lambda x: -x.s / 2, lambda x: (2 * x.p - x.s) / (2 - x.s)]
        tight = set(id(x) for x in sd.agreement_locus(fs, grid, 1e-10))
        loose = set(id(x) for x in sd.agreement_locus(fs, grid, 1e-4))
        assert tight <= loose

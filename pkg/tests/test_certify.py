import dataclasses
import math

import numpy as np
import pytest

import scaopt.drivers as drv
from scaopt.certify import (
    EigenSolveError,
    SpectralShiftError,
    certify_run,
    classify,
    min_eigenvalue,
)
from scaopt.numerics import RngStream
from scaopt.problems import get_problem, make_quadratic, make_saddle_quartic
from scaopt.surrogates import SurrogateSpec


class TestMinEigenvalue:
    def test_constant_diag_hessian_dense(self):
        obj = make_quadratic(np.diag([1.0, -1.0])).objective
        lam, vec, residual = min_eigenvalue(obj, np.array([0.3, -0.8]))
        assert lam == -1.0
        assert np.allclose(np.abs(vec), [0.0, 1.0], atol=1e-12)
        assert residual <= 1e-12

    def test_quartic_minimum_has_positive_floor(self):
        obj = make_saddle_quartic(5).objective
        p = np.zeros(5)
        p[1] = 1.0
        lam, _, _ = min_eigenvalue(obj, p)
        assert abs(lam - 1.0) <= 1e-12

    def test_matrix_free_matches_dense_random_50(self):
        gen = np.random.default_rng(17)
        for _ in range(3):
            a = gen.standard_normal((50, 50))
            obj = make_quadratic(0.5 * (a + a.T)).objective
            x = np.zeros(50)
            lam_dense, _, _ = min_eigenvalue(obj, x, method="dense")
            lam_free, _, res = min_eigenvalue(obj, x, method="matrix_free")
            assert abs(lam_dense - lam_free) <= 1e-6
            assert res <= 1e-6 * obj.constants.grad_lipschitz

    def test_understated_lipschitz_is_diagnosed(self):
        obj = make_quadratic(np.diag([2.0, 1.0])).objective
        weak = dataclasses.replace(
            obj,
            constants=dataclasses.replace(obj.constants, grad_lipschitz=0.5),
        )
        with pytest.raises(SpectralShiftError):
            min_eigenvalue(weak, np.zeros(2), method="matrix_free")

    def test_budget_exhaustion_carries_best_estimate(self):
        gen = np.random.default_rng(3)
        a = gen.standard_normal((40, 40))
        obj = make_quadratic(0.5 * (a + a.T)).objective
        with pytest.raises(EigenSolveError) as excinfo:
            min_eigenvalue(obj, np.zeros(40), method="matrix_free", max_iters=2)
        assert math.isfinite(excinfo.value.lambda_min)
        assert excinfo.value.residual > 0

    def test_dense_requested_without_hessian(self):
        obj = make_quadratic(np.eye(2)).objective
        stripped = dataclasses.replace(obj, dense_hessian=None)
        with pytest.raises(ValueError):
            min_eigenvalue(stripped, np.zeros(2), method="dense")


class TestClassify:
    def test_saddle_origin_is_strict_saddle(self):
        obj = make_saddle_quartic(4).objective
        cert = classify(obj, np.zeros(4), eps=0.01)
        assert cert.classification == "eps_fosp_strict_saddle"
        assert cert.grad_norm == 0.0
        assert abs(cert.gamma - math.sqrt(12.0 * 0.01)) <= 1e-15
        assert cert.lambda_min == -1.0
        assert cert.method == "dense"

    def test_minimum_is_sosp(self):
        obj = make_saddle_quartic(4).objective
        p = np.zeros(4)
        p[1] = -1.0
        cert = classify(obj, p, eps=0.01)
        assert cert.classification == "eps_sosp"
        assert cert.lambda_min >= -cert.gamma

    def test_large_gradient_skips_eigen_path(self):
        obj = make_saddle_quartic(4).objective
        x = np.full(4, 0.5)
        eps = float(np.linalg.norm(obj.gradient(x))) / 2.0
        cert = classify(obj, x, eps=eps)
        assert cert.classification == "not_fosp"
        assert cert.lambda_min is None
        assert cert.lambda_min_residual is None
        assert cert.method is None

    def test_classes_are_exhaustive_and_exclusive(self):
        obj = make_saddle_quartic(3).objective
        stream = RngStream(0)
        seen = set()
        for _ in range(30):
            x = stream.uniform_vector(-1.5, 1.5, 3)
            cert = classify(obj, x, eps=0.5)
            seen.add(cert.classification)
            if cert.classification == "not_fosp":
                assert cert.grad_norm > 0.5
            else:
                assert cert.grad_norm <= 0.5
                if cert.classification == "eps_sosp":
                    assert cert.lambda_min >= -cert.gamma
                else:
                    assert cert.lambda_min < -cert.gamma
        assert "not_fosp" in seen

    def test_bad_eps(self):
        obj = make_saddle_quartic(3).objective
        with pytest.raises(ValueError):
            classify(obj, np.zeros(3), eps=0.0)


class TestCertifyRun:
    def test_escape_run_certifies_sosp(self):
        prob = get_problem("saddle_quartic:d=10")
        obj = prob.objective
        params = drv.derive_params(0.01, 0.1, 1.0, 0.5, 0.25, obj, 20_000)
        res = drv.run_psca(obj, SurrogateSpec(), params, prob.canonical_start, RngStream(2))
        cert = certify_run(obj, res, 0.01)
        assert cert.classification == "eps_sosp"
        assert res.f_out <= -0.2

    def test_stalled_run_certifies_strict_saddle(self):
        prob = get_problem("saddle_quartic:d=4")
        res = drv.run_sca(prob.objective, SurrogateSpec(), 0.5, 1e-12, 100, prob.canonical_start)
        cert = certify_run(prob.objective, res, 0.01)
        assert cert.classification == "eps_fosp_strict_saddle"

    def test_unconverged_run_is_not_fosp(self):
        prob = get_problem("rosenbrock:d=2")
        obj = prob.objective
        eta = 1.0 / obj.constants.grad_lipschitz
        res = drv.run_sca(obj, SurrogateSpec(), eta, 1e-12, 5, prob.canonical_start)
        assert res.termination == "max_iters"
        cert = certify_run(obj, res, 1e-6)
        assert cert.classification == "not_fosp"

    def test_region_exit_refused(self):
        prob = get_problem("quadratic_indefinite:d=3")
        obj = prob.objective
        params = drv.derive_params(0.1, 0.1, 1.0, 0.5, 1.0, obj, 5000)
        res = drv.run_psca(obj, SurrogateSpec(), params, prob.canonical_start, RngStream(0))
        assert res.termination == "left_valid_region"
        with pytest.raises(ValueError):
            certify_run(obj, res, 0.1)

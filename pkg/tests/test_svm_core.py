"""SMO solver, RBF kernel plumbing, cross-validation, and model serialization
tests.  The solver is checked against an analytic two-point solution and the
cvxopt dense-QP oracle from smallqp.py."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from cbwcs import (
    SvmHyper,
    TrainingSet,
    cross_val_accuracy,
    load_model,
    save_model,
    train_svm,
)
from cbwcs.svm_core import (
    _KernelRows,
    make_cv_folds,
    pairwise_sq_dists,
    rbf_kernel,
    smo_solve,
)

from smallqp import (
    dual_objective,
    identity_training_set,
    kkt_violation,
    make_instances,
    qp_oracle,
    rbf_gram,
)


class TestKernel:
    def test_pairwise_sq_dists_matches_direct(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(12, 5))
        z = rng.normal(size=(7, 5))
        want = ((x[:, None, :] - z[None, :, :]) ** 2).sum(axis=2)
        assert_allclose(pairwise_sq_dists(x, z), want, atol=1e-10)
        assert np.all(pairwise_sq_dists(x) >= 0.0)
        assert_allclose(np.diag(pairwise_sq_dists(x)), np.zeros(12), atol=1e-12)

    def test_rbf_known_value(self):
        a = np.array([[1.0, 0.0]])
        b = np.array([[0.0, 1.0]])
        k = rbf_kernel(a, b, gamma=0.5)
        assert k[0, 0] == pytest.approx(np.exp(-1.0), rel=1e-12)

    def test_kernel_rows_cache_matches_full_gram(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(15, 4))
        full = _KernelRows(x, 0.8, cache_limit=100)
        lru = _KernelRows(x, 0.8, cache_limit=4)
        assert full._full is not None and lru._full is None
        for i in (3, 9, 3, 14, 0, 3):
            assert_allclose(lru.row(i), full._full[i], atol=1e-12)
        assert_array_equal(lru.diag, np.ones(15))


class TestSmo:
    def test_two_point_analytic_solution(self):
        # symmetric pair: alpha_1 = alpha_2 = 1 / (1 - K12)
        x = np.array([[1.0, 0.0], [-1.0, 0.0]])
        v = np.array([1.0, -1.0])
        gamma = 0.5
        gram = rbf_gram(x, gamma)
        res = smo_solve(gram, v, c=10.0, tol=1e-8)
        assert res.converged
        k12 = np.exp(-gamma * 4.0)
        want = 1.0 / (1.0 - k12)
        assert_allclose(res.alpha, [want, want], rtol=1e-6)

    @pytest.mark.parametrize("inst", make_instances(), ids=lambda i: i.name)
    def test_matches_dense_qp_oracle(self, inst):
        gram = rbf_gram(inst.x, inst.gamma)
        res = smo_solve(gram, inst.labels, inst.c, tol=1e-8)
        assert res.converged
        assert np.all(res.alpha >= -1e-12)
        assert np.all(res.alpha <= inst.c + 1e-12)
        assert abs(res.alpha @ inst.labels) <= 1e-8
        alpha_qp = qp_oracle(gram, inst.labels, inst.c)
        obj_smo = dual_objective(res.alpha, gram, inst.labels)
        obj_qp = dual_objective(alpha_qp, gram, inst.labels)
        assert abs(obj_smo - obj_qp) <= 1e-6, inst.name

    def test_iteration_cap_reported(self):
        x, v = np.random.default_rng(3).normal(size=(20, 2)), None
        v = np.sign(x[:, 0])
        v[v == 0] = 1.0
        gram = rbf_gram(x, 1.0)
        res = smo_solve(gram, v, c=100.0, tol=1e-12, max_iter=3)
        assert not res.converged
        assert res.iterations == 3


class TestTrainSvm:
    def test_separable_training_accuracy(self):
        inst = make_instances()[0]  # separable6
        ts = identity_training_set(inst.x, inst.labels)
        model = train_svm(ts, SvmHyper(c=inst.c, gamma=inst.gamma), tol=1e-6)
        assert model.n_support > 0
        assert np.isfinite(model.bias)
        assert_array_equal(model.predict(inst.x), inst.labels)

    def test_kkt_conditions_hold(self):
        inst = make_instances()[3]  # overlap30
        ts = identity_training_set(inst.x, inst.labels)
        gram = rbf_gram(inst.x, inst.gamma)
        res = smo_solve(gram, inst.labels, inst.c, tol=1e-6)
        model = train_svm(ts, SvmHyper(c=inst.c, gamma=inst.gamma), tol=1e-6)
        assert kkt_violation(model, inst.x, inst.labels, res.alpha, inst.c) <= 1e-3

    def test_lru_cache_and_full_gram_agree(self):
        # the two kernel paths may pick different pivot orders, so compare the
        # converged solutions rather than the trajectories
        inst = make_instances()[2]  # overlap20
        ts = identity_training_set(inst.x, inst.labels)
        hyper = SvmHyper(c=inst.c, gamma=inst.gamma)
        full = train_svm(ts, hyper, tol=1e-8, kernel_cache_limit=1000)
        lru = train_svm(ts, hyper, tol=1e-8, kernel_cache_limit=5)
        assert full.n_support == lru.n_support
        assert_allclose(full.coeffs, lru.coeffs, atol=1e-6)
        assert full.bias == pytest.approx(lru.bias, abs=1e-6)
        assert_array_equal(full.predict(inst.x), lru.predict(inst.x))

    def test_single_class_degenerates_to_constant(self):
        inst = make_instances()[-1]  # single_class6
        ts = identity_training_set(inst.x, inst.labels)
        model = train_svm(ts, SvmHyper(c=inst.c, gamma=inst.gamma))
        assert model.n_support == 0
        pred = model.predict(inst.x)
        assert len(set(pred.tolist())) == 1  # constant decision

    def test_training_set_validation(self):
        with pytest.raises(ValueError):
            identity_training_set(np.zeros((3, 2)), np.array([1.0, -1.0, 0.0]))
        with pytest.raises(ValueError):
            identity_training_set(np.zeros((3, 2)), np.ones(4))

    def test_hyper_validation(self):
        for c, g in [(0.0, 1.0), (1.0, 0.0), (-2.0, 1.0), (np.inf, 1.0), (1.0, np.nan)]:
            with pytest.raises(ValueError):
                SvmHyper(c=c, gamma=g)


class TestCrossValidation:
    def test_folds_are_stratified(self):
        labels = np.array([1.0] * 13 + [-1.0] * 7)
        ids = make_cv_folds(labels, 5, np.random.default_rng(0))
        assert set(ids) == set(range(5))
        for f in range(5):
            pos = np.sum((ids == f) & (labels == 1.0))
            neg = np.sum((ids == f) & (labels == -1.0))
            assert abs(pos - 13 / 5) < 1.0 and abs(neg - 7 / 5) < 1.0

    def test_fold_count_validated(self):
        with pytest.raises(ValueError):
            make_cv_folds(np.ones(4), 1, np.random.default_rng(0))

    def test_accuracy_deterministic_and_d2_equivalent(self):
        inst = make_instances()[1]
        ts = identity_training_set(inst.x, inst.labels)
        folds = make_cv_folds(ts.labels, 3, np.random.default_rng(5))
        hyper = SvmHyper(c=inst.c, gamma=inst.gamma)
        acc1 = cross_val_accuracy(ts, hyper, folds)
        acc2 = cross_val_accuracy(ts, hyper, folds, d2=pairwise_sq_dists(ts.x))
        assert acc1 == acc2
        assert 0.0 <= acc1 <= 1.0


class TestSerialization:
    def test_round_trip_bit_exact(self, tmp_path):
        inst = make_instances()[2]
        ts = identity_training_set(inst.x, inst.labels)
        model = train_svm(ts, SvmHyper(c=inst.c, gamma=inst.gamma))
        path = tmp_path / "model.txt"
        save_model(model, path)
        back = load_model(path)
        assert back.hyper == model.hyper
        assert back.bias == model.bias
        assert back.n_train == model.n_train
        assert_array_equal(back.coeffs, model.coeffs)
        assert_array_equal(back.support_vectors, model.support_vectors)
        assert_array_equal(back.scaler.lo, model.scaler.lo)
        assert_array_equal(back.scaler.hi, model.scaler.hi)
        probe = np.random.default_rng(10).normal(size=(40, inst.x.shape[1]))
        assert_array_equal(back.decision_values(probe), model.decision_values(probe))

    def test_version_header_enforced(self, tmp_path):
        inst = make_instances()[0]
        ts = identity_training_set(inst.x, inst.labels)
        model = train_svm(ts, SvmHyper(c=1.0, gamma=1.0))
        path = tmp_path / "model.txt"
        save_model(model, path)
        text = path.read_text()
        assert text.startswith("cbwcs-svm-model v1")
        corrupted = tmp_path / "bad.txt"
        corrupted.write_text("something-else v9\n" + text.split("\n", 1)[1])
        with pytest.raises(ValueError, match="not a"):
            load_model(corrupted)

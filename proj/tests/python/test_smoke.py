"""Smoke tests for the Python bindings (the C++ suites carry the real load)."""

import math

import pytest

import advlin


def test_special_functions():
    assert advlin.phi(0.0) == 0.5
    assert abs(advlin.phi(1.0) - 0.8413447460685429) < 1e-10
    assert advlin.erf(-0.5) == -advlin.erf(0.5)
    assert abs(advlin.erf(1.0) - advlin.erf_oracle(1.0, 1e-12)) < 1e-10
    assert abs(advlin.bayes_error_1d(1.0, 1.0) - 0.15866) < 5e-6


def test_bayes_accuracy_grows_with_dimension():
    accs = [
        advlin.bayes_accuracy_d(advlin.GaussianModel(d, 1.0, 1.0))
        for d in (1, 4, 16, 64)
    ]
    assert accs == sorted(accs)
    assert abs(accs[0] - 0.8413) < 1e-4
    with pytest.raises(ValueError):
        advlin.bayes_accuracy_d(advlin.GaussianModel(2, [1.0, 2.0], 1.0))


def test_sampling_is_deterministic(tmp_path):
    model = advlin.GaussianModel(3, 1.0, 1.0)
    a = advlin.sample(model, 42, 10)
    b = advlin.sample(model, 42, 10)
    assert len(a) == 10 and a.dim == 3
    assert [a.y(i) for i in range(10)] == [b.y(i) for i in range(10)]
    assert a.x(0) == b.x(0)

    path = tmp_path / "data.csv"
    a.to_csv(path)
    back = advlin.Dataset.from_csv(path)
    assert back.x(7) == a.x(7)
    assert back.y(7) == a.y(7)


def test_adversarial_loss_closed_form():
    h = advlin.LinearHypothesis([1.0, -2.0])
    kind = advlin.LossKind.linear()
    assert advlin.adversarial_loss(kind, h, [1.0, 1.0], 1, 0.5) == 2.5
    delta = advlin.worst_case_perturbation(kind, h, [1.0, 1.0], 1, 0.5)
    assert delta == [-0.5, 0.5]
    grad, grad_b = advlin.adversarial_gradient(kind, h, [1.0, 1.0], 1, 0.5)
    assert grad == [-0.5, -1.5]
    assert grad_b == -1.0


def test_exact_recurrence_cycle():
    values = advlin.simulate("1/1000000", "1/2", "1", "3/2", 6)
    assert values[0] == "1/1000000"
    assert values[1] == "-249999/1000000"
    assert values[6] == "1/1000000"
    census = advlin.sign_census(values[:6])
    assert census == {"positive": 5, "negative": 1, "zero": 0}
    assert advlin.detect_cycle("1/1000000", "1/2", "1", "3/2") == (6, 0)
    assert advlin.s_choice("3/2") == 2
    assert advlin.s_choice("3") == 4
    verdict = advlin.check_attraction("1/2", "1", "3/2", "1/1000000", 100)
    assert verdict["verdict"] == "pass" and verdict["index"] == 1


def test_streaming_training_smoke():
    model = advlin.GaussianModel(1, 1.0, 1.0)
    cfg = advlin.TrainConfig()
    cfg.mode = advlin.TrainMode.STREAMING
    cfg.iterations = 2000
    cfg.epsilon = 1.5
    cfg.seed = 7
    stats = advlin.train_streaming(model, cfg)
    census = stats.sign_counts[0]
    assert census.positive + census.negative + census.zero == 2001
    assert census.positive > census.negative
    again = advlin.train_streaming(model, cfg)
    assert again.theta_history == stats.theta_history


def test_epoch_training_smoke():
    model = advlin.GaussianModel(20, 1.0, 1.0)
    cfg = advlin.TrainConfig()
    cfg.mode = advlin.TrainMode.EPOCHS
    cfg.n_train = 500
    cfg.n_test = 500
    cfg.epochs = 3
    cfg.seed = 5
    stats = advlin.train_epochs(model, cfg)
    assert len(stats.mean_theta) == 3
    assert len(stats.test_accuracy) == 3
    assert all(0.0 <= a <= 1.0 for a in stats.test_accuracy)

    test = advlin.sample(model, 123, 2000)
    h = advlin.LinearHypothesis(stats.final_theta, stats.final_bias)
    acc = advlin.evaluate_accuracy(h, test)
    assert math.isclose(acc, stats.test_accuracy[-1], abs_tol=0.2)
    assert advlin.evaluate_robust_accuracy(h, test, 0.1) <= acc


def test_intercept_smoke():
    model = advlin.ShiftedModel(2.0, 1.0, 0.25)
    cfg = advlin.TrainConfig()
    cfg.eta = 0.01
    cfg.iterations = 300
    cfg.n_train = 400
    cfg.n_test = 400
    cfg.seed = 3
    cfg.learn_bias = True

    cfg.loss = advlin.LossKind.linear()
    linear = advlin.train_intercept(model, cfg)
    assert max(abs(b - linear.bias_history[0]) for b in linear.bias_history) == 0.0

    cfg.loss = advlin.LossKind.hinge(0.0)
    hinge = advlin.train_intercept(model, cfg)
    assert hinge.test_accuracy[-1] > linear.test_accuracy[-1]

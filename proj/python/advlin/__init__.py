"""Adversarially trained linear classifiers on the symmetric Gaussian model.

Thin re-export of the compiled extension; the C++ library under src/ is the
implementation of record and the CLI (`advlin`) drives the full experiments.
"""

from advlin._core import (  # noqa: F401
    Dataset,
    GaussianModel,
    LinearHypothesis,
    LossKind,
    RunStats,
    ShiftedModel,
    SignCensus,
    TrainConfig,
    TrainMode,
    adversarial_gradient,
    adversarial_loss,
    balanced_shifted_sample,
    bayes_accuracy_d,
    bayes_decision,
    bayes_error_1d,
    check_attraction,
    detect_cycle,
    erf,
    erf_oracle,
    evaluate_accuracy,
    evaluate_robust_accuracy,
    expected_step,
    init_hypothesis,
    loss_value,
    parse_loss,
    phi,
    s_choice,
    sample,
    sample_shifted,
    sign_census,
    simulate,
    train_epochs,
    train_intercept,
    train_streaming,
    worst_case_perturbation,
)

__version__ = "0.1.0"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "advlin/dynamics.hpp"
#include "advlin/experiments.hpp"
#include "advlin/losses.hpp"
#include "advlin/model.hpp"
#include "advlin/specfun.hpp"
#include "advlin/trainer.hpp"

namespace py = pybind11;
using namespace advlin;

namespace {

// Python callers pass rationals as "num/den" strings (or "0.001" decimals);
// results come back the same way plus a float approximation.
Rational rat(const std::string& text) { return parse_rational(text); }

std::vector<double> copy_features(const Dataset& data, std::size_t i) {
  const LabeledSample s = data[i];
  return {s.x.begin(), s.x.end()};
}

py::dict check_to_dict(const CheckResult& r) {
  py::dict d;
  const char* verdict = r.verdict == Verdict::kPass ? "pass"
                        : r.verdict == Verdict::kFail ? "fail"
                                                      : "n/a";
  d["verdict"] = verdict;
  d["index"] = r.index;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adversarially trained linear classifiers on Gaussian data";

  // specfun
  m.def("erf", &advlin::erf, py::arg("x"));
  m.def("phi", [](double x) { return phi(x).value(); }, py::arg("x"));
  m.def("erf_oracle", &erf_oracle, py::arg("x"), py::arg("tol") = 1e-12);

  // model
  py::class_<GaussianModel>(m, "GaussianModel")
      .def(py::init<std::size_t, std::vector<double>, double>(), py::arg("d"),
           py::arg("mu"), py::arg("sigma"))
      .def(py::init<std::size_t, double, double>(), py::arg("d"),
           py::arg("mu"), py::arg("sigma"))
      .def_readonly("d", &GaussianModel::d)
      .def_readonly("mu", &GaussianModel::mu)
      .def_readonly("sigma", &GaussianModel::sigma);

  py::class_<ShiftedModel>(m, "ShiftedModel")
      .def(py::init<std::size_t, std::vector<double>, std::vector<double>,
                    double>(),
           py::arg("d"), py::arg("mu1"), py::arg("mu2"), py::arg("sigma"))
      .def(py::init<double, double, double>(), py::arg("mu1"), py::arg("mu2"),
           py::arg("sigma"))
      .def_readonly("d", &ShiftedModel::d)
      .def_readonly("mu1", &ShiftedModel::mu1)
      .def_readonly("mu2", &ShiftedModel::mu2)
      .def_readonly("sigma", &ShiftedModel::sigma);

  py::class_<Dataset>(m, "Dataset")
      .def("__len__", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim)
      .def_property_readonly("seed", &Dataset::seed)
      .def("x", &copy_features, py::arg("i"))
      .def("y", [](const Dataset& d, std::size_t i) { return d[i].y; },
           py::arg("i"))
      .def("to_csv", &write_dataset_csv, py::arg("path"))
      .def_static("from_csv", &read_dataset_csv, py::arg("path"));

  m.def("sample", &advlin::sample, py::arg("model"), py::arg("seed"),
        py::arg("n"));
  m.def("sample_shifted", &sample_shifted, py::arg("model"), py::arg("seed"),
        py::arg("n"));
  m.def("balanced_shifted_sample", &balanced_shifted_sample, py::arg("model"),
        py::arg("seed"), py::arg("n"));
  m.def("bayes_error_1d",
        [](double mu, double sigma) { return bayes_error_1d(mu, sigma).value(); },
        py::arg("mu"), py::arg("sigma"));
  m.def("bayes_accuracy_d",
        [](const GaussianModel& model) { return bayes_accuracy_d(model).value(); },
        py::arg("model"));
  m.def("bayes_decision",
        [](const std::vector<double>& x, const std::vector<double>& mu,
           double sigma) {
          return bayes_decision(std::span<const double>(x),
                                std::span<const double>(mu), sigma);
        },
        py::arg("x"), py::arg("mu"), py::arg("sigma") = 1.0);

  // losses
  py::class_<LossKind>(m, "LossKind")
      .def_static("linear", &LossKind::linear)
      .def_static("cross_entropy", &LossKind::cross_entropy)
      .def_static("hinge", &LossKind::hinge, py::arg("margin"))
      .def_property_readonly("name", &LossKind::name)
      .def("__repr__",
           [](const LossKind& k) { return "LossKind(" + k.name() + ")"; });
  m.def("parse_loss", &parse_loss, py::arg("name"));

  py::class_<LinearHypothesis>(m, "LinearHypothesis")
      .def(py::init([](std::vector<double> theta, double bias) {
             return LinearHypothesis{std::move(theta), bias};
           }),
           py::arg("theta"), py::arg("bias") = 0.0)
      .def_readwrite("theta", &LinearHypothesis::theta)
      .def_readwrite("bias", &LinearHypothesis::bias);

  auto with_sample = [](const std::vector<double>& x, int y) {
    return LabeledSample{std::span<const double>(x), y};
  };
  m.def("loss_value",
        [with_sample](const LossKind& kind, const LinearHypothesis& h,
                      const std::vector<double>& x, int y) {
          return loss_value(kind, h, with_sample(x, y));
        },
        py::arg("kind"), py::arg("h"), py::arg("x"), py::arg("y"));
  m.def("worst_case_perturbation",
        [with_sample](const LossKind& kind, const LinearHypothesis& h,
                      const std::vector<double>& x, int y, double eps) {
          return worst_case_perturbation(kind, h, with_sample(x, y),
                                         AttackBudget(eps));
        },
        py::arg("kind"), py::arg("h"), py::arg("x"), py::arg("y"),
        py::arg("eps"));
  m.def("adversarial_loss",
        [with_sample](const LossKind& kind, const LinearHypothesis& h,
                      const std::vector<double>& x, int y, double eps) {
          return adversarial_loss(kind, h, with_sample(x, y),
                                  AttackBudget(eps));
        },
        py::arg("kind"), py::arg("h"), py::arg("x"), py::arg("y"),
        py::arg("eps"));
  m.def("adversarial_gradient",
        [with_sample](const LossKind& kind, const LinearHypothesis& h,
                      const std::vector<double>& x, int y, double eps) {
          return adversarial_gradient(kind, h, with_sample(x, y),
                                      AttackBudget(eps));
        },
        py::arg("kind"), py::arg("h"), py::arg("x"), py::arg("y"),
        py::arg("eps"));

  // dynamics (rationals as strings)
  m.def("expected_step",
        [](const std::string& theta, const std::string& eta,
           const std::string& mu, const std::string& eps) {
          return rational_to_string(
              expected_step(rat(theta), RecurrenceParams(rat(eta), rat(mu),
                                                         rat(eps))));
        },
        py::arg("theta"), py::arg("eta"), py::arg("mu"), py::arg("eps"));
  m.def("simulate",
        [](const std::string& theta0, const std::string& eta,
           const std::string& mu, const std::string& eps, std::int64_t steps) {
          const Trajectory t = simulate(
              rat(theta0), RecurrenceParams(rat(eta), rat(mu), rat(eps)),
              steps);
          std::vector<std::string> out;
          out.reserve(t.values.size());
          for (const auto& v : t.values) out.push_back(rational_to_string(v));
          return out;
        },
        py::arg("theta0"), py::arg("eta"), py::arg("mu"), py::arg("eps"),
        py::arg("steps"));
  m.def("sign_census",
        [](const std::vector<std::string>& values) {
          Trajectory t;
          for (const auto& v : values) t.values.push_back(rat(v));
          const SignCensus c = sign_census(t);
          py::dict d;
          d["positive"] = c.positive;
          d["negative"] = c.negative;
          d["zero"] = c.zero;
          return d;
        },
        py::arg("values"));
  m.def("s_choice",
        [](const std::string& t) { return s_choice(rat(t)); }, py::arg("t"));
  m.def("detect_cycle",
        [](const std::string& theta0, const std::string& eta,
           const std::string& mu, const std::string& eps,
           std::int64_t max_steps) -> std::optional<std::pair<std::int64_t, std::int64_t>> {
          const auto cycle = detect_cycle(
              rat(theta0), RecurrenceParams(rat(eta), rat(mu), rat(eps)),
              max_steps);
          if (!cycle) return std::nullopt;
          return std::make_pair(cycle->period, cycle->preperiod);
        },
        py::arg("theta0"), py::arg("eta"), py::arg("mu"), py::arg("eps"),
        py::arg("max_steps") = 1000000);
  m.def("check_attraction",
        [](const std::string& eta, const std::string& mu,
           const std::string& eps, const std::string& theta0,
           std::int64_t horizon) {
          return check_to_dict(check_attraction(
              RecurrenceParams(rat(eta), rat(mu), rat(eps)), rat(theta0),
              horizon));
        },
        py::arg("eta"), py::arg("mu"), py::arg("eps"), py::arg("theta0"),
        py::arg("horizon"));

  // trainer
  py::enum_<TrainMode>(m, "TrainMode")
      .value("STREAMING", TrainMode::kStreaming)
      .value("EPOCHS", TrainMode::kEpochs);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("eta", &TrainConfig::eta)
      .def_readwrite("epsilon", &TrainConfig::epsilon)
      .def_readwrite("loss", &TrainConfig::loss)
      .def_readwrite("mode", &TrainConfig::mode)
      .def_readwrite("iterations", &TrainConfig::iterations)
      .def_readwrite("n_train", &TrainConfig::n_train)
      .def_readwrite("n_test", &TrainConfig::n_test)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("init_sigma", &TrainConfig::init_sigma)
      .def_readwrite("learn_bias", &TrainConfig::learn_bias)
      .def_readwrite("shuffle", &TrainConfig::shuffle);

  py::class_<SignCensus>(m, "SignCensus")
      .def_readonly("positive", &SignCensus::positive)
      .def_readonly("negative", &SignCensus::negative)
      .def_readonly("zero", &SignCensus::zero);

  py::class_<RunStats>(m, "RunStats")
      .def_readonly("sign_counts", &RunStats::sign_counts)
      .def_readonly("theta_history", &RunStats::theta_history)
      .def_readonly("mean_theta", &RunStats::mean_theta)
      .def_readonly("test_accuracy", &RunStats::test_accuracy)
      .def_readonly("bias_history", &RunStats::bias_history)
      .def_readonly("final_theta", &RunStats::final_theta)
      .def_readonly("final_bias", &RunStats::final_bias);

  m.def("init_hypothesis", &init_hypothesis, py::arg("d"), py::arg("cfg"));
  m.def("train_streaming", &train_streaming, py::arg("model"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("train_epochs", &train_epochs, py::arg("model"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("train_intercept", &train_intercept, py::arg("model"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("evaluate_accuracy",
        [](const LinearHypothesis& h, const Dataset& data) {
          return evaluate_accuracy(h, data).value();
        },
        py::arg("h"), py::arg("data"));
  m.def("evaluate_robust_accuracy",
        [](const LinearHypothesis& h, const Dataset& data, double eps) {
          return evaluate_robust_accuracy(h, data, AttackBudget(eps)).value();
        },
        py::arg("h"), py::arg("data"), py::arg("eps"));
}

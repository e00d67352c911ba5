// Copyright 2026 The qsml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsml/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qsml/parallel.hpp"

namespace qsml {

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning rate must be positive");
  }
  if (!(fd_step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  if (!std::isfinite(threshold)) throw InvalidArgument("threshold must be finite");
}

int Metrics::total() const {
  return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
}

double loss(std::span<const double> h, std::span<const int> labels) {
  if (h.size() != labels.size()) {
    throw InvalidArgument("hypothesis and label counts differ");
  }
  if (h.empty()) throw InvalidArgument("loss of an empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double d = h[i] - double(labels[i]);
    sum += d * d;
  }
  return sum / double(h.size());
}

std::vector<int> labels_of(const QuantumDataset& data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const auto& s : data) out.push_back(s.label);
  return out;
}

namespace {

using Vec = AmplitudeVector<double>;
using Mat = DensityMatrix<double>;

void apply_raw(Vec& psi, std::size_t n, const GateOp& g, bool inverse = false) {
  kernels::apply(psi.data(), n, g, inverse);
}
void apply_raw(Mat& rho, std::size_t n, const GateOp& g, bool inverse = false) {
  conjugate_inplace(rho, n, g, inverse);
}

template <typename S>
void run_from(const CircuitTemplate& tmpl, const ParamVector& params, S& s,
              std::size_t first_gate) {
  const auto& gates = tmpl.gates();
  for (std::size_t k = first_gate; k < gates.size(); ++k) {
    apply_raw(s, tmpl.n_qubits(), gates[k].bind(params));
  }
}

template <typename S>
CovarianceParts parts_of(const S& s, std::size_t n, const Hypothesis& hyp) {
  if (hyp.kind == HypothesisKind::SingleObservable) {
    return {expectation_of(s, n, hyp.o1), 0.0, 0.0};
  }
  return {expectation_of(s, n, hyp.o1), expectation_of(s, n, hyp.o2),
          expectation_of(s, n, hyp.o1 * hyp.o2)};
}

double value_of(const CovarianceParts& p, const Hypothesis& hyp) {
  return hyp.kind == HypothesisKind::SingleObservable ? p.o1 : p.value();
}

template <typename S>
double forward_value(S s, const CircuitTemplate& tmpl, const ParamVector& params,
                     const Hypothesis& hyp) {
  run_from(tmpl, params, s, 0);
  return value_of(parts_of(s, tmpl.n_qubits(), hyp), hyp);
}

void require_rotation(const Placement& p) {
  if (p.kind != GateKind::RX && p.kind != GateKind::RY && p.kind != GateKind::RZ) {
    throw InvalidArgument("gradient rule does not support trainable " +
                          to_string(p.kind) + " gates");
  }
}

GateOp generator_of(const Placement& p) {
  const GateKind k = p.kind == GateKind::RX   ? GateKind::X
                     : p.kind == GateKind::RY ? GateKind::Y
                                              : GateKind::Z;
  return GateOp{k, p.qubits, std::nullopt};
}

// Two-point shift rule; the covariance derivative follows the product rule
// over its three expectations.
template <typename S>
HypothesisGradient shift_gradient(const S& input, const CircuitTemplate& tmpl,
                                  const ParamVector& params,
                                  const Hypothesis& hyp) {
  const std::size_t n = tmpl.n_qubits();
  HypothesisGradient out;
  out.gradient = Eigen::VectorXd::Zero(params.size());
  S full = input;
  run_from(tmpl, params, full, 0);
  const CovarianceParts base = parts_of(full, n, hyp);
  out.value = value_of(base, hyp);

  S prefix = input;
  const auto& gates = tmpl.gates();
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const auto& p = gates[k];
    const GateOp g = p.bind(params);
    if (p.slot != Placement::kFixed) {
      require_rotation(p);
      CovarianceParts shifted[2];
      for (int side = 0; side < 2; ++side) {
        GateOp gs = g;
        *gs.angle += side == 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
        S s = prefix;
        apply_raw(s, n, gs);
        run_from(tmpl, params, s, k + 1);
        shifted[side] = parts_of(s, n, hyp);
      }
      const double d1 = 0.5 * (shifted[0].o1 - shifted[1].o1);
      double grad = d1;
      if (hyp.kind == HypothesisKind::Covariance) {
        const double d2 = 0.5 * (shifted[0].o2 - shifted[1].o2);
        const double d12 = 0.5 * (shifted[0].o1o2 - shifted[1].o1o2);
        grad = d12 - d1 * base.o2 - base.o1 * d2;
      }
      out.gradient(p.slot) = grad;
    }
    apply_raw(prefix, n, g);
  }
  return out;
}

template <typename S>
HypothesisGradient fd_gradient(const S& input, const CircuitTemplate& tmpl,
                               const ParamVector& params, const Hypothesis& hyp,
                               double step) {
  HypothesisGradient out;
  out.value = forward_value(input, tmpl, params, hyp);
  out.gradient = Eigen::VectorXd::Zero(params.size());
  for (Eigen::Index k = 0; k < params.size(); ++k) {
    ParamVector plus = params;
    ParamVector minus = params;
    plus(k) += step;
    minus(k) -= step;
    out.gradient(k) = (forward_value(input, tmpl, plus, hyp) -
                       forward_value(input, tmpl, minus, hyp)) /
                      (2.0 * step);
  }
  return out;
}

// Observable whose plain expectation has the same parameter derivative as
// the hypothesis at the current point.
Observable effective_observable(const Hypothesis& hyp,
                                const CovarianceParts& base) {
  if (hyp.kind == HypothesisKind::SingleObservable) return hyp.o1;
  return hyp.o1 * hyp.o2 + (-base.o2) * hyp.o1 + (-base.o1) * hyp.o2;
}

// Reverse sweep: with phi and lambda = O phi both pulled back to just after
// gate g = exp(-i theta P / 2), dh/dtheta = Im <lambda| P |phi>.
HypothesisGradient adjoint_gradient(const Vec& input, const CircuitTemplate& tmpl,
                                    const ParamVector& params,
                                    const Hypothesis& hyp) {
  const std::size_t n = tmpl.n_qubits();
  HypothesisGradient out;
  out.gradient = Eigen::VectorXd::Zero(params.size());
  Vec phi = input;
  run_from(tmpl, params, phi, 0);
  const CovarianceParts base = parts_of(phi, n, hyp);
  out.value = value_of(base, hyp);
  Vec lambda = apply_observable<double>(effective_observable(hyp, base), phi, n);
  const auto& gates = tmpl.gates();
  Vec scratch(phi.size());
  for (std::size_t k = gates.size(); k-- > 0;) {
    const auto& p = gates[k];
    if (p.slot != Placement::kFixed) {
      require_rotation(p);
      scratch = phi;
      apply_raw(scratch, n, generator_of(p));
      out.gradient(p.slot) = lambda.dot(scratch).imag();
    }
    const GateOp g = p.bind(params);
    apply_raw(phi, n, g, /*inverse=*/true);
    apply_raw(lambda, n, g, /*inverse=*/true);
  }
  return out;
}

// Density-matrix form: dh/dtheta = Im Tr(Lambda P rho).
HypothesisGradient adjoint_gradient(const Mat& input, const CircuitTemplate& tmpl,
                                    const ParamVector& params,
                                    const Hypothesis& hyp) {
  const std::size_t n = tmpl.n_qubits();
  HypothesisGradient out;
  out.gradient = Eigen::VectorXd::Zero(params.size());
  Mat rho = input;
  run_from(tmpl, params, rho, 0);
  const CovarianceParts base = parts_of(rho, n, hyp);
  out.value = value_of(base, hyp);
  Mat lambda = observable_matrix<double>(effective_observable(hyp, base), n);
  const auto& gates = tmpl.gates();
  Mat scratch(rho.rows(), rho.cols());
  for (std::size_t k = gates.size(); k-- > 0;) {
    const auto& p = gates[k];
    if (p.slot != Placement::kFixed) {
      require_rotation(p);
      scratch = rho;
      const GateOp gen = generator_of(p);
      for (Eigen::Index c = 0; c < scratch.cols(); ++c) {
        kernels::apply(scratch.col(c).data(), n, gen);
      }
      out.gradient(p.slot) =
          lambda.transpose().cwiseProduct(scratch).sum().imag();
    }
    const GateOp g = p.bind(params);
    apply_raw(rho, n, g, /*inverse=*/true);
    apply_raw(lambda, n, g, /*inverse=*/true);
  }
  return out;
}

template <typename S>
HypothesisGradient gradient_for(const S& s, const CircuitTemplate& tmpl,
                                const ParamVector& params, const Hypothesis& hyp,
                                GradientMethod method, double fd_step) {
  switch (method) {
    case GradientMethod::ParameterShift:
      return shift_gradient(s, tmpl, params, hyp);
    case GradientMethod::FiniteDifference:
      return fd_gradient(s, tmpl, params, hyp, fd_step);
    case GradientMethod::Adjoint:
      return adjoint_gradient(s, tmpl, params, hyp);
  }
  throw InvalidArgument("unknown gradient method");
}

void check_compatible(const QuantumState& state, const CircuitTemplate& tmpl) {
  const std::size_t n =
      std::visit([](const auto& s) { return s.n_qubits(); }, state);
  if (n != tmpl.n_qubits()) {
    throw InvalidArgument("sample has " + std::to_string(n) +
                          " qubits, circuit expects " +
                          std::to_string(tmpl.n_qubits()));
  }
}

double raw_value(const QuantumState& state, const CircuitTemplate& tmpl,
                 const ParamVector& params, const Hypothesis& hyp) {
  check_compatible(state, tmpl);
  if (const auto* p = std::get_if<PureState>(&state)) {
    return forward_value(p->amplitudes(), tmpl, params, hyp);
  }
  return forward_value(std::get<MixedState>(state).matrix(), tmpl, params, hyp);
}

void require_both_classes(const QuantumDataset& data) {
  bool pos = false;
  bool neg = false;
  for (const auto& s : data) {
    pos |= s.label == kPositiveLabel;
    neg |= s.label == kNegativeLabel;
  }
  if (!pos || !neg) {
    throw InvalidArgument("training data must contain both classes");
  }
}

}  // namespace

std::vector<double> hypothesis_values(const QuantumDataset& data,
                                      const CircuitTemplate& tmpl,
                                      const ParamVector& params,
                                      const Hypothesis& hyp) {
  check_params(tmpl, params);
  hyp.validate(tmpl);
  std::vector<double> h(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    h[i] = raw_value(data[i].state, tmpl, params, hyp);
  });
  return h;
}

HypothesisGradient hypothesis_gradient(const QuantumState& state,
                                       const CircuitTemplate& tmpl,
                                       const ParamVector& params,
                                       const Hypothesis& hyp,
                                       GradientMethod method, double fd_step) {
  check_params(tmpl, params);
  hyp.validate(tmpl);
  check_compatible(state, tmpl);
  if (const auto* p = std::get_if<PureState>(&state)) {
    return gradient_for(p->amplitudes(), tmpl, params, hyp, method, fd_step);
  }
  return gradient_for(std::get<MixedState>(state).matrix(), tmpl, params, hyp,
                      method, fd_step);
}

LossGradient loss_gradient(const QuantumDataset& data,
                           const CircuitTemplate& tmpl,
                           const ParamVector& params, const Hypothesis& hyp,
                           const TrainingConfig& config) {
  if (data.empty()) throw InvalidArgument("loss of an empty dataset");
  std::vector<HypothesisGradient> per(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    per[i] = hypothesis_gradient(data[i].state, tmpl, params, hyp,
                                 config.gradient_method, config.fd_step);
  });
  LossGradient out;
  out.gradient = Eigen::VectorXd::Zero(params.size());
  out.h.reserve(data.size());
  const double scale = 2.0 / double(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.h.push_back(per[i].value);
    out.gradient += scale * (per[i].value - double(data[i].label)) * per[i].gradient;
  }
  out.loss = loss(out.h, labels_of(data));
  return out;
}

Eigen::VectorXd parameter_shift_grad(const QuantumDataset& data,
                                     const CircuitTemplate& tmpl,
                                     const ParamVector& params,
                                     const Hypothesis& hyp,
                                     const TrainingConfig& config) {
  TrainingConfig shift = config;
  shift.gradient_method = GradientMethod::ParameterShift;
  return loss_gradient(data, tmpl, params, hyp, shift).gradient;
}

TrainedModel gradient_descent(const QuantumDataset& data,
                              const CircuitTemplate& tmpl,
                              const Hypothesis& hyp,
                              const TrainingConfig& config) {
  return gradient_descent(data, tmpl, hyp, config,
                          initial_params(tmpl, config.seed, config.init_scale));
}

TrainedModel gradient_descent(const QuantumDataset& data,
                              const CircuitTemplate& tmpl,
                              const Hypothesis& hyp,
                              const TrainingConfig& config,
                              ParamVector params) {
  config.validate();
  hyp.validate(tmpl);
  if (data.empty()) throw InvalidArgument("training data is empty");
  require_both_classes(data);
  check_params(tmpl, params);
  std::vector<double> trace;
  trace.reserve(config.iterations + 1);
  const double step = config.learning_rate *
      (config.reduction == LossReduction::Sum ? double(data.size()) : 1.0);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const LossGradient lg = loss_gradient(data, tmpl, params, hyp, config);
    if (!std::isfinite(lg.loss) || !lg.gradient.allFinite()) {
      throw NumericalError("non-finite loss or gradient at iteration " +
                           std::to_string(it));
    }
    trace.push_back(lg.loss);
    params -= step * lg.gradient;
    if (!params.allFinite()) {
      throw NumericalError("parameters diverged at iteration " + std::to_string(it));
    }
  }
  const double final_loss =
      loss(hypothesis_values(data, tmpl, params, hyp), labels_of(data));
  if (!std::isfinite(final_loss)) throw NumericalError("non-finite final loss");
  trace.push_back(final_loss);
  return TrainedModel{tmpl, std::move(params), hyp, config.threshold,
                      std::move(trace)};
}

int classify_value(double h, double threshold) {
  return h >= threshold ? kPositiveLabel : kNegativeLabel;
}

int classify(const TrainedModel& model, const EncodedSample& sample) {
  return classify_value(
      eval_hypothesis(sample.state, model.tmpl, model.params, model.hypothesis),
      model.threshold);
}

Metrics metrics_from(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size() || truth.empty()) {
    throw InvalidArgument("metrics need equal, nonempty label lists");
  }
  Metrics m;
  int correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m.confusion[class_index(truth[i])][class_index(predicted[i])];
    correct += truth[i] == predicted[i] ? 1 : 0;
  }
  m.accuracy = double(correct) / double(truth.size());
  return m;
}

Metrics evaluate(const TrainedModel& model, const QuantumDataset& data) {
  if (data.empty()) throw InvalidArgument("cannot evaluate on an empty dataset");
  const auto h = hypothesis_values(data, model.tmpl, model.params, model.hypothesis);
  std::vector<int> predicted;
  predicted.reserve(h.size());
  for (double v : h) predicted.push_back(classify_value(v, model.threshold));
  return metrics_from(labels_of(data), predicted);
}

namespace {
std::vector<std::size_t> indices_with(std::span<const int> labels, int label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  std::shuffle(v.begin(), v.end(), rng);
}
}  // namespace

std::vector<std::size_t> stratified_draw(std::span<const int> labels,
                                         std::size_t n, std::mt19937_64& rng) {
  if (n > labels.size()) {
    throw InvalidArgument("cannot draw " + std::to_string(n) + " of " +
                          std::to_string(labels.size()) + " samples");
  }
  auto pos = indices_with(labels, kPositiveLabel);
  auto neg = indices_with(labels, kNegativeLabel);
  shuffle(pos, rng);
  shuffle(neg, rng);
  std::size_t n_pos = n / 2;
  std::size_t n_neg = n / 2;
  if (n % 2 == 1) (rng() & 1 ? n_pos : n_neg) += 1;
  // Move any shortfall to the other class.
  if (n_pos > pos.size()) { n_neg += n_pos - pos.size(); n_pos = pos.size(); }
  if (n_neg > neg.size()) { n_pos += n_neg - neg.size(); n_neg = neg.size(); }
  std::vector<std::size_t> out(pos.begin(), pos.begin() + std::ptrdiff_t(n_pos));
  out.insert(out.end(), neg.begin(), neg.begin() + std::ptrdiff_t(n_neg));
  std::sort(out.begin(), out.end());
  return out;
}

Split train_test_split(std::span<const int> labels, double train_fraction,
                       bool stratified, std::mt19937_64& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train fraction must lie in (0, 1)");
  }
  const std::size_t total = labels.size();
  const auto n_train = std::size_t(std::lround(train_fraction * double(total)));
  const std::size_t n_test = total - n_train;
  Split split;
  if (!stratified) {
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), 0);
    shuffle(all, rng);
    split.test.assign(all.begin(), all.begin() + std::ptrdiff_t(n_test));
    split.train.assign(all.begin() + std::ptrdiff_t(n_test), all.end());
  } else {
    std::array<std::vector<std::size_t>, 2> groups{
        indices_with(labels, kPositiveLabel), indices_with(labels, kNegativeLabel)};
    std::array<std::size_t, 2> quota{};
    std::array<double, 2> remainder{};
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
      const double exact =
          double(n_test) * double(groups[c].size()) / double(total);
      quota[c] = std::size_t(std::floor(exact));
      remainder[c] = exact - double(quota[c]);
      assigned += quota[c];
    }
    while (assigned < n_test) {
      int c = remainder[0] > remainder[1]   ? 0
              : remainder[1] > remainder[0] ? 1
                                            : int(rng() & 1);
      if (quota[c] >= groups[c].size()) c = 1 - c;
      ++quota[c];
      remainder[c] = -1.0;
      ++assigned;
    }
    for (int c = 0; c < 2; ++c) {
      shuffle(groups[c], rng);
      split.test.insert(split.test.end(), groups[c].begin(),
                        groups[c].begin() + std::ptrdiff_t(quota[c]));
      split.train.insert(split.train.end(),
                         groups[c].begin() + std::ptrdiff_t(quota[c]),
                         groups[c].end());
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

QuantumDataset subset(const QuantumDataset& data,
                      std::span<const std::size_t> indices) {
  QuantumDataset out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(data.at(i));
  return out;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of an empty list");
  std::sort(values.begin(), values.end());
  const double pos = p * double(values.size() - 1);
  const auto lo = std::size_t(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - double(lo)) * (values[hi] - values[lo]);
}

std::vector<LearningCurveSummary> summarize(
    const std::vector<LearningCurveRow>& rows) {
  std::vector<std::size_t> counts;
  for (const auto& r : rows) counts.push_back(r.n_samples);
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  std::vector<LearningCurveSummary> out;
  for (std::size_t n : counts) {
    std::vector<double> acc;
    for (const auto& r : rows) {
      if (r.n_samples == n) acc.push_back(r.full_accuracy);
    }
    out.push_back({n, quantile(acc, 0.5), quantile(acc, 0.25), quantile(acc, 0.75)});
  }
  return out;
}

LearningCurve learning_curve(const QuantumDataset& data,
                             const CircuitTemplate& tmpl, const Hypothesis& hyp,
                             const TrainingConfig& config,
                             const LearningCurveSpec& spec) {
  const auto labels = labels_of(data);
  for (std::size_t n : spec.sample_counts) {
    if (n > data.size()) {
      throw InvalidArgument("sample count " + std::to_string(n) +
                            " exceeds the dataset size");
    }
  }
  LearningCurve curve;
  const std::size_t n_seeds = spec.seeds.size();
  curve.rows.resize(spec.sample_counts.size() * n_seeds);
  parallel_for(curve.rows.size(), [&](std::size_t job) {
    const std::size_t n = spec.sample_counts[job / n_seeds];
    const std::uint64_t seed = spec.seeds[job % n_seeds];
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (n + 1)));
    const auto train_idx = stratified_draw(labels, n, rng);
    std::vector<std::size_t> held;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!std::binary_search(train_idx.begin(), train_idx.end(), i)) {
        held.push_back(i);
      }
    }
    TrainingConfig cfg = config;
    cfg.seed = seed;
    const auto train = subset(data, train_idx);
    const auto model = gradient_descent(train, tmpl, hyp, cfg);
    LearningCurveRow& row = curve.rows[job];
    row.n_samples = n;
    row.seed = seed;
    row.train_accuracy = evaluate(model, train).accuracy;
    row.full_accuracy = evaluate(model, data).accuracy;
    if (!held.empty()) row.heldout_accuracy = evaluate(model, subset(data, held)).accuracy;
    row.loss_trace = model.training_trace;
  });
  curve.summary = summarize(curve.rows);
  return curve;
}

}  // namespace qsml

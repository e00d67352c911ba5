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

#include "qsml/experiment.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qsml/parallel.hpp"

namespace qsml {

using json = nlohmann::json;

namespace {

template <typename E>
struct Names {
  std::vector<std::pair<E, const char*>> entries;

  const char* name(E e) const {
    for (const auto& [k, v] : entries) {
      if (k == e) return v;
    }
    throw InvalidArgument("unnamed enum value");
  }
  E parse(const std::string& s, const char* what) const {
    for (const auto& [k, v] : entries) {
      if (s == v) return k;
    }
    throw InvalidArgument(std::string("unknown ") + what + " '" + s + "'");
  }
};

const Names<Basis> kBasis{{{Basis::Real, "real"}, {Basis::Fourier, "fourier"}}};
const Names<KeptHalf> kHalf{{{KeptHalf::LowOrder, "low"}, {KeptHalf::HighOrder, "high"}}};
const Names<SubsampleMode> kSubsample{
    {{SubsampleMode::Stride, "stride"}, {SubsampleMode::BlockMean, "block_mean"}}};
const Names<AnsatzKind> kAnsatz{
    {{AnsatzKind::Dqnn, "dqnn"}, {AnsatzKind::DoubleQcnn, "double_qcnn"}}};
const Names<HypothesisKind> kHypothesis{{{HypothesisKind::SingleObservable, "single"},
                                         {HypothesisKind::Covariance, "covariance"}}};
const Names<GradientMethod> kGradient{
    {{GradientMethod::ParameterShift, "parameter_shift"},
     {GradientMethod::FiniteDifference, "finite_difference"},
     {GradientMethod::Adjoint, "adjoint"}}};
const Names<LossReduction> kReduction{
    {{LossReduction::Mean, "mean"}, {LossReduction::Sum, "sum"}}};
const Names<Pauli> kPauli{{{Pauli::X, "X"}, {Pauli::Y, "Y"}, {Pauli::Z, "Z"}}};

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw InvalidArgument("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

ExperimentSpec spec_from_object(const json& j) {
  reject_unknown(j,
                 {"name", "problem", "dataset_seed", "basis", "coarse_grain",
                  "kept_half", "keep_fraction", "ansatz", "depth",
                  "allow_any_ansatz", "hypothesis", "paulis", "training",
                  "split", "seeds", "sample_counts", "flow_encoding",
                  "output_dir"},
                 "experiment spec");
  ExperimentSpec s;
  read(j, "name", s.name);
  if (j.contains("problem")) s.problem = problem_from_string(j.at("problem").get<std::string>());
  read(j, "dataset_seed", s.dataset_seed);
  if (j.contains("basis")) s.encoding.basis = kBasis.parse(j.at("basis"), "basis");
  read(j, "coarse_grain", s.encoding.coarse_grain);
  if (j.contains("kept_half")) s.encoding.kept_half = kHalf.parse(j.at("kept_half"), "kept half");
  read(j, "keep_fraction", s.encoding.keep_fraction);
  s.ansatz = j.contains("ansatz") ? kAnsatz.parse(j.at("ansatz"), "ansatz")
             : s.problem == Problem::Waves ? AnsatzKind::Dqnn
                                            : AnsatzKind::DoubleQcnn;
  read(j, "depth", s.depth);
  read(j, "allow_any_ansatz", s.allow_any_ansatz);
  if (j.contains("hypothesis")) {
    s.hypothesis = kHypothesis.parse(j.at("hypothesis"), "hypothesis");
  }
  if (j.contains("paulis")) {
    const auto& p = j.at("paulis");
    if (!p.is_array() || p.empty() || p.size() > 2) {
      throw InvalidArgument("paulis must list one or two of X, Y, Z");
    }
    s.pauli1 = kPauli.parse(p.at(0), "pauli");
    s.pauli2 = p.size() > 1 ? kPauli.parse(p.at(1), "pauli") : s.pauli1;
  }
  if (j.contains("training")) {
    const auto& t = j.at("training");
    reject_unknown(t,
                   {"learning_rate", "iterations", "gradient", "threshold",
                    "fd_step", "init_scale", "reduction"},
                   "training");
    read(t, "learning_rate", s.training.learning_rate);
    read(t, "iterations", s.training.iterations);
    if (t.contains("gradient")) {
      s.training.gradient_method = kGradient.parse(t.at("gradient"), "gradient method");
    }
    read(t, "threshold", s.training.threshold);
    read(t, "fd_step", s.training.fd_step);
    read(t, "init_scale", s.training.init_scale);
    if (t.contains("reduction")) {
      s.training.reduction = kReduction.parse(t.at("reduction"), "loss reduction");
    }
  }
  if (j.contains("split")) {
    const auto& sp = j.at("split");
    reject_unknown(sp, {"train_fraction", "stratified"}, "split");
    read(sp, "train_fraction", s.train_fraction);
    read(sp, "stratified", s.stratified);
  }
  read(j, "seeds", s.seeds);
  read(j, "sample_counts", s.sample_counts);
  if (j.contains("flow_encoding")) {
    const auto& f = j.at("flow_encoding");
    reject_unknown(f,
                   {"truncate_fraction", "subsample_rows", "subsample_cols",
                    "subsample_mode", "activation", "tanh_a", "tanh_b"},
                   "flow_encoding");
    auto& e = s.encoding;
    read(f, "truncate_fraction", e.truncate_fraction);
    read(f, "subsample_rows", e.subsample_rows);
    read(f, "subsample_cols", e.subsample_cols);
    if (f.contains("subsample_mode")) {
      e.subsample_mode = kSubsample.parse(f.at("subsample_mode"), "subsample mode");
    }
    read(f, "activation", e.activation);
    read(f, "tanh_a", e.tanh_a);
    if (f.contains("tanh_b") && !f.at("tanh_b").is_null()) {
      e.tanh_b = f.at("tanh_b").get<double>();
    }
  }
  read(j, "output_dir", s.output_dir);
  s.validate();
  return s;
}

json spec_to_object(const ExperimentSpec& s) {
  const auto& e = s.encoding;
  json j;
  j["name"] = s.name;
  j["problem"] = to_string(s.problem);
  j["dataset_seed"] = s.dataset_seed;
  j["basis"] = kBasis.name(e.basis);
  j["coarse_grain"] = e.coarse_grain;
  j["kept_half"] = kHalf.name(e.kept_half);
  j["keep_fraction"] = e.keep_fraction;
  j["ansatz"] = kAnsatz.name(s.ansatz);
  j["depth"] = s.depth;
  j["allow_any_ansatz"] = s.allow_any_ansatz;
  j["hypothesis"] = kHypothesis.name(s.hypothesis);
  j["paulis"] = {kPauli.name(s.pauli1), kPauli.name(s.pauli2)};
  j["training"] = {{"learning_rate", s.training.learning_rate},
                   {"iterations", s.training.iterations},
                   {"gradient", kGradient.name(s.training.gradient_method)},
                   {"threshold", s.training.threshold},
                   {"fd_step", s.training.fd_step},
                   {"init_scale", s.training.init_scale},
                   {"reduction", kReduction.name(s.training.reduction)}};
  j["split"] = {{"train_fraction", s.train_fraction}, {"stratified", s.stratified}};
  j["seeds"] = s.seeds;
  j["sample_counts"] = s.sample_counts;
  j["flow_encoding"] = {{"truncate_fraction", e.truncate_fraction},
                        {"subsample_rows", e.subsample_rows},
                        {"subsample_cols", e.subsample_cols},
                        {"subsample_mode", kSubsample.name(e.subsample_mode)},
                        {"activation", e.activation},
                        {"tanh_a", e.tanh_a},
                        {"tanh_b", e.tanh_b ? json(*e.tanh_b) : json(nullptr)}};
  j["output_dir"] = s.output_dir;
  return j;
}

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string(what) + " is not valid JSON: " + ex.what());
  }
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (name.empty()) throw InvalidArgument("spec name must not be empty");
  const AnsatzKind expected =
      problem == Problem::Waves ? AnsatzKind::Dqnn : AnsatzKind::DoubleQcnn;
  if (ansatz != expected && !allow_any_ansatz) {
    throw InvalidArgument(to_string(problem) + " runs use the " +
                          kAnsatz.name(expected) +
                          " ansatz unless allow_any_ansatz is set");
  }
  if (ansatz == AnsatzKind::Dqnn && depth == 0) {
    throw InvalidArgument("dqnn depth must be positive");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train_fraction must lie in (0, 1)");
  }
  if (seeds.empty()) throw InvalidArgument("at least one seed is required");
  if (!(encoding.keep_fraction > 0.0 && encoding.keep_fraction <= 1.0)) {
    throw InvalidArgument("keep_fraction must lie in (0, 1]");
  }
  for (std::size_t n : sample_counts) {
    if (n < 2) throw InvalidArgument("sample counts must be at least 2");
  }
  training.validate();
}

ExperimentSpec spec_from_json(const std::string& text) {
  const json j = parse(text, "experiment spec");
  try {
    return spec_from_object(j);
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed experiment spec: ") + ex.what());
  }
}

std::string spec_to_json(const ExperimentSpec& spec) {
  return spec_to_object(spec).dump(2) + "\n";
}

std::uint64_t spec_digest(const ExperimentSpec& spec) {
  json j = spec_to_object(spec);
  j.erase("name");
  j.erase("output_dir");
  return fnv1a(j.dump());
}

double RunResult::mean_test_accuracy() const {
  if (is_learning_curve()) {
    if (curve.rows.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& r : curve.rows) sum += r.full_accuracy;
    return sum / double(curve.rows.size());
  }
  if (seeds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : seeds) sum += s.test.accuracy;
  return sum / double(seeds.size());
}

std::array<std::array<double, 2>, 2> RunResult::mean_test_confusion() const {
  std::array<std::array<double, 2>, 2> out{};
  if (seeds.empty()) return out;
  for (const auto& s : seeds) {
    for (int t = 0; t < 2; ++t) {
      for (int p = 0; p < 2; ++p) out[t][p] += s.test.confusion[t][p];
    }
  }
  for (auto& row : out) {
    for (auto& v : row) v /= double(seeds.size());
  }
  return out;
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("QSML_OUTPUT_ROOT"); env && *env) return env;
  return "qsml-out";
}

Dataset load_or_build_dataset(Problem problem, std::uint64_t seed,
                              const std::filesystem::path& cache_dir) {
  const std::uint64_t digest = default_generator_digest(problem, seed);
  const auto path = cache_dir / (to_string(problem) + "-" + std::to_string(seed) +
                                 "-" + hex16(digest) + ".qsd");
  if (std::filesystem::exists(path)) {
    try {
      Dataset cached = read_dataset(path);
      if (cached.generator_digest == digest) return cached;
    } catch (const IoError&) {
      // Unreadable cache entries are rebuilt below.
    }
  }
  Dataset ds = build_dataset(problem, seed);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  if (ec) throw IoError("cannot create cache directory " + cache_dir.string());
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  write_dataset(ds, tmp);
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move dataset into " + path.string());
  return ds;
}

QuantumDataset encode_dataset(const Dataset& ds, const ExperimentSpec& spec) {
  std::vector<std::optional<EncodedSample>> slots(ds.samples.size());
  parallel_for(slots.size(), [&](std::size_t i) {
    slots[i] = ds.problem == Problem::Waves ? encode_wave(ds.samples[i], spec.encoding)
                                            : encode_flow(ds.samples[i], spec.encoding);
  });
  QuantumDataset out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

CircuitTemplate build_template(const ExperimentSpec& spec,
                               const RegisterLayout& layout) {
  if (spec.ansatz == AnsatzKind::Dqnn) {
    std::size_t n = 0;
    for (const auto& r : layout) n += r.size;
    return build_dqnn(n, spec.depth, layout.front().name);
  }
  if (layout.size() != 2) {
    throw InvalidArgument("the double QCNN needs a two-register encoding");
  }
  return build_double_qcnn(find_register(layout, "x").size,
                           find_register(layout, "y").size);
}

Hypothesis build_hypothesis(const ExperimentSpec& spec, const CircuitTemplate& tmpl) {
  return spec.hypothesis == HypothesisKind::SingleObservable
             ? Hypothesis::single(tmpl, spec.pauli1)
             : Hypothesis::covariance(tmpl, spec.pauli1, spec.pauli2);
}

RunResult run_experiment(const ExperimentSpec& spec, const Dataset& data) {
  spec.validate();
  data.validate();
  if (data.problem != spec.problem) {
    throw InvalidArgument("spec is for " + to_string(spec.problem) +
                          " but the dataset holds " + to_string(data.problem));
  }
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.name = spec.name;
  result.spec = spec;
  result.spec_digest = spec_digest(spec);
  result.dataset_digest = data.generator_digest;

  const QuantumDataset encoded = encode_dataset(data, spec);
  const CircuitTemplate tmpl = build_template(spec, encoded.front().registers());
  const Hypothesis hyp = build_hypothesis(spec, tmpl);
  hyp.validate(tmpl);

  if (!spec.sample_counts.empty()) {
    result.curve = learning_curve(encoded, tmpl, hyp, spec.training,
                                  {spec.sample_counts, spec.seeds});
  } else {
    const auto labels = labels_of(encoded);
    result.seeds.resize(spec.seeds.size());
    parallel_for(spec.seeds.size(), [&](std::size_t k) {
      const std::uint64_t seed = spec.seeds[k];
      std::mt19937_64 rng(seed);
      const Split split = train_test_split(labels, spec.train_fraction, spec.stratified, rng);
      TrainingConfig cfg = spec.training;
      cfg.seed = seed;
      const auto train = subset(encoded, split.train);
      const auto model = gradient_descent(train, tmpl, hyp, cfg);
      SeedResult& r = result.seeds[k];
      r.seed = seed;
      r.train = evaluate(model, train);
      r.test = evaluate(model, subset(encoded, split.test));
      r.loss_trace = model.training_trace;
    });
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunResult run_experiment(const ExperimentSpec& spec,
                         const std::filesystem::path& cache_dir) {
  spec.validate();
  return run_experiment(spec, load_or_build_dataset(spec.problem, spec.dataset_seed, cache_dir));
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig2c", "fig2d", "fig4b",
                                            "fig4c", "fig4d", "fig4e"};
  return ids;
}

FigurePreset preset_from_json(const std::string& text) {
  const json j = parse(text, "figure preset");
  try {
    reject_unknown(j, {"figure", "description", "scenarios"}, "figure preset");
    FigurePreset preset;
    preset.figure = j.at("figure").get<std::string>();
    const auto& scenarios = j.at("scenarios");
    if (!scenarios.is_array() || scenarios.empty()) {
      throw InvalidArgument("a preset needs at least one scenario");
    }
    std::set<std::string> names;
    for (const auto& s : scenarios) {
      preset.scenarios.push_back(spec_from_object(s));
      if (!names.insert(preset.scenarios.back().name).second) {
        throw InvalidArgument("duplicate scenario name '" +
                              preset.scenarios.back().name + "'");
      }
    }
    return preset;
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed figure preset: ") + ex.what());
  }
}

FigurePreset load_preset(const std::string& figure,
                         const std::filesystem::path& preset_dir) {
  const auto& ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), figure) == ids.end()) {
    throw InvalidArgument("unknown figure id '" + figure + "'");
  }
  const auto path = preset_dir / (figure + ".json");
  std::ifstream in(path);
  if (!in) throw IoError("cannot read preset " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  FigurePreset preset = preset_from_json(buf.str());
  if (preset.figure != figure) {
    throw InvalidArgument("preset " + path.string() + " is labelled '" +
                          preset.figure + "'");
  }
  return preset;
}

FigureResult reproduce(const std::string& figure,
                       const std::filesystem::path& preset_dir,
                       const std::filesystem::path& cache_dir) {
  const FigurePreset preset = load_preset(figure, preset_dir);
  FigureResult out;
  out.figure = figure;
  for (const auto& spec : preset.scenarios) {
    out.runs.push_back(run_experiment(spec, cache_dir));
  }
  return out;
}

}  // namespace qsml

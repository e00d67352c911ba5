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

// qsml command line: gen-data, train, reproduce, export.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qsml/export.hpp"

#ifndef QSML_PRESET_DIR
#define QSML_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace qsml;

namespace {

constexpr int kExitInvalid = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_summary(const FigureResult& result) {
  for (const auto& run : result.runs) {
    std::printf("%s: ", run.name.c_str());
    if (run.is_learning_curve()) {
      std::printf("learning curve");
      for (const auto& s : run.curve.summary) {
        std::printf(" n=%zu:%.3f", s.n_samples, s.median);
      }
      std::printf("\n");
    } else {
      std::printf("mean test accuracy %.4f over %zu seeds\n",
                  run.mean_test_accuracy(), run.seeds.size());
    }
  }
}

void write_outputs(FigureResult& result, const fs::path& out, ExportFormat format) {
  write_result(result, out);
  write_timing(result, out);
  export_plot_data(result, format, out);
  print_summary(result);
  std::printf("wrote %s\n", out.string().c_str());
}

struct Overrides {
  std::optional<std::string> name;
  std::vector<std::uint64_t> seeds;
  std::optional<std::size_t> iterations;
  std::optional<double> learning_rate;
  std::optional<std::string> basis;
  std::optional<bool> coarse_grain;
  std::optional<std::uint64_t> dataset_seed;
  std::optional<double> train_fraction;
  bool no_stratify = false;
  bool allow_any_ansatz = false;
};

void apply(ExperimentSpec& spec, const Overrides& o) {
  if (o.name) spec.name = *o.name;
  if (!o.seeds.empty()) spec.seeds = o.seeds;
  if (o.iterations) spec.training.iterations = *o.iterations;
  if (o.learning_rate) spec.training.learning_rate = *o.learning_rate;
  if (o.basis) spec.encoding.basis = *o.basis == "fourier" ? Basis::Fourier : Basis::Real;
  if (o.coarse_grain) spec.encoding.coarse_grain = *o.coarse_grain;
  if (o.dataset_seed) spec.dataset_seed = *o.dataset_seed;
  if (o.train_fraction) spec.train_fraction = *o.train_fraction;
  if (o.no_stratify) spec.stratified = false;
  if (o.allow_any_ansatz) spec.allow_any_ansatz = true;
  spec.validate();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum scientific machine learning experiments"};
  app.require_subcommand(1);

  std::string format_name = "csv";
  std::string cache;

  auto* gen = app.add_subcommand("gen-data", "Generate and save a labelled dataset");
  std::string gen_problem;
  std::uint64_t gen_seed = 2024;
  std::string gen_out;
  gen->add_option("problem", gen_problem, "waves or flow")->required();
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output file (.qsd)");

  auto* train = app.add_subcommand("train", "Run one experiment spec");
  std::string spec_path;
  std::string train_out;
  Overrides ov;
  train->add_option("--spec", spec_path, "Spec file (JSON)")->required();
  train->add_option("--out", train_out, "Output directory");
  train->add_option("--cache", cache, "Dataset cache directory");
  train->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  train->add_option("--name", ov.name);
  train->add_option("--seeds", ov.seeds)->delimiter(',');
  train->add_option("--iterations", ov.iterations);
  train->add_option("--learning-rate", ov.learning_rate);
  train->add_option("--basis", ov.basis)->check(CLI::IsMember({"real", "fourier"}));
  train->add_option("--coarse-grain", ov.coarse_grain);
  train->add_option("--dataset-seed", ov.dataset_seed);
  train->add_option("--train-fraction", ov.train_fraction);
  train->add_flag("--no-stratify", ov.no_stratify, "Plain random split");
  train->add_flag("--allow-any-ansatz", ov.allow_any_ansatz);

  auto* repro = app.add_subcommand("reproduce", "Run a committed figure preset");
  std::string figure;
  std::string repro_out;
  std::string preset_dir = QSML_PRESET_DIR;
  repro->add_option("figure", figure, "fig2c, fig2d, fig4b, fig4c, fig4d or fig4e")->required();
  repro->add_option("--out", repro_out, "Output directory");
  repro->add_option("--presets", preset_dir, "Preset directory");
  repro->add_option("--cache", cache, "Dataset cache directory");
  repro->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* exp = app.add_subcommand("export", "Write plot tables from a saved result.json");
  std::string result_path;
  std::string export_out;
  exp->add_option("--result", result_path, "result.json from train or reproduce")->required();
  exp->add_option("--format", format_name, "csv or json")
      ->required()
      ->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--out", export_out, "Output directory (default: next to the result)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    const fs::path root = default_output_root();
    const fs::path cache_dir = cache.empty() ? root / "cache" : fs::path(cache);
    const ExportFormat format = export_format_from_string(format_name);

    if (*gen) {
      const Problem problem = problem_from_string(gen_problem);
      const Dataset ds = build_dataset(problem, gen_seed);
      const fs::path out = gen_out.empty()
          ? root / "data" / (gen_problem + "-" + std::to_string(gen_seed) + ".qsd")
          : fs::path(gen_out);
      write_dataset(ds, out);
      std::printf("%zu samples (%zu +1, %zu -1) -> %s\n", ds.samples.size(),
                  ds.count(kPositiveLabel), ds.count(kNegativeLabel), out.string().c_str());
    } else if (*train) {
      ExperimentSpec spec = spec_from_json(read_file(spec_path));
      apply(spec, ov);
      FigureResult result;
      result.figure = spec.name;
      result.runs.push_back(run_experiment(spec, cache_dir));
      const fs::path out = !train_out.empty()        ? fs::path(train_out)
                           : !spec.output_dir.empty() ? fs::path(spec.output_dir)
                                                      : root / spec.name;
      write_outputs(result, out, format);
    } else if (*repro) {
      FigureResult result = reproduce(figure, preset_dir, cache_dir);
      write_outputs(result, repro_out.empty() ? root / figure : fs::path(repro_out), format);
    } else if (*exp) {
      FigureResult result = read_result(result_path);
      const fs::path out =
          export_out.empty() ? fs::path(result_path).parent_path() : fs::path(export_out);
      for (const auto& p : export_plot_data(result, format, out.empty() ? "." : out)) {
        std::printf("%s\n", p.string().c_str());
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qsml: %s\n", e.what());
    return exit_code_for(e);
  }
  return 0;
}

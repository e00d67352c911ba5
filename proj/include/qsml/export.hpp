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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qsml/experiment.hpp"

namespace qsml {

enum class ExportFormat { Csv, Json };

ExportFormat export_format_from_string(std::string_view s);

/// printf("%.17g"); enough digits to read back the same double.
std::string format_double(double v);

/// Full structured dump. Excludes wall-clock time so equal runs give equal
/// bytes.
std::string result_to_json(const FigureResult& result);
FigureResult result_from_json(const std::string& text);

/// <dir>/result.json
std::filesystem::path write_result(const FigureResult& result,
                                   const std::filesystem::path& dir);
FigureResult read_result(const std::filesystem::path& path);

/// <dir>/timing.json, the only file carrying wall-clock seconds.
std::filesystem::path write_timing(const FigureResult& result,
                                   const std::filesystem::path& dir);

/// Plot-ready tables, one file per panel:
///   runs               scenario, problem, basis, coarse_grain, spec_digest, dataset_digest
///   learning_curve     scenario, n_samples, seed, accuracy, train_accuracy, heldout_accuracy
///   learning_summary   scenario, n_samples, median_acc, q1, q3
///   split_metrics      scenario, seed, train_accuracy, test_accuracy, n_test
///   confusion_<name>   true_label, predicted_label, count (mean over seeds)
///   loss_traces        scenario, n_samples, seed, iteration, loss
/// Tables with no rows are skipped. Returns the written paths and records
/// them in result.artifacts.
std::vector<std::filesystem::path> export_plot_data(
    FigureResult& result, ExportFormat format, const std::filesystem::path& dir);

}  // namespace qsml

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

#include "qsml/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qsml {

using json = nlohmann::json;

namespace {

struct Cell {
  std::string text;
  bool numeric = true;  // unquoted in JSON
};

Cell num(double v) { return {format_double(v), true}; }
Cell num(std::uint64_t v) { return {std::to_string(v), true}; }
Cell num(int v) { return {std::to_string(v), true}; }
Cell str(std::string s) { return {std::move(s), false}; }
Cell null_cell() { return {"", true}; }

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    out += (c ? "," : "") + t.columns[c];
  }
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += (c ? "," : "") + csv_escape(row[c].text);
    }
    out += "\n";
  }
  return out;
}

std::string to_json(const Table& t) {
  std::string out = "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += "  {";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const Cell& cell = t.rows[r][c];
      out += (c ? ", " : "") + json(t.columns[c]).dump() + ": ";
      if (!cell.numeric) {
        out += json(cell.text).dump();
      } else {
        out += cell.text.empty() ? "null" : cell.text;
      }
    }
    out += r + 1 < t.rows.size() ? "},\n" : "}\n";
  }
  return out + "]\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw InvalidArgument("bad digest '" + s + "'");
  return v;
}

json metrics_json(const Metrics& m) {
  return {{"accuracy", m.accuracy}, {"confusion", m.confusion}};
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.accuracy = j.at("accuracy").get<double>();
  m.confusion = j.at("confusion").get<std::array<std::array<int, 2>, 2>>();
  return m;
}

std::vector<Table> build_tables(const FigureResult& result) {
  Table runs{"runs", {"scenario", "problem", "basis", "coarse_grain", "spec_digest", "dataset_digest"}, {}};
  Table curve{"learning_curve",
              {"scenario", "n_samples", "seed", "accuracy", "train_accuracy", "heldout_accuracy"}, {}};
  Table summary{"learning_summary", {"scenario", "n_samples", "median_acc", "q1", "q3"}, {}};
  Table splits{"split_metrics", {"scenario", "seed", "train_accuracy", "test_accuracy", "n_test"}, {}};
  Table traces{"loss_traces", {"scenario", "n_samples", "seed", "iteration", "loss"}, {}};
  std::vector<Table> confusions;

  auto add_trace = [&](const std::string& scenario, Cell n, std::uint64_t seed,
                       const std::vector<double>& trace) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
      traces.rows.push_back({str(scenario), n, num(seed), num(std::uint64_t(i)), num(trace[i])});
    }
  };

  for (const auto& run : result.runs) {
    const auto& spec = run.spec;
    runs.rows.push_back({str(run.name), str(to_string(spec.problem)),
                         str(spec.encoding.basis == Basis::Real ? "real" : "fourier"),
                         str(spec.encoding.coarse_grain ? "true" : "false"),
                         str(hex16(run.spec_digest)), str(hex16(run.dataset_digest))});
    for (const auto& row : run.curve.rows) {
      curve.rows.push_back({str(run.name), num(std::uint64_t(row.n_samples)), num(row.seed),
                            num(row.full_accuracy), num(row.train_accuracy),
                            row.heldout_accuracy ? num(*row.heldout_accuracy) : null_cell()});
      add_trace(run.name, num(std::uint64_t(row.n_samples)), row.seed, row.loss_trace);
    }
    for (const auto& s : run.curve.summary) {
      summary.rows.push_back({str(run.name), num(std::uint64_t(s.n_samples)), num(s.median),
                              num(s.q1), num(s.q3)});
    }
    for (const auto& s : run.seeds) {
      splits.rows.push_back({str(run.name), num(s.seed), num(s.train.accuracy),
                             num(s.test.accuracy), num(s.test.total())});
      add_trace(run.name, null_cell(), s.seed, s.loss_trace);
    }
    if (!run.seeds.empty()) {
      Table conf{"confusion_" + run.name, {"true_label", "predicted_label", "count"}, {}};
      const auto mean = run.mean_test_confusion();
      constexpr int kLabel[2] = {kPositiveLabel, kNegativeLabel};
      for (int t = 0; t < 2; ++t) {
        for (int p = 0; p < 2; ++p) {
          conf.rows.push_back({num(kLabel[t]), num(kLabel[p]), num(mean[t][p])});
        }
      }
      confusions.push_back(std::move(conf));
    }
  }
  std::vector<Table> out;
  for (auto* t : {&runs, &curve, &summary, &splits}) {
    if (!t->rows.empty()) out.push_back(std::move(*t));
  }
  for (auto& c : confusions) out.push_back(std::move(c));
  if (!traces.rows.empty()) out.push_back(std::move(traces));
  return out;
}

}  // namespace

ExportFormat export_format_from_string(std::string_view s) {
  if (s == "csv") return ExportFormat::Csv;
  if (s == "json") return ExportFormat::Json;
  throw InvalidArgument("unknown export format '" + std::string(s) + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string result_to_json(const FigureResult& result) {
  json runs = json::array();
  for (const auto& run : result.runs) {
    json seeds = json::array();
    for (const auto& s : run.seeds) {
      seeds.push_back({{"seed", s.seed},
                       {"train", metrics_json(s.train)},
                       {"test", metrics_json(s.test)},
                       {"loss_trace", s.loss_trace}});
    }
    json rows = json::array();
    for (const auto& r : run.curve.rows) {
      rows.push_back({{"n_samples", r.n_samples},
                      {"seed", r.seed},
                      {"train_accuracy", r.train_accuracy},
                      {"full_accuracy", r.full_accuracy},
                      {"heldout_accuracy", r.heldout_accuracy ? json(*r.heldout_accuracy) : json(nullptr)},
                      {"loss_trace", r.loss_trace}});
    }
    json summary = json::array();
    for (const auto& s : run.curve.summary) {
      summary.push_back({{"n_samples", s.n_samples}, {"median", s.median}, {"q1", s.q1}, {"q3", s.q3}});
    }
    runs.push_back({{"name", run.name},
                    {"spec", json::parse(spec_to_json(run.spec))},
                    {"spec_digest", hex16(run.spec_digest)},
                    {"dataset_digest", hex16(run.dataset_digest)},
                    {"seeds", seeds},
                    {"curve", {{"rows", rows}, {"summary", summary}}}});
  }
  return json{{"figure", result.figure}, {"runs", runs}}.dump(1) + "\n";
}

FigureResult result_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    FigureResult out;
    out.figure = j.at("figure").get<std::string>();
    for (const auto& r : j.at("runs")) {
      RunResult run;
      run.name = r.at("name").get<std::string>();
      run.spec = spec_from_json(r.at("spec").dump());
      run.spec_digest = parse_hex(r.at("spec_digest").get<std::string>());
      run.dataset_digest = parse_hex(r.at("dataset_digest").get<std::string>());
      for (const auto& s : r.at("seeds")) {
        run.seeds.push_back({s.at("seed").get<std::uint64_t>(), metrics_from_json(s.at("train")),
                             metrics_from_json(s.at("test")),
                             s.at("loss_trace").get<std::vector<double>>()});
      }
      for (const auto& row : r.at("curve").at("rows")) {
        LearningCurveRow c;
        c.n_samples = row.at("n_samples").get<std::size_t>();
        c.seed = row.at("seed").get<std::uint64_t>();
        c.train_accuracy = row.at("train_accuracy").get<double>();
        c.full_accuracy = row.at("full_accuracy").get<double>();
        if (!row.at("heldout_accuracy").is_null()) {
          c.heldout_accuracy = row.at("heldout_accuracy").get<double>();
        }
        c.loss_trace = row.at("loss_trace").get<std::vector<double>>();
        run.curve.rows.push_back(std::move(c));
      }
      for (const auto& s : r.at("curve").at("summary")) {
        run.curve.summary.push_back({s.at("n_samples").get<std::size_t>(), s.at("median").get<double>(),
                                     s.at("q1").get<double>(), s.at("q3").get<double>()});
      }
      out.runs.push_back(std::move(run));
    }
    return out;
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed result file: ") + ex.what());
  } catch (const std::logic_error& ex) {  // stoull
    throw InvalidArgument(std::string("malformed result file: ") + ex.what());
  }
}

std::filesystem::path write_result(const FigureResult& result,
                                   const std::filesystem::path& dir) {
  ensure_dir(dir);
  const auto path = dir / "result.json";
  write_text(path, result_to_json(result));
  return path;
}

FigureResult read_result(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return result_from_json(buf.str());
}

std::filesystem::path write_timing(const FigureResult& result,
                                   const std::filesystem::path& dir) {
  ensure_dir(dir);
  json runs = json::object();
  for (const auto& run : result.runs) runs[run.name] = run.wall_seconds;
  const auto path = dir / "timing.json";
  write_text(path, json{{"figure", result.figure}, {"wall_seconds", runs}}.dump(1) + "\n");
  return path;
}

std::vector<std::filesystem::path> export_plot_data(
    FigureResult& result, ExportFormat format, const std::filesystem::path& dir) {
  ensure_dir(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& table : build_tables(result)) {
    const bool csv = format == ExportFormat::Csv;
    const auto path = dir / (table.name + (csv ? ".csv" : ".json"));
    write_text(path, csv ? to_csv(table) : to_json(table));
    written.push_back(path);
  }
  result.artifacts.insert(result.artifacts.end(), written.begin(), written.end());
  return written;
}

}  // namespace qsml

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

#include "qsml/dataset.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "qsml/error.hpp"
#include "qsml/parallel.hpp"

namespace qsml {

static_assert(std::endian::native == std::endian::little,
              "dataset files assume a little-endian host");

namespace {
constexpr char kMagic[8] = {'Q', 'S', 'M', 'L', 'D', 'A', 'T', 'A'};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    out_.append(raw, sizeof(T));
  }
  void str(std::string_view s) {
    put(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string str() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  void bytes(void* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, in_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw IoError("dataset file is truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};
}  // namespace

std::string to_string(Problem p) { return p == Problem::Waves ? "waves" : "flow"; }

Problem problem_from_string(std::string_view s) {
  if (s == "waves") return Problem::Waves;
  if (s == "flow") return Problem::Flow;
  throw InvalidArgument("unknown problem '" + std::string(s) + "'");
}

std::size_t Dataset::count(int label) const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.label == label;
  return n;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

void Dataset::validate() const {
  if (samples.empty()) throw InvalidArgument("dataset has no samples");
  const auto rows = samples.front().values.rows();
  const auto cols = samples.front().values.cols();
  for (const auto& s : samples) {
    s.validate();
    if (s.values.rows() != rows || s.values.cols() != cols) {
      throw InvalidArgument("dataset grids differ in shape");
    }
  }
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string serialize(const Dataset& ds) {
  ds.validate();
  Writer w;
  for (char c : kMagic) w.put(c);
  w.put(ds.schema_version);
  w.str(to_string(ds.problem));
  const auto rows = ds.samples.front().values.rows();
  const auto cols = ds.samples.front().values.cols();
  w.put(static_cast<std::uint64_t>(rows));
  w.put(static_cast<std::uint64_t>(cols));
  w.put(static_cast<std::uint64_t>(ds.samples.size()));
  w.put(static_cast<std::uint64_t>(ds.count(kPositiveLabel)));
  w.put(static_cast<std::uint64_t>(ds.count(kNegativeLabel)));
  w.put(ds.generator_digest);
  w.put(static_cast<std::uint32_t>(ds.header.size()));
  for (const auto& [k, v] : ds.header) {
    w.str(k);
    w.str(v);
  }
  for (const auto& s : ds.samples) {
    w.put(static_cast<std::int32_t>(s.label));
    w.put(static_cast<std::uint32_t>(s.meta.size()));
    for (const auto& [k, v] : s.meta) {
      w.str(k);
      w.put(v);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) w.put(s.values(r, c));
    }
  }
  return w.take();
}

Dataset deserialize(std::string_view bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.get<char>() != c) throw IoError("not a qsml dataset file");
  }
  Dataset ds;
  ds.schema_version = r.get<std::uint32_t>();
  if (ds.schema_version != kDatasetSchemaVersion) {
    throw IoError("unsupported dataset schema version " +
                  std::to_string(ds.schema_version));
  }
  try {
    ds.problem = problem_from_string(r.str());
  } catch (const InvalidArgument& e) {
    throw IoError(e.what());
  }
  const auto rows = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  const auto cols = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  const auto n = r.get<std::uint64_t>();
  const auto n_pos = r.get<std::uint64_t>();
  const auto n_neg = r.get<std::uint64_t>();
  ds.generator_digest = r.get<std::uint64_t>();
  const auto n_header = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_header; ++i) {
    auto k = r.str();
    ds.header.emplace_back(std::move(k), r.str());
  }
  ds.samples.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    FieldSample s;
    s.label = r.get<std::int32_t>();
    const auto n_meta = r.get<std::uint32_t>();
    for (std::uint32_t m = 0; m < n_meta; ++m) {
      auto k = r.str();
      s.meta[k] = r.get<double>();
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> grid(rows, cols);
    r.bytes(grid.data(), static_cast<std::size_t>(rows * cols) * sizeof(double));
    s.values = grid;
    ds.samples.push_back(std::move(s));
  }
  if (!r.done()) throw IoError("trailing bytes after dataset records");
  if (ds.count(kPositiveLabel) != n_pos || ds.count(kNegativeLabel) != n_neg) {
    throw IoError("dataset class counts do not match the header");
  }
  return ds;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  const std::string bytes = serialize(ds);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

// ---- waves ----

WaveDatasetConfig WaveDatasetConfig::defaults() {
  WaveDatasetConfig cfg;
  cfg.shock.wave_class = WaveClass::Shock;
  cfg.shock.mu = 0.2;
  cfg.shock.snapshot_times = default_snapshot_times();
  cfg.steady.wave_class = WaveClass::Steady;
  cfg.steady.mu = 1.0;
  cfg.steady.snapshot_times = default_snapshot_times();
  return cfg;
}

namespace {
void describe_burgers(std::ostringstream& os, const std::string& p,
                      const BurgersConfig& c) {
  os << p << ".mu=" << fmt(c.mu) << "\n"
     << p << ".grid_points=" << c.grid_points << "\n"
     << p << ".x_min=" << fmt(c.x_min) << "\n"
     << p << ".x_max=" << fmt(c.x_max) << "\n";
  if (c.wave_class == WaveClass::Shock) {
    os << p << ".c1=" << fmt(c.c1) << "\n"
       << p << ".c2=" << fmt(c.c2) << "\n"
       << p << ".x0=" << fmt(c.x0) << "\n";
  } else {
    os << p << ".t0=" << fmt(c.t0) << "\n"
       << p << ".xc=" << fmt(c.xc) << "\n"
       << p << ".time_offset=" << fmt(c.time_offset) << "\n";
  }
  os << p << ".times=";
  for (double t : c.snapshot_times) os << fmt(t) << ",";
  os << "\n";
}

std::vector<std::pair<std::string, std::string>> header_lines(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}
}  // namespace

std::string WaveDatasetConfig::describe() const {
  std::ostringstream os;
  os << "generator=burgers-closed-form\n";
  describe_burgers(os, "shock", shock);
  describe_burgers(os, "steady", steady);
  os << "noise_sigma=" << fmt(noise_sigma) << "\n";
  return os.str();
}

Dataset build_wave_dataset(const WaveDatasetConfig& cfg, std::uint64_t master_seed) {
  if (cfg.shock.wave_class != WaveClass::Shock ||
      cfg.steady.wave_class != WaveClass::Steady) {
    throw InvalidArgument("wave dataset needs one shock and one steady family");
  }
  Dataset ds;
  ds.problem = Problem::Waves;
  const std::string text = cfg.describe() + "master_seed=" + std::to_string(master_seed) + "\n";
  ds.generator_digest = fnv1a(text);
  ds.header = header_lines(text);
  auto shock = add_white_noise(burgers_solution(cfg.shock), cfg.noise_sigma,
                               derive_seed(master_seed, 1));
  auto steady = add_white_noise(burgers_solution(cfg.steady), cfg.noise_sigma,
                                derive_seed(master_seed, 2));
  for (auto& s : shock) ds.samples.push_back(std::move(s));
  for (auto& s : steady) ds.samples.push_back(std::move(s));
  ds.validate();
  return ds;
}

// ---- flow ----

FlowDatasetConfig FlowDatasetConfig::defaults() {
  FlowDatasetConfig cfg;
  cfg.base.inflow_speed = 0.08;
  cfg.base.cylinder_y = 64.0;
  cfg.base.steps = 8000;
  cfg.base.warmup_steps = 6000;
  cfg.base.snapshot_step = 200;
  return cfg;
}

std::size_t FlowDatasetConfig::snapshots_per_config() const {
  return (base.steps - base.warmup_steps) / base.snapshot_step;
}

std::size_t FlowDatasetConfig::configs_per_class() const {
  const std::size_t per = snapshots_per_config();
  if (per == 0) throw InvalidArgument("flow schedule produces no snapshots");
  return (samples_per_class + per - 1) / per;
}

std::size_t FlowDatasetConfig::max_candidates() const {
  return diameters.size() * cylinder_positions.size() *
         std::max(laminar_reynolds.size(), turbulent_reynolds.size());
}

LbmConfig FlowDatasetConfig::candidate(int label, std::size_t k,
                                       std::uint64_t master_seed) const {
  const auto& res = label == kPositiveLabel ? turbulent_reynolds : laminar_reynolds;
  if (diameters.empty() || cylinder_positions.empty() || res.empty()) {
    throw InvalidArgument("flow sweep lists must be nonempty");
  }
  LbmConfig c = base;
  c.cylinder_diameter = diameters[k % diameters.size()];
  c.cylinder_x = cylinder_positions[(k / diameters.size()) % cylinder_positions.size()];
  const double re = res[k % res.size()];
  c.tau = 0.5 + 3.0 * c.inflow_speed * c.cylinder_diameter / re;
  c.seed = derive_seed(master_seed, (label == kPositiveLabel ? 1000 : 2000) + k);
  return c;
}

std::string FlowDatasetConfig::describe() const {
  std::ostringstream os;
  os << "generator=lbm-d2q9-bgk\n"
     << "lbm.nx=" << base.nx << "\n"
     << "lbm.ny=" << base.ny << "\n"
     << "lbm.inflow_speed=" << fmt(base.inflow_speed) << "\n"
     << "lbm.cylinder_y=" << fmt(base.cylinder_y) << "\n"
     << "lbm.steps=" << base.steps << "\n"
     << "lbm.warmup_steps=" << base.warmup_steps << "\n"
     << "lbm.snapshot_step=" << base.snapshot_step << "\n"
     << "lbm.perturbation=" << fmt(base.perturbation) << "\n"
     << "lbm.boundary=equilibrium-inflow,copy-outflow,periodic-y,halfway-bounce-back\n"
     << "samples_per_class=" << samples_per_class << "\n"
     << "re_low=" << fmt(band.low) << "\n"
     << "re_high=" << fmt(band.high) << "\n";
  const auto list = [&](const char* key, const std::vector<double>& v) {
    os << key << "=";
    for (double x : v) os << fmt(x) << ",";
    os << "\n";
  };
  list("laminar_reynolds", laminar_reynolds);
  list("turbulent_reynolds", turbulent_reynolds);
  list("diameters", diameters);
  list("cylinder_positions", cylinder_positions);
  os << "probe=(7/8 nx, cylinder_y) u_y peak-to-peak > 0.1 U\n";
  return os.str();
}

Dataset build_flow_dataset(const FlowDatasetConfig& cfg, std::uint64_t master_seed) {
  Dataset ds;
  ds.problem = Problem::Flow;
  const std::string text = cfg.describe() + "master_seed=" + std::to_string(master_seed) + "\n";
  ds.generator_digest = fnv1a(text);
  ds.header = header_lines(text);
  const std::size_t need = cfg.configs_per_class();
  const std::size_t per = cfg.snapshots_per_config();
  const std::size_t budget = cfg.max_candidates();

  for (int label : {kPositiveLabel, kNegativeLabel}) {
    std::vector<std::vector<FieldSample>> accepted;
    std::size_t rejected = 0;
    std::size_t next = 0;
    while (accepted.size() < need) {
      const std::size_t batch = std::min(need - accepted.size(), budget - next);
      if (batch == 0) {
        throw InvalidArgument("flow sweep exhausted with " + std::to_string(accepted.size()) +
                              " of " + std::to_string(need) + " configurations accepted");
      }
      std::vector<std::vector<FieldSample>> runs(batch);
      std::vector<int> ok(batch, 0);
      parallel_for(batch, [&](std::size_t b) {
        const LbmConfig c = cfg.candidate(label, next + b, master_seed);
        int assigned = 0;
        try {
          assigned = label_flow(c, cfg.band);
        } catch (const InvalidArgument&) {
          return;  // dead zone
        }
        if (assigned != label) return;
        runs[b] = lbm_simulate(c, cfg.band);
        const bool oscillating = runs[b].front().meta.at("oscillating") != 0.0;
        ok[b] = oscillating == (label == kPositiveLabel);
      });
      for (std::size_t b = 0; b < batch; ++b) {
        if (ok[b]) {
          accepted.push_back(std::move(runs[b]));
        } else {
          ++rejected;
        }
      }
      next += batch;
    }
    std::size_t taken = 0;
    for (std::size_t c = 0; c < accepted.size(); ++c) {
      for (std::size_t k = 0; k < per && taken < cfg.samples_per_class; ++k, ++taken) {
        auto s = std::move(accepted[c][k]);
        s.meta["config"] = static_cast<double>(c);
        ds.samples.push_back(std::move(s));
      }
    }
    ds.header.emplace_back(label == kPositiveLabel ? "rejected_turbulent" : "rejected_laminar",
                           std::to_string(rejected));
  }
  ds.validate();
  return ds;
}

std::uint64_t default_generator_digest(Problem problem, std::uint64_t master_seed) {
  const std::string text = problem == Problem::Waves
                               ? WaveDatasetConfig::defaults().describe()
                               : FlowDatasetConfig::defaults().describe();
  return fnv1a(text + "master_seed=" + std::to_string(master_seed) + "\n");
}

Dataset build_dataset(Problem problem, std::uint64_t master_seed) {
  return problem == Problem::Waves
             ? build_wave_dataset(WaveDatasetConfig::defaults(), master_seed)
             : build_flow_dataset(FlowDatasetConfig::defaults(), master_seed);
}

}  // namespace qsml

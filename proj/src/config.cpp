// Copyright 2026 The annealsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "annealsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <algorithm>
#include <set>

#include "annealsim/io.hpp"
#include "annealsim/parallel.hpp"
#include "annealsim/toml.hpp"

namespace annealsim {

using nlohmann::json;

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "static_decay") return ExperimentKind::kStaticDecay;
  if (name == "annealing_sweep") return ExperimentKind::kAnnealingSweep;
  if (name == "gap_scan") return ExperimentKind::kGapScan;
  if (name == "noise_validation") return ExperimentKind::kNoiseValidation;
  if (name == "matrix_elements") return ExperimentKind::kMatrixElements;
  if (name == "calibrate_ramp") return ExperimentKind::kCalibrateRamp;
  throw std::invalid_argument("unknown experiment '" + name +
                              "' (known: static_decay, annealing_sweep, gap_scan, noise_validation, "
                              "matrix_elements, calibrate_ramp)");
}

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kStaticDecay: return "static_decay";
    case ExperimentKind::kAnnealingSweep: return "annealing_sweep";
    case ExperimentKind::kGapScan: return "gap_scan";
    case ExperimentKind::kNoiseValidation: return "noise_validation";
    case ExperimentKind::kMatrixElements: return "matrix_elements";
    case ExperimentKind::kCalibrateRamp: return "calibrate_ramp";
  }
  return "unknown";
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

FitWeights parse_weights(const std::string& name) {
  if (name == "uniform") return FitWeights::kUniform;
  if (name == "inverse_variance") return FitWeights::kInverseVariance;
  throw std::invalid_argument("unknown fit weighting '" + name + "' (known: uniform, inverse_variance)");
}

std::string weights_name(FitWeights w) { return w == FitWeights::kUniform ? "uniform" : "inverse_variance"; }

// Reads typed keys from one table, recording every problem instead of
// stopping at the first.
class Reader {
 public:
  Reader(const json& table, std::string prefix, std::vector<std::string>& problems)
      : table_(table), prefix_(std::move(prefix)), problems_(problems) {}

  bool has(const std::string& key) const { return table_.is_object() && table_.contains(key); }
  void mark(const std::string& key) { seen_.insert(key); }

  void problem(const std::string& key, const std::string& msg) { problems_.push_back(path(key) + ": " + msg); }

  void real(const std::string& key, double& out) {
    if (const json* v = take(key)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        problem(key, "expected a number");
      }
    }
  }

  void integer(const std::string& key, std::size_t& out) {
    if (const json* v = take(key)) {
      if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
        out = v->get<std::size_t>();
      } else {
        problem(key, "expected a non-negative integer");
      }
    }
  }

  void seed(const std::string& key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (v->is_number_unsigned() || (v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        out = v->get<std::uint64_t>();
      } else {
        problem(key, "expected a non-negative integer");
      }
    }
  }

  void signed_integer(const std::string& key, int& out) {
    if (const json* v = take(key)) {
      if (v->is_number_integer()) {
        out = v->get<int>();
      } else {
        problem(key, "expected an integer");
      }
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = take(key)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        problem(key, "expected true or false");
      }
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = take(key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        problem(key, "expected a string");
      }
    }
  }

  template <typename T>
  void named(const std::string& key, T& out, const std::function<T(const std::string&)>& parse) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_string()) {
      problem(key, "expected a string");
      return;
    }
    try {
      out = parse(v->get<std::string>());
    } catch (const std::exception& e) {
      problem(key, e.what());
    }
  }

  // A scalar is accepted as a one-element list.
  template <typename T>
  void list(const std::string& key, std::vector<T>& out, const std::function<T(const json&)>& convert) {
    const json* v = take(key);
    if (!v) return;
    json items = v->is_array() ? *v : json::array({*v});
    if (items.empty()) {
      problem(key, "must not be empty");
      return;
    }
    std::vector<T> parsed;
    for (std::size_t i = 0; i < items.size(); ++i) {
      try {
        parsed.push_back(convert(items[i]));
      } catch (const std::exception& e) {
        problem(key + "[" + std::to_string(i) + "]", e.what());
        return;
      }
    }
    out = std::move(parsed);
  }

  void real_list(const std::string& key, std::vector<double>& out) {
    list<double>(key, out, [](const json& j) {
      if (!j.is_number()) throw std::invalid_argument("expected a number");
      return j.get<double>();
    });
  }

  void size_list(const std::string& key, std::vector<std::size_t>& out) {
    list<std::size_t>(key, out, [](const json& j) {
      if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        throw std::invalid_argument("expected a non-negative integer");
      }
      return j.get<std::size_t>();
    });
  }

  template <typename T>
  void named_list(const std::string& key, std::vector<T>& out, T (*parse)(const std::string&)) {
    list<T>(key, out, [parse](const json& j) {
      if (!j.is_string()) throw std::invalid_argument("expected a string");
      return parse(j.get<std::string>());
    });
  }

  // Keys present in the table that nothing asked for.
  void finish() {
    if (!table_.is_object()) return;
    for (auto it = table_.begin(); it != table_.end(); ++it) {
      if (!seen_.count(it.key())) problems_.push_back(path(it.key()) + ": unknown key");
    }
  }

 private:
  const json& table_;
  std::string prefix_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  const json* take(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    return &table_.at(key);
  }
};

Axis parse_axis_value(const std::string& s) { return parse_axis(s); }
Observable parse_observable_value(const std::string& s) { return parse_observable(s); }
ModelKind parse_kind_value(const std::string& s) { return parse_model_kind(s); }

std::vector<std::string> relevant_sections(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kStaticDecay: return {"model", "noise", "static"};
    case ExperimentKind::kAnnealingSweep: return {"model", "noise", "anneal"};
    case ExperimentKind::kGapScan: return {"model", "gap"};
    case ExperimentKind::kNoiseValidation: return {"noise", "noise_validation"};
    case ExperimentKind::kMatrixElements: return {"model", "noise", "matrix_elements"};
    case ExperimentKind::kCalibrateRamp: return {"model", "calibrate"};
  }
  return {};
}

bool uses_ramp(ExperimentKind kind) {
  return kind == ExperimentKind::kStaticDecay || kind == ExperimentKind::kAnnealingSweep ||
         kind == ExperimentKind::kMatrixElements;
}

void check(bool ok, std::vector<std::string>& problems, const std::string& key, const std::string& msg) {
  if (!ok) problems.push_back(key + ": " + msg);
}

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

void read_model(const json& t, ModelSection& m, ExperimentKind kind, std::vector<std::string>& problems) {
  Reader r(t, "model", problems);
  r.named_list<ModelKind>("kinds", m.kinds, parse_kind_value);
  r.size_list("lengths", m.lengths);
  r.signed_integer("eta", m.eta);
  r.real("omega0", m.omega0);
  r.real("omega", m.omega);
  r.integer("cutoff", m.cutoff);
  r.named<Boundary>("boundary", m.boundary, parse_boundary);
  if (uses_ramp(kind)) {
    r.string("ramp", m.ramp);
    r.integer("ramp_length", m.ramp_length);
    r.integer("ramp_intervals", m.ramp_intervals);
  }
  r.finish();
  check(m.eta == 1 || m.eta == -1, problems, "model.eta", "must be 1 (ferro) or -1 (antiferro)");
  check(std::isfinite(m.omega0) && m.omega0 > 0.0, problems, "model.omega0", "must be > 0");
  check(std::isfinite(m.omega) && m.omega > 0.0, problems, "model.omega", "must be > 0");
  check(m.cutoff >= 1, problems, "model.cutoff", "must be >= 1");
  for (std::size_t l : m.lengths) {
    if (l < 1 || l > 16) {
      problems.push_back("model.lengths: " + std::to_string(l) + " outside 1..16");
    } else if (m.boundary == Boundary::kPeriodic && l < 3) {
      problems.push_back("model.lengths: periodic chains need L >= 3 (got " + std::to_string(l) + ")");
    }
  }
  check(m.ramp_intervals >= 2, problems, "model.ramp_intervals", "must be >= 2");
  check(m.ramp_length == 0 || m.boundary == Boundary::kOpen || m.ramp_length >= 3, problems, "model.ramp_length",
        "periodic calibration needs L >= 3");
  check(!m.ramp.empty(), problems, "model.ramp", "must be 'calibrated', 'linear' or a ramp CSV path");
}

void read_noise(const json& t, NoiseSection& n, ExperimentKind kind, std::vector<std::string>& problems) {
  if (kind == ExperimentKind::kNoiseValidation) n.coupling = NoiseCoupling::kHalfAmplitude;
  Reader r(t, "noise", problems);
  r.named_list<Axis>("axes", n.axes, parse_axis_value);
  r.real("gamma", n.gamma);
  r.named<NoiseCoupling>("coupling", n.coupling, parse_noise_coupling);
  r.real("dt", n.dt);
  r.finish();
  check(std::isfinite(n.gamma) && n.gamma >= 0.0, problems, "noise.gamma", "must be >= 0");
  check(std::isfinite(n.dt) && n.dt > 0.0, problems, "noise.dt", "must be > 0");
  if (kind == ExperimentKind::kNoiseValidation || kind == ExperimentKind::kMatrixElements) {
    for (Axis a : n.axes) {
      check(a == Axis::kX || a == Axis::kZ, problems, "noise.axes", "only x and z are supported here");
    }
  }
}

std::vector<std::string> observable_errors(const std::vector<Observable>& obs) {
  std::set<Observable> seen;
  std::vector<std::string> out;
  for (Observable o : obs) {
    if (!seen.insert(o).second) out.push_back("observable " + observable_name(o) + " listed twice");
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_directory) {
  std::vector<std::string> problems;
  ExperimentConfig c;
  c.base_directory = base_directory;
  c.workers = default_workers();
  if (!doc.is_object()) throw ConfigError({"configuration must be a table"});

  Reader top(doc, "", problems);
  if (!doc.contains("schema")) {
    problems.push_back("schema: missing (expected " + std::to_string(kConfigSchema) + ")");
  }
  top.signed_integer("schema", c.schema);
  if (doc.contains("schema") && c.schema != kConfigSchema) {
    problems.push_back("schema: unsupported version " + std::to_string(c.schema) + " (expected " +
                       std::to_string(kConfigSchema) + ")");
  }
  bool have_kind = false;
  if (!doc.contains("experiment")) problems.push_back("experiment: missing");
  {
    const std::size_t before = problems.size();
    top.named<ExperimentKind>("experiment", c.experiment, parse_experiment_kind);
    have_kind = doc.contains("experiment") && problems.size() == before;
  }
  top.string("name", c.name);
  top.seed("seed", c.seed);
  top.integer("realizations", c.realizations);
  top.integer("workers", c.workers);
  top.string("output", c.output);
  top.integer("record_samples", c.record_samples);
  top.integer("max_dimension", c.max_dimension);
  check(c.realizations >= 1, problems, "realizations", "must be >= 1");
  check(c.workers >= 1, problems, "workers", "must be >= 1");
  check(c.record_samples >= 2, problems, "record_samples", "must be >= 2");
  check(c.max_dimension >= 2, problems, "max_dimension", "must be >= 2");

  const std::vector<std::string> all_sections{"model", "noise",           "static",          "anneal",
                                              "gap",   "noise_validation", "matrix_elements", "calibrate"};
  for (const auto& s : all_sections) top.mark(s);
  top.finish();
  // Sections cannot be interpreted without a known experiment.
  if (!have_kind) throw ConfigError(problems);

  const std::vector<std::string> sections = relevant_sections(c.experiment);
  auto wants = [&](const std::string& s) { return std::find(sections.begin(), sections.end(), s) != sections.end(); };
  for (const auto& s : all_sections) {
    if (doc.contains(s) && !wants(s)) {
      problems.push_back(s + ": section not used by experiment " + experiment_kind_name(c.experiment));
    }
  }
  auto table = [&](const std::string& name) -> const json& {
    static const json empty = json::object();
    if (!doc.contains(name)) return empty;
    const json& t = doc.at(name);
    if (!t.is_object()) {
      problems.push_back(name + ": expected a table");
      return empty;
    }
    return t;
  };

  const ExperimentKind kind = c.experiment;
  if (wants("model")) read_model(table("model"), c.model, kind, problems);
  if (wants("noise")) read_noise(table("noise"), c.noise, kind, problems);
  if (kind == ExperimentKind::kStaticDecay) {
    auto& s = c.static_run;
    Reader r(table("static"), "static", problems);
    r.real("s", s.s);
    r.real("t_max", s.t_max);
    r.named_list<Observable>("observables", s.observables, parse_observable_value);
    r.boolean("fit", s.fit);
    r.named<FitWeights>("weights", s.weights, parse_weights);
    r.finish();
    check(in_unit(s.s), problems, "static.s", "must lie in [0, 1]");
    check(std::isfinite(s.t_max) && s.t_max > 0.0, problems, "static.t_max", "must be > 0");
    for (const auto& e : observable_errors(s.observables)) problems.push_back("static.observables: " + e);
    const bool has_y = std::find(s.observables.begin(), s.observables.end(), Observable::kOverlap) != s.observables.end();
    check(!s.fit || has_y, problems, "static.fit", "needs Y among the observables");
  }
  if (kind == ExperimentKind::kAnnealingSweep) {
    auto& a = c.anneal;
    Reader r(table("anneal"), "anneal", problems);
    r.real_list("times", a.times);
    r.named_list<Observable>("observables", a.observables, parse_observable_value);
    r.boolean("fit", a.fit);
    r.named<FitWeights>("weights", a.weights, parse_weights);
    r.finish();
    for (std::size_t i = 0; i < a.times.size(); ++i) {
      if (!(std::isfinite(a.times[i]) && a.times[i] > 0.0)) problems.push_back("anneal.times: entries must be > 0");
      if (i > 0 && !(a.times[i] > a.times[i - 1])) problems.push_back("anneal.times: must be strictly increasing");
    }
    for (const auto& e : observable_errors(a.observables)) problems.push_back("anneal.observables: " + e);
    const bool has_p =
        std::find(a.observables.begin(), a.observables.end(), Observable::kErrorProbability) != a.observables.end();
    check(has_p, problems, "anneal.observables", "must include Perr");
  }
  if (kind == ExperimentKind::kGapScan) {
    auto& g = c.gap;
    Reader r(table("gap"), "gap", problems);
    r.size_list("cutoffs", g.cutoffs);
    r.real("x_min", g.x_min);
    r.real("x_max", g.x_max);
    r.real("coarse_step", g.coarse_step);
    r.real("fine_step", g.fine_step);
    r.real("fine_halfwidth", g.fine_halfwidth);
    r.real("golden_tolerance", g.golden_tolerance);
    r.boolean("sector_gap", g.sector_gap);
    r.real("bracket_halfwidth", g.bracket_halfwidth);
    r.finish();
    check(in_unit(g.x_min) && in_unit(g.x_max) && g.x_min < g.x_max, problems, "gap.x_min/x_max",
          "need 0 <= x_min < x_max <= 1");
    check(g.coarse_step > 0.0 && g.fine_step > 0.0 && g.fine_step <= g.coarse_step, problems, "gap.fine_step",
          "need 0 < fine_step <= coarse_step");
    check(g.fine_step <= 0.01, problems, "gap.fine_step", "must be <= 0.01 near the minimum");
    check(g.golden_tolerance > 0.0, problems, "gap.golden_tolerance", "must be > 0");
    check(g.fine_halfwidth > 0.0, problems, "gap.fine_halfwidth", "must be > 0");
    check(g.bracket_halfwidth >= 0.0, problems, "gap.bracket_halfwidth", "must be >= 0");
    for (std::size_t cut : g.cutoffs) check(cut >= 1, problems, "gap.cutoffs", "entries must be >= 1");
  }
  if (kind == ExperimentKind::kNoiseValidation) {
    auto& v = c.noise_validation;
    Reader r(table("noise_validation"), "noise_validation", problems);
    r.real_list("gammas", v.gammas);
    r.real("t_max_factor", v.t_max_factor);
    r.boolean("dt_halving", v.dt_halving);
    r.boolean("spectrum", v.spectrum);
    r.integer("spectrum_realizations", v.spectrum_realizations);
    r.real("spectrum_duration", v.spectrum_duration);
    r.integer("spectrum_points", v.spectrum_points);
    r.real("spectrum_max_frequency", v.spectrum_max_frequency);
    r.finish();
    for (double g : v.gammas) check(std::isfinite(g) && g > 0.0, problems, "noise_validation.gammas", "entries must be > 0");
    check(v.t_max_factor > 0.0, problems, "noise_validation.t_max_factor", "must be > 0");
    check(v.spectrum_duration > 0.0, problems, "noise_validation.spectrum_duration", "must be > 0");
    check(v.spectrum_points >= 2, problems, "noise_validation.spectrum_points", "must be >= 2");
    check(v.spectrum_max_frequency > 0.0, problems, "noise_validation.spectrum_max_frequency", "must be > 0");
  }
  if (kind == ExperimentKind::kMatrixElements) {
    auto& m = c.matrix_elements;
    Reader r(table("matrix_elements"), "matrix_elements", problems);
    r.real("s", m.s);
    r.integer("levels", m.levels);
    r.integer("site", m.site);
    r.real("threshold", m.threshold);
    r.finish();
    check(in_unit(m.s), problems, "matrix_elements.s", "must lie in [0, 1]");
    check(m.levels >= 2, problems, "matrix_elements.levels", "must be >= 2");
    for (std::size_t l : c.model.lengths) {
      check(m.site < l, problems, "matrix_elements.site", "must be < every chain length");
    }
    const bool has_sb = std::find(c.model.kinds.begin(), c.model.kinds.end(), ModelKind::kSpinBoson) != c.model.kinds.end();
    check(has_sb, problems, "model.kinds", "matrix_elements needs spin_boson");
  }
  if (kind == ExperimentKind::kCalibrateRamp) {
    auto& k = c.calibrate;
    Reader r(table("calibrate"), "calibrate", problems);
    r.integer("intervals", k.intervals);
    r.real("tolerance", k.tolerance);
    r.finish();
    check(k.intervals >= 2, problems, "calibrate.intervals", "must be >= 2");
    check(k.tolerance > 0.0, problems, "calibrate.tolerance", "must be > 0");
  }
  if (c.name.empty()) c.name = experiment_kind_name(kind);
  if (c.output.empty()) c.output = "results/" + c.name;
  if (uses_ramp(kind) && c.model.ramp != "calibrated" && c.model.ramp != "linear") {
    const auto p = c.ramp_path();
    if (!p || !std::filesystem::exists(*p)) problems.push_back("model.ramp: file '" + c.model.ramp + "' not found");
  }
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

std::optional<std::filesystem::path> ExperimentConfig::ramp_path() const {
  if (model.ramp == "calibrated" || model.ramp == "linear") return std::nullopt;
  std::filesystem::path p(model.ramp);
  if (p.is_relative() && !base_directory.empty()) p = base_directory / p;
  return p;
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema"] = schema;
  j["name"] = name;
  j["experiment"] = experiment_kind_name(experiment);
  j["seed"] = seed;
  j["realizations"] = realizations;
  j["workers"] = workers;
  j["output"] = output;
  j["record_samples"] = record_samples;
  j["max_dimension"] = max_dimension;
  const auto sections = relevant_sections(experiment);
  auto wants = [&](const std::string& s) { return std::find(sections.begin(), sections.end(), s) != sections.end(); };
  if (wants("model")) {
    json m;
    m["kinds"] = json::array();
    for (auto k : model.kinds) m["kinds"].push_back(model_kind_name(k));
    m["lengths"] = model.lengths;
    m["eta"] = model.eta;
    m["omega0"] = model.omega0;
    m["omega"] = model.omega;
    m["cutoff"] = model.cutoff;
    m["boundary"] = boundary_name(model.boundary);
    if (uses_ramp(experiment)) {
      m["ramp"] = model.ramp;
      m["ramp_length"] = model.ramp_length;
      m["ramp_intervals"] = model.ramp_intervals;
      if (auto p = ramp_path(); p && std::filesystem::exists(*p)) m["ramp_digest"] = fnv1a_hex(read_text_file(*p));
    }
    j["model"] = m;
  }
  if (wants("noise")) {
    json n;
    n["axes"] = json::array();
    for (auto a : noise.axes) n["axes"].push_back(axis_name(a));
    n["gamma"] = noise.gamma;
    n["coupling"] = noise_coupling_name(noise.coupling);
    n["dt"] = noise.dt;
    j["noise"] = n;
  }
  auto obs_json = [](const std::vector<Observable>& obs) {
    json a = json::array();
    for (auto o : obs) a.push_back(observable_name(o));
    return a;
  };
  if (wants("static")) {
    j["static"] = {{"s", static_run.s},
                   {"t_max", static_run.t_max},
                   {"observables", obs_json(static_run.observables)},
                   {"fit", static_run.fit},
                   {"weights", weights_name(static_run.weights)}};
  }
  if (wants("anneal")) {
    j["anneal"] = {{"times", anneal.times},
                   {"observables", obs_json(anneal.observables)},
                   {"fit", anneal.fit},
                   {"weights", weights_name(anneal.weights)}};
  }
  if (wants("gap")) {
    j["gap"] = {{"cutoffs", gap.cutoffs},
                {"x_min", gap.x_min},
                {"x_max", gap.x_max},
                {"coarse_step", gap.coarse_step},
                {"fine_step", gap.fine_step},
                {"fine_halfwidth", gap.fine_halfwidth},
                {"golden_tolerance", gap.golden_tolerance},
                {"sector_gap", gap.sector_gap},
                {"bracket_halfwidth", gap.bracket_halfwidth}};
  }
  if (wants("noise_validation")) {
    const auto& v = noise_validation;
    j["noise_validation"] = {{"gammas", v.gammas},
                             {"t_max_factor", v.t_max_factor},
                             {"dt_halving", v.dt_halving},
                             {"spectrum", v.spectrum},
                             {"spectrum_realizations", v.spectrum_realizations},
                             {"spectrum_duration", v.spectrum_duration},
                             {"spectrum_points", v.spectrum_points},
                             {"spectrum_max_frequency", v.spectrum_max_frequency}};
  }
  if (wants("matrix_elements")) {
    const auto& m = matrix_elements;
    j["matrix_elements"] = {{"s", m.s}, {"levels", m.levels}, {"site", m.site}, {"threshold", m.threshold}};
  }
  if (wants("calibrate")) {
    j["calibrate"] = {{"intervals", calibrate.intervals}, {"tolerance", calibrate.tolerance}};
  }
  return j;
}

std::string ExperimentConfig::fingerprint() const {
  json j = to_json();
  j.erase("output");
  j.erase("workers");
  return fnv1a_hex(j.dump());
}

ExperimentConfig config_from_toml(const std::string& text, const std::filesystem::path& base_directory) {
  json doc;
  try {
    doc = parse_toml(text);
  } catch (const TomlError& e) {
    throw ConfigError({std::string("syntax: ") + e.what()});
  }
  return config_from_json(doc, base_directory);
}

void apply_environment(ExperimentConfig& config) {
  if (const char* out = std::getenv("ANNEALSIM_OUT"); out && *out) config.output = out;
  if (const char* w = std::getenv("ANNEALSIM_WORKERS"); w && *w) {
    char* end = nullptr;
    const long v = std::strtol(w, &end, 10);
    if (end == w || *end != '\0' || v < 1) throw ConfigError({"ANNEALSIM_WORKERS: expected a positive integer"});
    config.workers = static_cast<std::size_t>(v);
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw ConfigError({e.what()});
  }
  ExperimentConfig c = config_from_toml(text, path.parent_path());
  apply_environment(c);
  return c;
}

}  // namespace annealsim

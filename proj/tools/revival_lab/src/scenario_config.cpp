// Copyright 2026 The revival-lab Authors
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

#include "scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "revival/errors.hpp"

namespace revival::cli {

namespace pt = boost::property_tree;

namespace {

double to_number(const std::string& raw, const std::string& key) {
  std::string s = boost::algorithm::trim_copy(raw);
  if (boost::algorithm::iequals(s, "inf")) return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' is not a number: '" + s + "'");
  }
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(key);
    return v && !boost::algorithm::trim_copy(*v).empty();
  }
  void number(const std::string& key, double& out) const {
    if (has(key)) out = to_number(tree_.get<std::string>(key), key);
  }
  void integer(const std::string& key, int& out) const {
    if (!has(key)) return;
    const double v = to_number(tree_.get<std::string>(key), key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + key + "' must be an integer");
    out = static_cast<int>(v);
  }
  std::string text(const std::string& key, const std::string& fallback = {}) const {
    return has(key) ? boost::algorithm::trim_copy(tree_.get<std::string>(key)) : fallback;
  }
  std::vector<double> list(const std::string& key) const {
    std::vector<std::string> parts;
    const std::string raw = text(key);
    boost::algorithm::split(parts, raw, boost::algorithm::is_any_of(","));
    std::vector<double> out;
    for (const auto& p : parts) {
      if (!boost::algorithm::trim_copy(p).empty()) out.push_back(to_number(p, key));
    }
    return out;
  }

 private:
  const pt::ptree& tree_;
};

}  // namespace

double ScenarioConfig::injection_beta() const {
  if (sequence.t_beta_us) return injection_amplitude(*sequence.t_beta_us, physics);
  return std::sqrt(sequence.nbar);
}

CatProtocol ScenarioConfig::cat_protocol() const {
  CatProtocol p;
  p.beta = injection_beta();
  p.t_i = us(sequence.t_i_us);
  p.t_d = us(sequence.t_d_us);
  p.alpha = sequence.alpha;
  return p;
}

std::vector<SequenceStep> parse_steps(const std::string& text) {
  std::vector<SequenceStep> steps;
  std::vector<std::string> items;
  boost::algorithm::split(items, text, boost::algorithm::is_any_of(";"));
  for (auto item : items) {
    boost::algorithm::trim(item);
    if (item.empty()) continue;
    std::vector<std::string> f;
    boost::algorithm::split(f, item, boost::algorithm::is_any_of(":"));
    for (auto& s : f) boost::algorithm::trim(s);
    const std::string& kind = f[0];
    if (kind == "inject" && (f.size() == 2 || f.size() == 3)) {
      steps.push_back(step::Inject{to_number(f[1], item), f.size() == 3 ? to_number(f[2], item) : 0.0});
    } else if (kind == "resonant" && f.size() == 2) {
      steps.push_back(step::Resonant{us(to_number(f[1], item))});
    } else if (kind == "wait" && f.size() == 2) {
      steps.push_back(step::Wait{us(to_number(f[1], item))});
    } else if (kind == "reset" && f.size() == 1) {
      steps.push_back(step::ResetDiscardG{});
    } else if (kind == "measure" && f.size() == 1) {
      steps.push_back(step::MeasurePg{});
    } else {
      throw ConfigError("cannot parse sequence step '" + item + "'");
    }
  }
  try {
    validate_steps(steps);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return steps;
}

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  static const char* known[] = {"physics", "detection", "sequence", "fit", "custom"};
  for (const auto& [section, _] : tree) {
    if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
      throw ConfigError("unknown config section [" + section + "]");
    }
  }

  const Reader r(tree);
  ScenarioConfig c;
  c.text = text;
  ExperimentConfig& x = c.physics;

  double omega0_khz = 49.88, waist_mm = 6.0, x0_mm = -1.72, t_cav_us = 8100.0, t_atom_us = x.t_atom;
  r.number("physics.omega0_khz", omega0_khz);
  r.number("physics.velocity_m_per_s", x.v);
  r.number("physics.waist_mm", waist_mm);
  r.number("physics.x0_mm", x0_mm);
  r.number("physics.t_cav_us", t_cav_us);
  r.number("physics.n_th", x.n_th);
  r.number("physics.p1", x.p1);
  r.number("physics.t_atom_us", t_atom_us);
  r.integer("physics.dim", x.dim);
  x.omega0 = khz_to_rad_per_s(omega0_khz);
  x.w = mm(waist_mm);
  x.x0 = mm(x0_mm);
  x.t_cav = us(t_cav_us);
  x.t_atom = std::isinf(t_atom_us) ? t_atom_us : us(t_atom_us);

  r.number("detection.a", x.detection.a);
  r.number("detection.b", x.detection.b);
  r.number("detection.c", x.detection.c);
  r.number("detection.d", x.detection.d);

  SequenceSettings& s = c.sequence;
  r.number("sequence.injection_rate_per_us", x.injection_rate);
  r.number("sequence.injection_offset_us", x.injection_offset);
  if (r.has("sequence.nbar")) {
    r.number("sequence.nbar", s.nbar);
  } else if (r.has("sequence.t_beta_us")) {
    double t_beta = 0.0;
    r.number("sequence.t_beta_us", t_beta);
    s.t_beta_us = t_beta;
  }
  r.number("sequence.t_i_us", s.t_i_us);
  r.number("sequence.t_d_us", s.t_d_us);
  r.number("sequence.alpha", s.alpha);
  r.number("sequence.probe_te_us", s.probe_te_us);
  if (r.has("sequence.delays_us")) s.delays_us = r.list("sequence.delays_us");
  const std::string coupling = r.text("sequence.coupling", "motional");
  if (coupling == "motional") {
    x.coupling = CouplingModel::kMotional;
  } else if (coupling == "constant") {
    x.coupling = CouplingModel::kConstantEffective;
  } else {
    throw ConfigError("sequence.coupling must be 'motional' or 'constant'");
  }
  const std::string wait = r.text("sequence.wait", "decoupled");
  if (wait == "decoupled") {
    x.wait = WaitModel::kDecoupled;
  } else if (wait == "detuned") {
    x.wait = WaitModel::kDetuned;
  } else {
    throw ConfigError("sequence.wait must be 'decoupled' or 'detuned'");
  }
  double detuning_khz = x.wait_detuning / khz_to_rad_per_s(1.0);
  r.number("sequence.wait_detuning_khz", detuning_khz);
  x.wait_detuning = khz_to_rad_per_s(detuning_khz);
  r.number("sequence.tol", x.tol);
  r.number("sequence.te_step_us", s.te_step_us);
  r.number("sequence.vacuum_te_max_us", s.vacuum_te_max_us);
  r.number("sequence.revival_te_max_us", s.revival_te_max_us);
  r.number("sequence.alpha_min", s.alpha_min);
  r.number("sequence.alpha_max", s.alpha_max);
  r.number("sequence.alpha_step", s.alpha_step);
  r.integer("sequence.alpha_dim", s.alpha_dim);
  if (r.has("sequence.decay_window_us")) {
    const auto w = r.list("sequence.decay_window_us");
    if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError("sequence.decay_window_us needs two ascending values");
    s.decay_window_lo_us = w[0];
    s.decay_window_hi_us = w[1];
  }

  const std::string data = r.text("fit.data");
  if (!data.empty()) {
    const std::filesystem::path p(data);
    c.fit.data = p.is_absolute() ? p : base_dir / p;
  }
  r.number("fit.noise_sigma", c.fit.noise_sigma);
  r.number("fit.t_max_us", c.fit.t_max_us);
  r.integer("fit.points", c.fit.points);

  if (r.has("custom.steps")) c.custom.steps = parse_steps(r.text("custom.steps"));
  r.number("custom.te_max_us", c.custom.te_max_us);

  if (!(s.te_step_us > 0.0) || !(s.alpha_step > 0.0) || !(s.alpha_max > s.alpha_min)) {
    throw ConfigError("sweep steps must be positive and ranges ascending");
  }
  if (s.delays_us.empty()) throw ConfigError("sequence.delays_us is empty");
  if (c.fit.points < 50) throw ConfigError("fit.points must be at least 50");
  if (!(s.nbar > 0.0)) throw ConfigError("sequence.nbar must be positive");
  x.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace revival::cli

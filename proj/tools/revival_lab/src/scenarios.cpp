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

#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "revival/analytic.hpp"
#include "revival/errors.hpp"
#include "revival/fitting.hpp"
#include "revival/fock.hpp"

#ifndef REVIVAL_LAB_VERSION
#define REVIVAL_LAB_VERSION "0.0.0"
#endif

namespace revival::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kSpectrumMaxKhz = 300.0;

std::vector<double> scaled(std::span<const double> v, double factor) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [factor](double x) { return x * factor; });
  return out;
}

std::string num(double v) { return fmt::format("{}", v); }

CsvTable sweep_table(const ProbeSweep& s) {
  return {{"t_i_us", "t_e_us", "p_g"}, {scaled(s.t_i, 1e6), scaled(s.t_e, 1e6), s.p_g}};
}

PlotSpec sweep_plot(const ProbeSweep& s, std::string title, std::string x_label = "effective time (us)") {
  return {std::move(title), std::move(x_label), "P_g", {{"P_g", scaled(s.t_e, 1e6), s.p_g, SeriesStyle::kLine}}};
}

CsvTable spectrum_table(const Spectrum& spec) {
  CsvTable t{{"freq_khz", "magnitude"}, {{}, {}}};
  for (std::size_t k = 0; k < spec.frequencies.size(); ++k) {
    const double f = spec.frequencies[k] * 1e-3;
    if (f > kSpectrumMaxKhz) break;
    t.columns[0].push_back(f);
    t.columns[1].push_back(spec.magnitudes[k]);
  }
  return t;
}

std::vector<double> poisson(double n_bar, std::size_t size) {
  std::vector<double> p(size);
  double term = std::exp(-n_bar);
  for (std::size_t n = 0; n < size; ++n) {
    if (n > 0) term *= n_bar / static_cast<double>(n);
    p[n] = term;
  }
  return p;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  double tv = 0.0;
  for (std::size_t n = 0; n < std::max(p.size(), q.size()); ++n) {
    tv += std::abs((n < p.size() ? p[n] : 0.0) - (n < q.size() ? q[n] : 0.0));
  }
  return 0.5 * tv;
}

CsvTable distribution_table(const PhotonExtraction& ex, const std::vector<double>* reference) {
  CsvTable t{{"n", "p", "center_khz", "expected_center_khz"}, {{}, {}, {}, {}}};
  if (reference) {
    t.header.push_back("poisson");
    t.columns.emplace_back();
  }
  for (const auto& pk : ex.peaks) {
    t.columns[0].push_back(pk.n);
    t.columns[1].push_back(ex.p(pk.n));
    t.columns[2].push_back(pk.center * 1e-3);
    t.columns[3].push_back(pk.expected_center * 1e-3);
    if (reference) t.columns[4].push_back((*reference)[static_cast<std::size_t>(pk.n)]);
  }
  return t;
}

std::vector<double> to_vector(const RVector& v) { return {v.data(), v.data() + v.size()}; }

// --- individual scenarios ---

ScenarioResult vacuum_rabi(const ScenarioConfig& c) {
  const auto& s = c.sequence;
  const ProbeSweep sweep = sweep_rabi(0.0, grid_us(0.0, s.vacuum_te_max_us, s.te_step_us), c.physics, c.physics.bath());
  ScenarioResult r;
  r.table = sweep_table(sweep);
  r.plot = sweep_plot(sweep, "Vacuum Rabi oscillation", "interaction time (us)");
  r.plot.series[0].x = scaled(sweep.t_i, 1e6);
  return r;
}

ProbeSweep revival_sweep(const ScenarioConfig& c) {
  const auto& s = c.sequence;
  return sweep_rabi(c.injection_beta(), grid_us(0.0, s.revival_te_max_us, s.te_step_us), c.physics,
                    c.physics.bath());
}

ScenarioResult revival(const ScenarioConfig& c) {
  const ProbeSweep sweep = revival_sweep(c);
  ScenarioResult r;
  r.table = sweep_table(sweep);
  r.plot = sweep_plot(sweep, fmt::format("Collapse and revival, nbar = {}", num(std::norm(c.injection_beta()))));
  const RevivalTimescales ts = timescales(std::norm(c.injection_beta()), c.physics.omega0);
  r.summary.emplace_back("revival_time_estimate_us", num(to_us(ts.t_r)));
  return r;
}

ScenarioResult revival_spectrum(const ScenarioConfig& c) {
  const ProbeSweep sweep = revival_sweep(c);
  const RevivalAnalysis a = analyze_revival(sweep, c.physics.omega0);
  const double n_bar = std::norm(c.injection_beta());
  const auto ref = poisson(n_bar, static_cast<std::size_t>(a.extraction.p.size()));
  ScenarioResult r;
  r.table = distribution_table(a.extraction, &ref);
  r.extra_tables.emplace_back("spectrum", spectrum_table(a.spectrum));
  r.plot = {"Photon-number distribution from the revival spectrum",
            "n",
            "p(n)",
            {{"extracted", r.table.column("n"), r.table.column("p"), SeriesStyle::kBars},
             {fmt::format("Poisson({})", num(n_bar)), r.table.column("n"), ref, SeriesStyle::kMarkers}}};
  r.summary.emplace_back("parity", num(parity_of(a.extraction.p)));
  r.summary.emplace_back("poisson_parity", num(std::exp(-2.0 * n_bar)));
  r.summary.emplace_back("total_variation_vs_poisson", num(total_variation(to_vector(a.extraction.p), ref)));
  r.summary.emplace_back("peak_width_khz", num(a.extraction.width * 1e-3));
  r.summary.emplace_back("peaks_overlapping", a.extraction.overlapping ? "true" : "false");
  return r;
}

ScenarioResult alpha_sweep(const ScenarioConfig& c) {
  const auto& s = c.sequence;
  std::vector<double> alphas;
  const long count = std::lround((s.alpha_max - s.alpha_min) / s.alpha_step);
  for (long k = 0; k <= count; ++k) alphas.push_back(s.alpha_min + static_cast<double>(k) * s.alpha_step);
  ExperimentConfig cfg = c.physics;
  cfg.dim = std::max(cfg.dim, s.alpha_dim);
  const std::vector<double> p_g = sweep_alpha(c.cat_protocol(), alphas, us(s.probe_te_us), cfg, cfg.bath());

  ScenarioResult r;
  r.table = {{"alpha", "p_g"}, {alphas, p_g}};
  r.plot = {fmt::format("Displaced-cat fringes at t'_e = {} us", num(s.probe_te_us)),
            "alpha",
            "P_g",
            {{"P_g", alphas, p_g, SeriesStyle::kMarkers}}};
  try {
    const FringeFit f = cat_size_from_fringes(alphas, p_g);
    std::vector<double> model;
    for (double a : alphas) model.push_back(f.offset + f.amplitude * std::cos(kTwoPi * a / f.period + f.phase));
    r.plot.series.push_back({"cosine fit", alphas, model, SeriesStyle::kLine});
    r.extra_tables.emplace_back(
        "fringe", CsvTable{{"d2", "period", "amplitude", "phase", "offset", "residual_rms"},
                           {{f.d2}, {f.period}, {f.amplitude}, {f.phase}, {f.offset}, {f.residual_rms}}});
    r.summary.emplace_back("cat_size_d2", num(f.d2));
    r.summary.emplace_back("fringe_period", num(f.period));
  } catch (const NumericError& e) {
    r.summary.emplace_back("fringe_fit", std::string("failed: ") + e.what());
  }
  return r;
}

ProbeSweep cat_sweep(const ScenarioConfig& c, double t_d_us) {
  CatProtocol p = c.cat_protocol();
  p.t_d = us(t_d_us);
  const auto& s = c.sequence;
  return sweep_probe_time(p, grid_us(0.0, s.revival_te_max_us, s.te_step_us), c.physics, c.physics.bath());
}

ScenarioResult cat_revival(const ScenarioConfig& c) {
  const ProbeSweep sweep = cat_sweep(c, c.sequence.t_d_us);
  ScenarioResult r;
  r.table = sweep_table(sweep);
  r.plot = sweep_plot(sweep, fmt::format("Displaced cat probe, alpha = {}", num(c.sequence.alpha)));
  const RevivalAnalysis a = analyze_revival(sweep, c.physics.omega0);
  r.summary.emplace_back("spectral_parity", num(parity_of(a.extraction.p)));
  return r;
}

ScenarioResult cat_spectrum(const ScenarioConfig& c) {
  const ProbeSweep sweep = cat_sweep(c, c.sequence.t_d_us);
  const RevivalAnalysis a = analyze_revival(sweep, c.physics.omega0);
  ScenarioResult r;
  r.table = spectrum_table(a.spectrum);
  r.extra_tables.emplace_back("pn", distribution_table(a.extraction, nullptr));
  r.plot = {"Spectrum of the displaced-cat probe signal",
            "frequency (kHz)",
            "|DFT|",
            {{"spectrum", r.table.columns[0], r.table.columns[1], SeriesStyle::kLine}}};
  r.summary.emplace_back("parity", num(parity_of(a.extraction.p)));
  const CMatrix field = prepared_field(c.cat_protocol(), c.physics, c.physics.bath());
  r.summary.emplace_back("field_parity", num(parity_of(photon_distribution(field))));
  return r;
}

ScenarioResult decoherence(const ScenarioConfig& c) {
  const auto& s = c.sequence;
  ScenarioResult r;
  r.table = {{"t_d_us", "t_i_us", "t_e_us", "p_g"}, {{}, {}, {}, {}}};
  r.plot = {"Revival at T_r/2 against delay", "effective time (us)", "P_g", {}};
  std::vector<double> contrast;
  for (double t_d : s.delays_us) {
    const ProbeSweep sweep = cat_sweep(c, t_d);
    std::vector<double> window;
    for (std::size_t k = 0; k < sweep.t_e.size(); ++k) {
      r.table.columns[0].push_back(t_d);
      r.table.columns[1].push_back(sweep.t_i[k] * 1e6);
      r.table.columns[2].push_back(sweep.t_e[k] * 1e6);
      r.table.columns[3].push_back(sweep.p_g[k]);
      const double te_us = sweep.t_e[k] * 1e6;
      if (te_us >= s.decay_window_lo_us - 1e-9 && te_us <= s.decay_window_hi_us + 1e-9) window.push_back(sweep.p_g[k]);
    }
    if (window.size() < 2) throw ConfigError("sequence.decay_window_us holds fewer than two samples");
    contrast.push_back(rms_contrast(window));
    r.plot.series.push_back({fmt::format("t_d = {} us", num(t_d)), scaled(sweep.t_e, 1e6), sweep.p_g});
  }
  CsvTable ct{{"t_d_us", "contrast"}, {s.delays_us, contrast}};
  r.extra_tables.emplace_back("contrast", ct);
  const double n_bar = std::norm(c.injection_beta());
  r.summary.emplace_back("decoherence_time_formula_us",
                         num(to_us(decoherence_time(c.physics.t_cav, n_bar, c.physics.n_th))));
  if (s.delays_us.size() >= 2) {
    r.summary.emplace_back("contrast_time_constant_us", num(exponential_time_constant(s.delays_us, contrast)));
  }
  return r;
}

ScenarioResult fit_pipeline(const ScenarioConfig& c, std::uint64_t seed) {
  const FitFixed fixed{c.physics.v, c.physics.w};
  const VacuumRabiParams truth{c.physics.omega0, c.physics.x0, c.physics.p1, c.physics.detection.a,
                               c.physics.detection.b, c.physics.detection.c, c.physics.detection.d};
  const bool synthetic = c.fit.data.empty();
  SignalTrace data;
  if (synthetic) {
    const double step = c.fit.t_max_us / (c.fit.points - 1);
    data = generate_synthetic(truth, fixed, c.fit.noise_sigma, grid_us(0.0, c.fit.t_max_us, step), seed);
  } else {
    data = trace_from_csv(read_csv(c.fit.data), "t_i_us", "p_g", 1e-6);
  }
  const FitResult fit = fit_vacuum_rabi(data, fixed);

  ScenarioResult r;
  std::vector<double> model;
  for (double t : data.times) model.push_back(model_pg(t, fit.params, fixed));
  r.table = {{"t_i_us", "p_g", "p_g_fit"}, {scaled(data.times, 1e6), data.values, model}};
  r.plot = {"Vacuum Rabi fit",
            "interaction time (us)",
            "P_g",
            {{"data", r.table.columns[0], data.values, SeriesStyle::kMarkers},
             {"fit", r.table.columns[0], model, SeriesStyle::kLine}}};

  // Report in interface units: kHz for omega0/2pi, mm for x0.
  const std::array<double, 7> scale{1e-3 / kTwoPi, 1e3, 1, 1, 1, 1, 1};
  const std::array<std::string_view, 7> unit{"kHz", "mm", "", "", "", "", ""};
  const auto value = fit.params.to_array();
  const auto expected = truth.to_array();
  std::string report;
  CsvTable params{{"index", "value", "sigma"}, {{}, {}, {}}};
  for (std::size_t k = 0; k < value.size(); ++k) {
    const double v = value[k] * scale[k];
    const double e = fit.uncertainties[k] * scale[k];
    const double t = expected[k] * scale[k];
    std::string line = fmt::format("{:<7}= {:.6g} ± {:.3g}", VacuumRabiParams::kNames[k], v, e);
    if (!unit[k].empty()) line += fmt::format(" {}", unit[k]);
    if (k == 3) {
      line += "  (fixed)";
    } else if (synthetic) {
      line += fmt::format("  (generated {:.6g}, z = {:.2f})", t, (v - t) / e);
    }
    report += line + "\n";
    params.columns[0].push_back(static_cast<double>(k));
    params.columns[1].push_back(v);
    params.columns[2].push_back(e);
  }
  report += fmt::format("residual_rms {:.4g}  converged {}  starts {}\n", fit.residual_rms, fit.converged, fit.starts);
  r.report = report;
  r.extra_tables.emplace_back("params", params);
  r.summary.emplace_back("data", synthetic ? "synthetic" : c.fit.data.string());
  r.summary.emplace_back("omega0_khz", num(value[0] * scale[0]));
  r.summary.emplace_back("residual_rms", num(fit.residual_rms));
  r.summary.emplace_back("converged", fit.converged ? "true" : "false");
  return r;
}

ScenarioResult custom(const ScenarioConfig& c) {
  if (c.custom.steps.empty()) throw ConfigError("custom scenario needs [custom] steps");
  for (const auto& st : c.custom.steps) {
    if (std::holds_alternative<step::MeasurePg>(st)) {
      throw ConfigError("custom steps end in a probe sweep; drop 'measure'");
    }
  }
  const ProbeSweep sweep = sweep_after_steps(c.custom.steps, grid_us(0.0, c.custom.te_max_us, c.sequence.te_step_us),
                                             c.physics, c.physics.bath());
  ScenarioResult r;
  r.table = sweep_table(sweep);
  r.plot = sweep_plot(sweep, "Custom sequence probe");
  return r;
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

bool is_scenario(std::string_view name) {
  return std::find(kScenarioNames.begin(), kScenarioNames.end(), name) != kScenarioNames.end();
}

std::vector<double> grid_us(double lo_us, double hi_us, double step_us) {
  if (!(step_us > 0.0) || !(hi_us >= lo_us)) throw DomainError("invalid grid");
  const long count = static_cast<long>(std::floor((hi_us - lo_us) / step_us + 1e-9));
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(count) + 1);
  for (long k = 0; k <= count; ++k) g.push_back(us(lo_us + static_cast<double>(k) * step_us));
  return g;
}

RevivalAnalysis analyze_revival(const ProbeSweep& sweep, double omega0) {
  RevivalAnalysis a;
  a.spectrum = dft_spectrum(preprocess(SignalTrace{sweep.t_e, sweep.p_g}));
  a.extraction = extract_photon_distribution(a.spectrum, omega0);
  return a;
}

double rms_contrast(std::span<const double> p_g) {
  if (p_g.size() < 2) throw EmptyTrace("contrast needs at least two samples");
  const double mean = std::accumulate(p_g.begin(), p_g.end(), 0.0) / static_cast<double>(p_g.size());
  double var = 0.0;
  for (double p : p_g) var += (p - mean) * (p - mean);
  return std::sqrt(2.0 * var / static_cast<double>(p_g.size()));
}

double exponential_time_constant(std::span<const double> t, std::span<const double> contrast) {
  if (t.size() != contrast.size() || t.size() < 2) throw DomainError("need matching samples");
  const double n = static_cast<double>(t.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(contrast[k] > 0.0)) throw DomainError("contrast must be positive");
    mx += t[k];
    my += std::log(contrast[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    sxy += (t[k] - mx) * (std::log(contrast[k]) - my);
    sxx += (t[k] - mx) * (t[k] - mx);
  }
  if (!(sxy < 0.0)) throw FitDiverged("contrast does not decay");
  return -sxx / sxy;
}

ScenarioResult compute_scenario(std::string_view name, const ScenarioConfig& config, std::uint64_t seed) {
  if (name == "fig2a") return vacuum_rabi(config);
  if (name == "fig2b") return revival(config);
  if (name == "fig2c") return revival_spectrum(config);
  if (name == "fig3a") return alpha_sweep(config);
  if (name == "fig3b") return cat_revival(config);
  if (name == "fig3c") return cat_spectrum(config);
  if (name == "fig4") return decoherence(config);
  if (name == "fit") return fit_pipeline(config, seed);
  if (name == "custom") return custom(config);
  throw ConfigError(fmt::format("unknown scenario '{}'", name));
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

std::vector<fs::path> write_scenario(std::string_view name, const ScenarioResult& result, const ScenarioConfig& config,
                                     const RunOptions& options) {
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw IoError("cannot create " + options.out_dir.string() + ": " + ec.message());

  const std::string stem(name);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& file, std::string_view text) {
    const fs::path p = options.out_dir / file;
    write_text(p, text);
    written.push_back(p);
  };
  emit(stem + ".csv", format_csv(result.table));
  for (const auto& [suffix, table] : result.extra_tables) emit(stem + "_" + suffix + ".csv", format_csv(table));
  emit(stem + ".svg", render_svg(result.plot));
  if (!result.report.empty()) emit(stem + "_report.txt", result.report);

  std::string meta;
  meta += "tool = revival-lab\n";
  meta += fmt::format("version = {}\n", REVIVAL_LAB_VERSION);
  meta += fmt::format("scenario = {}\n", name);
  meta += fmt::format("config_sha256 = {}\n", sha256_hex(config.text));
  meta += fmt::format("seed = {}\n", options.seed);
  meta += fmt::format("tol = {}\n", config.physics.tol);
  meta += fmt::format("dim = {}\n", config.physics.dim);
  for (const auto& [key, value] : result.summary) meta += fmt::format("{} = {}\n", key, value);
  emit(stem + ".meta", meta);
  return written;
}

}  // namespace revival::cli

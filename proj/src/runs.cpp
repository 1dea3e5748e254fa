#include "afc/runs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "afc/constants.hpp"
#include "afc/error.hpp"
#include "afc/io.hpp"
#include "afc/memory.hpp"
#include "afc/parallel.hpp"
#include "afc/pulses.hpp"
#include "afc/stirapoz.hpp"

namespace afc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Grid-refinement gates (per-class ρ33, efficiencies).
constexpr double kRho33Gate = 1e-6;
constexpr double kEfficiencyGate = 0.01;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

BatchOptions batch_options(const ExperimentConfig& config, unsigned threads) {
  BatchOptions b;
  b.threads = threads;
  b.evolve.policy = config.step_policy();
  b.evolve.t_end = config.t_end();
  return b;
}

json analytic_json(const AtomicSystem& s, const Drive& d) {
  const double rabi0 = d.train.peak_rabi();
  const double det = std::abs(d.pump_detuning0);
  const bool has_det = det > 0.0;
  const AnalyticAfc a = afc_metrics_analytic(rabi0, d.train.sigma, d.train.t_int,
                                             has_det ? det : 1.0, s);
  json j = metrics_json(a.metrics, "analytic");
  if (!has_det) {
    j["peak_fwhm_rad_s"] = nullptr;
    j["finesse"] = nullptr;
  }
  j["fwhm_valid"] = has_det && a.fwhm_valid;
  j["fwhm_valid_omega12"] = has_det && a.fwhm_valid_omega12;
  if (has_det) {
    const DesignConditions dc = design_conditions(rabi0, d.train.sigma, det, s);
    j["design"] = {{"finesse_parameter", dc.finesse_parameter},
                   {"finesse_ok", dc.finesse_ok},
                   {"ratio_ok", dc.ratio_ok}};
  }
  return j;
}

struct CombMeasurement {
  PeakSet peaks;
  MeasuredAfc measured;
  std::optional<CombFit> fit;
  std::string fit_error;
  double background = kNaN;
};

CombMeasurement measure(const AfcProfile& profile, double min_prominence) {
  CombMeasurement m;
  m.peaks = detect_peaks(profile, min_prominence);
  m.measured = measure_afc(m.peaks);
  try {
    m.fit = fit_comb_model(profile, m.peaks);
  } catch (const NumericalError& e) {
    m.fit_error = e.what();
  }
  m.background = inter_tooth_background(profile, m.peaks);
  return m;
}

json measured_json(const CombMeasurement& m) {
  json j = metrics_json(m.measured.metrics, "measured");
  j["n_peaks_raw"] = m.measured.n_peaks_raw;
  j["n_peaks_base"] = m.measured.n_peaks_base;
  j["n_core"] = m.measured.n_core;
  j["background_rho33"] = number_or_null(m.background);
  j["envelope"] = {{"amplitude", m.peaks.envelope.amplitude},
                   {"center_rad_s", m.peaks.envelope.center},
                   {"gamma_rad_s", m.peaks.envelope.gamma}};
  j["peaks"] = {{"centers_rad_s", m.peaks.centers},
                {"heights", m.peaks.heights},
                {"fwhms_rad_s", m.peaks.fwhms}};
  return j;
}

json fit_json(const CombMeasurement& m) {
  if (!m.fit) return {{"method", "fit"}, {"error", m.fit_error}};
  const CombFit& f = *m.fit;
  AfcMetrics metrics;
  metrics.gamma = f.gamma;
  metrics.delta_sep = f.delta_sep;
  metrics.peak_fwhm = f.fwhm;
  metrics.finesse = f.delta_sep / f.fwhm;
  metrics.retrieval_time = constants::two_pi / f.delta_sep;
  metrics.n_peaks = 2.0 * std::sqrt(2.0 * constants::pi) * f.gamma / f.delta_sep;
  json j = metrics_json(metrics, "fit");
  j["residual_rms"] = f.residual;
  j["iterations"] = f.iterations;
  j["center_rad_s"] = f.center;
  j["tooth_offset_rad_s"] = f.tooth_offset;
  return j;
}

json comb_numerics(const VelocityComb& c) {
  return {{"isa", c.params.isa},
          {"rk4_step_s", c.params.step},
          {"t_end_s", c.params.t_end},
          {"v_min_m_s", c.grid.v_min()},
          {"v_max_m_s", c.grid.v_max()},
          {"v_points", c.grid.size()}};
}

void write_comb_csvs(const fs::path& out, const PreparedComb& p, std::vector<std::string>& files) {
  io::Csv comb({"v_m_s", "rho33", "mb_density", "weighted"});
  for (std::size_t i = 0; i < p.comb.grid.size(); ++i) {
    comb.row({p.comb.grid[i], p.comb.rho33[i], maxwell_boltzmann(p.comb.grid[i], p.gas),
              p.comb.weighted[i]});
  }
  comb.write(out / "comb.csv");
  files.push_back("comb.csv");

  const AfcProfile afc = vc_to_afc(p.comb, p.omega_map);
  io::Csv prof({"delta_rad_s", "rho33"});
  for (std::size_t i = 0; i < afc.delta.size(); ++i) prof.row({afc.delta[i], afc.rho33[i]});
  prof.write(out / "afc.csv");
  files.push_back("afc.csv");
}

void finish(const fs::path& out, const std::string& command, const ExperimentConfig& config,
            RunReport& report, const json& numerics) {
  report.artifacts.push_back("manifest.json");
  io::write_json(out / "manifest.json", manifest_json(command, config, report.artifacts, numerics));
}

std::string fmt_pp(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Everything a store-type run produces, shared with the sweep cells.
struct StoreOutcome {
  MemoryResult result;
  std::optional<CombMeasurement> measurement;
  std::string measurement_error;
};

StoreOutcome store_once(const PreparedComb& p, const StorageConfig& sc, double min_prominence,
                        const MemoryOptions& mo = {}) {
  StoreOutcome o;
  o.result = propagate(p.comb, sc, p.system, p.gas, mo);
  try {
    o.measurement = measure(vc_to_afc(p.comb, p.omega_map), min_prominence);
  } catch (const NumericalError& e) {
    o.measurement_error = e.what();
  }
  return o;
}

}  // namespace

json metrics_json(const AfcMetrics& m, const std::string& method) {
  return {{"gamma_rad_s", number_or_null(m.gamma)},
          {"delta_sep_rad_s", number_or_null(m.delta_sep)},
          {"n_peaks", number_or_null(m.n_peaks)},
          {"peak_fwhm_rad_s", number_or_null(m.peak_fwhm)},
          {"finesse", number_or_null(m.finesse)},
          {"retrieval_time_s", number_or_null(m.retrieval_time)},
          {"method", method}};
}

json manifest_json(const std::string& command, const ExperimentConfig& config,
                   const std::vector<std::string>& artifacts, const json& numerics) {
  return {{"tool", "afcsim"},
          {"version", AFC_VERSION},
          {"command", command},
          {"config", config.to_json()},
          {"artifacts", artifacts},
          {"numerics", numerics}};
}

PreparedComb prepare_comb(const ExperimentConfig& config, unsigned threads) {
  PreparedComb p;
  p.system = config.atom();
  p.drive = config.drive();
  p.gas = config.gas();
  p.omega_map = config.afc_map(p.system);
  const VelocityGrid grid =
      config.velocity_grid().value_or(default_comb_grid(p.system, p.drive, p.gas, p.omega_map));
  CombOptions co;
  co.batch = batch_options(config, threads);
  p.comb = velocity_comb(p.system, p.drive, p.gas, grid, co);
  return p;
}

RunReport run_metrics(const ExperimentConfig& config, const RunOptions& options) {
  const AtomicSystem s = config.atom();
  const Drive d = config.drive();
  RunReport report;
  json j;
  j["analytic"] = analytic_json(s, d);
  const double rabi0 = d.train.peak_rabi();
  j["system"] = {{"omega13_rad_s", s.omega13()},
                 {"omega34_rad_s", s.omega34()},
                 {"xi", s.xi()},
                 {"r", s.r()},
                 {"oz_threshold", std::sqrt(s.omega32 / s.omega13())},
                 {"detuning_over_rabi", std::abs(d.pump_detuning0) / rabi0}};
  const Adiabaticity ad = check_adiabaticity(d.train);
  j["adiabaticity"] = {{"area", ad.area}, {"ok", ad.ok}};
  io::write_json(options.out / "metrics.json", j);
  report.artifacts.push_back("metrics.json");
  report.summary = {{"finesse", j["analytic"]["finesse"]},
                    {"delta_sep_rad_s", j["analytic"]["delta_sep_rad_s"]}};
  finish(options.out, "metrics", config, report, json::object());
  return report;
}

RunReport run_comb(const ExperimentConfig& config, const RunOptions& options) {
  RunReport report;
  const PreparedComb p = prepare_comb(config, options.threads);
  write_comb_csvs(options.out, p, report.artifacts);

  json j;
  j["analytic"] = analytic_json(p.system, p.drive);
  const CombMeasurement m = measure(vc_to_afc(p.comb, p.omega_map), config.min_prominence());
  j["measured"] = measured_json(m);
  j["fit"] = fit_json(m);
  j["omega_map_rad_s"] = p.omega_map;

  if (options.check_convergence) {
    const ConvergenceReport cr = step_halving_check(p.system, p.drive, p.comb.grid.values(),
                                                    p.comb.rho33,
                                                    batch_options(config, options.threads));
    const bool ok = cr.max_abs_change <= kRho33Gate;
    j["convergence"] = {{"max_abs_change_rho33", cr.max_abs_change},
                        {"v_at_max_m_s", cr.v_at_max},
                        {"gate", kRho33Gate},
                        {"pass", ok}};
    if (!ok) {
      report.converged = false;
      report.convergence_note = "step halving changed rho33 by " + fmt_pp(cr.max_abs_change) +
                                " at v=" + fmt_pp(cr.v_at_max) + " m/s";
    }
  }
  io::write_json(options.out / "metrics.json", j);
  report.artifacts.push_back("metrics.json");
  report.summary = {{"n_peaks", m.measured.metrics.n_peaks},
                    {"finesse", m.measured.metrics.finesse},
                    {"delta_sep_rad_s", m.measured.metrics.delta_sep}};
  finish(options.out, "comb", config, report, comb_numerics(p.comb));
  return report;
}

RunReport run_store(const ExperimentConfig& config, const RunOptions& options) {
  RunReport report;
  const PreparedComb p = prepare_comb(config, options.threads);
  const StorageConfig sc = config.storage();
  const std::size_t spin_stride = config.values().at("storage").count("spin_stride")
                                      ? std::stoull(config.values().at("storage").at("spin_stride"))
                                      : 0;
  MemoryOptions mo;
  mo.spin_stride = spin_stride;
  const StoreOutcome o = store_once(p, sc, config.min_prominence(), mo);
  const MemoryResult& r = o.result;

  write_comb_csvs(options.out, p, report.artifacts);

  // field.csv: intensities at both faces.
  {
    io::Csv csv({"t_s", "intensity_z0", "intensity_zL"});
    const std::size_t nz = r.z.size();
    for (std::size_t it = 0; it < r.t.size(); ++it) {
      csv.row({r.t[it], std::norm(r.at(it, 0)), std::norm(r.at(it, nz - 1))});
    }
    csv.write(options.out / "field.csv");
    report.artifacts.push_back("field.csv");
  }
  // spacetime.csv: I(z,t) = |E(z,t)|² / |E(0,t_c)|², time axis decimated.
  {
    const double peak = 1.0 / (sc.tau_p * std::sqrt(constants::pi));
    const std::size_t points = config.spacetime_t_points();
    const std::size_t stride = std::max<std::size_t>(1, (r.t.size() + points - 1) / points);
    io::Csv csv({"z_m", "t_s", "intensity"});
    for (std::size_t j = 0; j < r.z.size(); ++j) {
      for (std::size_t it = 0; it < r.t.size(); it += stride) {
        csv.row({r.z[j], r.t[it], std::norm(r.at(it, j)) / peak});
      }
    }
    csv.write(options.out / "spacetime.csv");
    report.artifacts.push_back("spacetime.csv");
  }
  if (spin_stride > 0 && !r.spin.empty()) {
    io::Csv csv({"t_s", "z_m", "delta_rad_s", "re", "im"});
    const std::size_t nk = r.delta.size();
    for (const auto& snap : r.spin) {
      for (std::size_t j = 0; j < r.z.size(); ++j) {
        for (std::size_t k = 0; k < nk; ++k) {
          const auto s = snap.s[j * nk + k];
          csv.row({snap.t, r.z[j], r.delta[k], s.real(), s.imag()});
        }
      }
    }
    csv.write(options.out / "spin.csv");
    report.artifacts.push_back("spin.csv");
  }

  // The other retrieval variants, for comparison.
  json retrieval;
  auto variant = [&](RetrievalMode mode, bool conj) -> double {
    if (mode == sc.mode && (mode == RetrievalMode::forward || conj == sc.conjugate_on_switch)) {
      return r.eta_r;
    }
    StorageConfig alt = sc;
    alt.mode = mode;
    alt.conjugate_on_switch = conj;
    return propagate(p.comb, alt, p.system, p.gas).eta_r;
  };
  retrieval["backward"] = variant(RetrievalMode::backward, false);
  retrieval["backward_conjugate"] = variant(RetrievalMode::backward, true);
  retrieval["forward"] = variant(RetrievalMode::forward, false);

  json j;
  j["eta_s"] = r.eta_s;
  j["eta_r"] = r.eta_r;
  j["echo_time_s"] = r.echo_time;
  j["od_effective"] = number_or_null(r.od_effective);
  j["transmitted"] = r.transmitted;
  j["input_norm"] = r.input_norm;
  j["t_switch_s"] = r.t_switch;
  j["t_f_s"] = r.t_f;
  j["coupling"] = r.coupling;
  j["delta_c0_rad_s"] = r.delta_c0;
  j["mode"] = std::string(to_string(r.mode));
  j["conjugate"] = sc.conjugate_on_switch;
  j["retrieval"] = retrieval;
  if (o.measurement) {
    const double fin = o.measurement->measured.metrics.finesse;
    j["comb"] = measured_json(*o.measurement);
    // od_effective = -ln(1 - η_s) already carries the 1/𝓕 dilution of the comb.
    const double od = r.od_effective * fin;
    j["od_comb_estimate"] = number_or_null(od);
    j["analytic_efficiency"] =
        number_or_null(std::isfinite(od) && od > 0.0 ? analytic_efficiency(od, fin) : kNaN);
  } else {
    j["comb"] = {{"error", o.measurement_error}};
  }
  j["config"] = config.to_json();

  if (options.check_convergence) {
    StorageConfig fine = sc;
    fine.dt = 0.5 * (sc.dt > 0.0 ? sc.dt : sc.tau_p / 50.0);
    fine.z_points = 2 * sc.z_points - 1;
    const MemoryResult rf = propagate(p.comb, fine, p.system, p.gas);
    const double ds = std::abs(rf.eta_s - r.eta_s);
    const double dr = std::abs(rf.eta_r - r.eta_r);
    const bool ok = ds < kEfficiencyGate && dr < kEfficiencyGate;
    j["convergence"] = {{"delta_eta_s", ds}, {"delta_eta_r", dr}, {"gate", kEfficiencyGate},
                        {"pass", ok}};
    if (!ok) {
      report.converged = false;
      report.convergence_note = "refined grid moved eta_s by " + fmt_pp(ds) + ", eta_r by " + fmt_pp(dr);
    }
  }
  io::write_json(options.out / "memory.json", j);
  report.artifacts.push_back("memory.json");
  report.summary = {{"eta_s", r.eta_s}, {"eta_r", r.eta_r}, {"echo_time_s", r.echo_time}};

  json numerics = comb_numerics(p.comb);
  numerics["memory_t_points"] = r.t.size();
  numerics["memory_z_points"] = r.z.size();
  finish(options.out, "store", config, report, numerics);
  return report;
}

namespace {

bool wants(const std::vector<std::string>& outs, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (std::find(outs.begin(), outs.end(), n) != outs.end()) return true;
  }
  return false;
}

struct CellResult {
  std::vector<double> values;
  std::string status = "ok";
  json manifest;
};

CellResult run_cell(const ExperimentConfig& cell, const SweepSpec& spec, unsigned threads) {
  CellResult out;
  out.values.assign(spec.outputs.size(), kNaN);
  const auto& outs = spec.outputs;
  try {
    std::map<std::string, double> v;
    const AtomicSystem s = cell.atom();
    const Drive d = cell.drive();
    if (wants(outs, {"finesse_analytic", "finesse_parameter"})) {
      const double det = std::abs(d.pump_detuning0);
      const double rabi0 = d.train.peak_rabi();
      v["finesse_analytic"] = afc_metrics_analytic(rabi0, d.train.sigma, d.train.t_int, det, s).metrics.finesse;
      v["finesse_parameter"] = design_conditions(rabi0, d.train.sigma, det, s).finesse_parameter;
    }
    const bool need_memory =
        wants(outs, {"eta_s", "eta_r", "echo_time_s", "od_effective", "transmitted", "analytic_efficiency"});
    const bool need_measure = wants(outs, {"gamma_rad_s", "delta_sep_rad_s", "peak_fwhm_rad_s", "finesse",
                                           "n_peaks", "analytic_efficiency"});
    if (need_memory || need_measure || wants(outs, {"mean_rho33"})) {
      const PreparedComb p = prepare_comb(cell, threads);
      double mean = 0.0;
      for (double x : p.comb.rho33) mean += x;
      v["mean_rho33"] = mean / static_cast<double>(p.comb.rho33.size());
      std::optional<CombMeasurement> m;
      if (need_measure) {
        m = measure(vc_to_afc(p.comb, p.omega_map), cell.min_prominence());
        v["gamma_rad_s"] = m->measured.metrics.gamma;
        v["delta_sep_rad_s"] = m->measured.metrics.delta_sep;
        v["peak_fwhm_rad_s"] = m->measured.metrics.peak_fwhm;
        v["finesse"] = m->measured.metrics.finesse;
        v["n_peaks"] = m->measured.metrics.n_peaks;
      }
      if (need_memory) {
        const MemoryResult r = propagate(p.comb, cell.storage(), p.system, p.gas);
        v["eta_s"] = r.eta_s;
        v["eta_r"] = r.eta_r;
        v["echo_time_s"] = r.echo_time;
        v["od_effective"] = r.od_effective;
        v["transmitted"] = r.transmitted;
        if (m && std::isfinite(r.od_effective) && r.od_effective > 0.0) {
          const double fin = m->measured.metrics.finesse;
          v["analytic_efficiency"] = analytic_efficiency(r.od_effective * fin, fin);
        }
      }
    }
    for (std::size_t k = 0; k < outs.size(); ++k) {
      const auto it = v.find(outs[k]);
      if (it != v.end()) out.values[k] = it->second;
    }
  } catch (const NumericalError& e) {
    out.status = std::string("numerical_error: ") + e.what();
  } catch (const DomainError& e) {
    out.status = std::string("domain_error: ") + e.what();
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

RunReport run_sweep(const ExperimentConfig& config, const RunOptions& options) {
  const SweepSpec spec = config.sweep();
  const std::size_t n = spec.cells();

  // Resolve every cell first so configuration mistakes surface before any work.
  std::vector<ExperimentConfig> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ExperimentConfig c = config;
    for (const auto& [path, value] : spec.cell(i)) c.set(path, value);
    c.atom();
    c.drive();
    if (wants(spec.outputs, {"eta_s", "eta_r", "echo_time_s", "od_effective", "transmitted",
                             "analytic_efficiency"})) {
      c.storage();
    }
    cells.push_back(std::move(c));
  }

  const bool outer = n >= options.threads;
  const unsigned inner = outer ? 1u : options.threads;
  std::vector<CellResult> results(n);
  parallel_for(n, outer ? options.threads : 1u,
               [&](std::size_t i) { results[i] = run_cell(cells[i], spec, inner); });

  std::string table = "cell";
  for (const auto& a : spec.axes) table += "," + a.path;
  for (const auto& o : spec.outputs) table += "," + o;
  table += ",status\n";
  std::size_t failed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    table += std::to_string(i);
    for (const auto& [path, value] : spec.cell(i)) table += "," + csv_field(value);
    for (double x : results[i].values) table += "," + (std::isnan(x) ? std::string() : io::format_double(x));
    table += "," + csv_field(results[i].status) + "\n";
    if (results[i].status != "ok") ++failed;
  }
  RunReport report;
  io::write_text_atomic(options.out / "sweep.csv", table);
  report.artifacts.push_back("sweep.csv");

  if (options.keep_cells) {
    for (std::size_t i = 0; i < n; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "cell_%04zu", i);
      json result = {{"status", results[i].status}};
      for (std::size_t k = 0; k < spec.outputs.size(); ++k) {
        result[spec.outputs[k]] = number_or_null(results[i].values[k]);
      }
      const fs::path dir = options.out / "cells" / name;
      io::write_json(dir / "result.json", result);
      io::write_json(dir / "manifest.json",
                     manifest_json("store", cells[i], {"result.json"}, json::object()));
    }
  }
  report.summary = {{"cells", n}, {"failed", failed}};
  finish(options.out, "sweep", config, report, {{"cells", n}});
  return report;
}

RunReport run_stirap_map(const ExperimentConfig& config, const RunOptions& options) {
  AtomicSystem s = config.atom();
  const OzSettings oz = config.oz();
  if (oz.mode == OzMode::width) {
    s.gamma21 = 0.0;
    s.gamma23 = 0.0;
  }
  const Drive d = config.drive();
  const double rabi0 = d.train.peak_rabi();

  std::vector<double> ratios(oz.ratios);
  for (std::size_t i = 0; i < oz.ratios; ++i) {
    ratios[i] = oz.ratio_max * static_cast<double>(i) / static_cast<double>(oz.ratios - 1);
  }
  const std::vector<double> v = default_oz_velocities(rabi0, s, oz.velocities);
  BatchOptions b = batch_options(config, options.threads);
  const OzMap map = oz_map(s, d.train, ratios, v, b);

  RunReport report;
  {
    io::Csv csv({"delta_over_omega", "v_m_s", "rho33"});
    for (std::size_t ir = 0; ir < ratios.size(); ++ir) {
      for (std::size_t iv = 0; iv < v.size(); ++iv) csv.row({ratios[ir], v[iv], map.at(ir, iv)});
    }
    csv.write(options.out / "ozmap.csv");
    report.artifacts.push_back("ozmap.csv");
  }
  json widths = json::array();
  {
    io::Csv csv({"delta_over_omega", "vs_plus_m_s", "vs_minus_m_s", "vp_plus_m_s", "vp_minus_m_s"});
    for (std::size_t ir = 0; ir < ratios.size(); ++ir) {
      const OzCurves c = oz_curves(ratios[ir] * rabi0, rabi0, s);
      csv.row({ratios[ir], c.vs_plus, c.vs_minus, c.vp_plus.value_or(kNaN), c.vp_minus.value_or(kNaN)});
      if (ratios[ir] > c.threshold && ratios[ir] > 0.0) {
        const StirapWidths w = stirap_widths(ratios[ir] * rabi0, rabi0, s);
        std::vector<double> row(map.rho33.begin() + static_cast<std::ptrdiff_t>(ir * v.size()),
                                map.rho33.begin() + static_cast<std::ptrdiff_t>((ir + 1) * v.size()));
        double fwhm = kNaN;
        try {
          fwhm = profile_fwhm(v, row);
        } catch (const NumericalError&) {
        }
        widths.push_back({{"delta_over_omega", ratios[ir]},
                          {"fwhm_m_s", number_or_null(fwhm)},
                          {"w_zone_m_s", w.width_v},
                          {"w_sp_m_s", w.w_sp}});
      }
    }
    csv.write(options.out / "ozcurves.csv");
    report.artifacts.push_back("ozcurves.csv");
  }
  const double containment = map.containment(s);
  json j = {{"containment", containment},
            {"threshold", std::sqrt(s.omega32 / s.omega13())},
            {"mode", oz.mode == OzMode::width ? "width" : "figure"},
            {"rabi0_rad_s", rabi0},
            {"widths", widths}};
  io::write_json(options.out / "oz.json", j);
  report.artifacts.push_back("oz.json");
  report.summary = {{"containment", containment}};
  finish(options.out, "stirap-map", config, report, {{"isa", std::string(kernels::to_string(kernels::kernels().isa))}});
  return report;
}

RunReport run_ofc(const ExperimentConfig& config, const RunOptions& options) {
  const Drive d = config.drive();
  const PulseTrain& tr = d.train;
  const OfcSettings st = config.ofc();
  const double span = st.span > 0.0 ? st.span : 12.0 / tr.sigma;
  const double tooth = constants::two_pi / tr.t_int;
  std::size_t n = st.points;
  if (n == 0) n = static_cast<std::size_t>(std::ceil(span / (tooth / 32.0))) + 1;
  if (n < 2) throw ConfigError("grid.ofc_points", "need at least 2 points");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = -0.5 * span + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  const OfcSpectrum pump = ofc_spectrum(tr, Field::pump, w);
  const OfcSpectrum dump = ofc_spectrum(tr, Field::dump, w);

  RunReport report;
  for (const auto* spec : {&pump, &dump}) {
    io::Csv csv({"omega_rad_s", "re", "im", "abs"});
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = spec->amplitudes[i];
      csv.row({w[i], a.real(), a.imag(), std::abs(a)});
    }
    const std::string name = spec == &pump ? "ofc_pump.csv" : "ofc_dump.csv";
    csv.write(options.out / name);
    report.artifacts.push_back(name);
  }
  {
    io::Csv csv({"t_s", "omega_p_rad_s", "omega_d_rad_s"});
    const double t0 = -4.0 * tr.sigma_e;
    const double t1 = tr.tau() + 4.0 * tr.sigma_e;
    const double dt = tr.sigma / 4.0;
    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt));
    for (std::size_t i = 0; i <= steps; ++i) {
      const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps);
      csv.row({t, omega_p(t, tr), omega_d(t, tr)});
    }
    csv.write(options.out / "pulses.csv");
    report.artifacts.push_back("pulses.csv");
  }
  json j = {{"tooth_spacing_rad_s", tooth},
            {"envelope_bandwidth_rad_s", pump.envelope_bandwidth},
            {"points", n},
            {"span_rad_s", span}};
  io::write_json(options.out / "ofc.json", j);
  report.artifacts.push_back("ofc.json");
  report.summary = {{"points", n}};
  finish(options.out, "ofc", config, report, json::object());
  return report;
}

}  // namespace afc

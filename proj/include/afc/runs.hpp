#pragma once

// Command orchestration behind `afcsim`: each run reads a resolved
// ExperimentConfig, writes its artifacts plus manifest.json into one output
// directory and returns a short report for the command line.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afc/bloch.hpp"
#include "afc/comb.hpp"
#include "afc/config.hpp"

namespace afc {

struct RunOptions {
  std::filesystem::path out;
  unsigned threads = 1;
  bool check_convergence = false;
  bool keep_cells = false;  ///< sweep only
};

struct RunReport {
  std::vector<std::string> artifacts;  ///< file names relative to `out`
  bool converged = true;               ///< false only when a requested check failed
  std::string convergence_note;
  nlohmann::json summary;              ///< a few headline numbers for stderr
};

/// Comb preparation shared by the commands: system, drive, grid and ρ33(v).
struct PreparedComb {
  AtomicSystem system;
  Drive drive;
  GasParameters gas;
  VelocityComb comb;
  double omega_map = 0.0;
};

PreparedComb prepare_comb(const ExperimentConfig& config, unsigned threads);

/// {gamma_rad_s, delta_sep_rad_s, n_peaks, peak_fwhm_rad_s, finesse, retrieval_time_s, method}
nlohmann::json metrics_json(const AfcMetrics& m, const std::string& method);

/// The manifest written next to every run's artifacts.
nlohmann::json manifest_json(const std::string& command, const ExperimentConfig& config,
                             const std::vector<std::string>& artifacts,
                             const nlohmann::json& numerics);

RunReport run_metrics(const ExperimentConfig& config, const RunOptions& options);
RunReport run_comb(const ExperimentConfig& config, const RunOptions& options);
RunReport run_store(const ExperimentConfig& config, const RunOptions& options);
RunReport run_sweep(const ExperimentConfig& config, const RunOptions& options);
RunReport run_stirap_map(const ExperimentConfig& config, const RunOptions& options);
RunReport run_ofc(const ExperimentConfig& config, const RunOptions& options);

}  // namespace afc

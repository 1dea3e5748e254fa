#pragma once

// Experiment configuration: an INI-style file with the sections
// [atom] [gas] [pap] [grid] [storage] [sweep]. Every value is validated
// against a fixed schema and normalised at parse time (unit suffixes
// stripped, numbers reprinted exactly), so the resolved table can be echoed
// into a manifest and fed back unchanged. Frequencies are given in Hz and
// turned into rad/s only when the typed objects are built.
//
// See docs/config.md for the key list.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "afc/bloch.hpp"
#include "afc/memory.hpp"
#include "afc/model.hpp"

namespace afc {

struct SweepAxis {
  std::string path;                 ///< "section.key"
  std::vector<std::string> values;  ///< normalised
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  ///< lexicographic by path; the last axis varies fastest
  std::vector<std::string> outputs;
  std::size_t cap = 512;

  std::size_t cells() const;
  /// (path, value) pairs of cell `index`.
  std::vector<std::pair<std::string, std::string>> cell(std::size_t index) const;
};

enum class OzMode { figure, width };

struct OzSettings {
  std::size_t ratios = 61;
  double ratio_max = 3.0;
  std::size_t velocities = 61;
  OzMode mode = OzMode::figure;  ///< width: decay rates forced to 0
};

struct OfcSettings {
  std::size_t points = 0;  ///< 0: chosen from the comb spacing
  double span = 0.0;       ///< rad/s, full width; 0: 12/σ
};

/// Sweep outputs understood by run_sweep.
const std::vector<std::string>& known_sweep_outputs();

class ExperimentConfig {
 public:
  using Table = std::map<std::string, std::map<std::string, std::string>>;

  static ExperimentConfig parse_ini(const std::string& text);
  /// Accepts a bare {section: {key: value}} table or a manifest carrying one
  /// under "config".
  static ExperimentConfig from_json(const nlohmann::json& j);
  /// .json files go through from_json, everything else through parse_ini.
  static ExperimentConfig load(const std::filesystem::path& path);

  const Table& values() const { return table_; }
  nlohmann::json to_json() const;
  bool has_section(std::string_view section) const;

  /// Sets "section.key" from a raw string, validating and normalising it.
  void set(std::string_view path, std::string_view raw);

  AtomicSystem atom() const;
  GasParameters gas() const;
  Drive drive() const;
  StepPolicy step_policy() const;
  /// [pap] t_end_s, 0 when automatic.
  double t_end() const;
  /// Explicit [grid] v_min/v_max/v_points, or nullopt for the automatic grid.
  std::optional<VelocityGrid> velocity_grid() const;
  /// Frequency that maps velocity onto AFC detuning, δ = ω v / c.
  double afc_map(const AtomicSystem& system) const;
  double min_prominence() const;
  StorageConfig storage() const;
  std::size_t spacetime_t_points() const;
  SweepSpec sweep() const;
  OzSettings oz() const;
  OfcSettings ofc() const;

 private:
  void finalize();

  const std::string* find(std::string_view section, std::string_view key) const;
  const std::string& require(std::string_view section, std::string_view key) const;
  double number(std::string_view section, std::string_view key) const;
  std::optional<double> optional_number(std::string_view section, std::string_view key) const;
  std::size_t count(std::string_view section, std::string_view key) const;

  Table table_;
};

}  // namespace afc

#include "afc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "afc/constants.hpp"
#include "afc/error.hpp"
#include "afc/io.hpp"

namespace afc {

namespace {

enum class Kind { frequency, time, length, real, count, boolean, choice, gates, outputs };

constexpr const char* kRequired = nullptr;
constexpr const char* kAuto = "auto";

struct KeySpec {
  std::string_view section;
  std::string_view key;
  Kind kind;
  const char* fallback;  // kRequired, kAuto or a literal default
  std::vector<std::string_view> choices = {};
};

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"atom", "omega12_hz", Kind::frequency, kRequired},
      {"atom", "omega32_hz", Kind::frequency, kRequired},
      {"atom", "omega42_hz", Kind::frequency, "0"},
      {"atom", "gamma21_per_s", Kind::real, kRequired},
      {"atom", "gamma23_per_s", Kind::real, kRequired},
      {"atom", "coherence_decay_per_s", Kind::real, kAuto},
      {"atom", "dipole23_cm", Kind::real, kAuto},

      {"gas", "temperature_k", Kind::real, kAuto},
      {"gas", "mass_u", Kind::real, kAuto},
      {"gas", "density_m3", Kind::real, kRequired},
      {"gas", "eta_m_s", Kind::real, kAuto},

      {"pap", "rabi0_hz", Kind::frequency, kRequired},
      {"pap", "rabi_p0_hz", Kind::frequency, kAuto},
      {"pap", "rabi_d0_hz", Kind::frequency, kAuto},
      {"pap", "n_pulses", Kind::count, kRequired},
      {"pap", "t_int_s", Kind::time, kRequired},
      {"pap", "sigma_s", Kind::time, kRequired},
      {"pap", "sigma_e_s", Kind::time, kAuto},
      {"pap", "detuning0_hz", Kind::frequency, kRequired},
      {"pap", "pump_detuning0_hz", Kind::frequency, kAuto},
      {"pap", "dump_detuning0_hz", Kind::frequency, kAuto},
      {"pap", "drive", Kind::choice, "pap", {"pap", "envelope"}},
      {"pap", "t_end_s", Kind::time, kAuto},

      {"grid", "v_min_m_s", Kind::real, kAuto},
      {"grid", "v_max_m_s", Kind::real, kAuto},
      {"grid", "v_points", Kind::count, kAuto},
      {"grid", "afc_map", Kind::choice, "omega34", {"omega34", "omega32", "omega12", "omega13"}},
      {"grid", "step_factor", Kind::real, "20"},
      {"grid", "sigma_divisor", Kind::real, "10"},
      {"grid", "window_sigmas", Kind::real, "7"},
      {"grid", "envelope_window_sigmas", Kind::real, "4"},
      {"grid", "min_prominence", Kind::real, "0.1"},
      {"grid", "oz_ratios", Kind::count, "61"},
      {"grid", "oz_ratio_max", Kind::real, "3"},
      {"grid", "oz_velocities", Kind::count, "61"},
      {"grid", "oz_mode", Kind::choice, "figure", {"figure", "width"}},
      {"grid", "ofc_points", Kind::count, kAuto},
      {"grid", "ofc_span_hz", Kind::frequency, kAuto},

      {"storage", "delta_s0_hz", Kind::frequency, kRequired},
      {"storage", "delta_c0_hz", Kind::frequency, kAuto},
      {"storage", "omega_c_hz", Kind::frequency, kRequired},
      {"storage", "tau_p_s", Kind::time, kRequired},
      {"storage", "t_c_s", Kind::time, kRequired},
      {"storage", "length_m", Kind::length, kRequired},
      {"storage", "z_points", Kind::count, "101"},
      {"storage", "t_f_s", Kind::time, kAuto},
      {"storage", "coupling", Kind::real, kAuto},
      {"storage", "dt_s", Kind::time, kAuto},
      {"storage", "mode", Kind::choice, "backward", {"backward", "forward"}},
      {"storage", "conjugate", Kind::boolean, "false"},
      {"storage", "gate", Kind::gates, ""},
      {"storage", "spin_stride", Kind::count, "0"},
      {"storage", "spacetime_t_points", Kind::count, "400"},

      {"sweep", "cap", Kind::count, "512"},
      {"sweep", "outputs", Kind::outputs, "eta_s,eta_r,echo_time_s"},
  };
  return keys;
}

const KeySpec* lookup(std::string_view section, std::string_view key) {
  for (const auto& k : schema()) {
    if (k.section == section && k.key == key) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view s) {
  return s == "atom" || s == "gas" || s == "pap" || s == "grid" || s == "storage" || s == "sweep";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string shortest(double x) {
  if (x == 0.0) x = 0.0;
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// Decimal power of the unit suffixes accepted for each kind.
std::optional<int> unit_exponent(Kind kind, std::string_view unit) {
  if (unit.empty()) return 0;
  switch (kind) {
    case Kind::frequency:
      if (unit == "Hz") return 0;
      if (unit == "kHz") return 3;
      if (unit == "MHz") return 6;
      if (unit == "GHz") return 9;
      if (unit == "THz") return 12;
      break;
    case Kind::time:
      if (unit == "s") return 0;
      if (unit == "ms") return -3;
      if (unit == "us" || unit == "\xC2\xB5s" || unit == "\xCE\xBCs") return -6;
      if (unit == "ns") return -9;
      if (unit == "ps") return -12;
      break;
    case Kind::length:
      if (unit == "m") return 0;
      if (unit == "cm") return -2;
      if (unit == "mm") return -3;
      if (unit == "um" || unit == "\xC2\xB5m" || unit == "\xCE\xBCm") return -6;
      break;
    default:
      break;
  }
  return std::nullopt;
}

// Parses "<number>[ ]<unit>". The unit's power of ten is folded into the
// decimal exponent before conversion so "51.72 MHz" becomes exactly the
// double nearest 51.72e6.
double parse_quantity(const std::string& path, Kind kind, std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
                             text[i] == '-' || text[i] == '+' || text[i] == 'e' || text[i] == 'E')) {
    ++i;
  }
  std::string number(text.substr(0, i));
  const std::string unit = trim(text.substr(i));
  const auto exp10 = unit_exponent(kind, unit);
  if (!exp10) throw ConfigError(path, "unknown unit '" + unit + "'");
  if (number.empty()) throw ConfigError(path, "expected a number, got '" + std::string(text) + "'");
  int exponent = *exp10;
  const auto epos = number.find_first_of("eE");
  if (epos != std::string::npos) {
    int e = 0;
    const auto* first = number.data() + epos + 1;
    const auto* last = number.data() + number.size();
    if (first != last && *first == '+') ++first;
    const auto r = std::from_chars(first, last, e);
    if (r.ec != std::errc() || r.ptr != last) {
      throw ConfigError(path, "malformed number '" + number + "'");
    }
    exponent += e;
    number.resize(epos);
  }
  if (exponent != 0) number += "e" + std::to_string(exponent);
  double value = 0.0;
  const auto r = std::from_chars(number.data(), number.data() + number.size(), value);
  if (r.ec != std::errc() || r.ptr != number.data() + number.size() || !std::isfinite(value)) {
    throw ConfigError(path, "malformed number '" + std::string(text) + "'");
  }
  return value;
}

std::string normalize_scalar(const std::string& path, const KeySpec& spec, std::string_view raw) {
  const std::string text = trim(raw);
  if (spec.fallback == kAuto && text == kAuto) return kAuto;
  switch (spec.kind) {
    case Kind::frequency:
    case Kind::time:
    case Kind::length:
    case Kind::real:
      return shortest(parse_quantity(path, spec.kind, text));
    case Kind::count: {
      unsigned long long n = 0;
      const auto r = std::from_chars(text.data(), text.data() + text.size(), n);
      if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        throw ConfigError(path, "expected a non-negative integer, got '" + text + "'");
      }
      return std::to_string(n);
    }
    case Kind::boolean:
      if (text == "true" || text == "yes" || text == "on" || text == "1") return "true";
      if (text == "false" || text == "no" || text == "off" || text == "0") return "false";
      throw ConfigError(path, "expected true/false, got '" + text + "'");
    case Kind::choice:
      for (auto c : spec.choices) {
        if (text == c) return text;
      }
      {
        std::string list;
        for (auto c : spec.choices) list += (list.empty() ? "" : "|") + std::string(c);
        throw ConfigError(path, "expected one of " + list + ", got '" + text + "'");
      }
    case Kind::gates: {
      if (text.empty()) return {};
      std::string out;
      for (const auto& item : split(text, ',')) {
        const auto ends = split(item, ':');
        if (ends.size() != 2) throw ConfigError(path, "gate interval must read t_on:t_off");
        const double on = parse_quantity(path, Kind::time, ends[0]);
        const double off = parse_quantity(path, Kind::time, ends[1]);
        if (!(off > on)) throw ConfigError(path, "gate interval needs t_off > t_on");
        out += (out.empty() ? "" : ",") + shortest(on) + ":" + shortest(off);
      }
      return out;
    }
    case Kind::outputs: {
      std::string out;
      const auto& known = known_sweep_outputs();
      for (const auto& name : split(text, ',')) {
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          throw ConfigError(path, "unknown sweep output '" + name + "'");
        }
        out += (out.empty() ? "" : ",") + name;
      }
      if (out.empty()) throw ConfigError(path, "no sweep outputs requested");
      return out;
    }
  }
  return text;
}

std::pair<std::string, std::string> split_path(std::string_view path) {
  const auto dot = path.find('.');
  if (dot == std::string_view::npos) throw ConfigError(std::string(path), "expected section.key");
  return {std::string(path.substr(0, dot)), std::string(path.substr(dot + 1))};
}

const KeySpec& sweepable(const std::string& path) {
  const auto [section, key] = split_path(path);
  if (section == "sweep") throw ConfigError("sweep." + path, "cannot sweep the sweep section");
  const KeySpec* spec = lookup(section, key);
  if (!spec) throw ConfigError("sweep." + path, "unknown sweep axis");
  return *spec;
}

// "a, b, c", "linspace(a, b, n)" or "logspace(a, b, n)" (geometric).
std::string normalize_axis(const std::string& axis, std::string_view raw) {
  const KeySpec& spec = sweepable(axis);
  const std::string path = "sweep." + axis;
  std::string text = trim(raw);
  std::vector<std::string> values;
  const bool lin = text.rfind("linspace(", 0) == 0;
  const bool log = text.rfind("logspace(", 0) == 0;
  if (lin || log) {
    if (text.back() != ')') throw ConfigError(path, "unterminated range");
    const auto args = split(std::string_view(text).substr(9, text.size() - 10), ',');
    if (args.size() != 3) throw ConfigError(path, "range needs (start, stop, count)");
    if (spec.kind != Kind::frequency && spec.kind != Kind::time && spec.kind != Kind::length &&
        spec.kind != Kind::real) {
      throw ConfigError(path, "ranges need a numeric axis");
    }
    const double a = parse_quantity(path, spec.kind, args[0]);
    const double b = parse_quantity(path, spec.kind, args[1]);
    unsigned n = 0;
    const auto r = std::from_chars(args[2].data(), args[2].data() + args[2].size(), n);
    if (r.ec != std::errc() || n < 2) throw ConfigError(path, "range count must be >= 2");
    if (log && !(a > 0.0 && b > 0.0)) throw ConfigError(path, "logspace needs positive ends");
    for (unsigned i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(n - 1);
      const double x = lin ? a + f * (b - a) : a * std::pow(b / a, f);
      values.push_back(shortest(i + 1 == n ? b : x));
    }
  } else {
    for (const auto& item : split(text, ',')) values.push_back(normalize_scalar(path, spec, item));
  }
  if (values.empty() || (values.size() == 1 && values[0].empty())) {
    throw ConfigError(path, "empty axis");
  }
  std::string out;
  for (const auto& v : values) out += (out.empty() ? "" : ",") + v;
  return out;
}

double hz(double f) { return constants::two_pi * f; }
std::optional<double> hz(std::optional<double> f) {
  return f ? std::optional<double>(hz(*f)) : std::nullopt;
}

}  // namespace

const std::vector<std::string>& known_sweep_outputs() {
  static const std::vector<std::string> names = {
      "eta_s", "eta_r", "echo_time_s", "od_effective", "transmitted", "analytic_efficiency",
      "gamma_rad_s", "delta_sep_rad_s", "peak_fwhm_rad_s", "finesse", "n_peaks",
      "finesse_analytic", "finesse_parameter", "mean_rho33"};
  return names;
}

std::size_t SweepSpec::cells() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return axes.empty() ? 0 : n;
}

std::vector<std::pair<std::string, std::string>> SweepSpec::cell(std::size_t index) const {
  std::vector<std::pair<std::string, std::string>> out(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto& a = axes[k];
    out[k] = {a.path, a.values[index % a.values.size()]};
    index /= a.values.size();
  }
  return out;
}

ExperimentConfig ExperimentConfig::parse_ini(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "key outside of a section");
    if (!known_section(section)) throw ConfigError(section, "unknown section");
    cfg.table_[section];
    for (const auto& [key, value] : body) cfg.set(section + "." + key, value.data());
  }
  cfg.finalize();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  const nlohmann::json& table = j.contains("config") ? j.at("config") : j;
  if (!table.is_object()) throw ConfigError("", "expected a JSON object of sections");
  ExperimentConfig cfg;
  for (const auto& [section, body] : table.items()) {
    if (!known_section(section)) throw ConfigError(section, "unknown section");
    if (!body.is_object()) throw ConfigError(section, "section must be an object");
    cfg.table_[section];
    for (const auto& [key, value] : body.items()) {
      std::string raw;
      if (value.is_string()) {
        raw = value.get<std::string>();
      } else if (value.is_number() || value.is_boolean()) {
        raw = value.dump();
      } else {
        throw ConfigError(section + "." + key, "expected a string or number");
      }
      cfg.set(section + "." + key, raw);
    }
  }
  cfg.finalize();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const std::exception& e) {
    throw ConfigError("", e.what());
  }
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("", path.string() + ": " + e.what());
    }
    return from_json(j);
  }
  return parse_ini(text);
}

void ExperimentConfig::set(std::string_view path, std::string_view raw) {
  const auto [section, key] = split_path(path);
  if (!known_section(section)) throw ConfigError(std::string(path), "unknown section");
  if (section == "sweep" && key.find('.') != std::string::npos) {
    table_[section][key] = normalize_axis(key, raw);
    return;
  }
  const KeySpec* spec = lookup(section, key);
  if (!spec) throw ConfigError(std::string(path), "unknown key");
  table_[section][key] = normalize_scalar(std::string(path), *spec, raw);
}

void ExperimentConfig::finalize() {
  for (auto& [section, body] : table_) {
    for (const auto& k : schema()) {
      if (k.section != section || k.fallback == kRequired) continue;
      body.try_emplace(std::string(k.key), k.fallback);
    }
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [section, body] : table_) {
    j[section] = nlohmann::json::object();
    for (const auto& [key, value] : body) j[section][key] = value;
  }
  return j;
}

bool ExperimentConfig::has_section(std::string_view section) const {
  return table_.find(std::string(section)) != table_.end();
}

const std::string* ExperimentConfig::find(std::string_view section, std::string_view key) const {
  const auto s = table_.find(std::string(section));
  if (s == table_.end()) return nullptr;
  const auto k = s->second.find(std::string(key));
  return k == s->second.end() ? nullptr : &k->second;
}

const std::string& ExperimentConfig::require(std::string_view section, std::string_view key) const {
  const std::string* v = find(section, key);
  if (!v) {
    throw ConfigError(std::string(section) + "." + std::string(key), "missing required key");
  }
  return *v;
}

double ExperimentConfig::number(std::string_view section, std::string_view key) const {
  const std::string& v = require(section, key);
  double x = 0.0;
  std::from_chars(v.data(), v.data() + v.size(), x);
  return x;
}

std::optional<double> ExperimentConfig::optional_number(std::string_view section,
                                                        std::string_view key) const {
  const std::string* v = find(section, key);
  if (!v || *v == kAuto) return std::nullopt;
  double x = 0.0;
  std::from_chars(v->data(), v->data() + v->size(), x);
  return x;
}

std::size_t ExperimentConfig::count(std::string_view section, std::string_view key) const {
  return static_cast<std::size_t>(std::stoull(require(section, key)));
}

AtomicSystem ExperimentConfig::atom() const {
  AtomicSystem s;
  s.omega12 = hz(number("atom", "omega12_hz"));
  s.omega32 = hz(number("atom", "omega32_hz"));
  s.omega42 = hz(optional_number("atom", "omega42_hz").value_or(0.0));
  s.gamma21 = number("atom", "gamma21_per_s");
  s.gamma23 = number("atom", "gamma23_per_s");
  s.coherence_decay = optional_number("atom", "coherence_decay_per_s");
  s.dipole23 = optional_number("atom", "dipole23_cm");
  s.validate();
  return s;
}

GasParameters ExperimentConfig::gas() const {
  GasParameters g;
  g.temperature = optional_number("gas", "temperature_k").value_or(0.0);
  g.atomic_mass = optional_number("gas", "mass_u").value_or(0.0) * constants::amu;
  g.density = number("gas", "density_m3");
  g.eta_override = optional_number("gas", "eta_m_s");
  if (!g.eta_override && !(g.temperature > 0.0 && g.atomic_mass > 0.0)) {
    throw ConfigError("gas.temperature_k", "temperature_k and mass_u are required unless eta_m_s is set");
  }
  g.validate();
  return g;
}

Drive ExperimentConfig::drive() const {
  const double rabi0 = hz(number("pap", "rabi0_hz"));
  const std::size_t n = count("pap", "n_pulses");
  if (n < 1 || n > 100000) throw ConfigError("pap.n_pulses", "must be in [1, 100000]");
  Drive d;
  d.train = PulseTrain::make(rabi0, static_cast<int>(n), number("pap", "t_int_s"),
                             number("pap", "sigma_s"));
  if (auto p = optional_number("pap", "rabi_p0_hz")) d.train.rabi_p0 = hz(*p);
  if (auto p = optional_number("pap", "rabi_d0_hz")) d.train.rabi_d0 = hz(*p);
  if (auto s = optional_number("pap", "sigma_e_s")) d.train.sigma_e = *s;
  const double det0 = hz(number("pap", "detuning0_hz"));
  d.pump_detuning0 = hz(optional_number("pap", "pump_detuning0_hz")).value_or(det0);
  d.dump_detuning0 = hz(optional_number("pap", "dump_detuning0_hz")).value_or(det0);
  d.mode = require("pap", "drive") == "envelope" ? DriveMode::envelope : DriveMode::pap;
  d.train.validate();
  return d;
}

StepPolicy ExperimentConfig::step_policy() const {
  StepPolicy p;
  if (!has_section("grid")) return p;
  p.step_factor = number("grid", "step_factor");
  p.sigma_divisor = number("grid", "sigma_divisor");
  p.window_sigmas = number("grid", "window_sigmas");
  p.envelope_window_sigmas = number("grid", "envelope_window_sigmas");
  if (!(p.step_factor > 0.0)) throw ConfigError("grid.step_factor", "must be positive");
  if (!(p.sigma_divisor > 0.0)) throw ConfigError("grid.sigma_divisor", "must be positive");
  if (!(p.window_sigmas > 0.0)) throw ConfigError("grid.window_sigmas", "must be positive");
  if (!(p.envelope_window_sigmas > 0.0)) {
    throw ConfigError("grid.envelope_window_sigmas", "must be positive");
  }
  return p;
}

double ExperimentConfig::t_end() const {
  const auto t = optional_number("pap", "t_end_s");
  if (t && !(*t > 0.0)) throw ConfigError("pap.t_end_s", "must be positive");
  return t.value_or(0.0);
}

std::optional<VelocityGrid> ExperimentConfig::velocity_grid() const {
  const auto lo = optional_number("grid", "v_min_m_s");
  const auto hi = optional_number("grid", "v_max_m_s");
  const std::string* np = find("grid", "v_points");
  const bool has_n = np && *np != kAuto;
  if (!lo && !hi && !has_n) return std::nullopt;
  if (!lo || !hi || !has_n) {
    throw ConfigError("grid.v_points", "v_min_m_s, v_max_m_s and v_points go together");
  }
  const std::size_t n = count("grid", "v_points");
  if (!(*hi > *lo) || n < 3) throw ConfigError("grid.v_points", "need v_max > v_min and >= 3 points");
  return VelocityGrid(*lo, *hi, n);
}

double ExperimentConfig::afc_map(const AtomicSystem& system) const {
  const std::string* m = find("grid", "afc_map");
  const std::string which = m ? *m : "omega34";
  if (which == "omega32") return system.omega32;
  if (which == "omega12") return system.omega12;
  if (which == "omega13") return system.omega13();
  return system.omega34();
}

double ExperimentConfig::min_prominence() const {
  const double p = has_section("grid") ? number("grid", "min_prominence") : 0.1;
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("grid.min_prominence", "must lie in (0, 1)");
  return p;
}

StorageConfig ExperimentConfig::storage() const {
  if (!has_section("storage")) throw ConfigError("storage", "missing section");
  StorageConfig c;
  c.delta_s0 = hz(number("storage", "delta_s0_hz"));
  c.delta_c0 = hz(optional_number("storage", "delta_c0_hz"));
  c.omega_c = hz(number("storage", "omega_c_hz"));
  c.tau_p = number("storage", "tau_p_s");
  c.t_c = number("storage", "t_c_s");
  c.length = number("storage", "length_m");
  c.z_points = count("storage", "z_points");
  c.t_f = optional_number("storage", "t_f_s");
  c.coupling = optional_number("storage", "coupling");
  c.dt = optional_number("storage", "dt_s").value_or(0.0);
  c.mode = require("storage", "mode") == "forward" ? RetrievalMode::forward : RetrievalMode::backward;
  c.conjugate_on_switch = require("storage", "conjugate") == "true";
  const std::string& gates = require("storage", "gate");
  if (!gates.empty()) {
    for (const auto& item : split(gates, ',')) {
      const auto ends = split(item, ':');
      c.control_gate.push_back({parse_quantity("storage.gate", Kind::time, ends[0]),
                                parse_quantity("storage.gate", Kind::time, ends[1])});
    }
  }
  c.validate();
  return c;
}

std::size_t ExperimentConfig::spacetime_t_points() const {
  const std::size_t n = has_section("storage") ? count("storage", "spacetime_t_points") : 400;
  if (n < 2) throw ConfigError("storage.spacetime_t_points", "must be >= 2");
  return n;
}

SweepSpec ExperimentConfig::sweep() const {
  if (!has_section("sweep")) throw ConfigError("sweep", "missing section");
  SweepSpec s;
  s.cap = count("sweep", "cap");
  s.outputs = split(require("sweep", "outputs"), ',');
  for (const auto& [key, value] : table_.at("sweep")) {
    if (key.find('.') == std::string::npos) continue;
    s.axes.push_back({key, split(value, ',')});
  }
  if (s.axes.empty()) throw ConfigError("sweep", "no axes (keys of the form section.key)");
  if (s.cells() > s.cap) {
    throw ConfigError("sweep.cap", std::to_string(s.cells()) + " cells exceed the cap of " +
                                       std::to_string(s.cap));
  }
  return s;
}

OzSettings ExperimentConfig::oz() const {
  OzSettings o;
  if (!has_section("grid")) return o;
  o.ratios = count("grid", "oz_ratios");
  o.ratio_max = number("grid", "oz_ratio_max");
  o.velocities = count("grid", "oz_velocities");
  o.mode = require("grid", "oz_mode") == "width" ? OzMode::width : OzMode::figure;
  if (o.ratios < 2) throw ConfigError("grid.oz_ratios", "must be >= 2");
  if (o.velocities < 3) throw ConfigError("grid.oz_velocities", "must be >= 3");
  if (!(o.ratio_max > 0.0)) throw ConfigError("grid.oz_ratio_max", "must be positive");
  return o;
}

OfcSettings ExperimentConfig::ofc() const {
  OfcSettings o;
  if (!has_section("grid")) return o;
  if (const std::string* n = find("grid", "ofc_points"); n && *n != kAuto) o.points = std::stoull(*n);
  if (auto s = optional_number("grid", "ofc_span_hz")) o.span = hz(*s);
  return o;
}

}  // namespace afc

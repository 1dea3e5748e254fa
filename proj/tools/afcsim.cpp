// afcsim: command-line front end.
//
//   afcsim <comb|metrics|store|sweep|stirap-map|ofc> --config FILE --out DIR
//          [--threads N] [--check-convergence] [--set section.key=value ...]
//
// Exit codes: 0 ok, 2 configuration/input error, 3 numerical failure,
// 1 anything else (I/O). Diagnostics go to stderr as key=value lines.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "afc/config.hpp"
#include "afc/error.hpp"
#include "afc/kernels.hpp"
#include "afc/runs.hpp"

namespace {

std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

void log_line(const char* level, const std::string& fields) {
  std::cerr << "afcsim level=" << level << " " << fields << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AFC quantum-memory simulation suite", "afcsim"};
  app.set_version_flag("--version", std::string(AFC_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 0;
  bool check = false;
  bool keep_cells = false;
  std::vector<std::string> overrides;

  using Runner = std::function<afc::RunReport(const afc::ExperimentConfig&, const afc::RunOptions&)>;
  const std::vector<std::tuple<std::string, std::string, Runner>> commands = {
      {"comb", "prepare a comb and measure it (comb.csv, afc.csv, metrics.json)", afc::run_comb},
      {"metrics", "closed-form comb figures of merit only (metrics.json)", afc::run_metrics},
      {"store", "prepare the comb, store and retrieve a photon (field.csv, spacetime.csv, memory.json)",
       afc::run_store},
      {"sweep", "run the [sweep] grid (sweep.csv)", afc::run_sweep},
      {"stirap-map", "STIRAP transfer map and optimal-zone curves (ozmap.csv, ozcurves.csv)",
       afc::run_stirap_map},
      {"ofc", "pulse trains and their comb spectra (pulses.csv, ofc_pump.csv, ofc_dump.csv)", afc::run_ofc},
  };
  std::map<CLI::App*, Runner> runners;
  for (const auto& [name, help, run] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config,-c", config_path, "configuration file (.ini or a manifest .json)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out,-o", out_dir, "output directory")->required();
    sub->add_option("--threads,-j", threads, "worker threads (0: hardware concurrency)");
    sub->add_flag("--check-convergence", check, "rerun on a refined grid and fail on drift");
    sub->add_option("--set", overrides, "override a key, section.key=value (repeatable)");
    if (name == "sweep") sub->add_flag("--keep-cells", keep_cells, "write per-cell manifests");
    runners[sub] = run;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    afc::ExperimentConfig config = afc::ExperimentConfig::load(config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw afc::ConfigError(o, "--set expects section.key=value");
      config.set(o.substr(0, eq), o.substr(eq + 1));
    }
    afc::RunOptions options;
    options.out = out_dir;
    options.threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    options.check_convergence = check;
    options.keep_cells = keep_cells;
    std::filesystem::create_directories(options.out);

    log_line("info", "event=start command=" + sub->get_name() + " config=" + quote(config_path) +
                         " isa=" + std::string(afc::kernels::to_string(afc::kernels::kernels().isa)) +
                         " threads=" + std::to_string(options.threads));
    const afc::RunReport report = runners.at(sub)(config, options);
    for (const auto& a : report.artifacts) {
      log_line("info", "event=artifact path=" + quote((options.out / a).string()));
    }
    std::string fields;
    for (const auto& [k, v] : report.summary.items()) fields += " " + k + "=" + v.dump();
    log_line("info", "event=done command=" + sub->get_name() + fields);
    if (!report.converged) {
      log_line("error", "kind=convergence msg=" + quote(report.convergence_note));
      return 3;
    }
    return 0;
  } catch (const afc::ConfigError& e) {
    log_line("error", "kind=config key=" + quote(e.key_path()) + " msg=" + quote(e.what()));
    return 2;
  } catch (const afc::DomainError& e) {
    log_line("error", "kind=domain msg=" + quote(e.what()));
    return 2;
  } catch (const afc::NumericalError& e) {
    log_line("error", "kind=numerical msg=" + quote(e.what()));
    return 3;
  } catch (const std::exception& e) {
    log_line("error", "kind=io msg=" + quote(e.what()));
    return 1;
  }
}

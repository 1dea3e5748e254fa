#include <doctest.h>

#include <cmath>
#include <string>

#include "afc/config.hpp"
#include "afc/constants.hpp"
#include "afc/error.hpp"

using namespace afc;

namespace {

const char* kFig4 = R"(# Fig. 4
[atom]
omega32_hz = 637 THz
omega12_hz = 1592.5 THz
gamma21_per_s = 1e7
gamma23_per_s = 1e7

[gas]
eta_m_s = 350
density_m3 = 1e18

[pap]
rabi0_hz = 151 MHz
n_pulses = 16
t_int_s = 0.17 us
sigma_s = 6.2 ns
detuning0_hz = 360 MHz
)";

std::string key_of(const std::string& text) {
  try {
    ExperimentConfig::parse_ini(text);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<no error>";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("units are folded in and values normalised") {
  const auto cfg = ExperimentConfig::parse_ini(kFig4);
  const auto& pap = cfg.values().at("pap");
  CHECK(pap.at("rabi0_hz") == "1.51e+08");
  CHECK(pap.at("t_int_s") == "1.7e-07");
  CHECK(pap.at("sigma_s") == "6.2e-09");
  CHECK(pap.at("drive") == "pap");  // default filled in
  const Drive d = cfg.drive();
  CHECK(d.train.rabi_p0 == constants::two_pi * 151e6);
  CHECK(d.train.t_int == 0.17e-6);
  CHECK(d.train.sigma == 6.2e-9);
  CHECK(d.pump_detuning0 == constants::two_pi * 360e6);
  CHECK(d.train.n_pulses == 16);
  const AtomicSystem s = cfg.atom();
  CHECK(s.omega32 == constants::two_pi * 637e12);
  CHECK(s.omega34() == s.omega32);
  CHECK(cfg.gas().eta() == 350.0);

  auto c2 = cfg;
  c2.set("pap.sigma_s", "6200 ps");
  CHECK(c2.values().at("pap").at("sigma_s") == "6.2e-09");
  c2.set("pap.t_int_s", "0.17 µs");
  CHECK(c2.drive().train.t_int == 0.17e-6);
  c2.set("atom.omega42_hz", "1.2e15");
  CHECK(c2.atom().omega42 == constants::two_pi * 1.2e15);
}

TEST_CASE("bad keys, sections and values carry their key path") {
  CHECK(key_of(std::string(kFig4) + "[pap2]\nx = 1\n") == "pap2");
  CHECK(key_of(std::string(kFig4) + "[grid]\nfoo = 1\n") == "grid.foo");
  CHECK(key_of(std::string(kFig4) + "[grid]\nafc_map = omega99\n") == "grid.afc_map");
  CHECK(key_of(std::string(kFig4) + "[storage]\nlength_m = 2 MHz\n") == "storage.length_m");
  CHECK(key_of(std::string(kFig4) + "[grid]\nv_points = -3\n") == "grid.v_points");
  CHECK(key_of(std::string(kFig4) + "[storage]\ngate = 2us:1us\n") == "storage.gate");
  CHECK(key_of(std::string(kFig4) + "[sweep]\noutputs = eta_q\n") == "sweep.outputs");
  CHECK(key_of(std::string(kFig4) + "[sweep]\npap.bogus = 1, 2\n") == "sweep.pap.bogus");
  // duplicate keys are an error, not a silent override
  CHECK_THROWS_AS(ExperimentConfig::parse_ini("[pap]\nn_pulses = 3\nn_pulses = 4\n"), ConfigError);
}

TEST_CASE("required keys are reported when used") {
  std::string text = kFig4;
  text.erase(text.find("sigma_s"), std::string("sigma_s = 6.2 ns\n").size());
  const auto cfg = ExperimentConfig::parse_ini(text);
  try {
    (void)cfg.drive();
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "pap.sigma_s");
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  // the gas needs T and m unless eta is given directly
  auto c2 = ExperimentConfig::parse_ini("[gas]\ndensity_m3 = 1e18\n");
  try {
    (void)c2.gas();
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "gas.temperature_k");
  }
  c2.set("gas.temperature_k", "1073.15");
  c2.set("gas.mass_u", "137.327");
  CHECK(c2.gas().eta() == doctest::Approx(std::sqrt(constants::k_b * 1073.15 / (137.327 * constants::amu))));
}

TEST_CASE("JSON round trip and manifest form") {
  std::string text = kFig4;
  text += "[storage]\ndelta_s0_hz = -380.38 MHz\nomega_c_hz = 15.2 MHz\ntau_p_s = 0.3 us\n"
          "t_c_s = 1.2 us\nlength_m = 2 cm\ngate = 0:1us, 3 us:5us\n";
  text += "[sweep]\npap.n_pulses = 10, 40\n";
  const auto cfg = ExperimentConfig::parse_ini(text);
  const auto back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.values() == cfg.values());
  CHECK(back.to_json().dump() == cfg.to_json().dump());
  const nlohmann::json manifest = {{"tool", "afcsim"}, {"config", cfg.to_json()}};
  CHECK(ExperimentConfig::from_json(manifest).values() == cfg.values());

  const StorageConfig st = cfg.storage();
  REQUIRE(st.control_gate.size() == 2);
  CHECK(st.control_gate[1].t_on == 3e-6);
  CHECK(st.control_gate[1].t_off == 5e-6);
  CHECK(st.length == 0.02);
  CHECK(st.mode == RetrievalMode::backward);
  CHECK_FALSE(st.delta_c0.has_value());
}

TEST_CASE("sweep grid") {
  std::string text = kFig4;
  text += "[sweep]\npap.n_pulses = 10, 40\npap.detuning0_hz = 20 MHz, 35 MHz, 55 MHz\n"
          "outputs = eta_s, finesse\n";
  const SweepSpec sw = ExperimentConfig::parse_ini(text).sweep();
  REQUIRE(sw.axes.size() == 2);
  CHECK(sw.axes[0].path == "pap.detuning0_hz");  // lexicographic
  CHECK(sw.cells() == 6);
  CHECK(sw.cell(0) == std::vector<std::pair<std::string, std::string>>{{"pap.detuning0_hz", "2e+07"},
                                                                         {"pap.n_pulses", "10"}});
  CHECK(sw.cell(1)[1].second == "40");
  CHECK(sw.cell(5)[0].second == "5.5e+07");
  CHECK(sw.outputs == std::vector<std::string>{"eta_s", "finesse"});

  const SweepSpec lin =
      ExperimentConfig::parse_ini(std::string(kFig4) + "[sweep]\npap.rabi0_hz = linspace(1 MHz, 2 MHz, 3)\n").sweep();
  CHECK(lin.axes[0].values == std::vector<std::string>{"1e+06", "1500000", "2e+06"});
  const SweepSpec geo =
      ExperimentConfig::parse_ini(std::string(kFig4) + "[sweep]\npap.detuning0_hz = logspace(1 MHz, 100 MHz, 3)\n")
          .sweep();
  REQUIRE(geo.axes[0].values.size() == 3);
  CHECK(std::stod(geo.axes[0].values[1]) == doctest::Approx(1e7).epsilon(1e-14));
  CHECK(geo.axes[0].values[2] == "1e+08");
  CHECK(key_of(std::string(kFig4) + "[sweep]\npap.n_pulses = linspace(1, 3, 3)\n") == "sweep.pap.n_pulses");
  CHECK(key_of(std::string(kFig4) + "[sweep]\npap.detuning0_hz = logspace(0, 1 MHz, 3)\n") ==
        "sweep.pap.detuning0_hz");
}

TEST_CASE("sweep cap") {
  std::string text = kFig4;
  text += "[sweep]\ncap = 4\npap.n_pulses = 10, 20, 30\npap.detuning0_hz = 20 MHz, 35 MHz\n";
  const auto cfg = ExperimentConfig::parse_ini(text);
  try {
    (void)cfg.sweep();
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "sweep.cap");
  }
}

TEST_CASE("grid and OZ settings") {
  std::string text = kFig4;
  text += "[grid]\nv_min_m_s = -5\nv_max_m_s = 5\nv_points = 11\noz_mode = width\nafc_map = omega13\n";
  const auto cfg = ExperimentConfig::parse_ini(text);
  const auto g = cfg.velocity_grid();
  REQUIRE(g.has_value());
  CHECK(g->size() == 11);
  CHECK(cfg.oz().mode == OzMode::width);
  CHECK(cfg.oz().ratios == 61);
  CHECK(cfg.afc_map(cfg.atom()) == cfg.atom().omega13());
  CHECK(cfg.min_prominence() == 0.1);
  CHECK(cfg.step_policy().step_factor == 20.0);
  CHECK_FALSE(ExperimentConfig::parse_ini(kFig4).velocity_grid().has_value());
  CHECK(key_of(std::string(kFig4) + "[grid]\nv_min_m_s = -5\n") == "<no error>");
  auto partial = ExperimentConfig::parse_ini(std::string(kFig4) + "[grid]\nv_min_m_s = -5\n");
  CHECK_THROWS_AS((void)partial.velocity_grid(), ConfigError);
}

}  // TEST_SUITE

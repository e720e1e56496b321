// Mission configuration, design parameters and their JSON form.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ldg/dynamics.hpp"
#include "ldg/moon.hpp"

namespace ldg {

/// Gate altitudes, limits and phase settings of the descent.
struct GateParameters {
  double initial_mass = 7000.0;       ///< [kg]
  double periselene_altitude = 30e3;  ///< [m]
  double aposelene_altitude = 100e3;  ///< [m]
  double max_pitch_rate_dps = 5.0;
  double pitch_up_target_deg = 80.0;
  double lga_altitude = 500.0;
  double lga_min_pitch_deg = 80.0;
  double lga_max_speed = 30.0;
  double hda1_max_divert = 100.0;
  double hda2_altitude = 150.0;
  double hda2_max_divert = 20.0;
  double vga_altitude = 30.0;
  double vertical_pitch_deg = 90.0;
  double descent_speed = 2.0;
};

struct DivertScenario {
  std::string code = "N";
  double hda1_shift = 0.0;  ///< [m], negative = beyond the site
  double hda2_shift = 0.0;  ///< [m]
};

/// The seven along-track test cases.
std::vector<DivertScenario> standard_scenarios();

struct DeConfig {
  int population = 40;
  double weight = 0.7;
  double crossover = 0.9;
  int generations = 300;
  std::uint64_t seed = 20240601;
  /// Search box half-widths around the seed: r [m], theta [rad], v_r, v_theta [m/s], dt_powered [s].
  std::array<double, 5> half_width{200.0, 0.02 * 3.14159265358979323846 / 180.0, 15.0, 15.0, 15.0};
  double penalty_weight = 1e3;
  double failure_fitness = 1e7;  ///< assigned when a design cannot be flown

  void validate() const;
};

struct ReplayConfig {
  double gnc_period = 1.0;     ///< [s]
  double freeze_time = 10.0;   ///< no guidance update below this time-to-go [s]
};

struct MissionConfig {
  MoonConstants moon;
  EngineModel engine;
  GateParameters gates;
  double step = 0.1;           ///< integrator step [s]
  DeConfig de;
  ReplayConfig replay;
  double divert_grid = 0.5;    ///< divert time-of-flight search grid [s]
  double divert_span = 15.0;   ///< search extent beyond the nominal remaining time [s]
  std::vector<DivertScenario> scenarios = standard_scenarios();

  void validate() const;
};

/// The five trajectory parameters plus divert times of flight.
struct MissionDesign {
  double pga_r = 0.0;        ///< [m]
  double pga_theta = 0.0;    ///< [rad]
  double pga_v_r = 0.0;      ///< [m/s]
  double pga_v_theta = 0.0;  ///< [m/s]
  double dt_powered = 0.0;   ///< end of pitch-up slew to vertical gate [s]
  /// Low gate to vertical gate time per scenario code; absent keeps the remaining nominal time.
  std::map<std::string, double> dt_div;

  std::array<double, 5> vector() const { return {pga_r, pga_theta, pga_v_r, pga_v_theta, dt_powered}; }
  static MissionDesign from_vector(const std::array<double, 5>& x);
};

/// PGA from the published sub-optimal timeline with its powered-descent time.
MissionDesign published_design(const MoonConstants& k = {});

MissionConfig load_config(const std::filesystem::path& path);
MissionConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const MissionConfig& cfg);

MissionDesign load_design(const std::filesystem::path& path);
MissionDesign design_from_json_text(const std::string& text);
std::string design_to_json_text(const MissionDesign& d);

}  // namespace ldg

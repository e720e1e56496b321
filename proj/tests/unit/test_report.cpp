#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ldg/config.hpp"
#include "ldg/mission.hpp"
#include "ldg/report.hpp"

using namespace ldg;

namespace {

const MissionResult& nominal() {
  static const MissionResult r = assemble(published_design(), DivertScenario{"N", 0.0, 0.0}, MissionConfig{});
  return r;
}

nlohmann::json json_part(const std::string& text) {
  const std::string marker = "--- json ---\n";
  const auto pos = text.find(marker);
  REQUIRE(pos != std::string::npos);
  return nlohmann::json::parse(text.substr(pos + marker.size()));
}

}  // namespace

TEST_CASE("four-decimal formatting") {
  CHECK(fixed4(1.23456) == "1.2346");
  CHECK(fixed4(-0.00001) == "0.0000");
  CHECK(fixed4(-2.5) == "-2.5000");
  CHECK(fixed4(3879.0) == "3879.0000");
}

TEST_CASE("trajectory CSV layout") {
  std::ostringstream os;
  write_trajectory_csv(os, nominal().trajectory);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kTrajectoryHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 13);
  }
  CHECK(rows == nominal().trajectory.size());
}

TEST_CASE("mission report carries a machine-readable section") {
  std::ostringstream os;
  write_mission_report(os, nominal(), DivertScenario{"N", 0.0, 0.0});
  const nlohmann::json j = json_part(os.str());
  CHECK(j["timeline"].size() == 5);
  CHECK(j["timeline"][4]["name"] == "MECO");
  CHECK(j["propellant"]["total_kg"].get<double>() == doctest::Approx(nominal().propellant.total).epsilon(1e-7));
  CHECK(j["audit"]["items"].size() == nominal().audit.items.size());
}

TEST_CASE("reports are byte-identical across runs") {
  const MissionResult again = assemble(published_design(), DivertScenario{"N", 0.0, 0.0}, MissionConfig{});
  std::ostringstream a, b;
  write_trajectory_csv(a, nominal().trajectory);
  write_trajectory_csv(b, again.trajectory);
  CHECK(a.str() == b.str());
  std::ostringstream c, d;
  write_mission_report(c, nominal(), DivertScenario{"N", 0.0, 0.0});
  write_mission_report(d, again, DivertScenario{"N", 0.0, 0.0});
  CHECK(c.str() == d.str());
}

TEST_CASE("sweep and history CSV headers") {
  std::ostringstream a, b, c;
  write_tof_sweep_csv(a, {});
  write_thrust_sweep_csv(b, {});
  write_history_csv(c, {{0, 3120.0, 3119.0, 1.0}});
  CHECK(a.str() == "tf_s,prop_kg,max_pitch_rate_dps,max_throttle_rate_Nps,t1_min_N,t1_max_N,feasible\n");
  CHECK(b.str() == "thrust_N,theta0_deg,dt_s,iterations\n");
  CHECK(c.str() == "generation,best_fitness,best_propellant,penalty\n0,3120.0000,3119.0000,1.0000\n");
}

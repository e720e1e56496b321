// Fixed-precision CSV and report writers.  Every number is printed with four
// decimals of its unit.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ldg/braking_burn.hpp"
#include "ldg/design_opt.hpp"
#include "ldg/mission.hpp"
#include "ldg/peg_flat.hpp"
#include "ldg/polynomial_guidance.hpp"
#include "ldg/propagator.hpp"

namespace ldg {

/// "%.4f" with negative zero printed as zero.
std::string fixed4(double x);

inline constexpr const char* kTrajectoryHeader =
    "t_s,r_m,phi_rad,theta_rad,vr_mps,vphi_mps,vtheta_mps,m_kg,alt_m,downrange_m,pitch_deg,pitch_rate_dps,t1_N,t2_N";

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_tof_sweep_csv(std::ostream& os, const std::vector<TofSweepRow>& rows);
void write_thrust_sweep_csv(std::ostream& os, const std::vector<ThrustSweepPoint>& rows);
void write_history_csv(std::ostream& os, const std::vector<GenerationRecord>& history);

/// Timeline, propellant split and audit of one assembled scenario.
void write_mission_report(std::ostream& os, const MissionResult& r, const DivertScenario& scenario);
void write_divert_matrix_report(std::ostream& os, const std::vector<ScenarioRow>& rows);
void write_design_report(std::ostream& os, const DeResult& r, const std::vector<DivertTuning>& tuning);
void write_peg_report(std::ostream& os, const FlatPegProblem& p, const FlatPegSolution& s, const PmpReport& pmp);

}  // namespace ldg

// ldg: lunar descent design, replay and reporting.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldg/config.hpp"
#include "ldg/design_opt.hpp"
#include "ldg/errors.hpp"
#include "ldg/mission.hpp"
#include "ldg/peg_flat.hpp"
#include "ldg/report.hpp"

namespace fs = std::filesystem;
using namespace ldg;

namespace {

constexpr int kOk = 0;
constexpr int kSolverError = 1;
constexpr int kConstraintFailure = 2;

struct Common {
  std::string config;
  std::string design;
};

MissionConfig config_of(const Common& c) { return c.config.empty() ? MissionConfig{} : load_config(c.config); }

MissionDesign design_of(const Common& c, const MissionConfig& cfg) {
  return c.design.empty() ? published_design(cfg.moon) : load_design(c.design);
}

const DivertScenario& scenario_of(const MissionConfig& cfg, const std::string& code) {
  for (const DivertScenario& s : cfg.scenarios)
    if (s.code == code) return s;
  throw ConfigError("unknown scenario '" + code + "'", {"scenario"});
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  write(os);
  if (!os) throw Error("write failed: " + path);
}

std::vector<double> grid(double from, double to, double step) {
  if (!(step > 0.0) || to < from) throw ConfigError("bad grid", {"from", "to", "step"});
  std::vector<double> g;
  const int n = static_cast<int>(std::floor((to - from) / step + 1e-9));
  for (int i = 0; i <= n; ++i) g.push_back(from + i * step);
  return g;
}

void add_common(CLI::App* sub, Common& c, bool with_design) {
  sub->add_option("-c,--config", c.config, "mission configuration (JSON); defaults built in");
  if (with_design)
    sub->add_option("-d,--design", c.design, "design file (JSON); default is the published design");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ldg: lunar descent guidance design and replay"};
  app.require_subcommand(1);

  Common common;
  std::string scenario = "N";
  std::string out_dir = ".";
  std::string report_path;
  std::string out_path;
  std::string history_path = "de_history.csv";
  std::string design_out = "design.json";
  int generations = -1;
  int population = -1;
  long long seed = -1;
  double from = 0.0, to = 0.0, step = 0.0;
  int perturbations = 10;

  CLI::App* design = app.add_subcommand("design", "run the DE optimizer and write the best design and history");
  add_common(design, common, true);
  design->add_option("-o,--out", design_out, "best design output")->capture_default_str();
  design->add_option("--history", history_path, "best-fitness history CSV")->capture_default_str();
  design->add_option("--report", report_path, "design report (default stdout)");
  design->add_option("--generations", generations, "override DE generations");
  design->add_option("--population", population, "override DE population");
  design->add_option("--seed", seed, "override DE seed");

  CLI::App* fly = app.add_subcommand("fly", "assemble one scenario; write trajectory CSV and timeline report");
  add_common(fly, common, true);
  fly->add_option("-s,--scenario", scenario, "scenario code (N F FF FB B BF BB)")->capture_default_str();
  fly->add_option("--out-dir", out_dir, "directory for trajectory_<code>.csv and timeline_<code>.txt")
      ->capture_default_str();

  CLI::App* matrix = app.add_subcommand("divert-matrix", "fly every divert scenario and report propellant");
  add_common(matrix, common, true);
  matrix->add_option("--report", report_path, "report file (default stdout)");

  CLI::App* sweep_tof_cmd = app.add_subcommand("sweep-tof", "powered descent time-of-flight sweep (CSV)");
  add_common(sweep_tof_cmd, common, true);
  sweep_tof_cmd->add_option("-s,--scenario", scenario, "scenario code")->capture_default_str();
  sweep_tof_cmd->add_option("--from", from, "first powered descent duration [s]")->default_val(30.0);
  sweep_tof_cmd->add_option("--to", to, "last powered descent duration [s]")->default_val(70.0);
  sweep_tof_cmd->add_option("--step", step, "grid step [s]")->default_val(1.0);
  sweep_tof_cmd->add_option("-o,--out", out_path, "CSV file (default stdout)");

  CLI::App* sweep_thrust_cmd = app.add_subcommand("sweep-thrust", "braking thrust vs initial along-track angle (CSV)");
  add_common(sweep_thrust_cmd, common, true);
  sweep_thrust_cmd->add_option("--from", from, "lowest thrust [N]")->default_val(12000.0);
  sweep_thrust_cmd->add_option("--to", to, "highest thrust [N]")->default_val(18000.0);
  sweep_thrust_cmd->add_option("--step", step, "grid step [N]")->default_val(500.0);
  sweep_thrust_cmd->add_option("-o,--out", out_path, "CSV file (default stdout)");

  CLI::App* peg = app.add_subcommand("peg-flat", "solve the flat-planet PEG demo and check optimality");
  peg->add_option("--perturbations", perturbations, "random directions per sample time (10 sample times)")->capture_default_str();
  peg->add_option("--report", report_path, "report file (default stdout)");

  CLI::App* check = app.add_subcommand("check", "audit one scenario without writing a trajectory");
  add_common(check, common, true);
  check->add_option("-s,--scenario", scenario, "scenario code")->capture_default_str();
  check->add_option("--report", report_path, "report file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*design) {
      MissionConfig cfg = config_of(common);
      if (generations >= 0) cfg.de.generations = generations;
      if (population >= 0) cfg.de.population = population;
      if (seed >= 0) cfg.de.seed = static_cast<std::uint64_t>(seed);
      cfg.validate();
      const MissionDesign start = design_of(common, cfg);
      DeResult r = optimize(cfg, {start}, [](const GenerationRecord& g) {
        std::cerr << "generation " << g.generation << " best " << fixed4(g.best_fitness) << "\n";
      });
      std::vector<DivertTuning> tuning;
      r.best = tune_all_diverts(r.best, cfg, &tuning);
      emit(design_out, [&](std::ostream& os) { os << design_to_json_text(r.best); });
      emit(history_path, [&](std::ostream& os) { write_history_csv(os, r.history); });
      emit(report_path, [&](std::ostream& os) { write_design_report(os, r, tuning); });
      for (const DivertTuning& t : tuning)
        if (!t.feasible) return kConstraintFailure;
      return kOk;
    }

    if (*peg) {
      const FlatPegProblem p = flat_peg_demo();
      const FlatPegSolution s = solve_flat_peg(p);
      const PmpReport pmp = verify_pmp_optimality(s, p, perturbations);
      emit(report_path, [&](std::ostream& os) { write_peg_report(os, p, s, pmp); });
      return pmp.passed == pmp.checks ? kOk : kConstraintFailure;
    }

    const MissionConfig cfg = config_of(common);
    const MissionDesign d = design_of(common, cfg);

    if (*fly || *check) {
      const DivertScenario& sc = scenario_of(cfg, scenario);
      const MissionResult r = assemble(d, sc, cfg);
      if (*fly) {
        emit((fs::path(out_dir) / ("trajectory_" + sc.code + ".csv")).string(),
             [&](std::ostream& os) { write_trajectory_csv(os, r.trajectory); });
        emit((fs::path(out_dir) / ("timeline_" + sc.code + ".txt")).string(),
             [&](std::ostream& os) { write_mission_report(os, r, sc); });
      } else {
        emit(report_path, [&](std::ostream& os) { write_mission_report(os, r, sc); });
      }
      return r.audit.pass() ? kOk : kConstraintFailure;
    }

    if (*matrix) {
      const std::vector<ScenarioRow> rows = divert_matrix(d, cfg);
      emit(report_path, [&](std::ostream& os) { write_divert_matrix_report(os, rows); });
      for (const ScenarioRow& r : rows)
        if (!r.ok) return kSolverError;
      for (const ScenarioRow& r : rows)
        if (!r.audit_pass) return kConstraintFailure;
      return kOk;
    }

    if (*sweep_tof_cmd) {
      const DivertScenario& sc = scenario_of(cfg, scenario);
      const PoweredDescentSpec base = powered_descent_spec(d, sc, cfg);
      DescentLimits limits;
      limits.max_pitch_rate_dps = cfg.gates.max_pitch_rate_dps;
      const auto rows = sweep_tof(
          [&](double tf) {
            PoweredDescentSpec s = base;
            s.tf = tf;
            return s;
          },
          grid(from, to, step), cfg.engine, cfg.moon, limits);
      emit(out_path, [&](std::ostream& os) { write_tof_sweep_csv(os, rows); });
      return kOk;
    }

    if (*sweep_thrust_cmd) {
      BrakingTarget target;
      target.x_f = pga_target(d);
      target.z0 = mbb_state(cfg);
      BrakingOptions opt;
      opt.step = cfg.step;
      const auto rows = sweep_thrust_theta0(target, cfg.engine, cfg.moon, grid(from, to, step), opt);
      emit(out_path, [&](std::ostream& os) { write_thrust_sweep_csv(os, rows); });
      for (const ThrustSweepPoint& p : rows)
        if (!p.converged) return kSolverError;
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    for (const std::string& k : e.offending_keys()) std::cerr << "  offending key: " << k << "\n";
    return kSolverError;
  } catch (const InfeasibleBurnError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kConstraintFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kOk;
}

// Offline Differential Evolution over the five trajectory parameters, and
// divert time-of-flight tuning.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ldg/braking_burn.hpp"
#include "ldg/config.hpp"
#include "ldg/mission.hpp"
#include "ldg/polynomial_guidance.hpp"

namespace ldg {

struct FitnessBreakdown {
  double fitness = 0.0;
  double propellant = 0.0;
  double penalty = 0.0;
  bool flown = false;
  std::string error;
  ConstraintAudit audit;
  std::optional<BilinearLaw> braking_law;
};

/// Total propellant plus weighted squared constraint violations.  Designs
/// that cannot be flown get cfg.de.failure_fitness.
FitnessBreakdown evaluate_design(const MissionDesign& design, const MissionConfig& cfg,
                                 const std::optional<BilinearLaw>& warm_start = std::nullopt);
double fitness(const MissionDesign& design, const MissionConfig& cfg);

struct SearchBox {
  std::array<double, 5> lower{};
  std::array<double, 5> upper{};

  bool contains(const std::array<double, 5>& x) const;
  static SearchBox around(const MissionDesign& center, const std::array<double, 5>& half_width);
};

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double best_propellant = 0.0;
  double penalty = 0.0;
};

struct DeResult {
  MissionDesign best;
  FitnessBreakdown best_eval;
  std::vector<GenerationRecord> history;
  SearchBox box;
  long evaluations = 0;
  bool feasible = false;
};

using EvaluationObserver = std::function<void(const std::array<double, 5>&)>;
using GenerationObserver = std::function<void(const GenerationRecord&)>;

/// rand/1/bin with reflection at the box faces.  The box is centred on the
/// first seed; seeds enter the initial population before the random members.
/// `history` follows the population best; `best` is the lowest-fitness design
/// among all evaluated members that pass the audit.  Throws InfeasibleBurnError (carrying the best audit in its message) when no
/// evaluated member satisfies every constraint.
DeResult optimize(const MissionConfig& cfg, const std::vector<MissionDesign>& seeds,
                  const GenerationObserver& on_generation = {}, const EvaluationObserver& on_evaluation = {});

struct DivertTuning {
  std::string code;
  double dt_div = 0.0;          ///< chosen low gate to vertical gate time [s]
  double nominal_remaining = 0.0;
  std::vector<TofSweepRow> sweep;
  bool feasible = false;
  std::string tightest;         ///< limiting constraint when nothing is feasible
};

/// Keeps the remaining nominal time when that is feasible; otherwise scans
/// longer times on cfg.divert_grid up to cfg.divert_span and keeps the
/// feasible point with the least propellant.
DivertTuning tune_divert_tf(const MissionDesign& nominal, const DivertScenario& scenario, const MissionConfig& cfg);

/// Tunes every scenario of the configuration and stores the result in the design.
MissionDesign tune_all_diverts(MissionDesign design, const MissionConfig& cfg, std::vector<DivertTuning>* report = nullptr);

}  // namespace ldg

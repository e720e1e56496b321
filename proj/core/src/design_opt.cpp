#include "ldg/design_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ldg/errors.hpp"

namespace ldg {

FitnessBreakdown evaluate_design(const MissionDesign& design, const MissionConfig& cfg,
                                 const std::optional<BilinearLaw>& warm_start) {
  FitnessBreakdown out;
  try {
    AssembleOptions opt;
    opt.braking_guess = warm_start;
    const MissionResult r = assemble(design, DivertScenario{}, cfg, opt);
    out.flown = true;
    out.propellant = r.propellant.total;
    out.audit = r.audit;
    out.penalty = r.audit.penalty(cfg.de.penalty_weight);
    out.fitness = out.propellant + out.penalty;
    out.braking_law = r.braking.law;
  } catch (const Error& e) {
    out.error = e.what();
    out.fitness = cfg.de.failure_fitness;
  }
  return out;
}

double fitness(const MissionDesign& design, const MissionConfig& cfg) { return evaluate_design(design, cfg).fitness; }

bool SearchBox::contains(const std::array<double, 5>& x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

SearchBox SearchBox::around(const MissionDesign& center, const std::array<double, 5>& half_width) {
  SearchBox b;
  const auto c = center.vector();
  for (std::size_t i = 0; i < c.size(); ++i) {
    b.lower[i] = c[i] - half_width[i];
    b.upper[i] = c[i] + half_width[i];
  }
  return b;
}

namespace {

double reflect(double v, double lo, double hi) {
  if (hi <= lo) return lo;
  const double w = hi - lo;
  // Fold into [lo, lo + 2w) then mirror the upper half.
  double s = std::fmod(v - lo, 2.0 * w);
  if (s < 0.0) s += 2.0 * w;
  return s <= w ? lo + s : hi - (s - w);
}

struct Member {
  std::array<double, 5> x{};
  FitnessBreakdown eval;
};

}  // namespace

DeResult optimize(const MissionConfig& cfg, const std::vector<MissionDesign>& seeds,
                  const GenerationObserver& on_generation, const EvaluationObserver& on_evaluation) {
  cfg.de.validate();
  const DeConfig& de = cfg.de;
  const MissionDesign center = seeds.empty() ? published_design(cfg.moon) : seeds.front();

  DeResult res;
  res.box = SearchBox::around(center, de.half_width);
  const SearchBox& box = res.box;

  std::mt19937_64 rng(de.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform_index = [&rng](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

  const FitnessBreakdown seed_eval = evaluate_design(center, cfg);
  const std::optional<BilinearLaw> warm = seed_eval.braking_law;

  // The squared penalty lets the population settle slightly outside the
  // feasible set, so the best feasible point seen is kept on the side.
  std::optional<Member> best_feasible;
  const auto evaluate = [&](const std::array<double, 5>& x) {
    if (on_evaluation) on_evaluation(x);
    ++res.evaluations;
    FitnessBreakdown e = evaluate_design(MissionDesign::from_vector(x), cfg, warm);
    if (e.flown && e.audit.pass() && (!best_feasible || e.fitness < best_feasible->eval.fitness)) {
      best_feasible = Member{x, e};
    }
    return e;
  };

  std::vector<Member> pop(static_cast<std::size_t>(de.population));
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (i < seeds.size()) {
      pop[i].x = seeds[i].vector();
      for (std::size_t j = 0; j < 5; ++j) pop[i].x[j] = std::clamp(pop[i].x[j], box.lower[j], box.upper[j]);
    } else {
      for (std::size_t j = 0; j < 5; ++j) pop[i].x[j] = box.lower[j] + unit(rng) * (box.upper[j] - box.lower[j]);
    }
  }
  for (Member& m : pop) m.eval = evaluate(m.x);

  const auto best_index = [&pop]() {
    std::size_t b = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
      if (pop[i].eval.fitness < pop[b].eval.fitness) b = i;
    }
    return b;
  };
  const auto record = [&](int gen) {
    const Member& b = pop[best_index()];
    GenerationRecord g{gen, b.eval.fitness, b.eval.propellant, b.eval.penalty};
    res.history.push_back(g);
    if (on_generation) on_generation(g);
  };
  record(0);

  const int n = de.population;
  for (int gen = 1; gen <= de.generations; ++gen) {
    std::vector<std::array<double, 5>> trials(pop.size());
    for (int i = 0; i < n; ++i) {
      int r1, r2, r3;
      do r1 = uniform_index(n); while (r1 == i);
      do r2 = uniform_index(n); while (r2 == i || r2 == r1);
      do r3 = uniform_index(n); while (r3 == i || r3 == r1 || r3 == r2);
      const int jrand = uniform_index(5);
      std::array<double, 5>& t = trials[static_cast<std::size_t>(i)];
      for (int j = 0; j < 5; ++j) {
        const double u = unit(rng);
        if (u < de.crossover || j == jrand) {
          const double v = pop[r1].x[j] + de.weight * (pop[r2].x[j] - pop[r3].x[j]);
          t[j] = reflect(v, box.lower[j], box.upper[j]);
        } else {
          t[j] = pop[i].x[j];
        }
      }
    }
    std::vector<FitnessBreakdown> evals(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) evals[i] = evaluate(trials[i]);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (evals[i].fitness <= pop[i].eval.fitness) {
        pop[i].x = trials[i];
        pop[i].eval = std::move(evals[i]);
      }
    }
    record(gen);
  }

  if (!best_feasible) {
    const Member& best = pop[best_index()];
    std::string msg = "no feasible design found; best fitness " + std::to_string(best.eval.fitness);
    for (const AuditItem& it : best.eval.audit.items) {
      if (!it.pass) msg += "; " + it.name + " " + std::to_string(it.observed) + " vs " + std::to_string(it.limit);
    }
    if (!best.eval.error.empty()) msg += "; " + best.eval.error;
    throw InfeasibleBurnError(msg);
  }
  res.best = MissionDesign::from_vector(best_feasible->x);
  res.best.dt_div = center.dt_div;
  res.best_eval = best_feasible->eval;
  res.feasible = true;
  return res;
}

DivertTuning tune_divert_tf(const MissionDesign& nominal, const DivertScenario& sc, const MissionConfig& cfg) {
  DivertTuning out;
  out.code = sc.code;
  const PoweredDescentSpec base = powered_descent_spec(nominal, sc, cfg);

  // Remaining nominal time from the low gate.
  PoweredDescentSpec probe = base;
  probe.divert = DivertSpec{};
  const PoweredDescentResult nominal_flight = fly_powered_descent(probe, cfg.engine, cfg.moon);
  out.nominal_remaining = base.start.t + base.tf - nominal_flight.lga->state.t;

  const DescentFamily family = [&base](double tf) {
    PoweredDescentSpec s = base;
    s.divert.tf_div = tf;
    return s;
  };
  DescentLimits limits;
  limits.max_pitch_rate_dps = cfg.gates.max_pitch_rate_dps;

  out.sweep = sweep_tof(family, {out.nominal_remaining}, cfg.engine, cfg.moon, limits);
  if (out.sweep.front().feasible) {
    out.dt_div = out.nominal_remaining;
    out.feasible = true;
    return out;
  }
  std::vector<double> grid;
  const int n = static_cast<int>(std::floor(cfg.divert_span / cfg.divert_grid + 1e-9));
  for (int i = 1; i <= n; ++i) grid.push_back(out.nominal_remaining + i * cfg.divert_grid);
  const std::vector<TofSweepRow> rows = sweep_tof(family, grid, cfg.engine, cfg.moon, limits);
  out.sweep.insert(out.sweep.end(), rows.begin(), rows.end());

  double best = std::numeric_limits<double>::infinity();
  for (const TofSweepRow& r : out.sweep) {
    if (r.feasible && r.metrics.propellant < best) {
      best = r.metrics.propellant;
      out.dt_div = r.tf;
      out.feasible = true;
    }
  }
  if (!out.feasible) {
    // Report the constraint closest to being met at the last grid point.
    const TofSweepRow& last = out.sweep.back();
    const EngineModel& e = cfg.engine;
    const double pr = last.metrics.max_pitch_rate_dps / limits.max_pitch_rate_dps;
    const double tr = last.metrics.max_t1_rate / e.t1_rate_max();
    out.tightest = !last.error.empty() ? last.error : (pr > tr ? "pitch_rate_dps" : "t1_rate_Nps");
  }
  return out;
}

MissionDesign tune_all_diverts(MissionDesign design, const MissionConfig& cfg, std::vector<DivertTuning>* report) {
  for (const DivertScenario& sc : cfg.scenarios) {
    if (sc.hda1_shift == 0.0 && sc.hda2_shift == 0.0) continue;
    DivertTuning t = tune_divert_tf(design, sc, cfg);
    if (t.feasible) design.dt_div[sc.code] = t.dt_div;
    if (report) report->push_back(std::move(t));
  }
  return design;
}

}  // namespace ldg

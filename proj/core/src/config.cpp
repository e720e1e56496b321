#include "ldg/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ldg/errors.hpp"

namespace ldg {

using json = nlohmann::ordered_json;

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, std::vector<std::string>& unknown)
      : j_(j), path_(std::move(path)), unknown_(unknown) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object", {where()});
  }

  ~ObjectReader() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) unknown_.push_back(path_.empty() ? it.key() : path_ + "." + it.key());
    }
  }

  template <typename T>
  void get(const char* key, T& out, bool required = false) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) {
      if (required) throw ConfigError("missing key " + qualified(key), {qualified(key)});
      return;
    }
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("bad value for " + qualified(key) + ": " + e.what(), {qualified(key)});
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "document" : path_; }

  const json& j_;
  std::string path_;
  std::vector<std::string>& unknown_;
  std::set<std::string> seen_;
};

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void reject_unknown(const std::vector<std::string>& unknown) {
  if (unknown.empty()) return;
  std::string msg = "unknown keys:";
  for (const std::string& k : unknown) msg += " " + k;
  throw ConfigError(msg, unknown);
}

}  // namespace

std::vector<DivertScenario> standard_scenarios() {
  return {{"N", 0.0, 0.0},       {"F", -100.0, 0.0},  {"FF", -100.0, -20.0}, {"FB", -100.0, 20.0},
          {"B", 100.0, 0.0},     {"BF", 100.0, -20.0}, {"BB", 100.0, 20.0}};
}

void DeConfig::validate() const {
  if (population < 4) throw ConfigError("de.population must be at least 4", {"de.population"});
  if (!(weight > 0.0 && weight <= 2.0)) throw ConfigError("de.weight must lie in (0, 2]", {"de.weight"});
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw ConfigError("de.crossover must lie in [0, 1]", {"de.crossover"});
  if (generations < 0) throw ConfigError("de.generations must be non-negative", {"de.generations"});
  for (double w : half_width) {
    if (!(w >= 0.0)) throw ConfigError("de.half_width entries must be non-negative", {"de.half_width"});
  }
}

void MissionConfig::validate() const {
  try {
    moon.validate();
    engine.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  de.validate();
  if (!(step > 0.0)) throw ConfigError("step must be positive", {"step"});
  if (!(replay.gnc_period > 0.0)) throw ConfigError("replay.gnc_period must be positive", {"replay.gnc_period"});
  if (!(divert_grid > 0.0)) throw ConfigError("divert_grid must be positive", {"divert_grid"});
  for (const DivertScenario& s : scenarios) {
    if (std::abs(s.hda1_shift) > gates.hda1_max_divert || std::abs(s.hda2_shift) > gates.hda2_max_divert) {
      throw ConfigError("scenario " + s.code + " exceeds the divert limits", {"scenarios"});
    }
  }
}

MissionDesign MissionDesign::from_vector(const std::array<double, 5>& x) {
  MissionDesign d;
  d.pga_r = x[0];
  d.pga_theta = x[1];
  d.pga_v_r = x[2];
  d.pga_v_theta = x[3];
  d.dt_powered = x[4];
  return d;
}

MissionDesign published_design(const MoonConstants& k) {
  MissionDesign d;
  d.pga_r = k.r_moon + 898.3;
  d.pga_theta = std::numbers::pi / 2.0 - 622.9 / k.r_moon;
  d.pga_v_r = -40.3;
  d.pga_v_theta = 39.1;
  d.dt_powered = 43.05;  // end of slew at 535.95 s to the vertical gate at 579.0 s
  return d;
}

MissionConfig config_from_json_text(const std::string& text) {
  const json j = parse(text);
  MissionConfig c;
  std::vector<std::string> unknown;
  {
    ObjectReader r(j, "", unknown);
    if (const json* m = r.child("moon")) {
      ObjectReader o(*m, "moon", unknown);
      o.get("mu", c.moon.mu);
      o.get("r_moon", c.moon.r_moon);
      o.get("g0", c.moon.g0);
    }
    if (const json* e = r.child("engine")) {
      ObjectReader o(*e, "engine", unknown);
      o.get("isp", c.engine.isp);
      o.get("t_engine_max", c.engine.t_engine_max);
      o.get("t_engine_min", c.engine.t_engine_min);
      o.get("throttle_rate_max", c.engine.throttle_rate_max);
      o.get("n_engines_phase1", c.engine.n_engines_phase1);
      o.get("n_engines_phase3", c.engine.n_engines_phase3);
    }
    if (const json* g = r.child("gates")) {
      ObjectReader o(*g, "gates", unknown);
      GateParameters& p = c.gates;
      o.get("initial_mass", p.initial_mass);
      o.get("periselene_altitude", p.periselene_altitude);
      o.get("aposelene_altitude", p.aposelene_altitude);
      o.get("max_pitch_rate_dps", p.max_pitch_rate_dps);
      o.get("pitch_up_target_deg", p.pitch_up_target_deg);
      o.get("lga_altitude", p.lga_altitude);
      o.get("lga_min_pitch_deg", p.lga_min_pitch_deg);
      o.get("lga_max_speed", p.lga_max_speed);
      o.get("hda1_max_divert", p.hda1_max_divert);
      o.get("hda2_altitude", p.hda2_altitude);
      o.get("hda2_max_divert", p.hda2_max_divert);
      o.get("vga_altitude", p.vga_altitude);
      o.get("vertical_pitch_deg", p.vertical_pitch_deg);
      o.get("descent_speed", p.descent_speed);
    }
    r.get("step", c.step);
    if (const json* d = r.child("de")) {
      ObjectReader o(*d, "de", unknown);
      o.get("population", c.de.population);
      o.get("weight", c.de.weight);
      o.get("crossover", c.de.crossover);
      o.get("generations", c.de.generations);
      o.get("seed", c.de.seed);
      o.get("half_width", c.de.half_width);
      o.get("penalty_weight", c.de.penalty_weight);
      o.get("failure_fitness", c.de.failure_fitness);
    }
    if (const json* rp = r.child("replay")) {
      ObjectReader o(*rp, "replay", unknown);
      o.get("gnc_period", c.replay.gnc_period);
      o.get("freeze_time", c.replay.freeze_time);
    }
    r.get("divert_grid", c.divert_grid);
    r.get("divert_span", c.divert_span);
    if (const json* s = r.child("scenarios")) {
      if (!s->is_array()) throw ConfigError("scenarios must be an array", {"scenarios"});
      c.scenarios.clear();
      for (std::size_t i = 0; i < s->size(); ++i) {
        ObjectReader o((*s)[i], "scenarios[" + std::to_string(i) + "]", unknown);
        DivertScenario sc;
        o.get("code", sc.code, true);
        o.get("hda1_shift", sc.hda1_shift);
        o.get("hda2_shift", sc.hda2_shift);
        c.scenarios.push_back(sc);
      }
    }
  }
  reject_unknown(unknown);
  c.validate();
  return c;
}

std::string config_to_json_text(const MissionConfig& c) {
  json j;
  j["moon"] = {{"mu", c.moon.mu}, {"r_moon", c.moon.r_moon}, {"g0", c.moon.g0}};
  j["engine"] = {{"isp", c.engine.isp},
                 {"t_engine_max", c.engine.t_engine_max},
                 {"t_engine_min", c.engine.t_engine_min},
                 {"throttle_rate_max", c.engine.throttle_rate_max},
                 {"n_engines_phase1", c.engine.n_engines_phase1},
                 {"n_engines_phase3", c.engine.n_engines_phase3}};
  const GateParameters& p = c.gates;
  j["gates"] = {{"initial_mass", p.initial_mass},
                {"periselene_altitude", p.periselene_altitude},
                {"aposelene_altitude", p.aposelene_altitude},
                {"max_pitch_rate_dps", p.max_pitch_rate_dps},
                {"pitch_up_target_deg", p.pitch_up_target_deg},
                {"lga_altitude", p.lga_altitude},
                {"lga_min_pitch_deg", p.lga_min_pitch_deg},
                {"lga_max_speed", p.lga_max_speed},
                {"hda1_max_divert", p.hda1_max_divert},
                {"hda2_altitude", p.hda2_altitude},
                {"hda2_max_divert", p.hda2_max_divert},
                {"vga_altitude", p.vga_altitude},
                {"vertical_pitch_deg", p.vertical_pitch_deg},
                {"descent_speed", p.descent_speed}};
  j["step"] = c.step;
  j["de"] = {{"population", c.de.population},
             {"weight", c.de.weight},
             {"crossover", c.de.crossover},
             {"generations", c.de.generations},
             {"seed", c.de.seed},
             {"half_width", c.de.half_width},
             {"penalty_weight", c.de.penalty_weight},
             {"failure_fitness", c.de.failure_fitness}};
  j["replay"] = {{"gnc_period", c.replay.gnc_period}, {"freeze_time", c.replay.freeze_time}};
  j["divert_grid"] = c.divert_grid;
  j["divert_span"] = c.divert_span;
  json sc = json::array();
  for (const DivertScenario& s : c.scenarios) {
    sc.push_back({{"code", s.code}, {"hda1_shift", s.hda1_shift}, {"hda2_shift", s.hda2_shift}});
  }
  j["scenarios"] = sc;
  return j.dump(2) + "\n";
}

MissionConfig load_config(const std::filesystem::path& path) { return config_from_json_text(slurp(path)); }

MissionDesign design_from_json_text(const std::string& text) {
  const json j = parse(text);
  MissionDesign d;
  std::vector<std::string> unknown;
  {
    ObjectReader r(j, "", unknown);
    r.get("pga_r", d.pga_r, true);
    r.get("pga_theta", d.pga_theta, true);
    r.get("pga_v_r", d.pga_v_r, true);
    r.get("pga_v_theta", d.pga_v_theta, true);
    r.get("dt_powered", d.dt_powered, true);
    r.get("dt_div", d.dt_div);
  }
  reject_unknown(unknown);
  if (!(d.dt_powered > 0.0)) throw ConfigError("dt_powered must be positive", {"dt_powered"});
  return d;
}

std::string design_to_json_text(const MissionDesign& d) {
  json j;
  j["pga_r"] = d.pga_r;
  j["pga_theta"] = d.pga_theta;
  j["pga_v_r"] = d.pga_v_r;
  j["pga_v_theta"] = d.pga_v_theta;
  j["dt_powered"] = d.dt_powered;
  json div = json::object();
  for (const auto& [code, t] : d.dt_div) div[code] = t;
  j["dt_div"] = div;
  return j.dump(2) + "\n";
}

MissionDesign load_design(const std::filesystem::path& path) { return design_from_json_text(slurp(path)); }

}  // namespace ldg

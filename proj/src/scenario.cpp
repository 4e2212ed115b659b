#include "htgame/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "htgame/errors.hpp"

namespace htgame {

using nlohmann::json;

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::solve: return "solve";
    case ExperimentMode::sweep_fine: return "sweep_fine";
    case ExperimentMode::sweep_alpha: return "sweep_alpha";
    case ExperimentMode::scenario_pair: return "scenario_pair";
    case ExperimentMode::trace: return "trace";
    case ExperimentMode::threshold: return "threshold";
  }
  return "unknown";
}

std::string_view to_string(AlphaMode mode) {
  switch (mode) {
    case AlphaMode::joint: return "joint";
    case AlphaMode::attacker_only: return "attacker_only";
    case AlphaMode::defender_only: return "defender_only";
  }
  return "unknown";
}

ExperimentMode parse_experiment_mode(std::string_view text) {
  for (auto m : {ExperimentMode::solve, ExperimentMode::sweep_fine, ExperimentMode::sweep_alpha,
                 ExperimentMode::scenario_pair, ExperimentMode::trace, ExperimentMode::threshold})
    if (to_string(m) == text) return m;
  throw ValidationError("unknown experiment mode '" + std::string(text) + "'");
}

AlphaMode parse_alpha_mode(std::string_view text) {
  for (auto m : {AlphaMode::joint, AlphaMode::attacker_only, AlphaMode::defender_only})
    if (to_string(m) == text) return m;
  throw ValidationError("unknown alpha_mode '" + std::string(text) + "'");
}

std::vector<double> default_fine_grid() {
  std::vector<double> g;
  for (int f = 1; f <= 12; ++f) g.push_back(f);
  return g;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

std::pair<double, double> pair_alphas(int pair) {
  if (pair == 1) return {0.5, 0.1};
  if (pair == 2) return {0.1, 0.5};
  throw ValidationError("scenario pair must be 1 or 2");
}

namespace {

void check_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw ValidationError(std::string(what) + " must be non-empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ValidationError(std::string(what) + " entries must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ValidationError(std::string(what) + " must be strictly increasing");
  }
}

}  // namespace

void ScenarioFile::validate() const {
  game.validate();
  model.validate();
  fp.validate(build_payoff_matrix(game));
  check_grid(experiment.fine_grid, "fine_grid");
  check_grid(experiment.alpha_grid, "alpha_grid");
  if (experiment.fine_grid.front() <= 0.0) throw ValidationError("fine_grid must be positive");
  if (experiment.alpha_grid.front() <= 0.0 || experiment.alpha_grid.back() > 1.0)
    throw ValidationError("alpha_grid must lie in (0, 1]");
  pair_alphas(experiment.pair);
  if (!(experiment.bracket.first > 0.0 && experiment.bracket.second > experiment.bracket.first))
    throw ValidationError("bracket must satisfy 0 < lo < hi");
}

namespace {

// Reader that tracks the JSON path for error messages.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!j_.is_object()) fail("must be an object");
    for (const auto& [key, _] : j_.items())
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ScenarioParseError(where(key) + ": unknown field");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  Reader at(const std::string& key) const {
    if (!j_.contains(key)) throw ScenarioParseError(where(key) + ": required field missing");
    return Reader(j_.at(key), where(key));
  }

  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  double number() const {
    if (!j_.is_number()) fail("must be a number");
    return j_.get<double>();
  }

  std::uint64_t positive_integer() const {
    if (!j_.is_number_integer() || j_.get<std::int64_t>() < 1) fail("must be a positive integer");
    return j_.get<std::uint64_t>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("must be a string");
    return j_.get<std::string>();
  }

  std::size_t array_size() const {
    if (!j_.is_array()) fail("must be an array");
    return j_.size();
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < array_size(); ++i) out.push_back(at(i).number());
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ScenarioParseError(path_.empty() ? msg : path_ + ": " + msg);
  }

  // Runs `f`, prefixing any validation message with this path.
  template <class F>
  auto guard(F&& f) const {
    try {
      return f();
    } catch (const ScenarioParseError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }

 private:
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

MixedStrategy read_belief(const Reader& r, std::size_t expected) {
  const std::vector<double> v = r.numbers();
  if (v.size() != expected)
    r.fail("needs " + std::to_string(expected) + " entries, got " + std::to_string(v.size()));
  Eigen::VectorXd p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p(static_cast<Eigen::Index>(i)) = v[i];
  // Published vectors are rounded to 4 digits; accept small sum drift and rescale.
  if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-3)
    r.fail("must be non-negative and sum to 1");
  return MixedStrategy::normalized(p);
}

ScenarioFile from_json(const json& root) {
  const Reader r(root, "");
  r.expect_object({"name", "trojans", "uniform_fine", "test_budget", "model", "fp", "experiment"});

  std::string name = r.has("name") ? r.at("name").string() : "";

  GameSpec game;
  const Reader trojans = r.at("trojans");
  const std::size_t t = trojans.array_size();
  if (t == 0) trojans.fail("must list at least one trojan");
  const bool uniform = r.has("uniform_fine");
  const double uniform_fine = uniform ? r.at("uniform_fine").number() : 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const Reader tr = trojans.at(i);
    tr.expect_object({"id", "damage", "fine"});
    game.trojan_ids.push_back(tr.at("id").string());
    game.damages.push_back(tr.at("damage").number());
    if (uniform) {
      if (tr.has("fine")) tr.at("fine").fail("conflicts with uniform_fine");
      game.fines.push_back(uniform_fine);
    } else {
      game.fines.push_back(tr.at("fine").number());
    }
  }
  game.test_budget = static_cast<int>(r.at("test_budget").positive_integer());
  r.guard([&] { game.validate(); });

  BehaviorModel model;
  if (r.has("model")) {
    const Reader m = r.at("model");
    m.expect_object({"kind", "alpha_a", "alpha_d"});
    if (m.has("kind")) {
      const std::string kind = m.at("kind").string();
      if (kind == "eut")
        model.kind = ModelKind::eut;
      else if (kind == "pt")
        model.kind = ModelKind::pt;
      else
        m.at("kind").fail("must be \"eut\" or \"pt\"");
    }
    if (m.has("alpha_a")) model.alpha_a = m.at("alpha_a").number();
    if (m.has("alpha_d")) model.alpha_d = m.at("alpha_d").number();
    m.guard([&] { model.validate(); });
  }

  FPConfig fp = default_fp_config(game, model);
  bool sigma0_given = false;
  const StrategySpace space = enumerate_spaces(game);
  if (r.has("fp")) {
    const Reader f = r.at("fp");
    f.expect_object({"sigma0_d", "sigma0_a", "convergence_m", "checkpoint_gap", "max_iterations"});
    if (f.has("sigma0_d") != f.has("sigma0_a"))
      f.fail("sigma0_d and sigma0_a must be given together");
    if (f.has("sigma0_d")) {
      fp.sigma0_d = read_belief(f.at("sigma0_d"), space.size(Player::attacker));
      fp.sigma0_a = read_belief(f.at("sigma0_a"), space.size(Player::defender));
      sigma0_given = true;
    }
    if (f.has("convergence_m")) fp.convergence_m = f.at("convergence_m").positive_integer();
    if (f.has("checkpoint_gap")) fp.checkpoint_gap = f.at("checkpoint_gap").positive_integer();
    if (f.has("max_iterations")) fp.max_iterations = f.at("max_iterations").positive_integer();
    f.guard([&] { fp.validate(build_payoff_matrix(game)); });
  }

  ExperimentSpec exp;
  exp.fine_grid = default_fine_grid();
  exp.alpha_grid = default_alpha_grid();
  if (r.has("experiment")) {
    const Reader e = r.at("experiment");
    e.expect_object({"mode", "fine_grid", "alpha_grid", "alpha_mode", "pair", "bracket"});
    if (e.has("mode")) e.at("mode").guard([&] { exp.mode = parse_experiment_mode(e.at("mode").string()); });
    if (e.has("fine_grid")) exp.fine_grid = e.at("fine_grid").numbers();
    if (e.has("alpha_grid")) exp.alpha_grid = e.at("alpha_grid").numbers();
    if (e.has("alpha_mode"))
      e.at("alpha_mode").guard([&] { exp.alpha_mode = parse_alpha_mode(e.at("alpha_mode").string()); });
    if (e.has("pair")) exp.pair = static_cast<int>(e.at("pair").positive_integer());
    if (e.has("bracket")) {
      const std::vector<double> b = e.at("bracket").numbers();
      if (b.size() != 2) e.at("bracket").fail("must be [lo, hi]");
      exp.bracket = {b[0], b[1]};
    }
  }

  ScenarioFile s{std::move(name), std::move(game), model, std::move(fp), std::move(exp), sigma0_given};
  r.guard([&] { s.validate(); });
  return s;
}

json to_canonical(const ScenarioFile& s) {
  json trojans = json::array();
  for (std::size_t i = 0; i < s.game.num_trojans(); ++i)
    trojans.push_back({{"id", s.game.trojan_ids[i]},
                       {"damage", s.game.damages[i]},
                       {"fine", s.game.fines[i]}});
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  json model = {{"kind", std::string(to_string(s.model.kind))}};
  // Alphas are irrelevant under EUT.
  if (s.model.kind == ModelKind::pt) {
    model["alpha_a"] = s.model.alpha_a;
    model["alpha_d"] = s.model.alpha_d;
  }
  return {
      {"trojans", trojans},
      {"test_budget", s.game.test_budget},
      {"model", model},
      {"fp",
       {{"sigma0_d", vec(s.fp.sigma0_d.probs())},
        {"sigma0_a", vec(s.fp.sigma0_a.probs())},
        {"convergence_m", s.fp.convergence_m},
        {"checkpoint_gap", s.fp.checkpoint_gap},
        {"max_iterations", s.fp.max_iterations}}},
      {"experiment",
       {{"mode", std::string(to_string(s.experiment.mode))},
        {"fine_grid", s.experiment.fine_grid},
        {"alpha_grid", s.experiment.alpha_grid},
        {"alpha_mode", std::string(to_string(s.experiment.alpha_mode))},
        {"pair", s.experiment.pair},
        {"bracket", {s.experiment.bracket.first, s.experiment.bracket.second}}}},
  };
}

}  // namespace

ScenarioFile parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(json_text, e.byte > 0 ? e.byte - 1 : 0);
    throw ScenarioParseError("JSON syntax error at line " + std::to_string(line) + ", column " +
                             std::to_string(col));
  }
  return from_json(root);
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string canonical_json(const ScenarioFile& scenario) { return to_canonical(scenario).dump(); }

std::string scenario_hash(const ScenarioFile& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace htgame

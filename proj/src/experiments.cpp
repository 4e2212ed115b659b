#include "htgame/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "htgame/analysis.hpp"
#include "htgame/errors.hpp"

namespace htgame {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs f(0..n-1) on up to hardware_concurrency threads; results in index order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F f) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min(n, hw);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<R> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string model_text(const BehaviorModel& m) {
  if (m.kind == ModelKind::eut) return "eut";
  return "pt(alpha_a=" + format_number(m.alpha_a) + ",alpha_d=" + format_number(m.alpha_d) + ")";
}

void stamp(ResultTable& t, const ScenarioFile& s, ExperimentMode mode) {
  t.set_metadata("scenario_hash", scenario_hash(s));
  if (!s.name.empty()) t.set_metadata("scenario", s.name);
  t.set_metadata("mode", std::string(to_string(mode)));
  t.set_metadata("model", model_text(s.model));
  t.set_metadata("tool_version", std::string(kToolVersion));
  t.set_metadata("timestamp", utc_timestamp());
}

void add_strategy_columns(std::vector<Column>& cols, const GameSpec& game) {
  const StrategySpace space = enumerate_spaces(game);
  for (const auto& id : space.attacker_strategies) cols.push_back({"p_a_" + id, "prob"});
  for (const auto& label : space.defender_labels) cols.push_back({"p_d_" + label, "prob"});
}

void push_strategies(std::vector<Cell>& row, const Eigen::VectorXd& p_a, const Eigen::VectorXd& p_d) {
  for (Eigen::Index i = 0; i < p_a.size(); ++i) row.emplace_back(p_a(i));
  for (Eigen::Index i = 0; i < p_d.size(); ++i) row.emplace_back(p_d(i));
}

void push_nan_strategies(std::vector<Cell>& row, const GameSpec& game) {
  const StrategySpace space = enumerate_spaces(game);
  for (std::size_t i = 0; i < space.size(Player::attacker) + space.size(Player::defender); ++i)
    row.emplace_back(kNaN);
}

std::string fp_status(const EquilibriumResult& r) { return r.converged ? "ok" : "not_converged"; }

// A solved profile plus whatever the route knows about it.
struct RouteResult {
  std::string route;
  std::string status = "ok";
  std::optional<MixedStrategy> p_d;
  std::optional<MixedStrategy> p_a;
  double iterations = 0.0;
  double converged = kNaN;
};

RouteResult indifference_route(const PayoffMatrix& m, const BehaviorModel& model) {
  RouteResult r{"indifference", "ok", std::nullopt, std::nullopt};
  try {
    const AttackerSolution att = solve_attacker_eut(m);
    const DefenderFamily fam = defender_msne_family_eut(m, att.strategy);
    if (model.kind == ModelKind::eut) {
      r.p_a = att.strategy;
      r.p_d = fam.base_point;
    } else {
      r.p_a = pt_attacker_msne(m, model.alpha_d);
      r.p_d = pt_defender_msne(fam.base_point, model.alpha_a);
    }
  } catch (const SolveError& e) {
    r.status = std::string(to_string(e.code()));
  }
  return r;
}

double exact_eut_value(const PayoffMatrix& m) {
  try {
    return solve_attacker_eut(m).value;
  } catch (const SolveError&) {
    return support_enumeration_solve(m).front().value;
  }
}

}  // namespace

FPConfig scenario_fp_config(const ScenarioFile& scenario, const BehaviorModel& model) {
  FPConfig c = scenario.fp;
  c.model = model;
  return c;
}

ResultTable run_solve(const ScenarioFile& s) {
  const PayoffMatrix m = build_payoff_matrix(s.game);
  std::vector<Column> cols{{"route", ""},        {"status", ""},        {"value", "utility"},
                           {"perceived_d", "utility"}, {"perceived_a", "utility"}};
  add_strategy_columns(cols, s.game);
  for (Column c : {Column{"residual_d", "utility"}, Column{"residual_a", "utility"},
                   Column{"iterations", "count"}, Column{"converged", "bool"},
                   Column{"value_discrepancy", "utility"}, Column{"p_a_discrepancy", "prob"}})
    cols.push_back(c);
  ResultTable t(cols);
  stamp(t, s, ExperimentMode::solve);

  const bool eut = s.model.kind == ModelKind::eut;
  std::vector<RouteResult> routes = parallel_map<RouteResult>(eut ? 3 : 2, [&](std::size_t i) {
    if (i == 0) {
      const EquilibriumResult fp = run_fictitious_play(m, scenario_fp_config(s, s.model));
      RouteResult r{"fictitious_play", fp_status(fp), fp.p_d_star, fp.p_a_star};
      r.iterations = static_cast<double>(fp.iterations);
      r.converged = fp.converged ? 1.0 : 0.0;
      return r;
    }
    if (i == 1) return indifference_route(m, s.model);
    const Equilibrium e = support_enumeration_solve(m).front();
    return RouteResult{"support_enumeration", "ok", e.p_d, e.p_a};
  });

  const RouteResult& fp = routes.front();
  const double fp_value = game_value(m, *fp.p_d, *fp.p_a, s.model).objective;
  for (const RouteResult& r : routes) {
    std::vector<Cell> row{r.route, r.status};
    if (r.p_d && r.p_a) {
      const GameValue g = game_value(m, *r.p_d, *r.p_a, s.model);
      const IndifferenceResidual res = indifference_residual(m, *r.p_d, *r.p_a, s.model);
      row.insert(row.end(), {g.objective, g.perceived_d, g.perceived_a});
      push_strategies(row, r.p_a->probs(), r.p_d->probs());
      row.insert(row.end(), {res.residual_d, res.residual_a, r.iterations, r.converged,
                             std::abs(g.objective - fp_value),
                             (r.p_a->probs() - fp.p_a->probs()).cwiseAbs().maxCoeff()});
    } else {
      row.insert(row.end(), {kNaN, kNaN, kNaN});
      push_nan_strategies(row, s.game);
      row.insert(row.end(), {kNaN, kNaN, r.iterations, r.converged, kNaN, kNaN});
    }
    t.add_row(std::move(row));
  }
  return t;
}

ResultTable run_sweep_fine(const ScenarioFile& s) {
  std::vector<Column> cols{{"fine", "utility"},           {"model", ""},
                           {"status", ""},                {"value_defender", "utility"},
                           {"value_attacker", "utility"}, {"perceived_d", "utility"},
                           {"perceived_a", "utility"}};
  add_strategy_columns(cols, s.game);
  cols.push_back({"iterations", "count"});
  cols.push_back({"converged", "bool"});
  cols.push_back({"sign_change", "bool"});
  ResultTable t(cols);
  stamp(t, s, ExperimentMode::sweep_fine);

  std::vector<BehaviorModel> models{BehaviorModel::eut()};
  if (s.model.kind == ModelKind::pt) models.push_back(s.model);
  const std::vector<double>& grid = s.experiment.fine_grid;
  const std::size_t n = grid.size() * models.size();

  // Task i: grid point i / models, model i % models.
  auto rows = parallel_map<std::vector<Cell>>(n, [&](std::size_t i) {
    const double fine = grid[i / models.size()];
    const BehaviorModel& model = models[i % models.size()];
    const GameSpec game = with_uniform_fine(s.game, fine);
    const PayoffMatrix m = build_payoff_matrix(game);
    std::vector<Cell> row{fine, model_text(model)};
    std::optional<Equilibrium> e;
    double iterations = 0.0;
    double converged = kNaN;
    std::string status = "ok";
    if (model.kind == ModelKind::eut) {
      e = equilibrium_at_fine(s.game, fine, model);
    } else {
      const EquilibriumResult fp = run_fictitious_play(m, scenario_fp_config(s, model));
      e = Equilibrium{fp.p_d_star, fp.p_a_star, fp.game_value};
      iterations = static_cast<double>(fp.iterations);
      converged = fp.converged ? 1.0 : 0.0;
      status = fp_status(fp);
    }
    const GameValue g = game_value(m, e->p_d, e->p_a, model);
    row.insert(row.end(), {status, g.objective, -g.objective, g.perceived_d, g.perceived_a});
    push_strategies(row, e->p_a.probs(), e->p_d.probs());
    row.insert(row.end(), {iterations, converged, 0.0});
    return row;
  });

  const std::size_t value_col = t.column_index("value_defender");
  const std::size_t sign_col = t.column_index("sign_change");
  for (std::size_t i = models.size(); i < rows.size(); ++i) {
    const double prev = std::get<double>(rows[i - models.size()][value_col]);
    const double cur = std::get<double>(rows[i][value_col]);
    rows[i][sign_col] = (prev < 0.0) != (cur < 0.0) ? 1.0 : 0.0;
  }
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

ResultTable run_sweep_alpha(const ScenarioFile& s) {
  std::vector<Column> cols{{"alpha", ""},           {"alpha_a", ""},           {"alpha_d", ""},
                           {"status", ""},          {"value", "utility"},      {"perceived_d", "utility"},
                           {"perceived_a", "utility"}};
  add_strategy_columns(cols, s.game);
  for (Column c : {Column{"residual_d", "utility"}, Column{"residual_a", "utility"},
                   Column{"iterations", "count"}, Column{"converged", "bool"}})
    cols.push_back(c);
  ResultTable t(cols);
  stamp(t, s, ExperimentMode::sweep_alpha);
  t.set_metadata("alpha_mode", std::string(to_string(s.experiment.alpha_mode)));

  const PayoffMatrix m = build_payoff_matrix(s.game);
  const std::vector<double>& grid = s.experiment.alpha_grid;
  auto rows = parallel_map<std::vector<Cell>>(grid.size(), [&](std::size_t i) {
    const double a = grid[i];
    BehaviorModel model{.kind = ModelKind::pt, .alpha_d = a, .alpha_a = a};
    if (s.experiment.alpha_mode == AlphaMode::attacker_only) model.alpha_d = 1.0;
    if (s.experiment.alpha_mode == AlphaMode::defender_only) model.alpha_a = 1.0;
    const EquilibriumResult fp = run_fictitious_play(m, scenario_fp_config(s, model));
    std::vector<Cell> row{a, model.alpha_a, model.alpha_d, fp_status(fp), fp.game_value,
                          fp.perceived_value_d, fp.perceived_value_a};
    push_strategies(row, fp.p_a_star.probs(), fp.p_d_star.probs());
    row.insert(row.end(), {fp.indifference_residual_d, fp.indifference_residual_a,
                           static_cast<double>(fp.iterations), fp.converged ? 1.0 : 0.0});
    return row;
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

ResultTable run_scenario_pair(const ScenarioFile& s) {
  std::vector<Column> cols{{"pair", ""},
                           {"alpha_a", ""},
                           {"alpha_d", ""},
                           {"status", ""},
                           {"value", "utility"},
                           {"perceived_d", "utility"},
                           {"perceived_a", "utility"},
                           {"eut_value", "utility"},
                           {"value_drop", "fraction"}};
  add_strategy_columns(cols, s.game);
  cols.push_back({"iterations", "count"});
  cols.push_back({"converged", "bool"});
  ResultTable t(cols);
  stamp(t, s, ExperimentMode::scenario_pair);

  const PayoffMatrix m = build_payoff_matrix(s.game);
  const auto [alpha_a, alpha_d] = pair_alphas(s.experiment.pair);
  const BehaviorModel model{.kind = ModelKind::pt, .alpha_d = alpha_d, .alpha_a = alpha_a};
  const EquilibriumResult fp = run_fictitious_play(m, scenario_fp_config(s, model));
  const double eut = exact_eut_value(m);
  std::vector<Cell> row{static_cast<double>(s.experiment.pair), alpha_a, alpha_d, fp_status(fp),
                        fp.game_value, fp.perceived_value_d, fp.perceived_value_a, eut,
                        eut != 0.0 ? 1.0 - fp.game_value / eut : kNaN};
  push_strategies(row, fp.p_a_star.probs(), fp.p_d_star.probs());
  row.insert(row.end(), {static_cast<double>(fp.iterations), fp.converged ? 1.0 : 0.0});
  t.add_row(std::move(row));
  return t;
}

ResultTable run_trace(const ScenarioFile& s) {
  std::vector<Column> cols{{"iteration", "count"}};
  add_strategy_columns(cols, s.game);
  cols.push_back({"delta_p_a", "prob"});
  cols.push_back({"delta_p_d", "prob"});
  ResultTable t(cols);
  stamp(t, s, ExperimentMode::trace);

  FPConfig config = scenario_fp_config(s, s.model);
  config.record_trace = true;
  const EquilibriumResult fp = run_fictitious_play(build_payoff_matrix(s.game), config);
  t.set_metadata("converged", fp.converged ? "1" : "0");
  Eigen::VectorXd prev_a = config.sigma0_d.probs();
  Eigen::VectorXd prev_d = config.sigma0_a.probs();
  for (const TracePoint& p : fp.trace) {
    std::vector<Cell> row{static_cast<double>(p.iteration)};
    push_strategies(row, p.p_a, p.p_d);
    row.emplace_back((p.p_a - prev_a).cwiseAbs().maxCoeff());
    row.emplace_back((p.p_d - prev_d).cwiseAbs().maxCoeff());
    prev_a = p.p_a;
    prev_d = p.p_d;
    t.add_row(std::move(row));
  }
  return t;
}

ResultTable run_threshold(const ScenarioFile& s) {
  std::vector<Column> cols{{"model", ""},
                           {"status", ""},
                           {"f_threshold", "utility"},
                           {"bracket_lo", "utility"},
                           {"bracket_hi", "utility"},
                           {"value_at_threshold", "utility"},
                           {"perceived_d", "utility"},
                           {"perceived_a", "utility"},
                           {"closed_form_f", "utility"}};
  add_strategy_columns(cols, s.game);
  cols.push_back({"probes", "count"});
  ResultTable t(cols);
  stamp(t, s, ExperimentMode::threshold);

  std::vector<BehaviorModel> models{BehaviorModel::eut()};
  if (s.model.kind == ModelKind::pt) models.push_back(s.model);
  std::vector<std::string> errors(models.size());
  auto rows = parallel_map<std::vector<Cell>>(models.size(), [&](std::size_t i) {
    const BehaviorModel& model = models[i];
    ThresholdOptions opt;
    opt.lo = s.experiment.bracket.first;
    opt.hi = s.experiment.bracket.second;
    opt.fp = scenario_fp_config(s, model);
    std::vector<Cell> row{model_text(model)};
    try {
      const FineThresholdResult r = fine_threshold(s.game, model, opt);
      row.insert(row.end(), {std::string("ok"), r.f_value, r.bracket.first, r.bracket.second,
                             r.value_at_threshold, r.perceived_d, r.perceived_a, r.closed_form_f});
      push_strategies(row, r.p_a_at_threshold.probs(), r.p_d_at_threshold.probs());
      row.emplace_back(static_cast<double>(r.probes));
    } catch (const SolveError& e) {
      row.insert(row.end(), {std::string(to_string(e.code())), kNaN, opt.lo, opt.hi, kNaN, kNaN,
                             kNaN, kNaN});
      push_nan_strategies(row, s.game);
      row.emplace_back(kNaN);
      errors[i] = e.what();
    }
    return row;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!errors[i].empty()) t.set_metadata("error_" + model_text(models[i]), errors[i]);
    t.add_row(std::move(rows[i]));
  }
  return t;
}

ResultTable run_experiment(const ScenarioFile& scenario, ExperimentMode mode) {
  scenario.validate();
  switch (mode) {
    case ExperimentMode::solve: return run_solve(scenario);
    case ExperimentMode::sweep_fine: return run_sweep_fine(scenario);
    case ExperimentMode::sweep_alpha: return run_sweep_alpha(scenario);
    case ExperimentMode::scenario_pair: return run_scenario_pair(scenario);
    case ExperimentMode::trace: return run_trace(scenario);
    case ExperimentMode::threshold: return run_threshold(scenario);
  }
  throw std::logic_error("unhandled experiment mode");
}

}  // namespace htgame

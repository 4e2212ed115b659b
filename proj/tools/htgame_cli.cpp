// Command-line front end: loads a scenario, applies flag overrides, runs one
// experiment and writes its CSV. Failures print one JSON object on stderr:
//   {"error": "usage"|"validation"|"solver"|"io"|"internal", "message": ..., ...}
// Exit codes: 0 ok, 1 internal, 2 usage, 3 validation, 4 solver, 5 io.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "htgame/errors.hpp"
#include "htgame/experiments.hpp"
#include "htgame/scenario.hpp"

namespace {

using namespace htgame;

struct Overrides {
  std::string scenario;
  std::optional<std::string> model;
  std::optional<double> alpha_a;
  std::optional<double> alpha_d;
  std::optional<double> fine;
  std::optional<std::string> out;
  std::optional<std::size_t> max_iters;
  std::optional<double> tol;
  std::optional<std::size_t> checkpoint_gap;
  std::optional<int> pair;
  std::optional<std::string> alpha_mode;
};

int fail(const std::string& kind, const std::string& message, int code,
         const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json j = {{"error", kind}, {"message", message}};
  j.update(extra);
  std::cerr << j.dump() << '\n';
  return code;
}

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--scenario", o.scenario, "scenario JSON file")->required();
  sub->add_option("--model", o.model, "eut or pt")->check(CLI::IsMember({"eut", "pt"}));
  sub->add_option("--alpha-a", o.alpha_a, "attacker rationality in (0,1]");
  sub->add_option("--alpha-d", o.alpha_d, "defender rationality in (0,1]");
  sub->add_option("--fine", o.fine, "uniform fine for every trojan");
  sub->add_option("--out", o.out, "CSV output path (stdout if omitted)");
  sub->add_option("--max-iters", o.max_iters, "fictitious play iteration cap");
  sub->add_option("--tol", o.tol, "convergence tolerance 1/M");
  sub->add_option("--checkpoint-gap", o.checkpoint_gap, "iterations between convergence checks");
}

ScenarioFile apply(ScenarioFile s, const Overrides& o) {
  if (o.model) s.model.kind = *o.model == "pt" ? ModelKind::pt : ModelKind::eut;
  if (o.alpha_a) s.model.alpha_a = *o.alpha_a;
  if (o.alpha_d) s.model.alpha_d = *o.alpha_d;
  if ((o.alpha_a || o.alpha_d) && !o.model) s.model.kind = ModelKind::pt;
  if (o.fine) s.game = with_uniform_fine(s.game, *o.fine);
  if (o.max_iters) s.fp.max_iterations = *o.max_iters;
  if (o.tol) {
    if (!(*o.tol > 0.0 && *o.tol <= 0.1)) throw ValidationError("--tol must be in (0, 0.1]");
    s.fp.convergence_m = static_cast<std::uint64_t>(std::llround(1.0 / *o.tol));
  }
  if (o.checkpoint_gap) s.fp.checkpoint_gap = *o.checkpoint_gap;
  if (o.pair) s.experiment.pair = *o.pair;
  if (o.alpha_mode) s.experiment.alpha_mode = parse_alpha_mode(*o.alpha_mode);
  s.fp.model = s.model;
  s.validate();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardware-trojan detection game: equilibria, sweeps and thresholds"};
  app.require_subcommand(1);
  Overrides o;
  struct Sub {
    const char* name;
    ExperimentMode mode;
    const char* help;
  };
  const Sub subs[] = {
      {"solve", ExperimentMode::solve, "equilibrium by fictitious play and exact routes"},
      {"sweep-fine", ExperimentMode::sweep_fine, "equilibrium value over a grid of fines"},
      {"sweep-alpha", ExperimentMode::sweep_alpha, "PT equilibrium over a grid of rationality values"},
      {"scenario-pair", ExperimentMode::scenario_pair, "asymmetric-rationality scenario 1 or 2"},
      {"trace", ExperimentMode::trace, "fictitious play beliefs at every checkpoint"},
      {"threshold", ExperimentMode::threshold, "fine at which the game value is zero"},
  };
  std::vector<std::pair<CLI::App*, ExperimentMode>> commands;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    add_common(cmd, o);
    if (sub.mode == ExperimentMode::scenario_pair)
      cmd->add_option("--pair", o.pair, "1: alpha_a=0.5, alpha_d=0.1; 2: alpha_a=0.1, alpha_d=0.5");
    if (sub.mode == ExperimentMode::sweep_alpha)
      cmd->add_option("--alpha-mode", o.alpha_mode, "joint, attacker_only or defender_only");
    commands.emplace_back(cmd, sub.mode);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  ExperimentMode mode = ExperimentMode::solve;
  for (const auto& [cmd, m] : commands)
    if (cmd->parsed()) mode = m;

  try {
    const ScenarioFile scenario = apply(load_scenario(o.scenario), o);
    const ResultTable table = run_experiment(scenario, mode);
    if (o.out) {
      std::ofstream out(*o.out);
      if (!out) return fail("io", "cannot write '" + *o.out + "'", 5);
      table.write_csv(out);
      if (!out) return fail("io", "write to '" + *o.out + "' failed", 5);
    } else {
      table.write_csv(std::cout);
    }
  } catch (const SolveError& e) {
    return fail("solver", e.what(), 4, {{"code", std::string(to_string(e.code()))}});
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}

#pragma once

// Scenario files: JSON description of a game, a behavioral model, FP settings
// and the experiment to run. Unknown keys are rejected at every level.
//
//   {
//     "name": "reference_case",                        optional, not hashed
//     "trojans": [{"id": "A", "damage": 1, "fine": 8}, ...],
//     "uniform_fine": 8,                           instead of per-trojan fines
//     "test_budget": 2,
//     "model": {"kind": "eut"|"pt", "alpha_a": 1, "alpha_d": 1},
//     "fp": {"sigma0_d": [...], "sigma0_a": [...], "convergence_m": 1000,
//            "checkpoint_gap": 1000, "max_iterations": 10000000},
//     "experiment": {"mode": "solve"|"sweep_fine"|"sweep_alpha"|"scenario_pair"|
//                            "trace"|"threshold",
//                    "fine_grid": [...], "alpha_grid": [...],
//                    "alpha_mode": "joint"|"attacker_only"|"defender_only",
//                    "pair": 1|2, "bracket": [0.1, 50]}
//   }

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "htgame/fictitious_play.hpp"
#include "htgame/game_model.hpp"

namespace htgame {

enum class ExperimentMode { solve, sweep_fine, sweep_alpha, scenario_pair, trace, threshold };
enum class AlphaMode { joint, attacker_only, defender_only };

std::string_view to_string(ExperimentMode mode);
std::string_view to_string(AlphaMode mode);
ExperimentMode parse_experiment_mode(std::string_view text);
AlphaMode parse_alpha_mode(std::string_view text);

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::solve;
  std::vector<double> fine_grid;   // defaults to 1..12
  std::vector<double> alpha_grid;  // defaults to 0.1..1.0
  AlphaMode alpha_mode = AlphaMode::joint;
  int pair = 1;  // 1: alpha_a=0.5, alpha_d=0.1; 2: alpha_a=0.1, alpha_d=0.5
  std::pair<double, double> bracket{0.1, 50.0};
};

struct ScenarioFile {
  std::string name;
  GameSpec game;
  BehaviorModel model;
  FPConfig fp;
  ExperimentSpec experiment;
  bool sigma0_given = false;  // false: defaults follow the game's size

  /// Re-checks every invariant (after programmatic edits such as CLI overrides).
  void validate() const;
};

/// Parse error with the offending location ("line 3" or "trojans[1].damage").
class ScenarioParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

ScenarioFile load_scenario(const std::filesystem::path& path);
ScenarioFile parse_scenario(std::string_view json_text);

/// FNV-1a over a canonical JSON rendering of the semantic content (every
/// field except `name`, defaults filled in). Hex string.
std::string scenario_hash(const ScenarioFile& scenario);

/// Canonical JSON of the semantic content; the hash is taken over this.
std::string canonical_json(const ScenarioFile& scenario);

std::vector<double> default_fine_grid();
std::vector<double> default_alpha_grid();

/// Alphas of the asymmetric-rationality pair: {alpha_a, alpha_d}.
std::pair<double, double> pair_alphas(int pair);

}  // namespace htgame

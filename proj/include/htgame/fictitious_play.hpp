#pragma once

// Fictitious play for the detection game under EUT or PT.
//
// Each round both players best-respond simultaneously to their current
// belief (empirical frequency of the opponent's past moves, Prelec-weighted
// under PT), then both beliefs are updated with the opponent's move.
//
// Belief bookkeeping: sigma0 counts as one pseudo-observation, so after k
// rounds sigma = (sigma0 + counts of observed moves) / (k + 1).
//
// Convergence: every `checkpoint_gap` rounds the beliefs are compared with
// those of the previous checkpoint; the run stops once the largest change of
// both players is below 1/M. A consecutive-round comparison is useless here
// because one update moves a belief by at most 1/(k+1).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "htgame/game_model.hpp"

namespace htgame {

struct FPConfig {
  MixedStrategy sigma0_d;  // defender's initial belief over attacker strategies
  MixedStrategy sigma0_a;  // attacker's initial belief over defender strategies
  BehaviorModel model;
  std::uint64_t convergence_m = 1000;
  std::size_t checkpoint_gap = 1000;
  std::size_t max_iterations = 10'000'000;
  bool record_trace = false;

  double tolerance() const { return 1.0 / static_cast<double>(convergence_m); }

  /// Checks dimensions against the game and the numeric invariants.
  void validate(const PayoffMatrix& m) const;
};

/// Initial beliefs used when a scenario gives none: the published starting
/// vectors for the 4-trojan/budget-2 game, uniform otherwise.
/// Returns {sigma0_d, sigma0_a}.
std::pair<MixedStrategy, MixedStrategy> default_initial_beliefs(const GameSpec& spec);

/// Config with default initial beliefs and the given model.
FPConfig default_fp_config(const GameSpec& spec, const BehaviorModel& model = {});

struct FPState {
  std::size_t k = 0;
  Eigen::VectorXd counts_d;  // defender's tallies of attacker moves (incl. prior)
  Eigen::VectorXd counts_a;  // attacker's tallies of defender moves
  double total_d = 1.0;
  double total_a = 1.0;
  Eigen::VectorXd sigma_d;  // defender's belief about the attacker
  Eigen::VectorXd sigma_a;  // attacker's belief about the defender
  std::optional<std::size_t> last_action_d;
  std::optional<std::size_t> last_action_a;
  std::optional<Eigen::VectorXd> checkpoint_sigma_d;
  std::optional<Eigen::VectorXd> checkpoint_sigma_a;

  static FPState initial(const FPConfig& config);

  /// Snapshot the current beliefs as the comparison point for the next check.
  void record_checkpoint();

  const Eigen::VectorXd& belief(Player observer) const {
    return observer == Player::defender ? sigma_d : sigma_a;
  }
};

/// Index of the best pure strategy of `player` against `belief` (a
/// distribution over the opponent's strategies). Under PT the belief is
/// Prelec-weighted with the player's own alpha first. Ties go to the lowest index.
std::size_t best_response(const PayoffMatrix& m, Player player, const Eigen::VectorXd& belief,
                          const BehaviorModel& model);

/// `observer` saw the opponent play `observed_action`.
FPState update_beliefs(FPState state, std::size_t observed_action, Player observer);

/// Largest belief change since the last checkpoint is below `tolerance` for
/// both players. Throws std::logic_error if no checkpoint has been recorded.
bool check_convergence(const FPState& state, double tolerance);

struct TracePoint {
  std::size_t iteration = 0;
  Eigen::VectorXd p_d;  // attacker's belief about the defender
  Eigen::VectorXd p_a;  // defender's belief about the attacker
};

struct EquilibriumResult {
  MixedStrategy p_d_star;
  MixedStrategy p_a_star;
  double game_value = 0.0;  // objective (EUT-evaluated) defender utility
  double perceived_value_d = 0.0;
  double perceived_value_a = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double indifference_residual_d = 0.0;
  double indifference_residual_a = 0.0;
  std::vector<TracePoint> trace;
};

/// Runs fictitious play to convergence or `max_iterations`. Never throws for
/// non-convergence; `converged` reports it. Deterministic.
EquilibriumResult run_fictitious_play(const PayoffMatrix& m, const FPConfig& config);
EquilibriumResult run_fictitious_play(const GameSpec& spec, const FPConfig& config);

}  // namespace htgame

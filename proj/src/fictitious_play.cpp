#include "htgame/fictitious_play.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "htgame/analysis.hpp"
#include "htgame/weighting.hpp"

namespace htgame {

namespace {

// Published starting vectors for the 4-trojan, K=2 game.
const double kReferenceSigma0D[] = {0.2083, 0.1667, 0.3333, 0.2917};
const double kReferenceSigma0A[] = {0.2051, 0.2564, 0.2564, 0.0513, 0.0513, 0.1795};

Eigen::VectorXd to_vector(std::span<const double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

// Index of the largest score; near-ties resolve to the lowest index.
std::size_t argmax_lowest(const Eigen::VectorXd& scores) {
  std::size_t best = 0;
  double best_score = scores(0);
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores(i) > best_score + 1e-12 * (1.0 + std::abs(best_score))) {
      best_score = scores(i);
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

void observe(FPState& state, std::size_t action, Player observer) {
  Eigen::VectorXd& counts = observer == Player::defender ? state.counts_d : state.counts_a;
  Eigen::VectorXd& sigma = observer == Player::defender ? state.sigma_d : state.sigma_a;
  double& total = observer == Player::defender ? state.total_d : state.total_a;
  counts(static_cast<Eigen::Index>(action)) += 1.0;
  total += 1.0;
  sigma = counts / total;
  (observer == Player::defender ? state.last_action_a : state.last_action_d) = action;
}

double max_change(const Eigen::VectorXd& now, const Eigen::VectorXd& before) {
  return (now - before).cwiseAbs().maxCoeff();
}

}  // namespace

void FPConfig::validate(const PayoffMatrix& m) const {
  if (sigma0_d.size() != m.num_strategies(Player::attacker))
    throw ValidationError("sigma0_d must cover the attacker's strategies");
  if (sigma0_a.size() != m.num_strategies(Player::defender))
    throw ValidationError("sigma0_a must cover the defender's strategies");
  if (convergence_m < 10) throw ValidationError("convergence M must be >= 10");
  if (checkpoint_gap < 1) throw ValidationError("checkpoint gap must be >= 1");
  if (max_iterations < checkpoint_gap)
    throw ValidationError("max_iterations must be >= checkpoint gap");
  model.validate();
}

std::pair<MixedStrategy, MixedStrategy> default_initial_beliefs(const GameSpec& spec) {
  spec.validate();
  const StrategySpace space = enumerate_spaces(spec);
  if (spec.num_trojans() == 4 && spec.test_budget == 2)
    return {MixedStrategy::normalized(to_vector(kReferenceSigma0D)),
            MixedStrategy::normalized(to_vector(kReferenceSigma0A))};
  return {MixedStrategy::uniform(space.size(Player::attacker)),
          MixedStrategy::uniform(space.size(Player::defender))};
}

FPConfig default_fp_config(const GameSpec& spec, const BehaviorModel& model) {
  auto [sigma0_d, sigma0_a] = default_initial_beliefs(spec);
  return FPConfig{std::move(sigma0_d), std::move(sigma0_a), model};
}

FPState FPState::initial(const FPConfig& config) {
  FPState s;
  s.counts_d = config.sigma0_d.probs();
  s.counts_a = config.sigma0_a.probs();
  s.total_d = 1.0;
  s.total_a = 1.0;
  s.sigma_d = s.counts_d;
  s.sigma_a = s.counts_a;
  return s;
}

void FPState::record_checkpoint() {
  checkpoint_sigma_d = sigma_d;
  checkpoint_sigma_a = sigma_a;
}

std::size_t best_response(const PayoffMatrix& m, Player player, const Eigen::VectorXd& belief,
                          const BehaviorModel& model) {
  const Player other = opponent(player);
  if (static_cast<std::size_t>(belief.size()) != m.num_strategies(other))
    throw ValidationError("belief dimension does not match the opponent's strategies");
  model.validate();
  const double alpha = model.alpha(player);
  const Eigen::VectorXd seen = alpha == 1.0 ? belief : weight_vector(belief, alpha);
  const Eigen::MatrixXd& u = m.defender_utilities();
  const Eigen::VectorXd scores =
      player == Player::defender ? Eigen::VectorXd(u * seen)
                                 : Eigen::VectorXd(-(u.transpose() * seen));
  return argmax_lowest(scores);
}

FPState update_beliefs(FPState state, std::size_t observed_action, Player observer) {
  const Eigen::VectorXd& counts = observer == Player::defender ? state.counts_d : state.counts_a;
  if (observed_action >= static_cast<std::size_t>(counts.size()))
    throw ValidationError("observed action out of range");
  observe(state, observed_action, observer);
  return state;
}

bool check_convergence(const FPState& state, double tolerance) {
  if (!state.checkpoint_sigma_d || !state.checkpoint_sigma_a)
    throw std::logic_error("check_convergence needs a recorded checkpoint");
  return max_change(state.sigma_d, *state.checkpoint_sigma_d) < tolerance &&
         max_change(state.sigma_a, *state.checkpoint_sigma_a) < tolerance;
}

EquilibriumResult run_fictitious_play(const PayoffMatrix& m, const FPConfig& config) {
  config.validate(m);
  const BehaviorModel& model = config.model;
  const double alpha_d = model.alpha(Player::defender);
  const double alpha_a = model.alpha(Player::attacker);
  const double tol = config.tolerance();

  const Eigen::MatrixXd& defender_u = m.defender_utilities();
  const Eigen::MatrixXd attacker_u = m.attacker_utilities();

  FPState state = FPState::initial(config);
  state.record_checkpoint();

  Eigen::VectorXd seen_by_d(state.sigma_d.size());
  Eigen::VectorXd seen_by_a(state.sigma_a.size());
  Eigen::VectorXd scores_d(defender_u.rows());
  Eigen::VectorXd scores_a(attacker_u.rows());

  std::vector<TracePoint> trace;
  bool converged = false;
  while (state.k < config.max_iterations) {
    // Both players respond to the beliefs of the previous round.
    if (alpha_d == 1.0) {
      seen_by_d = state.sigma_d;
    } else {
      apply_prelec({state.sigma_d.data(), static_cast<std::size_t>(state.sigma_d.size())},
                   {seen_by_d.data(), static_cast<std::size_t>(seen_by_d.size())}, alpha_d);
    }
    if (alpha_a == 1.0) {
      seen_by_a = state.sigma_a;
    } else {
      apply_prelec({state.sigma_a.data(), static_cast<std::size_t>(state.sigma_a.size())},
                   {seen_by_a.data(), static_cast<std::size_t>(seen_by_a.size())}, alpha_a);
    }
    scores_d.noalias() = defender_u * seen_by_d;
    scores_a.noalias() = attacker_u * seen_by_a;
    const std::size_t move_d = argmax_lowest(scores_d);
    const std::size_t move_a = argmax_lowest(scores_a);

    observe(state, move_a, Player::defender);
    observe(state, move_d, Player::attacker);
    ++state.k;

    if (state.k % config.checkpoint_gap == 0) {
      if (config.record_trace) trace.push_back({state.k, state.sigma_a, state.sigma_d});
      if (check_convergence(state, tol)) {
        converged = true;
        break;
      }
      state.record_checkpoint();
    }
  }
  if (config.record_trace && (trace.empty() || trace.back().iteration != state.k))
    trace.push_back({state.k, state.sigma_a, state.sigma_d});

  // The attacker's belief about the defender is the defender's strategy and vice versa.
  MixedStrategy p_d = MixedStrategy::normalized(state.sigma_a);
  MixedStrategy p_a = MixedStrategy::normalized(state.sigma_d);
  const GameValue value = game_value(m, p_d, p_a, model);
  const IndifferenceResidual residual = indifference_residual(m, p_d, p_a, model);

  EquilibriumResult result{std::move(p_d), std::move(p_a), 0.0, 0.0, 0.0, 0, false, 0.0, 0.0, {}};
  result.game_value = value.objective;
  result.perceived_value_d = value.perceived_d;
  result.perceived_value_a = value.perceived_a;
  result.iterations = state.k;
  result.converged = converged;
  result.indifference_residual_d = residual.residual_d;
  result.indifference_residual_a = residual.residual_a;
  result.trace = std::move(trace);
  return result;
}

EquilibriumResult run_fictitious_play(const GameSpec& spec, const FPConfig& config) {
  return run_fictitious_play(build_payoff_matrix(spec), config);
}

}  // namespace htgame

#include "htgame/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "htgame/weighting.hpp"

namespace htgame {

std::string_view to_string(SolveErrc code) {
  switch (code) {
    case SolveErrc::rank_deficient: return "rank_deficient";
    case SolveErrc::reduced_support: return "reduced_support";
    case SolveErrc::infeasible_family: return "infeasible_family";
    case SolveErrc::no_root_in_bracket: return "no_root_in_bracket";
    case SolveErrc::inconsistent_system: return "inconsistent_system";
  }
  return "unknown";
}

std::string_view to_string(Player p) {
  return p == Player::defender ? "defender" : "attacker";
}

std::string_view to_string(ModelKind kind) { return kind == ModelKind::eut ? "eut" : "pt"; }

void GameSpec::validate() const {
  const std::size_t t = trojan_ids.size();
  if (t == 0) throw ValidationError("at least one trojan type required");
  if (damages.size() != t || fines.size() != t)
    throw ValidationError("damages and fines must have one entry per trojan");
  std::set<std::string> seen;
  for (const auto& id : trojan_ids) {
    if (id.empty()) throw ValidationError("trojan ids must be non-empty");
    if (!seen.insert(id).second) throw ValidationError("duplicate trojan id '" + id + "'");
  }
  for (std::size_t i = 0; i < t; ++i) {
    if (!(damages[i] > 0.0) || !std::isfinite(damages[i]))
      throw ValidationError("damage of '" + trojan_ids[i] + "' must be positive");
    if (!(fines[i] >= 0.0) || !std::isfinite(fines[i]))
      throw ValidationError("fine of '" + trojan_ids[i] + "' must be non-negative");
  }
  if (test_budget < 1) throw ValidationError("K >= 1 required");
  if (static_cast<std::size_t>(test_budget) >= t) throw ValidationError("K < T required");
}

GameSpec make_game_spec(std::vector<std::string> ids, std::vector<double> damages,
                        std::vector<double> fines, int test_budget) {
  GameSpec spec{std::move(ids), std::move(damages), std::move(fines), test_budget};
  spec.validate();
  return spec;
}

GameSpec with_uniform_fine(GameSpec spec, double fine) {
  spec.fines.assign(spec.trojan_ids.size(), fine);
  spec.validate();
  return spec;
}

GameSpec reference_case_spec(double fine) {
  return make_game_spec({"A", "B", "C", "D"}, {1.0, 2.0, 4.0, 12.0},
                        {fine, fine, fine, fine}, 2);
}

namespace {

std::string join_label(const GameSpec& spec, const DefenderSubset& subset) {
  const bool single_char = std::all_of(spec.trojan_ids.begin(), spec.trojan_ids.end(),
                                       [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i > 0 && !single_char) out += '+';
    out += spec.trojan_ids[subset[i]];
  }
  return out;
}

}  // namespace

StrategySpace enumerate_spaces(const GameSpec& spec) {
  spec.validate();
  StrategySpace space;
  space.attacker_strategies = spec.trojan_ids;

  const std::size_t t = spec.num_trojans();
  const auto k = static_cast<std::size_t>(spec.test_budget);
  // Lexicographic K-combinations of {0..T-1}.
  DefenderSubset current(k);
  for (std::size_t i = 0; i < k; ++i) current[i] = i;
  while (true) {
    space.defender_subsets.push_back(current);
    space.defender_labels.push_back(join_label(spec, current));
    std::size_t pos = k;
    while (pos > 0 && current[pos - 1] == t - k + (pos - 1)) --pos;
    if (pos == 0) break;
    ++current[pos - 1];
    for (std::size_t j = pos; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return space;
}

std::size_t StrategySpace::defender_index(std::string_view label) const {
  auto it = std::find(defender_labels.begin(), defender_labels.end(), label);
  if (it == defender_labels.end())
    throw ValidationError("unknown defender strategy '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - defender_labels.begin());
}

std::size_t StrategySpace::attacker_index(std::string_view id) const {
  auto it = std::find(attacker_strategies.begin(), attacker_strategies.end(), id);
  if (it == attacker_strategies.end())
    throw ValidationError("unknown attacker strategy '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - attacker_strategies.begin());
}

double pure_utility(const GameSpec& spec, const DefenderSubset& tested, std::size_t trojan,
                    Player player) {
  if (trojan >= spec.num_trojans()) throw ValidationError("trojan index out of range");
  const bool detected = std::find(tested.begin(), tested.end(), trojan) != tested.end();
  const double u_d = detected ? spec.fines[trojan] : -spec.damages[trojan];
  return player == Player::defender ? u_d : -u_d;
}

double pure_utility(const GameSpec& spec, std::string_view defender_label,
                    std::string_view trojan_id, Player player) {
  const StrategySpace space = enumerate_spaces(spec);
  const std::size_t row = space.defender_index(defender_label);
  const std::size_t col = space.attacker_index(trojan_id);
  return pure_utility(spec, space.defender_subsets[row], col, player);
}

PayoffMatrix::PayoffMatrix(Eigen::MatrixXd defender_utilities)
    : m_(std::move(defender_utilities)) {
  if (m_.rows() == 0 || m_.cols() == 0) throw ValidationError("payoff matrix must be non-empty");
  if (!m_.allFinite()) throw ValidationError("payoff matrix entries must be finite");
}

PayoffMatrix build_payoff_matrix(const GameSpec& spec) {
  const StrategySpace space = enumerate_spaces(spec);
  const auto rows = static_cast<Eigen::Index>(space.defender_subsets.size());
  const auto cols = static_cast<Eigen::Index>(spec.num_trojans());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = pure_utility(spec, space.defender_subsets[static_cast<std::size_t>(i)],
                             static_cast<std::size_t>(j), Player::defender);
  return PayoffMatrix(std::move(m));
}

PayoffDecomposition decompose_payoffs(const GameSpec& spec) {
  const StrategySpace space = enumerate_spaces(spec);
  const auto rows = static_cast<Eigen::Index>(space.defender_subsets.size());
  const auto cols = static_cast<Eigen::Index>(spec.num_trojans());
  PayoffDecomposition out{Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols)};
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& subset = space.defender_subsets[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto t = static_cast<std::size_t>(j);
      if (std::find(subset.begin(), subset.end(), t) != subset.end())
        out.detection(i, j) = 1.0;
      else
        out.damage(i, j) = spec.damages[t];
    }
  }
  return out;
}

bool is_distribution(const Eigen::VectorXd& v, double tol) {
  if (v.size() == 0 || !v.allFinite()) return false;
  if ((v.array() < -tol).any() || (v.array() > 1.0 + tol).any()) return false;
  return std::abs(v.sum() - 1.0) <= tol;
}

MixedStrategy::MixedStrategy(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (!is_distribution(probs_))
    throw ValidationError("mixed strategy must have entries in [0,1] summing to 1");
  probs_ = probs_.cwiseMax(0.0).cwiseMin(1.0);
}

MixedStrategy MixedStrategy::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("strategy space must be non-empty");
  return MixedStrategy(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                                 1.0 / static_cast<double>(n)));
}

MixedStrategy MixedStrategy::point_mass(std::size_t n, std::size_t index) {
  if (index >= n) throw ValidationError("point mass index out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return MixedStrategy(std::move(v));
}

MixedStrategy MixedStrategy::normalized(const Eigen::VectorXd& weights) {
  if (weights.size() == 0 || !weights.allFinite() || (weights.array() < 0.0).any())
    throw ValidationError("weights must be finite and non-negative");
  const double total = weights.sum();
  if (!(total > 0.0)) throw ValidationError("weights must have a positive sum");
  return MixedStrategy(weights / total);
}

void BehaviorModel::validate() const {
  if (kind == ModelKind::eut) return;
  for (double a : {alpha_d, alpha_a})
    if (!(a > 0.0 && a <= 1.0)) throw ValidationError("rationality alpha must be in (0, 1]");
}

namespace {

void check_dims(const PayoffMatrix& m, const MixedStrategy& p_d, const MixedStrategy& p_a) {
  if (p_d.size() != m.num_strategies(Player::defender) ||
      p_a.size() != m.num_strategies(Player::attacker))
    throw ValidationError("strategy dimensions do not match the payoff matrix");
}

}  // namespace

double expected_utility_eut(const PayoffMatrix& m, const MixedStrategy& p_d,
                            const MixedStrategy& p_a, Player player) {
  check_dims(m, p_d, p_a);
  const double u_d = p_d.probs().dot(m.defender_utilities() * p_a.probs());
  return player == Player::defender ? u_d : -u_d;
}

double expected_utility_pt(const PayoffMatrix& m, const MixedStrategy& p_d,
                           const MixedStrategy& p_a, double alpha, Player player) {
  check_dims(m, p_d, p_a);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("rationality alpha must be in (0, 1]");
  const Eigen::MatrixXd& u = m.defender_utilities();
  if (player == Player::defender)
    return p_d.probs().dot(u * weight_vector(p_a.probs(), alpha));
  return -weight_vector(p_d.probs(), alpha).dot(u * p_a.probs());
}

}  // namespace htgame

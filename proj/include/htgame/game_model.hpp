#pragma once

// Game instance, strategy spaces, payoff matrix and expected utilities for
// the attacker/defender trojan detection game.
//
// Orientation convention used everywhere: matrices are indexed
// [defender strategy][attacker strategy]. The defender's utility matrix is
// stored; the attacker's is its negated transpose and is only derived.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "htgame/errors.hpp"

namespace htgame {

enum class Player { defender, attacker };

constexpr Player opponent(Player p) {
  return p == Player::defender ? Player::attacker : Player::defender;
}

std::string_view to_string(Player p);

/// Entries within this distance of the simplex are accepted as distributions.
inline constexpr double kSimplexTolerance = 1e-9;

struct GameSpec {
  std::vector<std::string> trojan_ids;
  std::vector<double> damages;  // V_t > 0
  std::vector<double> fines;    // F_t >= 0
  int test_budget = 1;          // K, 1 <= K < T

  std::size_t num_trojans() const { return trojan_ids.size(); }

  /// Throws ValidationError naming the violated invariant.
  void validate() const;
};

/// Validating constructor.
GameSpec make_game_spec(std::vector<std::string> ids, std::vector<double> damages,
                        std::vector<double> fines, int test_budget);

/// Same trojans and budget, every fine set to `fine`.
GameSpec with_uniform_fine(GameSpec spec, double fine);

/// Four trojans A..D with damages 1, 2, 4, 12, budget 2, uniform fine.
GameSpec reference_case_spec(double fine = 8.0);

/// Sorted trojan indices tested by one defender strategy.
using DefenderSubset = std::vector<std::size_t>;

struct StrategySpace {
  std::vector<std::string> attacker_strategies;
  std::vector<DefenderSubset> defender_subsets;  // lexicographic by member index
  std::vector<std::string> defender_labels;      // e.g. "AB"

  std::size_t size(Player p) const {
    return p == Player::defender ? defender_subsets.size() : attacker_strategies.size();
  }
  std::size_t defender_index(std::string_view label) const;
  std::size_t attacker_index(std::string_view id) const;
  const std::vector<std::string>& labels(Player p) const {
    return p == Player::defender ? defender_labels : attacker_strategies;
  }
};

StrategySpace enumerate_spaces(const GameSpec& spec);

/// u_d = F_t when trojan t is in the tested subset, -V_t otherwise; u_a = -u_d.
double pure_utility(const GameSpec& spec, const DefenderSubset& tested, std::size_t trojan,
                    Player player);
double pure_utility(const GameSpec& spec, std::string_view defender_label,
                    std::string_view trojan_id, Player player);

class PayoffMatrix {
 public:
  explicit PayoffMatrix(Eigen::MatrixXd defender_utilities);

  /// Defender payoffs M_a: rows = defender subsets, cols = trojans.
  const Eigen::MatrixXd& defender_utilities() const { return m_; }
  /// Attacker utilities oriented [attacker][defender]: -M_a^T.
  Eigen::MatrixXd attacker_utilities() const { return -m_.transpose(); }

  std::size_t num_strategies(Player p) const {
    return static_cast<std::size_t>(p == Player::defender ? m_.rows() : m_.cols());
  }

 private:
  Eigen::MatrixXd m_;
};

PayoffMatrix build_payoff_matrix(const GameSpec& spec);

/// Split of the defender utility into a detection part and a damage part:
///   M_a(i, j) = F_j * detection(i, j) - damage(i, j)
/// where detection is the 0/1 "trojan j is tested by subset i" indicator and
/// damage(i, j) = V_j when j goes undetected.
struct PayoffDecomposition {
  Eigen::MatrixXd detection;
  Eigen::MatrixXd damage;
};

PayoffDecomposition decompose_payoffs(const GameSpec& spec);

class MixedStrategy {
 public:
  /// Throws ValidationError unless entries are in [0,1] and sum to 1 (1e-9).
  explicit MixedStrategy(Eigen::VectorXd probs);

  static MixedStrategy uniform(std::size_t n);
  static MixedStrategy point_mass(std::size_t n, std::size_t index);
  /// Accepts non-negative weights with positive sum and rescales them.
  static MixedStrategy normalized(const Eigen::VectorXd& weights);

  const Eigen::VectorXd& probs() const { return probs_; }
  std::size_t size() const { return static_cast<std::size_t>(probs_.size()); }
  double operator[](std::size_t i) const { return probs_(static_cast<Eigen::Index>(i)); }

 private:
  Eigen::VectorXd probs_;
};

bool is_distribution(const Eigen::VectorXd& v, double tol = kSimplexTolerance);

enum class ModelKind { eut, pt };

std::string_view to_string(ModelKind kind);

/// EUT, or PT with a Prelec rationality parameter per player.
/// Use designated initializers for PT: {.kind = ModelKind::pt, .alpha_d = .., .alpha_a = ..}.
struct BehaviorModel {
  ModelKind kind = ModelKind::eut;
  double alpha_d = 1.0;
  double alpha_a = 1.0;

  static BehaviorModel eut() { return {}; }

  /// Rationality of `p`; always 1 under EUT.
  double alpha(Player p) const {
    if (kind == ModelKind::eut) return 1.0;
    return p == Player::defender ? alpha_d : alpha_a;
  }

  void validate() const;
};

/// Defender: p_d^T M_a p_a. Attacker: the negation.
double expected_utility_eut(const PayoffMatrix& m, const MixedStrategy& p_d,
                            const MixedStrategy& p_a, Player player);

/// Perceived utility of `player`: its own probabilities enter as-is, the
/// opponent's pass through the Prelec transform with `alpha` (no renormalization).
double expected_utility_pt(const PayoffMatrix& m, const MixedStrategy& p_d,
                           const MixedStrategy& p_a, double alpha, Player player);

}  // namespace htgame

#pragma once

// Exact equilibrium machinery: indifference-principle solvers (EUT and PT),
// a support-enumeration oracle, numerical rank, the defender's equilibrium
// family, game values and zero-value fine thresholds.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "htgame/fictitious_play.hpp"
#include "htgame/game_model.hpp"

namespace htgame {

/// Row-reduction rank. Pivots with magnitude <= tol count as zero; the default
/// tolerance is 1e-9 * max |entry|.
std::size_t matrix_rank(const Eigen::MatrixXd& m, std::optional<double> tol = std::nullopt);

struct AttackerSolution {
  MixedStrategy strategy;
  double value = 0.0;  // common defender payoff of every pure strategy
};

/// Full-support attacker equilibrium: the p_a that equalizes every defender
/// pure-strategy payoff. Throws SolveError if the system is underdetermined
/// (rank_deficient), inconsistent, or the solution has negative entries
/// (reduced_support).
AttackerSolution solve_attacker_eut(const PayoffMatrix& m);
MixedStrategy attacker_msne_eut(const PayoffMatrix& m);

/// Affine set of defender strategies that make the attacker indifferent:
///   p_d = offset + coefficients * theta
/// where theta holds the probabilities of the strategies in `free_indices`.
/// The free strategies are the trailing ones, so for the 4-trojan game they
/// are BD and CD and the other four entries are expressed through them.
struct DefenderFamily {
  Eigen::VectorXd offset;
  Eigen::MatrixXd coefficients;
  std::vector<std::size_t> free_indices;
  /// Per-parameter [min, max] over the feasible polytope.
  std::vector<std::pair<double, double>> feasible_box;
  /// Vertices of the feasible polytope, in parameter space.
  std::vector<Eigen::VectorXd> vertices;
  /// Vertex centroid mapped to a strategy; always valid.
  MixedStrategy base_point;
  double attacker_value = 0.0;  // common attacker payoff over the family

  Eigen::VectorXd evaluate(const Eigen::VectorXd& params) const {
    return offset + coefficients * params;
  }
  /// Throws ValidationError if `params` leaves the simplex.
  MixedStrategy at(const Eigen::VectorXd& params) const;
};

/// Throws SolveError(infeasible_family) when no non-negative member exists.
DefenderFamily defender_msne_family_eut(const PayoffMatrix& m, const MixedStrategy& p_a_star);

struct Equilibrium {
  MixedStrategy p_d;
  MixedStrategy p_a;
  double value = 0.0;
};

/// Enumerates support pairs, solves the indifference systems and keeps the
/// profiles that survive every pure deviation. Equal-size supports first;
/// unequal sizes only if that finds nothing (degenerate games).
/// Desk scale only: at most 12 strategies per player.
std::vector<Equilibrium> support_enumeration_solve(const PayoffMatrix& m,
                                                   double tol = 1e-9);

struct IndifferenceResidual {
  double spread_d = 0.0;     // max |payoff - mean| over the defender's supported strategies
  double spread_a = 0.0;
  double violation_d = 0.0;  // how much an unsupported strategy beats the worst supported one
  double violation_a = 0.0;
  double residual_d = 0.0;   // max(spread_d, violation_d)
  double residual_a = 0.0;

  double max_residual() const { return std::max(residual_d, residual_a); }
};

/// Payoffs use the model's view of the opponent (Prelec-weighted under PT).
/// A strategy is supported if its probability exceeds `support_threshold`.
/// A single-strategy support has zero spread.
IndifferenceResidual indifference_residual(const PayoffMatrix& m, const MixedStrategy& p_d,
                                           const MixedStrategy& p_a, const BehaviorModel& model,
                                           double support_threshold = 1e-6);

struct PtAttackerSolution {
  MixedStrategy strategy;
  Eigen::VectorXd weighted;       // q = w_d(p_a)
  double perceived_value = 0.0;   // common perceived defender payoff
  double scale = 1.0;             // q = scale * (EUT solution)
  int normalization_roots = 0;    // sign changes of the normalization residual on a grid
};

/// PT attacker equilibrium for a defender with rationality `alpha_d`.
///
/// In weighted coordinates q = w(p_a) the defender's indifference is linear,
/// M_a q = c 1, and its solution ray is spanned by the EUT solution. The
/// point on the ray is fixed by sum_i w^{-1}(q_i) = 1, found by bisection
/// on the scale (equivalently on c). Throws like solve_attacker_eut.
PtAttackerSolution solve_pt_attacker(const PayoffMatrix& m, double alpha_d);
MixedStrategy pt_attacker_msne(const PayoffMatrix& m, double alpha_d);

/// PT defender equilibrium built from one member of the EUT family: the
/// weighted vector w_a(p_d) must lie on the ray of `eut_family_point`.
MixedStrategy pt_defender_msne(const MixedStrategy& eut_family_point, double alpha_a);

struct GameValue {
  double objective = 0.0;     // p_d^T M_a p_a
  double perceived_d = 0.0;   // defender's utility under its own model
  double perceived_a = 0.0;
};

GameValue game_value(const PayoffMatrix& m, const MixedStrategy& p_d, const MixedStrategy& p_a,
                     const BehaviorModel& model);

struct ThresholdOptions {
  double lo = 0.1;
  double hi = 50.0;
  double f_tolerance = 1e-8;     // EUT bracket width
  double pt_f_tolerance = 1e-3;  // PT probes run fictitious play; coarser
  int max_bisections = 200;
  /// FP settings for PT probes; the model is overridden. Defaults when empty.
  std::optional<FPConfig> fp;
};

struct FineThresholdResult {
  double f_value = 0.0;
  MixedStrategy p_a_at_threshold;
  MixedStrategy p_d_at_threshold;
  BehaviorModel model;
  std::pair<double, double> bracket;  // final bisection interval
  double value_at_threshold = 0.0;    // objective value at f_value
  double perceived_d = 0.0;
  double perceived_a = 0.0;
  /// Uniform fine that zeroes the first defender row against p_a (EUT), or the
  /// detection/damage ratio p_a^T D p_d / p_a^T I p_d (PT).
  double closed_form_f = 0.0;
  int probes = 0;
};

/// Fine where the objective equilibrium value crosses zero, by bisection
/// over `spec_template` with a uniform fine. EUT probes use the exact solvers
/// (support enumeration when the full-support solve fails); PT probes run
/// fictitious play. Throws SolveError(no_root_in_bracket) with the endpoint
/// values when the bracket does not straddle zero.
FineThresholdResult fine_threshold(const GameSpec& spec_template, const BehaviorModel& model,
                                   const ThresholdOptions& options = {});

/// Below this fine the attacker wins (U_a > 0); above it the defender does.
double min_winning_fine(const GameSpec& spec_template, const BehaviorModel& model,
                        const ThresholdOptions& options = {});

/// Objective equilibrium value at uniform fine `fine`, via the same route
/// fine_threshold probes with. Returns {value, p_d, p_a}.
Equilibrium equilibrium_at_fine(const GameSpec& spec_template, double fine,
                                const BehaviorModel& model, const ThresholdOptions& options = {});

/// Uniform fine solving F * (p_a^T I p_d) = p_a^T D p_d.
double detection_ratio_fine(const GameSpec& spec, const MixedStrategy& p_d,
                            const MixedStrategy& p_a);

/// Uniform fine zeroing the first defender row against p_a:
/// sum_{j not tested} V_j p_j / sum_{j tested} p_j.
double zero_row_fine(const GameSpec& spec, const MixedStrategy& p_a);

}  // namespace htgame

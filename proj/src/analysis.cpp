#include "htgame/analysis.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "htgame/errors.hpp"
#include "htgame/weighting.hpp"

namespace htgame {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kSolveTol = 1e-9;

double default_rank_tol(const MatrixXd& a) {
  return a.size() == 0 ? 0.0 : 1e-9 * a.cwiseAbs().maxCoeff();
}

// Reduced row echelon form in place. Returns the pivot columns in order.
// Only the first `ncols` columns are eligible as pivots (the rest is the
// right-hand side).
std::vector<Index> rref(MatrixXd& a, Index ncols, double tol) {
  std::vector<Index> pivots;
  Index r = 0;
  for (Index c = 0; c < ncols && r < a.rows(); ++c) {
    Index p = r;
    for (Index i = r + 1; i < a.rows(); ++i)
      if (std::abs(a(i, c)) > std::abs(a(p, c))) p = i;
    if (std::abs(a(p, c)) <= tol) {
      a.col(c).tail(a.rows() - r).setZero();
      continue;
    }
    a.row(p).swap(a.row(r));
    a.row(r) /= a(r, c);
    for (Index i = 0; i < a.rows(); ++i) {
      if (i != r && a(i, c) != 0.0) a.row(i) -= a(i, c) * a.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Calls f with every k-subset of {0..n-1}, lexicographic. Stops if f returns false.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<bool(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!f(idx)) return;
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + (pos - 1)) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Scale-aware tolerance for payoff comparisons.
double payoff_tol(const MatrixXd& m, double tol) { return tol * (1.0 + m.cwiseAbs().maxCoeff()); }

MixedStrategy clean_strategy(VectorXd v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) < 0.0) v(i) = 0.0;
  return MixedStrategy::normalized(v);
}

// Solves [A_sub, -1; 1^T, 0] [x; v] = [0; 1] where A_sub picks `rows` and
// `cols` of `a`. Empty optional unless the solution is unique and consistent.
std::optional<std::pair<VectorXd, double>> solve_equalizer(const MatrixXd& a,
                                                           const std::vector<std::size_t>& rows,
                                                           const std::vector<std::size_t>& cols) {
  const auto nr = static_cast<Index>(rows.size());
  const auto nc = static_cast<Index>(cols.size());
  MatrixXd sys = MatrixXd::Zero(nr + 1, nc + 1);
  VectorXd rhs = VectorXd::Zero(nr + 1);
  for (Index i = 0; i < nr; ++i) {
    for (Index j = 0; j < nc; ++j) sys(i, j) = a(static_cast<Index>(rows[static_cast<std::size_t>(i)]),
                                                 static_cast<Index>(cols[static_cast<std::size_t>(j)]));
    sys(i, nc) = -1.0;
  }
  sys.row(nr).head(nc).setOnes();
  rhs(nr) = 1.0;
  if (matrix_rank(sys) != static_cast<std::size_t>(nc + 1)) return std::nullopt;
  const VectorXd x = sys.colPivHouseholderQr().solve(rhs);
  if ((sys * x - rhs).cwiseAbs().maxCoeff() > payoff_tol(a, 1e-8)) return std::nullopt;
  return std::make_pair(VectorXd(x.head(nc)), x(nc));
}

// Smallest t in (0, t_max] with sum_i w^{-1}(t x_i) = 1 by bisection.
// Also counts sign changes of the residual on a uniform grid.
std::pair<double, int> normalization_scale(const VectorXd& x, double alpha) {
  const double t_max = 1.0 / x.maxCoeff();
  auto g = [&](double t) {
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i) s += prelec_inverse(std::min(1.0, t * x(i)), alpha);
    return s - 1.0;
  };
  int roots = 0;
  constexpr int kGrid = 1000;
  double prev = g(t_max * 1e-9);
  for (int i = 1; i <= kGrid; ++i) {
    const double cur = g(t_max * i / kGrid);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) ++roots;
    prev = cur;
  }
  double lo = 0.0;
  double hi = t_max;
  if (g(hi) < 0.0)
    throw SolveError(SolveErrc::no_root_in_bracket, "normalization residual negative at t_max");
  for (int it = 0; it < 200 && hi - lo > 1e-16 * t_max; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), roots};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

std::size_t matrix_rank(const Eigen::MatrixXd& m, std::optional<double> tol) {
  MatrixXd a = m;
  return rref(a, a.cols(), tol.value_or(default_rank_tol(m))).size();
}

AttackerSolution solve_attacker_eut(const PayoffMatrix& m) {
  const MatrixXd& u = m.defender_utilities();
  const Index nd = u.rows();
  const Index na = u.cols();
  MatrixXd sys = MatrixXd::Zero(nd + 1, na + 1);
  VectorXd rhs = VectorXd::Zero(nd + 1);
  sys.topLeftCorner(nd, na) = u;
  sys.col(na).head(nd).setConstant(-1.0);
  sys.row(nd).head(na).setOnes();
  rhs(nd) = 1.0;

  const std::size_t rank = matrix_rank(sys);
  if (rank != static_cast<std::size_t>(na + 1))
    throw SolveError(SolveErrc::rank_deficient,
                     "attacker indifference system has rank " + std::to_string(rank) + ", need " +
                         std::to_string(na + 1));
  const VectorXd x = sys.colPivHouseholderQr().solve(rhs);
  const double err = (sys * x - rhs).cwiseAbs().maxCoeff();
  if (err > payoff_tol(u, 1e-8))
    throw SolveError(SolveErrc::inconsistent_system,
                     "no attacker strategy equalizes every defender row (residual " + fmt(err) + ")");
  const VectorXd p = x.head(na);
  if ((p.array() < -kSolveTol).any())
    throw SolveError(SolveErrc::reduced_support,
                     "full-support attacker solution has negative entries");
  return {clean_strategy(p), x(na)};
}

MixedStrategy attacker_msne_eut(const PayoffMatrix& m) { return solve_attacker_eut(m).strategy; }

MixedStrategy DefenderFamily::at(const Eigen::VectorXd& params) const {
  if (params.size() != coefficients.cols())
    throw ValidationError("family parameter dimension mismatch");
  VectorXd p = evaluate(params);
  if (!is_distribution(p)) throw ValidationError("family parameters leave the simplex");
  return MixedStrategy(std::move(p));
}

DefenderFamily defender_msne_family_eut(const PayoffMatrix& m, const MixedStrategy& p_a_star) {
  const MatrixXd& u = m.defender_utilities();
  const Index nd = u.rows();
  const Index na = u.cols();
  if (p_a_star.size() != static_cast<std::size_t>(na))
    throw ValidationError("attacker strategy dimension mismatch");
  const VectorXd& pa = p_a_star.probs();
  const VectorXd row_payoff = u * pa;
  const double best_row = row_payoff.maxCoeff();
  const double ptol = payoff_tol(u, 1e-7);

  // Unknowns [c, p_d(0..nd-1)]. Equalities: attacker indifference over the
  // attacker's support, zero weight on defender rows that are not best
  // responses to p_a_star, and normalization.
  std::vector<Index> supported;
  std::vector<Index> unsupported;
  for (Index j = 0; j < na; ++j) (pa(j) > 1e-9 ? supported : unsupported).push_back(j);
  std::vector<Index> dominated_rows;
  for (Index i = 0; i < nd; ++i)
    if (row_payoff(i) < best_row - ptol) dominated_rows.push_back(i);

  const Index neq = static_cast<Index>(supported.size() + dominated_rows.size()) + 1;
  MatrixXd aug = MatrixXd::Zero(neq, nd + 2);  // last column is the rhs
  Index r = 0;
  for (Index j : supported) {
    aug(r, 0) = -1.0;
    aug.row(r).segment(1, nd) = u.col(j).transpose();
    ++r;
  }
  for (Index i : dominated_rows) aug(r++, 1 + i) = 1.0;
  aug.row(r).segment(1, nd).setOnes();
  aug(r, nd + 1) = 1.0;

  const std::vector<Index> pivots = rref(aug, nd + 1, 1e-10 * (1.0 + u.cwiseAbs().maxCoeff()));
  for (Index i = static_cast<Index>(pivots.size()); i < aug.rows(); ++i)
    if (std::abs(aug(i, nd + 1)) > 1e-9)
      throw SolveError(SolveErrc::infeasible_family, "defender indifference system is inconsistent");
  if (pivots.empty() || pivots.front() != 0)
    throw SolveError(SolveErrc::infeasible_family, "attacker value is not determined");

  std::vector<bool> is_pivot(static_cast<std::size_t>(nd + 1), false);
  for (Index c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;

  // base_point is filled in once the polytope is known.
  DefenderFamily fam{VectorXd(), MatrixXd(), {}, {}, {}, MixedStrategy::uniform(1), 0.0};
  for (Index i = 0; i < nd; ++i)
    if (!is_pivot[static_cast<std::size_t>(i + 1)]) fam.free_indices.push_back(static_cast<std::size_t>(i));
  const auto k = static_cast<Index>(fam.free_indices.size());
  fam.offset = VectorXd::Zero(nd);
  fam.coefficients = MatrixXd::Zero(nd, k);
  double c_offset = 0.0;
  for (std::size_t pr = 0; pr < pivots.size(); ++pr) {
    const Index col = pivots[pr];
    const auto row = static_cast<Index>(pr);
    if (col == 0) {
      c_offset = aug(row, nd + 1);
      continue;
    }
    fam.offset(col - 1) = aug(row, nd + 1);
    for (Index f = 0; f < k; ++f)
      fam.coefficients(col - 1, f) =
          -aug(row, 1 + static_cast<Index>(fam.free_indices[static_cast<std::size_t>(f)]));
  }
  for (Index f = 0; f < k; ++f)
    fam.coefficients(static_cast<Index>(fam.free_indices[static_cast<std::size_t>(f)]), f) = 1.0;
  fam.attacker_value = -c_offset;

  // Feasible polytope in theta: 0 <= offset + C theta <= 1, plus unsupported
  // attacker columns must not beat the supported ones: u_j^T p_d >= c.
  std::vector<VectorXd> g_rows;  // constraint g^T theta <= h
  std::vector<double> h;
  for (Index i = 0; i < nd; ++i) {
    g_rows.push_back(-fam.coefficients.row(i).transpose());
    h.push_back(fam.offset(i));
    g_rows.push_back(fam.coefficients.row(i).transpose());
    h.push_back(1.0 - fam.offset(i));
  }
  for (Index j : unsupported) {
    const VectorXd col = u.col(j);
    g_rows.push_back(-(fam.coefficients.transpose() * col));
    h.push_back(col.dot(fam.offset) - c_offset);
  }

  auto feasible = [&](const VectorXd& theta) {
    for (std::size_t q = 0; q < g_rows.size(); ++q)
      if (g_rows[q].dot(theta) > h[q] + 1e-9) return false;
    return true;
  };

  if (k == 0) {
    if (feasible(VectorXd()))
      fam.vertices.push_back(VectorXd());
  } else {
    for_each_subset(g_rows.size(), static_cast<std::size_t>(k), [&](const std::vector<std::size_t>& pick) {
      MatrixXd a(k, k);
      VectorXd b(k);
      for (Index q = 0; q < k; ++q) {
        a.row(q) = g_rows[pick[static_cast<std::size_t>(q)]].transpose();
        b(q) = h[pick[static_cast<std::size_t>(q)]];
      }
      Eigen::FullPivLU<MatrixXd> lu(a);
      if (!lu.isInvertible()) return true;
      const VectorXd theta = lu.solve(b);
      if (!feasible(theta)) return true;
      for (const auto& v : fam.vertices)
        if ((v - theta).cwiseAbs().maxCoeff() < 1e-9) return true;
      fam.vertices.push_back(theta);
      return true;
    });
  }
  if (fam.vertices.empty())
    throw SolveError(SolveErrc::infeasible_family, "no non-negative defender strategy in the family");

  VectorXd centroid = VectorXd::Zero(k);
  for (const auto& v : fam.vertices) centroid += v;
  centroid /= static_cast<double>(fam.vertices.size());
  for (Index f = 0; f < k; ++f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : fam.vertices) {
      lo = std::min(lo, v(f));
      hi = std::max(hi, v(f));
    }
    fam.feasible_box.emplace_back(lo, hi);
  }
  fam.base_point = clean_strategy(fam.evaluate(centroid));
  return fam;
}

std::vector<Equilibrium> support_enumeration_solve(const PayoffMatrix& m, double tol) {
  const MatrixXd& u = m.defender_utilities();
  const auto nd = static_cast<std::size_t>(u.rows());
  const auto na = static_cast<std::size_t>(u.cols());
  if (nd > 12 || na > 12)
    throw ValidationError("support enumeration is limited to 12 strategies per player");
  const MatrixXd ut = u.transpose();
  const double ptol = payoff_tol(u, tol);
  std::vector<Equilibrium> found;

  auto try_pair = [&](const std::vector<std::size_t>& sd, const std::vector<std::size_t>& sa) {
    // p_a on sa equalizes the defender's rows in sd; p_d on sd equalizes the
    // attacker's columns in sa.
    auto att = solve_equalizer(u, sd, sa);
    if (!att) return;
    auto def = solve_equalizer(ut, sa, sd);
    if (!def) return;
    const auto& [xa, v] = *att;
    const auto& [xd, c] = *def;
    if ((xa.array() < -tol).any() || (xd.array() < -tol).any()) return;
    if (std::abs(v - c) > ptol) return;
    VectorXd pa = VectorXd::Zero(static_cast<Index>(na));
    VectorXd pd = VectorXd::Zero(static_cast<Index>(nd));
    for (std::size_t j = 0; j < sa.size(); ++j) pa(static_cast<Index>(sa[j])) = std::max(0.0, xa(static_cast<Index>(j)));
    for (std::size_t i = 0; i < sd.size(); ++i) pd(static_cast<Index>(sd[i])) = std::max(0.0, xd(static_cast<Index>(i)));
    pa /= pa.sum();
    pd /= pd.sum();
    // No pure deviation may help either player.
    if ((u * pa).maxCoeff() > v + ptol) return;
    if ((ut * pd).minCoeff() < v - ptol) return;
    for (const auto& e : found)
      if ((e.p_d.probs() - pd).cwiseAbs().maxCoeff() < 1e-9 &&
          (e.p_a.probs() - pa).cwiseAbs().maxCoeff() < 1e-9)
        return;
    found.push_back({MixedStrategy(pd), MixedStrategy(pa), pd.dot(u * pa)});
  };

  const std::size_t smax = std::min(nd, na);
  for (std::size_t s = 1; s <= smax; ++s) {
    for_each_subset(nd, s, [&](const std::vector<std::size_t>& sd) {
      for_each_subset(na, s, [&](const std::vector<std::size_t>& sa) {
        try_pair(sd, sa);
        return true;
      });
      return true;
    });
  }
  if (found.empty()) {
    for (std::size_t s_d = 1; s_d <= nd; ++s_d)
      for (std::size_t s_a = 1; s_a <= na; ++s_a) {
        if (s_d == s_a) continue;
        for_each_subset(nd, s_d, [&](const std::vector<std::size_t>& sd) {
          for_each_subset(na, s_a, [&](const std::vector<std::size_t>& sa) {
            try_pair(sd, sa);
            return true;
          });
          return true;
        });
      }
  }
  // A finite zero-sum game always has an equilibrium; coming back empty means
  // the tolerances are too tight for this matrix.
  if (found.empty()) throw std::logic_error("support enumeration found no equilibrium");
  return found;
}

IndifferenceResidual indifference_residual(const PayoffMatrix& m, const MixedStrategy& p_d,
                                           const MixedStrategy& p_a, const BehaviorModel& model,
                                           double support_threshold) {
  if (p_d.size() != m.num_strategies(Player::defender) ||
      p_a.size() != m.num_strategies(Player::attacker))
    throw ValidationError("strategy dimensions do not match the payoff matrix");
  model.validate();
  const MatrixXd& u = m.defender_utilities();
  const double ad = model.alpha(Player::defender);
  const double aa = model.alpha(Player::attacker);
  const VectorXd seen_by_d = ad == 1.0 ? p_a.probs() : weight_vector(p_a.probs(), ad);
  const VectorXd seen_by_a = aa == 1.0 ? p_d.probs() : weight_vector(p_d.probs(), aa);
  const VectorXd pay_d = u * seen_by_d;
  const VectorXd pay_a = -(u.transpose() * seen_by_a);

  auto measure = [support_threshold](const VectorXd& probs, const VectorXd& pay) {
    double sum = 0.0;
    double worst_in = std::numeric_limits<double>::infinity();
    int n = 0;
    for (Index i = 0; i < probs.size(); ++i)
      if (probs(i) > support_threshold) {
        sum += pay(i);
        worst_in = std::min(worst_in, pay(i));
        ++n;
      }
    double spread = 0.0;
    double violation = 0.0;
    if (n == 0) return std::make_pair(spread, violation);
    const double mean = sum / n;
    for (Index i = 0; i < probs.size(); ++i) {
      if (probs(i) > support_threshold)
        spread = n > 1 ? std::max(spread, std::abs(pay(i) - mean)) : 0.0;
      else
        violation = std::max(violation, pay(i) - worst_in);
    }
    return std::make_pair(spread, violation);
  };

  IndifferenceResidual r;
  std::tie(r.spread_d, r.violation_d) = measure(p_d.probs(), pay_d);
  std::tie(r.spread_a, r.violation_a) = measure(p_a.probs(), pay_a);
  r.residual_d = std::max(r.spread_d, r.violation_d);
  r.residual_a = std::max(r.spread_a, r.violation_a);
  return r;
}

PtAttackerSolution solve_pt_attacker(const PayoffMatrix& m, double alpha_d) {
  if (!(alpha_d > 0.0 && alpha_d <= 1.0)) throw ValidationError("rationality alpha must be in (0, 1]");
  const AttackerSolution eut = solve_attacker_eut(m);
  const VectorXd& q0 = eut.strategy.probs();
  const auto [scale, roots] = normalization_scale(q0, alpha_d);
  PtAttackerSolution out{MixedStrategy::uniform(q0.size()), VectorXd(), 0.0, 1.0, 0};
  out.weighted = scale * q0;
  VectorXd p(q0.size());
  for (Index i = 0; i < q0.size(); ++i) p(i) = prelec_inverse(std::min(1.0, out.weighted(i)), alpha_d);
  out.strategy = MixedStrategy::normalized(p);
  out.perceived_value = scale * eut.value;
  out.scale = scale;
  out.normalization_roots = roots;
  return out;
}

MixedStrategy pt_attacker_msne(const PayoffMatrix& m, double alpha_d) {
  return solve_pt_attacker(m, alpha_d).strategy;
}

MixedStrategy pt_defender_msne(const MixedStrategy& eut_family_point, double alpha_a) {
  if (!(alpha_a > 0.0 && alpha_a <= 1.0)) throw ValidationError("rationality alpha must be in (0, 1]");
  const VectorXd& x = eut_family_point.probs();
  const double scale = normalization_scale(x, alpha_a).first;
  VectorXd p(x.size());
  for (Index i = 0; i < x.size(); ++i) p(i) = prelec_inverse(std::min(1.0, scale * x(i)), alpha_a);
  return MixedStrategy::normalized(p);
}

GameValue game_value(const PayoffMatrix& m, const MixedStrategy& p_d, const MixedStrategy& p_a,
                     const BehaviorModel& model) {
  model.validate();
  GameValue g;
  g.objective = expected_utility_eut(m, p_d, p_a, Player::defender);
  if (model.kind == ModelKind::eut) {
    g.perceived_d = g.objective;
    g.perceived_a = -g.objective;
  } else {
    g.perceived_d = expected_utility_pt(m, p_d, p_a, model.alpha_d, Player::defender);
    g.perceived_a = expected_utility_pt(m, p_d, p_a, model.alpha_a, Player::attacker);
  }
  return g;
}

Equilibrium equilibrium_at_fine(const GameSpec& spec_template, double fine,
                                const BehaviorModel& model, const ThresholdOptions& options) {
  const GameSpec spec = with_uniform_fine(spec_template, fine);
  const PayoffMatrix m = build_payoff_matrix(spec);
  if (model.kind == ModelKind::eut) {
    try {
      const AttackerSolution att = solve_attacker_eut(m);
      const DefenderFamily fam = defender_msne_family_eut(m, att.strategy);
      return {fam.base_point, att.strategy, fam.base_point.probs().dot(m.defender_utilities() *
                                                                       att.strategy.probs())};
    } catch (const SolveError&) {
      return support_enumeration_solve(m).front();
    }
  }
  FPConfig config = options.fp ? *options.fp : default_fp_config(spec, model);
  config.model = model;
  const EquilibriumResult r = run_fictitious_play(m, config);
  return {r.p_d_star, r.p_a_star, r.game_value};
}

FineThresholdResult fine_threshold(const GameSpec& spec_template, const BehaviorModel& model,
                                   const ThresholdOptions& options) {
  model.validate();
  if (!(options.lo > 0.0 && options.hi > options.lo))
    throw ValidationError("threshold bracket must satisfy 0 < lo < hi");
  const double width = model.kind == ModelKind::eut ? options.f_tolerance : options.pt_f_tolerance;
  FineThresholdResult out{0.0, MixedStrategy::uniform(1), MixedStrategy::uniform(1), model, {}};
  double lo = options.lo;
  double hi = options.hi;
  const double v_lo = equilibrium_at_fine(spec_template, lo, model, options).value;
  const double v_hi = equilibrium_at_fine(spec_template, hi, model, options).value;
  out.probes = 2;
  if ((v_lo > 0.0) == (v_hi > 0.0) && v_lo != 0.0 && v_hi != 0.0)
    throw SolveError(SolveErrc::no_root_in_bracket,
                     "value does not change sign on [" + fmt(lo) + ", " + fmt(hi) + "]: value(lo)=" +
                         fmt(v_lo) + ", value(hi)=" + fmt(v_hi));
  const bool rising = v_lo < v_hi;
  for (int it = 0; it < options.max_bisections && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = equilibrium_at_fine(spec_template, mid, model, options).value;
    ++out.probes;
    if ((v < 0.0) == rising)
      lo = mid;
    else
      hi = mid;
  }
  out.f_value = 0.5 * (lo + hi);
  out.bracket = {lo, hi};
  const Equilibrium e = equilibrium_at_fine(spec_template, out.f_value, model, options);
  ++out.probes;
  const GameSpec spec = with_uniform_fine(spec_template, out.f_value);
  const GameValue g = game_value(build_payoff_matrix(spec), e.p_d, e.p_a, model);
  out.p_a_at_threshold = e.p_a;
  out.p_d_at_threshold = e.p_d;
  out.value_at_threshold = g.objective;
  out.perceived_d = g.perceived_d;
  out.perceived_a = g.perceived_a;
  out.closed_form_f = model.kind == ModelKind::eut ? zero_row_fine(spec, e.p_a)
                                                   : detection_ratio_fine(spec, e.p_d, e.p_a);
  return out;
}

double min_winning_fine(const GameSpec& spec_template, const BehaviorModel& model,
                        const ThresholdOptions& options) {
  return fine_threshold(spec_template, model, options).f_value;
}

double detection_ratio_fine(const GameSpec& spec, const MixedStrategy& p_d,
                            const MixedStrategy& p_a) {
  const PayoffDecomposition parts = decompose_payoffs(spec);
  if (p_d.size() != static_cast<std::size_t>(parts.detection.rows()) ||
      p_a.size() != static_cast<std::size_t>(parts.detection.cols()))
    throw ValidationError("strategy dimensions do not match the game");
  const double caught = p_d.probs().dot(parts.detection * p_a.probs());
  const double harm = p_d.probs().dot(parts.damage * p_a.probs());
  if (!(caught > 0.0))
    throw SolveError(SolveErrc::inconsistent_system, "detection probability is zero");
  return harm / caught;
}

double zero_row_fine(const GameSpec& spec, const MixedStrategy& p_a) {
  const StrategySpace space = enumerate_spaces(spec);
  if (p_a.size() != spec.num_trojans()) throw ValidationError("attacker strategy dimension mismatch");
  const DefenderSubset& tested = space.defender_subsets.front();
  double harm = 0.0;
  double caught = 0.0;
  for (std::size_t j = 0; j < spec.num_trojans(); ++j) {
    const bool in = std::find(tested.begin(), tested.end(), j) != tested.end();
    (in ? caught : harm) += in ? p_a[j] : spec.damages[j] * p_a[j];
  }
  if (!(caught > 0.0))
    throw SolveError(SolveErrc::inconsistent_system, "tested trojans carry no probability");
  return harm / caught;
}

}  // namespace htgame

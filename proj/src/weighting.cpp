#include "htgame/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "htgame/errors.hpp"
#include "htgame/game_model.hpp"

namespace htgame {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("Prelec alpha must be in (0, 1]");
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(std::string(what) + " must be in [0, 1]");
}

inline double prelec_unchecked(double p, double alpha) noexcept {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (alpha == 1.0) return p;
  return std::exp(-std::pow(-std::log(p), alpha));
}

}  // namespace

PrelecWeighting::PrelecWeighting(double alpha) : alpha_(alpha) { check_alpha(alpha); }

double PrelecWeighting::weight(double p) const { return prelec_weight(p, alpha_); }

double PrelecWeighting::inverse(double q) const { return prelec_inverse(q, alpha_); }

double prelec_weight(double p, double alpha) {
  check_alpha(alpha);
  check_unit(p, "probability");
  return prelec_unchecked(p, alpha);
}

double prelec_inverse(double q, double alpha) {
  check_alpha(alpha);
  check_unit(q, "weight");
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  if (alpha == 1.0) return q;
  return std::exp(-std::pow(-std::log(q), 1.0 / alpha));
}

Eigen::VectorXd weight_vector(const Eigen::VectorXd& probs, double alpha) {
  return weight_vector(probs, PrelecWeighting(alpha));
}

Eigen::VectorXd weight_vector(const Eigen::VectorXd& probs, const ProbabilityWeighting& w) {
  if (!is_distribution(probs)) throw ValidationError("weight_vector needs a probability vector");
  Eigen::VectorXd out(probs.size());
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    out(i) = w.weight(std::clamp(probs(i), 0.0, 1.0));
  return out;
}

void apply_prelec(std::span<const double> in, std::span<double> out, double alpha) noexcept {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = prelec_unchecked(in[i], alpha);
}

}  // namespace htgame

#pragma once

#include <span>

#include <Eigen/Dense>

namespace htgame {

/// Subjective distortion of an objective probability. Prelec is the only
/// implementation shipped; other forms plug in here.
class ProbabilityWeighting {
 public:
  virtual ~ProbabilityWeighting() = default;
  virtual double weight(double p) const = 0;
  virtual double inverse(double q) const = 0;
};

/// w(p) = exp(-(-ln p)^alpha), 0 < alpha <= 1.
///
/// Extended continuously to the endpoints: w(0) = 0, w(1) = 1. The curve
/// crosses the identity at p = 1/e for every alpha; below that point small
/// probabilities are overweighted, above it large ones are underweighted.
/// alpha = 1 is the identity.
class PrelecWeighting final : public ProbabilityWeighting {
 public:
  explicit PrelecWeighting(double alpha);

  double alpha() const { return alpha_; }
  double weight(double p) const override;
  double inverse(double q) const override;

 private:
  double alpha_;
};

double prelec_weight(double p, double alpha);

/// exp(-(-ln q)^(1/alpha)); inverse of prelec_weight on [0, 1].
double prelec_inverse(double q, double alpha);

/// Elementwise prelec_weight of a probability vector. The result is in
/// general not a distribution and is not renormalized.
Eigen::VectorXd weight_vector(const Eigen::VectorXd& probs, double alpha);
Eigen::VectorXd weight_vector(const Eigen::VectorXd& probs, const ProbabilityWeighting& w);

/// Unchecked in-place variant for inner loops; `in` must hold values in [0, 1].
void apply_prelec(std::span<const double> in, std::span<double> out, double alpha) noexcept;

}  // namespace htgame

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "htgame/errors.hpp"
#include "htgame/weighting.hpp"
#include "test_support.hpp"

using namespace htgame;

namespace {

// Textbook form: w(p) = 1 / exp((ln(1/p))^alpha).
double reference_prelec(double p, double alpha) {
  return 1.0 / std::exp(std::pow(std::log(1.0 / p), alpha));
}

const double kInvE = std::exp(-1.0);

}  // namespace

TEST(Prelec, MatchesReferenceFormula) {
  for (double alpha : {0.1, 0.3, 0.5, 0.8, 0.95})
    for (double p : {1e-6, 0.01, 0.2, 0.5, 0.9, 0.999})
      EXPECT_NEAR(prelec_weight(p, alpha), reference_prelec(p, alpha), 1e-14)
          << "alpha " << alpha << " p " << p;
}

TEST(Prelec, EndpointsAndFixedPoint) {
  for (double alpha : {0.1, 0.5, 1.0}) {
    EXPECT_EQ(prelec_weight(0.0, alpha), 0.0);
    EXPECT_EQ(prelec_weight(1.0, alpha), 1.0);
    EXPECT_NEAR(prelec_weight(kInvE, alpha), kInvE, 1e-12);
  }
}

TEST(Prelec, AlphaOneIsIdentity) {
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    EXPECT_DOUBLE_EQ(prelec_weight(p, 1.0), p);
  }
}

TEST(Prelec, StrictlyIncreasingOnGrid) {
  for (double alpha : {0.1, 0.5, 0.9}) {
    double prev = prelec_weight(0.0, alpha);
    for (int i = 1; i <= 1000; ++i) {
      const double w = prelec_weight(i / 1000.0, alpha);
      EXPECT_GT(w, prev) << "alpha " << alpha << " at " << i;
      prev = w;
    }
  }
}

TEST(Prelec, RegressiveCrossoverAtInverseE) {
  for (double alpha : {0.2, 0.5, 0.8}) {
    for (int i = 1; i < 1000; ++i) {
      const double p = i / 1000.0;
      const double w = prelec_weight(p, alpha);
      if (p < kInvE - 1e-9) EXPECT_GT(w, p) << p;
      if (p > kInvE + 1e-9) EXPECT_LT(w, p) << p;
    }
  }
}

TEST(Prelec, InverseRoundTrip) {
  for (double alpha : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      EXPECT_NEAR(prelec_inverse(prelec_weight(p, alpha), alpha), p, 1e-12) << alpha << " " << p;
      // Reverse direction is only as good as w' times the rounding of q; at alpha=0.1 q saturates.
      const double q = prelec_inverse(p, alpha);
      if (q > 0.0 && q < 1.0) {
        const double slope = p * alpha * std::pow(-std::log(q), alpha - 1.0) / q;
        const double tol = 1e-12 + slope * 4.0 * std::numeric_limits<double>::epsilon() * q;
        EXPECT_NEAR(prelec_weight(q, alpha), p, tol) << alpha << " " << p;
      }
    }
  }
}

TEST(Prelec, RejectsBadArguments) {
  EXPECT_THROW(prelec_weight(0.5, 0.0), ValidationError);
  EXPECT_THROW(prelec_weight(0.5, 1.2), ValidationError);
  EXPECT_THROW(prelec_weight(-0.1, 0.5), ValidationError);
  EXPECT_THROW(prelec_weight(1.1, 0.5), ValidationError);
  EXPECT_THROW(prelec_inverse(1.5, 0.5), ValidationError);
  EXPECT_THROW(PrelecWeighting(0.0), ValidationError);
}

TEST(Prelec, VectorIsNotRenormalized) {
  const Eigen::VectorXd p = htgame::testing::vec({0.25, 0.25, 0.25, 0.25});
  const Eigen::VectorXd w = weight_vector(p, 0.5);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(w(i), reference_prelec(0.25, 0.5), 1e-14);
  EXPECT_GT(std::abs(w.sum() - 1.0), 0.1);
  EXPECT_THROW(weight_vector(htgame::testing::vec({0.5, 0.6}), 0.5), ValidationError);
}

TEST(Prelec, InterfaceAgreesWithFreeFunctions) {
  const PrelecWeighting w(0.4);
  const ProbabilityWeighting& base = w;
  EXPECT_EQ(base.weight(0.3), prelec_weight(0.3, 0.4));
  EXPECT_EQ(base.inverse(0.3), prelec_inverse(0.3, 0.4));
  EXPECT_EQ(w.alpha(), 0.4);
}

TEST(Prelec, UncheckedBulkMatchesChecked) {
  const std::vector<double> in{0.0, 0.1, kInvE, 0.7, 1.0};
  std::vector<double> out(in.size());
  apply_prelec(in, out, 0.6);
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(out[i], prelec_weight(in[i], 0.6));
}

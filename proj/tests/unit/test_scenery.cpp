#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rwrs/scenery.hpp"

using namespace rwrs;

namespace {
std::vector<SceneryModel> models() {
  return {SceneryModel::gaussian(2.0), SceneryModel::bounded(1.0), SceneryModel::weibull(0.7, 1),
          SceneryModel::weibull(3, 0.5), SceneryModel::discrete({-1, 1}, {0.5, 0.5})};
}
}  // namespace

TEST(Scenery, FamilyNamesRoundTrip) {
  for (auto f : {SceneryFamily::symmetric_weibull, SceneryFamily::gaussian, SceneryFamily::symmetric_bounded,
                 SceneryFamily::discrete})
    EXPECT_EQ(parse_family(family_name(f)), f);
  EXPECT_THROW(parse_family("cauchy"), std::invalid_argument);
}

TEST(Scenery, InvalidModelsRejected) {
  EXPECT_THROW(validate(SceneryModel::gaussian(-1)), std::invalid_argument);
  EXPECT_THROW(validate(SceneryModel::discrete({-1, 1}, {0.3, 0.3})), std::invalid_argument);
  EXPECT_THROW(validate(SceneryModel::discrete({0, 1}, {0.5, 0.5})), std::invalid_argument);
}

TEST(Scenery, QuantileInvertsTail) {
  for (const auto& m : models()) {
    if (m.family == SceneryFamily::discrete) continue;
    for (double u : {0.05, 0.3, 0.5, 0.8, 0.99})
      EXPECT_NEAR(scenery_tail(m, scenery_quantile(m, u)), 1 - u, 1e-9) << family_name(m.family);
  }
}

TEST(Scenery, CenteredWithStatedVariance) {
  EXPECT_NEAR(scenery_variance(SceneryModel::gaussian(2)), 2, 1e-12);
  EXPECT_NEAR(scenery_variance(SceneryModel::bounded(1)), 1, 1e-12);
  // E W^2 for P(W > t) = exp(-t^a): Gamma(1 + 2/a)
  EXPECT_NEAR(scenery_variance(SceneryModel::weibull(0.7, 1)), std::tgamma(1 + 2 / 0.7), 1e-6);
  for (const auto& m : models()) EXPECT_NEAR(scenery_tail(m, 0), 0.5, 1e-12) << family_name(m.family);
}

TEST(Scenery, FieldIsPureFunctionOfSite) {
  SceneryField a(SceneryModel::gaussian(1, 3)), b(SceneryModel::gaussian(1, 3)), c(SceneryModel::gaussian(1, 4));
  std::vector<Coord> x{1, -2, 5};
  EXPECT_EQ(a.at(x), b.at(x));
  EXPECT_NE(a.at(x), c.at(x));
}

TEST(Scenery, EmpiricalMoments) {
  SceneryField f(SceneryModel::weibull(3, 1, 8));
  double s = 0, s2 = 0;
  const int sites = 100000;
  for (int i = 0; i < sites; ++i) {
    Coord x[2] = {i, 7};
    double v = f.at(x, 2);
    s += v;
    s2 += v * v;
  }
  double var = scenery_variance(f.model());
  EXPECT_NEAR(s / sites, 0, 4 * std::sqrt(var / sites));
  EXPECT_NEAR(s2 / sites, var, 0.02 * var);
}

TEST(Scenery, LogLaplace) {
  EXPECT_NEAR(log_laplace(SceneryModel::gaussian(2), 0.7).value, 0.49, 1e-10);
  // cosh for the +-1 coin
  EXPECT_NEAR(log_laplace(SceneryModel::discrete({-1, 1}, {0.5, 0.5}), 1.3).value, std::log(std::cosh(1.3)), 1e-12);
  // uniform on [-a, a]: sinh(a t)/(a t)
  double a = std::sqrt(3.0);
  EXPECT_NEAR(log_laplace(SceneryModel::bounded(1), 2).value, std::log(std::sinh(2 * a) / (2 * a)), 1e-8);
  EXPECT_FALSE(log_laplace_finite(SceneryModel::weibull(0.7, 1), 0.5));
  EXPECT_TRUE(log_laplace_finite(SceneryModel::weibull(3, 1), 5));
  EXPECT_THROW(log_laplace(SceneryModel::weibull(0.7, 1), 0.5), std::domain_error);
}

TEST(Scenery, LaplaceSlopeMatchesDifference) {
  SceneryModel m = SceneryModel::weibull(3, 1);
  double h = 1e-4, t = 1.5;
  EXPECT_NEAR(log_laplace_slope(m, t), (log_laplace(m, t + h).value - log_laplace(m, t - h).value) / (2 * h), 1e-5);
}

TEST(Scenery, TailExponents) {
  EXPECT_DOUBLE_EQ(tail_exponent(SceneryModel::gaussian(1)), 2);
  EXPECT_DOUBLE_EQ(tail_exponent(SceneryModel::weibull(1.5, 1)), 1.5);
  EXPECT_TRUE(std::isinf(tail_exponent(SceneryModel::bounded(1))));
}

TEST(Scenery, BellShape) {
  EXPECT_TRUE(bell_shaped(SceneryModel::gaussian(1)));
  EXPECT_TRUE(bell_shaped(SceneryModel::bounded(1)));
  EXPECT_TRUE(bell_shaped(SceneryModel::weibull(0.7, 1)));
  EXPECT_FALSE(bell_shaped(SceneryModel::weibull(3, 1)));
}

// E_q[f/q] = 1 and the tilted mean matches Lambda'.
TEST(Scenery, TiltedProposalWeights) {
  for (const auto& m : {SceneryModel::gaussian(1), SceneryModel::weibull(3, 1), SceneryModel::bounded(1)}) {
    const double theta = 0.8;
    TiltedProposal q(m, theta);
    double w = 0, mean = 0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
      double x = q.sample((i + 0.5) / draws);
      w += std::exp(q.log_weight(x));
      mean += x;
    }
    EXPECT_NEAR(w / draws, 1, 0.01) << family_name(m.family);
    EXPECT_NEAR(mean / draws, log_laplace_slope(m, theta), 0.01) << family_name(m.family);
  }
}

TEST(Scenery, RwrsValueMatchesPathSum) {
  Trajectory t = simulate_walk(3, 2000, 5);
  SceneryField eta(SceneryModel::gaussian(1, 9));
  EXPECT_NEAR(rwrs_value(local_times(t), eta), rwrs_path_sum(t, eta), 1e-8);
}

TEST(Shear, ClosedFormMatchesRecursion) {
  SceneryModel m = SceneryModel::gaussian(1, 2);
  for (bool move : {true, false}) {
    ShearPath p = shear_transport(300, 2, m, CollisionLaw{2, move}, 13);
    SceneryField eta(m);
    for (std::int64_t k : {0, 1, 17, 300}) EXPECT_NEAR(shear_closed_form(p, eta, k), p.first[k], 1e-9);
  }
}

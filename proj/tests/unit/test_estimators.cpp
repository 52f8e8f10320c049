#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rwrs/estimators.hpp"
#include "rwrs/silt.hpp"

using namespace rwrs;

namespace {
double silt_functional(const Trajectory&, const LocalTimeField& f) { return static_cast<double>(silt(f)); }
}  // namespace

// Frozen from an independent brute-force enumeration.
TEST(Enumeration, SiltLawSmallPaths) {
  ExactDistribution a = enumerate_exact(1, 2, silt_functional);
  EXPECT_EQ(a.total, 4u);
  EXPECT_DOUBLE_EQ(a.prob_at_least(5), 0.5);
  EXPECT_DOUBLE_EQ(a.mean(), 4);
  ExactDistribution b = enumerate_exact(2, 4, silt_functional);
  EXPECT_EQ(b.total, 256u);
  EXPECT_EQ(b.counts[5], 100u);
  EXPECT_EQ(b.counts[7], 104u);
  EXPECT_EQ(b.counts[9], 36u);
  EXPECT_EQ(b.counts[11], 12u);
  EXPECT_EQ(b.counts[13], 4u);
  EXPECT_DOUBLE_EQ(b.mean(), 217.0 / 32);
  ExactDistribution c = enumerate_exact(3, 4, silt_functional);
  EXPECT_DOUBLE_EQ(c.mean(), 221.0 / 36);
}

TEST(Enumeration, EventProbability) {
  EXPECT_DOUBLE_EQ(exact_event_probability(SiltExceedance{2, 1, 2.25}, 2, 4), 13.0 / 64);
  EXPECT_DOUBLE_EQ(exact_event_probability(ConfinementEvent{3}, 1, 4), 0.25);
  EXPECT_THROW(exact_event_probability(RwrsExceedance{1, 0, SceneryModel::gaussian(1)}, 1, 2),
               std::invalid_argument);
}

TEST(Naive, MatchesEnumeration) {
  TailEstimate e = naive_tail(SiltExceedance{2, 1, 2.25}, 2, 4, 100000, 8);
  EXPECT_NEAR(e.p_hat, 13.0 / 64, 4 * e.std_err);
  EXPECT_EQ(e.n_samples, 100000u);
}

TEST(Naive, ReproducibleFromSeed) {
  TailEstimate a = naive_tail(SiltExceedance{2, 1, 1.5}, 3, 50, 2000, 1);
  TailEstimate b = naive_tail(SiltExceedance{2, 1, 1.5}, 3, 50, 2000, 1);
  EXPECT_EQ(a.p_hat, b.p_hat);
}

TEST(Estimate, LogSpaceCarriesTinyValues) {
  TailEstimate e = make_log_estimate(-2000, 0.5, 10, "x");
  EXPECT_EQ(e.p_hat, 0);
  EXPECT_DOUBLE_EQ(e.log_p, -2000);
}

TEST(Confinement, ExactSmallBoxes) {
  auto exact = [](int d, double r, std::int64_t t) {
    return confinement_probability(d, r, t, ConfinementMethod::exact_spectral, 1, 1).p_hat;
  };
  EXPECT_NEAR(exact(1, 3, 0), 1, 1e-12);
  EXPECT_NEAR(exact(1, 3, 1), 1, 1e-12);
  EXPECT_NEAR(exact(1, 3, 4), 0.25, 1e-12);
  EXPECT_NEAR(exact(1, 5, 6), 0.5625, 1e-12);
  EXPECT_NEAR(confinement_decay_rate(5, 5), -std::log(std::cos(M_PI / 6)), 1e-10);
  EXPECT_NEAR(confinement_decay_rate(3, 9), -std::log(std::cos(M_PI / 10)), 1e-10);
}

TEST(Confinement, MonteCarloAgreesWithExact) {
  double p = confinement_probability(2, 7, 60, ConfinementMethod::exact_spectral, 1, 1).p_hat;
  TailEstimate naive = confinement_probability(2, 7, 60, ConfinementMethod::naive_mc, 50000, 2);
  TailEstimate guided = confinement_probability(2, 7, 60, ConfinementMethod::guided_mc, 20000, 3);
  EXPECT_NEAR(naive.p_hat, p, 4 * naive.std_err);
  EXPECT_NEAR(guided.p_hat, p, 4 * guided.std_err);
  EXPECT_LT(guided.std_err / guided.p_hat, naive.std_err / naive.p_hat);
}

TEST(Splitting, AgreesWithNaiveAtModerateLevel) {
  const std::int64_t n = 64;
  const double y = 2;
  TailEstimate naive = naive_tail(SiltExceedance{2, 1, y}, 5, n, 200000, 11);
  TailEstimate split = splitting_tail(5, n, n * y, SplittingOptions{}, 12);
  double se = std::hypot(naive.log_std_err, split.log_std_err);
  EXPECT_NEAR(split.log_p, naive.log_p, 4 * se);
}

TEST(Splitting, FixedLevelModeAgrees) {
  SplittingOptions o;
  o.adaptive = false;
  TailEstimate a = splitting_tail(5, 64, 128, o, 21);
  TailEstimate b = naive_tail(SiltExceedance{2, 1, 2}, 5, 64, 200000, 22);
  EXPECT_NEAR(a.log_p, b.log_p, 4 * std::hypot(a.log_std_err, b.log_std_err));
}

TEST(Splitting, TrivialLevel) {
  TailEstimate e = splitting_tail(5, 32, 1, SplittingOptions{}, 1);
  EXPECT_NEAR(e.p_hat, 1, 1e-12);
}

TEST(ReturnChain, ReturnCdfAtTwo) {
  // the first return by time 2 is an immediate backtrack
  TailEstimate e = return_cdf(3, 2, 100000, 4);
  EXPECT_NEAR(e.p_hat, 1.0 / 6, 4 * e.std_err);
}

TEST(ReturnChain, BoundBelowNaive) {
  TailEstimate naive = naive_tail(SiltExceedance{2, 1, 2}, 5, 64, 200000, 11);
  TailEstimate lb = return_chain_lower_bound(5, 64, 2, 20000, 3);
  EXPECT_LE(lb.log_p, naive.log_p + 4 * std::hypot(naive.log_std_err, lb.log_std_err));
}

TEST(Tilted, GaussianConditionalMatchesClosedForm) {
  std::vector<LocalTimeField> fields;
  for (std::uint64_t s = 1; s <= 40; ++s) fields.push_back(simulate_local_times(3, 400, s));
  SceneryModel m = SceneryModel::gaussian(1);
  TiltOptions exact_opts, mc_opts;
  mc_opts.exact_gaussian = false;
  mc_opts.draws = 2000;
  TailEstimate exact = tilted_scenery_tail(fields, m, 1, 0.3, exact_opts, 5);
  TailEstimate mc = tilted_scenery_tail(fields, m, 1, 0.3, mc_opts, 5);
  double closed = 0;
  for (const auto& f : fields) closed += conditional_gaussian_tail(f, 1, 400 * 0.3);
  closed /= fields.size();
  EXPECT_NEAR(exact.p_hat, closed, 1e-12 + 1e-9 * closed);
  EXPECT_NEAR(mc.log_p, std::log(closed), 0.05);
}

TEST(Tilted, ConditionalGaussianValue) {
  LocalTimeField f = local_times(walk_from_directions(1, std::vector<unsigned>{1, 0}));
  // sum l^2 = 5, threshold 2: P(N(0, 5) >= 2)
  EXPECT_NEAR(conditional_gaussian_tail(f, 1, 2), 0.5 * std::erfc(2 / std::sqrt(10.0)), 1e-14);
}

TEST(Tilted, WeibullAgreesWithNaive) {
  SceneryModel m = SceneryModel::weibull(3, 1, 7);
  TailEstimate tilt = rwrs_tail_tilted(3, 100, 1, 0.6, m, 400, TiltOptions{}, 8);
  TailEstimate naive = naive_tail(RwrsExceedance{1, 0.6, m}, 3, 100, 200000, 9);
  EXPECT_NEAR(tilt.log_p, naive.log_p, 4 * std::hypot(tilt.log_std_err, naive.log_std_err));
}

TEST(Fit, RecoversSyntheticExponents) {
  std::vector<FitPoint> sq, pw;
  for (double n : {64.0, 256.0, 1024.0, 4096.0, 16384.0}) {
    sq.push_back({n, -2 * std::sqrt(n) + 1});
    pw.push_back({n, -std::pow(n, 0.7)});
  }
  ExponentFit a = fit_exponent(sq, FitTransform::log_vs_sqrt);
  EXPECT_NEAR(a.c_hat, 2, 1e-9);
  EXPECT_NEAR(a.r_squared, 1, 1e-12);
  ExponentFit b = fit_exponent(pw, FitTransform::log_log);
  EXPECT_NEAR(b.zeta_hat, 0.7, 1e-9);
  ExponentFit c = fit_exponent(pw, FitTransform::log_vs_power, 0.7);
  EXPECT_NEAR(c.c_hat, 1, 1e-9);
}

TEST(Fit, RejectsTooFewOrZeroPoints) {
  std::vector<FitPoint> three{{1, -1}, {2, -2}, {3, -3}};
  EXPECT_THROW(fit_exponent(three, FitTransform::log_vs_sqrt), std::invalid_argument);
  std::vector<FitPoint> inf{{1, -1}, {2, -2}, {3, -INFINITY}, {4, -4}};
  EXPECT_THROW(fit_exponent(inf, FitTransform::log_vs_sqrt), std::invalid_argument);
}

TEST(Decomposition, PartsAreConsistent) {
  DecompositionEstimate d = decomposition_tail(3, 200, 1, 0.2, 0.2, 0.3, SceneryModel::gaussian(1), 5000, 3);
  EXPECT_GE(d.whole.p_hat, 0);
  EXPECT_LE(d.whole.p_hat, 1);
  EXPECT_EQ(d.whole.n_samples, d.high.n_samples);
}

TEST(Tilted, StaysFiniteBelowDoubleRange) {
  TailEstimate w = rwrs_tail_tilted(3, 400, 1, 3, SceneryModel::weibull(3, 1), 20, TiltOptions{}, 2);
  EXPECT_EQ(w.p_hat, 0);
  EXPECT_TRUE(std::isfinite(w.log_p));
  EXPECT_LT(w.log_p, -745);
  TailEstimate g = rwrs_tail_tilted(3, 400, 1, 8, SceneryModel::gaussian(1), 20, TiltOptions{}, 2);
  EXPECT_TRUE(std::isfinite(g.log_p));
  EXPECT_LT(g.log_p, -745);
}

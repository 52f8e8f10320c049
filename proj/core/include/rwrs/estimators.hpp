#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rwrs/exponents.hpp"
#include "rwrs/lattice_walk.hpp"
#include "rwrs/scenery.hpp"

namespace rwrs {

// Probabilities are carried in log space next to the raw value, so estimates
// far below the double range stay usable.
struct TailEstimate {
  double p_hat = 0;
  double std_err = 0;
  double log_p = 0;
  double log_std_err = 0;  // standard error of log p_hat
  std::uint64_t n_samples = 0;
  std::string method;
  std::int64_t n = 0;
  double y = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
};

TailEstimate make_estimate(double p_hat, double std_err, std::uint64_t samples, std::string method);
TailEstimate make_log_estimate(double log_p, double log_std_err, std::uint64_t samples, std::string method);

// X_n >= n^beta y
struct RwrsExceedance {
  double beta = 1;
  double y = 0;
  SceneryModel scenery;
};
// sum l^p >= n^gamma y
struct SiltExceedance {
  double p = 2;
  double gamma = 1;
  double y = 0;
};
// |{x : n^b_low <= l(x) < n^b_high}| >= size
struct LevelSetExceedance {
  double b_low = 0;
  double b_high = 1;
  double size = 0;
};
// sigma_r > n
struct ConfinementEvent {
  double r = 1;
};

using EventSpec = std::variant<RwrsExceedance, SiltExceedance, LevelSetExceedance, ConfinementEvent>;

TailEstimate naive_tail(const EventSpec& event, int dimension, std::int64_t n, std::uint64_t replicas,
                        std::uint64_t seed);

struct ExactDistribution {
  std::map<double, std::uint64_t> counts;
  std::uint64_t total = 0;
  double prob_at_least(double v) const;
  double mean() const;
};

using PathFunctional = std::function<double(const Trajectory&, const LocalTimeField&)>;

// All (2d)^n paths, at most 1e7.
ExactDistribution enumerate_exact(int dimension, std::int64_t n, const PathFunctional& f);
// Exact probability of a walk-only event (not RwrsExceedance).
double exact_event_probability(const EventSpec& event, int dimension, std::int64_t n);

struct TiltOptions {
  std::optional<double> tilt;   // fixed tilt; otherwise matched to the target mean
  std::uint64_t draws = 16;     // scenery draws per trajectory
  bool exact_gaussian = true;   // closed-form conditional tail for gaussian sceneries
};

// P(X_n >= n^beta y) averaged over the given local time fields, each one
// estimated conditionally by sitewise exponential tilting of the scenery.
TailEstimate tilted_scenery_tail(std::span<const LocalTimeField> fields, const SceneryModel& m, double beta, double y,
                                 const TiltOptions& opts, std::uint64_t seed);

// Same estimator with fresh walks generated from seed.
TailEstimate rwrs_tail_tilted(int dimension, std::int64_t n, double beta, double y, const SceneryModel& m,
                              std::uint64_t walks, const TiltOptions& opts, std::uint64_t seed);

// P(N(0, variance sum l^2) >= threshold)
double conditional_gaussian_tail(const LocalTimeField& field, double variance, double threshold);

// prefix_silt: sum l_k^2. projected_silt: sum l_k^2 + (2 G(0) - 1)(n - k).
enum class Importance { prefix_silt, projected_silt };

struct SplittingOptions {
  std::uint64_t particles = 2000;
  std::uint64_t pilot_particles = 500;
  double survival = 0.5;  // fraction kept per level
  int max_levels = 5000;
  Importance importance = Importance::projected_silt;
  // Levels from the running population (one pass) instead of a pilot run
  // followed by a fixed-level main run.
  bool adaptive = true;
};

class SplittingExtinction : public std::runtime_error {
 public:
  SplittingExtinction(int level, const std::string& what) : std::runtime_error(what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

// P(sum l_n^2 >= level) by fixed-effort multilevel splitting on path prefixes,
// with levels placed at empirical quantiles of the importance function.
TailEstimate splitting_tail(int dimension, std::int64_t n, double level, const SplittingOptions& opts,
                            std::uint64_t seed);

// P(T_0 <= m) by Monte Carlo.
TailEstimate return_cdf(int dimension, std::int64_t m, std::uint64_t replicas, std::uint64_t seed);

// k = ceil(sqrt(n y)) - 1 returns, each within floor(n / k) steps, force
// sum l_n^2 >= n y, so P(T_0 <= n/k)^k bounds P(sum l_n^2 >= n y) from below.
TailEstimate return_chain_lower_bound(int dimension, std::int64_t n, double y, std::uint64_t replicas,
                                      std::uint64_t seed);

enum class ConfinementMethod { naive_mc, guided_mc, exact_spectral };
std::string confinement_method_name(ConfinementMethod m);

// P(sigma_r > T): the walk stays in |x_i| <= floor((r-1)/2) for times 0..T.
// guided_mc samples the walk conditioned by the top eigenfunction of the box
// and reweights by lambda^T h(0) / h(S_T).
TailEstimate confinement_probability(int dimension, double r, std::int64_t horizon, ConfinementMethod method,
                                     std::uint64_t replicas, std::uint64_t seed);

// -log of the top eigenvalue of the killed walk in the box.
double confinement_decay_rate(int dimension, double r);

// P(X_n >= n^beta y) >= P(eta > y)^{r^d} (P(sigma_r > T) - P(|R_T| <= eps r^d)),
// T = n^beta, r = T^{1/(d+2)}.
TailEstimate localization_lower_bound(const PhasePoint& phase, std::int64_t n, double y, double eps,
                                      const SceneryModel& m, std::uint64_t replicas, std::uint64_t seed);

enum class FitTransform { log_log, log_vs_power, log_vs_sqrt };
std::string transform_name(FitTransform t);

struct FitPoint {
  double n = 0;
  double log_p = 0;
};

struct ExponentFit {
  double zeta_hat = 0;
  double c_hat = 0;
  double intercept = 0;
  double slope = 0;
  double r_squared = 0;
  std::size_t points = 0;
  FitTransform transform = FitTransform::log_log;
};

// At least 4 points, all with p > 0.
// log_log: log(-log p) on log n, zeta_hat is the slope.
// log_vs_power: log p on n^zeta; log_vs_sqrt: log p on sqrt(n); c_hat = -slope.
ExponentFit fit_exponent(std::span<const FitPoint> points, FitTransform transform, double zeta = 0.5);

struct DecompositionEstimate {
  TailEstimate whole, high, low;
};

// Same samples for X_n >= n^beta (y_high + y_low) and its parts on
// {l >= n^b} (>= n^beta y_high) and {l < n^b} (>= n^beta y_low).
DecompositionEstimate decomposition_tail(int dimension, std::int64_t n, double beta, double y_high, double y_low,
                                         double b, const SceneryModel& m, std::uint64_t replicas,
                                         std::uint64_t seed);

}  // namespace rwrs

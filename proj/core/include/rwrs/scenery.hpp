#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rwrs/lattice_walk.hpp"

namespace rwrs {

enum class SceneryFamily { symmetric_weibull, gaussian, symmetric_bounded, discrete };

std::string family_name(SceneryFamily f);
SceneryFamily parse_family(const std::string& name);

// symmetric_weibull: eta = sign * W, P(W > t) = exp(-c t^alpha).
// gaussian: N(0, variance). symmetric_bounded: uniform on [-a, a], a = sqrt(3 variance).
// discrete: symmetric atoms with probabilities (used for exact enumeration).
struct SceneryModel {
  SceneryFamily family = SceneryFamily::gaussian;
  double alpha = 2;
  double c = 1;
  double variance = 1;
  std::uint64_t seed_base = 0;
  std::vector<double> atoms;
  std::vector<double> probs;

  static SceneryModel weibull(double alpha, double c, std::uint64_t seed = 0);
  static SceneryModel gaussian(double variance, std::uint64_t seed = 0);
  static SceneryModel bounded(double variance, std::uint64_t seed = 0);
  static SceneryModel discrete(std::vector<double> atoms, std::vector<double> probs, std::uint64_t seed = 0);
};

void validate(const SceneryModel& m);

double scenery_quantile(const SceneryModel& m, double u);
double scenery_tail(const SceneryModel& m, double t);     // P(eta > t)
double scenery_variance(const SceneryModel& m);
double scenery_log_density(const SceneryModel& m, double x);  // log pmf for discrete
// Exponent alpha* with log P(eta > t) ~ -c t^alpha*; +inf for bounded families.
double tail_exponent(const SceneryModel& m);
// Even and non-increasing on [0, inf).
bool bell_shaped(const SceneryModel& m);

// eta(x) = F^{-1}(u(hash(seed_base, x))): a pure function of the site, so any
// replica or worker sees the same value without storing the field.
class SceneryField {
 public:
  explicit SceneryField(SceneryModel m) : model_(std::move(m)) { validate(model_); }
  double at(const Coord* site, int dimension) const;
  double at(std::span<const Coord> site) const { return at(site.data(), static_cast<int>(site.size())); }
  double uniform_at(const Coord* site, int dimension) const;
  const SceneryModel& model() const { return model_; }

 private:
  SceneryModel model_;
};

SceneryField sample_scenery(const SceneryModel& m);
// Values on the visited sites, in the field's iteration order.
std::vector<double> scenery_on(const SceneryField& eta, const LocalTimeField& field);

// X_n = sum_x l_n(x) eta(x)
double rwrs_value(const LocalTimeField& field, const SceneryField& eta);
// sum_{k=0}^{n} eta(S_k), computed along the path
double rwrs_path_sum(const Trajectory& path, const SceneryField& eta);

struct LogLaplace {
  double value = 0;
  double error = 0;
};

// Lambda(t) = log E exp(t eta). Throws std::domain_error where it diverges.
LogLaplace log_laplace(const SceneryModel& m, double t);
// Lambda'(t), the mean of the tilted law.
double log_laplace_slope(const SceneryModel& m, double t);
// True where Lambda(t) is finite.
bool log_laplace_finite(const SceneryModel& m, double t);

struct LaplaceFit {
  double alpha_star = 0;  // conjugate tail exponent alpha/(alpha-1), 1 for bounded
  double c0 = 0;          // Lambda(t) <= c0 t^2 on |t| <= 1
  double cinf = 0;        // Lambda(t) <= cinf |t|^alpha* on 1 <= |t| <= t_max
  double t_max = 0;
};

LaplaceFit fit_log_laplace(const SceneryModel& m, double t_max = 20);

// Proposal for the law tilted by exp(theta eta). log_weight returns
// log f(x) - log q(x), exact for the proposal actually sampled.
class TiltedProposal {
 public:
  TiltedProposal(const SceneryModel& m, double theta);
  double sample(double u) const;
  double log_weight(double x) const;
  double theta() const { return theta_; }

 private:
  void build_piecewise();

  SceneryModel model_;
  double theta_;
  double log_norm_ = 0;
  // piecewise exponential envelope (weibull family)
  std::vector<double> grid_;
  std::vector<double> psi_;
  std::vector<double> slope_;
  std::vector<double> cum_;
  double left_rate_ = 0, right_rate_ = 0, left_mass_ = 0, right_mass_ = 0, psi_ref_ = 0;
  // discrete tilted law
  std::vector<double> tilted_cdf_;
};

struct CollisionLaw {
  int alpha_max = 1;      // alpha_k uniform on {-alpha_max..alpha_max}
  bool move_walk = true;  // beta_k nearest-neighbour steps, or frozen
};

struct ShearPath {
  Trajectory walk;                 // S_k, the y-component
  std::vector<int> alpha;          // alpha_1..alpha_n (index 0 unused)
  std::vector<double> first;       // x-component of R_k by the recursion
};

// R_{k+1} = R_k + (eta(S_k), 0) + (alpha_{k+1}, beta_{k+1}) with R_0 = 0.
ShearPath shear_transport(std::int64_t steps, int dimension, const SceneryModel& m, const CollisionLaw& law,
                          std::uint64_t seed);
// sum alpha_k + sum_{k=0}^{n-1} eta(S_k) at step n.
double shear_closed_form(const ShearPath& p, const SceneryField& eta, std::int64_t n);

}  // namespace rwrs

#include "rwrs/scenery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace rwrs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bound_of(const SceneryModel& m) { return std::sqrt(3 * m.variance); }

double log_sum_exp(const std::vector<double>& v) {
  double mx = -kInf;
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

// log(sinh(x) / x), x >= 0
double log_sinhc(double x) {
  if (x < 1e-4) return x * x / 6;
  if (x > 20) return x - std::log(2 * x) + std::log1p(-std::exp(-2 * x));
  return std::log(std::sinh(x) / x);
}

struct WeibullMoments {
  double log_m0 = 0;  // log E cosh(tW)
  double m1 = 0;      // E W sinh(tW) / E cosh(tW)
  double error = 0;
};

WeibullMoments weibull_moments(double alpha, double c, double t, bool slope) {
  t = std::abs(t);
  double shift = 0;
  if (t > 0 && alpha > 1) {
    double v = std::pow(t / (alpha * std::pow(c, 1 / alpha)), alpha / (alpha - 1));
    shift = std::max(0.0, t * std::pow(v / c, 1 / alpha) - v);
  }
  const double inv_a = 1 / alpha;
  boost::math::quadrature::exp_sinh<double> integrator;
  double err0 = 0, l1 = 0;
  auto f0 = [&](double v) {
    double w = std::pow(v / c, inv_a);
    return std::exp(t * w - v - shift) * 0.5 * (1 + std::exp(-2 * t * w));
  };
  double i0 = integrator.integrate(f0, 1e-12, &err0, &l1);
  WeibullMoments out;
  out.log_m0 = shift + std::log(i0);
  out.error = err0 / i0;
  if (slope) {
    double err1 = 0;
    auto f1 = [&](double v) {
      double w = std::pow(v / c, inv_a);
      return w * std::exp(t * w - v - shift) * 0.5 * (1 - std::exp(-2 * t * w));
    };
    double i1 = integrator.integrate(f1, 1e-12, &err1, &l1);
    out.m1 = i1 / i0;
  }
  return out;
}

}  // namespace

std::string family_name(SceneryFamily f) {
  switch (f) {
    case SceneryFamily::symmetric_weibull: return "symmetric-weibull";
    case SceneryFamily::gaussian: return "gaussian";
    case SceneryFamily::symmetric_bounded: return "symmetric-bounded";
    case SceneryFamily::discrete: return "discrete";
  }
  return "?";
}

SceneryFamily parse_family(const std::string& name) {
  if (name == "symmetric-weibull") return SceneryFamily::symmetric_weibull;
  if (name == "gaussian") return SceneryFamily::gaussian;
  if (name == "symmetric-bounded") return SceneryFamily::symmetric_bounded;
  if (name == "discrete") return SceneryFamily::discrete;
  throw std::invalid_argument("unknown scenery family '" + name + "'");
}

SceneryModel SceneryModel::weibull(double alpha, double c, std::uint64_t seed) {
  SceneryModel m;
  m.family = SceneryFamily::symmetric_weibull;
  m.alpha = alpha;
  m.c = c;
  m.seed_base = seed;
  m.variance = std::pow(c, -2 / alpha) * std::tgamma(1 + 2 / alpha);
  validate(m);
  return m;
}

SceneryModel SceneryModel::gaussian(double variance, std::uint64_t seed) {
  SceneryModel m;
  m.family = SceneryFamily::gaussian;
  m.variance = variance;
  m.alpha = 2;
  m.c = 1 / (2 * variance);
  m.seed_base = seed;
  validate(m);
  return m;
}

SceneryModel SceneryModel::bounded(double variance, std::uint64_t seed) {
  SceneryModel m;
  m.family = SceneryFamily::symmetric_bounded;
  m.variance = variance;
  m.alpha = kInf;
  m.seed_base = seed;
  validate(m);
  return m;
}

SceneryModel SceneryModel::discrete(std::vector<double> atoms, std::vector<double> probs, std::uint64_t seed) {
  SceneryModel m;
  m.family = SceneryFamily::discrete;
  m.atoms = std::move(atoms);
  m.probs = std::move(probs);
  m.alpha = kInf;
  m.seed_base = seed;
  validate(m);
  double v = 0;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) v += m.probs[i] * m.atoms[i] * m.atoms[i];
  m.variance = v;
  return m;
}

void validate(const SceneryModel& m) {
  switch (m.family) {
    case SceneryFamily::symmetric_weibull:
      if (!(m.alpha > 0) || !(m.c > 0)) throw std::invalid_argument("weibull scenery needs alpha > 0 and c > 0");
      break;
    case SceneryFamily::gaussian:
    case SceneryFamily::symmetric_bounded:
      if (!(m.variance > 0)) throw std::invalid_argument("scenery variance must be positive");
      break;
    case SceneryFamily::discrete: {
      if (m.atoms.empty() || m.atoms.size() != m.probs.size())
        throw std::invalid_argument("discrete scenery needs matching atoms and probabilities");
      double total = 0;
      for (double p : m.probs) {
        if (!(p > 0)) throw std::invalid_argument("discrete scenery probabilities must be positive");
        total += p;
      }
      if (std::abs(total - 1) > 1e-12) throw std::invalid_argument("discrete scenery probabilities must sum to 1");
      for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        if (i > 0 && !(m.atoms[i] > m.atoms[i - 1])) throw std::invalid_argument("discrete atoms must increase");
        std::size_t j = m.atoms.size() - 1 - i;
        if (std::abs(m.atoms[i] + m.atoms[j]) > 1e-12 || std::abs(m.probs[i] - m.probs[j]) > 1e-12)
          throw std::invalid_argument("discrete scenery must be symmetric");
      }
      break;
    }
  }
}

double scenery_quantile(const SceneryModel& m, double u) {
  if (!(u > 0 && u < 1)) throw std::domain_error("quantile needs u in (0, 1)");
  switch (m.family) {
    case SceneryFamily::symmetric_weibull: {
      double q = u < 0.5 ? 2 * u : 2 * (1 - u);
      double w = std::pow(-std::log(q) / m.c, 1 / m.alpha);
      return u < 0.5 ? -w : w;
    }
    case SceneryFamily::gaussian: {
      double s = std::sqrt(2 * m.variance);
      return u < 0.5 ? -s * boost::math::erfc_inv(2 * u) : s * boost::math::erfc_inv(2 * (1 - u));
    }
    case SceneryFamily::symmetric_bounded: {
      double a = bound_of(m);
      return a * (2 * u - 1);
    }
    case SceneryFamily::discrete: {
      double acc = 0;
      for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        acc += m.probs[i];
        if (u < acc) return m.atoms[i];
      }
      return m.atoms.back();
    }
  }
  return 0;
}

double scenery_tail(const SceneryModel& m, double t) {
  switch (m.family) {
    case SceneryFamily::symmetric_weibull:
      return t < 0 ? 1 - 0.5 * std::exp(-m.c * std::pow(-t, m.alpha)) : 0.5 * std::exp(-m.c * std::pow(t, m.alpha));
    case SceneryFamily::gaussian:
      return 0.5 * std::erfc(t / std::sqrt(2 * m.variance));
    case SceneryFamily::symmetric_bounded: {
      double a = bound_of(m);
      return std::clamp((a - t) / (2 * a), 0.0, 1.0);
    }
    case SceneryFamily::discrete: {
      double s = 0;
      for (std::size_t i = 0; i < m.atoms.size(); ++i)
        if (m.atoms[i] > t) s += m.probs[i];
      return s;
    }
  }
  return 0;
}

double scenery_variance(const SceneryModel& m) {
  if (m.family == SceneryFamily::symmetric_weibull) return std::pow(m.c, -2 / m.alpha) * std::tgamma(1 + 2 / m.alpha);
  return m.variance;
}

double scenery_log_density(const SceneryModel& m, double x) {
  switch (m.family) {
    case SceneryFamily::symmetric_weibull: {
      double ax = std::abs(x);
      if (ax == 0) return m.alpha < 1 ? kInf : (m.alpha == 1 ? std::log(0.5 * m.c) : -kInf);
      return std::log(0.5 * m.c * m.alpha) + (m.alpha - 1) * std::log(ax) - m.c * std::pow(ax, m.alpha);
    }
    case SceneryFamily::gaussian:
      return -x * x / (2 * m.variance) - 0.5 * std::log(2 * std::numbers::pi * m.variance);
    case SceneryFamily::symmetric_bounded: {
      double a = bound_of(m);
      return std::abs(x) <= a ? -std::log(2 * a) : -kInf;
    }
    case SceneryFamily::discrete:
      for (std::size_t i = 0; i < m.atoms.size(); ++i)
        if (std::abs(m.atoms[i] - x) <= 1e-12 * (1 + std::abs(x))) return std::log(m.probs[i]);
      return -kInf;
  }
  return -kInf;
}

double tail_exponent(const SceneryModel& m) {
  switch (m.family) {
    case SceneryFamily::symmetric_weibull: return m.alpha;
    case SceneryFamily::gaussian: return 2;
    default: return kInf;
  }
}

bool bell_shaped(const SceneryModel& m) {
  switch (m.family) {
    case SceneryFamily::symmetric_weibull: return m.alpha <= 1;
    case SceneryFamily::gaussian:
    case SceneryFamily::symmetric_bounded: return true;
    case SceneryFamily::discrete: {
      std::size_t mid = m.atoms.size() / 2;
      for (std::size_t i = mid + 1; i < m.atoms.size(); ++i)
        if (m.probs[i] > m.probs[i - 1] + 1e-15) return false;
      return true;
    }
  }
  return false;
}

double SceneryField::uniform_at(const Coord* site, int dimension) const {
  return to_unit(mix64(hash_site(site, dimension) ^ mix64(model_.seed_base + kGolden)));
}

double SceneryField::at(const Coord* site, int dimension) const {
  return scenery_quantile(model_, uniform_at(site, dimension));
}

SceneryField sample_scenery(const SceneryModel& m) { return SceneryField(m); }

std::vector<double> scenery_on(const SceneryField& eta, const LocalTimeField& field) {
  std::vector<double> out;
  out.reserve(field.range());
  field.for_each([&](std::span<const Coord> s, std::int64_t) { out.push_back(eta.at(s)); });
  return out;
}

double rwrs_value(const LocalTimeField& field, const SceneryField& eta) {
  double x = 0;
  field.for_each([&](std::span<const Coord> s, std::int64_t l) { x += static_cast<double>(l) * eta.at(s); });
  return x;
}

double rwrs_path_sum(const Trajectory& path, const SceneryField& eta) {
  double x = 0;
  for (std::int64_t k = 0; k <= path.steps; ++k) x += eta.at(path.site(k), path.dimension);
  return x;
}

bool log_laplace_finite(const SceneryModel& m, double t) {
  if (t == 0) return true;
  if (m.family != SceneryFamily::symmetric_weibull) return true;
  if (m.alpha > 1) return true;
  if (m.alpha == 1) return std::abs(t) < m.c;
  return false;
}

LogLaplace log_laplace(const SceneryModel& m, double t) {
  if (!log_laplace_finite(m, t)) throw std::domain_error("log-Laplace transform diverges at this t");
  LogLaplace out;
  if (t == 0) return out;
  switch (m.family) {
    case SceneryFamily::gaussian:
      out.value = 0.5 * m.variance * t * t;
      break;
    case SceneryFamily::symmetric_bounded:
      out.value = log_sinhc(std::abs(t) * bound_of(m));
      break;
    case SceneryFamily::discrete: {
      std::vector<double> v;
      for (std::size_t i = 0; i < m.atoms.size(); ++i) v.push_back(std::log(m.probs[i]) + t * m.atoms[i]);
      out.value = log_sum_exp(v);
      break;
    }
    case SceneryFamily::symmetric_weibull:
      if (m.alpha == 1) {
        out.value = std::log(m.c * m.c / (m.c * m.c - t * t));
      } else {
        WeibullMoments w = weibull_moments(m.alpha, m.c, t, false);
        out.value = w.log_m0;
        out.error = w.error;
      }
      break;
  }
  return out;
}

double log_laplace_slope(const SceneryModel& m, double t) {
  if (!log_laplace_finite(m, t)) throw std::domain_error("log-Laplace transform diverges at this t");
  if (t == 0) return 0;
  switch (m.family) {
    case SceneryFamily::gaussian: return m.variance * t;
    case SceneryFamily::symmetric_bounded: {
      double a = bound_of(m), x = t * a;
      if (std::abs(x) < 1e-4) return a * x / 3;
      return a / std::tanh(x) - 1 / t;
    }
    case SceneryFamily::discrete: {
      std::vector<double> v;
      for (std::size_t i = 0; i < m.atoms.size(); ++i) v.push_back(std::log(m.probs[i]) + t * m.atoms[i]);
      double z = log_sum_exp(v), mean = 0;
      for (std::size_t i = 0; i < m.atoms.size(); ++i) mean += m.atoms[i] * std::exp(v[i] - z);
      return mean;
    }
    case SceneryFamily::symmetric_weibull: {
      if (m.alpha == 1) return 2 * t / (m.c * m.c - t * t);
      double s = weibull_moments(m.alpha, m.c, t, true).m1;
      return t < 0 ? -s : s;
    }
  }
  return 0;
}

LaplaceFit fit_log_laplace(const SceneryModel& m, double t_max) {
  LaplaceFit f;
  f.t_max = t_max;
  switch (m.family) {
    case SceneryFamily::symmetric_weibull:
      if (!(m.alpha > 1)) throw std::domain_error("log-Laplace growth fit needs alpha > 1");
      f.alpha_star = m.alpha / (m.alpha - 1);
      break;
    case SceneryFamily::gaussian: f.alpha_star = 2; break;
    default: f.alpha_star = 1; break;
  }
  f.c0 = 0.5 * scenery_variance(m);
  for (int i = 1; i <= 200; ++i) {
    double t = i / 200.0;
    f.c0 = std::max(f.c0, log_laplace(m, t).value / (t * t));
  }
  for (int i = 0; i <= 200; ++i) {
    double t = std::exp(std::log(t_max) * i / 200.0);
    f.cinf = std::max(f.cinf, log_laplace(m, t).value / std::pow(t, f.alpha_star));
  }
  return f;
}

TiltedProposal::TiltedProposal(const SceneryModel& m, double theta) : model_(m), theta_(theta) {
  validate(model_);
  if (!log_laplace_finite(m, theta) || !log_laplace_finite(m, -theta))
    throw std::domain_error("tilt leaves the region where importance weights have finite variance");
  if (theta == 0) return;
  switch (m.family) {
    case SceneryFamily::gaussian:
    case SceneryFamily::symmetric_bounded:
      log_norm_ = log_laplace(m, theta).value;
      break;
    case SceneryFamily::discrete: {
      std::vector<double> v;
      for (std::size_t i = 0; i < m.atoms.size(); ++i) v.push_back(std::log(m.probs[i]) + theta * m.atoms[i]);
      log_norm_ = log_sum_exp(v);
      double acc = 0;
      for (double x : v) {
        acc += std::exp(x - log_norm_);
        tilted_cdf_.push_back(acc);
      }
      break;
    }
    case SceneryFamily::symmetric_weibull:
      build_piecewise();
      break;
  }
}

// Log-linear interpolation of psi(x) = log f(x) + theta x on a grid, with
// exponential tails continuing the outer secants. log f is concave on each
// half-line for alpha >= 1, so the tails dominate the target.
void TiltedProposal::build_piecewise() {
  const double a = model_.alpha, c = model_.c, th = theta_;
  auto psi = [&](double x) { return scenery_log_density(model_, x) + th * x; };
  double peak = std::pow(std::abs(th) / (c * a), 1 / std::max(a - 1, 1e-9));
  if (a == 1) peak = 0;
  double span = 2 * std::max(peak, std::pow(80 / c, 1 / a)) + 1;
  const int scan = 8192;
  double best = -kInf;
  std::vector<double> xs(scan), ps(scan);
  for (int i = 0; i < scan; ++i) {
    xs[i] = -span + 2 * span * (i + 0.5) / scan;
    ps[i] = psi(xs[i]);
    best = std::max(best, ps[i]);
  }
  int lo = 0, hi = scan - 1;
  while (lo < scan - 1 && ps[lo] < best - 46) ++lo;
  while (hi > 0 && ps[hi] < best - 46) --hi;
  double x0 = xs[std::max(lo - 1, 0)], x1 = xs[std::min(hi + 1, scan - 1)];
  const int cells = 2048;
  double h = (x1 - x0) / cells;
  // keep the origin off the grid, where the weibull log-density can be -inf
  if (std::abs(std::remainder(-x0, h)) < 1e-3 * h) x0 -= 0.5 * h, x1 -= 0.5 * h;
  psi_ref_ = best;
  grid_.resize(cells + 1);
  psi_.resize(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    grid_[i] = x0 + h * i;
    psi_[i] = psi(grid_[i]) - psi_ref_;
  }
  slope_.resize(cells);
  cum_.assign(cells + 1, 0.0);
  std::vector<double> mass(cells);
  for (int i = 0; i < cells; ++i) {
    double s = (psi_[i + 1] - psi_[i]) / h;
    if (!std::isfinite(s)) s = std::isfinite(psi_[i]) ? -1e300 : 1e300;
    slope_[i] = s;
    double e = std::exp(psi_[i]);
    if (!std::isfinite(psi_[i])) e = 0;
    double sh = s * h;
    mass[i] = std::abs(sh) < 1e-8 ? e * h : e * std::expm1(sh) / s;
    if (!std::isfinite(psi_[i]) && std::isfinite(psi_[i + 1])) mass[i] = 0;
  }
  left_rate_ = std::max(slope_[0], 1.0 / h);
  right_rate_ = std::max(-slope_[cells - 1], 1.0 / h);
  left_mass_ = std::exp(psi_[0]) / left_rate_;
  right_mass_ = std::exp(psi_[cells]) / right_rate_;
  double acc = left_mass_;
  for (int i = 0; i < cells; ++i) {
    cum_[i] = acc;
    acc += mass[i];
  }
  cum_[cells] = acc;
  log_norm_ = std::log(acc + right_mass_);
}

double TiltedProposal::sample(double u) const {
  if (theta_ == 0) return scenery_quantile(model_, u);
  switch (model_.family) {
    case SceneryFamily::gaussian:
      return theta_ * model_.variance + scenery_quantile(model_, u);
    case SceneryFamily::symmetric_bounded: {
      double a = bound_of(model_), t = theta_;
      if (t > 0) return a + std::log(u + (1 - u) * std::exp(-2 * t * a)) / t;
      return -a + std::log((1 - u) + u * std::exp(2 * t * a)) / t;
    }
    case SceneryFamily::discrete: {
      for (std::size_t i = 0; i < tilted_cdf_.size(); ++i)
        if (u < tilted_cdf_[i]) return model_.atoms[i];
      return model_.atoms.back();
    }
    case SceneryFamily::symmetric_weibull: {
      double total = cum_.back() + right_mass_;
      double v = u * total;
      if (v < left_mass_) return grid_.front() + std::log(v / left_mass_) / left_rate_;
      if (v >= cum_.back()) {
        double r = (v - cum_.back()) / right_mass_;
        return grid_.back() - std::log1p(-std::min(r, 1 - 1e-16)) / right_rate_;
      }
      std::size_t i = static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), v) - cum_.begin()) - 1;
      double h = grid_[i + 1] - grid_[i];
      double s = slope_[i];
      double e = std::exp(psi_[i]);
      double w = v - cum_[i];  // mass to cover inside the cell
      if (std::abs(s * h) < 1e-8) return grid_[i] + std::min(w / e, h);
      double z = std::log1p(w * s / e) / s;
      return grid_[i] + std::clamp(z, 0.0, h);
    }
  }
  return 0;
}

double TiltedProposal::log_weight(double x) const {
  if (theta_ == 0) return 0;
  if (model_.family != SceneryFamily::symmetric_weibull) return -theta_ * x + log_norm_;
  double lq;
  if (x < grid_.front()) {
    lq = psi_.front() + left_rate_ * (x - grid_.front());
  } else if (x >= grid_.back()) {
    lq = psi_.back() - right_rate_ * (x - grid_.back());
  } else {
    std::size_t i = static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), x) - grid_.begin()) - 1;
    lq = psi_[i] + slope_[i] * (x - grid_[i]);
  }
  return scenery_log_density(model_, x) - lq + log_norm_;
}

ShearPath shear_transport(std::int64_t steps, int dimension, const SceneryModel& m, const CollisionLaw& law,
                          std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("step count must be >= 0");
  if (law.alpha_max < 0) throw std::invalid_argument("collision range must be >= 0");
  SceneryField eta(m);
  ShearPath p;
  p.walk.dimension = dimension;
  p.walk.steps = steps;
  p.walk.seed = seed;
  p.walk.coords.assign(static_cast<std::size_t>((steps + 1) * dimension), 0);
  p.alpha.assign(static_cast<std::size_t>(steps + 1), 0);
  p.first.assign(static_cast<std::size_t>(steps + 1), 0.0);
  WalkStepper beta(dimension, derive_seed(seed, 1));
  SplitMix64 collisions(derive_seed(seed, 2));
  const std::uint64_t width = 2 * static_cast<std::uint64_t>(law.alpha_max) + 1;
  for (std::int64_t k = 0; k < steps; ++k) {
    const Coord* y = p.walk.site(k);
    int a = static_cast<int>(collisions.below(width)) - law.alpha_max;
    p.alpha[k + 1] = a;
    p.first[k + 1] = p.first[k] + eta.at(y, dimension) + a;
    Coord* next = p.walk.coords.data() + (k + 1) * dimension;
    if (law.move_walk) {
      beta.step();
      std::copy(beta.position(), beta.position() + dimension, next);
    } else {
      std::copy(y, y + dimension, next);
    }
  }
  return p;
}

double shear_closed_form(const ShearPath& p, const SceneryField& eta, std::int64_t n) {
  double x = 0;
  for (std::int64_t k = 1; k <= n; ++k) x += p.alpha[k];
  for (std::int64_t k = 0; k < n; ++k) x += eta.at(p.walk.site(k), p.walk.dimension);
  return x;
}

}  // namespace rwrs

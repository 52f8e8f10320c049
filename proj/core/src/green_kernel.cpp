#include "rwrs/green_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace rwrs {

namespace {

constexpr double kPi = std::numbers::pi;

double bessel_hankel(int nu, double s) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    double next = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * s);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2 * kPi * s);
}

// (1/pi) int_0^pi exp(-2 s sin^2(t/2)) cos(nu t) dt; the trapezoid rule converges
// geometrically for this periodic integrand.
double bessel_trapezoid(int nu, double s) {
  const int m = 64 + static_cast<int>(8 * std::sqrt(s)) + 2 * nu;
  const double h = kPi / m;
  double sum = 0.5 * (1.0 + std::exp(-2 * s) * ((nu % 2) ? -1.0 : 1.0));
  for (int k = 1; k < m; ++k) {
    double t = k * h;
    double sn = std::sin(0.5 * t);
    sum += std::exp(-2 * s * sn * sn) * std::cos(nu * t);
  }
  return sum * h / kPi;
}

struct Rule {
  std::vector<double> t;
  std::vector<double> w;
};

void add_panel(Rule& r, const GaussLegendre& gl, double a, double b) {
  double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    r.t.push_back(mid + half * gl.nodes[i]);
    r.w.push_back(half * gl.weights[i]);
  }
}

double split_point(int d, int max_nu) {
  double need = d * std::max(1024.0, 16.0 * max_nu * max_nu);
  double T = 1;
  while (T < need) T *= 2;
  return T;
}

// Nodes for int_0^inf: geometric panels up to T, then t = T / u^2 on (0, 1].
Rule half_line_rule(double T, int m) {
  GaussLegendre gl = gauss_legendre(m);
  Rule r;
  add_panel(r, gl, 0.0, 0.5);
  add_panel(r, gl, 0.5, 1.0);
  for (double a = 1; a < T; a *= 2) add_panel(r, gl, a, 2 * a);
  Rule u;
  add_panel(u, gl, 0.0, 0.5);
  add_panel(u, gl, 0.5, 1.0);
  for (std::size_t i = 0; i < u.t.size(); ++i) {
    double x = u.t[i];
    r.t.push_back(T / (x * x));
    r.w.push_back(u.w[i] * 2 * T / (x * x * x));
  }
  return r;
}

constexpr int kOrders[] = {16, 24, 32, 48, 64, 96, 128, 192};

// Refines the node count until successive rules agree to tol.
GreenValue refine(double T, const std::function<double(double)>& f, double tol) {
  double prev = 0;
  GreenValue out;
  bool first = true;
  for (int m : kOrders) {
    Rule r = half_line_rule(T, m);
    double q = 0;
    for (std::size_t i = 0; i < r.t.size(); ++i) q += r.w[i] * f(r.t[i]);
    if (!first) {
      out.value = q;
      out.error = std::abs(q - prev);
      if (out.error <= tol) return out;
    }
    prev = q;
    first = false;
  }
  return out;
}

void check_transient(int d) {
  if (d < 3) throw std::invalid_argument("Green kernel needs a transient walk, d >= 3");
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t orbit_size(const std::vector<Coord>& key) {
  std::uint64_t m = factorial(static_cast<int>(key.size()));
  std::size_t i = 0;
  while (i < key.size()) {
    std::size_t j = i;
    while (j < key.size() && key[j] == key[i]) ++j;
    m /= factorial(static_cast<int>(j - i));
    if (key[i] != 0) m <<= (j - i);
    i = j;
  }
  return m;
}

void enumerate_keys(int d, int radius, std::vector<Coord>& cur, std::vector<std::vector<Coord>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  Coord lo = cur.empty() ? 0 : cur.back();
  for (Coord a = lo; a <= radius; ++a) {
    cur.push_back(a);
    enumerate_keys(d, radius, cur, out);
    cur.pop_back();
  }
}

std::vector<Coord> canonical(std::span<const Coord> x) {
  std::vector<Coord> k(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) k[i] = x[i] < 0 ? -x[i] : x[i];
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace

double scaled_bessel_i(int nu, double s) {
  if (s < 0) throw std::domain_error("scaled_bessel_i needs s >= 0");
  if (nu < 0) nu = -nu;
  if (s == 0) return nu == 0 ? 1.0 : 0.0;
  if (s < 600) return std::cyl_bessel_i(static_cast<double>(nu), s) * std::exp(-s);
  if (4.0 * nu * nu < s) return bessel_hankel(nu, s);
  return bessel_trapezoid(nu, s);
}

GaussLegendre gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  GaussLegendre gl;
  gl.nodes.resize(m);
  gl.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1;
      dp = m * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1;
      dp = m * (x * p1 - p0) / (x * x - 1);
    }
    double w = 2 / ((1 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[m - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[m - 1 - i] = w;
  }
  return gl;
}

GreenValue green_value(int dimension, std::span<const Coord> x, double tol) {
  check_transient(dimension);
  if (static_cast<int>(x.size()) != dimension) throw std::invalid_argument("site dimension mismatch");
  std::vector<Coord> k = canonical(x);
  const double T = split_point(dimension, k.back());
  const double inv_d = 1.0 / dimension;
  return refine(T, [&](double t) {
    double p = 1;
    for (Coord a : k) p *= scaled_bessel_i(a, t * inv_d);
    return p;
  }, tol);
}

double green_asymptotic_constant(int dimension) {
  check_transient(dimension);
  double h = 0.5 * dimension;
  return h * std::tgamma(h - 1) * std::pow(kPi, -h);
}

double GreenTable::tail_bound() const {
  if (d_ < 5) return std::numeric_limits<double>::infinity();
  const double sd = std::sqrt(static_cast<double>(d_));
  const double rho = radius_ + 1 - 0.5 * sd;
  if (rho <= 0) return std::numeric_limits<double>::infinity();
  const double cube = std::pow(1 + 0.5 * sd / (radius_ + 1), 2.0 * d_ - 4);
  const double sphere = 2 * std::pow(kPi, 0.5 * d_) / std::tgamma(0.5 * d_);
  return amplitude_ * amplitude_ * cube * sphere * std::pow(rho, 4.0 - d_) / (d_ - 4);
}

double GreenTable::at(std::span<const Coord> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("site dimension mismatch");
  auto it = lookup_.find(canonical(x));
  if (it == lookup_.end()) throw std::out_of_range("site outside Green table radius");
  return entries_[it->second].value;
}

void GreenTable::index() {
  lookup_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) lookup_[entries_[i].key] = i;
}

std::string GreenTable::to_json() const {
  nlohmann::json j;
  j["dimension"] = d_;
  j["radius"] = radius_;
  j["tol"] = tol_;
  j["quadrature_error"] = quad_error_;
  j["tail_amplitude"] = amplitude_;
  j["m1_truncated"] = m1_truncated_;
  j["tail_bound"] = tail_bound();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries_) rows.push_back({{"site", e.key}, {"multiplicity", e.multiplicity}, {"value", e.value}});
  j["entries"] = std::move(rows);
  return j.dump(1);
}

GreenTable GreenTable::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GreenTable g;
  g.d_ = j.at("dimension").get<int>();
  g.radius_ = j.at("radius").get<int>();
  g.tol_ = j.at("tol").get<double>();
  g.quad_error_ = j.at("quadrature_error").get<double>();
  g.amplitude_ = j.at("tail_amplitude").get<double>();
  g.m1_truncated_ = j.at("m1_truncated").get<double>();
  for (const auto& r : j.at("entries")) {
    GreenEntry e;
    e.key = r.at("site").get<std::vector<Coord>>();
    e.multiplicity = r.at("multiplicity").get<std::uint64_t>();
    e.value = r.at("value").get<double>();
    g.entries_.push_back(std::move(e));
  }
  g.index();
  return g;
}

GreenTable build_green_table(int dimension, int radius, double tol) {
  check_transient(dimension);
  if (radius < 0) throw std::invalid_argument("radius must be >= 0");
  GreenTable g;
  g.d_ = dimension;
  g.radius_ = radius;
  g.tol_ = tol;
  std::vector<std::vector<Coord>> keys;
  std::vector<Coord> cur;
  enumerate_keys(dimension, radius, cur, keys);

  const double T = split_point(dimension, radius);
  const double inv_d = 1.0 / dimension;
  std::vector<double> prev, values(keys.size());
  double err = 0;
  for (int m : kOrders) {
    Rule r = half_line_rule(T, m);
    const std::size_t nodes = r.t.size();
    std::vector<double> bessel(static_cast<std::size_t>(radius + 1) * nodes);
    for (int nu = 0; nu <= radius; ++nu)
      for (std::size_t i = 0; i < nodes; ++i) bessel[nu * nodes + i] = scaled_bessel_i(nu, r.t[i] * inv_d);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      double q = 0;
      for (std::size_t i = 0; i < nodes; ++i) {
        double p = r.w[i];
        for (Coord a : keys[k]) p *= bessel[a * nodes + i];
        q += p;
      }
      values[k] = q;
    }
    if (!prev.empty()) {
      err = 0;
      for (std::size_t k = 0; k < keys.size(); ++k) err = std::max(err, std::abs(values[k] - prev[k]));
      if (err <= tol) break;
    }
    prev = values;
  }
  g.quad_error_ = err;

  double amp = green_asymptotic_constant(dimension);
  double sum = 0;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    GreenEntry e;
    e.key = keys[k];
    e.multiplicity = orbit_size(keys[k]);
    e.value = values[k];
    sum += static_cast<double>(e.multiplicity) * e.value * e.value;
    if (radius > 0 && e.key.back() == radius) {
      double norm2 = 0;
      for (Coord a : e.key) norm2 += static_cast<double>(a) * a;
      amp = std::max(amp, e.value * std::pow(norm2, 0.5 * (dimension - 2)));
    }
    g.entries_.push_back(std::move(e));
  }
  g.amplitude_ = amp;
  g.m1_truncated_ = sum;
  g.index();
  return g;
}

GreenConstants green_constants(int dimension, int radius, double tol) {
  check_transient(dimension);
  GreenConstants c;
  c.dimension = dimension;
  std::vector<Coord> origin(dimension, 0);
  GreenValue g0 = green_value(dimension, origin, tol);
  c.g0 = g0.value;
  c.return_prob = 1 - 1 / g0.value;
  c.quadrature_error = g0.error;
  if (dimension >= 5) {
    const double T = split_point(dimension, 0);
    const double inv_d = 1.0 / dimension;
    GreenValue m1 = refine(T, [&](double t) {
      return t * std::pow(scaled_bessel_i(0, t * inv_d), dimension);
    }, tol);
    c.m1 = m1.value;
    c.quadrature_error = std::max(c.quadrature_error, m1.error);
  } else {
    c.m1 = std::numeric_limits<double>::infinity();
  }
  c.y0_silt = 1 + 2 * c.m1;
  c.radius = radius;
  if (radius > 0) {
    GreenTable t = build_green_table(dimension, radius, tol);
    c.m1_truncated = t.m1_truncated();
    c.m1_tail_bound = t.tail_bound();
    c.quadrature_error = std::max(c.quadrature_error, t.quadrature_error());
  }
  return c;
}

double intersection_horizon_bound(int dimension, std::int64_t n) {
  if (dimension < 3) throw std::invalid_argument("green kernel needs d >= 3");
  if (dimension <= 4) return std::numeric_limits<double>::infinity();
  if (n < 1) throw std::invalid_argument("horizon must be positive");
  const double h = 0.5 * dimension;
  // p_m(0) ~ 2 (d / (2 pi m))^{d/2} on even m; the even-m sum is half the integral
  const double amp = 2 * std::pow(dimension / (2 * std::numbers::pi), h);
  const double integral = std::pow(static_cast<double>(n), 2 - h) / ((h - 2) * (h - 1));
  return 1.1 * 2 * amp * 0.5 * integral;
}

}  // namespace rwrs

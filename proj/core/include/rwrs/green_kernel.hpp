#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rwrs/site_table.hpp"

namespace rwrs {

// e^{-s} I_nu(s), finite for all s >= 0.
double scaled_bessel_i(int nu, double s);

struct GaussLegendre {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int m);

struct GreenValue {
  double value = 0;
  double error = 0;
};

// G_d(x) = sum_k P(S_k = x) = int_0^inf prod_j e^{-t/d} I_{x_j}(t/d) dt, d >= 3.
GreenValue green_value(int dimension, std::span<const Coord> x, double tol = 1e-10);

struct GreenConstants {
  int dimension = 0;
  double g0 = 0;
  double return_prob = 0;  // P(T_0 < inf) = 1 - 1/G(0)
  double m1 = 0;           // sum_x G(x)^2, +inf for d < 5
  double y0_silt = 0;      // 1 + 2 m1
  double quadrature_error = 0;
  // Box lattice sum of G^2 over |x|_inf <= radius, for cross-checking m1.
  int radius = 0;
  double m1_truncated = 0;
  double m1_tail_bound = 0;
};

GreenConstants green_constants(int dimension, int radius = 8, double tol = 1e-10);

struct GreenEntry {
  std::vector<Coord> key;   // sorted absolute coordinates
  std::uint64_t multiplicity = 0;
  double value = 0;
};

class GreenTable {
 public:
  int dimension() const { return d_; }
  int radius() const { return radius_; }
  double tol() const { return tol_; }
  double quadrature_error() const { return quad_error_; }
  // max of G(x) |x|^{d-2} on the outer shell and the asymptotic constant
  double tail_amplitude() const { return amplitude_; }
  double m1_truncated() const { return m1_truncated_; }
  // Bound on sum of G^2 outside the box (d >= 5), +inf otherwise.
  double tail_bound() const;

  // Throws std::out_of_range beyond the radius.
  double at(std::span<const Coord> x) const;
  const std::vector<GreenEntry>& entries() const { return entries_; }

  std::string to_json() const;
  static GreenTable from_json(const std::string& text);

  friend GreenTable build_green_table(int dimension, int radius, double tol);

 private:
  void index();

  int d_ = 0;
  int radius_ = 0;
  double tol_ = 0;
  double quad_error_ = 0;
  double amplitude_ = 0;
  double m1_truncated_ = 0;
  std::vector<GreenEntry> entries_;
  std::map<std::vector<Coord>, std::size_t> lookup_;
};

GreenTable build_green_table(int dimension, int radius, double tol = 1e-10);

// m1 - E[I_n] <= 2 sum_{m > n} (m - n) p_m(0) for two walks of horizon n,
// with p_m(0) from the local limit theorem and a 10% margin; +inf for d <= 4.
double intersection_horizon_bound(int dimension, std::int64_t n);

// Leading constant a_d of G(x) ~ a_d |x|^{2-d}.
double green_asymptotic_constant(int dimension);

}  // namespace rwrs

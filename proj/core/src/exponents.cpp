#include "rwrs/exponents.hpp"

#include <cmath>
#include <limits>

namespace rwrs {

std::string region_name(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::IV: return "IV";
    case Region::V: return "V";
    case Region::out_of_scope: return "out-of-scope";
    case Region::unmatched: return "unmatched";
  }
  return "?";
}

double boundary_I_II(double alpha) { return (alpha + 1) / (alpha + 2); }
double boundary_I_III(int d) { return (0.5 * d + 1) / (0.5 * d + 2); }

double region_zeta(Region r, const PhasePoint& p) {
  const double a = p.alpha, b = p.beta, d = p.dimension;
  switch (r) {
    case Region::I: return 2 * b - 1;
    case Region::II: return b * a / (a + 1);
    case Region::III: return d * b / (d + 2);
    case Region::IV: return (d + 2 * a * (b - 1)) / (d + 2);
    case Region::V: return a * (b - 1);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

std::string region_formula(Region r) {
  switch (r) {
    case Region::I: return "2*beta - 1";
    case Region::II: return "beta*alpha/(alpha + 1)";
    case Region::III: return "d*beta/(d + 2)";
    case Region::IV: return "(d + 2*alpha*(beta - 1))/(d + 2)";
    case Region::V: return "alpha*(beta - 1)";
    default: return "";
  }
}

ExponentResult classify(const PhasePoint& p) {
  ExponentResult out;
  const double a = p.alpha, b = p.beta;
  const int d = p.dimension;
  if (!(a > 1) || !(b > 0.5) || d < 3) {
    out.region = Region::out_of_scope;
    out.zeta = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double half_d = 0.5 * d;
  const double b12 = boundary_I_II(a);
  const double b13 = boundary_I_III(d);
  const double b5 = 1 + 1 / a;
  auto set = [&](Region r) {
    out.region = r;
    out.zeta = region_zeta(r, p);
    out.formula = region_formula(r);
  };
  auto edge = [&](Region other) {
    out.on_boundary = true;
    out.neighbour = other;
  };
  if (b >= b5) {
    set(Region::V);
    if (b == b5) edge(a < half_d ? Region::II : (a > half_d ? Region::IV : Region::II));
    return out;
  }
  if (a < half_d) {
    if (b < b12) {
      set(Region::I);
      out.needs_y0 = true;
    } else {
      set(Region::II);
      if (b == b12) {
        edge(Region::I);
        out.needs_y0 = true;
      }
    }
    return out;
  }
  if (b < b13) {
    set(Region::I);
    out.needs_y0 = true;
    return out;
  }
  if (b <= 1) {
    set(Region::III);
    if (b == b13) {
      edge(Region::I);
      out.needs_y0 = true;
    } else if (b == 1 && a > half_d) {
      edge(Region::IV);
    }
    return out;
  }
  if (a > half_d) {
    set(Region::IV);
    return out;
  }
  // alpha = d/2 and 1 < beta < 1 + 1/alpha: the II and IV formulas coincide here.
  set(Region::IV);
  edge(Region::II);
  return out;
}

IidExponent iid_exponent(double a, double beta) {
  IidExponent out;
  if (beta >= 1 && a > 1) {
    out.zeta = (beta - 1) * a + 1;
    out.regime = "superlinear-collective";
  } else if (beta < 1 && beta * (2 - a) < 1) {
    out.zeta = 2 * beta - 1;
    out.regime = "gaussian";
  } else if (beta > 1 / (2 - a) && a < 1) {
    out.zeta = beta * a;
    out.regime = "one-big-jump";
  } else {
    out.zeta = std::numeric_limits<double>::quiet_NaN();
    out.regime = "unmatched";
  }
  return out;
}

std::vector<BoundaryCheck> boundary_continuity(int d, double alpha) {
  std::vector<BoundaryCheck> out;
  auto add = [&](const char* name, double beta, Region lo, Region hi) {
    PhasePoint p{alpha, beta, d};
    out.push_back({name, beta, region_zeta(lo, p), region_zeta(hi, p)});
  };
  add("I/II", boundary_I_II(alpha), Region::I, Region::II);
  add("I/III", boundary_I_III(d), Region::I, Region::III);
  add("II/V", 1 + 1 / alpha, Region::II, Region::V);
  add("III/IV", 1.0, Region::III, Region::IV);
  return out;
}

}  // namespace rwrs

#pragma once

#include <string>
#include <vector>

namespace rwrs {

enum class Region { I, II, III, IV, V, out_of_scope, unmatched };

std::string region_name(Region r);

struct PhasePoint {
  double alpha = 0;
  double beta = 0;
  int dimension = 0;
};

struct ExponentResult {
  Region region = Region::out_of_scope;
  Region neighbour = Region::out_of_scope;  // other side when on_boundary
  bool on_boundary = false;
  bool needs_y0 = false;  // statement only holds for y above an explicit y0
  double zeta = 0;        // NaN outside the classified regions
  std::string formula;
};

// Boundaries belong to the region above them in beta, except beta = 1 between
// III and IV, which stays in III.
ExponentResult classify(const PhasePoint& p);

double region_zeta(Region r, const PhasePoint& p);
std::string region_formula(Region r);

struct IidExponent {
  double zeta = 0;
  std::string regime;  // "superlinear-collective", "gaussian", "one-big-jump", or "unmatched"
};

// -log P(sum_{k<=n} eta_k >= n^beta y) ~ n^zeta for i.i.d. eta with tail exponent a.
IidExponent iid_exponent(double a, double beta);

struct BoundaryCheck {
  std::string name;
  double beta = 0;
  double zeta_below = 0;
  double zeta_above = 0;
};

// I/II, I/III, II/V and III/IV boundaries, both formulas at the boundary.
std::vector<BoundaryCheck> boundary_continuity(int dimension, double alpha);

double boundary_I_II(double alpha);
double boundary_I_III(int dimension);

}  // namespace rwrs

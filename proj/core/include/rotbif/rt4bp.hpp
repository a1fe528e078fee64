#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotbif/classify.hpp"
#include "rotbif/degree.hpp"
#include "rotbif/sym_matrix.hpp"

namespace rotbif::rt4bp {

// Total mass 3*sqrt(3); with unit angular speed this puts the three primaries
// on the unit circle at mutual distance sqrt(3).
extern const double mass_sum;

Eigen::Vector2d primary(int i);   // i in {1, 2, 3}

class MassTriple {
 public:
  MassTriple(double m1, double m2, double m3);
  static MassTriple equal();
  static MassTriple normalized(double m1, double m2, double m3);

  double m(int i) const;   // 1-based, matching primary()
  Eigen::Vector2d center() const;

 private:
  std::array<double, 3> m_;
};

enum class Region { T, O1, O2, O3, D1, D2, D3 };
inline constexpr std::array<Region, 7> all_regions = {
    Region::T,  Region::O1, Region::O2, Region::O3,
    Region::D1, Region::D2, Region::D3};

std::string to_string(Region r);
std::optional<Region> region_from_string(const std::string& name);

// Positively oriented boundary of the region (the triangle, the sixty degree
// sectors behind each primary, the clipped lenses opposite each primary).
BoundaryCurve outline(Region r);
bool contains(Region r, const Eigen::Vector2d& q);
std::optional<Region> locate(const Eigen::Vector2d& q);

// Rotating-frame potential. The centrifugal part only sees the xy projection,
// so z enters through the gravitational distances alone.
double potential(const Eigen::Vector2d& q, const MassTriple& m);
double potential(const Eigen::Vector3d& q, const MassTriple& m);
std::pair<Eigen::Vector2d, SymMatrix> grad_hess(const Eigen::Vector2d& q, const MassTriple& m);
std::pair<Eigen::Vector3d, SymMatrix> grad_hess(const Eigen::Vector3d& q, const MassTriple& m);

struct LibrationPoint {
  Eigen::Vector2d position;
  Region region;
  double beta1;
  double beta2;
  double beta3;
  int brouwer_index;
  bool degenerate;          // planar Hessian determinant below 1e-8
  int gamma3_vertical;      // bifurcation number at the vertical period
  EquilibriumReport report;
};

struct RegionEmpty : std::runtime_error {
  explicit RegionEmpty(Region r);
  Region region;
};

// Newton runs seeded on a 0.02 grid over the seven regions, deduplicated at
// 1e-7 and verified to satisfy |grad V| < 1e-11 strictly inside a region.
std::vector<LibrationPoint> find_librations(const MassTriple& m);

struct RegionSummary {
  Region region;
  int degree;                        // winding of grad V on the shrunk outline
  int index_sum;                     // Brouwer indices of the points inside
  double eps;                        // inward offset used for the winding
  std::vector<std::size_t> points;   // indices into Analysis::points
};

struct Analysis {
  std::vector<LibrationPoint> points;
  std::array<RegionSummary, 7> regions;
  int nonzero_gamma3;   // points whose vertical-period bifurcation number is nonzero
};

// Locates the points and computes each region's degree on an inward offset
// chosen below the boundary clearance of the points (capped at 0.05), then
// checks the degree against the sum of point indices. Saddles can approach
// the triangle sides as the masses vary, so the offset cannot be fixed.
Analysis analyze(const MassTriple& m);

}  // namespace rotbif::rt4bp

#pragma once

#include <optional>
#include <vector>

namespace rotbif {

// Partition of the (beta1, beta2) plane driving every classification below. C is the
// union of the two coordinate axes (a zero eigenvalue of V''), R0 the open stability
// pocket beta1 + beta2 < max(-4, -2 - (beta1-beta2)^2/8) in the third quadrant, R1..R4
// the open quadrants (counterclockwise from the positive one, R3 restricted to the
// complement of the closure of R0). Membership snaps at 1e-12 absolute.
enum class RegionTag {
  R0,
  R1,
  R2,
  R3,
  R4,
  COffBoundary,   // on an axis, away from the closure of R0
  BoundaryOffC,   // on the parabolic arc of the R0 boundary, off the axes
  COnBoundary,    // axis tail of the R0 boundary: other eigenvalue <= -4
};

const char* to_string(RegionTag t);

RegionTag region(double beta1, double beta2);

struct Periods {
  std::optional<double> t_minus, t_plus;
};

// Candidate emanation periods T_-/T+ = 2 pi sqrt(2) (beta1+beta2+4 +/- 2 sqrt(2)
// sqrt(beta1+beta2+2+(beta1-beta2)^2/8))^(-1/2). Presence follows the region: neither
// on R0 and the axis tails, T_- alone on R2, R4 and the open axes, both on R1 and R3,
// and T_- == T_+ (exactly, as doubles) on the parabolic arc.
Periods T_periods(double beta1, double beta2);

struct ImagEigen {
  double imag;        // imaginary part; an entry with imag == 0 is the eigenvalue 0
  int multiplicity;
};

// Purely imaginary spectrum of the linearization, sorted by imaginary part. The
// spatial problem adds +/- sqrt(beta3) i to the planar list.
std::vector<ImagEigen> imaginary_spectrum(double beta1, double beta2,
                                          std::optional<double> beta3 = std::nullopt);

// Bifurcation numbers at period T. ib is the Brouwer index of the equilibrium; away
// from the axes it is redundant and must equal sign(beta1*beta2), which is enforced.
// Periods match a candidate when within 1e-9 relative; should T_- and T_+ collapse,
// the T_- row wins.
int gamma2(double beta1, double beta2, int ib, double T);
int gamma3(double beta1, double beta2, double beta3, int ib, double T);

struct BranchPrediction {
  double period;
  int gamma;
};

struct EquilibriumReport {
  double beta1 = 0.0, beta2 = 0.0;
  std::optional<double> beta3;
  RegionTag tag = RegionTag::R0;
  int brouwer_index = 0;
  std::optional<double> t_minus, t_plus, vertical_period;
  // Candidate periods carrying a nonzero bifurcation number, ascending. Every entry
  // is an asserted branch of periodic orbits emanating from the equilibrium.
  std::vector<BranchPrediction> branches;
  bool nonexistence = false;   // no periodic solutions at all near the equilibrium (planar R0)
  bool nonplanar = false;      // spatial branches necessarily leave the planar subspace
  bool conjectural = false;    // degenerate axis-tail case: planar existence only conjectured
  bool inconclusive = false;   // no nonzero bifurcation number, nothing asserted
};

EquilibriumReport emanation_report(double beta1, double beta2, std::optional<double> beta3,
                                   int ib);

}  // namespace rotbif

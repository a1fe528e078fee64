#include "rotbif/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rotbif/spectrum.hpp"

namespace rotbif {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double snap = 1e-12;   // absolute guard for axis / boundary membership

bool period_match(double t, std::optional<double> cand) {
  return cand && std::abs(t - *cand) <= 1e-9 * *cand;
}

void validate_index(double b1, double b2, RegionTag tag, int ib) {
  if (tag == RegionTag::COffBoundary || tag == RegionTag::COnBoundary) return;
  int expected = b1 * b2 > 0.0 ? 1 : -1;
  if (ib != expected)
    throw std::invalid_argument("Brouwer index contradicts sign(beta1*beta2) off the axes");
}
}  // namespace

const char* to_string(RegionTag t) {
  switch (t) {
    case RegionTag::R0: return "R0";
    case RegionTag::R1: return "R1";
    case RegionTag::R2: return "R2";
    case RegionTag::R3: return "R3";
    case RegionTag::R4: return "R4";
    case RegionTag::COffBoundary: return "C_off_boundary";
    case RegionTag::BoundaryOffC: return "boundary_off_C";
    case RegionTag::COnBoundary: return "C_on_boundary";
  }
  return "?";
}

RegionTag region(double beta1, double beta2) {
  if (std::isnan(beta1) || std::isnan(beta2))
    throw std::invalid_argument("region: beta is NaN");
  bool on1 = std::abs(beta1) <= snap;
  bool on2 = std::abs(beta2) <= snap;
  if (on1 || on2) {
    double other = on1 ? (on2 ? 0.0 : beta2) : beta1;
    return other <= -4.0 + snap ? RegionTag::COnBoundary : RegionTag::COffBoundary;
  }
  if (beta1 > 0.0 && beta2 > 0.0) return RegionTag::R1;
  if (beta1 < 0.0 && beta2 > 0.0) return RegionTag::R2;
  if (beta1 > 0.0 && beta2 < 0.0) return RegionTag::R4;
  double diff = beta1 - beta2;
  double gap = beta1 + beta2 - std::max(-4.0, -2.0 - diff * diff / 8.0);
  if (gap < -snap) return RegionTag::R0;
  if (gap > snap) return RegionTag::R3;
  return RegionTag::BoundaryOffC;
}

Periods T_periods(double beta1, double beta2) {
  RegionTag tag = region(beta1, beta2);
  double c1 = beta1 + beta2 + 4.0;
  double disc = beta1 + beta2 + 2.0 + (beta1 - beta2) * (beta1 - beta2) / 8.0;
  double root = std::sqrt(std::max(disc, 0.0));
  auto t_of = [&](double sign) {
    return two_pi * std::sqrt(2.0) / std::sqrt(c1 + sign * 2.0 * std::sqrt(2.0) * root);
  };
  switch (tag) {
    case RegionTag::R0:
    case RegionTag::COnBoundary:
      return {};
    case RegionTag::R2:
    case RegionTag::R4:
    case RegionTag::COffBoundary:
      return {t_of(1.0), std::nullopt};
    case RegionTag::BoundaryOffC: {
      double t = t_of(1.0);   // disc clamps to zero: the two periods coincide
      return {t, t};
    }
    case RegionTag::R1:
    case RegionTag::R3:
      return {t_of(1.0), t_of(-1.0)};
  }
  return {};
}

std::vector<ImagEigen> imaginary_spectrum(double beta1, double beta2,
                                          std::optional<double> beta3) {
  RegionTag tag = region(beta1, beta2);
  std::vector<ImagEigen> out;
  auto add = [&](double w, int mult) {
    for (auto& e : out) {
      if (std::abs(e.imag - w) <= 1e-9 * std::max(std::abs(w), 1.0)) {
        e.multiplicity += mult;
        return;
      }
    }
    out.push_back({w, mult});
  };

  if (tag == RegionTag::COffBoundary || tag == RegionTag::COnBoundary) {
    // Zero eigenvalue of multiplicity 2, or 4 at the two corner points where the
    // parabolic arc meets the axes.
    bool corner = std::abs(beta1 + beta2 + 4.0) <= snap;
    add(0.0, corner ? 4 : 2);
  }
  for (auto [w, mult] : planar_frequencies(beta1, beta2)) {
    add(w, mult);
    add(-w, mult);
  }
  if (beta3) {
    if (!(*beta3 > 0.0))
      throw std::invalid_argument("imaginary_spectrum: beta3 must be positive");
    double w = std::sqrt(*beta3);
    add(w, 1);
    add(-w, 1);
  }
  std::sort(out.begin(), out.end(),
            [](const ImagEigen& a, const ImagEigen& b) { return a.imag < b.imag; });
  return out;
}

int gamma2(double beta1, double beta2, int ib, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("gamma2: period must be positive");
  RegionTag tag = region(beta1, beta2);
  validate_index(beta1, beta2, tag, ib);
  Periods p = T_periods(beta1, beta2);
  switch (tag) {
    case RegionTag::R2:
    case RegionTag::R4:
      return period_match(T, p.t_minus) ? -1 : 0;
    case RegionTag::R1:
      return (period_match(T, p.t_minus) || period_match(T, p.t_plus)) ? 1 : 0;
    case RegionTag::R3:
      if (period_match(T, p.t_minus)) return 1;
      return period_match(T, p.t_plus) ? -1 : 0;
    case RegionTag::COffBoundary:
      return period_match(T, p.t_minus) ? ib : 0;
    default:
      // R0 and the axis tails carry no candidate period; on the parabolic arc the
      // one-sided indices agree, so the number vanishes.
      return 0;
  }
}

int gamma3(double beta1, double beta2, double beta3, int ib, double T) {
  if (!(beta3 > 0.0)) throw std::invalid_argument("gamma3: beta3 must be positive");
  int g2 = gamma2(beta1, beta2, ib, T);
  double tv = two_pi / std::sqrt(beta3);
  if (std::abs(T - tv) > 1e-9 * tv) return g2;
  switch (region(beta1, beta2)) {
    case RegionTag::R2:
    case RegionTag::R4:
      return g2 - 1;
    case RegionTag::COffBoundary:
    case RegionTag::COnBoundary:
      return g2 + ib;
    default:
      return g2 + 1;
  }
}

EquilibriumReport emanation_report(double beta1, double beta2, std::optional<double> beta3,
                                   int ib) {
  RegionTag tag = region(beta1, beta2);
  validate_index(beta1, beta2, tag, ib);
  if (beta3 && !(*beta3 > 0.0))
    throw std::invalid_argument("emanation_report: beta3 must be positive");

  EquilibriumReport rep;
  rep.beta1 = beta1;
  rep.beta2 = beta2;
  rep.beta3 = beta3;
  rep.tag = tag;
  rep.brouwer_index = ib;

  Periods p = T_periods(beta1, beta2);
  rep.t_minus = p.t_minus;
  rep.t_plus = p.t_plus;
  if (beta3) rep.vertical_period = two_pi / std::sqrt(*beta3);

  std::vector<double> candidates;
  auto push = [&](std::optional<double> t) {
    if (!t) return;
    for (double c : candidates)
      if (std::abs(c - *t) <= 1e-9 * c) return;
    candidates.push_back(*t);
  };
  push(rep.t_minus);
  push(rep.t_plus);
  push(rep.vertical_period);
  std::sort(candidates.begin(), candidates.end());

  for (double t : candidates) {
    int g = beta3 ? gamma3(beta1, beta2, *beta3, ib, t) : gamma2(beta1, beta2, ib, t);
    if (g != 0) rep.branches.push_back({t, g});
  }

  rep.nonexistence = !beta3 && tag == RegionTag::R0;
  rep.nonplanar = beta3 && (tag == RegionTag::R0 || tag == RegionTag::BoundaryOffC);
  rep.conjectural =
      tag == RegionTag::COnBoundary && std::abs(beta1 + beta2 + 4.0) > snap;
  rep.inconclusive = rep.branches.empty() && !rep.nonexistence && !rep.conjectural;
  return rep;
}

}  // namespace rotbif

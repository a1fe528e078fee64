#include "rotbif/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rotbif/classify.hpp"

namespace rotbif {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_period(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("period must be positive");
}

void check_jump(double t, double t_jump, const char* what) {
  if (std::abs(t - t_jump) <= 1e-9 * t_jump) throw std::domain_error(what);
}
}  // namespace

Eigen::MatrixXd alpha(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("alpha: dimension must be 2 or 3");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a(0, 1) = -1.0;
  a(1, 0) = 1.0;
  return a;
}

Eigen::MatrixXd symplectic_j(int n) {
  if (n < 1) throw std::invalid_argument("symplectic_j: dimension must be positive");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  return j;
}

HessianData HessianData::planar(const SymMatrix& vpp2) {
  if (vpp2.order() != 2) throw std::invalid_argument("HessianData::planar: order must be 2");
  return HessianData{2, vpp2};
}

HessianData HessianData::spatial(const SymMatrix& vpp3) {
  if (vpp3.order() != 3) throw std::invalid_argument("HessianData::spatial: order must be 3");
  double scale = vpp3.dense().norm();
  if (std::abs(vpp3(0, 2)) > 1e-10 * scale || std::abs(vpp3(1, 2)) > 1e-10 * scale)
    throw std::invalid_argument("HessianData::spatial: vertical direction does not decouple");
  if (!(vpp3(2, 2) > 0.0))
    throw std::invalid_argument("HessianData::spatial: d2V/dz2 must be positive");
  return HessianData{3, vpp3};
}

double HessianData::beta1() const {
  double mid = 0.5 * (vpp(0, 0) + vpp(1, 1));
  double rad = std::hypot(0.5 * (vpp(0, 0) - vpp(1, 1)), vpp(0, 1));
  return mid - rad;
}

double HessianData::beta2() const {
  double mid = 0.5 * (vpp(0, 0) + vpp(1, 1));
  double rad = std::hypot(0.5 * (vpp(0, 0) - vpp(1, 1)), vpp(0, 1));
  return mid + rad;
}

double HessianData::beta3() const {
  if (dim != 3) throw std::invalid_argument("HessianData::beta3: planar data");
  return vpp(2, 2);
}

SymMatrix build_A(const HessianData& h) {
  const int n = h.dim;
  Eigen::MatrixXd al = alpha(n);
  Eigen::MatrixXd w = h.vpp.dense() - al * al;
  Eigen::MatrixXd a(2 * n, 2 * n);
  a << Eigen::MatrixXd::Identity(n, n), al, al.transpose(), w;
  return SymMatrix::from_dense(a);
}

STMatrix build_ST(const HessianData& h, double T) {
  check_period(T);
  const int n = h.dim;
  Eigen::MatrixXd a = (T / two_pi) * build_A(h).dense();
  Eigen::MatrixXd j = symplectic_j(n);
  Eigen::MatrixXd s(4 * n, 4 * n);
  s << -a, -j, j, -a;
  return STMatrix{T, SymMatrix::from_dense(s)};
}

Polynomial p2_coeffs(double beta1, double beta2) {
  return Polynomial({1.0, 0.0, beta1 + beta2 + 4.0, 0.0, beta1 * beta2});
}

Polynomial p3_coeffs(double beta1, double beta2, double beta3) {
  if (!(beta3 > 0.0)) throw std::invalid_argument("p3_coeffs: beta3 must be positive");
  return Polynomial({1.0, 0.0, beta3}) * p2_coeffs(beta1, beta2);
}

Polynomial quartic_d_coeffs(double beta1, double beta2, double T) {
  check_period(T);
  double c1 = beta1 + beta2 + 4.0;
  double c0 = beta1 * beta2;
  double tau = T / two_pi;
  return Polynomial({1.0,
                     c1 * tau,
                     (c0 + 3.0 * c1 - 8.0) * tau * tau - 2.0,
                     2.0 * (c0 + c1 - 4.0) * tau * tau * tau - c1 * tau,
                     c0 * tau * tau * tau * tau - c1 * tau * tau + 1.0});
}

std::vector<std::pair<double, int>> planar_frequencies(double beta1, double beta2) {
  double c1 = beta1 + beta2 + 4.0;
  double c0 = beta1 * beta2;
  switch (region(beta1, beta2)) {
    case RegionTag::R0:
    case RegionTag::COnBoundary:
      return {};
    case RegionTag::R2:
    case RegionTag::R4:
    case RegionTag::COffBoundary: {
      double root = std::sqrt(std::max(c1 * c1 - 4.0 * c0, 0.0));
      return {{std::sqrt(0.5 * (c1 + root)), 1}};
    }
    case RegionTag::BoundaryOffC:
      return {{std::sqrt(0.5 * c1), 2}};
    case RegionTag::R1:
    case RegionTag::R3: {
      double root = std::sqrt(std::max(c1 * c1 - 4.0 * c0, 0.0));
      return {{std::sqrt(0.5 * (c1 + root)), 1}, {std::sqrt(0.5 * (c1 - root)), 1}};
    }
  }
  return {};
}

int morse_ST_planar(double beta1, double beta2, double T) {
  check_period(T);
  auto freqs = planar_frequencies(beta1, beta2);
  switch (region(beta1, beta2)) {
    case RegionTag::R0:
    case RegionTag::COnBoundary:
      return 4;
    case RegionTag::BoundaryOffC:
      check_jump(T, two_pi / freqs[0].first, "morse_ST_planar: index jump at T_-");
      return 4;
    case RegionTag::R2:
    case RegionTag::R4:
    case RegionTag::COffBoundary: {
      double tm = two_pi / freqs[0].first;
      check_jump(T, tm, "morse_ST_planar: index jump at T_-");
      return T < tm ? 4 : 6;
    }
    case RegionTag::R1:
    case RegionTag::R3: {
      double tm = two_pi / freqs[0].first;
      double tp = two_pi / freqs[1].first;
      check_jump(T, tm, "morse_ST_planar: index jump at T_-");
      check_jump(T, tp, "morse_ST_planar: index jump at T_+");
      if (T < tm) return 4;
      if (T < tp) return 6;
      return region(beta1, beta2) == RegionTag::R1 ? 8 : 4;
    }
  }
  return 4;
}

int morse_ST_spatial(double beta1, double beta2, double beta3, double T) {
  check_period(T);
  if (!(beta3 > 0.0)) throw std::invalid_argument("morse_ST_spatial: beta3 must be positive");
  double tv = two_pi / std::sqrt(beta3);
  check_jump(T, tv, "morse_ST_spatial: index jump at the vertical period");
  return morse_ST_planar(beta1, beta2, T) + (T < tv ? 2 : 4);
}

}  // namespace rotbif

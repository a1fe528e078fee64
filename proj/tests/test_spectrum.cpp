#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "rotbif/classify.hpp"
#include "rotbif/linalg.hpp"
#include "rotbif/spectrum.hpp"

using namespace rotbif;

namespace {
constexpr double pi = std::numbers::pi;

HessianData planar_betas(double b1, double b2) {
  return HessianData::planar(SymMatrix::diagonal(Eigen::Vector2d(b1, b2)));
}

HessianData spatial_betas(double b1, double b2, double b3) {
  return HessianData::spatial(SymMatrix::diagonal(Eigen::Vector3d(b1, b2, b3)));
}

// Rotate a diagonal planar block in-plane; betas must not move.
Eigen::Matrix2d rotated_block(double b1, double b2, double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r * Eigen::Vector2d(b1, b2).asDiagonal() * r.transpose();
}
}  // namespace

TEST_CASE("rotation generator and symplectic form") {
  Eigen::MatrixXd a2 = alpha(2);
  CHECK(a2(0, 1) == -1.0);
  CHECK(a2(1, 0) == 1.0);
  CHECK((a2 + a2.transpose()).norm() == 0.0);
  CHECK((a2 * a2 + Eigen::Matrix2d::Identity()).norm() == 0.0);

  Eigen::MatrixXd a3 = alpha(3);
  CHECK(a3.row(2).norm() == 0.0);
  CHECK(a3.col(2).norm() == 0.0);
  CHECK((a3.topLeftCorner(2, 2) - a2).norm() == 0.0);

  CHECK_THROWS_AS(alpha(1), std::invalid_argument);
  CHECK_THROWS_AS(alpha(4), std::invalid_argument);

  Eigen::MatrixXd j = symplectic_j(3);
  CHECK((j * j + Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);
  CHECK((j + j.transpose()).norm() == 0.0);
}

TEST_CASE("hessian data validation and eigenvalue extraction") {
  CHECK_THROWS_AS(HessianData::planar(SymMatrix::identity(3)), std::invalid_argument);
  CHECK_THROWS_AS(HessianData::spatial(SymMatrix::identity(2)), std::invalid_argument);

  SymMatrix coupled(3);
  coupled.set(0, 0, 1.0);
  coupled.set(1, 1, 2.0);
  coupled.set(2, 2, 3.0);
  coupled.set(0, 2, 0.5);
  CHECK_THROWS_AS(HessianData::spatial(coupled), std::invalid_argument);

  CHECK_THROWS_AS(spatial_betas(1.0, 1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(spatial_betas(1.0, 1.0, 0.0), std::invalid_argument);

  auto g = oracles::rng(411);
  for (int trial = 0; trial < 200; ++trial) {
    double b1 = oracles::uniform(g, -8.0, 4.0);
    double b2 = oracles::uniform(g, -8.0, 4.0);
    Eigen::Matrix2d block = rotated_block(b1, b2, oracles::uniform(g, 0.0, pi));
    HessianData h = HessianData::planar(SymMatrix::from_dense(block, 1e-9));
    Eigen::VectorXd ev = oracles::eigenvalues_sym(block);
    CHECK(h.beta1() == doctest::Approx(ev(0)).epsilon(1e-12));
    CHECK(h.beta2() == doctest::Approx(ev(1)).epsilon(1e-12));
    CHECK(h.beta1() <= h.beta2());
  }
  CHECK_THROWS_AS(planar_betas(1.0, 1.0).beta3(), std::invalid_argument);
}

TEST_CASE("build_A assembles the Hamiltonian Hessian") {
  SymMatrix a = build_A(planar_betas(3.0, -2.0));
  Eigen::MatrixXd expect(4, 4);
  expect << 1, 0, 0, -1,
            0, 1, 1, 0,
            0, 1, 4, 0,
           -1, 0, 0, -1;   // W'' = V'' + I in the planar case
  CHECK((a.dense() - expect).norm() == 0.0);

  SymMatrix as = build_A(spatial_betas(3.0, -2.0, 5.0));
  CHECK(as.order() == 6);
  CHECK(as(3, 3) == 4.0);
  CHECK(as(4, 4) == -1.0);
  CHECK(as(5, 5) == 5.0);   // no centrifugal shift in the vertical direction
  CHECK(as(0, 4) == -1.0);
  CHECK(as(2, 5) == 0.0);
}

TEST_CASE("build_ST layout and small-period limit") {
  HessianData h = planar_betas(1.0, 1.0);
  STMatrix st = build_ST(h, 2.0 * pi);
  CHECK(st.s.order() == 8);
  // At T = 2 pi the diagonal blocks are exactly -A.
  CHECK((st.s.dense().topLeftCorner(4, 4) + build_A(h).dense()).norm() == 0.0);
  CHECK((st.s.dense().topRightCorner(4, 4) + symplectic_j(2)).norm() == 0.0);
  CHECK((st.s.dense().bottomLeftCorner(4, 4) - symplectic_j(2)).norm() == 0.0);
  CHECK_THROWS_AS(build_ST(h, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_ST(h, -1.0), std::invalid_argument);

  // T -> 0: S_T approaches [[0,-J],[J,0]], all eigenvalues +-1, index 4.
  STMatrix tiny = build_ST(h, 1e-9);
  CHECK(morse_index(tiny.s) == 4);
  Eigen::VectorXd ev = oracles::eigenvalues_sym(tiny.s.dense());
  for (int i = 0; i < 8; ++i) CHECK(std::abs(std::abs(ev(i)) - 1.0) < 1e-8);
}

TEST_CASE("fixed characteristic coefficients") {
  CHECK(p2_coeffs(1.0, 1.0).coeffs() == std::vector<double>{1, 0, 6, 0, 1});
  CHECK(p3_coeffs(1.0, 1.0, 1.0).coeffs() == std::vector<double>{1, 0, 7, 0, 7, 0, 1});
  CHECK_THROWS_AS(p3_coeffs(1.0, 1.0, -1.0), std::invalid_argument);

  double T = 3.7;
  Polynomial d = quartic_d_coeffs(1.0, 1.0, T);
  CHECK(d.coeff(3) == doctest::Approx(3.0 * T / pi).epsilon(1e-14));
  CHECK(d.coeff(2) ==
        doctest::Approx(11.0 * T * T / (4.0 * pi * pi) - 2.0).epsilon(1e-14));
  CHECK(d.coeff(1) ==
        doctest::Approx(3.0 * T * T * T / (4.0 * pi * pi * pi) - 3.0 * T / pi).epsilon(1e-14));
  CHECK(d.coeff(0) ==
        doctest::Approx(std::pow(T, 4) / (16.0 * std::pow(pi, 4)) -
                        3.0 * T * T / (2.0 * pi * pi) + 1.0).epsilon(1e-14));
}

TEST_CASE("p2/p3 match the characteristic polynomial of J A") {
  auto g = oracles::rng(412);
  for (int trial = 0; trial < 200; ++trial) {
    double b1 = oracles::uniform(g, -8.0, 4.0);
    double b2 = oracles::uniform(g, -8.0, 4.0);
    Eigen::Matrix2d block = rotated_block(b1, b2, oracles::uniform(g, 0.0, pi));
    HessianData h = HessianData::planar(SymMatrix::from_dense(block, 1e-9));
    Eigen::MatrixXd ja = symplectic_j(2) * build_A(h).dense();
    CHECK(oracles::poly_close(p2_coeffs(h.beta1(), h.beta2()),
                              oracles::char_poly_nonsym(ja), 1e-8));

    double b3 = oracles::uniform(g, 0.1, 9.0);
    Eigen::Matrix3d v3 = Eigen::Matrix3d::Zero();
    v3.topLeftCorner(2, 2) = block;
    v3(2, 2) = b3;
    HessianData hs = HessianData::spatial(SymMatrix::from_dense(v3, 1e-9));
    Eigen::MatrixXd ja3 = symplectic_j(3) * build_A(hs).dense();
    CHECK(oracles::poly_close(p3_coeffs(hs.beta1(), hs.beta2(), b3),
                              oracles::char_poly_nonsym(ja3), 1e-8));
  }
}

TEST_CASE("p2 equals the 2x2 polynomial determinant of V'' + x^2 I - 2x alpha") {
  auto g = oracles::rng(413);
  for (int trial = 0; trial < 300; ++trial) {
    double b1 = oracles::uniform(g, -8.0, 4.0);
    double b2 = oracles::uniform(g, -8.0, 4.0);
    Eigen::Matrix2d v = rotated_block(b1, b2, oracles::uniform(g, 0.0, pi));
    // Entry (i,j) of V'' + x^2 I - 2x alpha as a quadratic in x.
    auto entry = [&](int i, int j) {
      return Polynomial({i == j ? 1.0 : 0.0, -2.0 * alpha(2)(i, j), v(i, j)});
    };
    Polynomial det = entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0);
    HessianData h = HessianData::planar(SymMatrix::from_dense(v, 1e-9));
    CHECK(oracles::poly_close(det, p2_coeffs(h.beta1(), h.beta2()), 1e-10));
  }
}

TEST_CASE("det(S_T - x I) is the square of the quartic") {
  auto g = oracles::rng(414);
  for (int trial = 0; trial < 300; ++trial) {
    double b1 = oracles::uniform(g, -8.0, 4.0);
    double b2 = oracles::uniform(g, -8.0, 4.0);
    double T = oracles::uniform(g, 0.2, 20.0);
    Polynomial full = char_poly(build_ST(planar_betas(b1, b2), T).s);
    Polynomial q = quartic_d_coeffs(b1, b2, T);
    CHECK(oracles::poly_close(full, q * q, 1e-9));
  }
}

TEST_CASE("spatial det(S_T - x I) factors through the planar one") {
  auto g = oracles::rng(415);
  for (int trial = 0; trial < 200; ++trial) {
    double b1 = oracles::uniform(g, -8.0, 4.0);
    double b2 = oracles::uniform(g, -8.0, 4.0);
    double b3 = oracles::uniform(g, 0.1, 9.0);
    double T = oracles::uniform(g, 0.2, 20.0);
    double tau = T / (2.0 * pi);
    Polynomial spatial = char_poly(build_ST(spatial_betas(b1, b2, b3), T).s);
    Polynomial planar = char_poly(build_ST(planar_betas(b1, b2), T).s);
    Polynomial vertical({1.0, (b3 + 1.0) * tau, b3 * tau * tau - 1.0});
    CHECK(oracles::poly_close(spatial, planar * (vertical * vertical), 1e-8));
  }
}

TEST_CASE("planar frequencies match the quartic roots") {
  auto g = oracles::rng(416);
  for (int trial = 0; trial < 300; ++trial) {
    double b1 = oracles::uniform(g, -8.0, 4.0);
    double b2 = oracles::uniform(g, -8.0, 4.0);
    Polynomial p2 = p2_coeffs(b1, b2);
    int total = 0;
    for (auto [w, mult] : planar_frequencies(b1, b2)) {
      CHECK(w > 0.0);
      CHECK(std::abs(p2(std::complex<double>(0.0, w))) < 1e-8 * std::max(1.0, b1 * b2));
      total += mult;
    }
    CHECK(total <= 2);
  }
  CHECK(planar_frequencies(-4.0, -4.0).empty());
  CHECK(planar_frequencies(0.0, -5.0).empty());
  auto fr = planar_frequencies(1.0, 1.0);
  REQUIRE(fr.size() == 2);
  CHECK(fr[0].first == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-14));
  CHECK(fr[1].first == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("morse table, planar fixed cases") {
  const double tm11 = 2.0 * pi / (1.0 + std::sqrt(2.0));     // 2.602580569137...
  const double tp11 = 2.0 * pi / (std::sqrt(2.0) - 1.0);     // 15.168951183496...
  CHECK(morse_ST_planar(1.0, 1.0, 0.5) == 4);
  CHECK(morse_ST_planar(1.0, 1.0, 5.0) == 6);
  CHECK(morse_ST_planar(1.0, 1.0, 20.0) == 8);
  CHECK_THROWS_AS(morse_ST_planar(1.0, 1.0, tm11), std::domain_error);
  CHECK_THROWS_AS(morse_ST_planar(1.0, 1.0, tp11), std::domain_error);

  CHECK(morse_ST_planar(-4.0, -4.0, 0.7) == 4);      // deep stability pocket
  CHECK(morse_ST_planar(-4.0, -4.0, 30.0) == 4);
  CHECK(morse_ST_planar(0.0, -5.0, 12.0) == 4);      // axis tail
  CHECK(morse_ST_planar(0.0, -4.0, 12.0) == 4);      // corner

  // Parabolic arc: constant except the jump point itself.
  CHECK(morse_ST_planar(-1.0, -1.0, 1.0) == 4);
  CHECK(morse_ST_planar(-1.0, -1.0, 20.0) == 4);
  CHECK_THROWS_AS(morse_ST_planar(-1.0, -1.0, 2.0 * pi), std::domain_error);

  // Genuine third-quadrant point: index returns to 4 beyond T_+.
  Periods p = T_periods(-0.5, -0.5);
  CHECK(morse_ST_planar(-0.5, -0.5, 1.0) == 4);
  CHECK(morse_ST_planar(-0.5, -0.5, 0.5 * (*p.t_minus + *p.t_plus)) == 6);
  CHECK(morse_ST_planar(-0.5, -0.5, 100.0) == 4);

  // Mixed-sign quadrants and the open axes gain one crossing.
  CHECK(morse_ST_planar(-1.0, 2.0, 1.0) == 4);
  CHECK(morse_ST_planar(-1.0, 2.0, 10.0) == 6);
  CHECK(morse_ST_planar(1.0, 0.0, 1.0) == 4);
  CHECK(morse_ST_planar(1.0, 0.0, 5.0) == 6);
}

TEST_CASE("morse table, spatial fixed cases") {
  CHECK(morse_ST_spatial(1.0, 1.0, 1.0, 1.0) == 6);
  CHECK(morse_ST_spatial(1.0, 1.0, 1.0, 20.0) == 12);
  double b3 = 3.0 * std::sqrt(3.0);
  CHECK(morse_ST_spatial(-4.0, -4.0, b3, 1.0) == 6);
  CHECK(morse_ST_spatial(-4.0, -4.0, b3, 10.0) == 8);
  CHECK_THROWS_AS(morse_ST_spatial(-4.0, -4.0, b3, 2.0 * pi / std::sqrt(b3)),
                  std::domain_error);
  CHECK_THROWS_AS(morse_ST_spatial(1.0, 1.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("morse table agrees with the counting route on a grid") {
  int compared = 0;
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 25; ++j) {
      double b1 = -8.0 + 12.0 * i / 24.0;
      double b2 = -8.0 + 12.0 * j / 24.0;
      HessianData h = planar_betas(b1, b2);
      for (double T : {0.4, 1.1, 2.3, 3.4, 5.9, 8.2, 13.0, 19.0}) {
        int table, counted;
        try {
          table = morse_ST_planar(b1, b2, T);
          counted = morse_index(build_ST(h, T).s);
        } catch (const std::domain_error&) {
          continue;   // within a guard band of a crossing on either route
        }
        CHECK(table == counted);
        CHECK(counted % 2 == 0);
        ++compared;
      }
    }
  }
  CHECK(compared > 4000);
}

TEST_CASE("spatial morse table agrees with the counting route on a grid") {
  int compared = 0;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      double b1 = -8.0 + 12.0 * i / 11.0;
      double b2 = -8.0 + 12.0 * j / 11.0;
      for (double b3 : {0.6, 3.0}) {
        HessianData h = spatial_betas(b1, b2, b3);
        for (double T : {0.9, 4.1, 11.0}) {
          int table, counted;
          try {
            table = morse_ST_spatial(b1, b2, b3, T);
            counted = morse_index(build_ST(h, T).s);
          } catch (const std::domain_error&) {
            continue;
          }
          CHECK(table == counted);
          ++compared;
        }
      }
    }
  }
  CHECK(compared > 600);
}

TEST_CASE("S_T is singular exactly when 2 pi / T is a frequency") {
  auto g = oracles::rng(417);
  for (int trial = 0; trial < 200; ++trial) {
    double b1 = oracles::uniform(g, -8.0, 4.0);
    double b2 = oracles::uniform(g, -8.0, 4.0);
    auto freqs = planar_frequencies(b1, b2);
    // On every crossing the determinant collapses.
    for (auto [w, mult] : freqs) {
      Polynomial q = quartic_d_coeffs(b1, b2, 2.0 * pi / w);
      double scale = 1.0;
      for (double c : q.coeffs()) scale = std::max(scale, std::abs(c));
      CHECK(std::abs(q(0.0)) <= 1e-10 * scale);
    }
    // Away from the crossings it stays bounded below. (Inside the stability pocket
    // the minimum can still graze zero near the pocket boundary, so only regions
    // with genuine crossings are sampled.)
    if (freqs.empty() || std::min(std::abs(b1), std::abs(b2)) < 0.05) continue;
    double T = oracles::uniform(g, 0.2, 20.0);
    bool clear = true;
    for (auto [w, mult] : freqs)
      if (std::abs(T - 2.0 * pi / w) < 0.05 * (2.0 * pi / w)) clear = false;
    if (!clear) continue;
    Polynomial q = quartic_d_coeffs(b1, b2, T);
    double scale = 1.0;
    for (double c : q.coeffs()) scale = std::max(scale, std::abs(c));
    CHECK(std::abs(q(0.0)) > 1e-7 * scale);
  }
  Periods p = T_periods(1.0, 1.0);
  CHECK(std::abs(char_poly(build_ST(planar_betas(1.0, 1.0), *p.t_minus).s)(0.0)) < 1e-10);
}

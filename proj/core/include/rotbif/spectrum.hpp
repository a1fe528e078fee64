#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rotbif/polynomial.hpp"
#include "rotbif/sym_matrix.hpp"

namespace rotbif {

// Rotation generator: alpha(2) = [[0,-1],[1,0]], alpha(3) embeds it with a zero third
// row and column. Other dimensions are rejected.
Eigen::MatrixXd alpha(int n);

// Standard symplectic form on R^{2n}: [[0,-I],[I,0]].
Eigen::MatrixXd symplectic_j(int n);

// Hessian of the potential at an equilibrium. beta1 <= beta2 are the eigenvalues of
// the planar block; the spatial case must decouple (vanishing (x,z), (y,z) entries)
// and carry beta3 = d^2V/dz^2 > 0.
struct HessianData {
  int dim;
  SymMatrix vpp;

  static HessianData planar(const SymMatrix& vpp2);
  static HessianData spatial(const SymMatrix& vpp3);

  double beta1() const;
  double beta2() const;
  double beta3() const;   // spatial only
};

// Hessian of the Hamiltonian at the equilibrium state: [[I, alpha], [-alpha, W'']]
// with W'' = V'' - alpha^2.
SymMatrix build_A(const HessianData& h);

struct STMatrix {
  double T;
  SymMatrix s;
};

// S_T = [[-(T/2pi) A, -J], [J, -(T/2pi) A]], the symmetric matrix whose negative
// eigenvalue count drives the bifurcation numbers.
STMatrix build_ST(const HessianData& h, double T);

// Characteristic polynomial of the planar linearization, det(V'' + x^2 I - 2x alpha)
// = x^4 + (beta1+beta2+4) x^2 + beta1*beta2, and its spatial extension (x^2+beta3)*p2.
Polynomial p2_coeffs(double beta1, double beta2);
Polynomial p3_coeffs(double beta1, double beta2, double beta3);

// The real quartic p_T with det(S_T - x I) = p_T(x)^2 in the planar case.
Polynomial quartic_d_coeffs(double beta1, double beta2, double T);

// Frequencies w > 0 of purely imaginary eigenvalues +/- i w of the planar
// linearization, i.e. negated negative roots of y^2 + (beta1+beta2+4) y + beta1*beta2
// in y = -w^2, with multiplicities, sorted decreasing.
std::vector<std::pair<double, int>> planar_frequencies(double beta1, double beta2);

// Negative eigenvalue count of S_T by region case analysis. Periods within 1e-9
// relative of an index jump (T_-, T_+, or 2pi/sqrt(beta3)) throw std::domain_error.
int morse_ST_planar(double beta1, double beta2, double T);
int morse_ST_spatial(double beta1, double beta2, double beta3, double T);

}  // namespace rotbif

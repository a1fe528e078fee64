#include "rotbif/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rotbif {

Polynomial char_poly(const SymMatrix& m) {
  const int n = m.order();
  Eigen::MatrixXd a = m.dense();

  for (int k = 0; k + 2 < n; ++k) {
    Eigen::VectorXd x = a.block(k + 1, k, n - k - 1, 1);
    double nx = x.norm();
    if (nx == 0.0) continue;
    Eigen::VectorXd v = x;
    v(0) += (x(0) >= 0.0 ? nx : -nx);
    double nv = v.norm();
    if (nv == 0.0) continue;
    v /= nv;
    // Similarity transform by P = I - 2 v v^T acting on rows/columns k+1..n-1.
    a.bottomRows(n - k - 1) -= 2.0 * v * (v.transpose() * a.bottomRows(n - k - 1));
    a.rightCols(n - k - 1) -= 2.0 * (a.rightCols(n - k - 1) * v) * v.transpose();
  }

  // det(T - x I) for the tridiagonal result, by the recurrence
  // p_k = (a_kk - x) p_{k-1} - b_{k-1}^2 p_{k-2}.
  Polynomial prev({1.0});
  Polynomial cur({-1.0, a(0, 0)});
  for (int k = 1; k < n; ++k) {
    double b = a(k, k - 1);
    Polynomial next = Polynomial({-1.0, a(k, k)}) * cur - prev * (b * b);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

int de_gua_positive_count(const Polynomial& p) {
  if (p.is_zero())
    throw std::invalid_argument("de_gua_positive_count: zero polynomial has no root count");
  double scale = 0.0;
  for (double c : p.coeffs()) scale = std::max(scale, std::abs(c));
  int count = 0;
  double last = 0.0;
  for (double c : p.coeffs()) {
    if (std::abs(c) <= 1e-12 * scale) continue;
    if (last != 0.0 && (c > 0.0) != (last > 0.0)) ++count;
    last = c;
  }
  return count;
}

int morse_index(const SymMatrix& m) {
  Polynomial p = char_poly(m);
  double det = p(0.0);
  // |det| never exceeds the product of row norms, so this ratio is a
  // scale-invariant distance from singularity.
  double hadamard = 1.0;
  for (int i = 0; i < m.order(); ++i) hadamard *= m.dense().row(i).norm();
  if (std::abs(det) <= 1e-10 * hadamard)
    throw std::domain_error("morse_index: singular matrix, index undefined at a crossing");
  // Positive roots of det(M + x I) are the negated negative eigenvalues.
  return de_gua_positive_count(p.reflect());
}

std::complex<double> block_det_reduce(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                      const ComplexMatrix& b3, const ComplexMatrix& b4) {
  const auto n = b1.rows();
  if (b1.cols() != n || b2.rows() != n || b2.cols() != n || b3.rows() != n || b3.cols() != n ||
      b4.rows() != n || b4.cols() != n)
    throw std::invalid_argument("block_det_reduce: blocks must be square and equally sized");
  double scale = std::max(1.0, b1.norm() * b2.norm());
  if ((b1 * b2 - b2 * b1).norm() > 1e-10 * scale)
    throw std::invalid_argument("block_det_reduce: top blocks do not commute");
  return (b4 * b1 - b3 * b2).determinant();
}

}  // namespace rotbif

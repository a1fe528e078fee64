#include "rotbif/sym_matrix.hpp"

#include <stdexcept>

namespace rotbif {

SymMatrix::SymMatrix(int order) {
  if (order < 1) throw std::invalid_argument("SymMatrix: order must be positive");
  m_ = Eigen::MatrixXd::Zero(order, order);
}

SymMatrix SymMatrix::identity(int order) {
  SymMatrix m(order);
  m.m_.setIdentity();
  return m;
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  SymMatrix m(static_cast<int>(d.size()));
  m.m_.diagonal() = d;
  return m;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: not square");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("SymMatrix: input is not symmetric");
  SymMatrix s(static_cast<int>(m.rows()));
  s.m_ = 0.5 * (m + m.transpose());
  return s;
}

void SymMatrix::set(int i, int j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

}  // namespace rotbif

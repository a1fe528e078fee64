#pragma once

#include <Eigen/Dense>

namespace rotbif {

// Dense real symmetric matrix. All writes go through set(), which mirrors (i,j) and
// (j,i), so the symmetry invariant cannot drift.
class SymMatrix {
 public:
  explicit SymMatrix(int order);
  static SymMatrix identity(int order);
  static SymMatrix diagonal(const Eigen::VectorXd& d);
  // Rejects matrices whose asymmetry exceeds tol relative to the largest entry.
  static SymMatrix from_dense(const Eigen::MatrixXd& m, double tol = 1e-12);

  int order() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double v);

  const Eigen::MatrixXd& dense() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// Dense complex matrix, used for block-determinant reductions of structured matrices.
using ComplexMatrix = Eigen::MatrixXcd;

}  // namespace rotbif

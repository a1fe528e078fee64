#pragma once

#include <complex>
#include <vector>

namespace rotbif {

// Real polynomial, coefficients stored highest degree first. The zero polynomial is the
// empty coefficient list and reports degree -1; otherwise the leading coefficient is
// nonzero (exactly-zero leading entries are trimmed on construction).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  // prod_i (x - r_i), scaled by `leading`.
  static Polynomial from_roots(const std::vector<double>& roots, double leading = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  // Coefficient of x^k; zero when k exceeds the degree.
  double coeff(int k) const;
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double x) const;
  std::complex<double> operator()(const std::complex<double>& x) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(double s) const;

  // p(-x)
  Polynomial reflect() const;

  bool operator==(const Polynomial& rhs) const { return c_ == rhs.c_; }

 private:
  std::vector<double> c_;
};

}  // namespace rotbif

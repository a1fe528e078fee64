#include "rotbif/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace rotbif {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  auto lead = std::find_if(c_.begin(), c_.end(), [](double c) { return c != 0.0; });
  c_.erase(c_.begin(), lead);
}

Polynomial Polynomial::from_roots(const std::vector<double>& roots, double leading) {
  if (leading == 0.0) return Polynomial();
  std::vector<double> c{leading};
  for (double r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
  }
  return Polynomial(std::move(c));
}

double Polynomial::coeff(int k) const {
  if (k < 0) throw std::invalid_argument("Polynomial::coeff: negative power");
  int idx = degree() - k;
  return idx < 0 ? 0.0 : c_[static_cast<std::size_t>(idx)];
}

double Polynomial::operator()(double x) const {
  double v = 0.0;
  for (double c : c_) v = v * x + c;
  return v;
}

std::complex<double> Polynomial::operator()(const std::complex<double>& x) const {
  std::complex<double> v = 0.0;
  for (double c : c_) v = v * x + c;
  return v;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::size_t n = std::max(c_.size(), rhs.c_.size());
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) c[n - c_.size() + i] += c_[i];
  for (std::size_t i = 0; i < rhs.c_.size(); ++i) c[n - rhs.c_.size() + i] += rhs.c_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const { return *this + rhs * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return Polynomial();
  std::vector<double> c(c_.size() + rhs.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < rhs.c_.size(); ++j) c[i + j] += c_[i] * rhs.c_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c(c_);
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::reflect() const {
  std::vector<double> c(c_);
  // x^k keeps its sign for even k; k counts down from the degree.
  for (std::size_t i = 0; i < c.size(); ++i)
    if ((degree() - static_cast<int>(i)) % 2 != 0) c[i] = -c[i];
  return Polynomial(std::move(c));
}

}  // namespace rotbif

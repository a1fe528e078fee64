#pragma once

#include <complex>

#include "rotbif/polynomial.hpp"
#include "rotbif/sym_matrix.hpp"

namespace rotbif {

// det(M - x I), leading coefficient (-1)^n. Householder reduction to tridiagonal form
// followed by the leading-principal-minor recurrence; no divisions by data-dependent
// pivots, stable for the small orders used here.
Polynomial char_poly(const SymMatrix& m);

// Positive real roots, counted with multiplicity, of a polynomial known to have only
// real roots: the number of sign changes in the coefficient sequence after deleting
// zeros. Coefficients with |c| <= 1e-12 * max|c| count as zero. The zero polynomial
// has no well-defined root count and throws std::invalid_argument.
int de_gua_positive_count(const Polynomial& p);

// Number of negative eigenvalues of a nonsingular symmetric matrix, obtained as the
// positive-root count of det(M + x I). Throws std::domain_error on singular input
// (|det M| <= 1e-10 * ||M||_F^n): the index is about to jump there.
int morse_index(const SymMatrix& m);

// det [[b1, b2], [b3, b4]] collapsed to det(b4*b1 - b3*b2), valid when b1 and b2
// commute. Commutation is checked (Frobenius, 1e-10 relative); violations throw
// std::invalid_argument.
std::complex<double> block_det_reduce(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                      const ComplexMatrix& b3, const ComplexMatrix& b4);

}  // namespace rotbif

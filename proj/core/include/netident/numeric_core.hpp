#pragma once

#include <complex>

#include <Eigen/Core>

#include "netident/types.hpp"

namespace netident {

class Realization;

struct RankPolicy {
  // Singular values at or below relative_tolerance * max(sigma_max, scale)
  // count as zero.
  double relative_tolerance = 1e-9;
};

// T = (I - G)^{-1}. Throws NumericError when I - G is singular or its
// condition number exceeds condition_bound.
ComplexMatrix closed_loop(const ComplexMatrix& g, double condition_bound = 1e8);
ComplexMatrix closed_loop(const Realization& r);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

Eigen::VectorXd singular_values(const ComplexMatrix& m);
double condition_number(const ComplexMatrix& m);
double spectral_norm(const ComplexMatrix& m);

// `scale` is a norm bound of the operator m was cut from. It keeps an
// all-roundoff matrix (structurally zero) from measuring itself against its
// own noise.
int numerical_rank(const ComplexMatrix& m, const RankPolicy& policy = {}, double scale = 0.0);

using ExtendedComplex = std::complex<long double>;
using ExtendedComplexMatrix = Eigen::Matrix<ExtendedComplex, Eigen::Dynamic, Eigen::Dynamic>;

// Determinant by partially pivoted LU carried out in extended precision, so
// that the determinant of a nearly singular matrix keeps its absolute
// accuracy. Throws NumericError on non-square input.
Complex determinant(const ComplexMatrix& m);
ExtendedComplex determinant_extended(const ComplexMatrix& m);
ExtendedComplex determinant_extended(const ExtendedComplexMatrix& m);

// Column-major vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace netident

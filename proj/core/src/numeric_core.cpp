#include "netident/numeric_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "netident/error.hpp"
#include "netident/network_model.hpp"

namespace netident {

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite entries");
}

}  // namespace

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const ComplexMatrix& m) {
  const auto sv = singular_values(m);
  return sv.size() == 0 ? 0.0 : sv(0);
}

double condition_number(const ComplexMatrix& m) {
  const auto sv = singular_values(m);
  if (sv.size() == 0) return 1.0;
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

ComplexMatrix closed_loop(const ComplexMatrix& g, double condition_bound) {
  if (g.rows() != g.cols()) throw NumericError("closed_loop: G must be square");
  require_finite(g, "closed_loop");
  const Eigen::Index n = g.rows();
  const ComplexMatrix a = ComplexMatrix::Identity(n, n) - g;
  const double cond = condition_number(a);
  if (!(cond <= condition_bound)) {
    throw NumericError("closed_loop: I - G is singular or ill-conditioned (cond = " +
                       std::to_string(cond) + ")");
  }
  const Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  ComplexMatrix t = lu.solve(identity);
  // One step of refinement keeps the residual near working precision for
  // moderately conditioned I - G.
  t += lu.solve(identity - a * t);
  return t;
}

ComplexMatrix closed_loop(const Realization& r) {
  return closed_loop(r.network_matrix(), r.condition_bound());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

int numerical_rank(const ComplexMatrix& m, const RankPolicy& policy, double scale) {
  const auto sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double threshold = policy.relative_tolerance * std::max(sv(0), scale);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > threshold) ++rank;
  }
  return rank;
}

ExtendedComplex determinant_extended(const ComplexMatrix& m) {
  require_finite(m, "determinant");
  return determinant_extended(ExtendedComplexMatrix(m.cast<ExtendedComplex>()));
}

ExtendedComplex determinant_extended(const ExtendedComplexMatrix& m) {
  if (m.rows() != m.cols()) throw NumericError("determinant: matrix is not square");
  if (!m.allFinite()) throw NumericError("determinant: non-finite entry");
  if (m.rows() == 0) return ExtendedComplex(1.0L, 0.0L);
  return Eigen::PartialPivLU<ExtendedComplexMatrix>(m).determinant();
}

Complex determinant(const ComplexMatrix& m) {
  const ExtendedComplex det = determinant_extended(m);
  return Complex(static_cast<double>(det.real()), static_cast<double>(det.imag()));
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

}  // namespace netident

#include <gtest/gtest.h>

#include <Eigen/QR>
#include <algorithm>
#include <numeric>
#include <random>

#include "netident/error.hpp"
#include "netident/numeric_core.hpp"

namespace {

using namespace netident;

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// Sign of a permutation from its cycle decomposition.
int cycle_sign(const std::vector<int>& p) {
  std::vector<char> seen(p.size(), 0);
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t length = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = 1;
      ++length;
    }
    if (length % 2 == 0) sign = -sign;
  }
  return sign;
}

Complex leibniz(const ComplexMatrix& m) {
  std::vector<int> p(static_cast<std::size_t>(m.rows()));
  std::iota(p.begin(), p.end(), 0);
  Complex sum = 0.0;
  do {
    Complex term = static_cast<double>(cycle_sign(p));
    for (std::size_t i = 0; i < p.size(); ++i) term *= m(static_cast<Eigen::Index>(i), p[i]);
    sum += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

TEST(Kron, MatchesEntrywiseDefinition) {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_matrix(2, 3, rng);
  const ComplexMatrix b = random_matrix(4, 2, rng);
  const ComplexMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 8);
  ASSERT_EQ(k.cols(), 6);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      for (Eigen::Index p = 0; p < 4; ++p)
        for (Eigen::Index q = 0; q < 2; ++q) EXPECT_EQ(k(i * 4 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(Kron, VecIdentity) {
  // vec(A X B) = (B^T kron A) vec(X)
  std::mt19937_64 rng(2);
  const ComplexMatrix a = random_matrix(3, 4, rng);
  const ComplexMatrix x = random_matrix(4, 5, rng);
  const ComplexMatrix b = random_matrix(5, 2, rng);
  const ComplexVector lhs = vec(a * x * b);
  const ComplexVector rhs = kron(b.transpose(), a) * vec(x);
  EXPECT_LE((lhs - rhs).norm(), 1e-12 * lhs.norm());
}

TEST(Vec, ColumnMajorRoundTrip) {
  ComplexMatrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const ComplexVector v = vec(m);
  EXPECT_EQ(v(1), Complex(3.0));
  EXPECT_EQ(v(2), Complex(2.0));
  EXPECT_EQ(unvec(v, 2, 2), m);
  EXPECT_THROW(unvec(v, 3, 1), std::invalid_argument);
}

TEST(Determinant, MatchesLeibnizOnRandom4x4) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_matrix(4, 4, rng);
    const Complex expected = leibniz(m);
    EXPECT_LE(std::abs(determinant(m) - expected), 1e-10 * std::abs(expected));
  }
}

TEST(Determinant, IsMultiplicative) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(5, 5, rng);
    const ComplexMatrix b = random_matrix(5, 5, rng);
    const Complex product = determinant(a) * determinant(b);
    EXPECT_LE(std::abs(determinant(a * b) - product), 1e-8 * std::abs(product));
  }
}

TEST(Determinant, EdgeCases) {
  EXPECT_EQ(determinant(ComplexMatrix(0, 0)), Complex(1.0));
  EXPECT_THROW(determinant(ComplexMatrix::Zero(2, 3)), NumericError);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  EXPECT_THROW(determinant(bad), NumericError);
  ComplexMatrix repeated(2, 2);
  repeated << 1.0, 1.0, 2.0, 2.0;
  EXPECT_EQ(determinant(repeated), Complex(0.0));
}

TEST(ClosedLoop, ResidualIsSmall) {
  std::mt19937_64 rng(5);
  for (int n : {1, 3, 8, 12}) {
    const ComplexMatrix g = 0.3 * random_matrix(n, n, rng) / std::sqrt(double(n));
    const ComplexMatrix t = closed_loop(g);
    const ComplexMatrix residual = (ComplexMatrix::Identity(n, n) - g) * t - ComplexMatrix::Identity(n, n);
    EXPECT_LE(residual.norm(), n * 1e-10);
  }
}

TEST(ClosedLoop, RejectsSingularAndIllConditioned) {
  EXPECT_THROW(closed_loop(ComplexMatrix::Identity(3, 3)), NumericError);
  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 0) = 1.0 - 1e-12;
  EXPECT_THROW(closed_loop(g), NumericError);
  EXPECT_NO_THROW(closed_loop(g, std::numeric_limits<double>::infinity()));
  EXPECT_THROW(closed_loop(ComplexMatrix::Zero(2, 3)), NumericError);
}

TEST(NumericalRank, LowRankProducts) {
  std::mt19937_64 rng(6);
  for (int r = 0; r <= 5; ++r) {
    const ComplexMatrix m = random_matrix(6, r, rng) * random_matrix(r, 7, rng);
    EXPECT_EQ(numerical_rank(m), r);
  }
  EXPECT_EQ(numerical_rank(ComplexMatrix(0, 3)), 0);
}

TEST(NumericalRank, InvariantUnderPermutationAndUnitarySandwich) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int r = 1 + trial % 5;
    const ComplexMatrix m = random_matrix(6, r, rng) * random_matrix(r, 6, rng);
    const int rank = numerical_rank(m);

    Eigen::PermutationMatrix<Eigen::Dynamic> rows(6), cols(6);
    rows.setIdentity();
    cols.setIdentity();
    std::shuffle(rows.indices().data(), rows.indices().data() + 6, rng);
    std::shuffle(cols.indices().data(), cols.indices().data() + 6, rng);
    EXPECT_EQ(numerical_rank(rows * m * cols), rank);

    const ComplexMatrix u = random_unitary(6, rng);
    const ComplexMatrix v = random_unitary(6, rng);
    EXPECT_EQ(numerical_rank(u * m * v), rank);
  }
}

TEST(NumericalRank, ScaleSuppressesRoundoffOnlyMatrices) {
  ComplexMatrix noise = ComplexMatrix::Zero(3, 2);
  noise(1, 0) = 1e-18;
  EXPECT_EQ(numerical_rank(noise), 1);
  EXPECT_EQ(numerical_rank(noise, {}, 1.0), 0);
}

TEST(SingularValues, RejectNonFinite) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(singular_values(m), NumericError);
  EXPECT_DOUBLE_EQ(condition_number(ComplexMatrix(0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(spectral_norm(2.0 * ComplexMatrix::Identity(3, 3)), 2.0);
}

}  // namespace

#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace netident {

using NodeId = int;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Seeds are plain 64-bit values; per-call streams are derived with derive_seed().
using Seed = std::uint64_t;

}  // namespace netident

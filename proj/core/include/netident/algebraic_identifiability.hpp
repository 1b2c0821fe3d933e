#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netident/network_model.hpp"
#include "netident/numeric_core.hpp"
#include "netident/types.hpp"

namespace netident {

// The n^2 x |E^Delta| binary matrix selecting the unknown entries of vec(G).
// Column k marks unknown edge k (canonical order); entry (i, j) of an n x n
// matrix maps to row j * n + i.
class EdgeSelector {
 public:
  explicit EdgeSelector(const NetworkStructure& s);

  std::size_t size() const { return rows_.size(); }
  int node_count() const { return n_; }
  Eigen::Index row_of(std::size_t column) const { return rows_[column]; }

  ComplexMatrix matrix() const;
  // vec(Delta) = I_{G^Delta} * delta.
  ComplexVector expand(const ComplexVector& delta) const;
  // Delta = unvec(I_{G^Delta} * delta), n x n.
  ComplexMatrix delta_matrix(const ComplexVector& delta) const;

 private:
  int n_ = 0;
  std::vector<Eigen::Index> rows_;
};

// B (n x n_B) and C (n_C x n) binary selections.
ComplexMatrix excitation_matrix(const NetworkStructure& s);
ComplexMatrix measurement_matrix(const NetworkStructure& s);

// K(G) = (B^T T^T kron C T) I_{G^Delta}; n_B*n_C x |E^Delta|.
ComplexMatrix build_K(const Realization& g);
// K^(G, G') = (B^T T(G')^T kron C T(G)) I_{G^Delta}. Row (b, c) sits at
// b_index * n_C + c_index.
ComplexMatrix build_K_hat(const Realization& g, const Realization& g_prime);

// K^ with each entry T'(start, b) * T(c, end) formed in extended precision,
// and its determinant by extended LU. On a singular K^ the rounding of the
// double entries alone moves det K^ by about eps * |adj K^| |K^|.
ExtendedComplexMatrix build_K_hat_extended(const Realization& g, const Realization& g_prime);
Complex determinant_K_hat(const Realization& g, const Realization& g_prime);

// Numerical rank of one K^ sample, thresholded against the norm of the full
// Kronecker operator ||B^T T'^T|| ||C T||. K is the case g_prime == g.
int sample_rank_K_hat(const Realization& g, const Realization& g_prime, const RankPolicy& policy = {});

struct GenericRankConfig {
  int samples = 3;
  Seed seed = 0;
  RankPolicy rank;
  SamplingPolicy sampling;
};

// Max numerical rank over independently sampled realizations (resp. pairs).
int generic_rank_K(const NetworkStructure& s, const GenericRankConfig& config = {});
int generic_rank_K_hat(const NetworkStructure& s, const GenericRankConfig& config = {});

enum class Verdict { identifiable, not_identifiable };

const char* to_string(Verdict v);

struct IdentifiabilityReport {
  int rank_K = 0;
  int rank_K_hat = 0;
  std::size_t unknown_count = 0;
  Verdict verdict_local = Verdict::not_identifiable;
  Verdict verdict_decoupled = Verdict::not_identifiable;
  int samples_used = 0;
  // Kernel direction of a sampled K^ when rank_K_hat < unknown_count.
  std::optional<ComplexVector> kernel_witness;
  // ||C T Delta T' B||_F / (||K^|| ||delta||) for the witness.
  std::optional<double> witness_residual;
  std::string reason;
};

struct AnalysisConfig {
  GenericRankConfig rank;
};

IdentifiabilityReport analyze(const NetworkStructure& s, const AnalysisConfig& config = {});

// 2n-node decoupled network. Nodes [0, n) are the measured copy (G), nodes
// [n, 2n) the excited copy (G'). Every edge of s appears in both copies as a
// known edge; each unknown edge j -> i becomes the unknown cross edge
// (j + n) -> i.
NetworkStructure build_decoupled(const NetworkStructure& s);

// Realization of build_decoupled(s) assembled from a pair (G, G') of s and
// values for the cross edges (aligned with the unknown edges of s).
Realization decoupled_realization(const Realization& g, const Realization& g_prime,
                                  std::span<const Complex> cross_values);

struct Prop4Check {
  int rank_K_hat = 0;
  int rank_K_decoupled = 0;
  std::size_t unknown_count = 0;
  bool agrees = false;
};

// Compares the K^ verdict on s with the K verdict on its decoupled network.
Prop4Check check_prop4_detailed(const NetworkStructure& s, const GenericRankConfig& config = {});
bool check_prop4(const NetworkStructure& s, const GenericRankConfig& config = {});

}  // namespace netident

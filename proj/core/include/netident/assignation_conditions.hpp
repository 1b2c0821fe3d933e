#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "netident/graph_analysis.hpp"
#include "netident/network_model.hpp"

namespace netident {

// Assignations act on the unknown edges in canonical order. Excitations and
// measurements are referred to by their position in structure.excited() /
// structure.measured(), not by node id.
enum class AssignationKind { excitation_only, measurement_only, bijective_pair };

struct Assignation {
  AssignationKind kind = AssignationKind::bijective_pair;
  std::optional<std::vector<int>> to_excitation;
  std::optional<std::vector<int>> to_measurement;
};

// Throws std::invalid_argument when the kind-specific multiplicities fail:
// n_C edges per excitation, n_B per measurement, or a bijection onto B x C.
void validate_assignation(const NetworkStructure& s, const Assignation& a);

struct EnumerationLimits {
  // Largest |E^Delta| = n_B * n_C accepted by the enumerating checks.
  std::size_t cap = 8;
};

// Visits every bijection E^Delta -> B x C once, in lexicographic order of
// the pair index b * n_C + c per edge. The visitor returns false to stop.
void for_each_bijective(const NetworkStructure& s,
                        const std::function<bool(const Assignation&)>& visit,
                        const EnumerationLimits& limits = {});
std::vector<Assignation> enumerate_bijective(const NetworkStructure& s,
                                             const EnumerationLimits& limits = {});

// Parity of the joint map relative to the reference pairing that sends the
// k-th unknown edge to the k-th pair (b, c) in lexicographic order.
int signature(const NetworkStructure& s, const Assignation& a);

// Sign of sequence `seq` as a permutation of its sorted self, counting strict
// inversions only (equal elements never form an inversion).
int inversion_parity(std::span<const int> seq);

// prod over c of sgn(sigma_{B,c}): each block sigma_C^{-1}(c), taken in
// canonical edge order, is read as a permutation of B.
int excitation_block_product(const Assignation& a, int n_excited, int n_measured);
// prod over b of sgn(sigma_{C,b}).
int measurement_block_product(const Assignation& a, int n_excited, int n_measured);

// The sign that factors out of det K^ when bijections are grouped by sigma_B:
// the strict-inversion parity of the sequence (sigma_B(alpha))_alpha.
int grouped_excitation_sign(std::span<const int> to_excitation);

struct SignatureDecompositionCheck {
  std::size_t bijections = 0;
  // sgn(sigma) != prod_c sgn(sigma_{B,c}) * prod_b sgn(sigma_{C,b})
  std::size_t product_form_mismatches = 0;
  // sgn(sigma) != grouped_excitation_sign(sigma_B) * prod_b sgn(sigma_{C,b}),
  // or its mirror grouped on sigma_C.
  std::size_t grouped_form_mismatches = 0;

  bool product_form_holds() const { return product_form_mismatches == 0; }
  bool grouped_form_holds() const { return grouped_form_mismatches == 0; }
};

// Exhaustive over all (n_B n_C)! bijections.
SignatureDecompositionCheck check_lemmaA2(int n_excited, int n_measured,
                                          const EnumerationLimits& limits = {});
SignatureDecompositionCheck check_lemmaA2(const NetworkStructure& s,
                                          const EnumerationLimits& limits = {});

// det K^ as a signed sum over all bijective assignations of products of
// closed-loop entries T'(start, b) * T(c, end).
Complex leibniz_det_K_hat(const Realization& g, const Realization& g_prime,
                          const EnumerationLimits& limits = {});

// det K^ grouped by excitation assignation: for each sigma_B with n_C edges
// per excitation, sign * prod T'(start, sigma_B) * prod_b det T(C, ends of
// sigma_B^{-1}(b)).
Complex gamma_factorization_det(const Realization& g, const Realization& g_prime,
                                const EnumerationLimits& limits = {});

struct AssignationWitness {
  Assignation assignation;
  std::vector<PathCertificate> certificates;
};

struct ConditionVerdict {
  bool necessary_holds = false;
  bool sufficient_holds = false;
  std::vector<AssignationWitness> witnesses;
  // Number of qualifying assignations, capped at 2 ("two or more").
  std::size_t counted_assignations = 0;
};

enum class Side { excitation, measurement };

// Connected bijective assignations.
ConditionVerdict check_prop6(const NetworkStructure& s, const EnumerationLimits& limits = {});
// Connected sigma_B (resp. sigma_C) with n_C (resp. n_B) vertex-disjoint
// paths per excitation (resp. measurement).
ConditionVerdict check_lemma2(const NetworkStructure& s, Side side,
                              const EnumerationLimits& limits = {});
// Pairs (sigma_B, sigma_C), not necessarily compatible.
ConditionVerdict check_theorem1(const NetworkStructure& s, const EnumerationLimits& limits = {});

}  // namespace netident

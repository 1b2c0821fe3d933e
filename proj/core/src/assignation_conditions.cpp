#include "netident/assignation_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numeric>
#include <span>
#include <utility>

#include "netident/error.hpp"
#include "netident/numeric_core.hpp"

namespace netident {

namespace {

struct Dimensions {
  int excited = 0;
  int measured = 0;
  int unknown = 0;
};

Dimensions dimensions_of(const NetworkStructure& s) {
  return Dimensions{static_cast<int>(s.excited().size()), static_cast<int>(s.measured().size()),
                    static_cast<int>(s.unknown_count())};
}

Dimensions require_square(const NetworkStructure& s, const EnumerationLimits& limits) {
  const Dimensions d = dimensions_of(s);
  if (d.unknown != d.excited * d.measured) {
    throw CardinalityError("|E^Delta| = " + std::to_string(d.unknown) + " differs from n_B * n_C = " +
                           std::to_string(d.excited * d.measured));
  }
  if (static_cast<std::size_t>(d.unknown) > limits.cap) {
    throw CapExceededError("n_B * n_C = " + std::to_string(d.unknown) +
                           " exceeds the enumeration cap " + std::to_string(limits.cap));
  }
  return d;
}

// Visits every sequence over [0, groups) in which each value occurs exactly
// `per_group` times, in lexicographic order.
template <typename Visit>
void for_each_balanced_sequence(int groups, int per_group, Visit&& visit) {
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(groups * per_group));
  for (int g = 0; g < groups; ++g) seq.insert(seq.end(), static_cast<std::size_t>(per_group), g);
  do {
    if (!visit(std::as_const(seq))) return;
  } while (std::next_permutation(seq.begin(), seq.end()));
}

// Positions of `seq` holding `value`, ascending.
std::vector<int> block_of(std::span<const int> seq, int value) {
  std::vector<int> block;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (seq[k] == value) block.push_back(static_cast<int>(k));
  }
  return block;
}

int block_product(std::span<const int> grouping, std::span<const int> labels, int groups) {
  int sign = 1;
  for (int g = 0; g < groups; ++g) {
    std::vector<int> sub;
    for (int alpha : block_of(grouping, g)) sub.push_back(labels[static_cast<std::size_t>(alpha)]);
    sign *= inversion_parity(sub);
  }
  return sign;
}

// Sign of the relabelling b * n_C + c -> c * n_B + b of the pair grid.
int grid_transpose_sign(int n_excited, int n_measured) {
  std::vector<int> image;
  for (int b = 0; b < n_excited; ++b) {
    for (int c = 0; c < n_measured; ++c) image.push_back(c * n_excited + b);
  }
  return inversion_parity(image);
}

void check_counts(std::span<const int> labels, std::size_t expected_size, int groups, int per_group,
                  const char* what) {
  if (labels.size() != expected_size) {
    throw std::invalid_argument(std::string(what) + " must map every unknown edge");
  }
  std::vector<int> counts(static_cast<std::size_t>(groups), 0);
  for (int label : labels) {
    if (label < 0 || label >= groups) throw std::invalid_argument(std::string(what) + " label out of range");
    ++counts[static_cast<std::size_t>(label)];
  }
  for (int count : counts) {
    if (count != per_group) {
      throw std::invalid_argument(std::string(what) + " must assign exactly " +
                                  std::to_string(per_group) + " edges to each target");
    }
  }
}

// Neumaier summation in extended precision, component-wise.
class CompensatedSum {
 public:
  void add(ExtendedComplex z) {
    add(real_, real_carry_, z.real());
    add(imag_, imag_carry_, z.imag());
  }
  Complex value() const {
    return Complex(static_cast<double>(real_ + real_carry_), static_cast<double>(imag_ + imag_carry_));
  }

 private:
  static void add(long double& sum, long double& carry, long double x) {
    const long double t = sum + x;
    carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  long double real_ = 0.0L, real_carry_ = 0.0L, imag_ = 0.0L, imag_carry_ = 0.0L;
};

struct ClosedLoopEntries {
  // excitation_leg[alpha][b] = T'(start of alpha, excited b)
  std::vector<std::vector<Complex>> excitation_leg;
  // measurement_leg[alpha][c] = T(measured c, end of alpha)
  std::vector<std::vector<Complex>> measurement_leg;
};

ClosedLoopEntries closed_loop_entries(const Realization& g, const Realization& g_prime) {
  if (!(g.structure() == g_prime.structure())) {
    throw std::invalid_argument("G and G' must share the same structure");
  }
  const NetworkStructure& s = g.structure();
  const ComplexMatrix t = closed_loop(g);
  const ComplexMatrix t_prime = closed_loop(g_prime);
  ClosedLoopEntries entries;
  for (std::size_t alpha = 0; alpha < s.unknown_count(); ++alpha) {
    const Edge& e = s.unknown_edge(alpha);
    auto& excitation = entries.excitation_leg.emplace_back();
    for (NodeId b : s.excited()) excitation.push_back(t_prime(e.from, b));
    auto& measurement = entries.measurement_leg.emplace_back();
    for (NodeId c : s.measured()) measurement.push_back(t(c, e.to));
  }
  return entries;
}

// Legs of each unknown edge: excitation -> start and end -> measurement.
PathCertificate single_path(const NetworkStructure& s, NodeId from, NodeId to) {
  PathCertificate cert;
  cert.sources = {from};
  cert.targets = {to};
  if (auto path = find_path(s, from, to)) cert.paths.push_back(std::move(*path));
  return cert;
}

class ConditionContext {
 public:
  ConditionContext(const NetworkStructure& s, const EnumerationLimits& limits)
      : s_(s), dims_(require_square(s, limits)), reach_(s) {}

  const NetworkStructure& structure() const { return s_; }
  const Dimensions& dims() const { return dims_; }

  NodeId start(int alpha) const { return s_.unknown_edge(static_cast<std::size_t>(alpha)).from; }
  NodeId end(int alpha) const { return s_.unknown_edge(static_cast<std::size_t>(alpha)).to; }
  NodeId excited(int b) const { return s_.excited()[static_cast<std::size_t>(b)]; }
  NodeId measured(int c) const { return s_.measured()[static_cast<std::size_t>(c)]; }

  bool excitation_leg(int alpha, int b) const { return reach_(excited(b), start(alpha)); }
  bool measurement_leg(int alpha, int c) const { return reach_(end(alpha), measured(c)); }

  bool excitation_connected(std::span<const int> to_excitation) const {
    for (int alpha = 0; alpha < dims_.unknown; ++alpha) {
      if (!excitation_leg(alpha, to_excitation[static_cast<std::size_t>(alpha)])) return false;
    }
    return true;
  }
  bool measurement_connected(std::span<const int> to_measurement) const {
    for (int alpha = 0; alpha < dims_.unknown; ++alpha) {
      if (!measurement_leg(alpha, to_measurement[static_cast<std::size_t>(alpha)])) return false;
    }
    return true;
  }

  // beta(end nodes of the block -> C) == n_C for every excitation.
  bool excitation_disjoint(std::span<const int> to_excitation) {
    for (int b = 0; b < dims_.excited; ++b) {
      std::vector<NodeId> ends;
      for (int alpha : block_of(to_excitation, b)) ends.push_back(end(alpha));
      if (excitation_beta(ends).beta != dims_.measured) return false;
    }
    return true;
  }
  // beta(B -> start nodes of the block) == n_B for every measurement.
  bool measurement_disjoint(std::span<const int> to_measurement) {
    for (int c = 0; c < dims_.measured; ++c) {
      std::vector<NodeId> starts;
      for (int alpha : block_of(to_measurement, c)) starts.push_back(start(alpha));
      if (measurement_beta(starts).beta != dims_.excited) return false;
    }
    return true;
  }

  const DisjointPaths& excitation_beta(std::vector<NodeId> ends) {
    std::sort(ends.begin(), ends.end());
    auto it = excitation_cache_.find(ends);
    if (it == excitation_cache_.end()) {
      auto result = max_vertex_disjoint(s_, ends, s_.measured());
      it = excitation_cache_.emplace(std::move(ends), std::move(result)).first;
    }
    return it->second;
  }
  const DisjointPaths& measurement_beta(std::vector<NodeId> starts) {
    std::sort(starts.begin(), starts.end());
    auto it = measurement_cache_.find(starts);
    if (it == measurement_cache_.end()) {
      auto result = max_vertex_disjoint(s_, s_.excited(), starts);
      it = measurement_cache_.emplace(std::move(starts), std::move(result)).first;
    }
    return it->second;
  }

  AssignationWitness excitation_witness(const std::vector<int>& to_excitation) {
    AssignationWitness w{Assignation{AssignationKind::excitation_only, to_excitation, std::nullopt}, {}};
    for (int b = 0; b < dims_.excited; ++b) {
      std::vector<NodeId> ends;
      for (int alpha : block_of(to_excitation, b)) ends.push_back(end(alpha));
      w.certificates.push_back(excitation_beta(ends).certificate);
    }
    for (int alpha = 0; alpha < dims_.unknown; ++alpha) {
      w.certificates.push_back(
          single_path(s_, excited(to_excitation[static_cast<std::size_t>(alpha)]), start(alpha)));
    }
    return w;
  }
  AssignationWitness measurement_witness(const std::vector<int>& to_measurement) {
    AssignationWitness w{Assignation{AssignationKind::measurement_only, std::nullopt, to_measurement}, {}};
    for (int c = 0; c < dims_.measured; ++c) {
      std::vector<NodeId> starts;
      for (int alpha : block_of(to_measurement, c)) starts.push_back(start(alpha));
      w.certificates.push_back(measurement_beta(starts).certificate);
    }
    for (int alpha = 0; alpha < dims_.unknown; ++alpha) {
      w.certificates.push_back(
          single_path(s_, end(alpha), measured(to_measurement[static_cast<std::size_t>(alpha)])));
    }
    return w;
  }

 private:
  const NetworkStructure& s_;
  Dimensions dims_;
  Reachability reach_;
  std::map<std::vector<NodeId>, DisjointPaths> excitation_cache_;
  std::map<std::vector<NodeId>, DisjointPaths> measurement_cache_;
};

ConditionVerdict verdict_from_count(std::size_t count, std::vector<AssignationWitness> witnesses) {
  ConditionVerdict v;
  v.counted_assignations = std::min<std::size_t>(count, 2);
  v.necessary_holds = count >= 1;
  v.sufficient_holds = count == 1;
  v.witnesses = std::move(witnesses);
  return v;
}

// Balanced assignations of one side passing `accept`, at most `limit` of them.
template <typename Accept>
std::vector<std::vector<int>> collect_balanced(int groups, int per_group, std::size_t limit,
                                               Accept&& accept) {
  std::vector<std::vector<int>> found;
  if (limit == 0) return found;
  for_each_balanced_sequence(groups, per_group, [&](const std::vector<int>& seq) {
    if (accept(seq)) found.push_back(seq);
    return found.size() < limit;
  });
  return found;
}

}  // namespace

void validate_assignation(const NetworkStructure& s, const Assignation& a) {
  const Dimensions d = dimensions_of(s);
  const auto m = static_cast<std::size_t>(d.unknown);
  switch (a.kind) {
    case AssignationKind::excitation_only:
      if (!a.to_excitation) throw std::invalid_argument("excitation assignation missing");
      check_counts(*a.to_excitation, m, d.excited, d.measured, "excitation assignation");
      break;
    case AssignationKind::measurement_only:
      if (!a.to_measurement) throw std::invalid_argument("measurement assignation missing");
      check_counts(*a.to_measurement, m, d.measured, d.excited, "measurement assignation");
      break;
    case AssignationKind::bijective_pair: {
      if (!a.to_excitation || !a.to_measurement) {
        throw std::invalid_argument("bijective assignation needs both maps");
      }
      check_counts(*a.to_excitation, m, d.excited, d.measured, "excitation assignation");
      check_counts(*a.to_measurement, m, d.measured, d.excited, "measurement assignation");
      std::vector<char> hit(m, 0);
      for (std::size_t alpha = 0; alpha < m; ++alpha) {
        const auto pair = static_cast<std::size_t>((*a.to_excitation)[alpha] * d.measured +
                                                   (*a.to_measurement)[alpha]);
        if (hit[pair]) throw std::invalid_argument("excitation and measurement maps are not compatible");
        hit[pair] = 1;
      }
      break;
    }
  }
}

void for_each_bijective(const NetworkStructure& s,
                        const std::function<bool(const Assignation&)>& visit,
                        const EnumerationLimits& limits) {
  const Dimensions d = require_square(s, limits);
  std::vector<int> pairs(static_cast<std::size_t>(d.unknown));
  std::iota(pairs.begin(), pairs.end(), 0);
  Assignation a{AssignationKind::bijective_pair, std::vector<int>(pairs.size()),
                std::vector<int>(pairs.size())};
  do {
    for (std::size_t alpha = 0; alpha < pairs.size(); ++alpha) {
      (*a.to_excitation)[alpha] = pairs[alpha] / d.measured;
      (*a.to_measurement)[alpha] = pairs[alpha] % d.measured;
    }
    if (!visit(a)) return;
  } while (std::next_permutation(pairs.begin(), pairs.end()));
}

std::vector<Assignation> enumerate_bijective(const NetworkStructure& s,
                                             const EnumerationLimits& limits) {
  std::vector<Assignation> all;
  for_each_bijective(s, [&](const Assignation& a) {
    all.push_back(a);
    return true;
  }, limits);
  return all;
}

int inversion_parity(std::span<const int> seq) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] > seq[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

int signature(const NetworkStructure& s, const Assignation& a) {
  if (a.kind != AssignationKind::bijective_pair) {
    throw std::invalid_argument("signature needs a bijective assignation");
  }
  validate_assignation(s, a);
  const int n_measured = static_cast<int>(s.measured().size());
  std::vector<int> pairs;
  for (std::size_t alpha = 0; alpha < a.to_excitation->size(); ++alpha) {
    pairs.push_back((*a.to_excitation)[alpha] * n_measured + (*a.to_measurement)[alpha]);
  }
  return inversion_parity(pairs);
}

int excitation_block_product(const Assignation& a, int /*n_excited*/, int n_measured) {
  return block_product(*a.to_measurement, *a.to_excitation, n_measured);
}

int measurement_block_product(const Assignation& a, int n_excited, int /*n_measured*/) {
  return block_product(*a.to_excitation, *a.to_measurement, n_excited);
}

int grouped_excitation_sign(std::span<const int> to_excitation) {
  return inversion_parity(to_excitation);
}

SignatureDecompositionCheck check_lemmaA2(int n_excited, int n_measured,
                                          const EnumerationLimits& limits) {
  if (n_excited < 0 || n_measured < 0) throw std::invalid_argument("negative set size");
  const int m = n_excited * n_measured;
  if (static_cast<std::size_t>(m) > limits.cap) {
    throw CapExceededError("n_B * n_C = " + std::to_string(m) + " exceeds the enumeration cap " +
                           std::to_string(limits.cap));
  }
  const int transpose_sign = grid_transpose_sign(n_excited, n_measured);
  SignatureDecompositionCheck check;
  std::vector<int> pairs(static_cast<std::size_t>(m));
  std::iota(pairs.begin(), pairs.end(), 0);
  Assignation a{AssignationKind::bijective_pair, std::vector<int>(pairs.size()),
                std::vector<int>(pairs.size())};
  do {
    for (std::size_t alpha = 0; alpha < pairs.size(); ++alpha) {
      (*a.to_excitation)[alpha] = pairs[alpha] / n_measured;
      (*a.to_measurement)[alpha] = pairs[alpha] % n_measured;
    }
    const int sgn = inversion_parity(pairs);
    const int sub_b = excitation_block_product(a, n_excited, n_measured);
    const int sub_c = measurement_block_product(a, n_excited, n_measured);
    ++check.bijections;
    if (sgn != sub_b * sub_c) ++check.product_form_mismatches;
    const bool grouped_on_b = sgn == grouped_excitation_sign(*a.to_excitation) * sub_c;
    const bool grouped_on_c = sgn == transpose_sign * inversion_parity(*a.to_measurement) * sub_b;
    if (!grouped_on_b || !grouped_on_c) ++check.grouped_form_mismatches;
  } while (std::next_permutation(pairs.begin(), pairs.end()));
  return check;
}

SignatureDecompositionCheck check_lemmaA2(const NetworkStructure& s, const EnumerationLimits& limits) {
  const Dimensions d = require_square(s, limits);
  return check_lemmaA2(d.excited, d.measured, limits);
}

Complex leibniz_det_K_hat(const Realization& g, const Realization& g_prime,
                          const EnumerationLimits& limits) {
  const Dimensions d = require_square(g.structure(), limits);
  const auto entries = closed_loop_entries(g, g_prime);
  CompensatedSum det;
  std::vector<int> pairs(static_cast<std::size_t>(d.unknown));
  std::iota(pairs.begin(), pairs.end(), 0);
  do {
    ExtendedComplex term = static_cast<long double>(inversion_parity(pairs));
    for (std::size_t alpha = 0; alpha < pairs.size(); ++alpha) {
      const auto b = static_cast<std::size_t>(pairs[alpha] / d.measured);
      const auto c = static_cast<std::size_t>(pairs[alpha] % d.measured);
      term *= ExtendedComplex(entries.excitation_leg[alpha][b]) * ExtendedComplex(entries.measurement_leg[alpha][c]);
    }
    det.add(term);
  } while (std::next_permutation(pairs.begin(), pairs.end()));
  return det.value();
}

Complex gamma_factorization_det(const Realization& g, const Realization& g_prime,
                                const EnumerationLimits& limits) {
  const Dimensions d = require_square(g.structure(), limits);
  const auto entries = closed_loop_entries(g, g_prime);
  CompensatedSum det;
  for_each_balanced_sequence(d.excited, d.measured, [&](const std::vector<int>& to_excitation) {
    ExtendedComplex term = static_cast<long double>(grouped_excitation_sign(to_excitation));
    for (std::size_t alpha = 0; alpha < to_excitation.size(); ++alpha) {
      term *= ExtendedComplex(entries.excitation_leg[alpha][static_cast<std::size_t>(to_excitation[alpha])]);
    }
    for (int b = 0; b < d.excited; ++b) {
      // T(C, ends of the block): rows follow C, columns the block's edges.
      const auto block = block_of(to_excitation, b);
      ComplexMatrix sub(d.measured, static_cast<Eigen::Index>(block.size()));
      for (std::size_t k = 0; k < block.size(); ++k) {
        for (int c = 0; c < d.measured; ++c) {
          sub(c, static_cast<Eigen::Index>(k)) =
              entries.measurement_leg[static_cast<std::size_t>(block[k])][static_cast<std::size_t>(c)];
        }
      }
      term *= determinant_extended(sub);
    }
    det.add(term);
    return true;
  });
  return det.value();
}

ConditionVerdict check_prop6(const NetworkStructure& s, const EnumerationLimits& limits) {
  ConditionContext ctx(s, limits);
  const Dimensions& d = ctx.dims();
  const auto m = static_cast<std::size_t>(d.unknown);

  // Depth-first over edges, trying pairs in increasing order; this visits the
  // connected bijections in the same order as for_each_bijective.
  std::vector<int> chosen(m, -1);
  std::vector<char> used(m, 0);
  std::size_t count = 0;
  std::vector<int> first;
  auto search = [&](auto&& self, std::size_t alpha) -> void {
    if (count >= 2) return;
    if (alpha == m) {
      if (count++ == 0) first = chosen;
      return;
    }
    for (std::size_t p = 0; p < m; ++p) {
      if (used[p]) continue;
      const int b = static_cast<int>(p) / d.measured;
      const int c = static_cast<int>(p) % d.measured;
      if (!ctx.excitation_leg(static_cast<int>(alpha), b) ||
          !ctx.measurement_leg(static_cast<int>(alpha), c)) {
        continue;
      }
      used[p] = 1;
      chosen[alpha] = static_cast<int>(p);
      self(self, alpha + 1);
      used[p] = 0;
      if (count >= 2) return;
    }
  };
  search(search, 0);

  std::vector<AssignationWitness> witnesses;
  if (count > 0) {
    AssignationWitness w;
    w.assignation = Assignation{AssignationKind::bijective_pair, std::vector<int>(m), std::vector<int>(m)};
    for (std::size_t alpha = 0; alpha < m; ++alpha) {
      const int b = first[alpha] / d.measured;
      const int c = first[alpha] % d.measured;
      (*w.assignation.to_excitation)[alpha] = b;
      (*w.assignation.to_measurement)[alpha] = c;
      w.certificates.push_back(single_path(s, ctx.excited(b), ctx.start(static_cast<int>(alpha))));
      w.certificates.push_back(single_path(s, ctx.end(static_cast<int>(alpha)), ctx.measured(c)));
    }
    witnesses.push_back(std::move(w));
  }
  return verdict_from_count(count, std::move(witnesses));
}

ConditionVerdict check_lemma2(const NetworkStructure& s, Side side, const EnumerationLimits& limits) {
  ConditionContext ctx(s, limits);
  const Dimensions& d = ctx.dims();
  std::vector<std::vector<int>> found;
  std::vector<AssignationWitness> witnesses;
  if (side == Side::excitation) {
    found = collect_balanced(d.excited, d.measured, 2, [&](const std::vector<int>& seq) {
      return ctx.excitation_connected(seq) && ctx.excitation_disjoint(seq);
    });
    if (!found.empty()) witnesses.push_back(ctx.excitation_witness(found.front()));
  } else {
    found = collect_balanced(d.measured, d.excited, 2, [&](const std::vector<int>& seq) {
      return ctx.measurement_connected(seq) && ctx.measurement_disjoint(seq);
    });
    if (!found.empty()) witnesses.push_back(ctx.measurement_witness(found.front()));
  }
  return verdict_from_count(found.size(), std::move(witnesses));
}

ConditionVerdict check_theorem1(const NetworkStructure& s, const EnumerationLimits& limits) {
  ConditionContext ctx(s, limits);
  const Dimensions& d = ctx.dims();
  const auto none = std::numeric_limits<std::size_t>::max();
  // (a) + (d) and (b) + (e) are side-local; (c) couples the pair.
  const auto excitation_side = collect_balanced(d.excited, d.measured, none,
      [&](const std::vector<int>& seq) { return ctx.excitation_disjoint(seq); });
  const auto measurement_side = collect_balanced(d.measured, d.excited, none,
      [&](const std::vector<int>& seq) { return ctx.measurement_disjoint(seq); });

  std::vector<char> excitation_ok;
  for (const auto& seq : excitation_side) excitation_ok.push_back(ctx.excitation_connected(seq));
  std::vector<char> measurement_ok;
  for (const auto& seq : measurement_side) measurement_ok.push_back(ctx.measurement_connected(seq));

  // sigma = (sigma_B, sigma_C) is connected when every edge has both legs.
  const auto connected = [&](std::size_t i, std::size_t j) {
    return excitation_ok[i] && measurement_ok[j];
  };

  std::size_t count = 0;
  std::optional<std::pair<std::size_t, std::size_t>> first;
  for (std::size_t i = 0; i < excitation_side.size() && count < 2; ++i) {
    if (!excitation_ok[i]) continue;
    for (std::size_t j = 0; j < measurement_side.size() && count < 2; ++j) {
      if (!connected(i, j)) continue;
      if (count++ == 0) first.emplace(i, j);
    }
  }
  std::vector<AssignationWitness> witnesses;
  if (first) {
    witnesses.push_back(ctx.excitation_witness(excitation_side[first->first]));
    witnesses.push_back(ctx.measurement_witness(measurement_side[first->second]));
  }
  return verdict_from_count(count, std::move(witnesses));
}

}  // namespace netident

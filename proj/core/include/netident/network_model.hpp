#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netident/types.hpp"

namespace netident {

// A directed edge carrying the transfer from node `from` (j) into node `to`
// (i), i.e. entry G(i, j) of the network matrix.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  bool known = false;
  // Fixed transfer value of a known edge. Known edges without a value are
  // sampled like unknowns but shared between G and G'.
  std::optional<Complex> value;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct StructureOptions {
  bool allow_self_loops = false;
};

// Network topology with the known/unknown edge partition and the excited
// (B) and measured (C) node sets.
//
// Construction canonicalizes: edges are sorted by (to, from), excited and
// measured are sorted ascending. The unknown-edge order E^Delta used by every
// matrix in the library is the canonical edge order restricted to unknowns.
class NetworkStructure {
 public:
  NetworkStructure() = default;
  NetworkStructure(int node_count, std::vector<Edge> edges,
                   std::vector<NodeId> excited, std::vector<NodeId> measured,
                   StructureOptions options = {});

  int node_count() const { return node_count_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const NodeId> excited() const { return excited_; }
  std::span<const NodeId> measured() const { return measured_; }
  bool allows_self_loops() const { return options_.allow_self_loops; }

  std::size_t unknown_count() const { return unknown_.size(); }
  std::size_t known_count() const { return edges_.size() - unknown_.size(); }
  // Indices into edges() of the unknown edges, in canonical order.
  std::span<const std::size_t> unknown_edge_indices() const { return unknown_; }
  const Edge& unknown_edge(std::size_t k) const { return edges_[unknown_[k]]; }

  std::optional<std::size_t> find_edge(NodeId from, NodeId to) const;

  // Out-neighbours of v in canonical edge order.
  std::span<const NodeId> successors(NodeId v) const;
  std::span<const NodeId> predecessors(NodeId v) const;

  friend bool operator==(const NetworkStructure& a, const NetworkStructure& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_ &&
           a.excited_ == b.excited_ && a.measured_ == b.measured_ &&
           a.options_.allow_self_loops == b.options_.allow_self_loops;
  }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<NodeId> excited_;
  std::vector<NodeId> measured_;
  StructureOptions options_;
  std::vector<std::size_t> unknown_;
  std::vector<std::vector<NodeId>> successors_;
  std::vector<std::vector<NodeId>> predecessors_;
};

// Same structure with every fixed known-edge value dropped.
NetworkStructure without_fixed_values(const NetworkStructure& s);

NetworkStructure parse_structure(std::string_view text);
NetworkStructure structure_from_json(const nlohmann::json& j);
nlohmann::ordered_json structure_to_json(const NetworkStructure& s);
// Canonical text form, newline terminated.
std::string serialize_structure(const NetworkStructure& s);

// FNV-1a over the compact canonical serialization.
std::uint64_t structure_hash(const NetworkStructure& s);

// Mixes a base seed with additional stream identifiers (splitmix64).
Seed derive_seed(Seed base, std::initializer_list<std::uint64_t> parts);

struct SamplingPolicy {
  double min_modulus = 0.2;
  double max_modulus = 1.0;
  // Upper bound on the 2-norm condition number of I - G.
  double condition_bound = 1e8;
  int retry_cap = 32;
};

// One numeric sample of a structure at a single frequency: a complex value
// for every edge, aligned with structure().edges().
class Realization {
 public:
  // Rejects size mismatches, non-finite values, values that contradict a
  // fixed known-edge value, and an ill-conditioned I - G.
  Realization(NetworkStructure structure, std::vector<Complex> values,
              double condition_bound = SamplingPolicy{}.condition_bound);

  const NetworkStructure& structure() const { return structure_; }
  double condition_bound() const { return condition_bound_; }
  std::span<const Complex> values() const { return values_; }
  Complex value(std::size_t edge_index) const { return values_[edge_index]; }
  Complex unknown_value(std::size_t k) const {
    return values_[structure_.unknown_edge_indices()[k]];
  }

  // n x n matrix G with G(to, from) = edge value.
  ComplexMatrix network_matrix() const;

 private:
  NetworkStructure structure_;
  std::vector<Complex> values_;
  double condition_bound_;
};

struct RealizationPair {
  Realization g;
  Realization g_prime;
};

// Edge values drawn i.i.d. with modulus uniform in the policy annulus and
// uniform phase; resampled up to policy.retry_cap times until I - G is
// well conditioned. Deterministic in (structure, seed, policy).
Realization sample_realization(const NetworkStructure& s, Seed seed,
                               const SamplingPolicy& policy = {});

// G and G' agree exactly on known edges and are drawn independently on
// unknown edges.
RealizationPair sample_pair(const NetworkStructure& s, Seed seed,
                            const SamplingPolicy& policy = {});

struct RandomStructureParams {
  int node_count = 5;
  // Fraction of the n(n-1) off-diagonal pairs (n^2 with self-loops) that
  // become edges; the edge count is round(density * pairs).
  double density = 0.3;
  int excited_count = 1;
  int measured_count = 1;
  int unknown_count = 1;
  bool allow_self_loops = false;
};

NetworkStructure random_structure(const RandomStructureParams& params, Seed seed);

}  // namespace netident

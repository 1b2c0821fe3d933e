#pragma once

#include <optional>
#include <span>
#include <vector>

#include "netident/algebraic_identifiability.hpp"
#include "netident/network_model.hpp"

namespace netident {

using Path = std::vector<NodeId>;

// Vertex-disjoint paths from a source multiset to a target multiset. A path
// may be a single node when that node is both a source and a target.
struct PathCertificate {
  std::vector<Path> paths;
  std::vector<NodeId> sources;
  std::vector<NodeId> targets;
};

// True iff a directed path (length 0 when from == to) leads from `from` to `to`.
bool reachable(const NetworkStructure& s, NodeId from, NodeId to);

// Shortest directed path, or nullopt.
std::optional<Path> find_path(const NetworkStructure& s, NodeId from, NodeId to);

// Transitive-reflexive closure, for repeated reachability queries.
class Reachability {
 public:
  explicit Reachability(const NetworkStructure& s);
  bool operator()(NodeId from, NodeId to) const {
    return reach_[static_cast<std::size_t>(from) * n_ + to];
  }

 private:
  std::size_t n_ = 0;
  std::vector<char> reach_;
};

struct DisjointPaths {
  int beta = 0;
  PathCertificate certificate;
};

// Maximum number of mutually vertex-disjoint paths from `sources` to
// `targets` (Menger, via unit-capacity node-split max-flow). Repeated nodes
// in either multiset can carry at most one path.
DisjointPaths max_vertex_disjoint(const NetworkStructure& s, std::span<const NodeId> sources,
                                  std::span<const NodeId> targets);

// Checks edge validity, endpoints and vertex-disjointness path by path.
bool verify_certificate(const NetworkStructure& s, const PathCertificate& cert);

struct Lemma1Check {
  int generic_rank = 0;
  int beta = 0;
  bool agrees = false;
};

// Generic rank of T(targets, sources) against beta(sources -> targets).
// Known-edge values are randomized as well.
Lemma1Check check_lemma1(const NetworkStructure& s, std::span<const NodeId> sources,
                         std::span<const NodeId> targets, const GenericRankConfig& config = {});

}  // namespace netident

#include "netident/graph_analysis.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace netident {

namespace {

constexpr std::uint64_t kStreamLemma1 = 0x4c31;

std::vector<char> reached_from(const NetworkStructure& s, NodeId start) {
  std::vector<char> seen(s.node_count(), 0);
  std::deque<NodeId> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : s.successors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

void check_node(const NetworkStructure& s, NodeId v) {
  if (v < 0 || v >= s.node_count()) throw std::out_of_range("node index out of range");
}

// Unit-capacity residual network with adjacency lists of arc ids; arc k and
// k ^ 1 are a forward/backward pair.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adjacency_(nodes) {}

  void add_arc(int from, int to) {
    adjacency_[from].push_back(static_cast<int>(head_.size()));
    head_.push_back(to);
    capacity_.push_back(1);
    adjacency_[to].push_back(static_cast<int>(head_.size()));
    head_.push_back(from);
    capacity_.push_back(0);
  }

  // Edmonds-Karp; every augmenting path carries one unit.
  int max_flow(int source, int sink) {
    int flow = 0;
    std::vector<int> parent_arc(adjacency_.size());
    while (true) {
      std::fill(parent_arc.begin(), parent_arc.end(), -1);
      std::deque<int> queue{source};
      parent_arc[source] = -2;
      while (!queue.empty() && parent_arc[sink] == -1) {
        const int v = queue.front();
        queue.pop_front();
        for (int arc : adjacency_[v]) {
          const int w = head_[arc];
          if (capacity_[arc] > 0 && parent_arc[w] == -1) {
            parent_arc[w] = arc;
            queue.push_back(w);
          }
        }
      }
      if (parent_arc[sink] == -1) return flow;
      for (int v = sink; v != source; v = head_[parent_arc[v] ^ 1]) {
        capacity_[parent_arc[v]] -= 1;
        capacity_[parent_arc[v] ^ 1] += 1;
      }
      ++flow;
    }
  }

  // Forward arcs leaving v that carry flow.
  std::vector<int> saturated_heads(int v) const {
    std::vector<int> heads;
    for (int arc : adjacency_[v]) {
      if ((arc & 1) == 0 && capacity_[arc] == 0) heads.push_back(head_[arc]);
    }
    return heads;
  }

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> head_;
  std::vector<int> capacity_;
};

}  // namespace

bool reachable(const NetworkStructure& s, NodeId from, NodeId to) {
  check_node(s, from);
  check_node(s, to);
  return reached_from(s, from)[to] != 0;
}

std::optional<Path> find_path(const NetworkStructure& s, NodeId from, NodeId to) {
  check_node(s, from);
  check_node(s, to);
  std::vector<NodeId> parent(s.node_count(), -1);
  std::vector<char> seen(s.node_count(), 0);
  std::deque<NodeId> queue{from};
  seen[from] = 1;
  while (!queue.empty() && !seen[to]) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : s.successors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  if (!seen[to]) return std::nullopt;
  Path path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

Reachability::Reachability(const NetworkStructure& s)
    : n_(static_cast<std::size_t>(s.node_count())), reach_(n_ * n_, 0) {
  for (NodeId v = 0; v < s.node_count(); ++v) {
    const auto seen = reached_from(s, v);
    std::copy(seen.begin(), seen.end(), reach_.begin() + static_cast<std::ptrdiff_t>(v * n_));
  }
}

DisjointPaths max_vertex_disjoint(const NetworkStructure& s, std::span<const NodeId> sources,
                                  std::span<const NodeId> targets) {
  for (NodeId v : sources) check_node(s, v);
  for (NodeId v : targets) check_node(s, v);
  const std::set<NodeId> source_set(sources.begin(), sources.end());
  const std::set<NodeId> target_set(targets.begin(), targets.end());

  // Node v splits into in = 2v and out = 2v + 1 joined by a unit arc.
  const int n = s.node_count();
  const int super_source = 2 * n;
  const int super_sink = 2 * n + 1;
  FlowNetwork network(2 * n + 2);
  for (NodeId v = 0; v < n; ++v) network.add_arc(2 * v, 2 * v + 1);
  for (const Edge& e : s.edges()) {
    if (e.from != e.to) network.add_arc(2 * e.from + 1, 2 * e.to);
  }
  for (NodeId v : source_set) network.add_arc(super_source, 2 * v);
  for (NodeId v : target_set) network.add_arc(2 * v + 1, super_sink);

  DisjointPaths result;
  result.beta = network.max_flow(super_source, super_sink);
  result.certificate.sources.assign(sources.begin(), sources.end());
  result.certificate.targets.assign(targets.begin(), targets.end());
  for (int in_node : network.saturated_heads(super_source)) {
    Path path;
    int current = in_node;
    while (true) {
      path.push_back(current / 2);
      // in -> out always carries the unit entering the node; follow out's flow.
      const auto next = network.saturated_heads(current + 1);
      if (next.empty()) break;
      if (next.front() == super_sink) break;
      current = next.front();
    }
    result.certificate.paths.push_back(std::move(path));
  }
  return result;
}

bool verify_certificate(const NetworkStructure& s, const PathCertificate& cert) {
  const std::set<NodeId> sources(cert.sources.begin(), cert.sources.end());
  const std::set<NodeId> targets(cert.targets.begin(), cert.targets.end());
  std::set<NodeId> used;
  for (const Path& path : cert.paths) {
    if (path.empty()) return false;
    if (!sources.contains(path.front()) || !targets.contains(path.back())) return false;
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (path[k] < 0 || path[k] >= s.node_count()) return false;
      if (!used.insert(path[k]).second) return false;
      if (k + 1 < path.size() && !s.find_edge(path[k], path[k + 1])) return false;
    }
  }
  return true;
}

Lemma1Check check_lemma1(const NetworkStructure& s, std::span<const NodeId> sources,
                         std::span<const NodeId> targets, const GenericRankConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("samples must be at least 1");
  const NetworkStructure randomized = without_fixed_values(s);
  const std::uint64_t hash = structure_hash(randomized);

  Lemma1Check check;
  for (int k = 0; k < config.samples; ++k) {
    const auto r = sample_realization(
        randomized, derive_seed(config.seed, {hash, kStreamLemma1, std::uint64_t(k)}),
        config.sampling);
    const ComplexMatrix t = closed_loop(r);
    ComplexMatrix sub(static_cast<Eigen::Index>(targets.size()),
                      static_cast<Eigen::Index>(sources.size()));
    for (std::size_t row = 0; row < targets.size(); ++row) {
      for (std::size_t col = 0; col < sources.size(); ++col) {
        sub(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            t(targets[row], sources[col]);
      }
    }
    check.generic_rank = std::max(check.generic_rank, numerical_rank(sub, config.rank, spectral_norm(t)));
  }
  check.beta = max_vertex_disjoint(s, sources, targets).beta;
  check.agrees = check.generic_rank == check.beta;
  return check;
}

}  // namespace netident

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "netident/graph_analysis.hpp"
#include "netident/harness.hpp"

namespace {

using namespace netident;

NetworkStructure random_graph(Seed seed, int n_max, int io_max) {
  std::mt19937_64 rng(seed);
  RandomStructureParams p;
  p.node_count = std::uniform_int_distribution<int>(2, n_max)(rng);
  p.density = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
  p.excited_count = std::uniform_int_distribution<int>(1, std::min(io_max, p.node_count))(rng);
  p.measured_count = std::uniform_int_distribution<int>(1, std::min(io_max, p.node_count))(rng);
  p.unknown_count = 0;
  return random_structure(p, rng());
}

// Floyd-Warshall style closure.
std::vector<std::vector<char>> closure(const NetworkStructure& s) {
  const auto n = static_cast<std::size_t>(s.node_count());
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (std::size_t v = 0; v < n; ++v) r[v][v] = 1;
  for (const Edge& e : s.edges()) r[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.to)] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = 1;
  return r;
}

// Exhaustive search over sets of simple source -> target paths.
int brute_force_beta(const NetworkStructure& s, const std::vector<NodeId>& sources,
                     const std::vector<NodeId>& targets) {
  const std::set<NodeId> target_set(targets.begin(), targets.end());
  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> current;
  std::vector<char> on_path(static_cast<std::size_t>(s.node_count()), 0);
  std::function<void(NodeId)> extend = [&](NodeId v) {
    current.push_back(v);
    on_path[static_cast<std::size_t>(v)] = 1;
    if (target_set.contains(v)) paths.push_back(current);
    for (NodeId w : s.successors(v)) {
      if (!on_path[static_cast<std::size_t>(w)]) extend(w);
    }
    on_path[static_cast<std::size_t>(v)] = 0;
    current.pop_back();
  };
  for (NodeId src : std::set<NodeId>(sources.begin(), sources.end())) extend(src);

  int best = 0;
  std::vector<char> used(static_cast<std::size_t>(s.node_count()), 0);
  std::function<void(std::size_t, int)> pick = [&](std::size_t from, int chosen) {
    best = std::max(best, chosen);
    for (std::size_t k = from; k < paths.size(); ++k) {
      bool free = true;
      for (NodeId v : paths[k]) free = free && !used[static_cast<std::size_t>(v)];
      if (!free) continue;
      for (NodeId v : paths[k]) used[static_cast<std::size_t>(v)] = 1;
      pick(k + 1, chosen + 1);
      for (NodeId v : paths[k]) used[static_cast<std::size_t>(v)] = 0;
    }
  };
  pick(0, 0);
  return best;
}

TEST(Reachability, AgreesWithClosure) {
  for (Seed seed = 0; seed < 40; ++seed) {
    const NetworkStructure s = random_graph(seed, 8, 2);
    const auto expected = closure(s);
    const Reachability reach(s);
    for (NodeId i = 0; i < s.node_count(); ++i) {
      for (NodeId j = 0; j < s.node_count(); ++j) {
        const bool want = expected[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        EXPECT_EQ(reach(i, j), want);
        EXPECT_EQ(reachable(s, i, j), want);
        const auto path = find_path(s, i, j);
        ASSERT_EQ(path.has_value(), want);
        if (path) {
          EXPECT_EQ(path->front(), i);
          EXPECT_EQ(path->back(), j);
          for (std::size_t k = 0; k + 1 < path->size(); ++k) EXPECT_TRUE(s.find_edge((*path)[k], (*path)[k + 1]));
        }
      }
    }
  }
}

TEST(Reachability, RejectsOutOfRangeNodes) {
  const NetworkStructure s(2, {Edge{0, 1, true, {}}}, {0}, {1});
  EXPECT_THROW(reachable(s, 0, 2), std::out_of_range);
  EXPECT_THROW(find_path(s, -1, 1), std::out_of_range);
}

TEST(DisjointPaths, MatchesBruteForce) {
  for (Seed seed = 0; seed < 150; ++seed) {
    const NetworkStructure s = random_graph(seed + 1000, 6, 3);
    const std::vector<NodeId> sources(s.excited().begin(), s.excited().end());
    const std::vector<NodeId> targets(s.measured().begin(), s.measured().end());
    const DisjointPaths result = max_vertex_disjoint(s, sources, targets);
    EXPECT_EQ(result.beta, brute_force_beta(s, sources, targets)) << serialize_structure(s);
    EXPECT_EQ(static_cast<int>(result.certificate.paths.size()), result.beta);
    EXPECT_TRUE(verify_certificate(s, result.certificate));
  }
}

TEST(DisjointPaths, BraidedChainsHaveThreePaths) {
  const ReferenceGraph g = braided_chains_graph();
  const DisjointPaths result = max_vertex_disjoint(g.structure, g.sources, g.targets);
  EXPECT_EQ(result.beta, 3);
  EXPECT_TRUE(verify_certificate(g.structure, result.certificate));
  EXPECT_EQ(brute_force_beta(g.structure, g.sources, g.targets), 3);
}

TEST(DisjointPaths, RepeatedNodesSaturate) {
  const NetworkStructure s(4, {Edge{0, 1, true, {}}, Edge{0, 2, true, {}}, Edge{1, 3, true, {}}, Edge{2, 3, true, {}}},
                           {0}, {3});
  const std::vector<NodeId> twice{0, 0};
  EXPECT_EQ(max_vertex_disjoint(s, twice, std::vector<NodeId>{1, 2}).beta, 1);
  EXPECT_EQ(max_vertex_disjoint(s, std::vector<NodeId>{1, 2}, std::vector<NodeId>{3, 3}).beta, 1);
  // A node in both sets is a length-zero path.
  const DisjointPaths self = max_vertex_disjoint(s, std::vector<NodeId>{1}, std::vector<NodeId>{1});
  EXPECT_EQ(self.beta, 1);
  EXPECT_EQ(self.certificate.paths.front(), Path{1});
}

TEST(DisjointPaths, EmptySetsAndIsolatedNodes) {
  const NetworkStructure s(3, {Edge{0, 1, true, {}}}, {0}, {2});
  EXPECT_EQ(max_vertex_disjoint(s, std::vector<NodeId>{}, std::vector<NodeId>{1}).beta, 0);
  EXPECT_EQ(max_vertex_disjoint(s, std::vector<NodeId>{0}, std::vector<NodeId>{2}).beta, 0);
}

TEST(Certificates, RejectInvalidPathSets) {
  const NetworkStructure s(4, {Edge{0, 1, true, {}}, Edge{1, 2, true, {}}, Edge{3, 1, true, {}}}, {0, 3}, {2});
  EXPECT_TRUE(verify_certificate(s, PathCertificate{{{0, 1, 2}}, {0, 3}, {2}}));
  // Two paths through node 1.
  EXPECT_FALSE(verify_certificate(s, PathCertificate{{{0, 1, 2}, {3, 1}}, {0, 3}, {1, 2}}));
  // Missing edge.
  EXPECT_FALSE(verify_certificate(s, PathCertificate{{{0, 2}}, {0}, {2}}));
  // Wrong endpoint.
  EXPECT_FALSE(verify_certificate(s, PathCertificate{{{0, 1}}, {0}, {2}}));
  EXPECT_FALSE(verify_certificate(s, PathCertificate{{{}}, {0}, {2}}));
}

TEST(Lemma1, GenericRankEqualsDisjointPaths) {
  const ReferenceGraph g = braided_chains_graph();
  const Lemma1Check ref = check_lemma1(g.structure, g.sources, g.targets);
  EXPECT_EQ(ref.beta, 3);
  EXPECT_EQ(ref.generic_rank, 3);
  EXPECT_TRUE(ref.agrees);
  for (Seed seed = 0; seed < 60; ++seed) {
    const NetworkStructure s = random_graph(seed + 2000, 8, 4);
    const Lemma1Check check = check_lemma1(s, s.excited(), s.measured());
    EXPECT_TRUE(check.agrees) << serialize_structure(s);
  }
}

TEST(Lemma1, FixedKnownValuesAreRandomized) {
  // The fixed values make T(2, 0) vanish; generically it does not.
  const NetworkStructure s(3,
                           {Edge{0, 1, true, Complex(1.0)}, Edge{1, 2, true, Complex(1.0)},
                            Edge{0, 2, true, Complex(-1.0)}},
                           {0}, {2});
  const Lemma1Check check = check_lemma1(s, s.excited(), s.measured());
  EXPECT_EQ(check.generic_rank, 1);
  EXPECT_EQ(check.beta, 1);
}

}  // namespace

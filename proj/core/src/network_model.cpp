#include "netident/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "netident/error.hpp"
#include "netident/numeric_core.hpp"

namespace netident {

namespace {

std::string edge_label(NodeId from, NodeId to) {
  std::ostringstream os;
  os << "(" << from << "->" << to << ")";
  return os.str();
}

void check_node_set(std::vector<NodeId>& nodes, int n, const char* what) {
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] < 0 || nodes[k] >= n) {
      throw StructureError(std::string(what) + " node " + std::to_string(nodes[k]) +
                           " out of range for " + std::to_string(n) + " nodes");
    }
    if (k > 0 && nodes[k] == nodes[k - 1]) {
      throw StructureError(std::string("duplicate ") + what + " node " +
                           std::to_string(nodes[k]));
    }
  }
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

ComplexMatrix identity_minus(const ComplexMatrix& g) {
  return ComplexMatrix::Identity(g.rows(), g.cols()) - g;
}

ComplexMatrix matrix_from_values(const NetworkStructure& s, std::span<const Complex> values) {
  const int n = s.node_count();
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  const auto edges = s.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    g(edges[e].to, edges[e].from) = values[e];
  }
  return g;
}

bool well_conditioned(const NetworkStructure& s, std::span<const Complex> values, double bound) {
  const double cond = condition_number(identity_minus(matrix_from_values(s, values)));
  return std::isfinite(cond) && cond <= bound;
}

class EdgeValueSampler {
 public:
  EdgeValueSampler(Seed seed, const SamplingPolicy& policy)
      : rng_(seed),
        modulus_(policy.min_modulus, policy.max_modulus),
        phase_(0.0, 2.0 * std::numbers::pi) {}

  Complex operator()() { return std::polar(modulus_(rng_), phase_(rng_)); }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> modulus_;
  std::uniform_real_distribution<double> phase_;
};

void check_policy(const SamplingPolicy& policy) {
  if (!(policy.min_modulus > 0.0) || policy.max_modulus < policy.min_modulus) {
    throw std::invalid_argument("sampling annulus must satisfy 0 < min_modulus <= max_modulus");
  }
  if (policy.retry_cap < 0) throw std::invalid_argument("retry_cap must be non-negative");
}

}  // namespace

NetworkStructure::NetworkStructure(int node_count, std::vector<Edge> edges,
                                   std::vector<NodeId> excited, std::vector<NodeId> measured,
                                   StructureOptions options)
    : node_count_(node_count),
      edges_(std::move(edges)),
      excited_(std::move(excited)),
      measured_(std::move(measured)),
      options_(options) {
  if (node_count_ < 1) throw StructureError("node count must be positive");
  for (const Edge& e : edges_) {
    if (e.from < 0 || e.from >= node_count_ || e.to < 0 || e.to >= node_count_) {
      throw StructureError("edge " + edge_label(e.from, e.to) + " node index out of range for " +
                           std::to_string(node_count_) + " nodes");
    }
    if (e.from == e.to && !options_.allow_self_loops) {
      throw StructureError("self-loop " + edge_label(e.from, e.to) + " not allowed");
    }
    if (e.value.has_value()) {
      if (!e.known) throw StructureError("unknown edge " + edge_label(e.from, e.to) + " carries a value");
      if (!finite(*e.value)) throw StructureError("edge " + edge_label(e.from, e.to) + " value not finite");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.to, a.from) < std::pair(b.to, b.from);
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].from == edges_[k - 1].from && edges_[k].to == edges_[k - 1].to) {
      throw StructureError("duplicate edge " + edge_label(edges_[k].from, edges_[k].to));
    }
  }
  check_node_set(excited_, node_count_, "excited");
  check_node_set(measured_, node_count_, "measured");

  successors_.assign(node_count_, {});
  predecessors_.assign(node_count_, {});
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (!edges_[k].known) unknown_.push_back(k);
    successors_[edges_[k].from].push_back(edges_[k].to);
    predecessors_[edges_[k].to].push_back(edges_[k].from);
  }
}

std::optional<std::size_t> NetworkStructure::find_edge(NodeId from, NodeId to) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(to, from),
                             [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
                               return std::pair(e.to, e.from) < key;
                             });
  if (it != edges_.end() && it->from == from && it->to == to) {
    return static_cast<std::size_t>(it - edges_.begin());
  }
  return std::nullopt;
}

std::span<const NodeId> NetworkStructure::successors(NodeId v) const { return successors_.at(v); }

std::span<const NodeId> NetworkStructure::predecessors(NodeId v) const {
  return predecessors_.at(v);
}

NetworkStructure without_fixed_values(const NetworkStructure& s) {
  std::vector<Edge> edges(s.edges().begin(), s.edges().end());
  for (Edge& e : edges) e.value.reset();
  return NetworkStructure(s.node_count(), std::move(edges),
                          {s.excited().begin(), s.excited().end()},
                          {s.measured().begin(), s.measured().end()},
                          {.allow_self_loops = s.allows_self_loops()});
}

// --- serialization -----------------------------------------------------------

namespace {

int read_int(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(std::string(what) + " out of integer range");
  }
  return static_cast<int>(v);
}

std::vector<NodeId> read_nodes(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be a list of integers");
  std::vector<NodeId> nodes;
  for (const auto& item : j) nodes.push_back(read_int(item, what));
  return nodes;
}

Edge read_edge(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("edge must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "from" && key != "to" && key != "known" && key != "value") {
      throw ParseError("unexpected edge field '" + key + "'");
    }
  }
  if (!j.contains("from") || !j.contains("to") || !j.contains("known")) {
    throw ParseError("edge requires 'from', 'to' and 'known'");
  }
  Edge e;
  e.from = read_int(j.at("from"), "edge.from");
  e.to = read_int(j.at("to"), "edge.to");
  if (!j.at("known").is_boolean()) throw ParseError("edge.known must be a boolean");
  e.known = j.at("known").get<bool>();
  if (j.contains("value")) {
    const auto& v = j.at("value");
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ParseError("edge.value must be [re, im]");
    }
    e.value = Complex(v[0].get<double>(), v[1].get<double>());
  }
  return e;
}

}  // namespace

NetworkStructure structure_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("structure must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "n" && key != "edges" && key != "excited" && key != "measured" &&
        key != "allow_self_loops") {
      throw ParseError("unexpected field '" + key + "'");
    }
  }
  for (const char* key : {"n", "edges", "excited", "measured"}) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  }
  const int n = read_int(j.at("n"), "n");
  if (!j.at("edges").is_array()) throw ParseError("edges must be a list");
  std::vector<Edge> edges;
  for (const auto& item : j.at("edges")) edges.push_back(read_edge(item));
  StructureOptions options;
  if (j.contains("allow_self_loops")) {
    if (!j.at("allow_self_loops").is_boolean()) throw ParseError("allow_self_loops must be a boolean");
    options.allow_self_loops = j.at("allow_self_loops").get<bool>();
  }
  return NetworkStructure(n, std::move(edges), read_nodes(j.at("excited"), "excited"),
                          read_nodes(j.at("measured"), "measured"), options);
}

NetworkStructure parse_structure(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed structure text: ") + e.what());
  }
  return structure_from_json(j);
}

nlohmann::ordered_json structure_to_json(const NetworkStructure& s) {
  nlohmann::ordered_json j;
  j["n"] = s.node_count();
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : s.edges()) {
    nlohmann::ordered_json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["known"] = e.known;
    if (e.value) je["value"] = {e.value->real(), e.value->imag()};
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  j["excited"] = std::vector<NodeId>(s.excited().begin(), s.excited().end());
  j["measured"] = std::vector<NodeId>(s.measured().begin(), s.measured().end());
  if (s.allows_self_loops()) j["allow_self_loops"] = true;
  return j;
}

std::string serialize_structure(const NetworkStructure& s) {
  return structure_to_json(s).dump(2) + "\n";
}

std::uint64_t structure_hash(const NetworkStructure& s) {
  const std::string text = structure_to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Seed derive_seed(Seed base, std::initializer_list<std::uint64_t> parts) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::uint64_t h = splitmix(base);
  for (std::uint64_t p : parts) h = splitmix(h ^ splitmix(p));
  return h;
}

// --- realizations ------------------------------------------------------------

Realization::Realization(NetworkStructure structure, std::vector<Complex> values,
                         double condition_bound)
    : structure_(std::move(structure)), values_(std::move(values)), condition_bound_(condition_bound) {
  const auto edges = structure_.edges();
  if (values_.size() != edges.size()) {
    throw std::invalid_argument("realization needs one value per edge: got " +
                                std::to_string(values_.size()) + ", expected " +
                                std::to_string(edges.size()));
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!finite(values_[e])) throw NumericError("realization value not finite");
    if (edges[e].value && *edges[e].value != values_[e]) {
      throw std::invalid_argument("realization contradicts fixed value of edge " +
                                  edge_label(edges[e].from, edges[e].to));
    }
  }
  if (!well_conditioned(structure_, values_, condition_bound)) {
    throw NumericError("I - G is singular or ill-conditioned");
  }
}

ComplexMatrix Realization::network_matrix() const { return matrix_from_values(structure_, values_); }

namespace {

std::vector<Complex> draw_values(const NetworkStructure& s, EdgeValueSampler& draw) {
  std::vector<Complex> values;
  values.reserve(s.edges().size());
  for (const Edge& e : s.edges()) values.push_back(e.value ? *e.value : draw());
  return values;
}

std::vector<Complex> sample_well_conditioned(const NetworkStructure& s, EdgeValueSampler& draw,
                                             const SamplingPolicy& policy) {
  for (int attempt = 0; attempt <= policy.retry_cap; ++attempt) {
    auto values = draw_values(s, draw);
    if (well_conditioned(s, values, policy.condition_bound)) return values;
  }
  throw SamplingError("retry cap exhausted: I - G stays ill-conditioned after " +
                      std::to_string(policy.retry_cap) + " resamples");
}

}  // namespace

Realization sample_realization(const NetworkStructure& s, Seed seed, const SamplingPolicy& policy) {
  check_policy(policy);
  EdgeValueSampler draw(seed, policy);
  return Realization(s, sample_well_conditioned(s, draw, policy), policy.condition_bound);
}

RealizationPair sample_pair(const NetworkStructure& s, Seed seed, const SamplingPolicy& policy) {
  check_policy(policy);
  EdgeValueSampler draw(seed, policy);
  auto g_values = sample_well_conditioned(s, draw, policy);
  for (int attempt = 0; attempt <= policy.retry_cap; ++attempt) {
    auto g_prime_values = g_values;
    for (std::size_t e : s.unknown_edge_indices()) g_prime_values[e] = draw();
    if (well_conditioned(s, g_prime_values, policy.condition_bound)) {
      return RealizationPair{Realization(s, std::move(g_values), policy.condition_bound),
                             Realization(s, std::move(g_prime_values), policy.condition_bound)};
    }
  }
  throw SamplingError("retry cap exhausted while sampling G'");
}

// --- random structures -------------------------------------------------------

namespace {

// First k entries of a uniformly shuffled copy of items.
template <typename T>
std::vector<T> choose(std::vector<T> items, std::size_t k, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(k);
  return items;
}

}  // namespace

NetworkStructure random_structure(const RandomStructureParams& p, Seed seed) {
  const int n = p.node_count;
  if (n < 1) throw InfeasibleError("node count must be positive");
  if (!(p.density >= 0.0 && p.density <= 1.0)) throw InfeasibleError("density must lie in [0, 1]");
  if (p.excited_count < 0 || p.excited_count > n || p.measured_count < 0 || p.measured_count > n) {
    throw InfeasibleError("excited/measured counts must lie in [0, n]");
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId j = 0; j < n; ++j) {
    for (NodeId i = 0; i < n; ++i) {
      if (i != j || p.allow_self_loops) pairs.emplace_back(j, i);
    }
  }
  const auto edge_count =
      static_cast<std::size_t>(std::llround(p.density * static_cast<double>(pairs.size())));
  if (p.unknown_count < 0 || static_cast<std::size_t>(p.unknown_count) > edge_count) {
    throw InfeasibleError("unknown count " + std::to_string(p.unknown_count) + " exceeds the " +
                          std::to_string(edge_count) + " edges available at this density");
  }

  std::mt19937_64 rng(seed);
  const auto chosen = choose(std::move(pairs), edge_count, rng);
  std::vector<Edge> edges;
  edges.reserve(edge_count);
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    edges.push_back(Edge{.from = chosen[k].first,
                         .to = chosen[k].second,
                         .known = k >= static_cast<std::size_t>(p.unknown_count),
                         .value = std::nullopt});
  }
  std::vector<NodeId> nodes(n);
  for (NodeId v = 0; v < n; ++v) nodes[v] = v;
  auto excited = choose(nodes, static_cast<std::size_t>(p.excited_count), rng);
  auto measured = choose(nodes, static_cast<std::size_t>(p.measured_count), rng);
  return NetworkStructure(n, std::move(edges), std::move(excited), std::move(measured),
                          {.allow_self_loops = p.allow_self_loops});
}

}  // namespace netident

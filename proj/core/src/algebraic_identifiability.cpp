#include "netident/algebraic_identifiability.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "netident/error.hpp"

namespace netident {

namespace {

// Stream tags keep the K, K^ and decoupled samples independent of each other.
constexpr std::uint64_t kStreamK = 0x4b;
constexpr std::uint64_t kStreamKHat = 0x4b48;
constexpr std::uint64_t kStreamDecoupled = 0x4443;

void require_compatible(const Realization& g, const Realization& g_prime) {
  if (!(g.structure() == g_prime.structure())) {
    throw std::invalid_argument("G and G' must share the same structure");
  }
  const auto edges = g.structure().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].known && g.value(e) != g_prime.value(e)) {
      throw std::invalid_argument("G and G' must agree on known edges");
    }
  }
}

}  // namespace

EdgeSelector::EdgeSelector(const NetworkStructure& s) : n_(s.node_count()) {
  rows_.reserve(s.unknown_count());
  for (std::size_t k = 0; k < s.unknown_count(); ++k) {
    const Edge& e = s.unknown_edge(k);
    rows_.push_back(static_cast<Eigen::Index>(e.from) * n_ + e.to);
  }
}

ComplexMatrix EdgeSelector::matrix() const {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n_) * n_,
                                        static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t k = 0; k < rows_.size(); ++k) m(rows_[k], static_cast<Eigen::Index>(k)) = 1.0;
  return m;
}

ComplexVector EdgeSelector::expand(const ComplexVector& delta) const {
  if (static_cast<std::size_t>(delta.size()) != rows_.size()) {
    throw std::invalid_argument("delta length must equal the unknown-edge count");
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n_) * n_);
  for (std::size_t k = 0; k < rows_.size(); ++k) v(rows_[k]) = delta(static_cast<Eigen::Index>(k));
  return v;
}

ComplexMatrix EdgeSelector::delta_matrix(const ComplexVector& delta) const {
  return unvec(expand(delta), n_, n_);
}

ComplexMatrix excitation_matrix(const NetworkStructure& s) {
  const auto excited = s.excited();
  ComplexMatrix b = ComplexMatrix::Zero(s.node_count(), static_cast<Eigen::Index>(excited.size()));
  for (std::size_t k = 0; k < excited.size(); ++k) b(excited[k], static_cast<Eigen::Index>(k)) = 1.0;
  return b;
}

ComplexMatrix measurement_matrix(const NetworkStructure& s) {
  const auto measured = s.measured();
  ComplexMatrix c = ComplexMatrix::Zero(static_cast<Eigen::Index>(measured.size()), s.node_count());
  for (std::size_t k = 0; k < measured.size(); ++k) c(static_cast<Eigen::Index>(k), measured[k]) = 1.0;
  return c;
}

namespace {

struct KHatAssembly {
  ComplexMatrix k_hat;
  // ||B^T T'^T|| * ||C T||, the norm of the full Kronecker operator.
  double scale = 0.0;
};

KHatAssembly assemble_K_hat(const Realization& g, const Realization& g_prime) {
  require_compatible(g, g_prime);
  const NetworkStructure& s = g.structure();
  const ComplexMatrix t = closed_loop(g);
  const ComplexMatrix t_prime = closed_loop(g_prime);
  // Left factor B^T T'^T (n_B x n), right factor C T (n_C x n).
  const ComplexMatrix left = excitation_matrix(s).transpose() * t_prime.transpose();
  const ComplexMatrix right = measurement_matrix(s) * t;

  // Only the columns of the Kronecker product picked by I_{G^Delta} are
  // formed: kron column r pairs left column r / n with right column r % n.
  const EdgeSelector selector(s);
  const Eigen::Index n = s.node_count();
  KHatAssembly out;
  out.k_hat.resize(left.rows() * right.rows(), static_cast<Eigen::Index>(selector.size()));
  for (std::size_t col = 0; col < selector.size(); ++col) {
    const Eigen::Index r = selector.row_of(col);
    const auto a = left.col(r / n);
    const auto b = right.col(r % n);
    for (Eigen::Index p = 0; p < a.size(); ++p) {
      out.k_hat.block(p * b.size(), static_cast<Eigen::Index>(col), b.size(), 1) = a(p) * b;
    }
  }
  out.scale = spectral_norm(left) * spectral_norm(right);
  return out;
}

struct SampledKHat {
  int rank = 0;
  std::optional<RealizationPair> pair;
  ComplexMatrix k_hat;
};

SampledKHat max_rank_over_pairs(const NetworkStructure& s, const GenericRankConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("samples must be at least 1");
  const std::uint64_t hash = structure_hash(s);
  SampledKHat best;
  for (int k = 0; k < config.samples; ++k) {
    auto pair = sample_pair(s, derive_seed(config.seed, {hash, kStreamKHat, std::uint64_t(k)}),
                            config.sampling);
    auto assembly = assemble_K_hat(pair.g, pair.g_prime);
    const int rank = numerical_rank(assembly.k_hat, config.rank, assembly.scale);
    ComplexMatrix& k_hat = assembly.k_hat;
    if (!best.pair || rank > best.rank) {
      best.rank = rank;
      best.pair.emplace(std::move(pair));
      best.k_hat = std::move(k_hat);
    }
  }
  return best;
}

}  // namespace

ComplexMatrix build_K(const Realization& g) { return build_K_hat(g, g); }

ComplexMatrix build_K_hat(const Realization& g, const Realization& g_prime) {
  return assemble_K_hat(g, g_prime).k_hat;
}

ExtendedComplexMatrix build_K_hat_extended(const Realization& g, const Realization& g_prime) {
  require_compatible(g, g_prime);
  const NetworkStructure& s = g.structure();
  const ComplexMatrix t = closed_loop(g);
  const ComplexMatrix t_prime = closed_loop(g_prime);
  const auto n_c = static_cast<Eigen::Index>(s.measured().size());
  ExtendedComplexMatrix k_hat(static_cast<Eigen::Index>(s.excited().size()) * n_c,
                              static_cast<Eigen::Index>(s.unknown_count()));
  for (std::size_t alpha = 0; alpha < s.unknown_count(); ++alpha) {
    const Edge& e = s.unknown_edge(alpha);
    for (std::size_t b = 0; b < s.excited().size(); ++b) {
      const ExtendedComplex leg(t_prime(e.from, s.excited()[b]));
      for (std::size_t c = 0; c < s.measured().size(); ++c) {
        k_hat(static_cast<Eigen::Index>(b) * n_c + static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(alpha)) =
            leg * ExtendedComplex(t(s.measured()[c], e.to));
      }
    }
  }
  return k_hat;
}

Complex determinant_K_hat(const Realization& g, const Realization& g_prime) {
  const ExtendedComplex det = determinant_extended(build_K_hat_extended(g, g_prime));
  return Complex(static_cast<double>(det.real()), static_cast<double>(det.imag()));
}

int sample_rank_K_hat(const Realization& g, const Realization& g_prime, const RankPolicy& policy) {
  const auto assembly = assemble_K_hat(g, g_prime);
  return numerical_rank(assembly.k_hat, policy, assembly.scale);
}

int generic_rank_K(const NetworkStructure& s, const GenericRankConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("samples must be at least 1");
  const std::uint64_t hash = structure_hash(s);
  int best = 0;
  for (int k = 0; k < config.samples; ++k) {
    const auto r = sample_realization(
        s, derive_seed(config.seed, {hash, kStreamK, std::uint64_t(k)}), config.sampling);
    best = std::max(best, sample_rank_K_hat(r, r, config.rank));
  }
  return best;
}

int generic_rank_K_hat(const NetworkStructure& s, const GenericRankConfig& config) {
  return max_rank_over_pairs(s, config).rank;
}

const char* to_string(Verdict v) {
  return v == Verdict::identifiable ? "identifiable" : "not-identifiable";
}

IdentifiabilityReport analyze(const NetworkStructure& s, const AnalysisConfig& config) {
  IdentifiabilityReport report;
  const std::size_t m = s.unknown_count();
  report.unknown_count = m;
  report.samples_used = config.rank.samples;
  report.rank_K = generic_rank_K(s, config.rank);
  const SampledKHat sampled = max_rank_over_pairs(s, config.rank);
  report.rank_K_hat = sampled.rank;

  const auto full = [m](int rank) {
    return static_cast<std::size_t>(rank) == m ? Verdict::identifiable : Verdict::not_identifiable;
  };
  report.verdict_local = full(report.rank_K);
  report.verdict_decoupled = full(report.rank_K_hat);

  const std::size_t pairs = s.excited().size() * s.measured().size();
  if (m > pairs) {
    report.reason = "more unknowns than (in, out) data";
  } else if (m == 0) {
    report.reason = "no unknown edges";
  }

  if (static_cast<std::size_t>(report.rank_K_hat) < m) {
    const ComplexMatrix& k_hat = sampled.k_hat;
    Eigen::JacobiSVD<ComplexMatrix> svd(k_hat, Eigen::ComputeFullV);
    const ComplexVector delta = svd.matrixV().col(static_cast<Eigen::Index>(m) - 1);

    const auto& pair = *sampled.pair;
    const ComplexMatrix delta_full = EdgeSelector(s).delta_matrix(delta);
    const ComplexMatrix response = measurement_matrix(s) * closed_loop(pair.g) * delta_full *
                                   closed_loop(pair.g_prime) * excitation_matrix(s);
    const double scale = spectral_norm(k_hat) * delta.norm();
    report.kernel_witness = delta;
    report.witness_residual = scale > 0.0 ? response.norm() / scale : response.norm();
  }
  return report;
}

NetworkStructure build_decoupled(const NetworkStructure& s) {
  const int n = s.node_count();
  std::vector<Edge> edges;
  edges.reserve(2 * s.edges().size() + s.unknown_count());
  for (const Edge& e : s.edges()) {
    edges.push_back(Edge{.from = e.from, .to = e.to, .known = true, .value = e.value});
    edges.push_back(Edge{.from = e.from + n, .to = e.to + n, .known = true, .value = e.value});
    if (!e.known) edges.push_back(Edge{.from = e.from + n, .to = e.to, .known = false, .value = {}});
  }
  std::vector<NodeId> excited;
  for (NodeId b : s.excited()) excited.push_back(b + n);
  return NetworkStructure(2 * n, std::move(edges), std::move(excited),
                          {s.measured().begin(), s.measured().end()},
                          {.allow_self_loops = s.allows_self_loops()});
}

Realization decoupled_realization(const Realization& g, const Realization& g_prime,
                                  std::span<const Complex> cross_values) {
  require_compatible(g, g_prime);
  const NetworkStructure& s = g.structure();
  if (cross_values.size() != s.unknown_count()) {
    throw std::invalid_argument("one cross value per unknown edge required");
  }
  std::vector<std::size_t> unknown_position(s.edges().size(), 0);
  for (std::size_t k = 0; k < s.unknown_count(); ++k) unknown_position[s.unknown_edge_indices()[k]] = k;

  NetworkStructure decoupled = build_decoupled(s);
  const int n = s.node_count();
  std::vector<Complex> values;
  values.reserve(decoupled.edges().size());
  for (const Edge& e : decoupled.edges()) {
    if (e.from < n) {
      values.push_back(g.value(*s.find_edge(e.from, e.to)));
    } else if (e.to >= n) {
      values.push_back(g_prime.value(*s.find_edge(e.from - n, e.to - n)));
    } else {
      values.push_back(cross_values[unknown_position[*s.find_edge(e.from - n, e.to)]]);
    }
  }
  // I - G^ is block triangular; its conditioning follows from the two copies.
  return Realization(std::move(decoupled), std::move(values),
                     std::numeric_limits<double>::infinity());
}

Prop4Check check_prop4_detailed(const NetworkStructure& s, const GenericRankConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("samples must be at least 1");
  Prop4Check check;
  check.unknown_count = s.unknown_count();
  check.rank_K_hat = generic_rank_K_hat(s, config);

  const std::uint64_t hash = structure_hash(s);
  for (int k = 0; k < config.samples; ++k) {
    const Seed seed = derive_seed(config.seed, {hash, kStreamDecoupled, std::uint64_t(k)});
    const auto pair = sample_pair(s, seed, config.sampling);
    std::mt19937_64 rng(derive_seed(seed, {1}));
    std::uniform_real_distribution<double> modulus(config.sampling.min_modulus,
                                                   config.sampling.max_modulus);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<Complex> cross(s.unknown_count());
    for (auto& z : cross) {
      const double r = modulus(rng);
      z = std::polar(r, phase(rng));
    }
    const auto realization = decoupled_realization(pair.g, pair.g_prime, cross);
    check.rank_K_decoupled =
        std::max(check.rank_K_decoupled, sample_rank_K_hat(realization, realization, config.rank));
  }
  const auto m = static_cast<int>(check.unknown_count);
  check.agrees = (check.rank_K_hat == m) == (check.rank_K_decoupled == m);
  return check;
}

bool check_prop4(const NetworkStructure& s, const GenericRankConfig& config) {
  return check_prop4_detailed(s, config).agrees;
}

}  // namespace netident

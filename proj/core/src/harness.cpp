#include "netident/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "netident/error.hpp"

namespace netident {

namespace {

constexpr int kGenerationAttempts = 64;
constexpr std::uint64_t kStreamStructure = 0x5354;
constexpr std::uint64_t kStreamDeterminant = 0x4454;
constexpr std::uint64_t kStreamDisjoint = 0x4450;

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
}

GenericRankConfig rank_config(const CampaignConfig& config, Seed seed) {
  GenericRankConfig r;
  r.samples = config.samples;
  r.seed = seed;
  r.rank = config.rank;
  return r;
}

void evaluate_conditions(const CampaignConfig& config, StructureRecord& record) {
  const NetworkStructure& s = record.structure;
  const std::size_t product = s.excited().size() * s.measured().size();
  if (s.unknown_count() != product) {
    record.conditions_note = "unknown count differs from n_B * n_C";
    return;
  }
  if (product > config.conditions.cap) {
    record.conditions_note = "n_B * n_C above enumeration cap";
    return;
  }
  ConditionRecord c{check_prop6(s, config.conditions),
                    check_lemma2(s, Side::excitation, config.conditions),
                    check_lemma2(s, Side::measurement, config.conditions),
                    check_theorem1(s, config.conditions)};

  const IdentifiabilityReport& report = *record.report;
  const bool decoupled = report.verdict_decoupled == Verdict::identifiable;
  const std::pair<const char*, const ConditionVerdict*> named[] = {
      {"prop6", &c.prop6},
      {"lemma2_excitation", &c.lemma2_excitation},
      {"lemma2_measurement", &c.lemma2_measurement},
      {"theorem1", &c.theorem1},
  };
  for (const auto& [name, verdict] : named) {
    if (decoupled && !verdict->necessary_holds) {
      record.violations.push_back(std::string("necessity:") + name);
    }
    if (verdict->sufficient_holds && !decoupled) {
      record.violations.push_back(std::string("sufficiency:") + name);
    }
  }
  record.conditions = std::move(c);
}

}  // namespace

const char* to_string(UnknownPolicy p) {
  return p == UnknownPolicy::exact ? "exact" : "at-most";
}

UnknownPolicy parse_unknown_policy(const std::string& text) {
  if (text == "exact") return UnknownPolicy::exact;
  if (text == "at-most") return UnknownPolicy::at_most;
  throw std::invalid_argument("unknown-count policy must be 'exact' or 'at-most'");
}

void validate(const CampaignConfig& config) {
  if (config.count < 1) throw std::invalid_argument("count must be at least 1");
  if (config.n_min < 1 || config.n_min > config.n_max) throw std::invalid_argument("empty node-count range");
  if (!(config.density_min > 0.0 && config.density_min <= config.density_max && config.density_max <= 1.0)) {
    throw std::invalid_argument("density range must satisfy 0 < min <= max <= 1");
  }
  if (config.io_max < 1) throw std::invalid_argument("io_max must be at least 1");
  if (config.max_product < 1) throw std::invalid_argument("max_product must be at least 1");
  if (config.samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (config.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
}

Seed structure_seed(const CampaignConfig& config, std::size_t index) {
  return derive_seed(config.seed, {kStreamStructure, std::uint64_t(index)});
}

NetworkStructure generate_structure(const CampaignConfig& config, Seed seed) {
  validate(config);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
    RandomStructureParams p;
    p.node_count = uniform_int(rng, config.n_min, config.n_max);
    p.density = uniform_real(rng, config.density_min, config.density_max);
    const int io = std::min(config.io_max, p.node_count);
    p.excited_count = uniform_int(rng, 1, io);
    p.measured_count = uniform_int(rng, 1, io);
    const int product = p.excited_count * p.measured_count;
    const Seed structure_draw = rng();
    if (product > config.max_product) continue;
    p.unknown_count = config.unknowns == UnknownPolicy::exact ? product : uniform_int(rng, 1, product);
    const auto pairs = static_cast<double>(p.node_count) * (p.node_count - 1);
    if (p.unknown_count > static_cast<int>(std::lround(p.density * pairs))) continue;
    return random_structure(p, structure_draw);
  }
  throw InfeasibleError("no structure satisfies the campaign ranges after " +
                        std::to_string(kGenerationAttempts) + " draws");
}

StructureRecord evaluate_structure(const CampaignConfig& config, const NetworkStructure& s, Seed seed,
                                   std::size_t index) {
  const auto start = std::chrono::steady_clock::now();
  StructureRecord record;
  record.index = index;
  record.seed = seed;
  record.structure = s;
  record.hash = structure_hash(s);
  try {
    record.report = analyze(s, AnalysisConfig{rank_config(config, seed)});
    if (record.report->verdict_local == Verdict::identifiable &&
        record.report->verdict_decoupled != Verdict::identifiable) {
      record.violations.push_back("prop3");
    }
    evaluate_conditions(config, record);
  } catch (const std::exception& e) {
    record.error = e.what();
  }
  if (config.timing) {
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return record;
}

StructureRecord evaluate_seed(const CampaignConfig& config, Seed seed, std::size_t index) {
  return evaluate_structure(config, generate_structure(config, seed), seed, index);
}

CampaignResult run_campaign(const CampaignConfig& config) {
  validate(config);
  CampaignResult result;
  result.config = config;
  result.records.resize(config.count);

  // Workers pull indices; every record lands in its own slot, so the output
  // order never depends on scheduling.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < config.count; i = next++) {
      try {
        result.records[i] = evaluate_seed(config, structure_seed(config, i), i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = std::min<std::size_t>(config.jobs, config.count);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  CampaignSummary& sum = result.summary;
  for (const StructureRecord& r : result.records) {
    ++sum.structures;
    if (!r.error.empty()) ++sum.errors;
    if (r.report) {
      if (r.report->verdict_local == Verdict::identifiable) ++sum.local_identifiable;
      if (r.report->verdict_decoupled == Verdict::identifiable) ++sum.decoupled_identifiable;
    }
    if (r.conditions) ++sum.conditions_evaluated;
    if (r.rank_mismatch()) {
      ++sum.rank_mismatches;
      result.mismatches.push_back(r.index);
    }
    if (!r.violations.empty()) {
      sum.violations += r.violations.size();
      result.violating.push_back(r.index);
    }
  }
  return result;
}

ordered_json to_json(const CampaignConfig& c) {
  ordered_json j;
  j["count"] = c.count;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["density_min"] = c.density_min;
  j["density_max"] = c.density_max;
  j["io_max"] = c.io_max;
  j["max_product"] = c.max_product;
  j["unknowns"] = to_string(c.unknowns);
  j["conditions_cap"] = c.conditions.cap;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["tolerance"] = c.rank.relative_tolerance;
  return j;
}

ordered_json to_json(const StructureRecord& r, bool include_structure) {
  ordered_json j;
  j["type"] = "record";
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["hash"] = r.hash;
  j["n"] = r.structure.node_count();
  j["edges"] = r.structure.edges().size();
  j["n_B"] = r.structure.excited().size();
  j["n_C"] = r.structure.measured().size();
  j["unknown_count"] = r.structure.unknown_count();
  if (r.report) {
    j["rank_K"] = r.report->rank_K;
    j["rank_K_hat"] = r.report->rank_K_hat;
    j["verdict_local"] = to_string(r.report->verdict_local);
    j["verdict_decoupled"] = to_string(r.report->verdict_decoupled);
  }
  if (r.conditions) {
    const auto flags = [](const ConditionVerdict& v) {
      return ordered_json{{"necessary", v.necessary_holds},
                          {"sufficient", v.sufficient_holds},
                          {"count", v.counted_assignations}};
    };
    j["conditions"] = {{"prop6", flags(r.conditions->prop6)},
                       {"lemma2_excitation", flags(r.conditions->lemma2_excitation)},
                       {"lemma2_measurement", flags(r.conditions->lemma2_measurement)},
                       {"theorem1", flags(r.conditions->theorem1)}};
  } else if (!r.conditions_note.empty()) {
    j["conditions_skipped"] = r.conditions_note;
  }
  if (!r.violations.empty()) j["violations"] = r.violations;
  if (!r.error.empty()) j["error"] = r.error;
  if (r.seconds) j["seconds"] = *r.seconds;
  if (include_structure) j["structure"] = structure_to_json(r.structure);
  return j;
}

ordered_json to_json(const CampaignSummary& s) {
  ordered_json j;
  j["structures"] = s.structures;
  j["local_identifiable"] = s.local_identifiable;
  j["decoupled_identifiable"] = s.decoupled_identifiable;
  j["conditions_evaluated"] = s.conditions_evaluated;
  j["rank_mismatches"] = s.rank_mismatches;
  j["violations"] = s.violations;
  j["errors"] = s.errors;
  return j;
}

void write_jsonl(const CampaignResult& result, std::ostream& out) {
  for (const StructureRecord& r : result.records) {
    const bool flagged = r.rank_mismatch() || !r.violations.empty() || !r.error.empty();
    out << to_json(r, flagged).dump() << '\n';
  }
  ordered_json summary;
  summary["type"] = "summary";
  summary["config"] = to_json(result.config);
  summary["counts"] = to_json(result.summary);
  summary["passed"] = result.passed();
  const auto reproduction = [&](const std::vector<std::size_t>& indices) {
    ordered_json list = ordered_json::array();
    for (std::size_t i : indices) {
      const StructureRecord& r = result.records[i];
      list.push_back({{"index", r.index},
                      {"seed", r.seed},
                      {"structure", structure_to_json(r.structure)},
                      {"violations", r.violations}});
    }
    return list;
  };
  summary["mismatches"] = reproduction(result.mismatches);
  summary["violating"] = reproduction(result.violating);
  out << summary.dump() << '\n';
}

void write_summary_csv(const CampaignResult& result, std::ostream& out) {
  struct Row {
    std::size_t structures = 0, local = 0, decoupled = 0, conditions = 0, mismatches = 0,
                violations = 0, errors = 0;
  };
  std::map<int, Row> rows;
  for (const StructureRecord& r : result.records) {
    Row& row = rows[r.structure.node_count()];
    ++row.structures;
    if (r.report && r.report->verdict_local == Verdict::identifiable) ++row.local;
    if (r.report && r.report->verdict_decoupled == Verdict::identifiable) ++row.decoupled;
    if (r.conditions) ++row.conditions;
    if (r.rank_mismatch()) ++row.mismatches;
    row.violations += r.violations.size();
    if (!r.error.empty()) ++row.errors;
  }
  out << "n,structures,local_identifiable,decoupled_identifiable,conditions_evaluated,"
         "rank_mismatches,violations,errors\n";
  for (const auto& [n, row] : rows) {
    out << n << ',' << row.structures << ',' << row.local << ',' << row.decoupled << ','
        << row.conditions << ',' << row.mismatches << ',' << row.violations << ',' << row.errors
        << '\n';
  }
}

bool determinant_close(Complex reference, Complex other) {
  return std::abs(reference - other) <= 1e-8 * std::abs(reference) + 1e-12;
}

ReferenceGraph braided_chains_graph() {
  const std::pair<NodeId, NodeId> arcs[] = {{0, 4}, {4, 6}, {1, 3}, {3, 7}, {2, 5},
                                            {5, 8}, {4, 1}, {3, 4}, {1, 5}, {5, 7}};
  std::vector<Edge> edges;
  for (const auto& [from, to] : arcs) edges.push_back(Edge{from, to, true, std::nullopt});
  ReferenceGraph g{NetworkStructure(9, std::move(edges), {0, 1, 2}, {6, 7, 8}), {0, 1, 2}, {6, 7, 8}};
  return g;
}

OracleReport run_oracles(const OracleConfig& config) {
  OracleReport report;

  // det K^ three ways on square structures.
  {
    CampaignConfig gen;
    gen.n_min = 3;
    gen.n_max = 8;
    gen.density_min = 0.2;
    gen.density_max = 0.6;
    gen.unknowns = UnknownPolicy::exact;
    gen.max_product = static_cast<int>(std::min<std::size_t>(config.cap, 6));
    gen.seed = config.seed;
    EnumerationLimits limits{config.cap};
    DeterminantSuite& suite = report.determinant;
    for (std::size_t i = 0; i < config.determinant_structures; ++i) {
      const Seed seed = derive_seed(config.seed, {kStreamDeterminant, std::uint64_t(i)});
      const NetworkStructure s = generate_structure(gen, seed);
      const auto pair = sample_pair(s, derive_seed(seed, {1}));
      const Complex lu = determinant_K_hat(pair.g, pair.g_prime);
      const Complex leibniz = leibniz_det_K_hat(pair.g, pair.g_prime, limits);
      const Complex grouped = gamma_factorization_det(pair.g, pair.g_prime, limits);
      const double scale = std::max(std::abs(lu), 1.0);
      suite.max_error_leibniz = std::max(suite.max_error_leibniz, std::abs(lu - leibniz) / scale);
      suite.max_error_grouped = std::max(suite.max_error_grouped, std::abs(lu - grouped) / scale);
      if (!determinant_close(lu, leibniz) || !determinant_close(lu, grouped)) ++suite.failures;
      ++suite.structures;
    }
    suite.passed = suite.failures == 0;
  }

  // Generic rank of T(I, J) against disjoint paths.
  {
    DisjointPathSuite& suite = report.disjoint_paths;
    GenericRankConfig rank;
    rank.samples = config.samples;
    rank.seed = config.seed;
    const ReferenceGraph reference = braided_chains_graph();
    const Lemma1Check ref = check_lemma1(reference.structure, reference.sources, reference.targets, rank);
    suite.reference_beta = ref.beta;
    suite.reference_rank = ref.generic_rank;
    ++suite.graphs;
    if (!ref.agrees) ++suite.mismatches;
    for (std::size_t i = 0; i < config.disjoint_path_graphs; ++i) {
      std::mt19937_64 rng(derive_seed(config.seed, {kStreamDisjoint, std::uint64_t(i)}));
      RandomStructureParams p;
      p.node_count = uniform_int(rng, 2, 8);
      p.density = uniform_real(rng, 0.1, 0.6);
      p.excited_count = uniform_int(rng, 1, std::min(4, p.node_count));
      p.measured_count = uniform_int(rng, 1, std::min(4, p.node_count));
      p.unknown_count = 0;
      const NetworkStructure s = random_structure(p, rng());
      const Lemma1Check check = check_lemma1(s, s.excited(), s.measured(), rank);
      ++suite.graphs;
      if (!check.agrees) ++suite.mismatches;
    }
    suite.passed = suite.mismatches == 0 && suite.reference_beta == 3;
  }

  // Signature decomposition, exhaustively per shape.
  {
    SignatureSuite& suite = report.signature;
    suite.passed = true;
    for (int product = 2; product <= 8; ++product) {
      for (int nb = 1; nb <= product; ++nb) {
        if (product % nb != 0) continue;
        SignatureRow row{nb, product / nb, false, {}};
        if (static_cast<std::size_t>(product) > config.cap) {
          row.skipped = true;
        } else {
          row.check = check_lemmaA2(row.n_excited, row.n_measured, EnumerationLimits{config.cap});
          if (!row.check.product_form_holds()) suite.passed = false;
        }
        suite.rows.push_back(row);
      }
    }
  }
  return report;
}

ordered_json to_json(const OracleReport& r) {
  ordered_json j;
  j["determinant"] = {{"structures", r.determinant.structures},
                      {"failures", r.determinant.failures},
                      {"max_scaled_error_leibniz", r.determinant.max_error_leibniz},
                      {"max_scaled_error_grouped", r.determinant.max_error_grouped},
                      {"passed", r.determinant.passed}};
  j["disjoint_paths"] = {{"graphs", r.disjoint_paths.graphs},
                         {"mismatches", r.disjoint_paths.mismatches},
                         {"reference_beta", r.disjoint_paths.reference_beta},
                         {"reference_generic_rank", r.disjoint_paths.reference_rank},
                         {"passed", r.disjoint_paths.passed}};
  ordered_json rows = ordered_json::array();
  for (const SignatureRow& row : r.signature.rows) {
    ordered_json item{{"n_B", row.n_excited}, {"n_C", row.n_measured}};
    if (row.skipped) {
      item["skipped"] = "above enumeration cap";
    } else {
      item["bijections"] = row.check.bijections;
      item["product_form_matches"] = row.check.bijections - row.check.product_form_mismatches;
      item["grouped_form_matches"] = row.check.bijections - row.check.grouped_form_mismatches;
    }
    rows.push_back(std::move(item));
  }
  j["signature"] = {{"rows", std::move(rows)}, {"passed", r.signature.passed}};
  j["passed"] = r.passed();
  return j;
}

}  // namespace netident

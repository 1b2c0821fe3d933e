#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netident/algebraic_identifiability.hpp"
#include "netident/assignation_conditions.hpp"
#include "netident/report_io.hpp"

namespace netident {

enum class UnknownPolicy {
  exact,    // |E^Delta| = n_B * n_C
  at_most,  // |E^Delta| uniform in [1, n_B * n_C]
};

const char* to_string(UnknownPolicy p);
UnknownPolicy parse_unknown_policy(const std::string& text);

struct CampaignConfig {
  std::size_t count = 100;
  int n_min = 3;
  int n_max = 8;
  double density_min = 0.15;
  double density_max = 0.5;
  // n_B and n_C are drawn from [1, min(io_max, n)] with n_B * n_C <= max_product.
  int io_max = 3;
  int max_product = 9;
  UnknownPolicy unknowns = UnknownPolicy::at_most;
  // Conditions are evaluated when |E^Delta| = n_B * n_C <= conditions.cap.
  EnumerationLimits conditions;
  Seed seed = 0;
  int samples = 3;
  RankPolicy rank;
  unsigned jobs = 1;
  bool timing = false;
};

// Throws std::invalid_argument on empty ranges or zero counts.
void validate(const CampaignConfig& config);

struct ConditionRecord {
  ConditionVerdict prop6;
  ConditionVerdict lemma2_excitation;
  ConditionVerdict lemma2_measurement;
  ConditionVerdict theorem1;
};

struct StructureRecord {
  std::size_t index = 0;
  // Everything about the record is a function of this seed and the config.
  Seed seed = 0;
  NetworkStructure structure;
  std::uint64_t hash = 0;
  std::optional<IdentifiabilityReport> report;
  std::optional<ConditionRecord> conditions;
  std::string conditions_note;
  // Theorem-level failures: these are bugs, not findings.
  std::vector<std::string> violations;
  std::string error;
  std::optional<double> seconds;

  bool rank_mismatch() const { return report && report->rank_K != report->rank_K_hat; }
};

// Draws the structure for `structure_seed` under the config's ranges.
// Throws InfeasibleError when no draw satisfies them.
NetworkStructure generate_structure(const CampaignConfig& config, Seed structure_seed);

// Seed of the index-th structure of a campaign.
Seed structure_seed(const CampaignConfig& config, std::size_t index);

// Generates and evaluates one structure; standalone reproduction of a
// campaign record from its seed.
StructureRecord evaluate_seed(const CampaignConfig& config, Seed seed, std::size_t index = 0);
StructureRecord evaluate_structure(const CampaignConfig& config, const NetworkStructure& s,
                                   Seed seed, std::size_t index = 0);

struct CampaignSummary {
  std::size_t structures = 0;
  std::size_t local_identifiable = 0;
  std::size_t decoupled_identifiable = 0;
  std::size_t conditions_evaluated = 0;
  std::size_t rank_mismatches = 0;
  std::size_t violations = 0;
  std::size_t errors = 0;
};

struct CampaignResult {
  CampaignConfig config;
  std::vector<StructureRecord> records;  // ordered by index
  std::vector<std::size_t> mismatches;   // indices with rank K != rank K^
  std::vector<std::size_t> violating;    // indices with violations
  CampaignSummary summary;

  // Violations and errors fail a run; rank mismatches do not.
  bool passed() const { return summary.violations == 0 && summary.errors == 0; }
};

// Deterministic for a given config regardless of config.jobs.
CampaignResult run_campaign(const CampaignConfig& config);

ordered_json to_json(const CampaignConfig& config);
ordered_json to_json(const StructureRecord& record, bool include_structure);
ordered_json to_json(const CampaignSummary& summary);

// One record per line, then a summary line carrying the config and the full
// reproduction data of every mismatch and violation.
void write_jsonl(const CampaignResult& result, std::ostream& out);
// Per node-count table.
void write_summary_csv(const CampaignResult& result, std::ostream& out);

struct OracleConfig {
  // Largest n_B * n_C for enumerating checks.
  std::size_t cap = 8;
  Seed seed = 0;
  std::size_t determinant_structures = 100;
  std::size_t disjoint_path_graphs = 200;
  int samples = 3;
};

struct DeterminantSuite {
  std::size_t structures = 0;
  std::size_t failures = 0;
  double max_error_leibniz = 0.0;
  double max_error_grouped = 0.0;
  bool passed = false;
};

struct DisjointPathSuite {
  std::size_t graphs = 0;
  std::size_t mismatches = 0;
  int reference_beta = 0;
  int reference_rank = 0;
  bool passed = false;
};

struct SignatureRow {
  int n_excited = 0;
  int n_measured = 0;
  bool skipped = false;
  SignatureDecompositionCheck check;
};

struct SignatureSuite {
  std::vector<SignatureRow> rows;
  bool passed = false;
};

struct OracleReport {
  DeterminantSuite determinant;
  DisjointPathSuite disjoint_paths;
  SignatureSuite signature;

  bool passed() const { return determinant.passed && disjoint_paths.passed && signature.passed; }
};

// |a - b| <= 1e-8 |a| + 1e-12
bool determinant_close(Complex reference, Complex other);

OracleReport run_oracles(const OracleConfig& config);
ordered_json to_json(const OracleReport& report);

// Nine-node graph of three braided chains with three vertex-disjoint paths
// from its sources to its targets.
struct ReferenceGraph {
  NetworkStructure structure;
  std::vector<NodeId> sources;
  std::vector<NodeId> targets;
};
ReferenceGraph braided_chains_graph();

}  // namespace netident

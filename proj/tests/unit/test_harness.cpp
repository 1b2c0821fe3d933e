#include <gtest/gtest.h>

#include <sstream>

#include "netident/error.hpp"
#include "netident/harness.hpp"

namespace {

using namespace netident;

CampaignConfig small_config() {
  CampaignConfig config;
  config.count = 30;
  config.n_max = 7;
  config.seed = 99;
  return config;
}

std::string jsonl(const CampaignResult& result) {
  std::ostringstream out;
  write_jsonl(result, out);
  return out.str();
}

TEST(CampaignConfig, ValidationRejectsEmptyRanges) {
  CampaignConfig c = small_config();
  EXPECT_NO_THROW(validate(c));
  c.count = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.n_min = 9;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.density_min = 0.7;
  c.density_max = 0.6;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.jobs = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_EQ(parse_unknown_policy("exact"), UnknownPolicy::exact);
  EXPECT_THROW(parse_unknown_policy("some"), std::invalid_argument);
}

TEST(Generation, RespectsRangesAndPolicy) {
  CampaignConfig c = small_config();
  c.unknowns = UnknownPolicy::exact;
  c.max_product = 6;
  for (std::size_t i = 0; i < 100; ++i) {
    const NetworkStructure s = generate_structure(c, structure_seed(c, i));
    EXPECT_GE(s.node_count(), c.n_min);
    EXPECT_LE(s.node_count(), c.n_max);
    EXPECT_LE(s.excited().size(), 3u);
    EXPECT_LE(s.measured().size(), 3u);
    EXPECT_EQ(s.unknown_count(), s.excited().size() * s.measured().size());
    EXPECT_LE(s.unknown_count(), 6u);
  }
  c.unknowns = UnknownPolicy::at_most;
  for (std::size_t i = 0; i < 100; ++i) {
    const NetworkStructure s = generate_structure(c, structure_seed(c, i));
    EXPECT_GE(s.unknown_count(), 1u);
    EXPECT_LE(s.unknown_count(), s.excited().size() * s.measured().size());
  }
}

TEST(Generation, InfeasibleRangesThrow) {
  CampaignConfig c = small_config();
  c.n_min = 2;
  c.n_max = 2;
  c.density_min = 0.01;
  c.density_max = 0.1;
  EXPECT_THROW(generate_structure(c, 1), InfeasibleError);
  EXPECT_THROW(run_campaign(c), InfeasibleError);
}

TEST(Campaign, DeterministicUnderParallelism) {
  CampaignConfig c = small_config();
  c.jobs = 1;
  const std::string serial = jsonl(run_campaign(c));
  c.jobs = 4;
  const std::string parallel = jsonl(run_campaign(c));
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial, jsonl(run_campaign(c)));
}

TEST(Campaign, RecordsReproduceFromTheirSeed) {
  CampaignConfig c = small_config();
  c.unknowns = UnknownPolicy::exact;
  const CampaignResult result = run_campaign(c);
  for (const StructureRecord& r : result.records) {
    const StructureRecord again = evaluate_seed(c, r.seed, r.index);
    EXPECT_EQ(to_json(again, true).dump(), to_json(r, true).dump());
  }
}

TEST(Campaign, SquareCorpusHasNoViolations) {
  CampaignConfig c = small_config();
  c.count = 120;
  c.unknowns = UnknownPolicy::exact;
  c.max_product = 6;
  const CampaignResult result = run_campaign(c);
  EXPECT_EQ(result.summary.structures, 120u);
  EXPECT_EQ(result.summary.conditions_evaluated, 120u);
  EXPECT_EQ(result.summary.violations, 0u);
  EXPECT_EQ(result.summary.errors, 0u);
  EXPECT_TRUE(result.passed());
}

TEST(Campaign, TimingIsOptIn) {
  CampaignConfig c = small_config();
  c.count = 3;
  for (const StructureRecord& r : run_campaign(c).records) EXPECT_FALSE(r.seconds.has_value());
  c.timing = true;
  for (const StructureRecord& r : run_campaign(c).records) EXPECT_TRUE(r.seconds.has_value());
}

TEST(Reports, JsonlEndsWithSummary) {
  CampaignConfig c = small_config();
  c.count = 5;
  const std::string text = jsonl(run_campaign(c));
  std::istringstream lines(text);
  std::string line;
  std::vector<nlohmann::json> parsed;
  while (std::getline(lines, line)) parsed.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(parsed.size(), 6u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(parsed[i]["type"], "record");
    EXPECT_EQ(parsed[i]["index"], i);
  }
  EXPECT_EQ(parsed.back()["type"], "summary");
  EXPECT_EQ(parsed.back()["counts"]["structures"], 5);
  EXPECT_EQ(parsed.back()["config"]["seed"], 99);
}

TEST(Reports, SummaryCsvHasOneRowPerNodeCount) {
  CampaignConfig c = small_config();
  c.n_min = 4;
  c.n_max = 5;
  const CampaignResult result = run_campaign(c);
  std::ostringstream out;
  write_summary_csv(result, out);
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "n,structures,local_identifiable,decoupled_identifiable,conditions_evaluated,"
            "rank_mismatches,violations,errors");
  std::size_t rows = 0, total = 0;
  while (std::getline(lines, row)) {
    ++rows;
    total += std::stoul(row.substr(row.find(',') + 1));
  }
  EXPECT_EQ(rows, 2u);
  EXPECT_EQ(total, c.count);
}

TEST(Reports, ConditionVerdictRendersWitnessTable) {
  const NetworkStructure s(3, {Edge{0, 1, false, {}}, Edge{2, 1, false, {}}, Edge{1, 2, true, {}}}, {0, 1}, {1});
  const ordered_json j = to_json(s, check_prop6(s));
  EXPECT_TRUE(j["sufficient_holds"].get<bool>());
  const auto& table = j["witnesses"][0]["assignation"]["table"];
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0]["edge"], ordered_json({0, 1}));
  EXPECT_EQ(table[0]["excitation"], 0);
  EXPECT_EQ(table[0]["measurement"], 1);
  EXPECT_EQ(to_json(Complex(1.5, -2.0)), ordered_json({1.5, -2.0}));
}

TEST(Oracles, DeterminantAndDisjointPathSuitesPass) {
  OracleConfig config;
  config.determinant_structures = 30;
  config.disjoint_path_graphs = 40;
  const OracleReport report = run_oracles(config);
  EXPECT_TRUE(report.determinant.passed);
  EXPECT_LE(report.determinant.max_error_leibniz, 1e-8);
  EXPECT_LE(report.determinant.max_error_grouped, 1e-8);
  EXPECT_TRUE(report.disjoint_paths.passed);
  EXPECT_EQ(report.disjoint_paths.reference_beta, 3);
  EXPECT_EQ(report.disjoint_paths.reference_rank, 3);
  for (const SignatureRow& row : report.signature.rows) {
    EXPECT_FALSE(row.skipped);
    EXPECT_TRUE(row.check.grouped_form_holds());
  }
}

TEST(Oracles, RowsAboveCapAreSkipped) {
  OracleConfig config;
  config.cap = 4;
  config.determinant_structures = 5;
  config.disjoint_path_graphs = 5;
  const OracleReport report = run_oracles(config);
  bool skipped_any = false;
  for (const SignatureRow& row : report.signature.rows) {
    EXPECT_EQ(row.skipped, row.n_excited * row.n_measured > 4);
    skipped_any = skipped_any || row.skipped;
  }
  EXPECT_TRUE(skipped_any);
}

}  // namespace

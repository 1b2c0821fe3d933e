// netident: identifiability analysis of partially excited and measured
// dynamical networks.
//
//   netident analyze <file> [--samples N] [--tol T] [--conditions] [--decoupled-out FILE]
//   netident campaign --count N --n-max K --seed S --out FILE [--jobs J]
//   netident oracles [--cap M] [--seed S]
//
// Defaults for any flag may come from an INI/TOML file given with --config;
// NETIDENT_SEED supplies the default seed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "netident/algebraic_identifiability.hpp"
#include "netident/assignation_conditions.hpp"
#include "netident/error.hpp"
#include "netident/harness.hpp"
#include "netident/report_io.hpp"

namespace {

using namespace netident;

constexpr int kExitError = 2;

struct AnalyzeOptions {
  std::string path;
  int samples = 3;
  double tol = RankPolicy{}.relative_tolerance;
  Seed seed = 0;
  bool conditions = false;
  std::size_t cap = EnumerationLimits{}.cap;
  std::string decoupled_out;
  std::string out;
};

struct CampaignOptions {
  CampaignConfig config;
  std::string unknowns = "at-most";
  std::string out;
  std::string summary_csv;
};

struct OracleOptions {
  OracleConfig config;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void emit(const std::string& path, const ordered_json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    open_output(path) << j.dump(2) << '\n';
  }
}

int run_analyze(const AnalyzeOptions& opt) {
  const NetworkStructure s = parse_structure(read_file(opt.path));
  AnalysisConfig config;
  config.rank.samples = opt.samples;
  config.rank.seed = opt.seed;
  config.rank.rank.relative_tolerance = opt.tol;
  const IdentifiabilityReport report = analyze(s, config);

  ordered_json out;
  out["file"] = opt.path;
  out["structure_hash"] = structure_hash(s);
  out["seed"] = opt.seed;
  out["report"] = to_json(report);

  if (opt.conditions) {
    const std::size_t product = s.excited().size() * s.measured().size();
    if (s.unknown_count() != product) {
      out["conditions"] = {{"skipped", "unknown count differs from n_B * n_C"}};
    } else {
      const EnumerationLimits limits{opt.cap};
      out["conditions"] = {
          {"prop6", to_json(s, check_prop6(s, limits))},
          {"lemma2_excitation", to_json(s, check_lemma2(s, Side::excitation, limits))},
          {"lemma2_measurement", to_json(s, check_lemma2(s, Side::measurement, limits))},
          {"theorem1", to_json(s, check_theorem1(s, limits))},
      };
    }
  }
  if (!opt.decoupled_out.empty()) {
    open_output(opt.decoupled_out) << serialize_structure(build_decoupled(s));
    out["decoupled_out"] = opt.decoupled_out;
  }
  emit(opt.out, out);
  return report.verdict_local == Verdict::identifiable ? 0 : 1;
}

int run_campaign_command(CampaignOptions opt) {
  opt.config.unknowns = parse_unknown_policy(opt.unknowns);
  const CampaignResult result = run_campaign(opt.config);
  {
    auto out = open_output(opt.out);
    write_jsonl(result, out);
  }
  if (!opt.summary_csv.empty()) {
    auto csv = open_output(opt.summary_csv);
    write_summary_csv(result, csv);
  }
  std::cerr << to_json(result.summary).dump() << '\n';
  return result.passed() ? 0 : 1;
}

int run_oracles_command(const OracleOptions& opt) {
  const OracleReport report = run_oracles(opt.config);
  emit(opt.out, to_json(report));
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identifiability analysis of partially excited and measured dynamical networks"};
  app.set_config("--config", "", "INI/TOML file with default flag values");
  app.require_subcommand(1);

  AnalyzeOptions analyze_opt;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one structure file");
  analyze_cmd->add_option("file", analyze_opt.path, "Structure file")->required();
  analyze_cmd->add_option("--samples", analyze_opt.samples, "Samples per generic rank")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--tol", analyze_opt.tol, "Relative singular-value threshold")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--seed", analyze_opt.seed, "Base seed")->envname("NETIDENT_SEED");
  analyze_cmd->add_flag("--conditions", analyze_opt.conditions, "Evaluate the path-based conditions");
  analyze_cmd->add_option("--cap", analyze_opt.cap, "Largest n_B * n_C to enumerate");
  analyze_cmd->add_option("--decoupled-out", analyze_opt.decoupled_out,
                          "Write the decoupled network structure here");
  analyze_cmd->add_option("--out", analyze_opt.out, "Report file (default: stdout)");

  CampaignOptions campaign_opt;
  CampaignConfig& cc = campaign_opt.config;
  auto* campaign_cmd = app.add_subcommand("campaign", "Randomized rank K vs rank K^ campaign");
  campaign_cmd->add_option("--count", cc.count, "Number of structures")->required();
  campaign_cmd->add_option("--n-min", cc.n_min, "Smallest node count");
  campaign_cmd->add_option("--n-max", cc.n_max, "Largest node count")->required();
  campaign_cmd->add_option("--density-min", cc.density_min, "Smallest edge density");
  campaign_cmd->add_option("--density-max", cc.density_max, "Largest edge density");
  campaign_cmd->add_option("--io-max", cc.io_max, "Largest n_B and n_C");
  campaign_cmd->add_option("--max-product", cc.max_product, "Largest n_B * n_C");
  campaign_cmd->add_option("--unknowns", campaign_opt.unknowns, "exact | at-most")
      ->check(CLI::IsMember({"exact", "at-most"}));
  campaign_cmd->add_option("--conditions-cap", cc.conditions.cap,
                           "Largest n_B * n_C for which conditions are evaluated");
  campaign_cmd->add_option("--seed", cc.seed, "Base seed")->envname("NETIDENT_SEED")->required();
  campaign_cmd->add_option("--samples", cc.samples, "Samples per generic rank");
  campaign_cmd->add_option("--tol", cc.rank.relative_tolerance, "Relative singular-value threshold");
  campaign_cmd->add_option("--jobs", cc.jobs, "Worker threads")->check(CLI::PositiveNumber);
  campaign_cmd->add_flag("--timing", cc.timing, "Record per-structure wall time");
  campaign_cmd->add_option("--out", campaign_opt.out, "JSONL result file")->required();
  campaign_cmd->add_option("--summary-csv", campaign_opt.summary_csv, "Per node-count CSV table");

  OracleOptions oracle_opt;
  auto* oracles_cmd = app.add_subcommand("oracles", "Run the brute-force cross-checks");
  oracles_cmd->add_option("--cap", oracle_opt.config.cap, "Largest n_B * n_C to enumerate");
  oracles_cmd->add_option("--seed", oracle_opt.config.seed, "Base seed")->envname("NETIDENT_SEED");
  oracles_cmd->add_option("--structures", oracle_opt.config.determinant_structures,
                          "Structures for the determinant check");
  oracles_cmd->add_option("--graphs", oracle_opt.config.disjoint_path_graphs,
                          "Random graphs for the disjoint-path check");
  oracles_cmd->add_option("--out", oracle_opt.out, "Report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*analyze_cmd) return run_analyze(analyze_opt);
    if (*campaign_cmd) return run_campaign_command(campaign_opt);
    if (*oracles_cmd) return run_oracles_command(oracle_opt);
  } catch (const std::exception& e) {
    std::cerr << "netident: " << e.what() << '\n';
  }
  return kExitError;
}

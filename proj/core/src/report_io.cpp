#include "netident/report_io.hpp"

namespace netident {

namespace {

const char* kind_name(AssignationKind kind) {
  switch (kind) {
    case AssignationKind::excitation_only: return "excitation";
    case AssignationKind::measurement_only: return "measurement";
    case AssignationKind::bijective_pair: return "bijective";
  }
  return "unknown";
}

}  // namespace

ordered_json to_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json to_json(const ComplexVector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

ordered_json to_json(const IdentifiabilityReport& report) {
  ordered_json j;
  j["rank_K"] = report.rank_K;
  j["rank_K_hat"] = report.rank_K_hat;
  j["unknown_count"] = report.unknown_count;
  j["verdict_local"] = to_string(report.verdict_local);
  j["verdict_decoupled"] = to_string(report.verdict_decoupled);
  j["samples_used"] = report.samples_used;
  j["kernel_witness"] = report.kernel_witness ? to_json(*report.kernel_witness) : ordered_json();
  j["witness_residual"] = report.witness_residual ? ordered_json(*report.witness_residual) : ordered_json();
  j["reason"] = report.reason;
  return j;
}

ordered_json to_json(const PathCertificate& cert) {
  ordered_json j;
  j["sources"] = cert.sources;
  j["targets"] = cert.targets;
  j["paths"] = cert.paths;
  return j;
}

ordered_json to_json(const NetworkStructure& s, const Assignation& a) {
  ordered_json j;
  j["kind"] = kind_name(a.kind);
  ordered_json rows = ordered_json::array();
  for (std::size_t k = 0; k < s.unknown_count(); ++k) {
    const Edge& e = s.unknown_edge(k);
    ordered_json row;
    row["edge"] = {e.from, e.to};
    if (a.to_excitation) row["excitation"] = s.excited()[static_cast<std::size_t>((*a.to_excitation)[k])];
    if (a.to_measurement) row["measurement"] = s.measured()[static_cast<std::size_t>((*a.to_measurement)[k])];
    rows.push_back(std::move(row));
  }
  j["table"] = std::move(rows);
  return j;
}

ordered_json to_json(const NetworkStructure& s, const ConditionVerdict& v) {
  ordered_json j;
  j["necessary_holds"] = v.necessary_holds;
  j["sufficient_holds"] = v.sufficient_holds;
  j["counted_assignations"] = v.counted_assignations;
  ordered_json witnesses = ordered_json::array();
  for (const AssignationWitness& w : v.witnesses) {
    ordered_json item;
    item["assignation"] = to_json(s, w.assignation);
    ordered_json certs = ordered_json::array();
    for (const PathCertificate& cert : w.certificates) certs.push_back(to_json(cert));
    item["certificates"] = std::move(certs);
    witnesses.push_back(std::move(item));
  }
  j["witnesses"] = std::move(witnesses);
  return j;
}

}  // namespace netident

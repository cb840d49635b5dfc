#include "report.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace obcast {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_ordered(const BoundReport& r) {
  ordered_json j;
  j["id"] = r.id;
  j["paper_ref"] = r.paper_ref;
  j["computed"] = r.computed;
  j["expected"] = r.expected ? ordered_json(*r.expected) : ordered_json(nullptr);
  j["tolerance"] = r.tolerance;
  j["relation"] = relation_name(r.relation);
  j["certificate"] = certificate_name(r.certificate);
  j["pass"] = r.pass;
  j["note"] = r.note;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Eq: return "eq";
    case Relation::Le: return "le";
    case Relation::Ge: return "ge";
    case Relation::Lt: return "lt";
    case Relation::Gt: return "gt";
    case Relation::Report: return "report";
  }
  return "report";
}

const char* certificate_name(CertificateKind c) {
  switch (c) {
    case CertificateKind::Exact: return "exact";
    case CertificateKind::DualCertified: return "dual-certified";
    case CertificateKind::Analytic: return "analytic";
    case CertificateKind::Heuristic: return "heuristic";
  }
  return "heuristic";
}

BoundReport make_report(std::string id, std::string paper_ref, double computed, std::optional<double> expected,
                        double tolerance, Relation relation, CertificateKind certificate, std::string note) {
  BoundReport r{std::move(id), std::move(paper_ref), computed, expected, tolerance, relation, certificate, false,
                std::move(note)};
  if (!std::isfinite(computed)) return r;
  if (relation == Relation::Report || !expected) {
    r.pass = true;
    return r;
  }
  const double e = *expected;
  switch (relation) {
    case Relation::Eq: r.pass = std::abs(computed - e) <= tolerance; break;
    case Relation::Le: r.pass = computed <= e + tolerance; break;
    case Relation::Ge: r.pass = computed >= e - tolerance; break;
    case Relation::Lt: r.pass = computed < e; break;
    case Relation::Gt: r.pass = computed > e; break;
    case Relation::Report: break;
  }
  return r;
}

std::string report_to_json(const BoundReport& report) { return to_ordered(report).dump(2); }

std::string reports_to_json(const std::vector<BoundReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_ordered(r));
  return arr.dump(2) + "\n";
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::string out = "id,paper_ref,computed,expected,tolerance,relation,certificate,pass,note\r\n";
  for (const auto& r : reports) {
    out += csv_field(r.id) + ',' + csv_field(r.paper_ref) + ',' + format_double(r.computed) + ',' +
           (r.expected ? format_double(*r.expected) : std::string()) + ',' + format_double(r.tolerance) + ',' +
           relation_name(r.relation) + ',' + certificate_name(r.certificate) + ',' + (r.pass ? "true" : "false") +
           ',' + csv_field(r.note) + "\r\n";
  }
  return out;
}

}  // namespace obcast

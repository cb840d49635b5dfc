#pragma once

#include <optional>
#include <string>
#include <vector>

namespace obcast {

enum class Relation { Eq, Le, Ge, Lt, Gt, Report };
enum class CertificateKind { Exact, DualCertified, Analytic, Heuristic };

const char* relation_name(Relation r);
const char* certificate_name(CertificateKind c);

struct BoundReport {
  std::string id;
  std::string paper_ref;
  double computed = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  Relation relation = Relation::Report;
  CertificateKind certificate = CertificateKind::Exact;
  bool pass = false;
  std::string note;
};

// Sets pass from computed, expected, tolerance and relation. Report cases always pass.
BoundReport make_report(std::string id, std::string paper_ref, double computed, std::optional<double> expected,
                        double tolerance, Relation relation, CertificateKind certificate, std::string note = {});

std::string reports_to_json(const std::vector<BoundReport>& reports);
std::string reports_to_csv(const std::vector<BoundReport>& reports);
std::string report_to_json(const BoundReport& report);
// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace obcast

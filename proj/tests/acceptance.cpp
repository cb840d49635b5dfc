// One pass/fail line per acceptance criterion. Criteria 2 and 3 are known red: the printed
// upper bounds they certify are beaten by explicit LOSCC strategies (see the decisions ledger).
// Exit status is nonzero only when a criterion outside that list fails.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "reproduce.hpp"

using namespace obcast;

namespace {

const std::set<int> kKnownRed = {2, 3};

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> ids;  // report ids that must all pass
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI reproduce command and returns its report bytes, or nothing when the run misbehaves.
std::string cli_report(const std::string& cli, const std::string& jobs, const std::string& out, int& rc) {
  const std::string cmd = "\"" + cli + "\" reproduce --seed 42 --jobs " + jobs + " --out \"" + out + "\"";
  const int status = std::system(cmd.c_str());
  rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return read_file(out);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string tmp = "/tmp";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--tmp") tmp = argv[i + 1];
  }

  ReproduceOptions opts;
  const auto reports = run_reproduce(opts);
  std::map<std::string, const BoundReport*> by_id;
  for (const auto& r : reports) by_id[r.id] = &r;

  std::vector<std::string> props;
  for (const auto& n : property_names()) props.push_back(n);

  const std::vector<Criterion> criteria = {
      {1, "BB84 tightness chain", {"bb84.postinfo", "bb84.prop4_bound", "bb84.breidbart", "bb84.tightness_spread",
                                   "bb84.dual_gap"}},
      {2, "OBB coupled-disk bound and error per state",
       {"obb.disk_bound", "obb.disk_certificate", "obb.disk_feasibility", "bb84.error_per_state",
        "obb.error_per_state", "obb.bound_soundness"}},
      {3, "qq versus cq separation",
       {"qq.upper_bound", "qq.equivalence_deviation", "cq.lower_bound", "qq.cq_gap", "qq.bound_soundness"}},
      {4, "minimal qutrit POVM",
       {"minimal-qutrit.povm_spectrum", "minimal-qutrit.povm_completeness", "minimal-qutrit.outcome_table",
        "minimal-qutrit.zero_entries"}},
      {5, "six-state broadcast and kill patterns",
       {"thm1-pairs.broadcast_overlap", "thm1-pairs.kill_patterns", "thm1-pairs.kill_kernel_dim",
        "thm1-pairs.postinfo"}},
      {6, "entangling protocol on eight states", {"thm2-eight.entangling_overlap"}},
      {7, "gen-bb84 epsilon root and printed formula", {"gen-bb84.epsilon_root", "gen-bb84.epsilon_printed_formula"}},
      {8, "shifts minimal epsilon", {"shifts.min_epsilon", "shifts.min_epsilon_printed"}},
      {9, "monogamy game bounds", {"moe.go_overlap", "moe.go_copy_bound", "moe.bb84_bound", "prop.transpose_trick"}},
      {10, "seeded property suites", props},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    std::vector<std::string> bad;
    for (const auto& id : c.ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        bad.push_back(id + " missing");
      } else if (!it->second->pass) {
        bad.push_back(id);
      }
    }
    // The report-only cases must carry the discrepancy they document.
    if (c.number == 8 && by_id.count("shifts.min_epsilon_printed") && by_id["shifts.min_epsilon_printed"]->note.empty()) {
      bad.push_back("shifts note missing");
    }
    if (c.number == 10) {
      // Notes start with the trial count.
      for (const auto& id : props) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) continue;
        const std::size_t need = id == "prop.row_merging" ? 50 : id == "prop.transpose_trick" ? 100 : 500;
        if (std::stoul(it->second->note) < need) bad.push_back(id + " too few trials");
      }
    }
    const bool pass = bad.empty();
    const bool known = kKnownRed.count(c.number) != 0;
    std::printf("criterion %2d: %s  %s", c.number, pass ? "PASS" : "FAIL", c.title.c_str());
    if (!pass) {
      std::printf("  [");
      for (std::size_t k = 0; k < bad.size(); ++k) std::printf("%s%s", k ? ", " : "", bad[k].c_str());
      std::printf("]%s", known ? "  known red: printed bound refuted by an explicit strategy" : "");
    }
    std::printf("\n");
    if (!pass && !known) ++unexpected;
  }

  // Criterion 11: byte-identical reports for jobs 1 and 8.
  std::string detail;
  bool pass11 = false;
  if (!cli.empty()) {
    int rc1 = 0, rc8 = 0;
    const std::string a = cli_report(cli, "1", tmp + "/acceptance_jobs1.json", rc1);
    const std::string b = cli_report(cli, "8", tmp + "/acceptance_jobs8.json", rc8);
    pass11 = !a.empty() && a == b && rc1 == rc8 && rc1 != 1 && rc1 != 2;
    detail = "cli, " + std::to_string(a.size()) + " bytes, exit " + std::to_string(rc1) + "/" + std::to_string(rc8);
  } else {
    ReproduceOptions one, eight;
    one.jobs = 1;
    eight.jobs = 8;
    const std::string a = reports_to_json(run_reproduce(one));
    const std::string b = reports_to_json(run_reproduce(eight));
    pass11 = a == b;
    detail = "library, " + std::to_string(a.size()) + " bytes";
  }
  pass11 = pass11 && reports.size() >= 20;
  std::printf("criterion 11: %s  deterministic reports across --jobs 1 and 8 (%s, %zu cases)\n",
              pass11 ? "PASS" : "FAIL", detail.c_str(), reports.size());
  if (!pass11) ++unexpected;

  return unexpected == 0 ? 0 : 1;
}

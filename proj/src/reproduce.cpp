#include "reproduce.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "broadcast.hpp"
#include "ensembles.hpp"
#include "moe.hpp"
#include "properties.hpp"
#include "qpv_bounds.hpp"

namespace obcast {

namespace {

const double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;
const double kBB84 = (2.0 + kSqrt2) / 4.0;
const Cut kFirst{{0}};

using Reports = std::vector<BoundReport>;

struct Group {
  std::string name;
  std::vector<std::string> prefixes;  // id prefixes of the reports it emits
  std::function<Reports(const ReproduceOptions&)> run;
};

Reports bb84_group(const ReproduceOptions& o) {
  const auto pi = p_postinfo(gallery_postinfo("bb84"), o.settings);
  const auto p4 = prop4_solve(0.5, 0.5, 0.5, {kPi / 2, 0.0, -kPi / 2, 0.0});
  const double br = breidbart_lower(kPi / 2);
  const double spread = std::max({pi.value, p4.bound, br}) - std::min({pi.value, p4.bound, br});
  return {
      make_report("bb84.postinfo", "post-information success for BB84", pi.value, kBB84, 1e-6, Relation::Eq,
                  CertificateKind::DualCertified),
      make_report("bb84.dual_gap", "duality gap of the BB84 discrimination program", pi.certificate.gap, 0.0, 1e-7,
                  Relation::Le, CertificateKind::DualCertified),
      make_report("bb84.prop4_bound", "two-pair program bound for BB84", p4.bound, kBB84, 1e-6, Relation::Eq,
                  p4.certificate),
      make_report("bb84.breidbart", "intermediate-basis strategy on BB84", br, kBB84, 1e-6, Relation::Eq,
                  CertificateKind::Exact),
      make_report("bb84.tightness_spread", "largest pairwise difference of the three BB84 routes", spread, 0.0, 1e-6,
                  Relation::Le, CertificateKind::DualCertified),
      make_report("bb84.error_per_state", "LOSQC error per state for BB84", error_per_state(gen_bb84(kPi / 2), 1.0, kBB84),
                  0.03662, 0.0, Relation::Lt, CertificateKind::Analytic),
  };
}

Reports obb_group(const ReproduceOptions& o) {
  const auto obb = gallery_gop("obb");
  const auto disk = disk_program_solve(obb_disk_program());
  const auto fixed = disk_program_solve(obb_disk_program(DiskAssembly::Corrected));
  Povm comp;
  for (std::size_t i = 0; i < 3; ++i) comp.effects.push_back(basis_state(3, i).projector());
  const double announce = product_strategy_value(obb, comp, comp, {{4, 0, 1}, {2, 2, 2}, {5, 5, 5}}).value;
  const auto relay = computational_relay_value(obb, o.settings);
  return {
      make_report("obb.disk_bound", "coupled-disk LOSQC bound for the OBB set as assembled in print", disk.bound,
                  0.603554, 0.0, Relation::Le, CertificateKind::Analytic),
      make_report("obb.disk_certificate", "feasible point versus analytic certificate of the disk program",
                  std::abs(disk.opt - disk.certificate_value), 0.0, 1e-9, Relation::Le, CertificateKind::Analytic),
      make_report("obb.disk_feasibility", "smallest constraint slack at the feasible point", disk.min_slack, 0.0,
                  1e-12, Relation::Ge, CertificateKind::Exact),
      make_report("obb.error_per_state", "LOSQC error per state for the OBB set",
                  error_per_state(obb, 1.0, disk.bound), 0.05663, 0.0, Relation::Gt, CertificateKind::Analytic),
      make_report("obb.announce_strategy", "both parties measure the computational basis and announce", announce, 0.75,
                  1e-12, Relation::Eq, CertificateKind::Exact),
      make_report("obb.loscc_relay", "Alice measures and announces, Bob discriminates the conditional ensemble",
                  relay.value, std::nullopt, 0.0, Relation::Report, CertificateKind::DualCertified),
      make_report("obb.bound_soundness", "printed OBB upper bound against an explicit LOSCC strategy", disk.bound,
                  relay.value, 1e-9, Relation::Ge, CertificateKind::DualCertified,
                  "an upper bound on LOSQC success must dominate every LOSCC strategy value"),
      make_report("obb.corrected_bound", "coupled-disk bound with the pairwise constant 1/2", fixed.bound, kBB84,
                  1e-12, Relation::Report, CertificateKind::Analytic,
                  "summing four pairs at weight 1/8 gives 1/2 + (1/8) sum D, not 1/4 + (1/8) sum D"),
  };
}

Reports separation_group(const ReproduceOptions& o) {
  const auto s = thm6_separation();
  const auto cq = cq_strategy_value();
  return {
      s.upper,
      s.lower,
      s.soundness,
      make_report("qq.equivalence_deviation", "local-unitary equivalence of the qq and qq-tilde sets",
                  s.equivalence_deviation, 0.0, 1e-12, Relation::Le, CertificateKind::Exact),
      make_report("qq.cq_gap", "separation between cq lower and qq upper bounds", s.gap, 0.07, 0.0, Relation::Gt,
                  CertificateKind::Analytic),
      make_report("cq.printed_table", "cq strategy with the guess table as printed", cq.printed_table_value,
                  std::nullopt, 0.0, Relation::Report, CertificateKind::Exact,
                  "rows for Alice outcome 2 are transposed in print; the corrected table attains cos^2(pi/8)"),
      make_report("cq.loscc_optimum", "LOSCC optimum for the cq set dominates the explicit strategy",
                  losscc_value_cq(swap_parties(gallery_gop("cq")), o.settings), cq.value, 1e-9, Relation::Ge,
                  CertificateKind::DualCertified),
  };
}

Reports minimal_qutrit_group(const ReproduceOptions&) {
  const Povm p = gallery_povm("prop1-povm");
  double spectrum_dev = 0.0;
  for (const auto& f : p.effects) {
    auto v = hermitian_eig(f).values;
    std::sort(v.begin(), v.end());
    const std::vector<double> want{0.0, 0.0, 0.75};
    if (v.size() != want.size()) spectrum_dev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < std::min(v.size(), want.size()); ++k) spectrum_dev = std::max(spectrum_dev, std::abs(v[k] - want[k]));
  }
  const auto check = verify_classical_broadcast_povm(p, gallery_postinfo("minimal-qutrit"));
  using V = std::vector<std::size_t>;
  const std::vector<std::vector<V>> table{{V{0, 1}, V{2, 3}}, {V{0, 2}, V{1, 3}}};
  return {
      make_report("minimal-qutrit.povm_spectrum", "each printed effect has spectrum {3/4, 0, 0}", spectrum_dev, 0.0,
                  1e-12, Relation::Le, CertificateKind::Exact),
      make_report("minimal-qutrit.povm_completeness", "printed effects sum to the identity", p.invariant_residual(),
                  0.0, 1e-12, Relation::Le, CertificateKind::Exact),
      make_report("minimal-qutrit.outcome_table", "outcome partition per setting matches the printed table",
                  check.outcomes == table ? 1.0 : 0.0, 1.0, 0.0, Relation::Eq, CertificateKind::Exact),
      make_report("minimal-qutrit.zero_entries", "largest probability that should vanish", check.max_violation, 0.0,
                  1e-12, Relation::Le, CertificateKind::Exact),
  };
}

Reports thm1_group(const ReproduceOptions& o) {
  const auto s = gallery_postinfo("thm1-pairs");
  const auto b = verify_orthogonality_broadcast(gallery_isometry("thm1-isometry"), s, kFirst);
  const auto k = kill_pattern_certificate(s);
  std::size_t max_kernel = 0;
  for (auto d : k.kernel_dims) max_kernel = std::max(max_kernel, d);
  return {
      make_report("thm1-pairs.broadcast_overlap", "largest marginal overlap after the quantum broadcast isometry",
                  b.max_overlap, 0.0, 1e-12, Relation::Le, CertificateKind::Exact),
      make_report("thm1-pairs.kill_patterns", "number of kill patterns examined",
                  static_cast<double>(k.kernel_dims.size()), 8.0, 0.0, Relation::Eq, CertificateKind::Exact),
      make_report("thm1-pairs.kill_kernel_dim", "largest kernel dimension over kill patterns",
                  static_cast<double>(max_kernel), 0.0, 0.0, Relation::Eq, CertificateKind::Exact,
                  k.certified_infeasible ? "classical broadcasting certified infeasible" : "not certified"),
      make_report("thm1-pairs.postinfo", "post-information success for the six-state set",
                  p_postinfo(s, o.settings).value, 1.0 - 1e-3, 0.0, Relation::Lt, CertificateKind::DualCertified),
  };
}

Reports thm2_group(const ReproduceOptions&) {
  return {make_report("thm2-eight.entangling_overlap",
                      "largest marginal overlap for the entangling protocol on the eight-state set",
                      entangling_protocol_overlap(gallery_gop("thm2-eight"), gallery_isometry("thm2-isometry"), kFirst),
                      0.0, 1e-12, Relation::Le, CertificateKind::Exact)};
}

Reports gen_bb84_group(const ReproduceOptions&) {
  const auto v = cor5_epsilon_star(kPi / 2);
  return {
      make_report("gen-bb84.epsilon_root", "minimal LOSQC error at theta = pi/2 by bisection", v.root,
                  (2.0 - kSqrt2) / 4.0, 1e-9, Relation::Eq, CertificateKind::Analytic),
      make_report("gen-bb84.epsilon_printed_formula", "closed-form epsilon as printed, evaluated at theta = pi/2",
                  v.printed_formula, kBB84, 1e-12, Relation::Report, CertificateKind::Analytic,
                  "the printed formula returns the success probability (2+sqrt2)/4, not the error root (2-sqrt2)/4"),
  };
}

Reports shifts_group(const ReproduceOptions&) {
  const double eps = thm4_min_epsilon(thm4_instance_from_roles(gallery_gop("shifts"), {0, 1, 2, 3}));
  return {
      make_report("shifts.min_epsilon", "minimal LOSQC error for the shifts set", eps, 1e-5, 0.0, Relation::Gt,
                  CertificateKind::Analytic),
      make_report("shifts.min_epsilon_printed", "minimal LOSQC error for the shifts set against the printed value", eps,
                  5.52e-4, 0.0, Relation::Report, CertificateKind::Analytic,
                  "printed 5.52e-4; the bisection root of the stated inequality is the smaller root of "
                  "68e^2 - (64 + 4c)e + c^2 = 0 with c = 1 - sqrt3/2"),
  };
}

Reports moe_group(const ReproduceOptions&) {
  const auto go = example_go_trivial();
  const MoeGame bb = bb84_game();
  const std::vector<HermitianOp> r{bb.measurements[0].effects[0], bb.measurements[1].effects[0]};
  return {
      make_report("moe.go_overlap", "overlap constant of the completed OBB game", go.overlap, 1.0, 1e-12, Relation::Eq,
                  CertificateKind::Exact),
      go.report,
      make_report("moe.go_copy_win", "copy strategy win probability on the completed OBB game", go.copy_win,
                  go.copy_bound, 1e-12, Relation::Le, CertificateKind::Exact),
      make_report("moe.go_contrast", "coupled-disk value for the same set, for contrast", go.contrast, 0.603554, 1e-6,
                  Relation::Report, CertificateKind::Analytic),
      make_report("moe.bb84_overlap", "overlap constant of the BB84 game", overlap_constant(bb), 1.0 / kSqrt2, 1e-12,
                  Relation::Eq, CertificateKind::Exact),
      make_report("moe.bb84_bound", "overlap-norm bound for the BB84 game with uniform prior",
                  lemma_a1_bound(r) / 2.0, 0.5 * (1.0 + 1.0 / kSqrt2), 1e-9, Relation::Eq, CertificateKind::Exact),
  };
}

Reports properties_group(const ReproduceOptions& o) {
  Reports out;
  for (const auto& name : property_names()) out.push_back(property_report(run_property(name, o.seed)));
  out.push_back(product_norm_counterexample());
  return out;
}

const std::vector<Group>& groups() {
  static const std::vector<Group> all = {
      {"properties", {"prop.", "linalg."}, properties_group},
      {"separation", {"qq.", "cq."}, separation_group},
      {"obb", {"obb."}, obb_group},
      {"bb84", {"bb84."}, bb84_group},
      {"thm1-pairs", {"thm1-pairs."}, thm1_group},
      {"moe", {"moe."}, moe_group},
      {"minimal-qutrit", {"minimal-qutrit."}, minimal_qutrit_group},
      {"gen-bb84", {"gen-bb84."}, gen_bb84_group},
      {"shifts", {"shifts."}, shifts_group},
      {"thm2-eight", {"thm2-eight."}, thm2_group},
  };
  return all;
}

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

bool selected(const std::vector<std::string>& only, const std::string& id) {
  if (only.empty()) return true;
  return std::any_of(only.begin(), only.end(), [&](const std::string& f) { return starts_with(id, f); });
}

bool group_selected(const std::vector<std::string>& only, const Group& g) {
  if (only.empty()) return true;
  for (const auto& f : only) {
    for (const auto& p : g.prefixes) {
      if (starts_with(f, p) || starts_with(p, f)) return true;
    }
  }
  return false;
}

}  // namespace

const std::vector<std::string>& reproduce_groups() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& g : groups()) v.push_back(g.name);
    return v;
  }();
  return names;
}

std::vector<BoundReport> run_reproduce(const ReproduceOptions& options) {
  std::vector<const Group*> todo;
  for (const auto& g : groups()) {
    if (group_selected(options.only, g)) todo.push_back(&g);
  }
  std::vector<Reports> results(todo.size());
  std::vector<std::exception_ptr> errors(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < todo.size();) {
      try {
        results[k] = todo[k]->run(options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, todo.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<BoundReport> out;
  for (auto& r : results) {
    for (auto& b : r) {
      if (selected(options.only, b.id)) out.push_back(std::move(b));
    }
  }
  std::sort(out.begin(), out.end(), [](const BoundReport& a, const BoundReport& b) { return a.id < b.id; });
  return out;
}

bool reproduce_passed(const std::vector<BoundReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const BoundReport& r) { return r.pass || r.certificate == CertificateKind::Heuristic; });
}

}  // namespace obcast

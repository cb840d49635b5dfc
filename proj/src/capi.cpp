#include "obcast/obcast.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "broadcast.hpp"
#include "ensembles.hpp"
#include "error.hpp"
#include "json.hpp"
#include "moe.hpp"
#include "properties.hpp"
#include "qpv_bounds.hpp"
#include "reproduce.hpp"

struct obcast_object {
  obcast::NamedObject obj;
};

struct obcast_reports {
  std::vector<obcast::BoundReport> items;
};

struct obcast_moe_game {
  std::string name;
  obcast::MoeGame game;
};

namespace {

using namespace obcast;
using ojson = nlohmann::ordered_json;

thread_local std::string g_last_error;

obcast_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return OBCAST_ERR_INVALID_INPUT;
    case ErrorCode::UnknownName: return OBCAST_ERR_UNKNOWN_NAME;
    case ErrorCode::UnsupportedSize: return OBCAST_ERR_UNSUPPORTED_SIZE;
    case ErrorCode::Precondition: return OBCAST_ERR_PRECONDITION;
    case ErrorCode::DoesNotFitForm: return OBCAST_ERR_DOES_NOT_FIT_FORM;
    case ErrorCode::SolverFailure: return OBCAST_ERR_SOLVER_FAILURE;
    case ErrorCode::Io: return OBCAST_ERR_IO;
    case ErrorCode::Internal: return OBCAST_ERR_INTERNAL;
  }
  return OBCAST_ERR_INTERNAL;
}

// Runs f, translating exceptions into a status and the thread's last-error message.
template <class F>
obcast_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return OBCAST_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OBCAST_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OBCAST_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Settings to_settings(const obcast_options* o) {
  Settings s;
  if (o != nullptr) {
    s.tol_primal = o->tol_primal;
    s.tol_gap = o->tol_gap;
    s.tol_eig = o->tol_eig;
  }
  if (!(s.tol_primal > 0) || !(s.tol_gap > 0) || !(s.tol_eig > 0)) {
    fail(ErrorCode::InvalidInput, "tolerances must be positive");
  }
  return s;
}

std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

std::vector<std::string> split_commas(const char* text) {
  std::vector<std::string> out;
  if (text == nullptr) return out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string label(const NamedObject& o) { return o.name.empty() ? std::string("input") : o.name; }

// Settings register on A, states on B: the post-information task as a product ensemble.
GopEnsemble as_gop(const PostInfoEnsemble& s) {
  GopEnsemble g;
  g.dim_a = s.settings();
  g.dim_b = s.dim;
  for (std::size_t t = 0; t < s.settings(); ++t) {
    for (std::size_t i = 0; i < s.states[t].size(); ++i) g.entries.push_back({basis_state(g.dim_a, t), s.states[t][i], s.prior[t][i]});
  }
  g.validate();
  return g;
}

GopEnsemble require_gop(const NamedObject& o) {
  if (const auto* g = std::get_if<GopEnsemble>(&o.value)) return *g;
  if (const auto* p = std::get_if<PostInfoEnsemble>(&o.value)) return as_gop(*p);
  fail(ErrorCode::InvalidInput, "method needs an ensemble, got a " + o.kind());
}

PostInfoEnsemble require_postinfo(const NamedObject& o) {
  if (const auto* p = std::get_if<PostInfoEnsemble>(&o.value)) return *p;
  if (const auto* g = std::get_if<GopEnsemble>(&o.value)) {
    if (is_classical_side(*g, Party::A)) return induce_postinfo(*g, Party::A);
    if (is_classical_side(*g, Party::B)) return induce_postinfo(*g, Party::B);
    fail(ErrorCode::Precondition, "post-information value needs one side drawn from a single orthonormal basis");
  }
  fail(ErrorCode::InvalidInput, "method needs an ensemble, got a " + o.kind());
}

double pair_guess(const StateVector& x, const StateVector& y) {
  const double ov = std::abs(inner(x, y));
  return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - ov * ov)));
}

std::vector<BoundReport> bound_reports(const NamedObject& o, const std::string& method, const Settings& settings) {
  const std::string id = label(o);
  if (method == "postinfo") {
    const auto r = p_postinfo(require_postinfo(o), settings);
    return {make_report(id + ".postinfo", "post-information success probability", r.value, std::nullopt, 0.0,
                        Relation::Report, CertificateKind::DualCertified,
                        "duality gap " + format_double(r.certificate.gap))};
  }
  if (method == "thm4") {
    const auto m = thm4_best_match(require_gop(o));
    if (!m) fail(ErrorCode::DoesNotFitForm, "no four entries fit the required form");
    std::string roles;
    for (auto k : m->roles) roles += (roles.empty() ? "" : " ") + std::to_string(k);
    return {make_report(id + ".thm4_min_epsilon", "smallest LOSQC error allowed by the four-state inequality",
                        m->epsilon, std::nullopt, 0.0, Relation::Report, CertificateKind::Analytic,
                        "roles " + roles)};
  }
  if (method == "prop4") {
    const auto g = require_gop(o);
    const auto m = thm4_best_match(g);
    if (!m) fail(ErrorCode::DoesNotFitForm, "no four entries fit the required form");
    const auto& e = g.entries;
    const auto& r = m->roles;
    const double mass = e[r[0]].p + e[r[1]].p + e[r[2]].p + e[r[3]].p;
    const auto res = prop4_solve((e[r[0]].p + e[r[1]].p) / mass, pair_guess(e[r[0]].a, e[r[1]].a),
                                 pair_guess(e[r[2]].a, e[r[3]].a), m->instance.spec);
    return {make_report(id + ".prop4_bound", "two-pair program upper bound on LOSQC success", res.bound,
                        std::nullopt, 0.0, Relation::Report, res.certificate,
                        res.unity_condition ? "unity condition holds" : "")};
  }
  if (method == "disk") {
    DiskProgram printed, corrected;
    if (o.name == "obb") {
      printed = obb_disk_program();
      corrected = obb_disk_program(DiskAssembly::Corrected);
    } else if (o.name == "qq" || o.name == "qq-tilde") {
      printed = qq_tilde_disk_program();
      corrected = qq_tilde_disk_program(DiskAssembly::Corrected);
    } else {
      fail(ErrorCode::InvalidInput, "coupled-disk programs are defined for obb, qq and qq-tilde");
    }
    const auto p = disk_program_solve(printed);
    const auto c = disk_program_solve(corrected);
    return {make_report(id + ".disk_bound", "coupled-disk bound as assembled in print", p.bound, std::nullopt, 0.0,
                        Relation::Report, p.certificate),
            make_report(id + ".disk_bound_corrected", "coupled-disk bound with the pairwise constant 1/2",
                        std::min(1.0, c.bound), std::nullopt, 0.0, Relation::Report, c.certificate)};
  }
  if (method == "moe") {
    if (o.name == "obb") return {example_go_trivial().report};
    if (o.name == "bb84") {
      const MoeGame g = bb84_game();
      const std::vector<HermitianOp> r{g.measurements[0].effects[0], g.measurements[1].effects[0]};
      return {make_report(id + ".moe_bound", "overlap-norm bound for the BB84 game", lemma_a1_bound(r) / 2.0,
                          std::nullopt, 0.0, Relation::Report, CertificateKind::Exact)};
    }
    fail(ErrorCode::InvalidInput, "monogamy games are defined for obb and bb84");
  }
  fail(ErrorCode::InvalidInput, "unknown method: " + method + " (expected postinfo, thm4, prop4, disk or moe)");
}

std::string reports_to_text(const std::vector<BoundReport>& reports) {
  std::size_t width = 0;
  for (const auto& r : reports) width = std::max(width, r.id.size());
  std::string out;
  for (const auto& r : reports) {
    out += r.id + std::string(width + 2 - r.id.size(), ' ') + format_double(r.computed) + "  [" +
           certificate_name(r.certificate) + "]";
    if (r.relation != Relation::Report && r.expected) {
      out += std::string("  ") + relation_name(r.relation) + " " + format_double(*r.expected) +
             (r.pass ? "  pass" : "  FAIL");
    }
    if (!r.note.empty()) out += "  (" + r.note + ")";
    out += "\n";
  }
  return out;
}

// product: s was induced from a product ensemble, so the verdicts read as LOSQC / LOSCC.
ojson broadcast_checks(const PostInfoEnsemble& s, const Settings& settings, bool product, std::string& summary) {
  ojson j;
  const auto k = kill_pattern_certificate(s);
  j["kill_pattern"] = {{"certified_infeasible", k.certified_infeasible}, {"kernel_dims", k.kernel_dims}};
  const auto d = perfect_classical_broadcast_decision(s, settings);
  j["classical_broadcast"] = {{"feasible", d.feasible},
                              {"value", d.value},
                              {"witness_violation", d.witness_violation},
                              {"kill_pattern_certified", d.kill_pattern_certified}};
  std::string verified;
  for (const char* name : {"thm1-isometry", "thm2-isometry"}) {
    const Isometry v = gallery_isometry(name);
    if (v.in_dim() != s.dim || v.output_dims.size() != 2) continue;
    const auto b = verify_orthogonality_broadcast(v, s, Cut{{0}});
    j["quantum_broadcast"][name] = {{"ok", b.ok}, {"max_overlap", b.max_overlap}};
    if (b.ok && verified.empty()) verified = name;
  }
  const std::string quantum = product ? "LOSQC" : "quantum orthogonality broadcasting";
  const std::string classical = product ? "LOSCC" : "classical orthogonality broadcasting";
  if (d.feasible) {
    summary = classical + (product ? "-distinguishable" : " feasible") + " (witness POVM verified)";
  } else {
    summary = verified.empty() ? quantum + " status undetermined"
                               : quantum + (product ? "-distinguishable" : " feasible") + " (explicit isometry verified)";
    summary += ", " + classical + (product ? "-infeasible" : " infeasible") +
               (d.kill_pattern_certified ? " (certified)" : " (numerical value " + format_double(d.value) + ")");
  }
  return j;
}

std::string check_json(const NamedObject& o, const Settings& settings) {
  ojson j;
  j["name"] = label(o);
  j["kind"] = o.kind();
  std::string summary;
  if (const auto* g = std::get_if<GopEnsemble>(&o.value)) {
    const auto orth = global_orthogonality_check(*g);
    j["orthogonality"] = {{"orthogonal", orth.orthogonal},
                          {"max_violation", orth.max_violation},
                          {"worst_pair", {orth.worst_j, orth.worst_k}}};
    if (g->dim_a == 2) {
      const auto f = qubit_qudit_form_check(*g);
      j["form"] = {{"fits", f.fits}, {"reason", f.reason}, {"removable", f.removable}};
    }
    const bool a = is_classical_side(*g, Party::A), b = is_classical_side(*g, Party::B);
    j["classical_side"] = a ? "A" : (b ? "B" : "none");
    if (!orth.orthogonal) {
      summary = "not globally orthogonal: entries " + std::to_string(orth.worst_j) + " and " +
                std::to_string(orth.worst_k) + " overlap " + format_double(orth.max_violation);
    } else if (a || b) {
      const auto induced = induce_postinfo(*g, a ? Party::A : Party::B);
      j.update(broadcast_checks(induced, settings, true, summary));
    } else {
      summary = "globally orthogonal; no classical side, broadcast checks skipped";
    }
  } else if (const auto* p = std::get_if<PostInfoEnsemble>(&o.value)) {
    j["orthogonal_within_settings"] = p->orthogonal;
    if (p->orthogonal) {
      j.update(broadcast_checks(*p, settings, false, summary));
    } else {
      summary = "states within a setting are not orthogonal; broadcast checks skipped";
    }
  } else if (const auto* m = std::get_if<Povm>(&o.value)) {
    j["invariant_residual"] = m->invariant_residual();
    summary = "valid POVM";
  } else {
    summary = "valid isometry";
  }
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

}  // namespace

extern "C" {

void obcast_options_default(obcast_options* out) {
  if (out == nullptr) return;
  const Settings s;
  out->tol_primal = s.tol_primal;
  out->tol_gap = s.tol_gap;
  out->tol_eig = s.tol_eig;
  out->seed = 42;
  out->trials = 0;
  out->jobs = 1;
}

const char* obcast_last_error(void) { return g_last_error.c_str(); }

const char* obcast_status_name(obcast_status status) {
  switch (status) {
    case OBCAST_OK: return "ok";
    case OBCAST_ERR_INVALID_INPUT: return "invalid-input";
    case OBCAST_ERR_UNKNOWN_NAME: return "unknown-name";
    case OBCAST_ERR_UNSUPPORTED_SIZE: return "unsupported-size";
    case OBCAST_ERR_PRECONDITION: return "precondition";
    case OBCAST_ERR_DOES_NOT_FIT_FORM: return "does-not-fit-form";
    case OBCAST_ERR_SOLVER_FAILURE: return "solver-failure";
    case OBCAST_ERR_IO: return "io";
    case OBCAST_ERR_INTERNAL: return "internal";
    case OBCAST_ERR_NULL_ARGUMENT: return "null-argument";
  }
  return "unknown";
}

void obcast_string_free(char* s) { delete[] s; }

obcast_status obcast_gallery_names(char** out) {
  if (out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = dup_string(join_lines(gallery_names())); });
}

obcast_status obcast_object_from_gallery(const char* name, obcast_object** out) {
  if (name == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = new obcast_object{gallery(name)}; });
}

obcast_status obcast_object_from_json(const char* text, obcast_object** out) {
  if (text == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = new obcast_object{from_json(text)}; });
}

obcast_status obcast_object_to_json(const obcast_object* obj, char** out) {
  if (obj == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = dup_string(to_json(obj->obj)); });
}

obcast_status obcast_object_kind(const obcast_object* obj, char** out) {
  if (obj == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = dup_string(obj->obj.kind()); });
}

void obcast_object_free(obcast_object* obj) { delete obj; }

obcast_status obcast_bound(const obcast_object* obj, const char* method, const obcast_options* options,
                           obcast_reports** out) {
  if (obj == nullptr || method == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = new obcast_reports{bound_reports(obj->obj, method, to_settings(options))}; });
}

obcast_status obcast_check(const obcast_object* obj, const obcast_options* options, char** out) {
  if (obj == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = dup_string(check_json(obj->obj, to_settings(options))); });
}

obcast_status obcast_reproduce(const obcast_options* options, const char* only, obcast_reports** out) {
  if (out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] {
    ReproduceOptions o;
    o.settings = to_settings(options);
    if (options != nullptr) {
      o.seed = options->seed;
      o.jobs = options->jobs;
    }
    o.only = split_commas(only);
    *out = new obcast_reports{run_reproduce(o)};
  });
}

obcast_status obcast_property_names(char** out) {
  if (out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = dup_string(join_lines(property_names())); });
}

obcast_status obcast_property_run(const char* name, const obcast_options* options, obcast_reports** out) {
  if (out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] {
    const std::uint64_t seed = options != nullptr ? options->seed : 42;
    const std::size_t trials = options != nullptr ? options->trials : 0;
    std::vector<BoundReport> r;
    if (name == nullptr) {
      for (const auto& n : property_names()) r.push_back(property_report(run_property(n, seed, trials)));
    } else {
      r.push_back(property_report(run_property(name, seed, trials)));
    }
    *out = new obcast_reports{std::move(r)};
  });
}

obcast_status obcast_moe_game_builtin(const char* name, obcast_moe_game** out) {
  if (name == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] {
    const std::string n = name;
    if (n == "go") {
      *out = new obcast_moe_game{n, go_game()};
    } else if (n == "bb84") {
      *out = new obcast_moe_game{n, bb84_game()};
    } else {
      fail(ErrorCode::UnknownName, "unknown game: " + n + " (expected go or bb84)");
    }
  });
}

obcast_status obcast_moe_game_from_json(const char* text, obcast_moe_game** out) {
  if (text == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = new obcast_moe_game{"input", moe_game_from_json(text)}; });
}

obcast_status obcast_moe_game_to_json(const obcast_moe_game* game, char** out) {
  if (game == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] { *out = dup_string(moe_game_to_json(game->game) + "\n"); });
}

obcast_status obcast_moe_analyze(const obcast_moe_game* game, obcast_reports** out) {
  if (game == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] {
    const MoeGame& g = game->game;
    const std::string id = "moe." + game->name;
    std::vector<BoundReport> r;
    if (g.settings() >= 2) {
      r.push_back(make_report(id + ".overlap", "overlap constant c(G)", overlap_constant(g), std::nullopt, 0.0,
                              Relation::Report, CertificateKind::Exact));
    }
    const MoeStrategy copy = copy_strategy(g);
    std::vector<HermitianOp> pis;
    for (std::size_t t = 0; t < g.settings(); ++t) pis.push_back(moe_pi(g, copy, t));
    const double n = static_cast<double>(g.settings());
    r.push_back(make_report(id + ".copy_bound", "overlap-norm bound on the copy strategy's winning operators",
                            lemma_a1_bound(pis) / n, std::nullopt, 0.0, Relation::Report, CertificateKind::Exact));
    r.push_back(make_report(id + ".copy_win", "copy strategy win probability, uniform prior", moe_win_prob(g, copy),
                            std::nullopt, 0.0, Relation::Report, CertificateKind::Exact));
    // Alice's own effects for outcome 0 give the bound for the transpose-trick reduction.
    std::vector<HermitianOp> first;
    for (const auto& m : g.measurements) first.push_back(m.effects[0]);
    r.push_back(make_report(id + ".outcome0_bound", "overlap-norm bound on Alice's outcome-0 effects",
                            lemma_a1_bound(first) / n, std::nullopt, 0.0, Relation::Report, CertificateKind::Exact));
    *out = new obcast_reports{std::move(r)};
  });
}

void obcast_moe_game_free(obcast_moe_game* game) { delete game; }

size_t obcast_reports_count(const obcast_reports* reports) { return reports == nullptr ? 0 : reports->items.size(); }

int obcast_reports_passed(const obcast_reports* reports) {
  return reports != nullptr && reproduce_passed(reports->items) ? 1 : 0;
}

obcast_status obcast_reports_get(const obcast_reports* reports, size_t index, const char** id, double* computed,
                                 int* pass) {
  if (reports == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  if (index >= reports->items.size()) {
    g_last_error = "report index out of range";
    return OBCAST_ERR_INVALID_INPUT;
  }
  const auto& r = reports->items[index];
  if (id != nullptr) *id = r.id.c_str();
  if (computed != nullptr) *computed = r.computed;
  if (pass != nullptr) *pass = r.pass ? 1 : 0;
  return OBCAST_OK;
}

obcast_status obcast_reports_render(const obcast_reports* reports, obcast_format format, char** out) {
  if (reports == nullptr || out == nullptr) return OBCAST_ERR_NULL_ARGUMENT;
  return guarded([&] {
    if (format == OBCAST_FORMAT_JSON) {
      *out = dup_string(reports_to_json(reports->items));
    } else if (format == OBCAST_FORMAT_CSV) {
      *out = dup_string(reports_to_csv(reports->items));
    } else if (format == OBCAST_FORMAT_TEXT) {
      *out = dup_string(reports_to_text(reports->items));
    } else {
      fail(ErrorCode::InvalidInput, "unknown report format");
    }
  });
}

void obcast_reports_free(obcast_reports* reports) { delete reports; }

}  // extern "C"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "obcast/obcast.h"

namespace {

enum Exit { kOk = 0, kUser = 1, kInternal = 2, kAcceptance = 3 };

struct Failure {
  int code;
  std::string message;
};

int exit_for(obcast_status s) {
  switch (s) {
    case OBCAST_OK: return kOk;
    case OBCAST_ERR_SOLVER_FAILURE:
    case OBCAST_ERR_INTERNAL: return kInternal;
    default: return kUser;
  }
}

void check(obcast_status s) {
  if (s != OBCAST_OK) throw Failure{exit_for(s), std::string(obcast_status_name(s)) + ": " + obcast_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { obcast_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ReportsDeleter {
  void operator()(obcast_reports* r) const { obcast_reports_free(r); }
};
using OwnedReports = std::unique_ptr<obcast_reports, ReportsDeleter>;

struct ObjectDeleter {
  void operator()(obcast_object* o) const { obcast_object_free(o); }
};
using OwnedObject = std::unique_ptr<obcast_object, ObjectDeleter>;

struct GameDeleter {
  void operator()(obcast_moe_game* g) const { obcast_moe_game_free(g); }
};
using OwnedGame = std::unique_ptr<obcast_moe_game, GameDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUser, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure{kInternal, "cannot write " + path};
}

obcast_format parse_format(const std::string& f) {
  if (f == "json") return OBCAST_FORMAT_JSON;
  if (f == "csv") return OBCAST_FORMAT_CSV;
  return OBCAST_FORMAT_TEXT;
}

std::string render(const obcast_reports* r, const std::string& format) {
  char* text = nullptr;
  check(obcast_reports_render(r, parse_format(format), &text));
  return OwnedString(text).get();
}

OwnedObject load_object(const std::string& gallery, const std::string& file) {
  obcast_object* obj = nullptr;
  if (!gallery.empty() && !file.empty()) throw Failure{kUser, "give either --gallery or a file, not both"};
  if (!gallery.empty()) {
    check(obcast_object_from_gallery(gallery.c_str(), &obj));
  } else if (!file.empty()) {
    check(obcast_object_from_json(read_file(file).c_str(), &obj));
  } else {
    throw Failure{kUser, "an input is required: --gallery NAME or a JSON file"};
  }
  return OwnedObject(obj);
}

// Flag values shared by the subcommands; every flag is mirrored by an OBCAST_ environment variable.
struct Flags {
  obcast_options options{};
  std::string reproduce_format = "json";
  std::string format = "text";  // bound, ur-test and moe
  std::string out;
  std::vector<std::string> only;
  std::string gallery;
  std::string file;
  std::string method;
  std::string suite;
  std::string game;
  bool dump = false;
};

void add_tolerances(CLI::App* cmd, Flags& f) {
  cmd->add_option("--tol-primal", f.options.tol_primal, "primal tolerance")->envname("OBCAST_TOL_PRIMAL")->capture_default_str();
  cmd->add_option("--tol-gap", f.options.tol_gap, "duality gap tolerance")->envname("OBCAST_TOL_GAP")->capture_default_str();
  cmd->add_option("--tol-eig", f.options.tol_eig, "eigenvalue clamp tolerance")->envname("OBCAST_TOL_EIG")->capture_default_str();
}

void add_output(CLI::App* cmd, Flags& f, std::string& format) {
  cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->envname("OBCAST_FORMAT")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output file (default stdout)")->envname("OBCAST_OUT");
}

void add_seed(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.options.seed, "random seed")->envname("OBCAST_SEED")->capture_default_str();
}

void add_input(CLI::App* cmd, Flags& f) {
  cmd->add_option("--gallery", f.gallery, "gallery object name")->envname("OBCAST_GALLERY");
  cmd->add_option("file", f.file, "JSON ensemble file")->envname("OBCAST_FILE");
}

int run_reproduce(const Flags& f) {
  std::string only;
  for (const auto& o : f.only) only += (only.empty() ? "" : ",") + o;
  obcast_reports* raw = nullptr;
  check(obcast_reproduce(&f.options, only.c_str(), &raw));
  OwnedReports reports(raw);
  write_output(render(reports.get(), f.reproduce_format), f.out);
  return obcast_reports_passed(reports.get()) ? kOk : kAcceptance;
}

int run_bound(const Flags& f) {
  const auto obj = load_object(f.gallery, f.file);
  obcast_reports* raw = nullptr;
  check(obcast_bound(obj.get(), f.method.c_str(), &f.options, &raw));
  OwnedReports reports(raw);
  write_output(render(reports.get(), f.format), f.out);
  return kOk;
}

int run_check(const Flags& f) {
  const auto obj = load_object(f.gallery, f.file);
  char* text = nullptr;
  check(obcast_check(obj.get(), &f.options, &text));
  write_output(OwnedString(text).get(), f.out);
  return kOk;
}

int run_gallery(const Flags& f) {
  char* text = nullptr;
  if (f.gallery.empty()) {
    check(obcast_gallery_names(&text));
  } else {
    const auto obj = load_object(f.gallery, "");
    check(obcast_object_to_json(obj.get(), &text));
  }
  OwnedString s(text);
  std::string out = s.get();
  if (!out.empty() && out.back() != '\n') out += '\n';
  write_output(out, f.out);
  return kOk;
}

int run_ur_test(const Flags& f) {
  obcast_reports* raw = nullptr;
  if (f.suite == "list") {
    char* text = nullptr;
    check(obcast_property_names(&text));
    write_output(OwnedString(text).get(), f.out);
    return kOk;
  }
  check(obcast_property_run(f.suite.empty() || f.suite == "all" ? nullptr : f.suite.c_str(), &f.options, &raw));
  OwnedReports reports(raw);
  write_output(render(reports.get(), f.format), f.out);
  return obcast_reports_passed(reports.get()) ? kOk : kAcceptance;
}

int run_moe(const Flags& f) {
  obcast_moe_game* raw = nullptr;
  if (!f.file.empty()) {
    check(obcast_moe_game_from_json(read_file(f.file).c_str(), &raw));
  } else {
    check(obcast_moe_game_builtin(f.game.c_str(), &raw));
  }
  OwnedGame game(raw);
  if (f.dump) {
    char* text = nullptr;
    check(obcast_moe_game_to_json(game.get(), &text));
    write_output(OwnedString(text).get(), f.out);
    return kOk;
  }
  obcast_reports* reports_raw = nullptr;
  check(obcast_moe_analyze(game.get(), &reports_raw));
  OwnedReports reports(reports_raw);
  write_output(render(reports.get(), f.format), f.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"obcast: orthogonality broadcasting and position-verification bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "obcast 1.0");

  Flags f;
  obcast_options_default(&f.options);

  auto* reproduce = app.add_subcommand("reproduce", "run every reference case and emit a pass/fail report");
  add_output(reproduce, f, f.reproduce_format);
  add_seed(reproduce, f);
  add_tolerances(reproduce, f);
  reproduce->add_option("--only", f.only, "id prefixes to keep (repeatable or comma-separated)")
      ->delimiter(',')
      ->envname("OBCAST_ONLY");
  reproduce->add_option("--jobs", f.options.jobs, "worker threads")
      ->check(CLI::Range(1, 256))
      ->envname("OBCAST_JOBS")
      ->capture_default_str();

  auto* bound = app.add_subcommand("bound", "compute one bound for an ensemble");
  add_input(bound, f);
  add_output(bound, f, f.format);
  add_tolerances(bound, f);
  bound->add_option("--method", f.method, "bound to compute")
      ->required()
      ->check(CLI::IsMember({"postinfo", "thm4", "prop4", "disk", "moe"}))
      ->envname("OBCAST_METHOD");

  auto* checkcmd = app.add_subcommand("check", "validate an ensemble and decide broadcast feasibility");
  add_input(checkcmd, f);
  add_tolerances(checkcmd, f);
  checkcmd->add_option("--out", f.out, "output file (default stdout)")->envname("OBCAST_OUT");

  auto* gallery = app.add_subcommand("gallery", "list gallery names, or print one object as JSON");
  gallery->add_option("name", f.gallery, "object to print")->envname("OBCAST_GALLERY");
  gallery->add_option("--out", f.out, "output file (default stdout)")->envname("OBCAST_OUT");

  auto* ur = app.add_subcommand("ur-test", "run seeded randomized property suites");
  add_output(ur, f, f.format);
  add_seed(ur, f);
  ur->add_option("--suite", f.suite, "suite name, all, or list")->envname("OBCAST_SUITE")->default_str("all");
  ur->add_option("--trials", f.options.trials, "trials per suite (0: suite default)")
      ->envname("OBCAST_TRIALS")
      ->capture_default_str();

  auto* moe = app.add_subcommand("moe", "analyze a monogamy game");
  f.game = "go";
  moe->add_option("--game", f.game, "built-in game")
      ->check(CLI::IsMember({"go", "bb84"}))
      ->envname("OBCAST_GAME")
      ->capture_default_str();
  moe->add_option("file", f.file, "game JSON file")->envname("OBCAST_FILE");
  moe->add_flag("--dump", f.dump, "print the game as JSON instead of analyzing it")->envname("OBCAST_DUMP");
  add_output(moe, f, f.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUser;
  }

  try {
    if (*reproduce) return run_reproduce(f);
    if (*bound) return run_bound(f);
    if (*checkcmd) return run_check(f);
    if (*gallery) return run_gallery(f);
    if (*ur) return run_ur_test(f);
    if (*moe) return run_moe(f);
  } catch (const Failure& e) {
    std::cerr << "obcast: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "obcast: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUser;
}

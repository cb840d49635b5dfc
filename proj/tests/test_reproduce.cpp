#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "reproduce.hpp"

using namespace obcast;

TEST_CASE("full suite: ids unique and sorted, only the soundness cases are red") {
  ReproduceOptions o;
  o.jobs = 2;
  const auto reports = run_reproduce(o);
  CHECK(reports.size() >= 20);
  std::set<std::string> ids, red;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    ids.insert(reports[k].id);
    if (k > 0) CHECK(reports[k - 1].id < reports[k].id);
    if (!reports[k].pass) red.insert(reports[k].id);
  }
  CHECK(ids.size() == reports.size());
  CHECK(red == std::set<std::string>{"obb.bound_soundness", "qq.bound_soundness"});
  CHECK_FALSE(reproduce_passed(reports));
  CHECK(reports_to_json(reports) == reports_to_json(run_reproduce(ReproduceOptions{})));
}

TEST_CASE("prefix filter") {
  ReproduceOptions o;
  o.only = {"bb84"};
  const auto reports = run_reproduce(o);
  REQUIRE_FALSE(reports.empty());
  for (const auto& r : reports) CHECK(r.id.rfind("bb84.", 0) == 0);
  CHECK(reproduce_passed(reports));
  o.only = {"nothing"};
  CHECK(run_reproduce(o).empty());
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "discrimination.hpp"
#include "report.hpp"

namespace obcast {

// Outcome of one seeded randomized suite. worst is the largest violation seen: lhs - rhs for
// inequalities, |a - b| for identities; the suite passes when worst <= tolerance.
struct PropertyResult {
  std::string id;
  std::string statement;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double tolerance = 0.0;

  bool pass() const { return failures == 0; }
};

const std::vector<std::string>& property_names();
// trials = 0 selects the suite's default count. Each suite draws from its own stream, so the
// result depends only on (name, seed, trials).
PropertyResult run_property(const std::string& name, std::uint64_t seed, std::size_t trials = 0);
BoundReport property_report(const PropertyResult& r);

// W = X = I_3, Y = Z = 0: computed is lhs - rhs = 9 - 6, showing the trace cap is needed.
BoundReport product_norm_counterexample();

// Maximum over subsets of at most d^2 row-merged targets of plain minimum-error discrimination.
double brute_force_postinfo(const PostInfoEnsemble& s, const Settings& settings = {});

}  // namespace obcast

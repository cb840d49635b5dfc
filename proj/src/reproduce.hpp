#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "discrimination.hpp"
#include "report.hpp"

namespace obcast {

struct ReproduceOptions {
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  std::vector<std::string> only;  // id prefixes; empty keeps every case
  Settings settings;
};

// Case groups in the order they are scheduled; each group yields one or more reports.
const std::vector<std::string>& reproduce_groups();
// Reports sorted by id; the order and content do not depend on jobs.
std::vector<BoundReport> run_reproduce(const ReproduceOptions& options);
// True when every non-heuristic report passes.
bool reproduce_passed(const std::vector<BoundReport>& reports);

}  // namespace obcast

#pragma once

#include <string>

#include "json.hpp"
#include "xfsynth/oracle.hpp"
#include "xfsynth/spec.hpp"

namespace xfsynth {

enum ExitCode { kExitBest = 0, kExitNotBest = 1, kExitUnsound = 2, kExitInadequate = 3, kExitConfig = 4 };

struct RunOptions {
  std::optional<uint64_t> max_iterations;
  bool verify_best = true;  // also subject to the spec's own flag
  bool trace = true;
};

struct Outcome {
  nlohmann::json report;  // timing lives under "timing" only
  int exit_code = kExitBest;
};

Outcome run_instance(Instance& in, const RunOptions& opt = {});
Outcome verify_instance(Instance& in, const Term& f, bool check_best = true);
nlohmann::json oracle_table(Instance& in, const std::vector<std::vector<std::string>>& inputs, size_t limit);

nlohmann::json example_json(const Problem& P, const Example& e);
std::string pretty_report(const nlohmann::json& r);
// The report without its "timing" object, for comparisons across runs.
nlohmann::json strip_timing(nlohmann::json r);

}  // namespace xfsynth

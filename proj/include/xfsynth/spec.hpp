#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xfsynth/engine.hpp"

namespace xfsynth {

inline constexpr const char* kSpecSchema = "xfsynth-spec/1";
inline constexpr const char* kReportSchema = "xfsynth-report/1";
inline constexpr const char* kVersion = "0.1.0";

struct ExampleText {
  std::vector<std::string> input;  // abstract values, one per argument
  nlohmann::json output;           // concrete value
};

struct SketchText {
  std::string skeleton;
  std::vector<HoleInput> holes;
};

// A problem spec as written in the file, before anything is enumerated.
struct ProblemSpec {
  std::string name, description, path;
  Ctx ctx;
  Dom dom = Dom::IntervalZ;
  Op op = Op::Abs;
  bool bot_strict = true;
  std::vector<SortDecl> sorts;
  std::string start;
  int depth = 1;
  bool symmetry = false;
  std::optional<SketchText> sketch;
  SchedulerConfig scheduler;
  std::vector<ExampleText> positive, negative;
  bool verify_best = true;
  uint64_t verify_cap = 4000000000ull;
  SpaceOptions space;
  std::vector<std::vector<std::string>> probes;
  nlohmann::json expect;  // free-form expectations checked by bench and tests
};

ProblemSpec parse_spec(const nlohmann::json& j, const std::string& origin = "<spec>");
ProblemSpec load_spec(const std::string& path);

// Everything a run needs, built from a spec.
struct Instance {
  ProblemSpec spec;
  std::unique_ptr<Problem> problem;
  Grammar grammar;
  Sketch sketch;
  std::unique_ptr<Space> space;  // built on demand

  Space& build_space();
  ExampleSet seed_examples();
  int find_input(const std::vector<std::string>& args);
  TermP parse(const std::string& text) const;  // a complete transformer term
};

std::unique_ptr<Instance> make_instance(const ProblemSpec& spec);

}  // namespace xfsynth

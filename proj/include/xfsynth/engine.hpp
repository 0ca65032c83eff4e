#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xfsynth/space.hpp"

namespace xfsynth {

struct SchedulerConfig {
  int k = 50;                        // consecutive precision checks before a forced soundness check
  uint64_t max_iterations = 100000;  // loop iterations before the run aborts
  std::optional<uint64_t> seed;      // set: random fair choice instead of precision-first (testing only)
};

struct SynthesisStats {
  uint64_t n_soundness = 0, n_precision = 0;
  uint64_t n_pos = 0, n_neg = 0;  // final |E+|, retained |E-|
  uint64_t n_maxsat = 0, n_dropped = 0;
  uint64_t iterations = 0;
  double t_soundness = 0, t_precision = 0, t_synthesis = 0, t_total = 0;  // seconds
};

struct TraceEvent {
  enum Kind { Synthesize, MaxSat, Soundness, Precision } kind = Synthesize;
  bool ok = true;                  // query passed (checks) or found a candidate (synthesis)
  std::optional<Example> example;  // counterexample added by a failed check
  std::optional<Cand> witness;     // the h behind a negative counterexample
  std::vector<Example> dropped;    // negatives removed by MaxSat
  std::string term;                // candidate after synthesis
};

const char* event_name(TraceEvent::Kind k);

struct EngineResult {
  enum Verdict { Found, Inadequate, Aborted } verdict = Aborted;
  std::optional<Cand> cand;
  TermP term;
  std::vector<int> outputs;
  ExampleSet examples;
  SynthesisStats stats;
  std::vector<TraceEvent> trace;
};

// The dual CEGIS loop: a soundness loop adding positive counterexamples and a
// precision loop adding negative ones, with MaxSat repair when the examples
// become inconsistent. `seed` examples are E+ and E- at start.
EngineResult synthesize_transformer(Space& sp, const ExampleSet& seed, const SchedulerConfig& cfg,
                                    const std::function<void(const TraceEvent&)>& on_event = {});

// First positive counterexample of a transformer given by its outputs.
std::optional<Example> check_soundness(Problem& P, const std::vector<int>& outputs);

}  // namespace xfsynth

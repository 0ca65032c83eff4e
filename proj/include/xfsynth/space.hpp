#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xfsynth/grammar.hpp"
#include "xfsynth/problem.hpp"

namespace xfsynth {

struct ExampleSet {
  std::vector<Example> pos, neg;  // insertion order
};

// A member of L: one tuple of hole fillers inside one segment of the space.
struct Cand {
  int seg = -1;
  std::vector<int> idx;
  int row = -1;  // table segments
  bool valid() const { return seg >= 0; }
  bool operator==(const Cand& o) const { return seg == o.seg && idx == o.idx; }
};

struct MaxSatResult {
  Cand cand;
  std::vector<int> dropped;  // indices into ExampleSet::neg, ascending
};

struct PrecisionResult {
  Cand h;
  Example ex;
};

struct BestResult {
  enum Status { Best, Dominated, Unverified } status = Best;
  Cand witness;
  uint64_t work = 0;
};

struct SpaceOptions {
  double lazy_threshold = 1.5e8;   // raw top-level evaluations before the top level is kept lazy
  uint64_t cell_limit = 1ull << 26;  // materialized values per environment table
  uint64_t table_limit = 40000000;   // candidates x inputs for plain tables
  uint64_t raw_limit = 60000000;     // raw terms per materialized level
};

// The candidate language L of a problem, ordered canonically: by maximal hole
// depth, then lexicographically by the canonical ranks of the hole fillers.
// Fillers are observational-equivalence classes over the environments each
// hole is evaluated in; every class is represented by its first term, so
// "first candidate" answers coincide with a naive enumeration.
class Space {
 public:
  Space(Problem& p, const Grammar& g, const Sketch& s, SpaceOptions o = {});
  ~Space();
  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;

  Problem& problem() { return P_; }
  uint64_t size() const;
  std::string describe() const;

  // True when the candidate meets every positive and excludes every negative.
  bool sat(const Cand& c, const ExampleSet& E);
  // First candidate consistent with E.
  std::optional<Cand> synthesize(const ExampleSet& E);
  // Minimum-cardinality dropped set; ties go to the earliest subset in
  // combination order, then to the earliest candidate.
  std::optional<MaxSatResult> maxsat(const ExampleSet& E);
  // Outer loop over h, inner loop over (a, c') with c' in W.
  std::optional<PrecisionResult> precision(const std::vector<int>& f_out, const ExampleSet& E);
  // First member of L that is sound and strictly more precise than f on W.
  BestResult verify_best(const std::vector<int>& f_out, uint64_t cap);

  std::vector<int> outputs(const Cand& c);
  int output_at(const Cand& c, size_t j);
  TermP term(const Cand& c) const;
  int depth(const Cand& c) const;
  // Visits every candidate in canonical order until fn returns false.
  void for_each(const std::function<bool(const Cand&)>& fn);

  struct Seg;
  struct Query;
  struct State;

 private:
  void build();

  Problem& P_;
  const Grammar& G_;
  Sketch S_;
  SpaceOptions opt_;
  std::unique_ptr<State> st_;
};

}  // namespace xfsynth

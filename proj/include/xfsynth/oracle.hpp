#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xfsynth/space.hpp"

namespace xfsynth {

// Brute-force ground truth. Everything here re-derives images by running the
// concrete operation on each member and testing membership with gamma_contains
// directly, without the problem's cached bitsets.

// alpha of { op(c) | c in gamma(input j) }
Value best_abstract(const Problem& P, size_t j);

// Output of f at input j as a value (bottom-strict wrapper included).
Value eval_at(Problem& P, const Term& f, size_t j);

// First <a, op(c)> with op(c) outside gamma(f(a)), in input then member order.
std::optional<Example> verify_sound(Problem& P, const Term& f);

// Every image at input j that f(a) misses, in member order without repeats.
std::vector<Value> violations(Problem& P, const Term& f, size_t j);

struct BestVerdict {
  enum Status { Best, Dominated, Unverified } status = Best;
  TermP witness;
  uint64_t work = 0;
};

// f must be sound. Searches L for a sound g with gamma(g(a)) within gamma(f(a))
// on every input and strictly smaller on one, comparing over the witness universe.
BestVerdict verify_best(Problem& P, Space& L, const Term& f, uint64_t cap);
// Same question over an explicit term list, one term at a time.
BestVerdict verify_best_naive(Problem& P, const std::vector<TermP>& L, const Term& f, uint64_t cap);

// Positive counterexample: c' in gamma(best(a)) and not in gamma(f(a)).
bool valid_positive(Problem& P, const Term& f, const Example& e);
// Negative counterexample: h meets E+, h excludes E- and e, and e's output is in gamma(f(a)).
bool valid_negative(Problem& P, const Term& f, const Term& h, const ExampleSet& E, const Example& e);

}  // namespace xfsynth

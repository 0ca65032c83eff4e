#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "xfsynth/oracle.hpp"

using namespace xt;

namespace {

const char* kSmallAbs = R"J({
  "name": "small_abs",
  "domain": {"id": "interval_z", "N": 4},
  "operation": "abs",
  "grammar": {"start": "T", "depth": 3, "sorts": [
    {"name": "T", "kind": "abs", "productions": ["[E, E]"]},
    {"name": "E", "kind": "int", "productions": ["a.l", "a.r", "0", "-E", "max(E, E)"]}]},
  "sketch": {"skeleton": "[?lo, ?hi]", "holes": [{"name": "lo", "sort": "E"}, {"name": "hi", "sort": "E"}]}
})J";

// The language listed in canonical order. Fillers that agree on every input
// form one class, represented by the first filler enumerated; tuples of
// classes are ordered by their deepest class, then lexicographically by rank.
struct Naive {
  std::vector<TermP> terms;

  explicit Naive(Instance& in) {
    const Grammar& g = in.grammar;
    Problem& P = *in.problem;
    EvalCtx ec;
    ec.c = &P.ctx();
    ec.dom = P.dom();
    std::map<std::vector<int64_t>, size_t> seen;
    std::vector<GTerm> reps;
    for (auto& t : enumerate_terms(g, g.sort_index("E"), g.depth)) {
      std::vector<int64_t> v;
      for (size_t j = 0; j < P.num_inputs(); ++j) {
        if (P.input_has_bot(j)) continue;
        Env env = P.input(j);
        v.push_back(std::get<int64_t>(eval(*t.term, ec, env)));
      }
      if (seen.emplace(v, reps.size()).second) reps.push_back(t);
    }
    for (int m = 1; m <= g.depth; ++m)
      for (const auto& lo : reps)
        for (const auto& hi : reps) {
          if (std::max(lo.depth, hi.depth) != m) continue;
          terms.push_back(fill_sketch(in.sketch, g, {lo.term, hi.term}));
        }
  }
};

bool meets(const Problem& P, const Term& f, const Example& e) {
  return in_gamma(P, apply_term(P, f, size_t(e.input)), e.out);
}

bool consistent(const Problem& P, const Term& f, const ExampleSet& E) {
  for (const auto& e : E.pos)
    if (!meets(P, f, e)) return false;
  for (const auto& e : E.neg)
    if (meets(P, f, e)) return false;
  return true;
}

ExampleSet random_examples(const Problem& P, std::mt19937& rng, size_t npos, size_t nneg) {
  ExampleSet E;
  while (E.pos.size() < npos) {
    size_t j = rng() % P.num_inputs();
    auto im = images(P, j);
    if (im.empty()) continue;
    E.pos.push_back(P.make_example(j, im[rng() % im.size()]));
  }
  const auto& W = P.witnesses();
  while (E.neg.size() < nneg) {
    size_t j = rng() % P.num_inputs();
    if (P.input_has_bot(j)) continue;
    E.neg.push_back(P.make_example(j, W[rng() % W.size()]));
  }
  return E;
}

std::vector<int> outputs_of(Problem& P, const Term& f) {
  std::vector<int> o(P.num_inputs());
  for (size_t j = 0; j < o.size(); ++j) o[j] = P.eval_output(f, j);
  return o;
}

}  // namespace

TEST(Space, SizeAndOrderMatchNaiveEnumeration) {
  auto in = from_json(kSmallAbs);
  Space& sp = in->build_space();
  Naive nv(*in);
  EXPECT_EQ(sp.size(), nv.terms.size());
  size_t i = 0;
  sp.for_each([&](const Cand& c) {
    if (i >= nv.terms.size()) return false;
    EXPECT_EQ(print_term(*sp.term(c)), print_term(*nv.terms[i])) << i;
    ++i;
    return true;
  });
  EXPECT_EQ(i, nv.terms.size());
}

TEST(Space, SynthesizeReturnsTheFirstConsistentTerm) {
  auto in = from_json(kSmallAbs);
  Space& sp = in->build_space();
  Problem& P = *in->problem;
  Naive nv(*in);
  std::mt19937 rng(3);
  for (int t = 0; t < 60; ++t) {
    ExampleSet E = random_examples(P, rng, rng() % 5, rng() % 4);
    TermP want;
    for (const auto& f : nv.terms)
      if (consistent(P, *f, E)) {
        want = f;
        break;
      }
    auto got = sp.synthesize(E);
    ASSERT_EQ(bool(got), bool(want)) << t;
    if (!got) continue;
    EXPECT_EQ(print_term(*sp.term(*got)), print_term(*want));
    EXPECT_TRUE(sp.sat(*got, E));
  }
}

TEST(Space, MaxSatDropsTheEarliestMinimumSet) {
  auto in = from_json(kSmallAbs);
  Space& sp = in->build_space();
  Problem& P = *in->problem;
  Naive nv(*in);
  std::mt19937 rng(5);
  for (int t = 0; t < 30; ++t) {
    ExampleSet E = random_examples(P, rng, 1 + rng() % 4, 2 + rng() % 5);
    // naive: subsets by size, combinations in index order, then terms in order
    const size_t n = E.neg.size();
    std::optional<std::pair<std::vector<int>, TermP>> want;
    for (size_t k = 0; k <= n && !want; ++k) {
      std::vector<int> comb(k);
      for (size_t i = 0; i < k; ++i) comb[i] = int(i);
      while (!want) {
        ExampleSet R;
        R.pos = E.pos;
        for (size_t i = 0; i < n; ++i)
          if (std::find(comb.begin(), comb.end(), int(i)) == comb.end()) R.neg.push_back(E.neg[i]);
        for (const auto& f : nv.terms)
          if (consistent(P, *f, R)) {
            want = std::make_pair(comb, f);
            break;
          }
        size_t i = k;
        while (i > 0 && comb[i - 1] == int(n - k + i - 1)) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (size_t q = i; q < k; ++q) comb[q] = comb[q - 1] + 1;
      }
    }
    auto got = sp.maxsat(E);
    ASSERT_EQ(bool(got), bool(want));
    if (!got) continue;
    EXPECT_EQ(got->dropped, want->first);
    EXPECT_EQ(print_term(*sp.term(got->cand)), print_term(*want->second));
  }
}

TEST(Space, PrecisionWitnessIsCanonicalFirst) {
  auto in = from_json(kSmallAbs);
  Space& sp = in->build_space();
  Problem& P = *in->problem;
  Naive nv(*in);
  const auto& W = P.witnesses();
  std::mt19937 rng(9);
  for (int t = 0; t < 25; ++t) {
    ExampleSet E = random_examples(P, rng, rng() % 4, rng() % 3);
    TermP f = nv.terms[rng() % nv.terms.size()];
    auto fo = outputs_of(P, *f);
    std::optional<std::pair<TermP, Example>> want;
    for (const auto& h : nv.terms) {
      if (!consistent(P, *h, E)) continue;
      for (size_t j = 0; j < P.num_inputs() && !want; ++j) {
        Value fa = apply_term(P, *f, j), ha = apply_term(P, *h, j);
        for (const auto& x : W)
          if (in_gamma(P, fa, x) && !in_gamma(P, ha, x)) {
            want = std::make_pair(h, P.make_example(j, x));
            break;
          }
      }
      if (want) break;
    }
    auto got = sp.precision(fo, E);
    ASSERT_EQ(bool(got), bool(want)) << t;
    if (!got) continue;
    EXPECT_EQ(print_term(*sp.term(got->h)), print_term(*want->first));
    EXPECT_EQ(got->ex.input, want->second.input);
    EXPECT_TRUE(got->ex.out == want->second.out);
  }
}

TEST(Space, BestCheckAgreesWithNaiveSearch) {
  auto in = from_json(kSmallAbs);
  Space& sp = in->build_space();
  Problem& P = *in->problem;
  Naive nv(*in);
  for (const char* s : {"[max(a.l, -a.r), max(-a.l, a.r)]", "[0, max(-a.l, a.r)]", "[0, max(a.r, max(-a.l, 0))]"}) {
    TermP f = in->parse(s);
    ASSERT_FALSE(verify_sound(P, *f)) << s;
    auto fast = verify_best(P, sp, *f, 1ull << 40);
    auto slow = verify_best_naive(P, nv.terms, *f, 1ull << 40);
    EXPECT_EQ(fast.status, slow.status) << s;
  }
  EXPECT_EQ(verify_best(P, sp, *in->parse("[0, max(-a.l, a.r)]"), 1ull << 40).status, BestVerdict::Dominated);
}

TEST(Space, SoundnessCounterexampleIsAnEscapingImage) {
  auto in = from_json(kSmallAbs);
  Problem& P = *in->problem;
  TermP f = in->parse("[a.l, a.r]");
  auto e = verify_sound(P, *f);
  ASSERT_TRUE(e);
  auto im = images(P, size_t(e->input));
  EXPECT_NE(std::find(im.begin(), im.end(), e->out), im.end());
  EXPECT_FALSE(meets(P, *f, *e));
}

#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace xt;

namespace {

Grammar small_grammar(int depth, bool symmetry) {
  Ctx c;
  std::vector<SortDecl> sorts = {{"T", Kind::Abs, {"[E, E]"}},
                                 {"E", Kind::Int, {"a.l", "a.r", "0", "-E", "E + E"}}};
  return make_grammar(Dom::IntervalZ, c, sorts, "T", depth, symmetry);
}

// Terms of E with depth <= d: 3 leaves, one unary and one binary production.
uint64_t count_e(int d, bool symmetry) {
  if (d < 1) return 0;
  uint64_t p = count_e(d - 1, symmetry);
  uint64_t bin = symmetry ? p * (p + 1) / 2 : p * p;
  return 3 + p + bin;
}

}  // namespace

TEST(Grammar, EnumerationCountFollowsRecurrence) {
  for (bool sym : {false, true}) {
    for (int d = 1; d <= 4; ++d) {
      Grammar g = small_grammar(d, sym);
      int e = g.sort_index("E");
      auto terms = enumerate_terms(g, e, d);
      EXPECT_EQ(terms.size(), count_e(d, sym)) << "depth " << d << " symmetry " << sym;
      // the start sort adds one production step on top of E
      auto top = enumerate_terms(g, g.start, d);
      uint64_t ne = count_e(d - 1, sym);
      EXPECT_EQ(top.size(), ne * ne);
    }
  }
}

TEST(Grammar, EnumerationIsOrderedByDepthAndHasNoDuplicates) {
  Grammar g = small_grammar(3, false);
  auto terms = enumerate_terms(g, g.sort_index("E"), 3);
  std::set<std::string> seen;
  int last = 0;
  for (const auto& t : terms) {
    EXPECT_GE(t.depth, last);
    last = t.depth;
    EXPECT_TRUE(seen.insert(print_term(*t.term)).second) << print_term(*t.term);
  }
}

TEST(Grammar, DerivationDepthMatchesEnumeration) {
  Grammar g = small_grammar(3, false);
  int e = g.sort_index("E");
  for (const auto& t : enumerate_terms(g, e, 3)) EXPECT_EQ(derivation_depth(g, e, *t.term), t.depth);
  ParseScope scope{Dom::IntervalZ, nullptr, nullptr};
  EXPECT_EQ(derivation_depth(g, e, *parse_term("min(a.l, a.r)", scope)), -1);
  EXPECT_EQ(derivation_depth(g, e, *parse_term("-(-(-a.l))", scope)), 4);
}

TEST(Grammar, PrintedTermsReparseToTheSameTree) {
  Grammar g = small_grammar(4, true);
  ParseScope scope{Dom::IntervalZ, nullptr, nullptr};
  for (const auto& t : enumerate_terms(g, g.start, 4)) {
    std::string s = print_term(*t.term);
    TermP back = parse_term(s, scope);
    EXPECT_TRUE(terms_equal(*back, *t.term)) << s;
    EXPECT_EQ(print_term(*back), s);
  }
}

TEST(Grammar, RoundTripCoversEveryBuiltinForm) {
  Ctx c;
  c.sigma = " ab";
  std::vector<std::string> ci = {
      "ite(isSubset(a2.l, a1.u), ite(isEmpty(a2), BoolTrue, BoolTop), BoolFalse)",
      "ite(!sizeLe1(a1.u) && (isTop(a1) || isBot(a2)), BoolTop, BoolBot)",
      "[union(a1.l, {\" \", \"a\"}), removeSpace(inter(a1.u, a2.u))]"};
  for (const auto& s : ci) {
    TermP t = parse_term(s, {Dom::CI, &c, nullptr});
    EXPECT_EQ(print_term(*t), s);
  }
  std::vector<std::string> iv = {"[max(max(0, a.l), -a.r), max(-a.l, a.r)]", "[(a.l - a.r) * 2, -(a.l + a.r)]",
                                 "[+inf, -inf]"};
  for (const auto& s : iv) EXPECT_EQ(print_term(*parse_term(s, {Dom::IntervalZ, &c, nullptr})), s);
  std::string sh = "shLoop(a1, a2, rotl(r, 1), xor(c, rotl(one, i)))";
  EXPECT_EQ(print_term(*parse_term(sh, {Dom::SH, &c, nullptr})), sh);
}

TEST(Grammar, ParseErrorsAreConfigErrors) {
  Ctx c;
  ParseScope scope{Dom::IntervalZ, &c, nullptr};
  EXPECT_THROW(parse_term("min(a.l", scope), ConfigError);
  EXPECT_THROW(parse_term("a.q", scope), ConfigError);
  EXPECT_THROW(parse_term("frob(a.l)", scope), ConfigError);
  EXPECT_THROW(parse_term("?x", scope), ConfigError);
}

TEST(Grammar, FillSketchReplacesHoles) {
  auto in = load("abs_interval.json");
  const Sketch& s = in->sketch;
  ASSERT_EQ(s.holes.size(), 2u);
  ParseScope scope{Dom::IntervalZ, &in->problem->ctx(), nullptr};
  TermP lo = parse_term("max(max(0, a.l), -a.r)", scope);
  TermP hi = parse_term("max(-a.l, a.r)", scope);
  TermP f = fill_sketch(s, in->grammar, {lo, hi});
  EXPECT_FALSE(has_holes(*f));
  EXPECT_EQ(print_term(*f), "[max(max(0, a.l), -a.r), max(-a.l, a.r)]");
}

TEST(Eval, AbsTermOnSampleInputs) {
  auto in = load("abs_interval.json");
  Problem& P = *in->problem;
  TermP f = in->parse("[max(max(0, a.l), -a.r), max(-a.l, a.r)]");
  auto at = [&](const char* a) {
    int j = in->find_input({a});
    return format_value(P.ctx(), P.out_dom(), apply_term(P, *f, size_t(j)));
  };
  EXPECT_EQ(at("[-15, -11]"), "[11, 15]");
  EXPECT_EQ(at("[-1, 0]"), "[0, 1]");
  EXPECT_EQ(at("[5, 9]"), "[5, 9]");
  EXPECT_EQ(at("[-3, 7]"), "[0, 7]");
}

TEST(Eval, SaturatingArithmeticOnInfinities) {
  Ctx c;
  ParseScope scope{Dom::IntervalZ, &c, nullptr};
  EvalCtx ec;
  ec.c = &c;
  Env env;
  env[kA] = Interval{false, -3, 4};
  auto ev = [&](const char* s) { return std::get<int64_t>(eval(*parse_term(s, scope), ec, env)); };
  EXPECT_EQ(ev("a.l + a.r"), 1);
  EXPECT_EQ(ev("a.l * a.r"), -12);
  EXPECT_EQ(ev("+inf + 5"), ev("+inf"));
  EXPECT_EQ(ev("-inf * -1"), ev("+inf"));
  EXPECT_EQ(ev("-(-inf)"), ev("+inf"));
}

#include <gtest/gtest.h>

#include "support.hpp"

using namespace xt;

namespace {

const char* kSmallAbs = R"J({
  "name": "small_abs",
  "domain": {"id": "interval_z", "N": 6},
  "operation": "abs",
  "grammar": {"start": "T", "depth": 3, "sorts": [
    {"name": "T", "kind": "abs", "productions": ["[E, E]"]},
    {"name": "E", "kind": "int", "productions": ["a.l", "a.r", "0", "-E", "max(E, E)", "min(E, E)"]}]},
  "sketch": {"skeleton": "[?lo, ?hi]", "holes": [{"name": "lo", "sort": "E"}, {"name": "hi", "sort": "E"}]}
})J";

}  // namespace

TEST(Engine, SmallAbsReachesASoundBestTerm) {
  auto in = from_json(kSmallAbs);
  Space& sp = in->build_space();
  SchedulerConfig cfg;
  auto res = synthesize_transformer(sp, {}, cfg);
  ASSERT_EQ(res.verdict, EngineResult::Found);
  Problem& P = *in->problem;
  for (size_t j = 0; j < P.num_inputs(); ++j) {
    Value got = apply_term(P, *res.term, j);
    for (const auto& x : images(P, j)) EXPECT_TRUE(in_gamma(P, got, x));
  }
  EXPECT_EQ(res.stats.n_pos, res.examples.pos.size());
  EXPECT_EQ(res.stats.n_neg, res.examples.neg.size());
  // one check per iteration
  EXPECT_EQ(res.stats.iterations, res.stats.n_soundness + res.stats.n_precision);
}

TEST(Engine, FlagsClearEachOther) {
  auto in = from_json(kSmallAbs);
  auto res = synthesize_transformer(in->build_space(), {}, {});
  // after a failed soundness check the next check cannot be the final one
  bool sound = false, precise = false;
  for (const auto& ev : res.trace) {
    if (ev.kind == TraceEvent::Soundness) {
      sound = ev.ok;
      if (!ev.ok) precise = false;
    } else if (ev.kind == TraceEvent::Precision) {
      precise = ev.ok;
      if (!ev.ok) sound = false;
    }
  }
  EXPECT_TRUE(sound && precise);
  EXPECT_TRUE(res.trace.back().ok);
}

TEST(Engine, PrecisionStreakForcesSoundnessCheck) {
  auto in = from_json(kSmallAbs);
  SchedulerConfig cfg;
  cfg.k = 1;
  auto res = synthesize_transformer(in->build_space(), {}, cfg);
  ASSERT_EQ(res.verdict, EngineResult::Found);
  // with k = 1 two failed precision checks never follow each other
  int streak = 0;
  for (const auto& ev : res.trace) {
    if (ev.kind == TraceEvent::Precision) {
      ++streak;
      EXPECT_LE(streak, 1);
    } else if (ev.kind == TraceEvent::Soundness) {
      streak = 0;
    }
  }
}

TEST(Engine, IterationCapAborts) {
  auto in = from_json(kSmallAbs);
  SchedulerConfig cfg;
  cfg.max_iterations = 3;
  auto res = synthesize_transformer(in->build_space(), {}, cfg);
  EXPECT_EQ(res.verdict, EngineResult::Aborted);
  EXPECT_THROW(synthesize_transformer(in->build_space(), {}, SchedulerConfig{0, 10, {}}), ConfigError);
}

TEST(Engine, BottomOnlyLanguageIsInadequate) {
  auto in = from_json(R"J({
    "name": "bot_only", "domain": {"id": "interval_z", "N": 4}, "operation": "abs",
    "grammar": {"start": "T", "depth": 1, "sorts": [{"name": "T", "kind": "abs", "productions": ["BOT"]}]}})J");
  auto res = synthesize_transformer(in->build_space(), {}, {});
  EXPECT_EQ(res.verdict, EngineResult::Inadequate);
}

TEST(Engine, SeededExamplesAreUsed) {
  auto in = from_json(R"J({
    "name": "seeded", "domain": {"id": "interval_z", "N": 4}, "operation": "abs",
    "grammar": {"start": "T", "depth": 3, "sorts": [
      {"name": "T", "kind": "abs", "productions": ["[E, E]"]},
      {"name": "E", "kind": "int", "productions": ["a.l", "a.r", "0", "-E", "max(E, E)"]}]},
    "examples": {"positive": [{"input": ["[-1, 0]"], "output": 1}],
                 "negative": [{"input": ["[-4, -3]"], "output": 2}]}})J");
  ExampleSet E = in->seed_examples();
  ASSERT_EQ(E.pos.size(), 1u);
  ASSERT_EQ(E.neg.size(), 1u);
  auto res = synthesize_transformer(in->build_space(), E, {});
  ASSERT_EQ(res.trace.front().kind, TraceEvent::Synthesize);
  // the first candidate already covers the seeded positive
  TermP f0 = in->parse(res.trace.front().term);
  EXPECT_TRUE(in_gamma(*in->problem, apply_term(*in->problem, *f0, size_t(E.pos[0].input)), E.pos[0].out));
}

TEST(Report, RunIsDeterministicModuloTiming) {
  auto a = from_json(kSmallAbs);
  auto b = from_json(kSmallAbs);
  auto ra = run_instance(*a);
  auto rb = run_instance(*b);
  EXPECT_EQ(ra.exit_code, kExitBest);
  EXPECT_EQ(strip_timing(ra.report).dump(), strip_timing(rb.report).dump());
  EXPECT_TRUE(ra.report.contains("timing"));
  EXPECT_FALSE(strip_timing(ra.report).contains("timing"));
  const auto& st = ra.report["stats"];
  for (const char* k : {"soundness_queries", "precision_queries", "positive_examples", "negative_examples",
                        "maxsat_calls", "dropped_negatives", "iterations"})
    EXPECT_TRUE(st.contains(k)) << k;
  // the reported term re-parses to the same tree
  TermP t = a->parse(ra.report["term"].get<std::string>());
  EXPECT_EQ(print_term(*t), ra.report["term"].get<std::string>());
}

TEST(Report, ExitCodes) {
  auto in = from_json(kSmallAbs);
  EXPECT_EQ(verify_instance(*in, *in->parse("[0, max(-a.l, a.r)]")).exit_code, kExitNotBest);
  EXPECT_EQ(verify_instance(*in, *in->parse("[a.l, a.r]")).exit_code, kExitUnsound);
  EXPECT_EQ(verify_instance(*in, *in->parse("[max(max(0, a.l), -a.r), max(-a.l, a.r)]")).exit_code, kExitBest);
  auto bot = from_json(R"J({
    "name": "bot_only", "domain": {"id": "interval_z", "N": 4}, "operation": "abs",
    "grammar": {"start": "T", "depth": 1, "sorts": [{"name": "T", "kind": "abs", "productions": ["BOT"]}]}})J");
  EXPECT_EQ(run_instance(*bot).exit_code, kExitInadequate);
}

TEST(Spec, ValidationErrors) {
  EXPECT_THROW(from_json(R"J({"name": "x", "domain": {"id": "nope"}, "operation": "abs",
    "grammar": {"start": "T", "sorts": []}})J"), ConfigError);
  EXPECT_THROW(from_json(R"J({"name": "x", "domain": {"id": "ci"}, "operation": "mul",
    "grammar": {"start": "T", "sorts": [{"name": "T", "kind": "abs", "productions": ["a"]}]}})J"), ConfigError);
  EXPECT_THROW(from_json(R"J({"name": "x", "domain": {"id": "interval_z"}, "operation": "abs", "bogus": 1,
    "grammar": {"start": "T", "sorts": [{"name": "T", "kind": "abs", "productions": ["a"]}]}})J"), ConfigError);
  EXPECT_THROW(from_json(R"J({"name": "x", "domain": {"id": "interval_z"}, "operation": "abs",
    "grammar": {"start": "T", "sorts": [{"name": "T", "kind": "abs", "productions": ["a.l"]}]}})J"), ConfigError);
}

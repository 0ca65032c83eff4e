// One line per acceptance criterion: "criterion N: PASS|FAIL <summary>".
// Usage: acceptance [N]   (no argument runs all of them)

#include <bitset>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

#include "support.hpp"
#include "xfsynth/bitvec.hpp"
#include "xfsynth/oracle.hpp"

using namespace xt;
using nlohmann::json;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double secs(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

struct Ran {
  std::unique_ptr<Instance> in;
  Outcome out;
  TermP term;
};

Ran run_spec(const std::string& rel, bool best = true) {
  Ran r;
  r.in = load(rel);
  RunOptions o;
  o.verify_best = best;
  r.out = run_instance(*r.in, o);
  if (r.out.report.contains("term")) r.term = r.in->parse(r.out.report["term"].get<std::string>());
  return r;
}

Outcome verify_file(Instance& in, const std::string& fixture) {
  std::string text = read_file(spec_path("fixtures/" + fixture));
  return verify_instance(in, *in.parse(text), false);
}

size_t input_of(Instance& in, std::vector<std::string> args) {
  int j = in.find_input(args);
  if (j < 0) throw std::runtime_error("input not enumerated");
  return size_t(j);
}

// f sound at input j, by brute-force images
bool sound_at(const Problem& P, const Term& f, size_t j) {
  Value out = apply_term(P, f, j);
  for (const auto& x : images(P, j))
    if (!in_gamma(P, out, x)) return false;
  return true;
}

const json* probe_for(const json& report, const std::vector<std::string>& input) {
  for (const auto& p : report["probes"])
    if (p["input"].get<std::vector<std::string>>() == input) return &p;
  return nullptr;
}

bool missed_has(const json& probe, const json& x) {
  for (const auto& m : probe["missed"])
    if (m == x) return true;
  return false;
}

// 1. abs over IntervalZ
Verdict c1() {
  auto t0 = Clock::now();
  Ran r = run_spec("abs_interval.json");
  double dt = secs(t0);
  Problem& P = *r.in->problem;
  if (!r.term) return {false, "no term"};
  TermP eq3 = r.in->parse("[max(max(0, a.l), -a.r), max(-a.l, a.r)]");
  size_t diff = 0, unsound = 0;
  for (size_t j = 0; j < P.num_inputs(); ++j) {
    Value a = apply_term(P, *r.term, j), b = apply_term(P, *eq3, j);
    if (!gamma_equal_w(P, a, b)) ++diff;
    if (!sound_at(P, *r.term, j)) ++unsound;
  }
  bool best = r.out.report["verdict"] == "best" && r.out.report["best_check"] == "verified";
  bool ok = best && diff == 0 && unsound == 0 && dt <= 120;
  return {ok, fmt("abs IntervalZ N=16 depth 3: %s, %zu/%zu inputs differ from the reference term, %zu unsound, %.1fs; term %s",
                  best ? "sound and best" : "NOT best", diff, P.num_inputs(), unsound, dt,
                  r.out.report["term"].get<std::string>().c_str())};
}

// 2. mul overflow templates
Verdict c2() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  struct M {
    const char* spec;
    const char* ref;
  } ms[] = {{"intervals/uint_mul.json", "ite(overflow_mul(a1, a2), TOP, [mul(a2.l, a1.l), mul(a2.r, a1.r)])"},
            {"intervals/sint_mul.json",
             "ite(overflow_mul(a1, a2), TOP, [min(min(mul(a2.r, a1.r), mul(a1.r, a2.l)), min(mul(a1.l, a2.r), "
             "mul(a2.l, a1.l))), max(max(mul(a1.l, a2.l), mul(a2.r, a1.r)), max(mul(a1.r, a2.l), mul(a1.l, a2.r)))])"}};
  for (const auto& m : ms) {
    Ran r = run_spec(m.spec);
    Problem& P = *r.in->problem;
    TermP ref = r.in->parse(m.ref);
    size_t diff = 0, noov = 0;
    bool best = r.out.report["verdict"] == "best";
    if (!r.term) return {false, std::string("no term for ") + m.spec};
    EvalCtx ec;
    ec.c = &P.ctx();
    ec.dom = P.dom();
    for (size_t j = 0; j < P.num_inputs(); ++j) {
      if (!P.input_has_bot(j)) {
        Env env = P.input(j);
        if (!overflow_mul(P.ctx(), P.dom(), env[kA1], env[kA2])) ++noov;
      }
      if (!gamma_equal_w(P, apply_term(P, *r.term, j), apply_term(P, *ref, j))) ++diff;
    }
    ok &= best && diff == 0;
    detail += fmt("%s %s, %zu/%zu differ (%zu non-overflow pairs); ", r.in->spec.name.c_str(), best ? "best" : "NOT best",
                  diff, P.num_inputs(), noov);
  }
  double dt = secs(t0);
  ok &= dt <= 600;
  return {ok, detail + fmt("%.1fs", dt)};
}

// 3. bound helpers against brute force, buggy minAnd
Verdict c3() {
  const int w = 4;
  size_t quads = 0, bad = 0, buggy_bad = 0;
  for (uint64_t a = 0; a < 16; ++a)
    for (uint64_t b = a; b < 16; ++b)
      for (uint64_t c = 0; c < 16; ++c)
        for (uint64_t d = c; d < 16; ++d) {
          uint64_t mnA = 15, mxA = 0, mnO = 15, mxO = 0;
          for (uint64_t x = a; x <= b; ++x)
            for (uint64_t y = c; y <= d; ++y) {
              mnA = std::min(mnA, x & y), mxA = std::max(mxA, x & y);
              mnO = std::min(mnO, x | y), mxO = std::max(mxO, x | y);
            }
          ++quads;
          bad += bv::min_and(a, b, c, d, w) != mnA;
          bad += bv::max_and(a, b, c, d, w) != mxA;
          bad += bv::min_or(a, b, c, d, w) != mnO;
          bad += bv::max_or(a, b, c, d, w) != mxO;
          buggy_bad += bv::min_and_buggy(a, b, c, d, w) != mnA;
        }
  // the same finding through the verify path
  auto in = load("intervals/uint_and.json");
  Outcome v = verify_file(*in, "uint_and_buggy_min.term");
  bool flagged = v.exit_code == kExitUnsound;
  return {bad == 0 && buggy_bad > 0 && flagged,
          fmt("%zu range quadruples: %zu helper mismatches; buggy minAnd wrong on %zu, verify exit %d", quads, bad,
              buggy_bad, v.exit_code)};
}

// 4. CI contains
Verdict c4() {
  auto in = load("strings/ci_contains.json");
  Problem& P = *in->problem;
  std::vector<std::string> at = {R"(ci:[["a"],["a","b"]])", R"(ci:[[],["a"]])"};
  Outcome v = verify_file(*in, "ci_contains_buggy.term");
  const json* pr = probe_for(v.report, at);
  TermP buggy = in->parse(read_file(spec_path("fixtures/ci_contains_buggy.term")));
  size_t j = input_of(*in, at);
  bool flagged = v.exit_code == kExitUnsound && pr && !(*pr)["sound"].get<bool>() && missed_has(*pr, false) &&
                 !sound_at(P, *buggy, j);
  Ran r = run_spec("strings/ci_contains.json");
  if (!r.term) return {false, "no synthesized term"};
  Problem& Q = *r.in->problem;
  bool fixed_sound = sound_at(Q, *r.term, input_of(*r.in, at));
  std::string empty = format_value(Q.ctx(), Dom::CI, alpha_single(Q.ctx(), Dom::CI, std::string()));
  size_t jt = input_of(*r.in, {"top", empty});
  Value tv = apply_term(Q, *r.term, jt);
  bool is_true = std::get<ABool>(tv).v == AB::True;
  bool best = r.out.report["verdict"] == "best";
  return {flagged && fixed_sound && is_true && best,
          fmt("buggy term %s at a1=[{a},{a,b}], a2=[{},{a}] (returns %s, misses false); synthesized %s there, "
              "returns %s on (top, %s); %s",
              flagged ? "flagged unsound" : "NOT flagged", pr ? (*pr)["output"].get<std::string>().c_str() : "?",
              fixed_sound ? "sound" : "UNSOUND", format_value(Q.ctx(), Dom::AbsBool, tv).c_str(), empty.c_str(),
              r.out.report["term"].get<std::string>().c_str())};
}

// 5. CI trim and PS trim
Verdict c5() {
  std::string detail;
  bool ok = true;
  struct T {
    const char* spec;
    const char* fixture;
    const char* input;
    const char* witness;
  } ts[] = {{"strings/ci_trim.json", "ci_trim_buggy.term", R"(ci:[[" ","a"],[" ","a","b","c"]])", "abc"},
            {"strings/ps_trim.json", "ps_trim_buggy.term", R"(ps:[" b "," b "])", "b"}};
  for (const auto& t : ts) {
    auto in = load(t.spec);
    Outcome v = verify_file(*in, t.fixture);
    const json* pr = probe_for(v.report, {t.input});
    bool flagged = v.exit_code == kExitUnsound && pr && missed_has(*pr, t.witness);
    Ran r = run_spec(t.spec);
    bool fixed = r.term && !verify_sound(*r.in->problem, *r.term);
    size_t unsound = 0;
    if (r.term)
      for (size_t j = 0; j < r.in->problem->num_inputs(); ++j) unsound += !sound_at(*r.in->problem, *r.term, j);
    ok &= flagged && fixed && unsound == 0;
    detail += fmt("%s: buggy term %s with witness \"%s\", synthesized %s is %s; ", r.in->spec.name.c_str(),
                  flagged ? "flagged" : "NOT flagged", t.witness,
                  r.term ? print_term(*r.term).c_str() : "-", fixed && unsound == 0 ? "sound" : "UNSOUND");
  }
  return {ok, detail};
}

// 6. SH concat
Verdict c6() {
  auto t0 = Clock::now();
  auto in = load("strings/sh_concat.json");
  Problem& P = *in->problem;
  const Ctx& c = P.ctx();
  const int b = c.b;
  // brute force per pair of single residues, from real string concatenation
  std::vector<std::vector<std::string>> by_hash(static_cast<size_t>(b));
  for (const auto& s : strings_upto(c, c.max_len)) by_hash[size_t(c.hash_of(s))].push_back(s);
  std::vector<uint64_t> atom(size_t(b * b), 0);
  for (int x = 0; x < b; ++x)
    for (int y = 0; y < b; ++y)
      for (const auto& s : by_hash[size_t(x)])
        for (const auto& t : by_hash[size_t(y)]) atom[size_t(x * b + y)] |= uint64_t(1) << c.hash_of(s + t);
  TermP loop = in->parse("shLoop(a1, a2, rotl(r, 1), xor(c, rotl(one, i)))");
  size_t pairs = 0, bad = 0;
  for (size_t j = 0; j < P.num_inputs(); ++j) {
    auto args = P.input_args(j);
    uint64_t h1 = std::get<SHVal>(args[0]).H, h2 = std::get<SHVal>(args[1]).H;
    uint64_t best = 0;
    for (int x = 0; x < b; ++x)
      for (int y = 0; y < b; ++y)
        if ((h1 >> x & 1) && (h2 >> y & 1)) best |= atom[size_t(x * b + y)];
    uint64_t direct = sh_sumset(h1, h2, b);
    uint64_t bits = std::get<SHVal>(apply_term(P, *loop, j)).H;
    uint64_t cached = std::get<SHVal>(P.best(j)).H;
    ++pairs;
    bad += direct != best || bits != best || cached != best;
  }
  double dt = secs(t0);
  bool ok = pairs == size_t(1) << (2 * b) && bad == 0 && dt <= 60;
  return {ok, fmt("b=%d: %zu (H1,H2) pairs, %zu disagreements between sumset, rotate loop and brute force; %.1fs", b,
                  pairs, bad, dt)};
}

// 7. termination
Verdict c7() {
  auto t0 = Clock::now();
  size_t n = 0, done = 0;
  std::string failed;
  for (const auto& s : bundled_specs()) {
    auto in = load(s);
    SchedulerConfig cfg = in->spec.scheduler;
    cfg.k = 50;
    auto res = synthesize_transformer(in->build_space(), in->seed_examples(), cfg);
    ++n;
    if (res.verdict == EngineResult::Found) ++done;
    else failed += " " + s;
  }
  auto in = load("abs_interval.json");
  Space& sp = in->build_space();
  size_t seeds = 0;
  uint64_t max_it = 0;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    SchedulerConfig cfg = in->spec.scheduler;
    cfg.seed = seed;
    auto res = synthesize_transformer(sp, {}, cfg);
    if (res.verdict == EngineResult::Found) ++seeds;
    max_it = std::max(max_it, res.stats.iterations);
  }
  return {done == n && seeds == 50,
          fmt("%zu/%zu bundled specs terminate under k=50; random fair schedule on abs: %zu/50 seeds terminate "
              "(max %llu iterations); %.1fs%s",
              done, n, seeds, (unsigned long long)max_it, secs(t0), failed.c_str())};
}

// 8. MaxSat minimality
Verdict c8() {
  auto t0 = Clock::now();
  auto in = load("abs_interval.json");
  Problem& P = *in->problem;
  Space& sp = in->build_space();
  const Grammar& g = in->grammar;
  // filler values on every input, evaluated term by term, grouped by value vector
  auto fill = enumerate_terms(g, g.sort_index("E"), in->sketch.holes[0].depth);
  const size_t ni = P.num_inputs();
  std::set<std::vector<int64_t>> classes;
  EvalCtx ec;
  ec.c = &P.ctx();
  ec.dom = P.dom();
  for (const auto& t : fill) {
    std::vector<int64_t> v(ni, 0);
    for (size_t j = 0; j < ni; ++j) {
      if (P.input_has_bot(j)) continue;
      Env env = P.input(j);
      v[j] = std::get<int64_t>(eval(*t.term, ec, env));
    }
    classes.insert(std::move(v));
  }
  std::vector<std::vector<int64_t>> F(classes.begin(), classes.end());

  std::mt19937 rng(2024);
  std::vector<size_t> live;
  for (size_t j = 0; j < ni; ++j)
    if (!P.input_has_bot(j) && !images(P, j).empty()) live.push_back(j);
  const auto& W = P.witnesses();
  size_t agree = 0, total = 0, consistent = 0;
  for (int t = 0; t < 200; ++t) {
    ExampleSet E;
    size_t npos = rng() % 5, nneg = 1 + rng() % 12;
    while (E.pos.size() < npos) {
      size_t j = live[rng() % live.size()];
      auto im = images(P, j);
      E.pos.push_back(P.make_example(j, im[rng() % im.size()]));
    }
    while (E.neg.size() < nneg) E.neg.push_back(P.make_example(live[rng() % live.size()], W[rng() % W.size()]));
    auto at = [&](const Example& e) { return std::pair{size_t(e.input), std::get<int64_t>(e.out)}; };
    // per filler: satisfies all positives on its side, and which negatives its side excludes
    std::vector<uint32_t> lo_ex, hi_ex;
    for (const auto& f : F) {
      bool lo_ok = true, hi_ok = true;
      for (const auto& e : E.pos) {
        auto [j, x] = at(e);
        lo_ok &= f[j] <= x;
        hi_ok &= x <= f[j];
      }
      uint32_t lm = 0, hm = 0;
      for (size_t k = 0; k < E.neg.size(); ++k) {
        auto [j, x] = at(E.neg[k]);
        if (x < f[j]) lm |= 1u << k;
        if (x > f[j]) hm |= 1u << k;
      }
      if (lo_ok) lo_ex.push_back(lm);
      if (hi_ok) hi_ex.push_back(hm);
    }
    std::set<uint32_t> lo_set(lo_ex.begin(), lo_ex.end()), hi_set(hi_ex.begin(), hi_ex.end());
    const uint32_t all = (1u << E.neg.size()) - 1;
    std::set<uint32_t> violated;  // negatives a candidate still includes
    for (uint32_t l : lo_set)
      for (uint32_t h : hi_set) violated.insert(all & ~(l | h));
    // exhaustive subsets by increasing size
    int best = -1;
    for (int k = 0; k <= int(E.neg.size()) && best < 0; ++k)
      for (uint32_t D = 0; D <= all && best < 0; ++D) {
        if (std::popcount(D) != k) continue;
        for (uint32_t v : violated)
          if ((v & ~D) == 0) {
            best = k;
            break;
          }
      }
    auto got = sp.maxsat(E);
    ++total;
    if (got && int(got->dropped.size()) == best) ++agree;
    if (got) {
      ExampleSet R;
      R.pos = E.pos;
      for (size_t k = 0; k < E.neg.size(); ++k)
        if (std::find(got->dropped.begin(), got->dropped.end(), int(k)) == got->dropped.end()) R.neg.push_back(E.neg[k]);
      TermP f = sp.term(got->cand);
      bool ok = true;
      for (const auto& e : R.pos) ok &= in_gamma(P, apply_term(P, *f, size_t(e.input)), e.out);
      for (const auto& e : R.neg) ok &= !in_gamma(P, apply_term(P, *f, size_t(e.input)), e.out);
      consistent += ok;
    }
  }
  return {agree == 200 && consistent == 200,
          fmt("%zu/%zu instances (|E-| <= 12) drop the exhaustive minimum; %zu/%zu repaired terms consistent; "
              "%zu filler classes; %.1fs",
              agree, total, consistent, total, F.size(), secs(t0))};
}

// 9. counterexample validity, re-checked outside the engine and oracle
Verdict c9() {
  auto t0 = Clock::now();
  const char* specs[] = {"abs_interval.json",          "intervals/uint_and.json",  "intervals/sint_mul.json",
                         "intervals/wrapped_add.json", "intervals/sint_lshr.json", "strings/ci_contains.json",
                         "strings/ci_trim.json",       "strings/ps_trim.json",     "strings/ps_concat.json",
                         "strings/sh_concat.json",     "strings/ssk_concat.json",  "strings/ci_charAt.json",
                         "misfit/ci_contains_no_isempty.json"};
  size_t pos = 0, pos_ok = 0, neg = 0, neg_ok = 0;
  for (const char* s : specs) {
    auto in = load(s);
    Problem& P = *in->problem;
    Space& sp = in->build_space();
    auto res = synthesize_transformer(sp, in->seed_examples(), in->spec.scheduler);
    ExampleSet E = in->seed_examples();
    TermP f;
    std::map<size_t, std::vector<Value>> img_cache;
    auto img = [&](size_t j) -> const std::vector<Value>& {
      auto it = img_cache.find(j);
      if (it == img_cache.end()) it = img_cache.emplace(j, images(P, j)).first;
      return it->second;
    };
    auto meets = [&](const Term& t, const Example& e) {
      return in_gamma(P, apply_term(P, t, size_t(e.input)), e.out);
    };
    for (const auto& ev : res.trace) {
      switch (ev.kind) {
        case TraceEvent::Synthesize: f = in->parse(ev.term); break;
        case TraceEvent::MaxSat:
          if (!ev.ok) break;
          f = in->parse(ev.term);
          for (const auto& d : ev.dropped) E.neg.erase(std::find(E.neg.begin(), E.neg.end(), d));
          break;
        case TraceEvent::Soundness:
          if (ev.ok) break;
          {
            // c' is an image of a, and f(a) misses it
            const Example& e = *ev.example;
            const auto& im = img(size_t(e.input));
            ++pos;
            pos_ok += std::find(im.begin(), im.end(), e.out) != im.end() && !meets(*f, e);
            E.pos.push_back(e);
          }
          break;
        case TraceEvent::Precision:
          if (ev.ok) break;
          {
            // h meets E+, excludes E- and e, while f includes e
            const Example& e = *ev.example;
            TermP h = sp.term(*ev.witness);
            bool ok = meets(*f, e) && !meets(*h, e);
            for (const auto& p : E.pos) ok &= meets(*h, p);
            for (const auto& n : E.neg) ok &= !meets(*h, n);
            ++neg;
            neg_ok += ok;
            E.neg.push_back(e);
          }
          break;
      }
    }
  }
  return {pos == pos_ok && neg == neg_ok && pos > 0 && neg > 0,
          fmt("%zu/%zu positive and %zu/%zu negative counterexamples valid across %zu specs; %.1fs", pos_ok, pos,
              neg_ok, neg, std::size(specs), secs(t0))};
}

// 10. misfit grammar without isEmpty
Verdict c10() {
  Ran full = run_spec("strings/ci_contains.json");
  Ran mis = run_spec("misfit/ci_contains_no_isempty.json");
  if (!full.term || !mis.term) return {false, "no term"};
  Problem& P = *full.in->problem;
  Problem& Q = *mis.in->problem;
  Value empty = alpha_single(P.ctx(), Dom::CI, std::string());
  size_t family = 0, full_true = 0, mis_top = 0, top_true = 0;
  for (size_t j = 0; j < P.num_inputs(); ++j) {
    auto args = P.input_args(j);
    if (!(args[1] == empty) || is_bot(P.ctx(), Dom::CI, args[0])) continue;
    size_t jq = size_t(Q.find_input(args));
    AB f = std::get<ABool>(apply_term(P, *full.term, j)).v;
    AB m = std::get<ABool>(apply_term(Q, *mis.term, jq)).v;
    if (is_top(P.ctx(), Dom::CI, args[0])) {
      top_true += f == AB::True;
      continue;
    }
    ++family;
    full_true += f == AB::True;
    mis_top += f == AB::True && m == AB::Top;
  }
  bool ok = family > 0 && full_true == family && mis_top == family && top_true == 1 &&
            mis.out.report["verdict"] == "best";
  return {ok, fmt("(non-top a1, [{},{}]) family of %zu inputs: full grammar BoolTrue on %zu, without isEmpty BoolTop "
                  "on %zu; misfit term %s",
                  family, full_true, mis_top, mis.out.report["term"].get<std::string>().c_str())};
}

// 11. determinism
Verdict c11() {
  auto t0 = Clock::now();
  size_t n = 0, same = 0;
  std::string diff;
  for (const auto& s : bundled_specs()) {
    std::string a = strip_timing(run_spec(s).out.report).dump();
    std::string b = strip_timing(run_spec(s).out.report).dump();
    ++n;
    if (a == b) ++same;
    else diff += " " + s;
  }
  return {same == n, fmt("%zu/%zu bundled specs give byte-identical reports without timing; %.1fs%s", same, n,
                         secs(t0), diff.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::function<Verdict()>> all = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
  std::vector<int> which;
  if (argc > 1) which.push_back(std::atoi(argv[1]));
  else
    for (int i = 1; i <= int(all.size()); ++i) which.push_back(i);
  int failures = 0;
  for (int k : which) {
    if (k < 1 || k > int(all.size())) {
      std::cerr << "no criterion " << k << "\n";
      return 2;
    }
    Verdict v;
    try {
      v = all[size_t(k - 1)]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << std::endl;
    failures += !v.pass;
  }
  return failures ? 1 : 0;
}

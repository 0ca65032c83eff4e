#include "xfsynth/report.hpp"

#include <chrono>
#include <sstream>

namespace xfsynth {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

json input_json(const Problem& P, size_t j) {
  json a = json::array();
  for (const auto& v : P.input_args(j)) a.push_back(format_value(P.ctx(), P.dom(), v));
  return a;
}

json concrete_json(const Value& v) { return json::parse(format_concrete(v)); }

json stats_json(const SynthesisStats& s) {
  return {{"soundness_queries", s.n_soundness}, {"precision_queries", s.n_precision},
          {"positive_examples", s.n_pos},       {"negative_examples", s.n_neg},
          {"maxsat_calls", s.n_maxsat},         {"dropped_negatives", s.n_dropped},
          {"iterations", s.iterations}};
}

json probes_json(Instance& in, const Term& f) {
  Problem& P = *in.problem;
  json out = json::array();
  for (const auto& p : in.spec.probes) {
    size_t j = size_t(in.find_input(p));
    json v = json::array();
    for (const auto& x : violations(P, f, j)) v.push_back(concrete_json(x));
    out.push_back({{"input", input_json(P, j)},
                   {"output", format_value(P.ctx(), P.out_dom(), eval_at(P, f, j))},
                   {"best", format_value(P.ctx(), P.out_dom(), best_abstract(P, j))},
                   {"sound", v.empty()},
                   {"missed", v}});
  }
  return out;
}

const char* best_name(BestVerdict::Status s) {
  switch (s) {
    case BestVerdict::Best: return "verified";
    case BestVerdict::Dominated: return "dominated";
    case BestVerdict::Unverified: return "unverified";
  }
  return "?";
}

// Soundness, then bestness over L; fills the verdict fields of r.
int audit(Instance& in, const Term& f, bool check_best, json& r, json& timing) {
  Problem& P = *in.problem;
  auto t = Clock::now();
  auto cex = verify_sound(P, f);
  timing["verify_sound"] = since(t);
  r["sound"] = !cex;
  if (cex) {
    r["verdict"] = "unsound";
    r["counterexample"] = example_json(P, *cex);
    r["best_check"] = "skipped";
    return kExitUnsound;
  }
  if (!check_best) {
    r["verdict"] = "sound";
    r["best_check"] = "skipped";
    return kExitNotBest;
  }
  t = Clock::now();
  BestVerdict b = verify_best(P, in.build_space(), f, in.spec.verify_cap);
  timing["verify_best"] = since(t);
  r["best_check"] = best_name(b.status);
  if (b.status == BestVerdict::Best) {
    r["verdict"] = "best";
    return kExitBest;
  }
  r["verdict"] = "sound";
  if (b.witness) r["dominated_by"] = print_term(*b.witness);
  return kExitNotBest;
}

json header(const Instance& in, const char* command) {
  const ProblemSpec& s = in.spec;
  return {{"schema", kReportSchema},
          {"tool", {{"name", "xfsynth"}, {"version", kVersion}}},
          {"command", command},
          {"spec", s.name},
          {"domain", dom_name(s.dom)},
          {"operation", op_name(s.op)},
          {"sketch_assisted", s.sketch.has_value()}};
}

}  // namespace

json example_json(const Problem& P, const Example& e) {
  return {{"input", input_json(P, size_t(e.input))}, {"output", concrete_json(e.out)}};
}

Outcome run_instance(Instance& in, const RunOptions& opt) {
  Problem& P = *in.problem;
  Outcome o;
  json& r = o.report;
  r = header(in, "run");
  json timing = json::object();
  auto t0 = Clock::now();
  Space& sp = in.build_space();
  timing["build"] = since(t0);
  r["language"] = {{"candidates", sp.size()}, {"layout", sp.describe()}};

  SchedulerConfig cfg = in.spec.scheduler;
  if (opt.max_iterations) cfg.max_iterations = *opt.max_iterations;
  EngineResult res = synthesize_transformer(sp, in.seed_examples(), cfg);
  r["stats"] = stats_json(res.stats);
  timing["soundness"] = res.stats.t_soundness;
  timing["precision"] = res.stats.t_precision;
  timing["synthesis"] = res.stats.t_synthesis;
  timing["engine"] = res.stats.t_total;

  if (opt.trace) {
    json tr = json::array();
    for (const auto& ev : res.trace) {
      json e = {{"query", event_name(ev.kind)}, {"ok", ev.ok}};
      if (!ev.term.empty()) e["term"] = ev.term;
      if (ev.example) e["example"] = example_json(P, *ev.example);
      if (ev.witness) e["witness"] = print_term(*sp.term(*ev.witness));
      if (!ev.dropped.empty()) {
        json d = json::array();
        for (const auto& x : ev.dropped) d.push_back(example_json(P, x));
        e["dropped"] = d;
      }
      tr.push_back(e);
    }
    r["trace"] = tr;
  }
  json ex = {{"positive", json::array()}, {"negative", json::array()}};
  for (const auto& e : res.examples.pos) ex["positive"].push_back(example_json(P, e));
  for (const auto& e : res.examples.neg) ex["negative"].push_back(example_json(P, e));
  r["examples"] = ex;

  if (res.verdict == EngineResult::Inadequate) {
    r["verdict"] = "inadequate";
    r["reason"] = "L inadequate: no term satisfies the positive examples";
    o.exit_code = kExitInadequate;
  } else if (res.verdict == EngineResult::Aborted) {
    r["verdict"] = "aborted";
    r["reason"] = "iteration cap of " + std::to_string(cfg.max_iterations) + " reached";
    o.exit_code = kExitInadequate;
  } else {
    r["term"] = print_term(*res.term);
    r["ast"] = term_to_json(*res.term);
    r["depth"] = sp.depth(*res.cand);
    o.exit_code = audit(in, *res.term, opt.verify_best && in.spec.verify_best, r, timing);
    if (!in.spec.probes.empty()) r["probes"] = probes_json(in, *res.term);
  }
  timing["total"] = since(t0);
  r["timing"] = timing;
  return o;
}

Outcome verify_instance(Instance& in, const Term& f, bool check_best) {
  Outcome o;
  json& r = o.report;
  r = header(in, "verify");
  r["term"] = print_term(f);
  json timing = json::object();
  auto t0 = Clock::now();
  o.exit_code = audit(in, f, check_best && in.spec.verify_best, r, timing);
  if (!in.spec.probes.empty()) r["probes"] = probes_json(in, f);
  timing["total"] = since(t0);
  r["timing"] = timing;
  return o;
}

json oracle_table(Instance& in, const std::vector<std::vector<std::string>>& inputs, size_t limit) {
  Problem& P = *in.problem;
  json rows = json::array();
  auto row = [&](size_t j) {
    rows.push_back({{"input", input_json(P, j)}, {"best", format_value(P.ctx(), P.out_dom(), best_abstract(P, j))}});
  };
  if (!inputs.empty()) {
    for (const auto& a : inputs) row(size_t(in.find_input(a)));
  } else {
    for (size_t j = 0; j < P.num_inputs() && j < limit; ++j) row(j);
  }
  json r = header(in, "oracle");
  r["inputs"] = P.num_inputs();
  r["rows"] = rows;
  return r;
}

json strip_timing(json r) {
  r.erase("timing");
  return r;
}

std::string pretty_report(const json& r) {
  std::ostringstream os;
  os << r.value("spec", "?") << " (" << r.value("domain", "?") << " " << r.value("operation", "?") << ")\n";
  os << "  verdict: " << r.value("verdict", "?");
  if (r.contains("best_check")) os << " [best check " << r["best_check"].get<std::string>() << "]";
  os << "\n";
  if (r.contains("reason")) os << "  reason: " << r["reason"].get<std::string>() << "\n";
  if (r.contains("term")) os << "  term: " << r["term"].get<std::string>() << "\n";
  if (r.contains("counterexample")) os << "  counterexample: " << r["counterexample"].dump() << "\n";
  if (r.contains("dominated_by")) os << "  dominated by: " << r["dominated_by"].get<std::string>() << "\n";
  if (r.contains("language")) os << "  language: " << r["language"]["layout"].get<std::string>() << "\n";
  if (r.contains("stats")) {
    const json& s = r["stats"];
    os << "  #SO " << s["soundness_queries"] << "  #PO " << s["precision_queries"] << "  #PosEx "
       << s["positive_examples"] << "  #NegEx " << s["negative_examples"] << "  #MaxSat " << s["maxsat_calls"]
       << "  #Dropped " << s["dropped_negatives"] << "\n";
  }
  if (r.contains("probes"))
    for (const auto& p : r["probes"]) {
      os << "  probe " << p["input"].dump() << ": " << p["output"].get<std::string>() << " (best "
         << p["best"].get<std::string>() << ")";
      if (!p["sound"].get<bool>()) os << " misses " << p["missed"].dump();
      os << "\n";
    }
  if (r.contains("timing") && r["timing"].contains("total"))
    os << "  time: " << r["timing"]["total"].get<double>() << " s\n";
  return os.str();
}

}  // namespace xfsynth

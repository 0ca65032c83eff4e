#include "xfsynth/engine.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace xfsynth {

const char* event_name(TraceEvent::Kind k) {
  switch (k) {
    case TraceEvent::Synthesize: return "synthesize";
    case TraceEvent::MaxSat: return "maxsat";
    case TraceEvent::Soundness: return "soundness";
    case TraceEvent::Precision: return "precision";
  }
  return "?";
}

std::optional<Example> check_soundness(Problem& P, const std::vector<int>& outputs) {
  for (size_t j = 0; j < P.num_inputs(); ++j)
    if (!P.sound_at(j, outputs[j])) return P.first_uncovered(j, outputs[j]);
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

EngineResult synthesize_transformer(Space& sp, const ExampleSet& seed, const SchedulerConfig& cfg,
                                    const std::function<void(const TraceEvent&)>& on_event) {
  if (cfg.k < 1) throw ConfigError("scheduler k must be at least 1");
  Problem& P = sp.problem();
  EngineResult res;
  SynthesisStats& st = res.stats;
  ExampleSet& E = res.examples;
  E = seed;
  const auto t0 = Clock::now();
  auto emit = [&](TraceEvent ev) {
    if (on_event) on_event(ev);
    res.trace.push_back(std::move(ev));
  };

  // f starts as the constant bottom transformer
  std::optional<Cand> f;
  std::vector<int> out(P.num_inputs(), P.fixed_bottom());
  bool is_sound = false, is_precise = false;
  int consecutive_precision = 0;
  std::mt19937_64 rng(cfg.seed.value_or(0));

  while (!is_sound || !is_precise) {
    if (++st.iterations > cfg.max_iterations) {
      res.verdict = EngineResult::Aborted;
      st.t_total = since(t0);
      return res;
    }
    if (!is_sound && !is_precise) {
      auto ts = Clock::now();
      auto c = sp.synthesize(E);
      if (c) {
        f = c;
        emit({TraceEvent::Synthesize, true, {}, {}, {}, print_term(*sp.term(*c))});
      } else {
        ++st.n_maxsat;
        auto m = sp.maxsat(E);
        if (!m) {
          st.t_synthesis += since(ts);
          emit({TraceEvent::MaxSat, false, {}, {}, {}, {}});
          res.verdict = EngineResult::Inadequate;
          st.n_pos = E.pos.size();
          st.n_neg = E.neg.size();
          st.t_total = since(t0);
          return res;
        }
        TraceEvent ev{TraceEvent::MaxSat, true, {}, {}, {}, print_term(*sp.term(m->cand))};
        std::vector<Example> kept;
        size_t d = 0;
        for (size_t i = 0; i < E.neg.size(); ++i) {
          if (d < m->dropped.size() && m->dropped[d] == int(i)) {
            ev.dropped.push_back(E.neg[i]);
            ++d;
          } else {
            kept.push_back(E.neg[i]);
          }
        }
        E.neg = std::move(kept);
        st.n_dropped += ev.dropped.size();
        f = m->cand;
        emit(std::move(ev));
      }
      out = sp.outputs(*f);
      st.t_synthesis += since(ts);
    }

    bool soundness;
    if (is_sound) soundness = false;
    else if (is_precise) soundness = true;
    else if (cfg.seed) soundness = rng() & 1;
    else soundness = consecutive_precision >= cfg.k;

    if (soundness) {
      consecutive_precision = 0;
      ++st.n_soundness;
      auto ts = Clock::now();
      auto e = check_soundness(P, out);
      st.t_soundness += since(ts);
      is_sound = !e;
      if (e) {
        is_precise = false;
        E.pos.push_back(*e);
      }
      emit({TraceEvent::Soundness, is_sound, e, {}, {}, {}});
    } else {
      ++consecutive_precision;
      ++st.n_precision;
      auto ts = Clock::now();
      auto r = sp.precision(out, E);
      st.t_precision += since(ts);
      is_precise = !r;
      TraceEvent ev{TraceEvent::Precision, is_precise, {}, {}, {}, {}};
      if (r) {
        is_sound = false;
        E.neg.push_back(r->ex);
        ev.example = r->ex;
        ev.witness = r->h;
      }
      emit(std::move(ev));
    }
  }
  res.verdict = EngineResult::Found;
  res.cand = f;
  res.term = sp.term(*f);
  res.outputs = out;
  st.n_pos = E.pos.size();
  st.n_neg = E.neg.size();
  st.t_total = since(t0);
  return res;
}

}  // namespace xfsynth

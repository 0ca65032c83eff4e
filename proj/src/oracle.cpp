#include "xfsynth/oracle.hpp"

#include <unordered_set>

namespace xfsynth {

Value best_abstract(const Problem& P, size_t j) {
  std::vector<Value> imgs;
  std::unordered_set<Value, ValueHash> seen;
  P.members(j, [&](const Value* args) {
    auto r = P.apply(args);
    if (r && seen.insert(*r).second) imgs.push_back(*r);
    return true;
  });
  return alpha_set(P.ctx(), P.out_dom(), imgs);
}

Value eval_at(Problem& P, const Term& f, size_t j) {
  if (P.bot_strict() && P.input_has_bot(j)) return bottom(P.ctx(), P.out_dom());
  EvalCtx ec{&P.ctx(), P.dom(), {}, false};
  Env env = P.input(j);
  return eval(f, ec, env);
}

std::optional<Example> verify_sound(Problem& P, const Term& f) {
  for (size_t j = 0; j < P.num_inputs(); ++j) {
    Value out = eval_at(P, f, j);
    std::optional<Example> found;
    P.members(j, [&](const Value* args) {
      auto r = P.apply(args);
      if (!r || gamma_contains(P.ctx(), P.out_dom(), out, *r)) return true;
      found = P.make_example(j, *r);
      return false;
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::vector<Value> violations(Problem& P, const Term& f, size_t j) {
  Value out = eval_at(P, f, j);
  std::vector<Value> v;
  std::unordered_set<Value, ValueHash> seen;
  P.members(j, [&](const Value* args) {
    auto r = P.apply(args);
    if (r && !gamma_contains(P.ctx(), P.out_dom(), out, *r) && seen.insert(*r).second) v.push_back(*r);
    return true;
  });
  return v;
}

namespace {

// Compares outputs over the witness universe using gamma_contains only.
struct Judge {
  Problem& P;
  std::vector<std::vector<bool>> F;  // gamma(f(a)) within W per input
  std::vector<std::vector<Value>> images;

  Judge(Problem& p, const Term& f) : P(p) {
    const auto& W = P.witnesses();
    for (size_t j = 0; j < P.num_inputs(); ++j) {
      Value out = eval_at(P, f, j);
      std::vector<bool> bits(W.size());
      for (size_t w = 0; w < W.size(); ++w) bits[w] = gamma_contains(P.ctx(), P.out_dom(), out, W[w]);
      F.push_back(std::move(bits));
      std::vector<Value> imgs;
      std::unordered_set<Value, ValueHash> seen;
      P.members(j, [&](const Value* args) {
        auto r = P.apply(args);
        if (r && seen.insert(*r).second) imgs.push_back(*r);
        return true;
      });
      images.push_back(std::move(imgs));
    }
  }

  // g sound, pointwise below f, and strictly below somewhere
  bool dominates(const Term& g, uint64_t& work) {
    const auto& W = P.witnesses();
    bool strict = false;
    for (size_t j = 0; j < P.num_inputs(); ++j) {
      Value out = eval_at(P, g, j);
      work += W.size();
      for (const auto& x : images[j])
        if (!gamma_contains(P.ctx(), P.out_dom(), out, x)) return false;
      for (size_t w = 0; w < W.size(); ++w) {
        bool in = gamma_contains(P.ctx(), P.out_dom(), out, W[w]);
        if (in && !F[j][w]) return false;
        if (in != F[j][w]) strict = true;
      }
    }
    return strict;
  }
};

}  // namespace

BestVerdict verify_best(Problem& P, Space& L, const Term& f, uint64_t cap) {
  std::vector<int> f_out(P.num_inputs());
  for (size_t j = 0; j < f_out.size(); ++j) f_out[j] = P.eval_output(f, j);
  BestResult r = L.verify_best(f_out, cap);
  BestVerdict v;
  v.work = r.work;
  v.status = r.status == BestResult::Best ? BestVerdict::Best
             : r.status == BestResult::Dominated ? BestVerdict::Dominated
                                                 : BestVerdict::Unverified;
  if (r.witness.valid()) v.witness = L.term(r.witness);
  return v;
}

BestVerdict verify_best_naive(Problem& P, const std::vector<TermP>& L, const Term& f, uint64_t cap) {
  Judge judge(P, f);
  BestVerdict v;
  for (const auto& g : L) {
    if (v.work > cap) {
      v.status = BestVerdict::Unverified;
      return v;
    }
    if (judge.dominates(*g, v.work)) {
      v.status = BestVerdict::Dominated;
      v.witness = g;
      return v;
    }
  }
  return v;
}

bool valid_positive(Problem& P, const Term& f, const Example& e) {
  const size_t j = size_t(e.input);
  Value best = best_abstract(P, j);
  return gamma_contains(P.ctx(), P.out_dom(), best, e.out) &&
         !gamma_contains(P.ctx(), P.out_dom(), eval_at(P, f, j), e.out);
}

bool valid_negative(Problem& P, const Term& f, const Term& h, const ExampleSet& E, const Example& e) {
  auto in = [&](const Term& t, const Example& x) {
    return gamma_contains(P.ctx(), P.out_dom(), eval_at(P, t, size_t(x.input)), x.out);
  };
  for (const auto& x : E.pos)
    if (!in(h, x)) return false;
  for (const auto& x : E.neg)
    if (in(h, x)) return false;
  return !in(h, e) && in(f, e);
}

}  // namespace xfsynth

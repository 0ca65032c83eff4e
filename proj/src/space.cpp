#include "xfsynth/space.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>

namespace xfsynth {

namespace {

using Mask = std::vector<uint64_t>;

inline bool bit(const uint64_t* b, size_t i) { return b[i >> 6] >> (i & 63) & 1; }
inline void set_bit(uint64_t* b, size_t i) { b[i >> 6] |= uint64_t(1) << (i & 63); }

inline bool subset(const uint64_t* a, const uint64_t* b, size_t n) {
  for (size_t w = 0; w < n; ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}
inline bool any(const uint64_t* a, size_t n) {
  for (size_t w = 0; w < n; ++w)
    if (a[w]) return true;
  return false;
}
inline int popcount(const uint64_t* a, size_t n) {
  int c = 0;
  for (size_t w = 0; w < n; ++w) c += std::popcount(a[w]);
  return c;
}
// a precedes b when the smallest element of their symmetric difference is in a
inline bool lex_less(const uint64_t* a, const uint64_t* b, size_t n) {
  for (size_t w = 0; w < n; ++w) {
    uint64_t x = a[w] ^ b[w];
    if (x) return (a[w] & (x & -x)) != 0;
  }
  return false;
}
inline int lowest(const uint64_t* a, size_t n) {
  for (size_t w = 0; w < n; ++w)
    if (a[w]) return int(w * 64 + std::countr_zero(a[w]));
  return -1;
}
inline int highest(const uint64_t* a, size_t n) {
  for (size_t w = n; w-- > 0;)
    if (a[w]) return int(w * 64 + 63 - std::countl_zero(a[w]));
  return -1;
}

struct EnvHash {
  size_t operator()(const Env& e) const {
    size_t h = 0;
    for (const auto& v : e) h = hash_mix(h, hash_value(v));
    return h;
  }
};

struct ValueStore {
  std::vector<Value> vals;
  std::unordered_map<Value, int, ValueHash> index;
  int id(const Value& v) {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    vals.push_back(v);
    index.emplace(v, int(vals.size()) - 1);
    return int(vals.size()) - 1;
  }
};

int64_t encode(ValueStore& st, Kind k, const Value& v) {
  switch (k) {
    case Kind::Int:
    case Kind::Bits: return as_int(v);
    case Kind::Bool: return as<bool>(v) ? 1 : 0;
    case Kind::CharSet: return as<CharSet>(v).bits;
    case Kind::AbsBool: return int64_t(as<ABool>(v).v);
    default: return st.id(v);
  }
}

Value decode(const ValueStore& st, Kind k, int64_t code) {
  switch (k) {
    case Kind::Int:
    case Kind::Bits: return code;
    case Kind::Bool: return code != 0;
    case Kind::CharSet: return CharSet{uint32_t(code)};
    case Kind::AbsBool: return ABool{AB(code)};
    default: return st.vals[size_t(code)];
  }
}

// Observational-equivalence classes of every sort over one table of
// environments. Level d holds the classes first reached at depth d, in
// enumeration order, so each class is represented by its canonical first term.
struct Materializer {
  struct List {
    Kind kind = Kind::Any;
    bool choice = false;
    std::vector<TermP> reps;
    std::vector<int> depth;
    std::vector<int64_t> codes;
    std::vector<size_t> ends{0};
    std::unordered_map<uint64_t, std::vector<int>> index;
  };

  const Grammar& g;
  EvalCtx ec;
  ValueStore& st;
  std::vector<Env> envs;
  size_t n;
  SpaceOptions opt;
  std::vector<List> lists;
  int built = 0;
  uint64_t cells = 0;

  Materializer(const Grammar& g_, const EvalCtx& ec_, ValueStore& st_, std::vector<Env> e, const SpaceOptions& o)
      : g(g_), ec(ec_), st(st_), envs(std::move(e)), n(envs.size()), opt(o) {
    for (const auto& s : g.sorts) {
      List l;
      l.kind = s.kind;
      lists.push_back(std::move(l));
    }
  }

  const int64_t* codes(int l, int cls) const { return &lists[l].codes[size_t(cls) * n]; }

  size_t count(int l, int d) const {
    const List& L = lists[l];
    if (d <= 0) return 0;
    if (L.choice) return L.reps.size();
    return L.ends[std::min<size_t>(size_t(d), L.ends.size() - 1)];
  }

  int add_choices(const std::vector<TermP>& ts, Kind k) {
    List l;
    l.kind = k;
    l.choice = true;
    for (const auto& t : ts) {
      for (size_t e = 0; e < n; ++e) {
        Env env = envs[e];
        l.codes.push_back(encode(st, k, xfsynth::eval(*t, ec, env)));
      }
      l.reps.push_back(t);
      l.depth.push_back(1);
    }
    lists.push_back(std::move(l));
    return int(lists.size()) - 1;
  }

  uint64_t hash_codes(const int64_t* c) const {
    uint64_t h = 0x243f6a8885a308d3ULL;
    for (size_t e = 0; e < n; ++e) h = hash_mix(h, std::hash<int64_t>()(c[e]));
    return h;
  }

  bool add(int s, const int64_t* buf, int d, const std::function<TermP()>& make) {
    List& L = lists[s];
    uint64_t h = hash_codes(buf);
    auto& bucket = L.index[h];
    for (int cls : bucket)
      if (std::equal(buf, buf + n, codes(s, cls))) return false;
    bucket.push_back(int(L.reps.size()));
    L.codes.insert(L.codes.end(), buf, buf + n);
    L.reps.push_back(make());
    L.depth.push_back(d);
    cells += n;
    if (cells > opt.cell_limit) throw ConfigError("materialized grammar exceeds the cell limit");
    return true;
  }

  void apply(const Production& p, const Sort& s, const std::vector<int>& kid, int64_t* out) {
    const size_t k = p.args.size();
    const int64_t* kc[4];
    Kind kk[4];
    for (size_t i = 0; i < k; ++i) {
      kc[i] = codes(p.args[i], kid[i]);
      kk[i] = lists[p.args[i]].kind;
    }
    if (p.direct) {
      const Builtin& b = builtins()[p.tmpl->builtin];
      switch (b.special) {
        case Special::Ite:
          for (size_t e = 0; e < n; ++e) out[e] = kc[0][e] ? kc[1][e] : kc[2][e];
          return;
        case Special::And:
          for (size_t e = 0; e < n; ++e) out[e] = kc[0][e] && kc[1][e];
          return;
        case Special::Or:
          for (size_t e = 0; e < n; ++e) out[e] = kc[0][e] || kc[1][e];
          return;
        case Special::None: {
          Value args[4];
          for (size_t e = 0; e < n; ++e) {
            for (size_t i = 0; i < k; ++i) args[i] = decode(st, kk[i], kc[i][e]);
            EvalCtx local = ec;
            out[e] = encode(st, s.kind, b.fn(local, args));
          }
          return;
        }
        default: break;
      }
    }
    size_t e = 0;
    EvalCtx local = ec;
    local.hole = [&](int h, const Env&) { return decode(st, kk[h], kc[h][e]); };
    for (; e < n; ++e) {
      Env env = envs[e];
      out[e] = encode(st, s.kind, xfsynth::eval(*p.tmpl, local, env));
    }
  }

  void build_to(int D) {
    std::vector<int64_t> buf(n);
    for (int d = built + 1; d <= D; ++d) {
      for (size_t s = 0; s < g.sorts.size(); ++s) {
        const Sort& so = g.sorts[s];
        for (const auto& p : so.prods) {
          if (p.args.empty()) {
            if (d != 1) continue;
            for (size_t e = 0; e < n; ++e) {
              Env env = envs[e];
              buf[e] = encode(st, so.kind, xfsynth::eval(*p.tmpl, ec, env));
            }
            add(int(s), buf.data(), 1, [&] { return p.tmpl; });
            continue;
          }
          if (d == 1) continue;
          const size_t k = p.args.size();
          std::vector<size_t> hi(k), lo(k);
          double raw = 1;
          bool empty = false;
          for (size_t i = 0; i < k; ++i) {
            hi[i] = count(p.args[i], d - 1);
            lo[i] = count(p.args[i], d - 2);
            raw *= double(hi[i]);
            if (hi[i] == 0) empty = true;
          }
          if (empty) continue;
          if (raw > double(opt.raw_limit)) throw ConfigError("grammar level exceeds the raw term limit");
          std::vector<int> idx(k, 0);
          while (true) {
            bool fresh = false;
            for (size_t i = 0; i < k; ++i) fresh |= size_t(idx[i]) >= lo[i];
            bool skip = !fresh || (g.symmetry && p.commutative && idx[0] > idx[1]);
            if (!skip) {
              apply(p, so, idx, buf.data());
              add(int(s), buf.data(), d, [&] {
                std::vector<TermP> kids(k);
                for (size_t i = 0; i < k; ++i) kids[i] = lists[p.args[i]].reps[idx[i]];
                return instantiate(p, kids);
              });
            }
            size_t i = k;
            bool done = false;
            while (i > 0) {
              --i;
              if (size_t(++idx[i]) < hi[i]) break;
              idx[i] = 0;
              if (i == 0) done = true;
            }
            if (done) break;
          }
        }
      }
      for (size_t s = 0; s < g.sorts.size(); ++s) lists[s].ends.push_back(lists[s].reps.size());
      built = d;
    }
  }
};

// Skeleton after partial evaluation at one input: what remains depends only on
// hole values, each hole read at a known environment.
struct RNode {
  enum T : uint8_t { Const, HoleAt, Op, Join } t = Const;
  Value v;
  int hole = -1, env = -1, builtin = -1;
  std::vector<RNode> kids;
};

using Resolver = std::function<int(int hole, const Env& env)>;

RNode rconst(Value v) {
  RNode n;
  n.v = std::move(v);
  return n;
}

RNode partial(const Term& t, const EvalCtx& ec, Env& env, const Resolver& res) {
  if (t.tag == Term::Hole) {
    RNode n;
    n.t = RNode::HoleAt;
    n.hole = t.hole;
    n.env = res(t.hole, env);
    return n;
  }
  if (t.tag != Term::Op || !has_holes(t)) return rconst(xfsynth::eval(t, ec, env));
  const Builtin& b = builtins()[t.builtin];
  const Ctx& c = *ec.c;
  switch (b.special) {
    case Special::Ite: {
      RNode cond = partial(*t.kids[0], ec, env, res);
      if (cond.t == RNode::Const) return partial(*t.kids[as<bool>(cond.v) ? 1 : 2], ec, env, res);
      RNode n;
      n.t = RNode::Op;
      n.builtin = t.builtin;
      n.kids.push_back(std::move(cond));
      n.kids.push_back(partial(*t.kids[1], ec, env, res));
      n.kids.push_back(partial(*t.kids[2], ec, env, res));
      return n;
    }
    case Special::SplitJoinS:
    case Special::SplitJoinW: {
      const Term& x = *t.kids[0];
      const Term& y = *t.kids[1];
      if (x.tag != Term::Var || y.tag != Term::Var) throw ConfigError("split forms take parameter names");
      std::vector<Value> p1, p2;
      if (b.special == Special::SplitJoinW) {
        for (const auto& w : split_at_zero(c, as<Wrapped>(env[x.slot]))) p1.push_back(w);
        for (const auto& w : split_at_zero(c, as<Wrapped>(env[y.slot]))) p2.push_back(w);
      } else {
        for (const auto& w : split_signed(c, as<Interval>(env[x.slot]))) p1.push_back(w);
        for (const auto& w : split_signed(c, as<Interval>(env[y.slot]))) p2.push_back(w);
      }
      Value sx = env[x.slot], sy = env[y.slot];
      RNode n;
      n.t = RNode::Join;
      for (const auto& u : p1)
        for (const auto& v : p2) {
          env[x.slot] = u;
          env[y.slot] = v;
          n.kids.push_back(partial(*t.kids[2], ec, env, res));
        }
      env[x.slot] = sx;
      env[y.slot] = sy;
      return n;
    }
    case Special::ShLoop: throw TraceError("loop state depends on a hole");
    default: break;
  }
  RNode n;
  n.t = RNode::Op;
  n.builtin = t.builtin;
  for (const auto& k : t.kids) n.kids.push_back(partial(*k, ec, env, res));
  return n;
}

Value reval(const RNode& n, const EvalCtx& ec, const std::function<Value(int, int)>& hv) {
  switch (n.t) {
    case RNode::Const: return n.v;
    case RNode::HoleAt: return hv(n.hole, n.env);
    case RNode::Join: {
      Value acc = bottom(*ec.c, ec.dom);
      for (const auto& k : n.kids) acc = join(*ec.c, ec.dom, acc, reval(k, ec, hv));
      return acc;
    }
    case RNode::Op: break;
  }
  const Builtin& b = builtins()[n.builtin];
  switch (b.special) {
    case Special::Ite: return reval(n.kids[as<bool>(reval(n.kids[0], ec, hv)) ? 1 : 2], ec, hv);
    case Special::And: return as<bool>(reval(n.kids[0], ec, hv)) && as<bool>(reval(n.kids[1], ec, hv));
    case Special::Or: return as<bool>(reval(n.kids[0], ec, hv)) || as<bool>(reval(n.kids[1], ec, hv));
    default: break;
  }
  Value args[4];
  for (size_t i = 0; i < n.kids.size(); ++i) args[i] = reval(n.kids[i], ec, hv);
  return b.fn(ec, args);
}

bool loop_with_holes(const Term& t) {
  if (t.tag != Term::Op) return false;
  if (builtins()[t.builtin].special == Special::ShLoop && has_holes(t)) return true;
  for (const auto& k : t.kids)
    if (loop_with_holes(*k)) return true;
  return false;
}

int pair_side(Dom d) {
  switch (d) {
    case Dom::IntervalZ:
    case Dom::UInt:
    case Dom::SInt: return 0;
    case Dom::CI: return 1;
    case Dom::PS: return 2;
    default: return -1;
  }
}

bool is_pair_builtin(int b) { return b >= 0 && builtins()[b].style == Style::Pair; }

}  // namespace

// A hole's fillers: materialized classes, or an explicit term list in the
// dynamic mode.
struct HoleRef {
  Materializer* mat = nullptr;
  int list = -1;
  int maxd = 0;
  const std::vector<GTerm>* terms = nullptr;
  std::vector<size_t> term_ends;  // dynamic: fillers with depth <= d

  size_t count_le(int m) const {
    int d = std::min(m, maxd);
    if (terms) return d <= 0 ? 0 : term_ends[size_t(d)];
    return mat->count(list, d);
  }
  int depth(int i) const { return terms ? (*terms)[i].depth : mat->lists[list].depth[i]; }
  TermP rep(int i) const { return terms ? (*terms)[i].term : mat->lists[list].reps[i]; }
  int64_t code(int i, int env) const { return mat->codes(list, i)[env]; }
  Kind kind() const { return mat->lists[list].kind; }
};

struct Space::Seg {
  enum Type { Ident, Pair, Ite, Table } type = Table;
  TermP skeleton;
  std::vector<HoleRef> holes;
  int wlo = 1, whi = 1;
  int extra_depth = 0;
  std::vector<int> env_of;  // per input, -1 when fixed
  std::vector<int> fixed;   // per input, fixed output id or -1
  bool any_fixed = false;
  std::vector<RNode> resid;  // per input, static tables
  int pair_builtin = -1;
  int side = -1;
  // tables; a lazy table keeps no rows and evaluates candidates on demand
  std::vector<std::vector<int>> rows;
  std::vector<int32_t> outs;
  bool lazy = false;
  std::vector<Kind> kinds;
  size_t hint = 0;  // input that last rejected a candidate in verify_best
  uint64_t size = 0;

  // per query scratch
  Mask fixmask, varmask;
  bool fix_pos_ok = true;
  std::vector<uint64_t> S, B, P0, N0, P1, N1;

  size_t level_count(int hole, int m) const { return holes[hole].count_le(m); }
};

struct Space::Query {
  std::vector<const Example*> ex;
  std::vector<bool> pos;
  size_t n = 0, W = 1, npos = 0;
  Mask ALL, POS, NEG;
};

struct Space::State {
  ValueStore store;
  EvalCtx ec;
  std::vector<std::unique_ptr<Materializer>> mats;
  std::vector<std::vector<GTerm>> own_terms;
  std::vector<std::unique_ptr<Seg>> segs;
  std::vector<int> store_out;
  int abool_out[4] = {-1, -1, -1, -1};
  Kind out_kind = Kind::Abs;
  bool dynamic = false, lazy = false;
  std::unordered_map<int64_t, Mask> ok_cache[2];
  size_t in_words = 1;

  int class_out(ValueStore&, Problem& P, int64_t code) {
    if (out_kind == Kind::AbsBool) {
      int& o = abool_out[code & 3];
      if (o < 0) o = P.intern(ABool{AB(code)});
      return o;
    }
    if (size_t(code) >= store_out.size()) store_out.resize(store.vals.size(), -1);
    int& o = store_out[size_t(code)];
    if (o < 0) o = P.intern(store.vals[size_t(code)]);
    return o;
  }
};

namespace {

using Seg = Space::Seg;
using Query = Space::Query;
using State = Space::State;

Query make_query(const Problem& P, const ExampleSet& E) {
  (void)P;
  Query q;
  for (const auto& e : E.pos) {
    q.ex.push_back(&e);
    q.pos.push_back(true);
  }
  for (const auto& e : E.neg) {
    q.ex.push_back(&e);
    q.pos.push_back(false);
  }
  q.n = q.ex.size();
  q.npos = E.pos.size();
  q.W = std::max<size_t>(1, (q.n + 63) / 64);
  q.ALL.assign(q.W, 0);
  q.POS.assign(q.W, 0);
  q.NEG.assign(q.W, 0);
  for (size_t k = 0; k < q.n; ++k) {
    set_bit(q.ALL.data(), k);
    set_bit(q.pos[k] ? q.POS.data() : q.NEG.data(), k);
  }
  return q;
}

// Iterates tuples of the segment whose maximal filler level is m.
template <class F>
bool for_tuples(const Seg& s, int m, F&& fn) {
  const size_t k = s.holes.size();
  std::vector<size_t> hi(k), lo(k);
  for (size_t i = 0; i < k; ++i) {
    hi[i] = s.level_count(int(i), m);
    lo[i] = s.level_count(int(i), m - 1);
    if (hi[i] == 0) return true;
  }
  std::vector<int> idx(k, 0);
  while (true) {
    bool fresh = false;
    for (size_t i = 0; i < k; ++i) fresh |= size_t(idx[i]) >= lo[i];
    if (fresh && !fn(idx)) return false;
    size_t i = k;
    while (i > 0) {
      --i;
      if (size_t(++idx[i]) < hi[i]) break;
      idx[i] = 0;
      if (i == 0) return true;
    }
  }
}

int table_out(Problem& P, State& st, const Seg& s, const Cand& c, size_t j) {
  if (!s.lazy) return s.outs[size_t(c.row) * P.num_inputs() + j];
  if (s.fixed[j] >= 0) return s.fixed[j];
  auto hv = [&](int h, int env) { return decode(st.store, s.kinds[size_t(h)], s.holes[size_t(h)].code(c.idx[size_t(h)], env)); };
  return P.intern(reval(s.resid[j], st.ec, hv));
}

template <class F>
bool for_rows(int si, const Seg& s, F&& fn) {
  if (!s.lazy) {
    for (size_t r = 0; r < s.rows.size(); ++r)
      if (!fn(Cand{si, s.rows[r], int(r)})) return false;
    return true;
  }
  for (int m = s.wlo; m <= s.whi; ++m)
    if (!for_tuples(s, m, [&](const std::vector<int>& idx) { return fn(Cand{si, idx, -1}); })) return false;
  return true;
}

bool side_ok(const State& st, const Ctx& ctx, int side, bool lo, int64_t code, const Value& c) {
  switch (side) {
    case 0: return lo ? code <= as_int(c) : code >= as_int(c);
    case 1: {
      uint32_t ch = ctx.chars_of(as<std::string>(c));
      uint32_t s = uint32_t(code);
      return lo ? (s & ~ch) == 0 : (ch & ~s) == 0;
    }
    default: {
      const std::string& s = as<std::string>(st.store.vals[size_t(code)]);
      const std::string& x = as<std::string>(c);
      return lo ? starts_with(x, s) : ends_with(x, s);
    }
  }
}

// soundness of one side of a pair against the best abstraction of an image
bool side_sound(const State& st, int side, bool lo, int64_t code, const Value& best) {
  switch (side) {
    case 0: {
      const auto& b = as<Interval>(best);
      return lo ? code <= b.l : code >= b.r;
    }
    case 1: {
      const auto& b = as<CIVal>(best);
      uint32_t s = uint32_t(code);
      return lo ? (s & ~b.L) == 0 : (b.U & ~s) == 0;
    }
    default: {
      const auto& b = as<PSVal>(best);
      const std::string& s = as<std::string>(st.store.vals[size_t(code)]);
      return lo ? starts_with(b.pre, s) : ends_with(b.suf, s);
    }
  }
}

}  // namespace

Space::~Space() = default;

Space::Space(Problem& p, const Grammar& g, const Sketch& s, SpaceOptions o)
    : P_(p), G_(g), S_(s), opt_(o), st_(std::make_unique<State>()) {
  build();
}

void Space::build() {
  State& st = *st_;
  st.ec.c = &P_.ctx();
  st.ec.dom = P_.dom();
  st.out_kind = P_.out_dom() == Dom::AbsBool ? Kind::AbsBool : Kind::Abs;
  st.in_words = std::max<size_t>(1, (P_.num_inputs() + 63) / 64);
  if (S_.skeleton->kind != st.out_kind) throw ConfigError("sketch result kind does not match the operation");
  const size_t ni = P_.num_inputs();

  auto fixed_bot = [&](size_t j) { return P_.bot_strict() && P_.input_has_bot(j); };

  if (loop_with_holes(*S_.skeleton)) {
    // filled terms are evaluated whole at every input
    st.dynamic = true;
    auto seg = std::make_unique<Seg>();
    seg->type = Seg::Table;
    seg->skeleton = S_.skeleton;
    seg->fixed.assign(ni, -1);
    st.own_terms.resize(S_.holes.size());
    for (size_t h = 0; h < S_.holes.size(); ++h) {
      const HoleSpec& hs = S_.holes[h];
      if (!hs.choices.empty())
        for (const auto& c : hs.choices) st.own_terms[h].push_back({c, 1});
      else
        st.own_terms[h] = enumerate_terms(G_, hs.sort, hs.depth);
    }
    for (size_t h = 0; h < S_.holes.size(); ++h) {
      HoleRef r;
      r.terms = &st.own_terms[h];
      r.maxd = S_.holes[h].choices.empty() ? S_.holes[h].depth : 1;
      r.term_ends.assign(size_t(r.maxd) + 1, 0);
      for (int d = 1; d <= r.maxd; ++d)
        for (const auto& t : st.own_terms[h])
          if (t.depth <= d) ++r.term_ends[size_t(d)];
      seg->whi = std::max(seg->whi, r.maxd);
      seg->holes.push_back(std::move(r));
    }
    uint64_t work = 0;
    for (int m = 1; m <= seg->whi; ++m)
      for_tuples(*seg, m, [&](const std::vector<int>& idx) {
        work += ni;
        if (work > opt_.table_limit) throw ConfigError("candidate table exceeds its limit");
        std::vector<TermP> fill;
        for (size_t h = 0; h < idx.size(); ++h) fill.push_back(seg->holes[h].rep(idx[h]));
        TermP t = substitute(S_.skeleton, fill);
        for (size_t j = 0; j < ni; ++j) seg->outs.push_back(P_.eval_output(*t, j));
        seg->rows.push_back(idx);
        return true;
      });
    seg->size = seg->rows.size();
    st.segs.push_back(std::move(seg));
    return;
  }

  const bool trivial = S_.skeleton->tag == Term::Hole && S_.holes.size() == 1 && S_.holes[0].choices.empty();

  // environment tables, one per hole at first
  struct Table {
    std::vector<Env> envs;
    std::unordered_map<Env, int, EnvHash> index;
    int lookup(const Env& e) {
      auto it = index.find(e);
      if (it != index.end()) return it->second;
      envs.push_back(e);
      index.emplace(e, int(envs.size()) - 1);
      return int(envs.size()) - 1;
    }
  };
  std::vector<Table> tables(S_.holes.size());
  Resolver res = [&](int h, const Env& e) { return tables[size_t(h)].lookup(e); };

  std::vector<int> fixed(ni, -1);
  std::vector<RNode> resid(ni);
  for (size_t j = 0; j < ni; ++j) {
    if (fixed_bot(j)) {
      fixed[j] = P_.fixed_bottom();
      continue;
    }
    Env env = P_.input(j);
    resid[j] = partial(*S_.skeleton, st.ec, env, res);
    if (resid[j].t == RNode::Const) fixed[j] = P_.intern(resid[j].v);
  }

  // holes with identical tables share one materializer
  std::vector<int> mat_of(S_.holes.size(), -1);
  for (size_t h = 0; h < S_.holes.size(); ++h) {
    for (size_t h2 = 0; h2 < h && mat_of[h] < 0; ++h2)
      if (tables[h2].envs == tables[h].envs) mat_of[h] = mat_of[h2];
    if (mat_of[h] < 0) {
      st.mats.push_back(std::make_unique<Materializer>(G_, st.ec, st.store, tables[h].envs, opt_));
      mat_of[h] = int(st.mats.size()) - 1;
    }
  }

  auto make_ref = [&](size_t h, int maxd) {
    HoleRef r;
    r.mat = st.mats[size_t(mat_of[h])].get();
    const HoleSpec& hs = S_.holes[h];
    if (!hs.choices.empty()) {
      r.list = r.mat->add_choices(hs.choices, hs.kind);
      r.maxd = 1;
    } else {
      r.list = hs.sort;
      r.maxd = maxd;
    }
    return r;
  };

  const int D = trivial ? S_.holes[0].depth : 0;
  bool lazy = false;
  if (trivial && D >= 2) {
    Materializer& m = *st.mats[0];
    m.build_to(D - 1);
    double raw = 0;
    for (const auto& p : G_.sorts[G_.start].prods) {
      if (p.args.empty()) continue;
      double all = 1, old = 1;
      for (int a : p.args) {
        all *= double(m.count(a, D - 1));
        old *= double(m.count(a, D - 2));
      }
      raw += all - old;
    }
    lazy = raw * double(m.n) > std::min(opt_.lazy_threshold, double(opt_.cell_limit));
  }
  st.lazy = lazy;

  if (!lazy) {
    for (size_t h = 0; h < S_.holes.size(); ++h)
      if (S_.holes[h].choices.empty()) st.mats[size_t(mat_of[h])]->build_to(S_.holes[h].depth);
  }

  auto classify = [&](Seg& seg) {
    // all holes read the same environment at each input?
    bool ident = true, pair = true, ite = true;
    int side = pair_side(P_.out_dom());
    for (size_t j = 0; j < ni; ++j) {
      if (fixed[j] >= 0) continue;
      const RNode& r = seg.resid[j];
      ident &= r.t == RNode::HoleAt && r.hole == 0 && seg.holes.size() == 1;
      bool op = r.t == RNode::Op;
      bool holes_same = op;
      if (op)
        for (size_t i = 0; i < r.kids.size(); ++i)
          holes_same &= r.kids[i].t == RNode::HoleAt && r.kids[i].hole == int(i) && r.kids[i].env == r.kids[0].env;
      pair &= holes_same && is_pair_builtin(r.builtin) && seg.holes.size() == 2 && r.kids.size() == 2;
      ite &= holes_same && builtins()[r.builtin].special == Special::Ite && seg.holes.size() == 3;
      if (ident) seg.env_of[j] = r.env;
      else if (holes_same) seg.env_of[j] = r.kids[0].env;
      if (pair) seg.pair_builtin = r.builtin;
    }
    auto same_mat = [&](size_t a, size_t b) { return seg.holes[a].mat == seg.holes[b].mat; };
    if (ident && seg.holes[0].kind() == st.out_kind) {
      seg.type = Seg::Ident;
    } else if (pair && side >= 0 && same_mat(0, 1)) {
      seg.type = Seg::Pair;
      seg.side = side;
    } else if (ite && same_mat(0, 1) && same_mat(1, 2) && seg.holes[1].list == seg.holes[2].list &&
               seg.holes[1].maxd == seg.holes[2].maxd && seg.holes[1].kind() == st.out_kind) {
      seg.type = Seg::Ite;
    } else {
      seg.type = Seg::Table;
    }
  };

  auto seg_size = [&](Seg& seg) {
    uint64_t total = 0;
    for (int m = seg.wlo; m <= seg.whi; ++m) {
      uint64_t all = 1, old = 1;
      for (size_t i = 0; i < seg.holes.size(); ++i) {
        all *= seg.level_count(int(i), m);
        old *= seg.level_count(int(i), m - 1);
      }
      total += all - old;
    }
    seg.size = total;
  };

  auto finish_table = [&](Seg& seg) {
    const size_t k = seg.holes.size();
    std::vector<Kind> kinds(k);
    for (size_t i = 0; i < k; ++i) kinds[i] = seg.holes[i].kind();
    seg.kinds = kinds;
    seg_size(seg);
    if (double(seg.size) * double(ni) > double(opt_.table_limit)) {
      seg.lazy = true;
      return;
    }
    uint64_t work = 0;
    for (int m = seg.wlo; m <= seg.whi; ++m)
      for_tuples(seg, m, [&](const std::vector<int>& idx) {
        work += ni;
        if (work > opt_.table_limit) throw ConfigError("candidate table exceeds its limit");
        auto hv = [&](int h, int env) { return decode(st.store, kinds[h], seg.holes[h].code(idx[h], env)); };
        for (size_t j = 0; j < ni; ++j)
          seg.outs.push_back(seg.fixed[j] >= 0 ? seg.fixed[j] : P_.intern(reval(seg.resid[j], st.ec, hv)));
        seg.rows.push_back(idx);
        return true;
      });
    seg.size = seg.rows.size();
  };

  auto init = [&](Seg& seg) {
    seg.env_of.assign(ni, -1);
    seg.fixed = fixed;
    for (int f : fixed) seg.any_fixed |= f >= 0;
  };

  if (!lazy) {
    auto seg = std::make_unique<Seg>();
    init(*seg);
    seg->skeleton = S_.skeleton;
    seg->resid = std::move(resid);
    for (size_t h = 0; h < S_.holes.size(); ++h) {
      seg->holes.push_back(make_ref(h, S_.holes[h].depth));
      seg->whi = std::max(seg->whi, seg->holes.back().maxd);
    }
    classify(*seg);
    if (seg->type == Seg::Table) finish_table(*seg);
    else seg_size(*seg);
    st.segs.push_back(std::move(seg));
    return;
  }

  // lazy top level: classes below D, then one segment per production
  {
    auto seg = std::make_unique<Seg>();
    init(*seg);
    seg->skeleton = S_.skeleton;
    seg->resid = resid;
    seg->holes.push_back(make_ref(0, D - 1));
    seg->whi = D - 1;
    classify(*seg);
    if (seg->type == Seg::Table) finish_table(*seg);
    else seg_size(*seg);
    st.segs.push_back(std::move(seg));
  }
  Materializer* m0 = st.mats[0].get();
  Resolver res0 = [&](int, const Env& e) {
    auto it = tables[0].index.find(e);
    if (it == tables[0].index.end()) throw ConfigError("environment outside the hole table");
    return it->second;
  };
  for (const auto& p : G_.sorts[G_.start].prods) {
    if (p.args.empty()) continue;
    auto seg = std::make_unique<Seg>();
    init(*seg);
    seg->skeleton = p.tmpl;
    seg->extra_depth = 1;
    seg->wlo = seg->whi = D - 1;
    for (int a : p.args) {
      HoleRef r;
      r.mat = m0;
      r.list = a;
      r.maxd = D - 1;
      seg->holes.push_back(r);
    }
    seg->resid.resize(ni);
    for (size_t j = 0; j < ni; ++j) {
      if (fixed[j] >= 0) continue;
      Env env = P_.input(j);
      seg->resid[j] = partial(*p.tmpl, st.ec, env, res0);
      if (seg->resid[j].t == RNode::Const) seg->fixed[j] = P_.intern(seg->resid[j].v);
    }
    for (int f : seg->fixed) seg->any_fixed |= f >= 0;
    classify(*seg);
    if (seg->type == Seg::Table) finish_table(*seg);
    else seg_size(*seg);
    st.segs.push_back(std::move(seg));
  }
}

uint64_t Space::size() const {
  uint64_t n = 0;
  for (const auto& s : st_->segs) n += s->size;
  return n;
}

std::string Space::describe() const {
  std::ostringstream os;
  os << size() << " candidates";
  if (st_->dynamic) os << ", enumerated";
  if (st_->lazy) os << ", lazy top level";
  os << ", segments:";
  for (const auto& s : st_->segs) {
    static const char* names[] = {"ident", "pair", "ite", "table"};
    os << ' ' << names[s->type] << (s->lazy ? "*" : "") << '(' << s->size << ')';
  }
  return os.str();
}

int Space::output_at(const Cand& c, size_t j) {
  State& st = *st_;
  const Seg& s = *st.segs[size_t(c.seg)];
  if (s.type == Seg::Table) return table_out(P_, st, s, c, j);
  if (s.fixed[j] >= 0) return s.fixed[j];
  int e = s.env_of[j];
  switch (s.type) {
    case Seg::Ident: return st.class_out(st.store, P_, s.holes[0].code(c.idx[0], e));
    case Seg::Ite: {
      int branch = s.holes[0].code(c.idx[0], e) ? 1 : 2;
      return st.class_out(st.store, P_, s.holes[size_t(branch)].code(c.idx[size_t(branch)], e));
    }
    default: {
      Value args[2];
      for (int i = 0; i < 2; ++i) args[i] = decode(st.store, s.holes[size_t(i)].kind(), s.holes[size_t(i)].code(c.idx[size_t(i)], e));
      return P_.intern(builtins()[s.pair_builtin].fn(st.ec, args));
    }
  }
}

std::vector<int> Space::outputs(const Cand& c) {
  std::vector<int> out(P_.num_inputs());
  for (size_t j = 0; j < out.size(); ++j) out[j] = output_at(c, j);
  return out;
}

TermP Space::term(const Cand& c) const {
  const Seg& s = *st_->segs[size_t(c.seg)];
  std::vector<TermP> fill;
  for (size_t h = 0; h < s.holes.size(); ++h) fill.push_back(s.holes[h].rep(c.idx[h]));
  return substitute(s.skeleton, fill);
}

int Space::depth(const Cand& c) const {
  const Seg& s = *st_->segs[size_t(c.seg)];
  int d = 0;
  for (size_t h = 0; h < s.holes.size(); ++h) d = std::max(d, s.holes[h].depth(c.idx[h]));
  return d + s.extra_depth;
}

void Space::for_each(const std::function<bool(const Cand&)>& fn) {
  for (size_t si = 0; si < st_->segs.size(); ++si) {
    const Seg& s = *st_->segs[si];
    if (s.type == Seg::Table) {
      if (!for_rows(int(si), s, fn)) return;
      continue;
    }
    for (int m = s.wlo; m <= s.whi; ++m)
      if (!for_tuples(s, m, [&](const std::vector<int>& idx) { return fn(Cand{int(si), idx, -1}); })) return;
  }
}

bool Space::sat(const Cand& c, const ExampleSet& E) {
  for (const auto& e : E.pos)
    if (!P_.contains(output_at(c, size_t(e.input)), e)) return false;
  for (const auto& e : E.neg)
    if (P_.contains(output_at(c, size_t(e.input)), e)) return false;
  return true;
}

namespace {

// Per-query masks of one segment. Bit k of a class mask says whether the class
// (or pair side) agrees with example k.
void prepare(Space& sp, State& st, Seg& s, const Query& q) {
  Problem& P = sp.problem();
  const size_t W = q.W;
  s.fixmask.assign(W, 0);
  s.varmask.assign(W, 0);
  s.fix_pos_ok = true;
  for (size_t k = 0; k < q.n; ++k) {
    const Example& e = *q.ex[k];
    int f = s.fixed[size_t(e.input)];
    if (f >= 0) {
      if (P.contains(f, e) == q.pos[k]) set_bit(s.fixmask.data(), k);
      else if (q.pos[k]) s.fix_pos_ok = false;
    } else {
      set_bit(s.varmask.data(), k);
    }
  }
  auto class_masks = [&](const HoleRef& h, std::vector<uint64_t>& S) {
    size_t n = h.count_le(s.whi);
    S.assign(n * W, 0);
    for (size_t x = 0; x < n; ++x)
      for (size_t k = 0; k < q.n; ++k) {
        const Example& e = *q.ex[k];
        int env = s.env_of[size_t(e.input)];
        if (env < 0) continue;
        int o = st.class_out(st.store, P, h.code(int(x), env));
        if (P.contains(o, e) == q.pos[k]) set_bit(&S[x * W], k);
      }
  };
  switch (s.type) {
    case Seg::Ident: class_masks(s.holes[0], s.S); break;
    case Seg::Ite: {
      class_masks(s.holes[1], s.S);
      const HoleRef& h = s.holes[0];
      size_t n = h.count_le(s.whi);
      s.B.assign(n * W, 0);
      for (size_t b = 0; b < n; ++b)
        for (size_t k = 0; k < q.n; ++k) {
          int env = s.env_of[size_t(q.ex[k]->input)];
          if (env >= 0 && h.code(int(b), env)) set_bit(&s.B[b * W], k);
        }
      break;
    }
    case Seg::Pair: {
      const Ctx& ctx = P.ctx();
      for (int side = 0; side < 2; ++side) {
        const HoleRef& h = s.holes[size_t(side)];
        auto& Pm = side == 0 ? s.P0 : s.P1;
        auto& Nm = side == 0 ? s.N0 : s.N1;
        size_t n = h.count_le(s.whi);
        Pm.assign(n * W, 0);
        Nm.assign(n * W, 0);
        for (size_t x = 0; x < n; ++x)
          for (size_t k = 0; k < q.n; ++k) {
            const Example& e = *q.ex[k];
            int env = s.env_of[size_t(e.input)];
            if (env < 0) continue;
            bool ok = side_ok(st, ctx, s.side, side == 0, h.code(int(x), env), e.out);
            // positives need both sides ok; negatives need one side failing
            if (ok) set_bit(&Pm[x * W], k);
            else set_bit(&Nm[x * W], k);
          }
      }
      break;
    }
    case Seg::Table: break;
  }
}

Mask table_sat(Problem& P, State& st, const Seg& s, const Cand& c, const Query& q) {
  Mask m(q.W, 0);
  for (size_t k = 0; k < q.n; ++k) {
    const Example& e = *q.ex[k];
    if (P.contains(table_out(P, st, s, c, size_t(e.input)), e) == q.pos[k]) set_bit(m.data(), k);
  }
  return m;
}

// Positives first with an early exit, for the first-fit queries.
bool table_all(Problem& P, State& st, const Seg& s, const Cand& c, const Query& q) {
  for (size_t k = 0; k < q.n; ++k) {
    const Example& e = *q.ex[k];
    if (P.contains(table_out(P, st, s, c, size_t(e.input)), e) != q.pos[k]) return false;
  }
  return true;
}

}  // namespace

std::optional<Cand> Space::synthesize(const ExampleSet& E) {
  State& st = *st_;
  Query q = make_query(P_, E);
  const size_t W = q.W;
  Mask need(W);
  for (size_t si = 0; si < st.segs.size(); ++si) {
    Seg& s = *st.segs[si];
    if (s.type == Seg::Table) {
      std::optional<Cand> hit;
      for_rows(int(si), s, [&](const Cand& c) {
        if (!table_all(P_, st, s, c, q)) return true;
        hit = c;
        return false;
      });
      if (hit) return hit;
      continue;
    }
    prepare(*this, st, s, q);
    // fixed inputs must already agree with every example there
    bool fixed_ok = true;
    for (size_t w = 0; w < W; ++w) fixed_ok &= (q.ALL[w] & ~s.varmask[w] & ~s.fixmask[w]) == 0;
    if (!fixed_ok) continue;
    const uint64_t* V = s.varmask.data();
    for (int m = s.wlo; m <= s.whi; ++m) {
      if (s.type == Seg::Ident) {
        size_t lo = s.level_count(0, m - 1), hi = s.level_count(0, m);
        for (size_t x = lo; x < hi; ++x)
          if (subset(V, &s.S[x * W], W)) return Cand{int(si), {int(x)}, -1};
      } else if (s.type == Seg::Pair) {
        size_t nx = s.level_count(0, m), ox = s.level_count(0, m - 1);
        size_t ny = s.level_count(1, m), oy = s.level_count(1, m - 1);
        Mask pv(W), nv(W);
        for (size_t w = 0; w < W; ++w) {
          pv[w] = q.POS[w] & V[w];
          nv[w] = q.NEG[w] & V[w];
        }
        for (size_t x = 0; x < nx; ++x) {
          if (!subset(pv.data(), &s.P0[x * W], W)) continue;
          for (size_t w = 0; w < W; ++w) need[w] = nv[w] & ~s.N0[x * W + w];
          for (size_t y = x >= ox ? 0 : oy; y < ny; ++y)
            if (subset(pv.data(), &s.P1[y * W], W) && subset(need.data(), &s.N1[y * W], W))
              return Cand{int(si), {int(x), int(y)}, -1};
        }
      } else {
        size_t nb = s.level_count(0, m), ob = s.level_count(0, m - 1);
        size_t nx = s.level_count(1, m), ox = s.level_count(1, m - 1);
        Mask nt(W), nf(W);
        for (size_t b = 0; b < nb; ++b) {
          for (size_t w = 0; w < W; ++w) {
            nt[w] = V[w] & s.B[b * W + w];
            nf[w] = V[w] & ~s.B[b * W + w];
          }
          long y0 = -1, yo = -1;
          for (size_t y = 0; y < nx; ++y)
            if (subset(nf.data(), &s.S[y * W], W)) {
              if (y0 < 0) y0 = long(y);
              if (y >= ox) {
                yo = long(y);
                break;
              }
            }
          if (y0 < 0) continue;
          for (size_t x = 0; x < nx; ++x) {
            if (!subset(nt.data(), &s.S[x * W], W)) continue;
            long y = (b >= ob || x >= ox) ? y0 : yo;
            if (y >= 0) return Cand{int(si), {int(b), int(x), int(y)}, -1};
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<MaxSatResult> Space::maxsat(const ExampleSet& E) {
  State& st = *st_;
  Query q = make_query(P_, E);
  const size_t W = q.W;
  bool have = false;
  Mask best(W, 0);
  int best_cnt = 0;
  Cand best_c;
  Mask V(W);
  auto offer = [&](const Mask& v, auto&& make) {
    int c = popcount(v.data(), W);
    if (!have || c < best_cnt || (c == best_cnt && lex_less(v.data(), best.data(), W))) {
      have = true;
      best = v;
      best_cnt = c;
      best_c = make();
    }
    return have && best_cnt == 0;
  };
  for (size_t si = 0; si < st.segs.size() && !(have && best_cnt == 0); ++si) {
    Seg& s = *st.segs[si];
    if (s.type == Seg::Table) {
      for_rows(int(si), s, [&](const Cand& c) {
        Mask m = table_sat(P_, st, s, c, q);
        if (!subset(q.POS.data(), m.data(), W)) return true;
        for (size_t w = 0; w < W; ++w) V[w] = q.NEG[w] & ~m[w];
        return !offer(V, [&] { return c; });
      });
      continue;
    }
    prepare(*this, st, s, q);
    if (!s.fix_pos_ok) continue;
    const uint64_t* VM = s.varmask.data();
    Mask pv(W), nv(W), nfix(W);
    for (size_t w = 0; w < W; ++w) {
      pv[w] = q.POS[w] & VM[w];
      nv[w] = q.NEG[w] & VM[w];
      nfix[w] = q.NEG[w] & ~VM[w] & ~s.fixmask[w];
    }
    bool stop = false;
    for (int m = s.wlo; m <= s.whi && !stop; ++m) {
      if (s.type == Seg::Ident) {
        size_t lo = s.level_count(0, m - 1), hi = s.level_count(0, m);
        for (size_t x = lo; x < hi && !stop; ++x) {
          if (!subset(pv.data(), &s.S[x * W], W)) continue;
          for (size_t w = 0; w < W; ++w) V[w] = (nv[w] & ~s.S[x * W + w]) | nfix[w];
          stop = offer(V, [&] { return Cand{int(si), {int(x)}, -1}; });
        }
      } else if (s.type == Seg::Pair) {
        size_t nx = s.level_count(0, m), ox = s.level_count(0, m - 1);
        size_t ny = s.level_count(1, m), oy = s.level_count(1, m - 1);
        std::vector<int> ys;
        for (size_t y = 0; y < ny; ++y)
          if (subset(pv.data(), &s.P1[y * W], W)) ys.push_back(int(y));
        for (size_t x = 0; x < nx && !stop; ++x) {
          if (!subset(pv.data(), &s.P0[x * W], W)) continue;
          for (int y : ys) {
            if (x < ox && size_t(y) < oy) continue;
            for (size_t w = 0; w < W; ++w) V[w] = (nv[w] & ~(s.N0[x * W + w] | s.N1[size_t(y) * W + w])) | nfix[w];
            if ((stop = offer(V, [&] { return Cand{int(si), {int(x), y}, -1}; }))) break;
          }
        }
      } else {
        size_t nb = s.level_count(0, m), ob = s.level_count(0, m - 1);
        size_t nx = s.level_count(1, m), ox = s.level_count(1, m - 1);
        Mask pt(W), pf(W);
        for (size_t b = 0; b < nb && !stop; ++b) {
          const uint64_t* Bb = &s.B[b * W];
          for (size_t w = 0; w < W; ++w) {
            pt[w] = pv[w] & Bb[w];
            pf[w] = pv[w] & ~Bb[w];
          }
          std::vector<int> xs, ys;
          for (size_t x = 0; x < nx; ++x) {
            if (subset(pt.data(), &s.S[x * W], W)) xs.push_back(int(x));
            if (subset(pf.data(), &s.S[x * W], W)) ys.push_back(int(x));
          }
          for (int x : xs) {
            for (int y : ys) {
              if (b < ob && size_t(x) < ox && size_t(y) < ox) continue;
              for (size_t w = 0; w < W; ++w)
                V[w] = (nv[w] & Bb[w] & ~s.S[size_t(x) * W + w]) | (nv[w] & ~Bb[w] & ~s.S[size_t(y) * W + w]) |
                       nfix[w];
              if ((stop = offer(V, [&] { return Cand{int(si), {int(b), x, y}, -1}; }))) break;
            }
            if (stop) break;
          }
        }
      }
    }
  }
  if (!have) return std::nullopt;
  MaxSatResult r;
  r.cand = best_c;
  for (size_t k = q.npos; k < q.n; ++k)
    if (bit(best.data(), k)) r.dropped.push_back(int(k - q.npos));
  return r;
}

std::optional<PrecisionResult> Space::precision(const std::vector<int>& f_out, const ExampleSet& E) {
  State& st = *st_;
  Query q = make_query(P_, E);
  const size_t W = q.W, ni = P_.num_inputs(), Ww = P_.words();
  std::vector<const uint64_t*> F(ni);
  for (size_t j = 0; j < ni; ++j) F[j] = P_.out_bits(f_out[j]);
  // c' in gamma(f(a)) \ gamma(h(a)), c' in W
  auto cut_at = [&](size_t j, int o) {
    const uint64_t* H = P_.out_bits(o);
    for (size_t w = 0; w < Ww; ++w)
      if (F[j][w] & ~H[w]) return true;
    return false;
  };
  auto witness = [&](const Cand& h) -> PrecisionResult {
    for (size_t j = 0; j < ni; ++j) {
      const uint64_t* H = P_.out_bits(output_at(h, j));
      for (size_t w = 0; w < Ww; ++w) {
        uint64_t d = F[j][w] & ~H[w];
        if (d) {
          int c = int(w * 64 + std::countr_zero(d));
          return PrecisionResult{h, Example{int(j), P_.witnesses()[size_t(c)], c}};
        }
      }
    }
    throw std::logic_error("precision witness vanished");
  };

  for (size_t si = 0; si < st.segs.size(); ++si) {
    Seg& s = *st.segs[si];
    if (s.type == Seg::Table) {
      std::optional<Cand> hit;
      for_rows(int(si), s, [&](const Cand& c) {
        if (!table_all(P_, st, s, c, q)) return true;
        for (size_t j = 0; j < ni; ++j)
          if (cut_at(j, table_out(P_, st, s, c, j))) {
            hit = c;
            return false;
          }
        return true;
      });
      if (hit) return witness(*hit);
      continue;
    }
    prepare(*this, st, s, q);
    bool fixed_ok = true;
    for (size_t w = 0; w < W; ++w) fixed_ok &= (q.ALL[w] & ~s.varmask[w] & ~s.fixmask[w]) == 0;
    if (!fixed_ok) continue;
    bool fixed_cut = false;
    for (size_t j = 0; j < ni && !fixed_cut; ++j)
      if (s.fixed[j] >= 0) fixed_cut = cut_at(j, s.fixed[j]);
    const uint64_t* V = s.varmask.data();

    if (s.type == Seg::Ident) {
      for (int m = s.wlo; m <= s.whi; ++m) {
        size_t lo = s.level_count(0, m - 1), hi = s.level_count(0, m);
        for (size_t x = lo; x < hi; ++x) {
          if (!subset(V, &s.S[x * W], W)) continue;
          Cand c{int(si), {int(x)}, -1};
          bool cut = fixed_cut;
          for (size_t j = 0; j < ni && !cut; ++j)
            if (s.env_of[j] >= 0) cut = cut_at(j, st.class_out(st.store, P_, s.holes[0].code(int(x), s.env_of[j])));
          if (cut) return witness(c);
        }
      }
      continue;
    }

    if (s.type == Seg::Pair) {
      // a side cuts when some f(a) member in W lies outside what the side admits
      const Ctx& ctx = P_.ctx();
      const auto& Wv = P_.witnesses();
      auto ok_bits = [&](bool lo, int64_t code) -> const Mask& {
        auto& cache = st.ok_cache[lo ? 0 : 1];
        auto it = cache.find(code);
        if (it != cache.end()) return it->second;
        Mask m(Ww, 0);
        for (size_t w = 0; w < Wv.size(); ++w)
          if (side_ok(st, ctx, s.side, lo, code, Wv[w])) set_bit(m.data(), w);
        return cache.emplace(code, std::move(m)).first->second;
      };
      st.ok_cache[0].clear();
      st.ok_cache[1].clear();
      auto side_cut = [&](int side, size_t x) {
        for (size_t j = 0; j < ni; ++j) {
          int e = s.env_of[j];
          if (e < 0) continue;
          const Mask& ok = ok_bits(side == 0, s.holes[size_t(side)].code(int(x), e));
          if (!subset(F[j], ok.data(), Ww)) return true;
        }
        return false;
      };
      Mask pv(W), nv(W), need(W);
      for (size_t w = 0; w < W; ++w) {
        pv[w] = q.POS[w] & V[w];
        nv[w] = q.NEG[w] & V[w];
      }
      std::vector<int8_t> cut1;
      for (int m = s.wlo; m <= s.whi; ++m) {
        size_t nx = s.level_count(0, m), ox = s.level_count(0, m - 1);
        size_t ny = s.level_count(1, m), oy = s.level_count(1, m - 1);
        cut1.assign(ny, -1);
        for (size_t x = 0; x < nx; ++x) {
          if (!subset(pv.data(), &s.P0[x * W], W)) continue;
          for (size_t w = 0; w < W; ++w) need[w] = nv[w] & ~s.N0[x * W + w];
          bool cx = fixed_cut || side_cut(0, x);
          for (size_t y = x >= ox ? 0 : oy; y < ny; ++y) {
            if (!subset(pv.data(), &s.P1[y * W], W) || !subset(need.data(), &s.N1[y * W], W)) continue;
            if (!cx) {
              if (cut1[y] < 0) cut1[y] = side_cut(1, y);
              if (!cut1[y]) continue;
            }
            return witness(Cand{int(si), {int(x), int(y)}, -1});
          }
        }
      }
      continue;
    }

    // ite: a branch class cuts on the inputs that select it
    const size_t IW = st.in_words;
    const HoleRef& hb = s.holes[0];
    const HoleRef& hx = s.holes[1];
    size_t ncls = hx.count_le(s.whi), nbool = hb.count_le(s.whi);
    std::vector<uint64_t> Cin(ncls * IW, 0), Bin(nbool * IW, 0);
    std::vector<bool> cin_done(ncls, false);
    auto cin = [&](size_t x) -> const uint64_t* {
      if (!cin_done[x]) {
        for (size_t j = 0; j < ni; ++j)
          if (s.env_of[j] >= 0 && cut_at(j, st.class_out(st.store, P_, hx.code(int(x), s.env_of[j]))))
            set_bit(&Cin[x * IW], j);
        cin_done[x] = true;
      }
      return &Cin[x * IW];
    };
    Mask NF(IW, 0);
    for (size_t j = 0; j < ni; ++j)
      if (s.env_of[j] >= 0) set_bit(NF.data(), j);
    for (size_t b = 0; b < nbool; ++b)
      for (size_t j = 0; j < ni; ++j)
        if (s.env_of[j] >= 0 && hb.code(int(b), s.env_of[j])) set_bit(&Bin[b * IW], j);
    Mask nt(W), nf(W);
    for (int m = s.wlo; m <= s.whi; ++m) {
      size_t nb = s.level_count(0, m), ob = s.level_count(0, m - 1);
      size_t nx = s.level_count(1, m), ox = s.level_count(1, m - 1);
      for (size_t b = 0; b < nb; ++b) {
        const uint64_t* Bi = &Bin[b * IW];
        for (size_t w = 0; w < W; ++w) {
          nt[w] = V[w] & s.B[b * W + w];
          nf[w] = V[w] & ~s.B[b * W + w];
        }
        std::vector<int> ys;
        for (size_t y = 0; y < nx; ++y)
          if (subset(nf.data(), &s.S[y * W], W)) ys.push_back(int(y));
        if (ys.empty()) continue;
        auto cut_false = [&](size_t y) {
          const uint64_t* c = cin(y);
          for (size_t w = 0; w < IW; ++w)
            if (c[w] & ~Bi[w] & NF[w]) return true;
          return false;
        };
        for (size_t x = 0; x < nx; ++x) {
          if (!subset(nt.data(), &s.S[x * W], W)) continue;
          bool cx = fixed_cut;
          if (!cx) {
            const uint64_t* c = cin(x);
            for (size_t w = 0; w < IW && !cx; ++w) cx = (c[w] & Bi[w]) != 0;
          }
          size_t ylo = (b >= ob || x >= ox) ? 0 : ox;
          for (int y : ys) {
            if (size_t(y) < ylo) continue;
            if (cx || cut_false(size_t(y))) return witness(Cand{int(si), {int(b), int(x), y}, -1});
          }
        }
      }
    }
  }
  return std::nullopt;
}

BestResult Space::verify_best(const std::vector<int>& f_out, uint64_t cap) {
  State& st = *st_;
  BestResult res;
  const size_t ni = P_.num_inputs(), Ww = P_.words();
  std::vector<const uint64_t*> F(ni);
  for (size_t j = 0; j < ni; ++j) F[j] = P_.out_bits(f_out[j]);
  // per input verdicts for output o: sound, dominated by f on W, strictly below f on W
  auto judge = [&](size_t j, int o, bool& sound, bool& dom, bool& strict) {
    sound = P_.sound_at(j, o);
    const uint64_t* G = P_.out_bits(o);
    dom = subset(G, F[j], Ww);
    strict = false;
    for (size_t w = 0; w < Ww && !strict; ++w) strict = G[w] != F[j][w];
  };
  auto charge = [&](uint64_t n) {
    res.work += n;
    return res.work > cap;
  };
  auto found = [&](Cand c) {
    res.status = BestResult::Dominated;
    res.witness = std::move(c);
    return res;
  };

  for (size_t si = 0; si < st.segs.size(); ++si) {
    Seg& s = *st.segs[si];
    bool fs = true, fd = true, ft = false;
    for (size_t j = 0; j < ni; ++j) {
      if (s.type == Seg::Table || s.fixed[j] < 0) continue;
      bool a, b, c;
      judge(j, s.fixed[j], a, b, c);
      fs &= a;
      fd &= b;
      ft |= c;
    }
    if (!fs || !fd) continue;

    auto generic = [&](const Cand& c) {
      bool strict = ft;
      for (size_t j = 0; j < ni; ++j) {
        if (s.type != Seg::Table && s.fixed[j] >= 0) continue;
        bool a, b, t;
        judge(j, output_at(c, j), a, b, t);
        if (!a || !b) return false;
        strict |= t;
      }
      return strict;
    };

    if (s.type == Seg::Table) {
      bool over = false;
      std::optional<Cand> hit;
      for_rows(int(si), s, [&](const Cand& c) {
        if (s.lazy) {
          // most candidates fail at the input that rejected the previous one
          bool a, b, t;
          if (charge(1)) return !(over = true);
          judge(s.hint, output_at(c, s.hint), a, b, t);
          if (!a || !b) return true;
          size_t j = 0;
          for (; j < ni; ++j) {
            judge(j, output_at(c, j), a, b, t);
            if (!a || !b) break;
          }
          if (charge(j + 1)) return !(over = true);
          if (j < ni) {
            s.hint = j;
            return true;
          }
        } else if (charge(ni)) {
          return !(over = true);
        }
        if (!generic(c)) return true;
        hit = c;
        return false;
      });
      if (hit) return found(*hit);
      if (over) {
        res.status = BestResult::Unverified;
        return res;
      }
      continue;
    }
    if (s.type == Seg::Ident) {
      for (int m = s.wlo; m <= s.whi; ++m) {
        size_t lo = s.level_count(0, m - 1), hi = s.level_count(0, m);
        for (size_t x = lo; x < hi; ++x) {
          if (charge(ni)) {
            res.status = BestResult::Unverified;
            return res;
          }
          Cand c{int(si), {int(x)}, -1};
          if (generic(c)) return found(c);
        }
      }
      continue;
    }
    if (s.type == Seg::Pair) {
      const bool interval = s.side == 0;
      std::vector<int> lo_first(ni, -1), hi_last(ni, -1);
      for (size_t j = 0; j < ni; ++j) {
        lo_first[j] = lowest(F[j], Ww);
        hi_last[j] = highest(F[j], Ww);
      }
      const auto& Wv = P_.witnesses();
      // for interval sides: index of the first W element admitted by a lower
      // bound, and of the last admitted by an upper bound
      auto w_lo = [&](int64_t x) { return int(std::lower_bound(Wv.begin(), Wv.end(), Value(x), [](const Value& a, const Value& b) { return as_int(a) < as_int(b); }) - Wv.begin()); };
      auto w_hi = [&](int64_t y) { return int(std::upper_bound(Wv.begin(), Wv.end(), Value(y), [](const Value& a, const Value& b) { return as_int(a) < as_int(b); }) - Wv.begin()) - 1; };
      auto side_pass = [&](int side, size_t x) {
        const HoleRef& h = s.holes[size_t(side)];
        for (size_t j = 0; j < ni; ++j) {
          int e = s.env_of[j];
          if (e < 0 || P_.image_empty(j)) continue;
          int64_t code = h.code(int(x), e);
          if (!side_sound(st, s.side, side == 0, code, P_.best(j))) return false;
          if (interval && P_.image_in_w(j)) {
            if (side == 0 && w_lo(code) < lo_first[j]) return false;
            if (side == 1 && w_hi(code) > hi_last[j]) return false;
          }
        }
        return true;
      };
      for (int m = s.wlo; m <= s.whi; ++m) {
        size_t nx = s.level_count(0, m), ox = s.level_count(0, m - 1);
        size_t ny = s.level_count(1, m), oy = s.level_count(1, m - 1);
        if (charge(uint64_t(nx + ny) * ni)) {
          res.status = BestResult::Unverified;
          return res;
        }
        std::vector<int> ys;
        for (size_t y = 0; y < ny; ++y)
          if (side_pass(1, y)) ys.push_back(int(y));
        for (size_t x = 0; x < nx; ++x) {
          if (!side_pass(0, x)) continue;
          for (int y : ys) {
            if (x < ox && size_t(y) < oy) continue;
            if (charge(ni)) {
              res.status = BestResult::Unverified;
              return res;
            }
            Cand c{int(si), {int(x), y}, -1};
            if (generic(c)) return found(c);
          }
        }
      }
      continue;
    }
    // ite
    const size_t IW = st.in_words;
    const HoleRef& hb = s.holes[0];
    const HoleRef& hx = s.holes[1];
    size_t ncls = hx.count_le(s.whi), nbool = hb.count_le(s.whi);
    if (charge(uint64_t(ncls + nbool) * ni)) {
      res.status = BestResult::Unverified;
      return res;
    }
    std::vector<uint64_t> Sd(ncls * IW, 0), St(ncls * IW, 0), Bin(nbool * IW, 0);
    Mask NF(IW, 0);
    for (size_t j = 0; j < ni; ++j)
      if (s.env_of[j] >= 0) set_bit(NF.data(), j);
    for (size_t x = 0; x < ncls; ++x)
      for (size_t j = 0; j < ni; ++j) {
        if (s.env_of[j] < 0) continue;
        bool a, b, t;
        judge(j, st.class_out(st.store, P_, hx.code(int(x), s.env_of[j])), a, b, t);
        if (a && b) set_bit(&Sd[x * IW], j);
        if (t) set_bit(&St[x * IW], j);
      }
    for (size_t b = 0; b < nbool; ++b)
      for (size_t j = 0; j < ni; ++j)
        if (s.env_of[j] >= 0 && hb.code(int(b), s.env_of[j])) set_bit(&Bin[b * IW], j);
    Mask bt(IW), bf(IW);
    for (int m = s.wlo; m <= s.whi; ++m) {
      size_t nb = s.level_count(0, m), ob = s.level_count(0, m - 1);
      size_t nx = s.level_count(1, m), ox = s.level_count(1, m - 1);
      for (size_t b = 0; b < nb; ++b) {
        for (size_t w = 0; w < IW; ++w) {
          bt[w] = Bin[b * IW + w];
          bf[w] = NF[w] & ~Bin[b * IW + w];
        }
        std::vector<int> xs, ys;
        for (size_t x = 0; x < nx; ++x) {
          if (subset(bt.data(), &Sd[x * IW], IW)) xs.push_back(int(x));
          if (subset(bf.data(), &Sd[x * IW], IW)) ys.push_back(int(x));
        }
        for (int x : xs)
          for (int y : ys) {
            if (b < ob && size_t(x) < ox && size_t(y) < ox) continue;
            if (charge(IW)) {
              res.status = BestResult::Unverified;
              return res;
            }
            bool strict = ft;
            for (size_t w = 0; w < IW && !strict; ++w)
              strict = ((St[size_t(x) * IW + w] & bt[w]) | (St[size_t(y) * IW + w] & bf[w])) != 0;
            if (strict) return found(Cand{int(si), {int(b), x, y}, -1});
          }
      }
    }
  }
  res.status = BestResult::Best;
  return res;
}

}  // namespace xfsynth

#include "xfsynth/problem.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "xfsynth/bitvec.hpp"

namespace xfsynth {

namespace {

constexpr const char* kOpNames[] = {"abs",    "add",    "sub",      "mul",    "and",     "or",      "xor",  "shl",
                                    "ashr",   "lshr",   "concat",   "contains", "charAt", "toLower", "toUpper", "trim"};

bool is_string_op(Op op) { return op >= Op::Concat; }

}  // namespace

const char* op_name(Op op) { return kOpNames[int(op)]; }

Op op_from_name(const std::string& s) {
  for (int i = 0; i <= int(Op::Trim); ++i)
    if (s == kOpNames[i]) return Op(i);
  throw ConfigError("unknown operation: " + s);
}

int op_arity(Op op) {
  switch (op) {
    case Op::Abs:
    case Op::CharAt:
    case Op::ToLower:
    case Op::ToUpper:
    case Op::Trim: return 1;
    default: return 2;
  }
}

Dom op_output_domain(Op op, Dom in) { return op == Op::Contains ? Dom::AbsBool : in; }

bool op_supported(Op op, Dom in) {
  if (in == Dom::AbsBool) return false;
  if (is_string_op(op)) return is_string_domain(in);
  if (is_string_domain(in)) return false;
  switch (op) {
    case Op::Abs: return in == Dom::IntervalZ;
    case Op::Add:
    case Op::Sub:
    case Op::Mul: return true;
    default: return in != Dom::IntervalZ;
  }
}

std::optional<Value> concrete_op(const Ctx& c, Dom in, Op op, const Value* a) {
  if (is_string_op(op)) {
    const auto& s = as<std::string>(a[0]);
    switch (op) {
      case Op::Concat: return Value(s + as<std::string>(a[1]));
      case Op::Contains: return Value(s.find(as<std::string>(a[1])) != std::string::npos);
      case Op::CharAt:
        if (c.char_index < 0 || size_t(c.char_index) >= s.size()) return std::nullopt;
        return Value(std::string(1, s[c.char_index]));
      case Op::ToLower:
      case Op::ToUpper: {
        std::string r = s;
        for (auto& ch : r) ch = op == Op::ToLower ? c.to_lower(ch) : c.to_upper(ch);
        return Value(r);
      }
      case Op::Trim: return Value(trim_spaces(s));
      default: break;
    }
    return std::nullopt;
  }
  const int64_t x = as_int(a[0]);
  if (in == Dom::IntervalZ) {
    switch (op) {
      case Op::Abs: return Value(x < 0 ? -x : x);
      case Op::Add: return Value(x + as_int(a[1]));
      case Op::Sub: return Value(x - as_int(a[1]));
      case Op::Mul: return Value(x * as_int(a[1]));
      default: throw ConfigError(std::string("operation ") + op_name(op) + " needs a bitvector domain");
    }
  }
  const int w = c.w;
  const bool sgn = in == Dom::SInt;
  const int64_t y = as_int(a[1]);
  const uint64_t px = bv::bits(x, w), py = bv::bits(y, w);
  int64_t r = 0;
  switch (op) {
    case Op::Add: r = x + y; break;
    case Op::Sub: r = x - y; break;
    case Op::Mul: r = x * y; break;
    case Op::And: r = int64_t(px & py); break;
    case Op::Or: r = int64_t(px | py); break;
    case Op::Xor: r = int64_t(px ^ py); break;
    case Op::Shl: r = int64_t(bv::shl(px, py, w)); break;
    case Op::Lshr: r = int64_t(bv::lshr(px, py, w)); break;
    case Op::Ashr: r = int64_t(bv::ashr(px, py, w)); break;
    default: throw ConfigError(std::string("operation ") + op_name(op) + " is not defined on bitvectors");
  }
  return Value(bv::norm(r, w, sgn));
}

Problem::Problem(const Ctx& c, Dom dom, Op op, bool bot_strict)
    : c_(c), dom_(dom), out_dom_(op_output_domain(op, dom)), op_(op), arity_(op_arity(op)), bot_strict_(bot_strict) {
  if (!op_supported(op, dom))
    throw ConfigError(std::string("operation ") + op_name(op) + " is not available on domain " + dom_name(dom));
  if (dom == Dom::IntervalZ || is_bv_domain(dom)) c_.arith = dom;
  c_.validate();
  ec_.c = &c_;
  ec_.dom = dom_;

  universe_ = concrete_universe(c_, dom_, false);
  abstract_ = enumerate_abstract(c_, dom_);
  members_.resize(abstract_.size());
  for (size_t i = 0; i < abstract_.size(); ++i)
    for (size_t u = 0; u < universe_.size(); ++u)
      if (gamma_contains(c_, dom_, abstract_[i], universe_[u])) members_[i].push_back(int(u));

  W_ = concrete_universe(c_, out_dom_, true);
  for (size_t i = 0; i < W_.size(); ++i) w_index_.emplace(W_[i], int(i));
  words_ = std::max<size_t>(1, (W_.size() + 63) / 64);

  auto add_input = [&](std::vector<int> comp) {
    Env env{};
    std::vector<Value> key;
    bool bot = false;
    for (size_t k = 0; k < comp.size(); ++k) {
      const Value& v = abstract_[comp[k]];
      env[arity_ == 1 ? kA : (k == 0 ? kA1 : kA2)] = v;
      key.push_back(v);
      bot |= is_bot(c_, dom_, v);
    }
    input_index_.emplace(key, int(inputs_.size()));
    inputs_.push_back(env);
    input_comp_.push_back(std::move(comp));
    has_bot_.push_back(bot);
  };
  if (arity_ == 1) {
    for (size_t i = 0; i < abstract_.size(); ++i) add_input({int(i)});
  } else {
    for (size_t i = 0; i < abstract_.size(); ++i)
      for (size_t k = 0; k < abstract_.size(); ++k) add_input({int(i), int(k)});
  }

  const size_t n = inputs_.size();
  img_bits_.assign(n * words_, 0);
  img_in_w_.assign(n, true);
  img_empty_.assign(n, true);
  best_.assign(n, bottom(c_, out_dom_));
  const bool use_atoms = has_galois(out_dom_) && !atoms(c_, dom_, top(c_, dom_)).empty();
  std::unordered_map<std::vector<Value>, Part, TupleHash> memo;
  for (size_t j = 0; j < n; ++j) {
    if (has_bot_[j]) continue;
    std::vector<Part> parts;
    if (use_atoms) {
      std::vector<std::vector<Value>> at;
      for (int comp : input_comp_[j]) at.push_back(atoms(c_, dom_, abstract_[comp]));
      std::vector<size_t> idx(at.size(), 0);
      bool done = false;
      for (const auto& v : at) done |= v.empty();
      while (!done) {
        std::vector<Value> key;
        for (size_t k = 0; k < at.size(); ++k) key.push_back(at[k][idx[k]]);
        auto it = memo.find(key);
        if (it == memo.end()) {
          std::vector<const std::vector<int>*> ms;
          for (const auto& v : key) ms.push_back(&members_of(v));
          it = memo.emplace(key, image_of(ms)).first;
        }
        parts.push_back(it->second);
        size_t k = at.size();
        while (k > 0) {
          --k;
          if (++idx[k] < at[k].size()) break;
          idx[k] = 0;
          if (k == 0) done = true;
        }
      }
    } else {
      std::vector<const std::vector<int>*> ms;
      for (int comp : input_comp_[j]) ms.push_back(&members_[comp]);
      parts.push_back(image_of(ms));
    }
    Value acc = bottom(c_, out_dom_);
    bool first = true;
    for (const auto& p : parts) {
      for (size_t w = 0; w < words_; ++w) img_bits_[j * words_ + w] |= p.bits[w];
      if (!p.in_w) img_in_w_[j] = false;
      if (!p.empty) {
        img_empty_[j] = false;
        acc = first ? p.best : join(c_, out_dom_, acc, p.best);
        first = false;
      }
    }
    best_[j] = acc;
  }
}

const std::vector<int>& Problem::members_of(const Value& a) {
  auto it = atom_members_.find(a);
  if (it != atom_members_.end()) return it->second;
  std::vector<int> m;
  for (size_t u = 0; u < universe_.size(); ++u)
    if (gamma_contains(c_, dom_, a, universe_[u])) m.push_back(int(u));
  return atom_members_.emplace(a, std::move(m)).first->second;
}

Problem::Part Problem::image_of(const std::vector<const std::vector<int>*>& ms) {
  Part p;
  p.bits.assign(words_, 0);
  std::vector<Value> extra;
  std::set<int> hit;
  std::vector<size_t> idx(ms.size(), 0);
  for (const auto* m : ms)
    if (m->empty()) return p;
  Value args[2];
  while (true) {
    for (size_t k = 0; k < ms.size(); ++k) args[k] = universe_[(*ms[k])[idx[k]]];
    auto r = concrete_op(c_, dom_, op_, args);
    if (r) {
      p.empty = false;
      int w = witness_index(*r);
      if (w >= 0) {
        p.bits[w >> 6] |= uint64_t(1) << (w & 63);
        hit.insert(w);
      } else {
        p.in_w = false;
        extra.push_back(*r);
      }
    }
    size_t k = ms.size();
    bool done = false;
    while (k > 0) {
      --k;
      if (++idx[k] < ms[k]->size()) break;
      idx[k] = 0;
      if (k == 0) done = true;
    }
    if (done) break;
  }
  std::unordered_set<Value, ValueHash> seen;
  std::vector<Value> outs;
  for (auto& v : extra)
    if (seen.insert(v).second) outs.push_back(std::move(v));
  for (int w : hit) outs.push_back(W_[w]);
  p.best = alpha_set(c_, out_dom_, outs);
  return p;
}

std::vector<Value> Problem::input_args(size_t j) const {
  std::vector<Value> out;
  for (int comp : input_comp_[j]) out.push_back(abstract_[comp]);
  return out;
}

std::string Problem::format_input(size_t j) const {
  const auto& comp = input_comp_[j];
  if (comp.size() == 1) return format_value(c_, dom_, abstract_[comp[0]]);
  std::string s = "(";
  for (size_t k = 0; k < comp.size(); ++k) s += (k ? ", " : "") + format_value(c_, dom_, abstract_[comp[k]]);
  return s + ")";
}

int Problem::find_input(const std::vector<Value>& args) const {
  auto it = input_index_.find(args);
  return it == input_index_.end() ? -1 : it->second;
}

int Problem::witness_index(const Value& x) const {
  auto it = w_index_.find(x);
  return it == w_index_.end() ? -1 : it->second;
}

int Problem::intern(const Value& out) {
  auto it = out_index_.find(out);
  if (it != out_index_.end()) return it->second;
  int id = int(outs_.size());
  outs_.push_back(out);
  out_index_.emplace(out, id);
  out_bits_.emplace_back();
  out_bits_ready_.push_back(false);
  return id;
}

const uint64_t* Problem::out_bits(int id) {
  if (!out_bits_ready_[id]) {
    std::vector<uint64_t> b(words_, 0);
    for (size_t w = 0; w < W_.size(); ++w)
      if (gamma_contains(c_, out_dom_, outs_[id], W_[w])) b[w >> 6] |= uint64_t(1) << (w & 63);
    out_bits_[id] = std::move(b);
    out_bits_ready_[id] = true;
  }
  return out_bits_[id].data();
}

bool Problem::contains(int id, const Example& e) {
  if (e.w >= 0) return contains_w(id, e.w);
  return gamma_contains(c_, out_dom_, outs_[id], e.out);
}

bool Problem::sound_at(size_t j, int id) {
  if (img_empty_[j]) return true;
  if (img_in_w_[j]) {
    const uint64_t* o = out_bits(id);
    const uint64_t* m = image_bits(j);
    for (size_t w = 0; w < words_; ++w)
      if (m[w] & ~o[w]) return false;
    return true;
  }
  return leq(c_, out_dom_, best_[j], outs_[id]);
}

bool Problem::leq_w(int a, int b) {
  const uint64_t* x = out_bits(a);
  const uint64_t* y = out_bits(b);
  for (size_t w = 0; w < words_; ++w)
    if (x[w] & ~y[w]) return false;
  return true;
}

int Problem::eval_output(const Term& t, size_t j) {
  if (bot_strict_ && has_bot_[j]) return fixed_bottom();
  Env env = inputs_[j];
  return intern(eval(t, ec_, env));
}

void Problem::members(size_t j, const std::function<bool(const Value* args)>& fn) const {
  const auto& comp = input_comp_[j];
  std::vector<const std::vector<int>*> ms;
  for (int k : comp) {
    ms.push_back(&members_[k]);
    if (members_[k].empty()) return;
  }
  std::vector<size_t> idx(ms.size(), 0);
  Value args[2];
  while (true) {
    for (size_t k = 0; k < ms.size(); ++k) args[k] = universe_[(*ms[k])[idx[k]]];
    if (!fn(args)) return;
    size_t k = ms.size();
    while (k > 0) {
      --k;
      if (++idx[k] < ms[k]->size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
  }
}

std::optional<Example> Problem::first_uncovered(size_t j, int id) {
  std::optional<Example> found;
  members(j, [&](const Value* args) {
    auto r = apply(args);
    if (!r) return true;
    Example e = make_example(j, *r);
    if (contains(id, e)) return true;
    found = std::move(e);
    return false;
  });
  return found;
}

Example Problem::make_example(size_t j, const Value& out) const { return Example{int(j), out, witness_index(out)}; }

}  // namespace xfsynth

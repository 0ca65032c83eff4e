#include <algorithm>
#include <bit>
#include <optional>

#include "xfsynth/bitvec.hpp"
#include "xfsynth/term.hpp"

namespace xfsynth {

int64_t sat_add(int64_t a, int64_t b) {
  __int128 s = __int128(a) + b;
  if (s >= kPosInf) return kPosInf;
  if (s <= kNegInf) return kNegInf;
  return int64_t(s);
}

int64_t sat_mul(int64_t a, int64_t b) {
  if (a == 0 || b == 0) return 0;
  bool neg = (a < 0) != (b < 0);
  if (a >= kPosInf || a <= kNegInf || b >= kPosInf || b <= kNegInf) return neg ? kNegInf : kPosInf;
  __int128 p = __int128(a) * b;
  if (p >= kPosInf) return kPosInf;
  if (p <= kNegInf) return kNegInf;
  return int64_t(p);
}

int64_t sat_neg(int64_t a) { return -a; }

uint64_t rotl_bits(uint64_t x, int k, int b) {
  const uint64_t M = bv::mask(b);
  k = ((k % b) + b) % b;
  x &= M;
  if (k == 0) return x;
  return ((x << k) | (x >> (b - k))) & M;
}

uint64_t rotr_bits(uint64_t x, int k, int b) { return rotl_bits(x, b - ((k % b + b) % b), b); }

uint64_t reverse_bits(uint64_t x, int b) {
  uint64_t r = 0;
  for (int i = 0; i < b; ++i)
    if (x >> i & 1) r |= uint64_t(1) << (b - 1 - i);
  return r;
}

uint64_t sh_sumset(uint64_t h1, uint64_t h2, int b) {
  uint64_t out = 0;
  for (int x = 0; x < b; ++x)
    if (h1 >> x & 1)
      for (int y = 0; y < b; ++y)
        if (h2 >> y & 1) out |= uint64_t(1) << ((x + y) % b);
  return out;
}

namespace {

bool is_bv(Dom d) { return d == Dom::UInt || d == Dom::SInt || d == Dom::Wrapped; }

// Brings an exact integer result back into the arithmetic of the problem.
int64_t fix(const EvalCtx& ec, __int128 v) {
  if (!is_bv(ec.dom)) {
    if (v >= kPosInf) return kPosInf;
    if (v <= kNegInf) return kNegInf;
    return int64_t(v);
  }
  return bv::norm(int64_t(v), ec.c->w, ec.dom == Dom::SInt);
}

uint64_t pat(const EvalCtx& ec, const Value& v) { return bv::bits(as_int(v), ec.c->w); }
int64_t from_pat(const EvalCtx& ec, uint64_t p) { return bv::norm(int64_t(p), ec.c->w, ec.dom == Dom::SInt); }
int hash_b(const EvalCtx& ec) { return ec.c->b; }

Value f_neg(const EvalCtx& ec, const Value* a) {
  if (!is_bv(ec.dom)) return sat_neg(as_int(a[0]));
  return fix(ec, -__int128(as_int(a[0])));
}
Value f_add(const EvalCtx& ec, const Value* a) {
  if (!is_bv(ec.dom)) return sat_add(as_int(a[0]), as_int(a[1]));
  return fix(ec, __int128(as_int(a[0])) + as_int(a[1]));
}
Value f_sub(const EvalCtx& ec, const Value* a) {
  if (!is_bv(ec.dom)) return sat_add(as_int(a[0]), sat_neg(as_int(a[1])));
  return fix(ec, __int128(as_int(a[0])) - as_int(a[1]));
}
Value f_mul(const EvalCtx& ec, const Value* a) {
  if (!is_bv(ec.dom)) return sat_mul(as_int(a[0]), as_int(a[1]));
  return fix(ec, __int128(as_int(a[0])) * as_int(a[1]));
}
Value f_min(const EvalCtx&, const Value* a) { return std::min(as_int(a[0]), as_int(a[1])); }
Value f_max(const EvalCtx&, const Value* a) { return std::max(as_int(a[0]), as_int(a[1])); }
Value f_and(const EvalCtx& ec, const Value* a) { return from_pat(ec, pat(ec, a[0]) & pat(ec, a[1])); }
Value f_or(const EvalCtx& ec, const Value* a) { return from_pat(ec, pat(ec, a[0]) | pat(ec, a[1])); }
Value f_xor(const EvalCtx& ec, const Value* a) { return from_pat(ec, pat(ec, a[0]) ^ pat(ec, a[1])); }
Value f_not(const EvalCtx& ec, const Value* a) { return from_pat(ec, ~pat(ec, a[0])); }
Value f_shl(const EvalCtx& ec, const Value* a) {
  return from_pat(ec, bv::shl(pat(ec, a[0]), pat(ec, a[1]), ec.c->w));
}
Value f_lshr(const EvalCtx& ec, const Value* a) {
  return from_pat(ec, bv::lshr(pat(ec, a[0]), pat(ec, a[1]), ec.c->w));
}
Value f_ashr(const EvalCtx& ec, const Value* a) {
  return from_pat(ec, bv::ashr(pat(ec, a[0]), pat(ec, a[1]), ec.c->w));
}

template <uint64_t (*F)(uint64_t, uint64_t, uint64_t, uint64_t, int)>
Value f_bound(const EvalCtx& ec, const Value* a) {
  return from_pat(ec, F(pat(ec, a[0]), pat(ec, a[1]), pat(ec, a[2]), pat(ec, a[3]), ec.c->w));
}

Value f_not_b(const EvalCtx&, const Value* a) { return !as<bool>(a[0]); }

Value f_is_bot(const EvalCtx& ec, const Value* a) { return is_bot(*ec.c, ec.dom, a[0]); }
Value f_is_top(const EvalCtx& ec, const Value* a) { return is_top(*ec.c, ec.dom, a[0]); }

// gamma(a) = {""} for string domains; gamma(a) empty for interval domains.
Value f_is_empty(const EvalCtx& ec, const Value* a) {
  const Ctx& c = *ec.c;
  switch (ec.dom) {
    case Dom::CI: {
      const auto& v = as<CIVal>(a[0]);
      return !v.bot && v.L == 0 && v.U == 0;
    }
    case Dom::SS:
    case Dom::CS: {
      const auto& v = as<SSVal>(a[0]);
      return !v.top && v.S.size() == 1 && v.S[0].empty();
    }
    case Dom::PS:
    case Dom::SH:
      return false;
    case Dom::IntervalZ: {
      const auto& v = as<Interval>(a[0]);
      return v.bot || v.l > c.N || v.r < -c.N;
    }
    default:
      return is_bot(c, ec.dom, a[0]);
  }
}

Value f_pair_int(const EvalCtx& ec, const Value* a) {
  if (ec.dom == Dom::Wrapped) return make_wrapped(*ec.c, pat(ec, a[0]), pat(ec, a[1]));
  if (ec.dom == Dom::IntervalZ || ec.dom == Dom::UInt || ec.dom == Dom::SInt)
    return make_interval(as_int(a[0]), as_int(a[1]));
  throw ConfigError("integer pair used outside an interval domain");
}
Value f_pair_cs(const EvalCtx& ec, const Value* a) {
  if (ec.dom != Dom::CI) throw ConfigError("character-set pair used outside the CI domain");
  return make_ci(as<CharSet>(a[0]).bits, as<CharSet>(a[1]).bits);
}
Value f_pair_str(const EvalCtx& ec, const Value* a) {
  if (ec.dom != Dom::PS) throw ConfigError("string pair used outside the PS domain");
  return PSVal{false, as<std::string>(a[0]), as<std::string>(a[1])};
}

Value f_overflow_mul(const EvalCtx& ec, const Value* a) { return overflow_mul(*ec.c, ec.dom, a[0], a[1]); }

std::vector<std::pair<int64_t, int64_t>> corners(const Ctx& c, Dom d, const Value& v) {
  if (d == Dom::Wrapped) {
    const auto& w = as<Wrapped>(v);
    std::vector<std::pair<int64_t, int64_t>> out;
    for (const auto& p : split_at_zero(c, w)) out.push_back({p.a, p.b});
    return out;
  }
  const auto& iv = as<Interval>(v);
  if (iv.bot) return {};
  return {{iv.l, iv.r}};
}

// True when the exact corner results of op leave the representable range, or
// (wrapped) when an argument crosses the south pole.
template <int Op>
Value f_overflow(const EvalCtx& ec, const Value* a) {
  const Ctx& c = *ec.c;
  if (!is_bv(ec.dom)) return false;
  auto c1 = corners(c, ec.dom, a[0]), c2 = corners(c, ec.dom, a[1]);
  if (c1.empty() || c2.empty()) return false;
  if (ec.dom == Dom::Wrapped && (c1.size() > 1 || c2.size() > 1)) return true;
  bool sgn = ec.dom == Dom::SInt;
  auto out = [&](__int128 v) { return v < bv::min_value(c.w, sgn) || v > bv::max_value(c.w, sgn); };
  for (int64_t x : {c1[0].first, c1[0].second})
    for (int64_t y : {c2[0].first, c2[0].second}) {
      __int128 v = Op == 0 ? __int128(x) + y : Op == 1 ? __int128(x) - y : __int128(x) * y;
      if (out(v)) return true;
    }
  return false;
}

Value f_is_subset(const EvalCtx&, const Value* a) { return (as<CharSet>(a[0]).bits & ~as<CharSet>(a[1]).bits) == 0; }
Value f_size_le1(const EvalCtx&, const Value* a) { return std::popcount(as<CharSet>(a[0]).bits) <= 1; }
Value f_contains_space(const EvalCtx& ec, const Value* a) {
  int s = ec.c->space_index();
  return s >= 0 && (as<CharSet>(a[0]).bits >> s & 1);
}
Value f_remove_space(const EvalCtx& ec, const Value* a) {
  int s = ec.c->space_index();
  uint32_t m = as<CharSet>(a[0]).bits;
  if (s >= 0) m &= ~(uint32_t(1) << s);
  return CharSet{m};
}
Value f_union(const EvalCtx&, const Value* a) { return CharSet{as<CharSet>(a[0]).bits | as<CharSet>(a[1]).bits}; }
Value f_inter(const EvalCtx&, const Value* a) { return CharSet{as<CharSet>(a[0]).bits & as<CharSet>(a[1]).bits}; }
Value f_is_none(const EvalCtx&, const Value* a) { return as<CharSet>(a[0]).bits == 0; }

template <bool Lower>
Value f_case_set(const EvalCtx& ec, const Value* a) {
  const Ctx& c = *ec.c;
  uint32_t m = as<CharSet>(a[0]).bits, out = 0;
  for (size_t i = 0; i < c.sigma.size(); ++i)
    if (m >> i & 1) {
      char ch = Lower ? c.to_lower(c.sigma[i]) : c.to_upper(c.sigma[i]);
      out |= uint32_t(1) << c.sigma_index(ch);
    }
  return CharSet{out};
}

std::string map_case(const Ctx& c, const std::string& s, bool lower) {
  std::string r = s;
  for (char& ch : r) ch = lower ? c.to_lower(ch) : c.to_upper(ch);
  return r;
}

Value f_trim(const EvalCtx&, const Value* a) { return trim_spaces(as<std::string>(a[0])); }
Value f_trim_start(const EvalCtx&, const Value* a) { return trim_start(as<std::string>(a[0])); }
Value f_trim_end(const EvalCtx&, const Value* a) { return trim_end(as<std::string>(a[0])); }
Value f_lcp(const EvalCtx&, const Value* a) { return lcp(as<std::string>(a[0]), as<std::string>(a[1])); }
Value f_lcs(const EvalCtx&, const Value* a) { return lcs(as<std::string>(a[0]), as<std::string>(a[1])); }
Value f_concat_str(const EvalCtx&, const Value* a) { return as<std::string>(a[0]) + as<std::string>(a[1]); }
Value f_lower(const EvalCtx& ec, const Value* a) { return map_case(*ec.c, as<std::string>(a[0]), true); }
Value f_upper(const EvalCtx& ec, const Value* a) { return map_case(*ec.c, as<std::string>(a[0]), false); }
Value f_char_at(const EvalCtx& ec, const Value* a) {
  const auto& s = as<std::string>(a[0]);
  size_t i = size_t(ec.c->char_index);
  return i < s.size() ? s.substr(i, 1) : std::string();
}
Value f_has_index(const EvalCtx& ec, const Value* a) {
  return as<std::string>(a[0]).size() > size_t(ec.c->char_index);
}
Value f_is_empty_str(const EvalCtx&, const Value* a) { return as<std::string>(a[0]).empty(); }

Value ss_lift(const EvalCtx& ec, const Value& v, const std::function<std::optional<std::string>(const std::string&)>& f) {
  const auto& s = as<SSVal>(v);
  if (s.top) return s;
  std::vector<Value> outs;
  for (const auto& x : s.S)
    if (auto y = f(x)) outs.push_back(*y);
  return alpha_set(*ec.c, ec.dom, outs);
}

Value f_map_trim(const EvalCtx& ec, const Value* a) {
  return ss_lift(ec, a[0], [](const std::string& s) { return std::optional<std::string>(trim_spaces(s)); });
}
Value f_map_lower(const EvalCtx& ec, const Value* a) {
  return ss_lift(ec, a[0], [&](const std::string& s) { return std::optional<std::string>(map_case(*ec.c, s, true)); });
}
Value f_map_upper(const EvalCtx& ec, const Value* a) {
  return ss_lift(ec, a[0], [&](const std::string& s) { return std::optional<std::string>(map_case(*ec.c, s, false)); });
}
Value f_map_char_at(const EvalCtx& ec, const Value* a) {
  size_t i = size_t(ec.c->char_index);
  return ss_lift(ec, a[0], [&](const std::string& s) {
    return i < s.size() ? std::optional<std::string>(s.substr(i, 1)) : std::nullopt;
  });
}
Value f_map_concat(const EvalCtx& ec, const Value* a) {
  const auto& x = as<SSVal>(a[0]);
  const auto& y = as<SSVal>(a[1]);
  if (!x.top && x.S.empty()) return x;
  if (!y.top && y.S.empty()) return y;
  if (x.top || y.top) return SSVal{true, {}};
  std::vector<Value> outs;
  for (const auto& s : x.S)
    for (const auto& t : y.S) outs.push_back(s + t);
  return alpha_set(*ec.c, ec.dom, outs);
}
Value f_set_contains(const EvalCtx&, const Value* a) {
  const auto& x = as<SSVal>(a[0]);
  const auto& y = as<SSVal>(a[1]);
  if ((!x.top && x.S.empty()) || (!y.top && y.S.empty())) return ABool{AB::Bot};
  if (x.top || y.top) return ABool{AB::Top};
  bool any_t = false, any_f = false;
  for (const auto& s : x.S)
    for (const auto& t : y.S) (s.find(t) != std::string::npos ? any_t : any_f) = true;
  return ABool{any_t && any_f ? AB::Top : any_t ? AB::True : AB::False};
}

Value f_sumset(const EvalCtx& ec, const Value* a) {
  return SHVal{sh_sumset(as<SHVal>(a[0]).H, as<SHVal>(a[1]).H, hash_b(ec))};
}
Value f_hash_union(const EvalCtx&, const Value* a) { return SHVal{as<SHVal>(a[0]).H | as<SHVal>(a[1]).H}; }

Value f_reverse(const EvalCtx& ec, const Value* a) { return int64_t(reverse_bits(uint64_t(as_int(a[0])), hash_b(ec))); }
Value f_rotl(const EvalCtx& ec, const Value* a) {
  return int64_t(rotl_bits(uint64_t(as_int(a[0])), int(as_int(a[1])), hash_b(ec)));
}
Value f_rotr(const EvalCtx& ec, const Value* a) {
  return int64_t(rotr_bits(uint64_t(as_int(a[0])), int(as_int(a[1])), hash_b(ec)));
}
Value f_band(const EvalCtx&, const Value* a) { return as_int(a[0]) & as_int(a[1]); }
Value f_bor(const EvalCtx&, const Value* a) { return as_int(a[0]) | as_int(a[1]); }
Value f_bxor(const EvalCtx&, const Value* a) { return as_int(a[0]) ^ as_int(a[1]); }
Value f_bnot(const EvalCtx& ec, const Value* a) { return int64_t(~uint64_t(as_int(a[0])) & bv::mask(hash_b(ec))); }
Value f_bshl(const EvalCtx& ec, const Value* a) {
  int k = int(as_int(a[1]));
  if (k >= hash_b(ec)) return int64_t(0);
  return int64_t((uint64_t(as_int(a[0])) << k) & bv::mask(hash_b(ec)));
}
Value f_blshr(const EvalCtx& ec, const Value* a) {
  int k = int(as_int(a[1]));
  if (k >= hash_b(ec)) return int64_t(0);
  return int64_t(uint64_t(as_int(a[0])) >> k);
}

std::vector<Builtin> make_registry() {
  using K = Kind;
  std::vector<Builtin> r;
  auto add = [&](std::string name, Style st, std::vector<Kind> args, Kind res, BuiltinFn fn, bool comm = false,
                 Special sp = Special::None) {
    r.push_back(Builtin{std::move(name), st, std::move(args), res, fn, comm, sp});
  };
  // integers
  add("-", Style::Prefix, {K::Int}, K::Int, f_neg);
  add("+", Style::Infix, {K::Int, K::Int}, K::Int, f_add, true);
  add("-", Style::Infix, {K::Int, K::Int}, K::Int, f_sub);
  add("*", Style::Infix, {K::Int, K::Int}, K::Int, f_mul, true);
  add("add", Style::Call, {K::Int, K::Int}, K::Int, f_add, true);
  add("sub", Style::Call, {K::Int, K::Int}, K::Int, f_sub);
  add("mul", Style::Call, {K::Int, K::Int}, K::Int, f_mul, true);
  add("min", Style::Call, {K::Int, K::Int}, K::Int, f_min, true);
  add("max", Style::Call, {K::Int, K::Int}, K::Int, f_max, true);
  add("and", Style::Call, {K::Int, K::Int}, K::Int, f_and, true);
  add("or", Style::Call, {K::Int, K::Int}, K::Int, f_or, true);
  add("xor", Style::Call, {K::Int, K::Int}, K::Int, f_xor, true);
  add("~", Style::Prefix, {K::Int}, K::Int, f_not);
  add("shl", Style::Call, {K::Int, K::Int}, K::Int, f_shl);
  add("lshr", Style::Call, {K::Int, K::Int}, K::Int, f_lshr);
  add("ashr", Style::Call, {K::Int, K::Int}, K::Int, f_ashr);
  std::vector<Kind> k4{K::Int, K::Int, K::Int, K::Int};
  add("minOr", Style::Call, k4, K::Int, f_bound<bv::min_or>);
  add("maxOr", Style::Call, k4, K::Int, f_bound<bv::max_or>);
  add("minAnd", Style::Call, k4, K::Int, f_bound<bv::min_and>);
  add("maxAnd", Style::Call, k4, K::Int, f_bound<bv::max_and>);
  add("minXor", Style::Call, k4, K::Int, f_bound<bv::min_xor>);
  add("maxXor", Style::Call, k4, K::Int, f_bound<bv::max_xor>);
  add("minAndBuggy", Style::Call, k4, K::Int, f_bound<bv::min_and_buggy>);
  // booleans and control
  add("!", Style::Prefix, {K::Bool}, K::Bool, f_not_b);
  add("&&", Style::Infix, {K::Bool, K::Bool}, K::Bool, nullptr, true, Special::And);
  add("||", Style::Infix, {K::Bool, K::Bool}, K::Bool, nullptr, true, Special::Or);
  add("ite", Style::Call, {K::Bool, K::Any, K::Any}, K::Any, nullptr, false, Special::Ite);
  add("isBot", Style::Call, {K::Abs}, K::Bool, f_is_bot);
  add("isTop", Style::Call, {K::Abs}, K::Bool, f_is_top);
  add("isEmpty", Style::Call, {K::Abs}, K::Bool, f_is_empty);
  add("overflow_mul", Style::Call, {K::Abs, K::Abs}, K::Bool, f_overflow_mul);
  add("overflow_add", Style::Call, {K::Abs, K::Abs}, K::Bool, f_overflow<0>);
  add("overflow_sub", Style::Call, {K::Abs, K::Abs}, K::Bool, f_overflow<1>);
  // abstract value constructors
  add("pair", Style::Pair, {K::Int, K::Int}, K::Abs, f_pair_int);
  add("pair", Style::Pair, {K::CharSet, K::CharSet}, K::Abs, f_pair_cs);
  add("pair", Style::Pair, {K::Str, K::Str}, K::Abs, f_pair_str);
  add("splitJoinS", Style::Call, {K::Abs, K::Abs, K::Abs}, K::Abs, nullptr, false, Special::SplitJoinS);
  add("splitJoinW", Style::Call, {K::Abs, K::Abs, K::Abs}, K::Abs, nullptr, false, Special::SplitJoinW);
  add("shLoop", Style::Call, {K::Abs, K::Abs, K::Bits, K::Bits}, K::Abs, nullptr, false, Special::ShLoop);
  // character sets
  add("isSubset", Style::Call, {K::CharSet, K::CharSet}, K::Bool, f_is_subset);
  add("sizeLe1", Style::Call, {K::CharSet}, K::Bool, f_size_le1);
  add("containsSpace", Style::Call, {K::CharSet}, K::Bool, f_contains_space);
  add("removeSpace", Style::Call, {K::CharSet}, K::CharSet, f_remove_space);
  add("union", Style::Call, {K::CharSet, K::CharSet}, K::CharSet, f_union, true);
  add("inter", Style::Call, {K::CharSet, K::CharSet}, K::CharSet, f_inter, true);
  add("isNone", Style::Call, {K::CharSet}, K::Bool, f_is_none);
  add("lowerSet", Style::Call, {K::CharSet}, K::CharSet, f_case_set<true>);
  add("upperSet", Style::Call, {K::CharSet}, K::CharSet, f_case_set<false>);
  // strings
  add("trim", Style::Call, {K::Str}, K::Str, f_trim);
  add("trimStart", Style::Call, {K::Str}, K::Str, f_trim_start);
  add("trimEnd", Style::Call, {K::Str}, K::Str, f_trim_end);
  add("lcp", Style::Call, {K::Str, K::Str}, K::Str, f_lcp, true);
  add("lcs", Style::Call, {K::Str, K::Str}, K::Str, f_lcs, true);
  add("concat", Style::Call, {K::Str, K::Str}, K::Str, f_concat_str);
  add("lower", Style::Call, {K::Str}, K::Str, f_lower);
  add("upper", Style::Call, {K::Str}, K::Str, f_upper);
  add("charAt", Style::Call, {K::Str}, K::Str, f_char_at);
  add("hasIndex", Style::Call, {K::Str}, K::Bool, f_has_index);
  add("isEmptyStr", Style::Call, {K::Str}, K::Bool, f_is_empty_str);
  // string sets, lifted pointwise
  add("mapTrim", Style::Call, {K::Abs}, K::Abs, f_map_trim);
  add("mapLower", Style::Call, {K::Abs}, K::Abs, f_map_lower);
  add("mapUpper", Style::Call, {K::Abs}, K::Abs, f_map_upper);
  add("mapCharAt", Style::Call, {K::Abs}, K::Abs, f_map_char_at);
  add("mapConcat", Style::Call, {K::Abs, K::Abs}, K::Abs, f_map_concat);
  add("setContains", Style::Call, {K::Abs, K::Abs}, K::AbsBool, f_set_contains);
  // string hash
  add("sumset", Style::Call, {K::Abs, K::Abs}, K::Abs, f_sumset, true);
  add("hashUnion", Style::Call, {K::Abs, K::Abs}, K::Abs, f_hash_union, true);
  add("reverse", Style::Call, {K::Bits}, K::Bits, f_reverse);
  add("rotl", Style::Call, {K::Bits, K::Int}, K::Bits, f_rotl);
  add("rotr", Style::Call, {K::Bits, K::Int}, K::Bits, f_rotr);
  add("and", Style::Call, {K::Bits, K::Bits}, K::Bits, f_band, true);
  add("or", Style::Call, {K::Bits, K::Bits}, K::Bits, f_bor, true);
  add("xor", Style::Call, {K::Bits, K::Bits}, K::Bits, f_bxor, true);
  add("~", Style::Prefix, {K::Bits}, K::Bits, f_bnot);
  add("shl", Style::Call, {K::Bits, K::Int}, K::Bits, f_bshl);
  add("lshr", Style::Call, {K::Bits, K::Int}, K::Bits, f_blshr);
  return r;
}

}  // namespace

bool overflow_mul(const Ctx& c, Dom d, const Value& a1, const Value& a2) {
  EvalCtx ec;
  ec.c = &c;
  ec.dom = d;
  Value args[2] = {a1, a2};
  return as<bool>(f_overflow<2>(ec, args));
}

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> reg = make_registry();
  return reg;
}

int find_builtin(const std::string& name, const std::vector<Kind>& arg_kinds) {
  const auto& reg = builtins();
  for (size_t i = 0; i < reg.size(); ++i) {
    const auto& b = reg[i];
    if (b.name != name || b.args.size() != arg_kinds.size()) continue;
    bool ok = true;
    for (size_t j = 0; j < arg_kinds.size() && ok; ++j)
      ok = b.args[j] == Kind::Any || arg_kinds[j] == Kind::Any || b.args[j] == arg_kinds[j];
    if (ok && b.special == Special::Ite && arg_kinds[1] != arg_kinds[2]) ok = false;
    if (ok) return int(i);
  }
  return -1;
}

bool builtin_name_exists(const std::string& name) {
  for (const auto& b : builtins())
    if (b.name == name) return true;
  return false;
}

}  // namespace xfsynth

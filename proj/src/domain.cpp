#include "xfsynth/domain.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "json.hpp"
#include "xfsynth/bitvec.hpp"

namespace xfsynth {

size_t hash_value(const Value& v) {
  size_t h = v.index() * 0x9e3779b97f4a7c15ULL;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
        } else if constexpr (std::is_same_v<T, bool>) {
          h = hash_mix(h, x);
        } else if constexpr (std::is_same_v<T, int64_t>) {
          h = hash_mix(h, std::hash<int64_t>()(x));
        } else if constexpr (std::is_same_v<T, std::string>) {
          h = hash_mix(h, std::hash<std::string>()(x));
        } else if constexpr (std::is_same_v<T, CharSet>) {
          h = hash_mix(h, x.bits);
        } else if constexpr (std::is_same_v<T, Interval>) {
          h = hash_mix(hash_mix(hash_mix(h, x.bot), std::hash<int64_t>()(x.l)), std::hash<int64_t>()(x.r));
        } else if constexpr (std::is_same_v<T, Wrapped>) {
          h = hash_mix(hash_mix(hash_mix(h, x.kind), x.a), x.b);
        } else if constexpr (std::is_same_v<T, CIVal>) {
          h = hash_mix(hash_mix(hash_mix(h, x.bot), x.L), x.U);
        } else if constexpr (std::is_same_v<T, PSVal>) {
          h = hash_mix(hash_mix(hash_mix(h, x.bot), std::hash<std::string>()(x.pre)),
                       std::hash<std::string>()(x.suf));
        } else if constexpr (std::is_same_v<T, SHVal>) {
          h = hash_mix(h, std::hash<uint64_t>()(x.H));
        } else if constexpr (std::is_same_v<T, SSVal>) {
          h = hash_mix(h, x.top);
          for (const auto& s : x.S) h = hash_mix(h, std::hash<std::string>()(s));
        } else if constexpr (std::is_same_v<T, ABool>) {
          h = hash_mix(h, size_t(x.v));
        }
      },
      v);
  return h;
}

namespace {

struct DomName {
  Dom d;
  const char* name;
};
constexpr DomName kDomNames[] = {
    {Dom::IntervalZ, "interval_z"}, {Dom::UInt, "uint"}, {Dom::SInt, "sint"},
    {Dom::Wrapped, "wrapped"},      {Dom::CI, "ci"},     {Dom::PS, "ps"},
    {Dom::SH, "sh"},                {Dom::SS, "ssk"},    {Dom::CS, "cs"},
    {Dom::AbsBool, "absbool"},
};

int64_t parse_int_token(std::string t) {
  if (t == "+inf" || t == "inf") return kPosInf;
  if (t == "-inf") return kNegInf;
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  if (t.empty()) throw ConfigError("empty integer literal");
  int64_t v = 0;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'b' || t[1] == 'B')) {
    for (size_t i = 2; i < t.size(); ++i) {
      if (t[i] != '0' && t[i] != '1') throw ConfigError("bad binary literal: " + t);
      v = v * 2 + (t[i] - '0');
    }
  } else {
    for (char ch : t) {
      if (ch < '0' || ch > '9') throw ConfigError("bad integer literal: " + t);
      v = v * 10 + (ch - '0');
    }
  }
  return neg ? -v : v;
}

std::string trim_ws(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\n\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\n\r");
  return s.substr(a, b - a + 1);
}

std::string int_text(int64_t v) {
  if (v >= kPosInf) return "+inf";
  if (v <= kNegInf) return "-inf";
  return std::to_string(v);
}

std::pair<int64_t, int64_t> parse_pair(const std::string& text) {
  std::string t = trim_ws(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ConfigError("expected [l, r]: " + text);
  t = t.substr(1, t.size() - 2);
  auto comma = t.find(',');
  if (comma == std::string::npos) throw ConfigError("expected [l, r]: " + text);
  return {parse_int_token(trim_ws(t.substr(0, comma))), parse_int_token(trim_ws(t.substr(comma + 1)))};
}

uint32_t charset_from_json(const Ctx& c, const nlohmann::json& j) {
  uint32_t m = 0;
  for (const auto& e : j) {
    std::string s = e.get<std::string>();
    if (s.size() != 1) throw ConfigError("character set entries must be single characters");
    int i = c.sigma_index(s[0]);
    if (i < 0) throw ConfigError(std::string("character outside sigma: '") + s + "'");
    m |= uint32_t(1) << i;
  }
  return m;
}

nlohmann::json charset_to_json(const Ctx& c, uint32_t m) {
  nlohmann::json a = nlohmann::json::array();
  for (size_t i = 0; i < c.sigma.size(); ++i)
    if (m >> i & 1) a.push_back(std::string(1, c.sigma[i]));
  return a;
}

void check_string(const Ctx& c, const std::string& s) {
  for (char ch : s)
    if (c.sigma_index(ch) < 0) throw ConfigError(std::string("character outside sigma: '") + ch + "'");
}

int ss_capacity(const Ctx& c, Dom d) { return d == Dom::CS ? 1 : c.k; }

SSVal ss_norm(const Ctx& c, Dom d, std::vector<std::string> S) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  SSVal r;
  if (int(S.size()) > ss_capacity(c, d)) {
    r.top = true;
    return r;
  }
  r.S = std::move(S);
  return r;
}

bool izero_empty(const Ctx& c, const Interval& a) { return a.bot || a.l > c.N || a.r < -c.N || a.l > a.r; }

}  // namespace

const char* dom_name(Dom d) {
  for (const auto& e : kDomNames)
    if (e.d == d) return e.name;
  return "?";
}

Dom dom_from_name(const std::string& s) {
  for (const auto& e : kDomNames)
    if (s == e.name) return e.d;
  throw ConfigError("unknown domain: " + s);
}

bool is_string_domain(Dom d) {
  return d == Dom::CI || d == Dom::PS || d == Dom::SH || d == Dom::SS || d == Dom::CS;
}

bool is_bv_domain(Dom d) { return d == Dom::UInt || d == Dom::SInt || d == Dom::Wrapped; }

int Ctx::sigma_index(char ch) const {
  auto p = sigma.find(ch);
  return p == std::string::npos ? -1 : int(p);
}

uint32_t Ctx::chars_of(const std::string& s) const {
  uint32_t m = 0;
  for (char ch : s) {
    int i = sigma_index(ch);
    if (i >= 0) m |= uint32_t(1) << i;
  }
  return m;
}

int Ctx::hash_of_char(char ch) const {
  int i = sigma_index(ch);
  if (i < 0) return 0;
  return hash_index.empty() ? i : hash_index[i];
}

// Sums over character occurrences so that concatenation adds hashes.
int Ctx::hash_of(const std::string& s) const {
  int h = 0;
  for (char ch : s) h = (h + hash_of_char(ch)) % b;
  return h;
}

char Ctx::to_lower(char ch) const {
  for (auto [lo, up] : case_pairs)
    if (ch == up) return lo;
  return ch;
}

char Ctx::to_upper(char ch) const {
  for (auto [lo, up] : case_pairs)
    if (ch == lo) return up;
  return ch;
}

void Ctx::validate() const {
  if (N < 1) throw ConfigError("universe bound N must be >= 1");
  if (w < 1 || w > 8) throw ConfigError("bit width must be in 1..8");
  if (arith == Dom::Wrapped && w > 6) throw ConfigError("wrapped intervals support widths up to 6");
  if (sigma.size() < 2 || sigma.size() > 16) throw ConfigError("alphabet size must be in 2..16");
  for (size_t i = 0; i < sigma.size(); ++i)
    for (size_t j = i + 1; j < sigma.size(); ++j)
      if (sigma[i] == sigma[j]) throw ConfigError("duplicate character in alphabet");
  if (max_len < 1 || out_max_len < 1 || enum_len < 0) throw ConfigError("string length bounds must be positive");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (b < 1 || b > 64) throw ConfigError("hash range b must be in 1..64");
  if (!hash_index.empty() && hash_index.size() != sigma.size())
    throw ConfigError("hash table must give one index per alphabet character");
  for (auto [lo, up] : case_pairs)
    if (sigma_index(lo) < 0 || sigma_index(up) < 0) throw ConfigError("case pair uses a character outside sigma");
  if (char_index < 0) throw ConfigError("charAt index must be non-negative");
}

std::string lcp(const std::string& a, const std::string& b) {
  size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return a.substr(0, n);
}

std::string lcs(const std::string& a, const std::string& b) {
  size_t n = 0;
  while (n < a.size() && n < b.size() && a[a.size() - 1 - n] == b[b.size() - 1 - n]) ++n;
  return a.substr(a.size() - n);
}

std::string trim_start(const std::string& s) {
  size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

std::string trim_end(const std::string& s) {
  size_t n = s.size();
  while (n > 0 && s[n - 1] == ' ') --n;
  return s.substr(0, n);
}

std::string trim_spaces(const std::string& s) { return trim_end(trim_start(s)); }

bool starts_with(const std::string& s, const std::string& p) {
  return s.size() >= p.size() && s.compare(0, p.size(), p) == 0;
}

bool ends_with(const std::string& s, const std::string& p) {
  return s.size() >= p.size() && s.compare(s.size() - p.size(), p.size(), p) == 0;
}

// Ordered by length, then lexicographically by alphabet position.
std::vector<std::string> strings_upto(const Ctx& c, int len) {
  std::vector<std::string> out{""};
  size_t begin = 0;
  for (int l = 1; l <= len; ++l) {
    size_t end = out.size();
    for (size_t i = begin; i < end; ++i)
      for (char ch : c.sigma) out.push_back(out[i] + ch);
    begin = end;
  }
  return out;
}

Interval make_interval(int64_t l, int64_t r) {
  if (l > r) return Interval{};
  return Interval{false, l, r};
}

CIVal make_ci(uint32_t L, uint32_t U) {
  if ((L & ~U) != 0) return CIVal{};
  return CIVal{false, L, U};
}

Wrapped make_wrapped(const Ctx& c, uint64_t a, uint64_t b) {
  const uint64_t M = bv::mask(c.w);
  a &= M;
  b &= M;
  if (a == ((b + 1) & M)) return Wrapped{Wrapped::Top, 0, 0};
  return Wrapped{Wrapped::Pair, uint32_t(a), uint32_t(b)};
}

uint64_t wrapped_mask(const Ctx& c, const Wrapped& a) {
  const uint64_t n = uint64_t(1) << c.w;
  const uint64_t full = n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
  auto range = [&](uint64_t lo, uint64_t hi) {  // bits lo..hi inclusive
    uint64_t upto = hi + 1 == 64 ? ~uint64_t(0) : (uint64_t(1) << (hi + 1)) - 1;
    return upto & ~((uint64_t(1) << lo) - 1);
  };
  switch (a.kind) {
    case Wrapped::Bot: return 0;
    case Wrapped::Top: return full;
    case Wrapped::Pair:
      if (a.a <= a.b) return range(a.a, a.b);
      return range(0, a.b) | range(a.a, n - 1);
  }
  return 0;
}

// Minimal-cardinality arc covering the set; ties go to the smaller start.
Wrapped wrapped_alpha(const Ctx& c, uint64_t m) {
  const uint64_t n = uint64_t(1) << c.w;
  const uint64_t full = n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
  m &= full;
  if (m == 0) return Wrapped{};
  if (m == full) return Wrapped{Wrapped::Top, 0, 0};
  std::vector<uint64_t> el;
  for (uint64_t x = 0; x < n; ++x)
    if (m >> x & 1) el.push_back(x);
  uint64_t best_len = n + 1, best_a = 0, best_b = 0;
  for (size_t i = 0; i < el.size(); ++i) {
    uint64_t start = el[i];
    uint64_t end = el[(i + el.size() - 1) % el.size()];
    uint64_t len = ((end + n - start) % n) + 1;
    if (len < best_len) {
      best_len = len;
      best_a = start;
      best_b = end;
    }
  }
  return make_wrapped(c, best_a, best_b);
}

std::vector<Wrapped> split_at_zero(const Ctx& c, const Wrapped& a) {
  const uint32_t maxv = uint32_t(bv::mask(c.w));
  switch (a.kind) {
    case Wrapped::Bot: return {};
    case Wrapped::Top: {
      uint32_t half = uint32_t(1) << (c.w - 1);
      return {Wrapped{Wrapped::Pair, 0, half - 1}, Wrapped{Wrapped::Pair, half, maxv}};
    }
    case Wrapped::Pair:
      if (a.a <= a.b) return {a};
      return {Wrapped{Wrapped::Pair, a.a, maxv}, Wrapped{Wrapped::Pair, 0, a.b}};
  }
  return {};
}

std::vector<Interval> split_signed(const Ctx&, const Interval& a) {
  if (a.bot) return {};
  if (a.l < 0 && a.r >= 0) return {Interval{false, a.l, -1}, Interval{false, 0, a.r}};
  return {a};
}

std::vector<Value> enumerate_abstract(const Ctx& c, Dom d) {
  std::vector<Value> out;
  switch (d) {
    case Dom::IntervalZ: {
      out.push_back(Interval{});
      std::vector<int64_t> ends{kNegInf};
      for (int64_t x = -c.N; x <= c.N; ++x) ends.push_back(x);
      ends.push_back(kPosInf);
      for (size_t i = 0; i < ends.size(); ++i)
        for (size_t j = i; j < ends.size(); ++j) out.push_back(Interval{false, ends[i], ends[j]});
      break;
    }
    case Dom::UInt:
    case Dom::SInt: {
      bool s = d == Dom::SInt;
      out.push_back(Interval{});
      for (int64_t l = bv::min_value(c.w, s); l <= bv::max_value(c.w, s); ++l)
        for (int64_t r = l; r <= bv::max_value(c.w, s); ++r) out.push_back(Interval{false, l, r});
      break;
    }
    case Dom::Wrapped: {
      out.push_back(Wrapped{});
      out.push_back(Wrapped{Wrapped::Top, 0, 0});
      const uint64_t n = uint64_t(1) << c.w;
      for (uint64_t a = 0; a < n; ++a)
        for (uint64_t b = 0; b < n; ++b)
          if (a != (b + 1) % n) out.push_back(Wrapped{Wrapped::Pair, uint32_t(a), uint32_t(b)});
      break;
    }
    case Dom::CI: {
      out.push_back(CIVal{});
      uint32_t full = c.sigma_mask();
      for (uint32_t L = 0; L <= full; ++L)
        for (uint32_t U = 0; U <= full; ++U)
          if ((L & ~U) == 0) out.push_back(CIVal{false, L, U});
      break;
    }
    case Dom::PS: {
      out.push_back(PSVal{});
      auto strs = strings_upto(c, c.enum_len);
      for (const auto& p : strs)
        for (const auto& s : strs) out.push_back(PSVal{false, p, s});
      break;
    }
    case Dom::SH: {
      uint64_t n = c.b == 64 ? 0 : (uint64_t(1) << c.b);
      if (c.b > 16) throw ConfigError("SH enumeration supports b <= 16");
      for (uint64_t H = 0; H < n; ++H) out.push_back(SHVal{H});
      break;
    }
    case Dom::SS:
    case Dom::CS: {
      int cap = ss_capacity(c, d);
      auto strs = strings_upto(c, c.enum_len);
      std::sort(strs.begin(), strs.end());
      out.push_back(SSVal{});
      std::vector<std::string> cur;
      std::function<void(size_t)> rec = [&](size_t from) {
        for (size_t i = from; i < strs.size(); ++i) {
          cur.push_back(strs[i]);
          out.push_back(SSVal{false, cur});
          if (int(cur.size()) < cap) rec(i + 1);
          cur.pop_back();
        }
      };
      rec(0);
      out.push_back(SSVal{true, {}});
      break;
    }
    case Dom::AbsBool:
      for (AB v : {AB::Bot, AB::True, AB::False, AB::Top}) out.push_back(ABool{v});
      break;
  }
  return out;
}

std::vector<Value> concrete_universe(const Ctx& c, Dom d, bool output) {
  std::vector<Value> out;
  switch (d) {
    case Dom::IntervalZ:
      for (int64_t x = -c.N; x <= c.N; ++x) out.push_back(x);
      break;
    case Dom::UInt:
    case Dom::SInt: {
      bool s = d == Dom::SInt;
      for (int64_t x = bv::min_value(c.w, s); x <= bv::max_value(c.w, s); ++x) out.push_back(x);
      break;
    }
    case Dom::Wrapped:
      for (int64_t x = 0; x <= int64_t(bv::mask(c.w)); ++x) out.push_back(x);
      break;
    case Dom::CI:
    case Dom::PS:
    case Dom::SH:
    case Dom::SS:
    case Dom::CS:
      for (auto& s : strings_upto(c, output ? c.out_max_len : c.max_len)) out.push_back(std::move(s));
      break;
    case Dom::AbsBool:
      out.push_back(false);
      out.push_back(true);
      break;
  }
  return out;
}

bool gamma_contains(const Ctx& c, Dom d, const Value& a, const Value& x) {
  switch (d) {
    case Dom::IntervalZ: {
      const auto& v = as<Interval>(a);
      int64_t y = as_int(x);
      return !v.bot && y >= -c.N && y <= c.N && v.l <= y && y <= v.r;
    }
    case Dom::UInt:
    case Dom::SInt: {
      const auto& v = as<Interval>(a);
      int64_t y = as_int(x);
      return !v.bot && v.l <= y && y <= v.r;
    }
    case Dom::Wrapped: {
      const auto& v = as<Wrapped>(a);
      uint64_t y = uint64_t(as_int(x));
      if (v.kind == Wrapped::Bot) return false;
      if (v.kind == Wrapped::Top) return true;
      if (v.a <= v.b) return v.a <= y && y <= v.b;
      return y <= v.b || y >= v.a;
    }
    case Dom::CI: {
      const auto& v = as<CIVal>(a);
      if (v.bot) return false;
      uint32_t m = c.chars_of(as<std::string>(x));
      return (v.L & ~m) == 0 && (m & ~v.U) == 0;
    }
    case Dom::PS: {
      const auto& v = as<PSVal>(a);
      const auto& s = as<std::string>(x);
      return !v.bot && starts_with(s, v.pre) && ends_with(s, v.suf);
    }
    case Dom::SH: {
      const auto& v = as<SHVal>(a);
      return (v.H >> c.hash_of(as<std::string>(x))) & 1;
    }
    case Dom::SS:
    case Dom::CS: {
      const auto& v = as<SSVal>(a);
      if (v.top) return true;
      return std::binary_search(v.S.begin(), v.S.end(), as<std::string>(x));
    }
    case Dom::AbsBool: {
      AB v = as<ABool>(a).v;
      bool y = as<bool>(x);
      return v == AB::Top || (y && v == AB::True) || (!y && v == AB::False);
    }
  }
  return false;
}

bool leq(const Ctx& c, Dom d, const Value& a, const Value& b) {
  switch (d) {
    case Dom::IntervalZ: {
      const auto& x = as<Interval>(a);
      const auto& y = as<Interval>(b);
      if (izero_empty(c, x)) return true;
      if (izero_empty(c, y)) return false;
      int64_t xl = std::max(x.l, -c.N), xr = std::min(x.r, c.N);
      int64_t yl = std::max(y.l, -c.N), yr = std::min(y.r, c.N);
      return yl <= xl && xr <= yr;
    }
    case Dom::UInt:
    case Dom::SInt: {
      const auto& x = as<Interval>(a);
      const auto& y = as<Interval>(b);
      if (x.bot) return true;
      if (y.bot) return false;
      return y.l <= x.l && x.r <= y.r;
    }
    case Dom::Wrapped: {
      uint64_t mx = wrapped_mask(c, as<Wrapped>(a)), my = wrapped_mask(c, as<Wrapped>(b));
      return (mx & ~my) == 0;
    }
    case Dom::CI: {
      const auto& x = as<CIVal>(a);
      const auto& y = as<CIVal>(b);
      if (x.bot) return true;
      if (y.bot) return false;
      return (y.L & ~x.L) == 0 && (x.U & ~y.U) == 0;
    }
    case Dom::PS: {
      const auto& x = as<PSVal>(a);
      const auto& y = as<PSVal>(b);
      if (x.bot) return true;
      if (y.bot) return false;
      return starts_with(x.pre, y.pre) && ends_with(x.suf, y.suf);
    }
    case Dom::SH:
      return (as<SHVal>(a).H & ~as<SHVal>(b).H) == 0;
    case Dom::SS:
    case Dom::CS: {
      const auto& x = as<SSVal>(a);
      const auto& y = as<SSVal>(b);
      if (y.top) return true;
      if (x.top) return false;
      return std::includes(y.S.begin(), y.S.end(), x.S.begin(), x.S.end());
    }
    case Dom::AbsBool: {
      AB x = as<ABool>(a).v, y = as<ABool>(b).v;
      return x == AB::Bot || y == AB::Top || x == y;
    }
  }
  return false;
}

Value join(const Ctx& c, Dom d, const Value& a, const Value& b) {
  switch (d) {
    case Dom::IntervalZ:
    case Dom::UInt:
    case Dom::SInt: {
      const auto& x = as<Interval>(a);
      const auto& y = as<Interval>(b);
      if (x.bot) return y;
      if (y.bot) return x;
      return Interval{false, std::min(x.l, y.l), std::max(x.r, y.r)};
    }
    case Dom::Wrapped:
      return wrapped_alpha(c, wrapped_mask(c, as<Wrapped>(a)) | wrapped_mask(c, as<Wrapped>(b)));
    case Dom::CI: {
      const auto& x = as<CIVal>(a);
      const auto& y = as<CIVal>(b);
      if (x.bot) return y;
      if (y.bot) return x;
      return CIVal{false, x.L & y.L, x.U | y.U};
    }
    case Dom::PS: {
      const auto& x = as<PSVal>(a);
      const auto& y = as<PSVal>(b);
      if (x.bot) return y;
      if (y.bot) return x;
      return PSVal{false, lcp(x.pre, y.pre), lcs(x.suf, y.suf)};
    }
    case Dom::SH:
      return SHVal{as<SHVal>(a).H | as<SHVal>(b).H};
    case Dom::SS:
    case Dom::CS: {
      const auto& x = as<SSVal>(a);
      const auto& y = as<SSVal>(b);
      if (x.top || y.top) return SSVal{true, {}};
      std::vector<std::string> u = x.S;
      u.insert(u.end(), y.S.begin(), y.S.end());
      return ss_norm(c, d, std::move(u));
    }
    case Dom::AbsBool: {
      AB x = as<ABool>(a).v, y = as<ABool>(b).v;
      if (x == AB::Bot) return ABool{y};
      if (y == AB::Bot || x == y) return ABool{x};
      return ABool{AB::Top};
    }
  }
  return {};
}

Value bottom(const Ctx&, Dom d) {
  switch (d) {
    case Dom::IntervalZ:
    case Dom::UInt:
    case Dom::SInt: return Interval{};
    case Dom::Wrapped: return Wrapped{};
    case Dom::CI: return CIVal{};
    case Dom::PS: return PSVal{};
    case Dom::SH: return SHVal{0};
    case Dom::SS:
    case Dom::CS: return SSVal{};
    case Dom::AbsBool: return ABool{AB::Bot};
  }
  return {};
}

Value top(const Ctx& c, Dom d) {
  switch (d) {
    case Dom::IntervalZ: return Interval{false, kNegInf, kPosInf};
    case Dom::UInt:
    case Dom::SInt: {
      bool s = d == Dom::SInt;
      return Interval{false, bv::min_value(c.w, s), bv::max_value(c.w, s)};
    }
    case Dom::Wrapped: return Wrapped{Wrapped::Top, 0, 0};
    case Dom::CI: return CIVal{false, 0, c.sigma_mask()};
    case Dom::PS: return PSVal{false, "", ""};
    case Dom::SH: return SHVal{c.b == 64 ? ~uint64_t(0) : (uint64_t(1) << c.b) - 1};
    case Dom::SS:
    case Dom::CS: return SSVal{true, {}};
    case Dom::AbsBool: return ABool{AB::Top};
  }
  return {};
}

bool is_bot(const Ctx&, Dom d, const Value& a) {
  switch (d) {
    case Dom::IntervalZ:
    case Dom::UInt:
    case Dom::SInt: return as<Interval>(a).bot;
    case Dom::Wrapped: return as<Wrapped>(a).kind == Wrapped::Bot;
    case Dom::CI: return as<CIVal>(a).bot;
    case Dom::PS: return as<PSVal>(a).bot;
    case Dom::SH: return as<SHVal>(a).H == 0;
    case Dom::SS:
    case Dom::CS: return !as<SSVal>(a).top && as<SSVal>(a).S.empty();
    case Dom::AbsBool: return as<ABool>(a).v == AB::Bot;
  }
  return false;
}

bool is_top(const Ctx& c, Dom d, const Value& a) {
  switch (d) {
    case Dom::IntervalZ: {
      const auto& v = as<Interval>(a);
      return !v.bot && v.l <= -c.N && v.r >= c.N;
    }
    case Dom::UInt:
    case Dom::SInt:
      return a == top(c, d);
    case Dom::Wrapped: return as<Wrapped>(a).kind == Wrapped::Top;
    case Dom::CI: {
      const auto& v = as<CIVal>(a);
      return !v.bot && v.L == 0 && v.U == c.sigma_mask();
    }
    case Dom::PS: {
      const auto& v = as<PSVal>(a);
      return !v.bot && v.pre.empty() && v.suf.empty();
    }
    case Dom::SH: return a == top(c, d);
    case Dom::SS:
    case Dom::CS: return as<SSVal>(a).top;
    case Dom::AbsBool: return as<ABool>(a).v == AB::Top;
  }
  return false;
}

bool has_galois(Dom d) { return d != Dom::Wrapped; }

Value alpha_single(const Ctx& c, Dom d, const Value& x) {
  switch (d) {
    case Dom::IntervalZ:
    case Dom::UInt:
    case Dom::SInt: return Interval{false, as_int(x), as_int(x)};
    case Dom::Wrapped: return Wrapped{Wrapped::Pair, uint32_t(as_int(x)), uint32_t(as_int(x))};
    case Dom::CI: {
      uint32_t m = c.chars_of(as<std::string>(x));
      return CIVal{false, m, m};
    }
    case Dom::PS: return PSVal{false, as<std::string>(x), as<std::string>(x)};
    case Dom::SH: return SHVal{uint64_t(1) << c.hash_of(as<std::string>(x))};
    case Dom::SS:
    case Dom::CS: return ss_norm(c, d, {as<std::string>(x)});
    case Dom::AbsBool: return ABool{as<bool>(x) ? AB::True : AB::False};
  }
  return {};
}

Value alpha_set(const Ctx& c, Dom d, const std::vector<Value>& xs) {
  if (d == Dom::Wrapped) {
    uint64_t m = 0;
    for (const auto& x : xs) m |= uint64_t(1) << as_int(x);
    return wrapped_alpha(c, m);
  }
  Value acc = bottom(c, d);
  for (const auto& x : xs) acc = join(c, d, acc, alpha_single(c, d, x));
  return acc;
}

std::vector<Value> atoms(const Ctx&, Dom d, const Value& a) {
  std::vector<Value> out;
  switch (d) {
    case Dom::CI: {
      const auto& v = as<CIVal>(a);
      if (v.bot) break;
      uint32_t free = v.U & ~v.L;
      // enumerate subsets of free in increasing numeric order
      for (uint32_t s = 0;; s = (s - free) & free) {
        out.push_back(CIVal{false, v.L | s, v.L | s});
        if (s == free) break;
      }
      std::sort(out.begin(), out.end(), [](const Value& x, const Value& y) {
        return std::get<CIVal>(x).L < std::get<CIVal>(y).L;
      });
      break;
    }
    case Dom::SH: {
      uint64_t H = as<SHVal>(a).H;
      for (int i = 0; i < 64; ++i)
        if (H >> i & 1) out.push_back(SHVal{uint64_t(1) << i});
      break;
    }
    default:
      break;
  }
  return out;
}

std::string format_value(const Ctx& c, Dom d, const Value& a) {
  switch (d) {
    case Dom::IntervalZ:
    case Dom::UInt:
    case Dom::SInt: {
      const auto& v = as<Interval>(a);
      if (v.bot) return "bot";
      return "[" + int_text(v.l) + ", " + int_text(v.r) + "]";
    }
    case Dom::Wrapped: {
      const auto& v = as<Wrapped>(a);
      if (v.kind == Wrapped::Bot) return "bot";
      if (v.kind == Wrapped::Top) return "top";
      return "[" + std::to_string(v.a) + ", " + std::to_string(v.b) + "]";
    }
    case Dom::CI: {
      const auto& v = as<CIVal>(a);
      if (v.bot) return "bot";
      auto j = nlohmann::json::array({charset_to_json(c, v.L), charset_to_json(c, v.U)});
      return "ci:" + j.dump();
    }
    case Dom::PS: {
      const auto& v = as<PSVal>(a);
      if (v.bot) return "bot";
      auto j = nlohmann::json::array({v.pre, v.suf});
      return "ps:" + j.dump();
    }
    case Dom::SH: {
      uint64_t H = as<SHVal>(a).H;
      if (H == 0) return "bot";
      if (a == top(c, d)) return "top";
      nlohmann::json j = nlohmann::json::array();
      for (int i = 0; i < 64; ++i)
        if (H >> i & 1) j.push_back(i);
      return "sh:" + j.dump();
    }
    case Dom::SS:
    case Dom::CS: {
      const auto& v = as<SSVal>(a);
      if (v.top) return "top";
      if (v.S.empty()) return "bot";
      nlohmann::json j = v.S;
      return "ssk:" + j.dump();
    }
    case Dom::AbsBool:
      switch (as<ABool>(a).v) {
        case AB::Bot: return "BoolBot";
        case AB::True: return "BoolTrue";
        case AB::False: return "BoolFalse";
        case AB::Top: return "BoolTop";
      }
  }
  return "?";
}

Value parse_value(const Ctx& c, Dom d, const std::string& text) {
  std::string t = trim_ws(text);
  if (t == "bot") return bottom(c, d);
  if (t == "top") return top(c, d);
  auto tagged = [&](const char* tag) -> nlohmann::json {
    std::string p = std::string(tag) + ":";
    if (!starts_with(t, p)) throw ConfigError(std::string("expected ") + tag + ":... value, got " + text);
    try {
      return nlohmann::json::parse(t.substr(p.size()));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed value " + text + ": " + e.what());
    }
  };
  switch (d) {
    case Dom::IntervalZ: {
      auto [l, r] = parse_pair(t);
      if (l > r) throw ConfigError("interval with l > r: " + text);
      return Interval{false, l, r};
    }
    case Dom::UInt:
    case Dom::SInt: {
      auto [l, r] = parse_pair(t);
      bool s = d == Dom::SInt;
      if (!bv::fits(l, c.w, s) || !bv::fits(r, c.w, s) || l > r)
        throw ConfigError("bitvector interval out of range: " + text);
      return Interval{false, l, r};
    }
    case Dom::Wrapped: {
      auto [a, b] = parse_pair(t);
      int64_t M = int64_t(bv::mask(c.w));
      if (a < 0 || b < 0 || a > M || b > M) throw ConfigError("wrapped endpoint out of range: " + text);
      if (a == ((b + 1) & M)) throw ConfigError("wrapped pair [a, b] requires a != b+1: " + text);
      return Wrapped{Wrapped::Pair, uint32_t(a), uint32_t(b)};
    }
    case Dom::CI: {
      auto j = tagged("ci");
      if (!j.is_array() || j.size() != 2) throw ConfigError("ci value needs [L, U]: " + text);
      uint32_t L = charset_from_json(c, j[0]), U = charset_from_json(c, j[1]);
      if ((L & ~U) != 0) throw ConfigError("ci value needs L subset of U: " + text);
      return CIVal{false, L, U};
    }
    case Dom::PS: {
      auto j = tagged("ps");
      if (!j.is_array() || j.size() != 2) throw ConfigError("ps value needs [pre, suf]: " + text);
      PSVal v{false, j[0].get<std::string>(), j[1].get<std::string>()};
      check_string(c, v.pre);
      check_string(c, v.suf);
      return v;
    }
    case Dom::SH: {
      auto j = tagged("sh");
      uint64_t H = 0;
      for (const auto& e : j) {
        int i = e.get<int>();
        if (i < 0 || i >= c.b) throw ConfigError("hash value out of range: " + text);
        H |= uint64_t(1) << i;
      }
      return SHVal{H};
    }
    case Dom::SS:
    case Dom::CS: {
      auto j = tagged("ssk");
      std::vector<std::string> S;
      for (const auto& e : j) {
        S.push_back(e.get<std::string>());
        check_string(c, S.back());
      }
      auto v = ss_norm(c, d, S);
      if (v.top) throw ConfigError("string set exceeds capacity: " + text);
      return v;
    }
    case Dom::AbsBool:
      if (t == "BoolBot") return ABool{AB::Bot};
      if (t == "BoolTrue") return ABool{AB::True};
      if (t == "BoolFalse") return ABool{AB::False};
      if (t == "BoolTop") return ABool{AB::Top};
      throw ConfigError("unknown abstract boolean: " + text);
  }
  throw ConfigError("cannot parse value: " + text);
}

std::string format_concrete(const Value& x) {
  if (auto p = std::get_if<int64_t>(&x)) return std::to_string(*p);
  if (auto p = std::get_if<bool>(&x)) return *p ? "true" : "false";
  if (auto p = std::get_if<std::string>(&x)) return nlohmann::json(*p).dump();
  return "?";
}

Value parse_concrete(Dom d, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("malformed concrete value: " + text);
  }
  if (d == Dom::AbsBool) {
    if (!j.is_boolean()) throw ConfigError("expected a boolean: " + text);
    return j.get<bool>();
  }
  if (is_string_domain(d)) {
    if (!j.is_string()) throw ConfigError("expected a string: " + text);
    return j.get<std::string>();
  }
  if (!j.is_number_integer()) throw ConfigError("expected an integer: " + text);
  return j.get<int64_t>();
}

}  // namespace xfsynth

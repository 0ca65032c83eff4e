#include <cctype>
#include <sstream>

#include "xfsynth/bitvec.hpp"
#include "xfsynth/term.hpp"

namespace xfsynth {

namespace {

constexpr const char* kKindNames[] = {"int", "bool", "charset", "string", "abs", "absbool", "bits", "any"};
constexpr const char* kSlotNames[] = {"a", "a1", "a2", "r", "c", "one", "i"};

Kind slot_kind(int slot) {
  switch (slot) {
    case kA:
    case kA1:
    case kA2: return Kind::Abs;
    case kI: return Kind::Int;
    default: return Kind::Bits;
  }
}

}  // namespace

const char* kind_name(Kind k) { return kKindNames[int(k)]; }

Kind kind_from_name(const std::string& s) {
  for (int i = 0; i < int(Kind::Any); ++i)
    if (s == kKindNames[i]) return Kind(i);
  throw ConfigError("unknown sort kind: " + s);
}

int slot_of(const std::string& name) {
  for (int i = 0; i < kNumSlots; ++i)
    if (name == kSlotNames[i]) return i;
  return -1;
}

const char* slot_name(int slot) { return kSlotNames[slot]; }

bool valid_field(Dom d, char f) {
  switch (d) {
    case Dom::IntervalZ:
    case Dom::UInt:
    case Dom::SInt:
    case Dom::Wrapped: return f == 'l' || f == 'r';
    case Dom::CI: return f == 'l' || f == 'u';
    case Dom::PS: return f == 'p' || f == 's';
    default: return false;
  }
}

Kind proj_kind(Dom d, char f) {
  if (!valid_field(d, f)) throw ConfigError(std::string("no field '") + f + "' on " + dom_name(d) + " values");
  if (d == Dom::CI) return Kind::CharSet;
  if (d == Dom::PS) return Kind::Str;
  return Kind::Int;
}

TermP make_op(int builtin, std::vector<TermP> kids) {
  auto t = std::make_shared<Term>();
  const Builtin& b = builtins()[builtin];
  t->tag = Term::Op;
  t->builtin = builtin;
  int d = 0;
  for (const auto& k : kids) d = std::max(d, k->depth);
  t->depth = d + 1;
  t->kind = b.result == Kind::Any ? kids.at(1)->kind : b.result;
  t->kids = std::move(kids);
  return t;
}

TermP make_var(int slot, Kind k) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Var;
  t->slot = slot;
  t->kind = k;
  return t;
}

TermP make_proj(int slot, char field, Kind k) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Proj;
  t->slot = slot;
  t->field = field;
  t->kind = k;
  return t;
}

TermP make_lit(std::string text, Value v, LitDyn dyn, Kind k) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Lit;
  t->text = std::move(text);
  t->lit = std::move(v);
  t->dyn = dyn;
  t->kind = k;
  return t;
}

TermP make_hole(std::string name, int index, Kind k) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Hole;
  t->text = std::move(name);
  t->hole = index;
  t->kind = k;
  return t;
}

// ---------------------------------------------------------------- printing

namespace {

bool needs_parens_under_prefix(const Term& k) {
  if (k.tag == Term::Op && builtins()[k.builtin].style == Style::Infix) return true;
  if (k.tag == Term::Lit && !k.text.empty() && (std::isdigit(uint8_t(k.text[0])) || k.text[0] == '-' || k.text[0] == '+'))
    return true;
  return false;
}

void print_to(const Term& t, std::string& out) {
  switch (t.tag) {
    case Term::Var: out += slot_name(t.slot); return;
    case Term::Proj:
      out += slot_name(t.slot);
      out += '.';
      out += t.field;
      return;
    case Term::Lit: out += t.text; return;
    case Term::Hole:
      out += '?';
      out += t.text;
      return;
    case Term::Op: break;
  }
  const Builtin& b = builtins()[t.builtin];
  switch (b.style) {
    case Style::Call:
      out += b.name;
      out += '(';
      for (size_t i = 0; i < t.kids.size(); ++i) {
        if (i) out += ", ";
        print_to(*t.kids[i], out);
      }
      out += ')';
      return;
    case Style::Prefix:
      out += b.name;
      if (needs_parens_under_prefix(*t.kids[0])) {
        out += '(';
        print_to(*t.kids[0], out);
        out += ')';
      } else {
        print_to(*t.kids[0], out);
      }
      return;
    case Style::Infix:
      for (size_t i = 0; i < 2; ++i) {
        if (i) out += " " + b.name + " ";
        const Term& k = *t.kids[i];
        bool p = k.tag == Term::Op && builtins()[k.builtin].style == Style::Infix;
        if (p) out += '(';
        print_to(k, out);
        if (p) out += ')';
      }
      return;
    case Style::Pair:
      out += '[';
      print_to(*t.kids[0], out);
      out += ", ";
      print_to(*t.kids[1], out);
      out += ']';
      return;
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::string s;
  print_to(t, s);
  return s;
}

nlohmann::json term_to_json(const Term& t) {
  using nlohmann::json;
  switch (t.tag) {
    case Term::Var: return json{{"var", slot_name(t.slot)}};
    case Term::Proj: return json{{"proj", std::string(slot_name(t.slot)) + "." + t.field}};
    case Term::Lit: return json{{"lit", t.text}};
    case Term::Hole: return json{{"hole", t.text}};
    case Term::Op: break;
  }
  json args = json::array();
  for (const auto& k : t.kids) args.push_back(term_to_json(*k));
  return json{{"op", builtins()[t.builtin].name}, {"args", args}};
}

bool terms_equal(const Term& a, const Term& b) {
  if (a.tag != b.tag || a.kind != b.kind) return false;
  switch (a.tag) {
    case Term::Var: return a.slot == b.slot;
    case Term::Proj: return a.slot == b.slot && a.field == b.field;
    case Term::Lit: return a.text == b.text && a.dyn == b.dyn && a.lit == b.lit;
    case Term::Hole: return a.hole == b.hole && a.text == b.text;
    case Term::Op: break;
  }
  if (a.builtin != b.builtin || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!terms_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Tok {
  enum T { Ident, Num, Str, Tagged, Punct, End } t;
  std::string s;
  size_t pos;
};

bool ident_char(char c) { return std::isalnum(uint8_t(c)) || c == '_'; }

std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  size_t i = 0, n = src.size();
  auto operand_end = [&]() {
    if (out.empty()) return false;
    const Tok& p = out.back();
    if (p.t == Tok::Punct) return p.s == ")" || p.s == "]" || p.s == "}";
    return true;
  };
  while (i < n) {
    char c = src[i];
    if (std::isspace(uint8_t(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if ((c == '+' || c == '-') && !operand_end()) {
      if (src.compare(i + 1, 3, "inf") == 0 && (i + 4 >= n || !ident_char(src[i + 4]))) {
        out.push_back({Tok::Num, src.substr(i, 4), start});
        i += 4;
        continue;
      }
      if (c == '-' && i + 1 < n && std::isdigit(uint8_t(src[i + 1]))) {
        size_t j = i + 1;
        while (j < n && ident_char(src[j])) ++j;
        out.push_back({Tok::Num, src.substr(i, j - i), start});
        i = j;
        continue;
      }
    }
    if (std::isdigit(uint8_t(c))) {
      size_t j = i;
      while (j < n && ident_char(src[j])) ++j;
      out.push_back({Tok::Num, src.substr(i, j - i), start});
      i = j;
      continue;
    }
    if (std::isalpha(uint8_t(c)) || c == '_') {
      size_t j = i;
      while (j < n && ident_char(src[j])) ++j;
      std::string id = src.substr(i, j - i);
      if (j < n && src[j] == ':' && (id == "ci" || id == "ps" || id == "sh" || id == "ssk")) {
        // tagged abstract literal: consume a balanced bracket group
        size_t k = j + 1;
        if (k >= n || src[k] != '[') throw ConfigError("expected '[' after " + id + ": at offset " + std::to_string(k));
        int depth = 0;
        bool in_str = false;
        for (; k < n; ++k) {
          char d = src[k];
          if (in_str) {
            if (d == '\\') ++k;
            else if (d == '"') in_str = false;
            continue;
          }
          if (d == '"') in_str = true;
          else if (d == '[') ++depth;
          else if (d == ']' && --depth == 0) break;
        }
        if (k >= n) throw ConfigError("unterminated literal at offset " + std::to_string(start));
        out.push_back({Tok::Tagged, src.substr(i, k + 1 - i), start});
        i = k + 1;
        continue;
      }
      out.push_back({Tok::Ident, id, start});
      i = j;
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      while (j < n && src[j] != '"') j += src[j] == '\\' ? 2 : 1;
      if (j >= n) throw ConfigError("unterminated string at offset " + std::to_string(start));
      out.push_back({Tok::Str, src.substr(i, j + 1 - i), start});
      i = j + 1;
      continue;
    }
    if ((c == '&' || c == '|') && i + 1 < n && src[i + 1] == c) {
      out.push_back({Tok::Punct, src.substr(i, 2), start});
      i += 2;
      continue;
    }
    if (std::string("()[]{},.?+-*~!").find(c) != std::string::npos) {
      out.push_back({Tok::Punct, std::string(1, c), start});
      ++i;
      continue;
    }
    throw ConfigError(std::string("unexpected character '") + c + "' at offset " + std::to_string(i));
  }
  out.push_back({Tok::End, "", n});
  return out;
}

class Parser {
 public:
  Parser(const std::string& src, const ParseScope& sc) : src_(src), toks_(lex(src)), sc_(sc) {}

  TermP parse_all() {
    TermP t = expr();
    if (peek().t != Tok::End) fail("trailing input");
    return t;
  }

 private:
  const std::string& src_;
  std::vector<Tok> toks_;
  size_t p_ = 0;
  const ParseScope& sc_;

  const Tok& peek() const { return toks_[p_]; }
  Tok next() { return toks_[p_++]; }
  bool is_punct(const char* s) const { return peek().t == Tok::Punct && peek().s == s; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("term parse error at offset " + std::to_string(peek().pos) + ": " + msg + " in \"" + src_ + "\"");
  }
  void expect(const char* s) {
    if (!is_punct(s)) fail(std::string("expected '") + s + "'");
    ++p_;
  }

  TermP op(const std::string& name, std::vector<TermP> kids) {
    std::vector<Kind> ks;
    for (const auto& k : kids) ks.push_back(k->kind);
    int b = find_builtin(name, ks);
    if (b < 0) {
      std::string sig = name + "(";
      for (size_t i = 0; i < ks.size(); ++i) sig += (i ? ", " : "") + std::string(kind_name(ks[i]));
      fail("no builtin matches " + sig + ")");
    }
    return make_op(b, std::move(kids));
  }

  TermP expr() {
    TermP lhs = unary();
    if (peek().t == Tok::Punct) {
      std::string s = peek().s;
      if (s == "+" || s == "-" || s == "*" || s == "&&" || s == "||") {
        ++p_;
        TermP rhs = unary();
        return op(s, {lhs, rhs});
      }
    }
    return lhs;
  }

  TermP unary() {
    if (peek().t == Tok::Punct && (peek().s == "-" || peek().s == "~" || peek().s == "!")) {
      std::string s = next().s;
      TermP k = unary();
      return op(s, {k});
    }
    return primary();
  }

  TermP primary() {
    const Tok t = peek();
    if (t.t == Tok::Punct) {
      if (t.s == "(") {
        ++p_;
        TermP e = expr();
        expect(")");
        return e;
      }
      if (t.s == "[") {
        ++p_;
        TermP x = expr();
        expect(",");
        TermP y = expr();
        expect("]");
        return op("pair", {x, y});
      }
      if (t.s == "{") return charset();
      if (t.s == "?") {
        ++p_;
        if (peek().t != Tok::Ident) fail("expected hole name");
        std::string name = next().s;
        if (!sc_.holes) fail("holes are not allowed here");
        for (size_t i = 0; i < sc_.holes->size(); ++i)
          if ((*sc_.holes)[i].name == name) return make_hole(name, int(i), (*sc_.holes)[i].kind);
        fail("undeclared hole ?" + name);
      }
      fail("unexpected '" + t.s + "'");
    }
    if (t.t == Tok::End) fail("unexpected end of input");
    ++p_;
    if (t.t == Tok::Num) return number(t.s);
    if (t.t == Tok::Str) {
      std::string v;
      try {
        v = nlohmann::json::parse(t.s).get<std::string>();
      } catch (const nlohmann::json::exception&) {
        fail("bad string literal");
      }
      return make_lit(nlohmann::json(v).dump(), v, LitDyn::Plain, Kind::Str);
    }
    if (t.t == Tok::Tagged) {
      if (!sc_.ctx) fail("abstract literal needs a domain context");
      Value v = parse_value(*sc_.ctx, sc_.dom, t.s);
      return make_lit(t.s, v, LitDyn::Plain, Kind::Abs);
    }
    // identifiers
    const std::string& id = t.s;
    if (is_punct("(")) {
      ++p_;
      std::vector<TermP> kids;
      if (!is_punct(")")) {
        kids.push_back(expr());
        while (is_punct(",")) {
          ++p_;
          kids.push_back(expr());
        }
      }
      expect(")");
      return op(id, std::move(kids));
    }
    int slot = slot_of(id);
    if (slot >= 0) {
      if (is_punct(".")) {
        ++p_;
        if (peek().t != Tok::Ident || peek().s.size() != 1) fail("expected a one-letter field");
        char f = next().s[0];
        if (slot > kA2) fail("only abstract parameters have fields");
        if (!valid_field(sc_.dom, f)) fail(std::string("no field '") + f + "' for domain " + dom_name(sc_.dom));
        return make_proj(slot, f, proj_kind(sc_.dom, f));
      }
      return make_var(slot, slot_kind(slot));
    }
    return keyword(id);
  }

  TermP charset() {
    expect("{");
    std::vector<std::string> items;
    uint32_t m = 0;
    while (!is_punct("}")) {
      if (!items.empty()) expect(",");
      if (peek().t != Tok::Str) fail("expected a character string");
      std::string s = nlohmann::json::parse(next().s).get<std::string>();
      if (s.size() != 1) fail("character sets hold single characters");
      if (sc_.ctx) {
        int i = sc_.ctx->sigma_index(s[0]);
        if (i < 0) fail("character outside sigma");
        m |= uint32_t(1) << i;
      }
      items.push_back(s);
    }
    expect("}");
    std::string text = "{";
    for (size_t i = 0; i < items.size(); ++i) text += (i ? ", " : "") + nlohmann::json(items[i]).dump();
    text += "}";
    return make_lit(text, CharSet{m}, LitDyn::Plain, Kind::CharSet);
  }

  TermP number(const std::string& s) {
    if (s == "+inf") return make_lit(s, kPosInf, LitDyn::Plain, Kind::Int);
    if (s == "-inf") return make_lit(s, kNegInf, LitDyn::Plain, Kind::Int);
    bool neg = s[0] == '-';
    std::string body = neg ? s.substr(1) : s;
    int64_t v = 0;
    if (body.size() > 2 && body[0] == '0' && (body[1] == 'b' || body[1] == 'B')) {
      for (size_t i = 2; i < body.size(); ++i) {
        if (body[i] != '0' && body[i] != '1') fail("bad binary literal");
        v = v * 2 + (body[i] - '0');
      }
    } else {
      for (char ch : body) {
        if (!std::isdigit(uint8_t(ch))) fail("bad number");
        v = v * 10 + (ch - '0');
        if (v > (int64_t(1) << 40)) fail("number too large");
      }
    }
    return make_lit(s, neg ? -v : v, LitDyn::Plain, Kind::Int);
  }

  TermP keyword(const std::string& id) {
    if (id == "INTMAX") return make_lit(id, int64_t(0), LitDyn::IntMax, Kind::Int);
    if (id == "INTMIN") return make_lit(id, int64_t(0), LitDyn::IntMin, Kind::Int);
    if (id == "TOP") return make_lit(id, {}, LitDyn::Top, Kind::Abs);
    if (id == "BOT") return make_lit(id, {}, LitDyn::Bot, Kind::Abs);
    if (id == "true") return make_lit(id, true, LitDyn::Plain, Kind::Bool);
    if (id == "false") return make_lit(id, false, LitDyn::Plain, Kind::Bool);
    if (id == "BoolTrue") return make_lit(id, ABool{AB::True}, LitDyn::Plain, Kind::AbsBool);
    if (id == "BoolFalse") return make_lit(id, ABool{AB::False}, LitDyn::Plain, Kind::AbsBool);
    if (id == "BoolTop") return make_lit(id, ABool{AB::Top}, LitDyn::Plain, Kind::AbsBool);
    if (id == "BoolBot") return make_lit(id, ABool{AB::Bot}, LitDyn::Plain, Kind::AbsBool);
    fail("unknown identifier '" + id + "'");
  }
};

}  // namespace

TermP parse_term(const std::string& text, const ParseScope& scope) { return Parser(text, scope).parse_all(); }

TermP parse_leaf(const std::string& text, const ParseScope& scope) {
  TermP t = parse_term(text, scope);
  if (t->tag == Term::Op && !(t->kids.size() == 1 && t->kids[0]->tag == Term::Lit))
    throw ConfigError("not a leaf: " + text);
  return t;
}

// ---------------------------------------------------------------- evaluation

namespace {

Value lit_value(const Term& t, const EvalCtx& ec) {
  switch (t.dyn) {
    case LitDyn::Plain: return t.lit;
    case LitDyn::IntMax:
      if (is_bv_domain(ec.dom)) return bv::max_value(ec.c->w, ec.dom == Dom::SInt);
      return kPosInf;
    case LitDyn::IntMin:
      if (is_bv_domain(ec.dom)) return bv::min_value(ec.c->w, ec.dom == Dom::SInt);
      return kNegInf;
    case LitDyn::Top: return top(*ec.c, ec.dom);
    case LitDyn::Bot: return bottom(*ec.c, ec.dom);
  }
  return {};
}

Value project(const Value& v, char f) {
  if (auto p = std::get_if<Interval>(&v)) return f == 'l' ? p->l : p->r;
  if (auto p = std::get_if<Wrapped>(&v)) {
    if (p->kind == Wrapped::Pair) return int64_t(f == 'l' ? p->a : p->b);
    return int64_t(0);
  }
  if (auto p = std::get_if<CIVal>(&v)) return CharSet{f == 'l' ? p->L : p->U};
  if (auto p = std::get_if<PSVal>(&v)) return f == 'p' ? p->pre : p->suf;
  if (std::holds_alternative<std::monostate>(v)) return v;
  throw ConfigError("projection applied to a value without fields");
}

bool is_placeholder(const Value& v) { return std::holds_alternative<std::monostate>(v); }

Value eval_split_join(const Term& t, const EvalCtx& ec, Env& env, bool wrapped) {
  const Term& x = *t.kids[0];
  const Term& y = *t.kids[1];
  if (x.tag != Term::Var || y.tag != Term::Var) throw ConfigError("split forms take parameter names");
  const Ctx& c = *ec.c;
  std::vector<Value> p1, p2;
  if (wrapped) {
    for (const auto& w : split_at_zero(c, as<Wrapped>(env[x.slot]))) p1.push_back(w);
    for (const auto& w : split_at_zero(c, as<Wrapped>(env[y.slot]))) p2.push_back(w);
  } else {
    for (const auto& w : split_signed(c, as<Interval>(env[x.slot]))) p1.push_back(w);
    for (const auto& w : split_signed(c, as<Interval>(env[y.slot]))) p2.push_back(w);
  }
  Value sx = env[x.slot], sy = env[y.slot];
  Value acc = bottom(c, ec.dom);
  bool placeholder = false;
  for (const auto& u : p1)
    for (const auto& v : p2) {
      env[x.slot] = u;
      env[y.slot] = v;
      Value r = eval(*t.kids[2], ec, env);
      if (is_placeholder(r)) placeholder = true;
      else if (!placeholder) acc = join(c, ec.dom, acc, r);
    }
  env[x.slot] = sx;
  env[y.slot] = sy;
  return placeholder ? Value{} : acc;
}

// r = reverse(b); c = 0; for i: one = 1; r = STEP; if (a & r) c = ACC
Value eval_sh_loop(const Term& t, const EvalCtx& ec, Env& env) {
  const int b = ec.c->b;
  Value va = eval(*t.kids[0], ec, env), vb = eval(*t.kids[1], ec, env);
  uint64_t A = as<SHVal>(va).H;
  Env saved = env;
  env[kR] = int64_t(reverse_bits(as<SHVal>(vb).H, b));
  env[kC] = int64_t(0);
  for (int i = 0; i < b; ++i) {
    env[kOne] = int64_t(1);
    env[kI] = int64_t(i);
    Value r = eval(*t.kids[2], ec, env);
    if (is_placeholder(r)) throw TraceError("loop state depends on a hole");
    env[kR] = r;
    if (A & uint64_t(as_int(r))) {
      Value cv = eval(*t.kids[3], ec, env);
      if (is_placeholder(cv)) throw TraceError("loop state depends on a hole");
      env[kC] = cv;
    }
  }
  uint64_t out = uint64_t(as_int(env[kC])) & bv::mask(b);
  env = saved;
  return SHVal{out};
}

}  // namespace

Value eval(const Term& t, const EvalCtx& ec, Env& env) {
  switch (t.tag) {
    case Term::Var: return env[t.slot];
    case Term::Proj: return project(env[t.slot], t.field);
    case Term::Lit: return lit_value(t, ec);
    case Term::Hole:
      if (!ec.hole) throw ConfigError("unfilled hole ?" + t.text);
      return ec.hole(t.hole, env);
    case Term::Op: break;
  }
  const Builtin& b = builtins()[t.builtin];
  switch (b.special) {
    case Special::Ite: {
      Value c = eval(*t.kids[0], ec, env);
      if (is_placeholder(c)) throw TraceError("condition depends on a hole");
      return eval(*t.kids[as<bool>(c) ? 1 : 2], ec, env);
    }
    case Special::SplitJoinS: return eval_split_join(t, ec, env, false);
    case Special::SplitJoinW: return eval_split_join(t, ec, env, true);
    case Special::ShLoop: return eval_sh_loop(t, ec, env);
    case Special::And:
    case Special::Or: {
      // both sides are always evaluated so hole requests replay in order
      Value x = eval(*t.kids[0], ec, env), y = eval(*t.kids[1], ec, env);
      if (is_placeholder(x) || is_placeholder(y)) return Value{};
      bool r = b.special == Special::And ? (as<bool>(x) && as<bool>(y)) : (as<bool>(x) || as<bool>(y));
      return r;
    }
    case Special::None: break;
  }
  Value args[4];
  bool placeholder = false;
  for (size_t i = 0; i < t.kids.size(); ++i) {
    args[i] = eval(*t.kids[i], ec, env);
    if (is_placeholder(args[i])) placeholder = true;
  }
  if (placeholder) return Value{};
  return b.fn(ec, args);
}

}  // namespace xfsynth

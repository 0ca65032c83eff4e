#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "xfsynth/domain.hpp"

namespace xfsynth {

// Value kinds seen by the DSL. Abs is the problem's abstract domain; Bits is
// a hash bit-set used inside the string-hash loop form.
enum class Kind : uint8_t { Int, Bool, CharSet, Str, Abs, AbsBool, Bits, Any };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& s);

// Variable slots are fixed across all problems.
enum Slot : int { kA, kA1, kA2, kR, kC, kOne, kI, kNumSlots };
using Env = std::array<Value, kNumSlots>;
int slot_of(const std::string& name);  // -1 if unknown
const char* slot_name(int slot);

struct EvalCtx;
using BuiltinFn = Value (*)(const EvalCtx&, const Value*);

enum class Style : uint8_t { Call, Prefix, Infix, Pair };
enum class Special : uint8_t { None, Ite, And, Or, SplitJoinS, SplitJoinW, ShLoop };

struct Builtin {
  std::string name;
  Style style = Style::Call;
  std::vector<Kind> args;
  Kind result = Kind::Any;  // Any: same kind as args[1]
  BuiltinFn fn = nullptr;
  bool commutative = false;
  Special special = Special::None;
};

const std::vector<Builtin>& builtins();
// Resolves an overload by name and argument kinds; -1 when none matches.
int find_builtin(const std::string& name, const std::vector<Kind>& arg_kinds);
bool builtin_name_exists(const std::string& name);

struct Term;
using TermP = std::shared_ptr<const Term>;

enum class LitDyn : uint8_t { Plain, IntMax, IntMin, Top, Bot };

struct Term {
  enum Tag : uint8_t { Op, Var, Proj, Lit, Hole } tag = Op;
  int builtin = -1;    // Op
  int slot = -1;       // Var, Proj
  char field = 0;      // Proj: l r u p s
  Value lit;           // Lit
  LitDyn dyn = LitDyn::Plain;
  std::string text;    // Lit token, Hole name
  int hole = -1;       // Hole index
  Kind kind = Kind::Any;
  int depth = 1;
  std::vector<TermP> kids;
};

TermP make_op(int builtin, std::vector<TermP> kids);
TermP make_var(int slot, Kind k);
TermP make_proj(int slot, char field, Kind k);
TermP make_lit(std::string text, Value v, LitDyn dyn, Kind k);
TermP make_hole(std::string name, int index, Kind k);

// Kinds of projections and variables depend on the problem domain.
Kind proj_kind(Dom d, char field);
bool valid_field(Dom d, char field);

struct HoleDecl {
  std::string name;
  Kind kind;
};

struct ParseScope {
  Dom dom = Dom::IntervalZ;
  const Ctx* ctx = nullptr;
  std::vector<HoleDecl>* holes = nullptr;  // null: holes not allowed
};

TermP parse_term(const std::string& text, const ParseScope& scope);
// Parses a leaf token (literal, variable or projection) on its own.
TermP parse_leaf(const std::string& text, const ParseScope& scope);
std::string print_term(const Term& t);
nlohmann::json term_to_json(const Term& t);
bool terms_equal(const Term& a, const Term& b);

// Signals that a hole placeholder reached a position that needs a real value.
struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalCtx {
  const Ctx* c = nullptr;
  Dom dom = Dom::IntervalZ;
  // Fills holes. Returning monostate marks a traced placeholder.
  std::function<Value(int hole, const Env& env)> hole;
  bool trace = false;
};

Value eval(const Term& t, const EvalCtx& ec, Env& env);

// Helpers shared with the concrete semantics.
int64_t sat_add(int64_t a, int64_t b);
int64_t sat_mul(int64_t a, int64_t b);
int64_t sat_neg(int64_t a);
uint64_t sh_sumset(uint64_t h1, uint64_t h2, int b);
uint64_t rotl_bits(uint64_t x, int k, int b);
uint64_t rotr_bits(uint64_t x, int k, int b);
uint64_t reverse_bits(uint64_t x, int b);
bool overflow_mul(const Ctx& c, Dom d, const Value& a1, const Value& a2);

}  // namespace xfsynth

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xfsynth/value.hpp"

namespace xfsynth {

enum class Dom { IntervalZ, UInt, SInt, Wrapped, CI, PS, SH, SS, CS, AbsBool };

const char* dom_name(Dom d);
Dom dom_from_name(const std::string& s);
bool is_string_domain(Dom d);
bool is_bv_domain(Dom d);

// Finitization parameters shared by domains, builtins and the oracle.
struct Ctx {
  int64_t N = 16;            // IntervalZ universe {-N..N}
  int w = 4;                 // bitvector width
  std::string sigma = " abc";
  int max_len = 4;           // concrete input strings
  int out_max_len = 4;       // witness universe for string outputs
  int enum_len = 2;          // component strings of enumerated PS / SS_k values
  int k = 2;                 // SS_k capacity
  int b = 8;                 // SH hash range
  std::vector<int> hash_index;                   // I(c) per sigma position
  std::vector<std::pair<char, char>> case_pairs;  // (lower, upper)
  int char_index = 0;        // fixed charAt index
  Dom arith = Dom::IntervalZ;  // how scalar builtins interpret integers

  int sigma_index(char c) const;
  uint32_t sigma_mask() const { return (uint32_t(1) << sigma.size()) - 1; }
  uint32_t chars_of(const std::string& s) const;
  int hash_of(const std::string& s) const;
  int hash_of_char(char c) const;
  int space_index() const { return sigma_index(' '); }
  char to_lower(char c) const;
  char to_upper(char c) const;
  bool bv_signed() const { return arith == Dom::SInt; }
  void validate() const;
};

// Domain-generic operations. Concrete values are int64_t (integers and
// bitvectors), std::string (strings) or bool (AbsBool).
std::vector<Value> enumerate_abstract(const Ctx& c, Dom d);
std::vector<Value> concrete_universe(const Ctx& c, Dom d, bool output);
bool gamma_contains(const Ctx& c, Dom d, const Value& a, const Value& x);
bool leq(const Ctx& c, Dom d, const Value& a, const Value& b);
Value join(const Ctx& c, Dom d, const Value& a, const Value& b);
Value bottom(const Ctx& c, Dom d);
Value top(const Ctx& c, Dom d);
bool is_bot(const Ctx& c, Dom d, const Value& a);
bool is_top(const Ctx& c, Dom d, const Value& a);
// Wrapped intervals have no Galois connection; every other domain does.
bool has_galois(Dom d);
Value alpha_single(const Ctx& c, Dom d, const Value& x);
Value alpha_set(const Ctx& c, Dom d, const std::vector<Value>& xs);
// Atoms whose concretizations cover gamma(a); empty when no useful split exists.
std::vector<Value> atoms(const Ctx& c, Dom d, const Value& a);

std::string format_value(const Ctx& c, Dom d, const Value& a);
Value parse_value(const Ctx& c, Dom d, const std::string& text);
std::string format_concrete(const Value& x);
Value parse_concrete(Dom d, const std::string& json_text);

// String helpers shared by domains and builtins.
std::string lcp(const std::string& a, const std::string& b);
std::string lcs(const std::string& a, const std::string& b);
std::string trim_spaces(const std::string& s);
std::string trim_start(const std::string& s);
std::string trim_end(const std::string& s);
bool starts_with(const std::string& s, const std::string& p);
bool ends_with(const std::string& s, const std::string& p);
std::vector<std::string> strings_upto(const Ctx& c, int len);

// Interval helpers.
Interval make_interval(int64_t l, int64_t r);
Wrapped make_wrapped(const Ctx& c, uint64_t a, uint64_t b);
uint64_t wrapped_mask(const Ctx& c, const Wrapped& a);  // gamma as a bitmask (w <= 6)
Wrapped wrapped_alpha(const Ctx& c, uint64_t set_mask);
std::vector<Wrapped> split_at_zero(const Ctx& c, const Wrapped& a);
std::vector<Interval> split_signed(const Ctx& c, const Interval& a);
CIVal make_ci(uint32_t L, uint32_t U);

}  // namespace xfsynth

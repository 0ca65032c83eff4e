#pragma once

#include <string>
#include <vector>

#include "xfsynth/term.hpp"

namespace xfsynth {

// One grammar alternative. The template is a term whose holes stand for the
// argument sorts, in hole order; a template without holes is a leaf.
struct Production {
  std::string text;
  TermP tmpl;
  std::vector<int> args;  // sort index per hole
  bool direct = false;    // tmpl is builtin(?0, ?1, ...) with holes in order
  bool commutative = false;
};

struct Sort {
  std::string name;
  Kind kind = Kind::Any;
  std::vector<Production> prods;
};

struct SortDecl {
  std::string name;
  Kind kind;
  std::vector<std::string> productions;
};

struct Grammar {
  Dom dom = Dom::IntervalZ;
  std::vector<Sort> sorts;
  int start = 0;
  int depth = 1;
  bool symmetry = false;  // skip commutative argument pairs with left > right

  int sort_index(const std::string& name) const;  // -1 if unknown
};

// Sort names inside production texts act as placeholders, e.g. "min(E, E)".
Grammar make_grammar(Dom dom, const Ctx& ctx, const std::vector<SortDecl>& sorts, const std::string& start,
                     int depth, bool symmetry);

TermP instantiate(const Production& p, const std::vector<TermP>& kids);

struct GTerm {
  TermP term;
  int depth;  // production steps, not syntactic nesting
};

// Every term of the sort with depth <= depth, in canonical order. Throws when
// the result would exceed `limit` terms.
std::vector<GTerm> enumerate_terms(const Grammar& g, int sort, int depth, size_t limit = 2000000);

// Grammar depth of t when derivable from the sort, else -1.
int derivation_depth(const Grammar& g, int sort, const Term& t);

struct HoleSpec {
  std::string name;
  Kind kind = Kind::Any;
  int sort = -1;              // grammar hole
  int depth = 0;
  std::vector<TermP> choices;  // choice hole when non-empty
};

struct Sketch {
  TermP skeleton;
  std::vector<HoleSpec> holes;
};

// The whole language as a sketch with a single hole of the start sort.
Sketch trivial_sketch(const Grammar& g);

struct HoleInput {
  std::string name;
  std::string sort;                  // grammar hole
  std::vector<std::string> choices;  // or a fixed list of alternatives
  int depth = 0;                     // 0: the grammar's depth bound
};

Sketch make_sketch(const Grammar& g, const Ctx& ctx, const std::string& skeleton, const std::vector<HoleInput>& holes);

TermP substitute(const TermP& t, const std::vector<TermP>& fill);
TermP fill_sketch(const Sketch& s, const Grammar& g, const std::vector<TermP>& assignment);
bool has_holes(const Term& t);

}  // namespace xfsynth

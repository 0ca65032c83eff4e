#include "xfsynth/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace xfsynth {

int Grammar::sort_index(const std::string& name) const {
  for (size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i].name == name) return int(i);
  return -1;
}

namespace {

bool ident_start(char c) { return std::isalpha(uint8_t(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(uint8_t(c)) || c == '_'; }

// Replaces bare sort names by numbered holes and records their sorts.
std::string placeholders(const std::string& text, const std::vector<SortDecl>& sorts, std::vector<int>& args) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (ch == '"') {
      size_t j = i + 1;
      while (j < text.size() && text[j] != '"') j += text[j] == '\\' ? 2 : 1;
      out.append(text, i, j + 1 - i);
      i = j + 1;
      continue;
    }
    if (ident_start(ch) && (i == 0 || !ident_char(text[i - 1]))) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string id = text.substr(i, j - i);
      size_t k = j;
      while (k < text.size() && text[k] == ' ') ++k;
      bool call = k < text.size() && text[k] == '(';
      bool field = i > 0 && text[i - 1] == '.';
      bool tagged = j < text.size() && text[j] == ':';
      int s = -1;
      if (!call && !field && !tagged)
        for (size_t q = 0; q < sorts.size(); ++q)
          if (sorts[q].name == id) s = int(q);
      if (s >= 0) {
        out += "?h" + std::to_string(args.size());
        args.push_back(s);
      } else {
        out += id;
      }
      i = j;
      continue;
    }
    out += ch;
    ++i;
  }
  return out;
}

bool holes_in_order(const Term& t) {
  if (t.tag != Term::Op) return false;
  for (size_t i = 0; i < t.kids.size(); ++i)
    if (t.kids[i]->tag != Term::Hole || t.kids[i]->hole != int(i)) return false;
  return true;
}

}  // namespace

Grammar make_grammar(Dom dom, const Ctx& ctx, const std::vector<SortDecl>& decls, const std::string& start, int depth,
                     bool symmetry) {
  Grammar g;
  g.dom = dom;
  g.depth = depth;
  g.symmetry = symmetry;
  if (decls.empty()) throw ConfigError("grammar has no sorts");
  if (depth < 1) throw ConfigError("grammar depth must be positive");
  for (const auto& d : decls) {
    if (g.sort_index(d.name) >= 0) throw ConfigError("duplicate sort " + d.name);
    if (slot_of(d.name) >= 0) throw ConfigError("sort name clashes with a parameter: " + d.name);
    g.sorts.push_back(Sort{d.name, d.kind, {}});
  }
  for (size_t s = 0; s < decls.size(); ++s) {
    if (decls[s].productions.empty()) throw ConfigError("sort " + decls[s].name + " has no productions");
    for (const auto& text : decls[s].productions) {
      Production p;
      p.text = text;
      std::string src = placeholders(text, decls, p.args);
      std::vector<HoleDecl> holes;
      for (size_t i = 0; i < p.args.size(); ++i) holes.push_back({"h" + std::to_string(i), decls[p.args[i]].kind});
      ParseScope scope{dom, &ctx, &holes};
      p.tmpl = parse_term(src, scope);
      if (p.tmpl->kind != decls[s].kind)
        throw ConfigError("production '" + text + "' has kind " + kind_name(p.tmpl->kind) + ", sort " +
                          decls[s].name + " expects " + kind_name(decls[s].kind));
      p.direct = holes_in_order(*p.tmpl) && p.tmpl->kids.size() == p.args.size();
      p.commutative = p.direct && p.args.size() == 2 && p.args[0] == p.args[1] &&
                      builtins()[p.tmpl->builtin].commutative;
      g.sorts[s].prods.push_back(std::move(p));
    }
  }
  g.start = g.sort_index(start);
  if (g.start < 0) throw ConfigError("unknown start sort " + start);
  return g;
}

TermP substitute(const TermP& t, const std::vector<TermP>& fill) {
  if (t->tag == Term::Hole) {
    if (t->hole < 0 || size_t(t->hole) >= fill.size() || !fill[t->hole]) throw ConfigError("missing hole ?" + t->text);
    return fill[t->hole];
  }
  if (t->tag != Term::Op) return t;
  std::vector<TermP> kids;
  bool changed = false;
  for (const auto& k : t->kids) {
    kids.push_back(substitute(k, fill));
    changed |= kids.back() != k;
  }
  return changed ? make_op(t->builtin, std::move(kids)) : t;
}

bool has_holes(const Term& t) {
  if (t.tag == Term::Hole) return true;
  for (const auto& k : t.kids)
    if (has_holes(*k)) return true;
  return false;
}

TermP instantiate(const Production& p, const std::vector<TermP>& kids) {
  if (p.args.empty()) return p.tmpl;
  return substitute(p.tmpl, kids);
}

std::vector<GTerm> enumerate_terms(const Grammar& g, int sort, int depth, size_t limit) {
  if (sort < 0 || size_t(sort) >= g.sorts.size()) throw ConfigError("unknown sort");
  if (depth <= 0) return {};
  const size_t ns = g.sorts.size();
  // all[s] holds terms of depth <= d in canonical order; level boundaries in ends
  std::vector<std::vector<GTerm>> all(ns);
  std::vector<std::vector<size_t>> ends(ns, std::vector<size_t>(1, 0));
  size_t total = 0;
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::vector<GTerm>> level(ns);
    for (size_t s = 0; s < ns; ++s) {
      for (const auto& p : g.sorts[s].prods) {
        if (p.args.empty()) {
          if (d == 1) level[s].push_back({p.tmpl, 1});
          continue;
        }
        if (d == 1) continue;
        const size_t k = p.args.size();
        std::vector<size_t> hi(k), lo_new(k);
        bool empty = false;
        for (size_t i = 0; i < k; ++i) {
          hi[i] = ends[p.args[i]][d - 1];
          lo_new[i] = ends[p.args[i]][d - 2];
          if (hi[i] == 0) empty = true;
        }
        if (empty) continue;
        std::vector<size_t> idx(k, 0);
        while (true) {
          bool fresh = false;
          for (size_t i = 0; i < k; ++i) fresh |= idx[i] >= lo_new[i];
          bool skip = !fresh || (g.symmetry && p.commutative && idx[0] > idx[1]);
          if (!skip) {
            std::vector<TermP> kids(k);
            for (size_t i = 0; i < k; ++i) kids[i] = all[p.args[i]][idx[i]].term;
            level[s].push_back({instantiate(p, kids), d});
            if (++total > limit) throw ConfigError("term enumeration exceeds its limit");
          }
          size_t i = k;
          while (i > 0) {
            --i;
            if (++idx[i] < hi[i]) break;
            idx[i] = 0;
            if (i == 0) goto done;
          }
        }
      done:;
      }
    }
    for (size_t s = 0; s < ns; ++s) {
      for (auto& t : level[s]) all[s].push_back(std::move(t));
      ends[s].push_back(all[s].size());
    }
  }
  return all[sort];
}

namespace {

bool match(const Term& tmpl, const Term& t, std::vector<const Term*>& bind) {
  switch (tmpl.tag) {
    case Term::Hole:
      bind[tmpl.hole] = &t;
      return true;
    case Term::Op:
      if (t.tag != Term::Op || t.builtin != tmpl.builtin || t.kids.size() != tmpl.kids.size()) return false;
      for (size_t i = 0; i < t.kids.size(); ++i)
        if (!match(*tmpl.kids[i], *t.kids[i], bind)) return false;
      return true;
    default: return terms_equal(tmpl, t);
  }
}

}  // namespace

int derivation_depth(const Grammar& g, int sort, const Term& t) {
  int best = -1;
  for (const auto& p : g.sorts[sort].prods) {
    std::vector<const Term*> bind(p.args.size(), nullptr);
    if (!match(*p.tmpl, t, bind)) continue;
    int d = 1;
    bool ok = true;
    for (size_t i = 0; i < p.args.size() && ok; ++i) {
      int kd = derivation_depth(g, p.args[i], *bind[i]);
      if (kd < 0) ok = false;
      else d = std::max(d, kd + 1);
    }
    if (ok && (best < 0 || d < best)) best = d;
  }
  return best;
}

Sketch trivial_sketch(const Grammar& g) {
  Sketch s;
  const Sort& st = g.sorts[g.start];
  s.skeleton = make_hole(st.name, 0, st.kind);
  s.holes.push_back(HoleSpec{st.name, st.kind, g.start, g.depth, {}});
  return s;
}

Sketch make_sketch(const Grammar& g, const Ctx& ctx, const std::string& skeleton, const std::vector<HoleInput>& in) {
  Sketch s;
  std::vector<HoleDecl> decls;
  ParseScope plain{g.dom, &ctx, nullptr};
  for (const auto& h : in) {
    HoleSpec spec;
    spec.name = h.name;
    for (const auto& d : decls)
      if (d.name == h.name) throw ConfigError("duplicate hole ?" + h.name);
    if (!h.choices.empty()) {
      if (!h.sort.empty()) throw ConfigError("hole ?" + h.name + " has both a sort and choices");
      for (const auto& c : h.choices) spec.choices.push_back(parse_term(c, plain));
      spec.kind = spec.choices[0]->kind;
      for (const auto& c : spec.choices)
        if (c->kind != spec.kind) throw ConfigError("choices of ?" + h.name + " differ in kind");
      spec.depth = 1;
    } else {
      spec.sort = g.sort_index(h.sort);
      if (spec.sort < 0) throw ConfigError("hole ?" + h.name + " names unknown sort '" + h.sort + "'");
      spec.kind = g.sorts[spec.sort].kind;
      spec.depth = h.depth > 0 ? h.depth : g.depth;
    }
    decls.push_back({h.name, spec.kind});
    s.holes.push_back(std::move(spec));
  }
  ParseScope scope{g.dom, &ctx, &decls};
  s.skeleton = parse_term(skeleton, scope);
  std::vector<bool> used(in.size(), false);
  std::function<void(const Term&)> mark = [&](const Term& t) {
    if (t.tag == Term::Hole) used[t.hole] = true;
    for (const auto& k : t.kids) mark(*k);
  };
  mark(*s.skeleton);
  for (size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw ConfigError("hole ?" + in[i].name + " does not occur in the skeleton");
  return s;
}

TermP fill_sketch(const Sketch& s, const Grammar& g, const std::vector<TermP>& assignment) {
  if (assignment.size() != s.holes.size()) throw ConfigError("assignment does not cover every hole");
  for (size_t i = 0; i < s.holes.size(); ++i) {
    const HoleSpec& h = s.holes[i];
    const TermP& t = assignment[i];
    if (!t) throw ConfigError("missing term for hole ?" + h.name);
    if (t->kind != h.kind)
      throw ConfigError("hole ?" + h.name + " expects kind " + kind_name(h.kind) + ", got " + kind_name(t->kind));
    if (!h.choices.empty()) {
      bool found = false;
      for (const auto& c : h.choices) found |= terms_equal(*c, *t);
      if (!found) throw ConfigError("term is not a choice of hole ?" + h.name + ": " + print_term(*t));
    } else {
      int d = derivation_depth(g, h.sort, *t);
      if (d < 0 || d > h.depth)
        throw ConfigError("term is not in the grammar of hole ?" + h.name + ": " + print_term(*t));
    }
  }
  return substitute(s.skeleton, assignment);
}

}  // namespace xfsynth

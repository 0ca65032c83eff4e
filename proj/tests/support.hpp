#pragma once

// Shared helpers for the test binaries. Nothing here calls into the oracle
// module: expected values are recomputed from the domain primitives and the
// concrete operation.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xfsynth/report.hpp"
#include "xfsynth/spec.hpp"

namespace xt {

using namespace xfsynth;

inline std::string source_dir() { return XFSYNTH_SOURCE_DIR; }

inline std::string spec_path(const std::string& rel) { return source_dir() + "/specs/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::unique_ptr<Instance> load(const std::string& rel) { return make_instance(load_spec(spec_path(rel))); }

inline std::unique_ptr<Instance> from_json(const std::string& text) {
  return make_instance(parse_spec(nlohmann::json::parse(text)));
}

// Every bundled spec, sorted by path.
inline std::vector<std::string> bundled_specs() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(source_dir() + "/specs"))
    if (e.is_regular_file() && e.path().extension() == ".json")
      out.push_back(std::filesystem::relative(e.path(), source_dir() + "/specs").string());
  std::sort(out.begin(), out.end());
  return out;
}

// f(a) at input j, with the bottom-strict wrapper applied by hand.
inline Value apply_term(const Problem& P, const Term& f, size_t j) {
  if (P.bot_strict() && P.input_has_bot(j)) return bottom(P.ctx(), P.out_dom());
  EvalCtx ec;
  ec.c = &P.ctx();
  ec.dom = P.dom();
  Env env = P.input(j);
  return eval(f, ec, env);
}

// Concrete images of input j, by brute force over the concrete universe.
inline std::vector<Value> images(const Problem& P, size_t j) {
  const Ctx& c = P.ctx();
  std::vector<Value> uni = concrete_universe(c, P.dom(), false);
  std::vector<Value> args = P.input_args(j);
  std::vector<std::vector<Value>> mem(args.size());
  for (size_t k = 0; k < args.size(); ++k)
    for (const auto& x : uni)
      if (gamma_contains(c, P.dom(), args[k], x)) mem[k].push_back(x);
  std::vector<Value> out;
  std::vector<size_t> idx(args.size(), 0);
  for (const auto& m : mem)
    if (m.empty()) return out;
  while (true) {
    std::vector<Value> cur;
    for (size_t k = 0; k < args.size(); ++k) cur.push_back(mem[k][idx[k]]);
    auto r = concrete_op(c, P.dom(), P.op(), cur.data());
    if (r && std::find(out.begin(), out.end(), *r) == out.end()) out.push_back(*r);
    size_t k = args.size();
    while (k > 0) {
      --k;
      if (++idx[k] < mem[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

inline bool in_gamma(const Problem& P, const Value& a, const Value& x) {
  return gamma_contains(P.ctx(), P.out_dom(), a, x);
}

// gamma(a) == gamma(b) over the problem's witness universe
inline bool gamma_equal_w(const Problem& P, const Value& a, const Value& b) {
  for (const auto& x : P.witnesses())
    if (in_gamma(P, a, x) != in_gamma(P, b, x)) return false;
  return true;
}

}  // namespace xt

#include "xfsynth/spec.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace xfsynth {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown field '" + it.key() + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T dflt) {
  if (!j.contains(key)) return dflt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

std::string need_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) throw ConfigError(where + " needs a string field '" + key + "'");
  return j.at(key).get<std::string>();
}

void parse_domain(const json& d, ProblemSpec& s) {
  check_keys(d, {"id", "N", "w", "sigma", "max_len", "out_max_len", "enum_len", "k", "b", "hash_index", "case_pairs"},
             "domain");
  s.dom = dom_from_name(need_string(d, "id", "domain"));
  if (s.dom == Dom::AbsBool) throw ConfigError("absbool is an output domain only");
  Ctx& c = s.ctx;
  c.N = get_or<int64_t>(d, "N", c.N);
  c.w = get_or<int>(d, "w", c.w);
  c.sigma = get_or<std::string>(d, "sigma", c.sigma);
  c.max_len = get_or<int>(d, "max_len", c.max_len);
  c.out_max_len = get_or<int>(d, "out_max_len", c.max_len);
  c.enum_len = get_or<int>(d, "enum_len", c.enum_len);
  c.k = get_or<int>(d, "k", s.dom == Dom::CS ? 1 : c.k);
  c.b = get_or<int>(d, "b", c.b);
  c.hash_index = get_or<std::vector<int>>(d, "hash_index", {});
  if (d.contains("case_pairs")) {
    for (const auto& p : d.at("case_pairs")) {
      auto v = p.get<std::vector<std::string>>();
      if (v.size() != 2 || v[0].size() != 1 || v[1].size() != 1)
        throw ConfigError("case pairs are [lower, upper] single characters");
      c.case_pairs.push_back({v[0][0], v[1][0]});
    }
  }
  if (s.dom == Dom::CS && c.k != 1) throw ConfigError("the constant-string domain has k = 1");
}

ExampleText parse_example(const json& e) {
  check_keys(e, {"input", "output"}, "example");
  ExampleText x;
  x.input = e.at("input").get<std::vector<std::string>>();
  x.output = e.at("output");
  return x;
}

}  // namespace

ProblemSpec parse_spec(const json& j, const std::string& origin) {
  ProblemSpec s;
  s.path = origin;
  check_keys(j, {"schema", "name", "description", "domain", "operation", "bot_strict", "grammar", "sketch", "scheduler",
                 "examples", "verify", "limits", "probes", "expect"},
             "spec");
  if (get_or<std::string>(j, "schema", kSpecSchema) != kSpecSchema)
    throw ConfigError("unsupported spec schema " + j.at("schema").dump());
  s.name = need_string(j, "name", "spec");
  s.description = get_or<std::string>(j, "description", "");
  if (!j.contains("domain")) throw ConfigError("spec needs a domain block");
  parse_domain(j.at("domain"), s);

  const json& op = j.at("operation");
  if (op.is_string()) {
    s.op = op_from_name(op.get<std::string>());
  } else {
    check_keys(op, {"id", "index"}, "operation");
    s.op = op_from_name(need_string(op, "id", "operation"));
    s.ctx.char_index = get_or<int>(op, "index", 0);
  }
  s.bot_strict = get_or<bool>(j, "bot_strict", true);

  if (!j.contains("grammar")) throw ConfigError("spec needs a grammar block");
  const json& g = j.at("grammar");
  check_keys(g, {"start", "depth", "symmetry", "sorts"}, "grammar");
  s.start = need_string(g, "start", "grammar");
  s.depth = get_or<int>(g, "depth", 1);
  s.symmetry = get_or<bool>(g, "symmetry", false);
  if (!g.contains("sorts") || !g.at("sorts").is_array()) throw ConfigError("grammar needs a sorts array");
  for (const auto& so : g.at("sorts")) {
    check_keys(so, {"name", "kind", "productions"}, "sort");
    SortDecl d;
    d.name = need_string(so, "name", "sort");
    d.kind = kind_from_name(need_string(so, "kind", "sort"));
    d.productions = get_or<std::vector<std::string>>(so, "productions", {});
    s.sorts.push_back(std::move(d));
  }

  if (j.contains("sketch")) {
    const json& k = j.at("sketch");
    check_keys(k, {"skeleton", "holes"}, "sketch");
    SketchText t;
    t.skeleton = need_string(k, "skeleton", "sketch");
    for (const auto& h : get_or<json>(k, "holes", json::array())) {
      check_keys(h, {"name", "sort", "depth", "choices"}, "hole");
      HoleInput in;
      in.name = need_string(h, "name", "hole");
      in.sort = get_or<std::string>(h, "sort", "");
      in.depth = get_or<int>(h, "depth", 0);
      in.choices = get_or<std::vector<std::string>>(h, "choices", {});
      t.holes.push_back(std::move(in));
    }
    s.sketch = std::move(t);
  }

  if (j.contains("scheduler")) {
    const json& sc = j.at("scheduler");
    check_keys(sc, {"k", "max_iterations"}, "scheduler");
    s.scheduler.k = get_or<int>(sc, "k", 50);
    s.scheduler.max_iterations = get_or<uint64_t>(sc, "max_iterations", s.scheduler.max_iterations);
  }
  if (j.contains("examples")) {
    const json& ex = j.at("examples");
    check_keys(ex, {"positive", "negative"}, "examples");
    for (const auto& e : get_or<json>(ex, "positive", json::array())) s.positive.push_back(parse_example(e));
    for (const auto& e : get_or<json>(ex, "negative", json::array())) s.negative.push_back(parse_example(e));
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    check_keys(v, {"best", "cap"}, "verify");
    s.verify_best = get_or<bool>(v, "best", true);
    s.verify_cap = get_or<uint64_t>(v, "cap", s.verify_cap);
  }
  if (j.contains("limits")) {
    const json& l = j.at("limits");
    check_keys(l, {"lazy_threshold", "cell_limit", "table_limit", "raw_limit"}, "limits");
    s.space.lazy_threshold = get_or<double>(l, "lazy_threshold", s.space.lazy_threshold);
    s.space.cell_limit = get_or<uint64_t>(l, "cell_limit", s.space.cell_limit);
    s.space.table_limit = get_or<uint64_t>(l, "table_limit", s.space.table_limit);
    s.space.raw_limit = get_or<uint64_t>(l, "raw_limit", s.space.raw_limit);
  }
  for (const auto& p : get_or<json>(j, "probes", json::array())) s.probes.push_back(p.get<std::vector<std::string>>());
  s.expect = get_or<json>(j, "expect", json::object());
  if (s.depth < 1) throw ConfigError("grammar depth must be positive");
  if (s.scheduler.k < 1) throw ConfigError("scheduler k must be at least 1");
  return s;
}

ProblemSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return parse_spec(j, path);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::unique_ptr<Instance> make_instance(const ProblemSpec& spec) {
  auto in = std::make_unique<Instance>();
  in->spec = spec;
  if (!op_supported(spec.op, spec.dom))
    throw ConfigError(std::string("operation ") + op_name(spec.op) + " is not defined on domain " + dom_name(spec.dom));
  in->problem = std::make_unique<Problem>(spec.ctx, spec.dom, spec.op, spec.bot_strict);
  const Ctx& c = in->problem->ctx();
  in->grammar = make_grammar(spec.dom, c, spec.sorts, spec.start, spec.depth, spec.symmetry);
  if (spec.sketch) in->sketch = make_sketch(in->grammar, c, spec.sketch->skeleton, spec.sketch->holes);
  else in->sketch = trivial_sketch(in->grammar);
  Kind want = in->problem->out_dom() == Dom::AbsBool ? Kind::AbsBool : Kind::Abs;
  if (in->sketch.skeleton->kind != want)
    throw ConfigError(std::string("transformer body must have kind ") + kind_name(want));
  return in;
}

Space& Instance::build_space() {
  if (!space) space = std::make_unique<Space>(*problem, grammar, sketch, spec.space);
  return *space;
}

int Instance::find_input(const std::vector<std::string>& args) {
  if (int(args.size()) != problem->arity())
    throw ConfigError("input has " + std::to_string(args.size()) + " components, the operation takes " +
                      std::to_string(problem->arity()));
  std::vector<Value> vs;
  for (const auto& a : args) vs.push_back(parse_value(problem->ctx(), spec.dom, a));
  int j = problem->find_input(vs);
  if (j < 0) {
    std::string s;
    for (const auto& a : args) s += (s.empty() ? "" : ", ") + a;
    throw ConfigError("input (" + s + ") is outside the enumerated abstract inputs");
  }
  return j;
}

ExampleSet Instance::seed_examples() {
  ExampleSet E;
  auto conv = [&](const ExampleText& t) {
    int j = find_input(t.input);
    return problem->make_example(size_t(j), parse_concrete(problem->out_dom(), t.output.dump()));
  };
  for (const auto& e : spec.positive) E.pos.push_back(conv(e));
  for (const auto& e : spec.negative) E.neg.push_back(conv(e));
  return E;
}

TermP Instance::parse(const std::string& text) const {
  ParseScope scope{spec.dom, &problem->ctx(), nullptr};
  TermP t = parse_term(text, scope);
  Kind want = problem->out_dom() == Dom::AbsBool ? Kind::AbsBool : Kind::Abs;
  if (t->kind != want) throw ConfigError(std::string("term has kind ") + kind_name(t->kind) + ", expected " + kind_name(want));
  return t;
}

}  // namespace xfsynth

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "xfsynth/report.hpp"

using namespace xfsynth;
using nlohmann::json;

namespace {

struct Output {
  std::string path;
  bool pretty = false;

  void write(const json& r) const {
    std::string text = pretty ? pretty_report(r) : r.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
  }
};

std::string read_term_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open term file " + path);
  std::string line, text;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    text += line + " ";
  }
  return text;
}

// One row per spec; failures stay in their row.
json bench_row(const std::string& path, bool verify_best) {
  json row = {{"spec", path}};
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto in = make_instance(load_spec(path));
    RunOptions opt;
    opt.verify_best = verify_best;
    opt.trace = false;
    Outcome o = run_instance(*in, opt);
    const json& r = o.report;
    row["spec"] = r["spec"];
    row["domain"] = r["domain"];
    row["operation"] = r["operation"];
    row["sketch_assisted"] = r["sketch_assisted"];
    row["verdict"] = r["verdict"];
    row["stats"] = r["stats"];
    if (r.contains("term")) row["term"] = r["term"];
    row["exit_code"] = o.exit_code;
    std::string want = in->spec.expect.value("verdict", "best");
    row["expected"] = want;
    row["as_expected"] = r["verdict"] == want;
  } catch (const std::exception& e) {
    row["verdict"] = "error";
    row["error"] = e.what();
    row["as_expected"] = false;
    row["exit_code"] = int(kExitConfig);
  }
  row["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::string bench_table(const json& rows) {
  std::ostringstream os;
  static const char* cols[] = {"#SO", "#PO", "#PosEx", "#NegEx", "#MaxSat", "#Dropped"};
  static const char* keys[] = {"soundness_queries", "precision_queries", "positive_examples",
                               "negative_examples", "maxsat_calls",      "dropped_negatives"};
  os << std::left << std::setw(28) << "spec" << std::setw(12) << "domain" << std::setw(9) << "op" << std::setw(4)
     << "sk" << std::setw(13) << "verdict" << std::right;
  for (const char* c : cols) os << std::setw(9) << c;
  os << std::setw(10) << "time(s)" << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(28) << r["spec"].get<std::string>() << std::setw(12) << r.value("domain", "-")
       << std::setw(9) << r.value("operation", "-") << std::setw(4) << (r.value("sketch_assisted", false) ? "*" : "")
       << std::setw(13) << (r["verdict"].get<std::string>() + (r.value("as_expected", false) ? "" : "!"))
       << std::right;
    for (const char* k : keys) {
      if (r.contains("stats")) os << std::setw(9) << r["stats"][k].get<uint64_t>();
      else os << std::setw(9) << "-";
    }
    os << std::setw(10) << std::fixed << std::setprecision(2) << r["seconds"].get<double>() << "\n";
    if (r.contains("error")) os << "    " << r["error"].get<std::string>() << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesizes sound and maximally precise abstract transformers from a DSL"};
  app.require_subcommand(1);
  Output out;
  bool json_flag = false;

  auto add_output = [&](CLI::App* c) {
    c->add_option("--out", out.path, "write the report to this file");
    c->add_flag("--json", json_flag, "JSON report (default)");
    c->add_flag("--pretty", out.pretty, "human-readable summary");
  };

  std::string spec_path, term_path;
  uint64_t max_iter = 0;
  bool no_best = false;

  auto* run = app.add_subcommand("run", "synthesize a transformer for a spec and verify it");
  run->add_option("spec", spec_path, "problem spec (JSON)")->required();
  run->add_option("--max-iterations", max_iter, "override the scheduler's iteration cap");
  run->add_flag("--no-verify-best", no_best, "skip the bestness check");
  add_output(run);

  auto* verify = app.add_subcommand("verify", "check a given transformer for soundness and bestness");
  verify->add_option("spec", spec_path, "problem spec (JSON)")->required();
  verify->add_option("term", term_path, "file holding the transformer term")->required();
  verify->add_flag("--no-verify-best", no_best, "skip the bestness check");
  add_output(verify);

  std::vector<std::string> oracle_inputs;
  size_t oracle_limit = 50;
  auto* oracle = app.add_subcommand("oracle", "print best abstract outputs by brute force");
  oracle->add_option("spec", spec_path, "problem spec (JSON)")->required();
  oracle->add_option("--input", oracle_inputs, "abstract argument(s) of one input; repeat per argument");
  oracle->add_option("--limit", oracle_limit, "rows to print when no input is given");
  add_output(oracle);

  std::vector<std::string> bench_specs;
  auto* bench = app.add_subcommand("bench", "run several specs and tabulate their counters");
  bench->add_option("specs", bench_specs, "problem specs");
  bench->add_flag("--no-verify-best", no_best, "skip the bestness checks");
  add_output(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : int(kExitConfig);
  }
  if (json_flag) out.pretty = false;

  try {
    if (*run) {
      auto in = make_instance(load_spec(spec_path));
      RunOptions opt;
      if (max_iter) opt.max_iterations = max_iter;
      opt.verify_best = !no_best;
      Outcome o = run_instance(*in, opt);
      out.write(o.report);
      return o.exit_code;
    }
    if (*verify) {
      auto in = make_instance(load_spec(spec_path));
      TermP f = in->parse(read_term_file(term_path));
      Outcome o = verify_instance(*in, *f, !no_best);
      out.write(o.report);
      return o.exit_code;
    }
    if (*oracle) {
      auto in = make_instance(load_spec(spec_path));
      std::vector<std::vector<std::string>> inputs;
      if (!oracle_inputs.empty()) inputs.push_back(oracle_inputs);
      json r = oracle_table(*in, inputs, oracle_limit);
      if (out.pretty) {
        std::ostringstream os;
        for (const auto& row : r["rows"]) os << row["input"].dump() << " -> " << row["best"].get<std::string>() << "\n";
        std::cout << os.str();
      } else {
        out.write(r);
      }
      return 0;
    }
    if (*bench) {
      json rows = json::array();
      int rc = 0;
      for (const auto& p : bench_specs) {
        rows.push_back(bench_row(p, !no_best));
        if (!rows.back()["as_expected"].get<bool>()) rc = 1;
      }
      if (out.pretty) {
        std::string t = bench_table(rows);
        if (out.path.empty()) std::cout << t;
        else std::ofstream(out.path) << t;
      } else {
        out.write(json{{"schema", kReportSchema}, {"command", "bench"}, {"rows", rows}});
      }
      return rc;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}

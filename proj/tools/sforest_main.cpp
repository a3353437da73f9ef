#include "sforest/json_io.hpp"
#include "sforest/oracle.hpp"
#include "sforest/orchestrator.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace sforest;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;      // parse or validation error
constexpr int kExitInfeasible = 2; // demand pair in a disconnected component
constexpr int kExitLimits = 3;     // oracle limits exceeded

struct CommonOpts {
  std::string epsilon = "83/10000";
  std::string alpha = "9/100";
  std::string gamma = "1/100";
  int k = 3;
  bool no_triples = false;
  bool classic_gw = false;
  std::uint64_t seed = 0;
  bool with_times = false;
};

PipelineParams to_params(const CommonOpts& o) {
  PipelineParams p;
  p.epsilon = parse_rational(o.epsilon);
  p.alpha = parse_rational(o.alpha);
  p.gamma = parse_rational(o.gamma);
  p.k = o.k;
  p.include_triples = !o.no_triples;
  p.classic_gw_inner = o.classic_gw;
  p.seed = o.seed;
  return p;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--epsilon", o.epsilon, "extension rate (rational, e.g. 1/10 or 0.0083)");
  cmd->add_option("--alpha", o.alpha, "greedy guarantee parameter in [0,1]");
  cmd->add_option("--gamma", o.gamma, "partial-enumeration granularity (> 0)");
  cmd->add_option("--k", o.k, "max size of contracted actively connected sets");
  cmd->add_flag("--no-triples", o.no_triples, "enumerate autarkic pairs only");
  cmd->add_flag("--classic-gw", o.classic_gw, "run the inner 2-approximation of F3 with eps = 0");
  cmd->add_option("--seed", o.seed, "seed recorded in outputs");
  cmd->add_flag("--with-times", o.with_times,
                "include wall-clock times in outputs (not byte-reproducible)");
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + out_path + "'");
    f << text;
  }
}

int classify_error(const std::exception& ex) {
  if (auto* v = dynamic_cast<const ValidationError*>(&ex))
    return v->infeasible_demand ? kExitInfeasible : kExitParse;
  return kExitParse;
}

struct BenchRow {
  std::string name;
  std::string line;
};

int run_bench(const std::string& dir, const CommonOpts& opts, const OracleLimits& limits,
              const std::string& out_path, int jobs, bool as_json) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".stpf")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "bench: no .stpf files in " << dir << "\n";
    return kExitParse;
  }
  PipelineParams params = to_params(opts);

  std::vector<BenchRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      try {
        Instance inst = load_instance_file(files[i]);
        CompareResult cr = compare_with_exact(inst, params, limits);
        const Report& r = cr.report;
        std::string name = fs::path(files[i]).filename().string();
        std::string line = name + "," + std::to_string(inst.vertex_count) + "," +
                           std::to_string(inst.edges.size()) + "," +
                           std::to_string(inst.demands.size()) + "," +
                           fraction_str(r.f1.total_cost) + "," + fraction_str(r.f2.total_cost) +
                           "," + fraction_str(r.f3.total_cost) + "," + fraction_str(r.best_cost);
        if (cr.status == OracleStatus::ok) {
          line += "," + fraction_str(r.exact_forest.total_cost);
          line += cr.ratio_defined ? "," + fraction_str(cr.ratio) : ",";
        } else {
          line += ",,";
        }
        if (opts.with_times) line += "," + std::to_string(r.times.total_seconds);
        rows[i] = {std::move(name), std::move(line)};
      } catch (const std::exception& ex) {
        std::cerr << files[i] << ": " << ex.what() << "\n";
        failed = true;
        return;
      }
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed) return kExitParse;

  std::string out;
  if (as_json) {
    Json arr = Json::array();
    for (const auto& row : rows) arr.push_back(row.line);
    out = dump_json(arr);
  } else {
    out = "instance,vertices,edges,demands,f1,f2,f3,best,exact,ratio";
    if (opts.with_times) out += ",total_s";
    out += "\n";
    for (const auto& row : rows) out += row.line + "\n";
  }
  write_output(out, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-2 approximation pipeline for Steiner Forest"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string in_file, out_path, bench_dir;
  OracleLimits limits;
  int jobs = 1;
  bool as_json = false, as_csv = false;

  GenParams gen_params;
  std::string gen_density = "0.5";

  auto* solve_cmd = app.add_subcommand("solve", "run the pipeline and print the report JSON");
  solve_cmd->add_option("file", in_file, "STP-F instance")->required();
  add_common(solve_cmd, opts);
  solve_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

  auto* trace_cmd = app.add_subcommand("trace", "dump the extended moat-growing trace JSON");
  trace_cmd->add_option("file", in_file, "STP-F instance")->required();
  add_common(trace_cmd, opts);
  trace_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

  auto* verify_cmd = app.add_subcommand("verify", "run the engine and check every ledger");
  verify_cmd->add_option("file", in_file, "STP-F instance")->required();
  add_common(verify_cmd, opts);

  auto* gen_cmd = app.add_subcommand("gen", "write a random demand-feasible instance");
  gen_cmd->add_option("--n", gen_params.n, "vertex count")->required();
  gen_cmd->add_option("--density", gen_density, "edge probability in [0,1]");
  gen_cmd->add_option("--demands", gen_params.demand_count, "demand pair count")->required();
  gen_cmd->add_option("--max-cost", gen_params.max_cost, "costs drawn from 1..max-cost");
  gen_cmd->add_flag("--metric", gen_params.metric, "grid-metric costs");
  gen_cmd->add_option("--seed", opts.seed, "generator seed");
  gen_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

  auto* exact_cmd = app.add_subcommand("exact", "run the desk-scale exact oracle");
  exact_cmd->add_option("file", in_file, "STP-F instance")->required();
  exact_cmd->add_option("--max-terminals", limits.max_terminals, "oracle terminal limit");
  exact_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

  auto* bench_cmd = app.add_subcommand("bench", "solve every .stpf in a directory, CSV summary");
  bench_cmd->add_option("dir", bench_dir, "directory of .stpf files")->required();
  add_common(bench_cmd, opts);
  bench_cmd->add_option("--max-terminals", limits.max_terminals, "oracle terminal limit");
  bench_cmd->add_option("--jobs", jobs, "worker pool size");
  bench_cmd->add_flag("--json", as_json, "emit JSON instead of CSV");
  bench_cmd->add_flag("--csv", as_csv, "emit CSV (default)");
  bench_cmd->add_option("--out", out_path, "write output to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      Instance inst = load_instance_file(in_file);
      Report rep = solve(inst, to_params(opts));
      write_output(dump_json(report_to_json(inst, rep, opts.with_times)), out_path);
      return rep.f1.feasible() && rep.f2.feasible() && rep.f3.feasible() ? kExitOk : kExitInfeasible;
    }
    if (trace_cmd->parsed()) {
      Instance inst = load_instance_file(in_file);
      auto violations = validate(inst);
      if (!violations.empty()) throw ValidationError(std::move(violations));
      MoatTrace trace = run_extended_moat(inst, parse_rational(opts.epsilon));
      write_output(dump_json(trace_to_json(trace)), out_path);
      return kExitOk;
    }
    if (verify_cmd->parsed()) {
      Instance inst = load_instance_file(in_file);
      auto violations = validate(inst);
      if (!violations.empty()) throw ValidationError(std::move(violations));
      MoatTrace trace = run_extended_moat(inst, parse_rational(opts.epsilon));
      auto issues = verify_ledgers(inst, trace);
      for (const auto& s : issues) std::cerr << "violation: " << s << "\n";
      std::cout << (issues.empty() ? "ok\n" : "violations: " + std::to_string(issues.size()) + "\n");
      return issues.empty() ? kExitOk : kExitParse;
    }
    if (gen_cmd->parsed()) {
      gen_params.edge_density = std::stod(gen_density);
      Instance inst = generate_random(gen_params, opts.seed);
      write_output(serialize_instance(inst), out_path);
      return kExitOk;
    }
    if (exact_cmd->parsed()) {
      Instance inst = load_instance_file(in_file);
      auto violations = validate(inst);
      if (!violations.empty()) throw ValidationError(std::move(violations));
      ExactForestResult res = exact_steiner_forest(inst, limits);
      if (res.status != OracleStatus::ok) {
        std::cerr << "oracle limits exceeded\n";
        return kExitLimits;
      }
      Json j;
      j["cost"] = fraction_str(res.forest.total_cost);
      j["cost_approx"] = decimal_str(res.forest.total_cost);
      j["edges"] = res.forest.edge_ids;
      j["feasible"] = res.forest.feasible();
      write_output(dump_json(j), out_path);
      return kExitOk;
    }
    if (bench_cmd->parsed()) return run_bench(bench_dir, opts, limits, out_path, jobs, as_json);
  } catch (const ParseError& ex) {
    std::cerr << ex.what() << "\n";
    return kExitParse;
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return classify_error(ex);
  }
  return kExitOk;
}

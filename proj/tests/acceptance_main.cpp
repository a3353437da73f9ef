// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] is the CLI binary used by the determinism criterion.

#include "fixtures.hpp"
#include "sforest/json_io.hpp"
#include "sforest/oracle.hpp"
#include "sforest/orchestrator.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace sforest;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(int idx, const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << idx << ": " << name;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << "\n";
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

Instance sweep_instance(std::uint64_t seed, int max_n) {
  GenParams p;
  p.n = 6 + static_cast<int>(seed % static_cast<std::uint64_t>(max_n - 5));
  p.edge_density = 0.35 + 0.05 * static_cast<double>(seed % 5);
  p.demand_count = 2 + static_cast<int>(seed % 3);
  p.max_cost = 10;
  p.metric = seed % 7 == 0;
  return generate_random(p, seed);
}

Rational sweep_epsilon(std::uint64_t seed) {
  switch (seed % 3) {
    case 0: return Rational(0);
    case 1: return Rational(1, 10);
    default: return Rational(83, 10000);
  }
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  Instance inst = fixtures::matching_gadget(10);
  PipelineParams params;  // defaults carry eps = 83/10000
  Report rep = solve(inst, params);
  c.expect(rep.f1.total_cost == 21, "F1 cost 21");
  c.expect(rep.best_cost <= 14, "best <= 14");
  int singles = 0;
  for (const SupportSet& s : rep.trace.support) {
    if (s.vertices.size() == 1) {
      c.expect(s.y == Rational(1, 2), "singleton y = 1/2");
      ++singles;
    } else {
      c.expect(static_cast<int>(s.vertices.size()) == inst.vertex_count, "one merged set");
      c.expect(s.y == Rational(83, 10000) * 11, "whole-set y = eps*11");
    }
  }
  c.expect(singles == 22, "22 singleton sets");
  OracleLimits lim;
  lim.max_terminals = 22;
  ExactForestResult exact = exact_steiner_forest(inst, lim);
  c.expect(exact.status == OracleStatus::ok, "oracle in limits");
  c.expect(exact.forest.total_cost == 12, "exact cost 12");
  double dt = seconds_since(t0);
  c.expect(dt < 1.0, "runtime < 1 s");
  report(1, "matching-gadget fixture (k=10)", c.ok,
         c.ok ? "F1=21, exact=12, best=" + fraction_str(rep.best_cost) + ", " +
                    std::to_string(dt).substr(0, 5) + "s"
              : c.why);
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  Instance inst = fixtures::relay_path(100);
  MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
  c.expect(trace.deactivation[fixtures::relay_a2] == Rational(6, 5), "deac a2 = 6/5");
  c.expect(trace.deactivation[fixtures::relay_b2] == Rational(6, 5), "deac b2 = 6/5");

  std::vector<int> s4 = {fixtures::relay_a1, fixtures::relay_a2, fixtures::relay_b2,
                         fixtures::relay_a3};
  bool found = false;
  for (const SupportSet& s : trace.support)
    if (s.vertices == s4 && s.birth <= 2 && s.growth_end > 2) found = true;
  c.expect(found, "{a1,a2,b2,a3} is one component at t=2");
  auto labels = actively_connected_classes(trace);
  std::set<int> classes;
  for (int v : s4) classes.insert(labels[v]);
  c.expect(classes.size() >= 2, ">= 2 classes");

  bool rejected = false;
  try {
    gain_of(trace, {s4});
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  c.expect(rejected, "gain_of rejects the component");
  for (const auto& [a, b] : inst.demands) {
    bool accepted = true;
    try {
      gain_of(trace, {{a, b}});
    } catch (const std::invalid_argument&) {
      accepted = false;
    }
    c.expect(accepted, "gain_of accepts demand pairs");
  }
  double dt = seconds_since(t0);
  c.expect(dt < 1.0, "runtime < 1 s");
  report(2, "relay-path fixture (early deactivation)", c.ok, c.ok ? "" : c.why);
}

// ---------------------------------------------------------------- criterion 3
std::vector<std::pair<Instance, MoatTrace>> sweep_cache;

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = sweep_instance(seed, 14);
    MoatTrace trace = run_extended_moat(inst, sweep_epsilon(seed));
    auto issues = verify_ledgers(inst, trace);
    if (!issues.empty()) c.expect(false, "seed " + std::to_string(seed) + ": " + issues[0]);
    sweep_cache.emplace_back(std::move(inst), std::move(trace));
  }
  double dt = seconds_since(t0);
  c.expect(dt < 30.0, "runtime < 30 s");
  report(3, "dual ledger sweep (200 traces)", c.ok,
         c.ok ? std::to_string(dt).substr(0, 5) + "s" : c.why);
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
  Check c;
  PipelineParams params;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto& [inst, trace] = sweep_cache[seed - 1];
    SolutionForest f1 = extract_forest(inst, trace);
    if (!(f1.total_cost <= 2 * trace.y_total()))
      c.expect(false, "seed " + std::to_string(seed) + ": F1 exceeds 2y");
    if (!f1.feasible()) c.expect(false, "seed " + std::to_string(seed) + ": F1 infeasible");
    params.epsilon = sweep_epsilon(seed);
    Report rep = solve(inst, params);
    if (!rep.f2.feasible()) c.expect(false, "seed " + std::to_string(seed) + ": F2 infeasible");
    if (!rep.f3.feasible()) c.expect(false, "seed " + std::to_string(seed) + ": F3 infeasible");
  }
  report(4, "forest bound c(F1) <= 2y and F1/F2/F3 feasible on the sweep", c.ok, c.ok ? "" : c.why);
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
  Check c;
  int sampled = 0;
  for (std::uint64_t seed = 1; seed <= 40 && sampled < 500; ++seed) {
    Instance inst = sweep_instance(seed * 31, 12);
    MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
    auto classes = actively_connected_partition(trace);
    std::vector<std::vector<int>> pool;
    for (const auto& cls : classes) {
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = i + 1; j < cls.size(); ++j) pool.push_back({cls[i], cls[j]});
      for (std::size_t i = 0; i + 2 < cls.size(); ++i)
        pool.push_back({cls[i], cls[i + 1], cls[i + 2]});
    }
    if (pool.size() < 4) continue;
    const std::size_t n = pool.size();
    int taken = 0;
    for (std::size_t stride = 1; stride <= 5 && taken < 30 && sampled < 500; ++stride) {
      for (std::size_t a = 0; a < n && taken < 30 && sampled < 500; ++a) {
        std::size_t i1 = (a + stride) % n, i2 = (a + 2 * stride) % n, i3 = (a + 3 * stride) % n;
        if (a == i1 || a == i2 || a == i3 || i1 == i2 || i1 == i3 || i2 == i3) continue;
        std::vector<std::vector<int>> s1 = {pool[a]};
        std::vector<std::vector<int>> s2 = {pool[a], pool[i1], pool[i2]};
        const auto& extra = pool[i3];
        auto s1x = s1;
        s1x.push_back(extra);
        auto s2x = s2;
        s2x.push_back(extra);
        Rational m1 = gain_of(trace, s1x) - gain_of(trace, s1);
        Rational m2 = gain_of(trace, s2x) - gain_of(trace, s2);
        if (!(m1 >= m2)) c.expect(false, "diminishing returns violated");
        ++sampled;
        ++taken;
      }
    }
  }
  c.expect(sampled >= 500, "sampled " + std::to_string(sampled) + " of 500 triples");
  report(5, "gain submodularity (500 nested triples)", c.ok,
         c.ok ? std::to_string(sampled) + " triples" : c.why);
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
  Check c;
  int sampled = 0;
  for (std::uint64_t seed = 1; sampled < 50 && seed <= 200; ++seed) {
    Instance inst = sweep_instance(seed * 17 + 3, 12);
    MoatTrace trace = run_extended_moat(inst, sweep_epsilon(seed));
    auto labels = actively_connected_classes(trace);

    // sampled plan: one or two disjoint demand pairs plus, when available, a
    // triple from a class
    std::vector<std::vector<int>> plan;
    std::set<int> used;
    for (std::size_t d = 0; d < inst.demands.size() && plan.size() < 2; ++d) {
      auto [a, b] = inst.demands[d];
      if (a == b || used.count(a) || used.count(b)) continue;
      plan.push_back({std::min(a, b), std::max(a, b)});
      used.insert(a);
      used.insert(b);
    }
    if (seed % 2 == 0) {
      for (const auto& cls : actively_connected_partition(trace)) {
        std::vector<int> triple;
        for (int v : cls) {
          if (used.count(v)) continue;
          triple.push_back(v);
          if (triple.size() == 3) break;
        }
        if (triple.size() == 3) {
          for (int v : triple) used.insert(v);
          plan.push_back(std::move(triple));
          break;
        }
      }
    }
    if (plan.empty()) continue;
    Rational g = gain_of(trace, plan);
    Contraction ctr = contract_vertex_groups(inst, plan);
    std::vector<Rational> deac(ctr.contracted.vertex_count);
    for (int v = 0; v < inst.vertex_count; ++v) deac[ctr.vertex_image[v]] = trace.deactivation[v];
    MoatTrace timed = run_timed_moat(ctr.contracted, deac);
    if (2 * timed.y_total() != 2 * trace.y_total() - g)
      c.expect(false, "seed " + std::to_string(seed) + ": contracted dual ledger broken");

    ContractionPlan cp;
    cp.gain_value = g;
    for (const auto& set : plan) {
      CandidateSet cs;
      cs.vertices = set;
      SteinerResult st = steiner_tree_exact(inst, set);
      cs.steiner_cost = st.cost;
      cs.steiner_tree = st.edge_ids;
      cs.class_witness = labels[set[0]];
      cp.selected.push_back(cs);
      cp.cost_value += st.cost;
    }
    SolutionForest f2 = build_f2(inst, trace, cp);
    if (!f2.feasible()) c.expect(false, "seed " + std::to_string(seed) + ": F2 infeasible");
    if (!(f2.total_cost <= 2 * trace.y_total() - cp.gain_value + cp.cost_value))
      c.expect(false, "seed " + std::to_string(seed) + ": F2 exceeds the contraction bound");
    ++sampled;
  }
  c.expect(sampled >= 50, "sampled " + std::to_string(sampled) + " of 50 plans");
  report(6, "contraction ledger (50 sampled plans)", c.ok, c.ok ? "" : c.why);
}

// ---------------------------------------------------------------- criterion 7
void criterion_7() {
  Check c;
  int compared = 0;
  for (std::uint64_t seed = 1; compared < 100 && seed <= 400; ++seed) {
    Instance inst = sweep_instance(seed * 13 + 1, 12);
    MoatTrace trace = run_extended_moat(inst, Rational(83, 10000));
    auto tuples = enumerate_tuples(trace, inst, true);
    if (tuples.size() > 12) continue;
    for (std::size_t i = 0; i < tuples.size(); ++i)
      for (std::size_t j = i + 1; j < tuples.size(); ++j) {
        try {
          laminar_order(tuples[i], tuples[j], trace);
        } catch (const std::exception&) {
          c.expect(false, "trichotomy failed");
        }
      }
    AutarkicCollection dp = max_profit_collection(tuples, trace);
    BruteProfitResult brute = brute_force_max_profit(tuples);
    if (brute.status != OracleStatus::ok) continue;
    if (dp.total_profit != brute.collection.total_profit)
      c.expect(false, "seed " + std::to_string(seed) + ": DP and brute force disagree");
    ++compared;
  }
  c.expect(compared >= 100, "compared " + std::to_string(compared) + " of 100 traces");
  report(7, "autarkic DP vs exhaustive oracle (100 traces)", c.ok, c.ok ? "" : c.why);
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
  Check c;
  PipelineParams params;
  OracleLimits limits;
  int used = 0;
  std::vector<Rational> ratios;
  for (std::uint64_t seed = 1; used < 50 && seed <= 300; ++seed) {
    GenParams p;
    p.n = 7 + static_cast<int>(seed % 6);
    p.edge_density = 0.25 + 0.05 * static_cast<double>(seed % 4);
    p.demand_count = 2 + static_cast<int>(seed % 4);
    p.max_cost = 12;
    p.metric = seed % 5 == 0;
    Instance inst = generate_random(p, seed * 7 + 5);
    std::set<int> terminals;
    for (auto& [a, b] : inst.demands) {
      terminals.insert(a);
      terminals.insert(b);
    }
    if (static_cast<int>(terminals.size()) > limits.max_terminals) continue;
    CompareResult cr = compare_with_exact(inst, params, limits);
    if (cr.status != OracleStatus::ok) continue;
    if (!cr.ratio_defined) continue;
    if (!(cr.report.exact_forest.total_cost <= cr.report.best_cost))
      c.expect(false, "seed " + std::to_string(seed) + ": oracle above pipeline cost");
    if (!(cr.ratio <= 2 * (Rational(1) + params.epsilon)))
      c.expect(false, "seed " + std::to_string(seed) + ": ratio exceeds 2(1+eps)");
    ratios.push_back(cr.ratio);
    ++used;
  }
  c.expect(used >= 50, "solved " + std::to_string(used) + " of 50 instances");
  std::string dist;
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    dist = "ratios min=" + decimal_str(ratios.front(), 4) +
           " med=" + decimal_str(ratios[ratios.size() / 2], 4) +
           " max=" + decimal_str(ratios.back(), 4);
  }
  report(8, "oracle dominance and ratio bound (50 instances)", c.ok, c.ok ? dist : c.why);
}

// ---------------------------------------------------------------- criterion 9
std::string run_cli(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  return out;
}

void criterion_9(const std::string& cli) {
  Check c;
  fs::path dir = fs::temp_directory_path() / "sforest_acceptance";
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "matching_k4.stpf");
    f << serialize_instance(fixtures::matching_gadget(4));
  }
  {
    std::ofstream f(dir / "relay_path.stpf");
    f << serialize_instance(fixtures::relay_path(100));
  }
  std::string solve_a = run_cli(cli + " solve " + (dir / "matching_k4.stpf").string() + " 2>/dev/null");
  std::string solve_b = run_cli(cli + " solve " + (dir / "matching_k4.stpf").string() + " 2>/dev/null");
  c.expect(!solve_a.empty(), "solve produced output");
  c.expect(solve_a == solve_b, "solve outputs byte-identical");

  std::string bench_a = run_cli(cli + " bench " + dir.string() + " --seed 1 2>/dev/null");
  std::string bench_b = run_cli(cli + " bench " + dir.string() + " --seed 1 2>/dev/null");
  c.expect(!bench_a.empty(), "bench produced output");
  c.expect(bench_a == bench_b, "bench outputs byte-identical");
  report(9, "CLI determinism (solve, bench)", c.ok, c.ok ? "" : c.why);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "./sforest";
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9(cli);
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

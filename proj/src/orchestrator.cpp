#include "sforest/orchestrator.hpp"

#include <chrono>
#include <cmath>

namespace sforest {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> v)
    : std::runtime_error("instance does not validate: " + join(v)), violations(std::move(v)) {
  for (const auto& s : violations)
    if (s.find("infeasible") != std::string::npos) infeasible_demand = true;
}

void validate_params(const PipelineParams& params) {
  if (params.epsilon < 0) throw std::invalid_argument("params: epsilon must be >= 0");
  if (params.alpha < 0 || params.alpha > 1)
    throw std::invalid_argument("params: alpha must be in [0,1]");
  if (params.gamma <= 0) throw std::invalid_argument("params: gamma must be > 0");
  if (params.k < 2 || params.k > kMaxExactTerminals)
    throw std::invalid_argument("params: k must be between 2 and " +
                                std::to_string(kMaxExactTerminals));
}

Rational Report::implied_alpha_plus_delta() const {
  int log2k = 0;
  for (int p = 1; 2 * p <= params.k; p *= 2) ++log2k;
  return (params.alpha + params.gamma) * (Rational(1) + Rational(1, log2k));
}

Report solve(const Instance& inst, const PipelineParams& params) {
  validate_params(params);
  auto violations = validate(inst);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  Report rep;
  rep.params = params;
  auto t_start = std::chrono::steady_clock::now();

  auto t0 = std::chrono::steady_clock::now();
  rep.trace = run_extended_moat(inst, params.epsilon);
  rep.duals = rep.trace.dual_summary();
  rep.times.moat_seconds = since(t0);

  t0 = std::chrono::steady_clock::now();
  rep.f1 = extract_forest(inst, rep.trace);
  rep.times.f1_seconds = since(t0);

  t0 = std::chrono::steady_clock::now();
  auto candidates = enumerate_restricted_sets(rep.trace, inst, params.k, params.candidate_cap);
  rep.plan = maximize_profit(inst, candidates, rep.trace, params.alpha, params.gamma,
                             params.profit_options);
  rep.f2 = build_f2(inst, rep.trace, rep.plan);
  rep.times.f2_seconds = since(t0);

  t0 = std::chrono::steady_clock::now();
  auto tuples = enumerate_tuples(rep.trace, inst, params.include_triples, params.tuple_limits);
  rep.collection = max_profit_collection(tuples, rep.trace);
  rep.f3 = build_f3(inst, rep.trace, rep.collection,
                    params.classic_gw_inner ? Rational(0) : params.epsilon);
  rep.times.f3_seconds = since(t0);

  rep.best_index = 1;
  rep.best_cost = rep.f1.total_cost;
  if (rep.f2.total_cost < rep.best_cost) {
    rep.best_index = 2;
    rep.best_cost = rep.f2.total_cost;
  }
  if (rep.f3.total_cost < rep.best_cost) {
    rep.best_index = 3;
    rep.best_cost = rep.f3.total_cost;
  }
  rep.times.total_seconds = since(t_start);
  return rep;
}

CompareResult compare_with_exact(const Instance& inst, const PipelineParams& params,
                                 const OracleLimits& limits) {
  CompareResult out;
  out.report = solve(inst, params);
  ExactForestResult exact = exact_steiner_forest(inst, limits);
  if (exact.status != OracleStatus::ok) {
    out.status = exact.status;
    return out;
  }
  Report& rep = out.report;
  rep.has_exact = true;
  rep.exact_forest = exact.forest;
  const Rational& opt = exact.forest.total_cost;
  if (opt != 0) {
    out.ratio_defined = true;
    out.ratio = rep.best_cost / opt;
  } else if (rep.best_cost == 0) {
    out.ratio_defined = true;
    out.ratio = 1;
  }
  rep.ratio_defined = out.ratio_defined;
  rep.ratio = out.ratio;
  rep.excess_opt = excess(exact.forest, rep.trace);
  rep.lambda_opt = lambda_diagnostic(inst, exact.forest, rep.trace);
  rep.excess_case = rep.excess_opt >= Rational(29, 2500) * opt;
  rep.profit_case = rep.collection.total_profit >= Rational(3, 100) * opt;
  return out;
}

}  // namespace sforest

#pragma once

#include "sforest/autarkic.hpp"
#include "sforest/gain.hpp"
#include "sforest/moat.hpp"
#include "sforest/oracle.hpp"

namespace sforest {

struct PipelineParams {
  Rational epsilon{83, 10000};
  Rational alpha{9, 100};
  Rational gamma{1, 100};
  int k = 3;
  bool include_triples = true;
  bool classic_gw_inner = false;  // run the inner 2-approximation of F3 with eps = 0
  std::uint64_t seed = 0;
  std::size_t candidate_cap = 200000;
  TupleLimits tuple_limits;
  ProfitSearchOptions profit_options;
};

void validate_params(const PipelineParams& params);

struct ValidationError : std::runtime_error {
  std::vector<std::string> violations;
  bool infeasible_demand = false;
  explicit ValidationError(std::vector<std::string> v);
};

struct StageTimes {
  double moat_seconds = 0;
  double f1_seconds = 0;
  double f2_seconds = 0;
  double f3_seconds = 0;
  double total_seconds = 0;
};

struct Report {
  PipelineParams params;
  MoatTrace trace;
  DualSummary duals;
  SolutionForest f1, f2, f3;
  ContractionPlan plan;
  AutarkicCollection collection;
  int best_index = 1;  // 1, 2 or 3; ties prefer the earlier forest
  Rational best_cost;
  StageTimes times;

  // filled by compare_with_exact
  bool has_exact = false;
  SolutionForest exact_forest;
  bool ratio_defined = false;
  Rational ratio;
  Rational excess_opt;   // excess of the exact optimum w.r.t. the trace duals
  Rational lambda_opt;   // Lambda of the exact optimum
  bool excess_case = false;   // excess(OPT) >= 0.0116 * c(OPT)
  bool profit_case = false;   // profit(collection) >= 0.03 * c(OPT)

  const SolutionForest& best() const { return best_index == 1 ? f1 : best_index == 2 ? f2 : f3; }
  Rational implied_alpha_plus_delta() const;
};

// The four-step pipeline: extended moat run, F1 by forest extraction, F2 by
// gain contraction, F3 by autarkic contraction, cheapest of the three.
Report solve(const Instance& inst, const PipelineParams& params);

struct CompareResult {
  OracleStatus status = OracleStatus::ok;
  bool ratio_defined = false;
  Rational ratio;
  Report report;
};

CompareResult compare_with_exact(const Instance& inst, const PipelineParams& params,
                                 const OracleLimits& limits = {});

}  // namespace sforest

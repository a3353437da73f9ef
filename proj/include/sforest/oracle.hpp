#pragma once

#include "sforest/autarkic.hpp"
#include "sforest/instance.hpp"
#include "sforest/moat.hpp"

namespace sforest {

struct OracleLimits {
  int max_terminals = 10;
  std::size_t max_tuples = 12;
  double time_budget_seconds = 60;  // advisory; enumeration bounds are the hard limits
};

enum class OracleStatus { ok, limits_exceeded };

struct ExactForestResult {
  OracleStatus status = OracleStatus::ok;
  SolutionForest forest;
};

// Exact Steiner forest by enumerating partitions of the demand groups
// (demand pairs pre-merged, restricted-growth strings over the groups);
// the cost of a partition is the sum of exact Steiner trees per block.
// The result is inclusionwise minimal: removable zero-cost edges are
// dropped.
ExactForestResult exact_steiner_forest(const Instance& inst, const OracleLimits& limits = {});

struct BruteProfitResult {
  OracleStatus status = OracleStatus::ok;
  AutarkicCollection collection;
};

// Exhaustive maximum over all crossing-free subsets of the tuples.
BruteProfitResult brute_force_max_profit(const std::vector<AutarkicTuple>& tuples,
                                         const OracleLimits& limits = {});

// Every MoatTrace invariant, plus the timed-run fixpoint and, for a sampled
// contraction plan, the tight-load equality between the original and
// contracted timed runs on non-internal edges.
std::vector<std::string> verify_ledgers(const Instance& inst, const MoatTrace& trace);

}  // namespace sforest

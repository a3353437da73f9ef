#pragma once

#include "sforest/instance.hpp"

#include <optional>

namespace sforest {

enum class SetKind { sep, unsep, zero_growth };

// One laminar dual set. The engine creates a set for every component that
// ever exists (singletons at time 0, one merged set per merge group), so
// the family of vertex sets is laminar by construction.
struct SupportSet {
  int id = 0;
  std::vector<int> vertices;  // sorted
  Rational birth;
  Rational growth_end;  // birth + y; equals birth for zero-growth sets
  Rational y;
  std::optional<int> parent;  // set it merged into
  SetKind kind = SetKind::zero_growth;
  std::vector<int> sep_fingerprint;  // sorted demand indices separated by the set
};

struct TimelineInterval {
  Rational t0;
  Rational t1;
  std::vector<int> active_set_ids;  // sorted
};

struct MergeEvent {
  Rational time;
  std::vector<int> merged_ids;  // sorted
  int new_id = 0;
};

struct DualSummary {
  Rational y_sep_total;
  Rational y_unsep_total;
  Rational y_total;
};

enum class TraceMode { extended, timed };

// Complete history of one moat-growing run.
struct MoatTrace {
  TraceMode mode = TraceMode::extended;
  Rational epsilon;  // meaningful for extended runs only
  std::vector<SupportSet> support;  // support[id].id == id
  std::vector<TimelineInterval> timeline;
  std::vector<Rational> deactivation;  // per vertex
  std::vector<MergeEvent> merge_events;
  std::vector<std::pair<int, Rational>> budgets_final;  // live set id -> budget (all zero)
  std::vector<int> tight_edges;        // edge ids in tightening order (time asc, id asc)
  std::vector<Rational> tight_times;   // aligned with tight_edges

  DualSummary dual_summary() const;
  Rational y_total() const { return dual_summary().y_total; }
  Rational end_time() const { return timeline.empty() ? Rational(0) : timeline.back().t1; }
};

// The epsilon-extended engine: demand-active components accrue budget at
// rate epsilon, budget-active components burn it at unit rate, merges sum
// budgets, growth stops when no active component remains.
MoatTrace run_extended_moat(const Instance& inst, const Rational& epsilon);

// Time-based engine: a component stays active while t < deac_v for one of
// its members. Fed the deactivation vector of an extended run on the same
// instance it reproduces that run's dual vector exactly.
MoatTrace run_timed_moat(const Instance& inst, const std::vector<Rational>& deac);

// Tight-edge forest plus reverse delete, scanned in reverse order of
// tightening time with ties by descending edge id.
SolutionForest extract_forest(const Instance& inst, const MoatTrace& trace);

// Equivalence classes of the actively-connected relation, as a label per
// vertex (label = smallest member id of the class).
std::vector<int> actively_connected_classes(const MoatTrace& trace);
std::vector<std::vector<int>> actively_connected_partition(const MoatTrace& trace);

// c(F) - y(U_sep). Throws std::invalid_argument for infeasible forests.
Rational excess(const SolutionForest& forest, const MoatTrace& trace);

// Sum of y_U over support sets crossed by the forest at least twice.
Rational lambda_diagnostic(const Instance& inst, const SolutionForest& forest,
                           const MoatTrace& trace);

// Dual load of an edge under the trace: sum of y_U over sets with exactly
// one endpoint of e inside.
Rational edge_dual_load(const Instance& inst, const MoatTrace& trace, int edge_id);

}  // namespace sforest

#pragma once

#include "sforest/moat.hpp"

namespace sforest {

struct CandidateSet {
  std::vector<int> vertices;  // sorted, size <= k, one actively-connected class
  Rational steiner_cost;
  std::vector<int> steiner_tree;  // edge ids, sorted
  int class_witness = -1;         // label of the class containing the set
};

struct ContractionPlan {
  std::vector<CandidateSet> selected;  // pairwise disjoint
  Rational gain_value;
  Rational cost_value;
  Rational profit() const { return gain_value - cost_value; }
};

// Every size-(2..k) subset of each actively-connected class with its exact
// Steiner cost. Subsets without a Steiner tree (unreachable vertices) are
// dropped. Throws std::runtime_error when the subset count would exceed
// the cap.
std::vector<CandidateSet> enumerate_restricted_sets(const MoatTrace& trace, const Instance& inst,
                                                    int k, std::size_t candidate_cap = 200000);

// 2 * sum over timeline intervals of (|A^t| - |A^t / S|) * length. Rejects
// sets that are not actively connected with std::invalid_argument.
Rational gain_of(const MoatTrace& trace, const std::vector<std::vector<int>>& sets);
Rational gain_of(const MoatTrace& trace, const std::vector<CandidateSet>& sets);

struct ProfitSearchOptions {
  int enum_depth_cap = 1;    // partial enumeration depth is min(ceil(1/gamma), this)
  int threshold_cap = 12;    // distinct-cost thresholds kept for the low-cost pool
  int seed_cap = 4;          // high-cost guesses tried per threshold, ranked by density
};

// Density greedy over the low-cost pool wrapped in partial enumeration over
// high-cost elements plus the pool threshold; returns the best prefix by
// gain - cost, never worse than the empty plan. alpha only enters the
// guarantee, not the computation.
ContractionPlan maximize_profit(const Instance& inst, const std::vector<CandidateSet>& candidates,
                                const MoatTrace& trace, const Rational& alpha,
                                const Rational& gamma, const ProfitSearchOptions& opts = {});

// Contract the plan's sets (each carries one shared deactivation time), run
// the timed engine with the inherited vector, extract a forest, undo the
// contraction and add the plan's Steiner trees.
SolutionForest build_f2(const Instance& inst, const MoatTrace& trace, const ContractionPlan& plan);

// Quotient instance obtained by collapsing each group to a single vertex.
// Self-loop edges and self-demands disappear; everything else keeps a back
// reference to its original id.
struct Contraction {
  Instance contracted;
  std::vector<int> vertex_image;  // original vertex -> contracted vertex
  std::vector<int> edge_origin;   // contracted edge id -> original edge id
  std::vector<int> demand_origin; // contracted demand id -> original demand id
};
Contraction contract_vertex_groups(const Instance& inst, const std::vector<std::vector<int>>& groups);

}  // namespace sforest

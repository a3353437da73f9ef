#pragma once

#include "sforest/gain.hpp"
#include "sforest/moat.hpp"

namespace sforest {

struct AutarkicTuple {
  std::vector<int> member_set_ids;  // 2 or 3 support set ids, sorted
  Rational witness_time;            // an instant at which all members are active
  std::vector<int> sep_union;       // sorted demand indices separated by some member

  struct Representative {
    int demand = -1;
    std::string role;  // "pair" for pairs, "12"/"13"/"23" for triple member pairs
  };
  std::vector<Representative> representatives;
  std::vector<int> connector;  // edge ids, sorted
  Rational cost;
  Rational coverage;
  Rational profit;  // 2*coverage - cost
};

struct AutarkicCollection {
  std::vector<AutarkicTuple> tuples;
  Rational total_coverage;
  Rational total_cost;
  Rational total_profit;
};

struct TupleLimits {
  std::size_t triple_cap = 100000;  // enumeration guard with diagnostic
  int rep_candidates_per_slot = 8;  // cheapest demands tried per member pair
};

// All autarkic pairs (and triples when enabled) over supp(y), each with
// designated representatives, connector, coverage and profit filled in.
std::vector<AutarkicTuple> enumerate_tuples(const MoatTrace& trace, const Instance& inst,
                                            bool include_triples, const TupleLimits& limits = {});

enum class LaminarRelation { subset, superset, disjoint };

// The trichotomy of the laminar order on tuples; anything else is an
// internal consistency failure and throws std::logic_error.
LaminarRelation laminar_order(const AutarkicTuple& p, const AutarkicTuple& q,
                              const MoatTrace& trace);

// Maximum-profit crossing-free collection via the dynamic program over the
// subset order. Zero-profit tuples are left out on ties.
AutarkicCollection max_profit_collection(const std::vector<AutarkicTuple>& tuples,
                                         const MoatTrace& trace);

// Buy the connectors, contract each connector's vertex set, run the
// epsilon-extended engine plus forest extraction on the quotient, undo the
// contraction and add the connectors back.
SolutionForest build_f3(const Instance& inst, const MoatTrace& trace,
                        const AutarkicCollection& coll, const Rational& epsilon);

}  // namespace sforest

#include "sforest/autarkic.hpp"

#include "sforest/dsu.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace sforest {

namespace {

bool sorted_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (a[i] > b[j])
      ++j;
    else
      return false;
  }
  return true;
}

bool sorted_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool sorted_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (a[i] > b[j])
      ++j;
    else
      return true;
  }
  return false;
}

// Activity interval of a support set is [birth, growth_end); a common
// witness instant exists iff max(birth) < min(growth_end).
bool co_active(const std::vector<const SupportSet*>& sets, Rational& witness) {
  Rational lo = sets[0]->birth, hi = sets[0]->growth_end;
  for (const SupportSet* s : sets) {
    lo = std::max(lo, s->birth);
    hi = std::min(hi, s->growth_end);
  }
  if (lo < hi) {
    witness = lo;
    return true;
  }
  return false;
}

struct RepChoice {
  std::vector<AutarkicTuple::Representative> reps;
  std::vector<int> connector;
  Rational cost;
  bool ok = false;
};

// Pair connector: the demand in sep(P) with the cheapest endpoint distance
// (lowest index on ties), realized as a shortest path.
RepChoice pair_connector(const Instance& inst, const DistanceIndex& dist,
                         const std::vector<int>& fingerprint) {
  RepChoice out;
  int best = -1;
  Rational best_d;
  for (int d : fingerprint) {
    auto [a, b] = inst.demands[d];
    if (!dist.reachable(a, b)) continue;
    Rational dd = dist.distance(a, b);
    if (best < 0 || dd < best_d) {
      best = d;
      best_d = dd;
    }
  }
  if (best < 0) return out;
  auto [a, b] = inst.demands[best];
  out.reps.push_back({best, "pair"});
  out.connector = dist.path_edges(a, b);
  std::sort(out.connector.begin(), out.connector.end());
  out.cost = best_d;
  out.ok = true;
  return out;
}

// Triple connector: one designated representative per member pair with
// crossing demands; the connector is an exact Steiner tree on the chosen
// endpoints. Up to rep_candidates_per_slot cheapest demands are tried per
// slot; past the combination cap we fall back to cheapest-per-slot.
RepChoice triple_connector(const Instance& inst, const DistanceIndex& dist,
                           const std::vector<const SupportSet*>& members, int rep_cap) {
  RepChoice out;
  struct Slot {
    std::string role;
    std::vector<int> demands;  // sorted by (distance, index)
  };
  std::vector<Slot> slots;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      std::vector<int> common;
      std::set_intersection(members[i]->sep_fingerprint.begin(), members[i]->sep_fingerprint.end(),
                            members[j]->sep_fingerprint.begin(), members[j]->sep_fingerprint.end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      std::sort(common.begin(), common.end(), [&](int a, int b) {
        const Rational& da = dist.distance(inst.demands[a].first, inst.demands[a].second);
        const Rational& db = dist.distance(inst.demands[b].first, inst.demands[b].second);
        if (da != db) return da < db;
        return a < b;
      });
      if (static_cast<int>(common.size()) > rep_cap) common.resize(rep_cap);
      slots.push_back({std::to_string(i + 1) + std::to_string(j + 1), std::move(common)});
    }
  if (slots.empty()) return out;

  std::size_t combos = 1;
  for (const Slot& s : slots) combos *= s.demands.size();
  if (combos > 512)
    for (Slot& s : slots) s.demands.resize(1);

  std::vector<std::size_t> pick(slots.size(), 0);
  bool have = false;
  std::vector<std::size_t> best_pick;
  Rational best_cost;
  SteinerResult best_tree;
  while (true) {
    std::vector<int> terminals;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      auto [a, b] = inst.demands[slots[s].demands[pick[s]]];
      terminals.push_back(a);
      terminals.push_back(b);
    }
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    SteinerResult st = steiner_tree_exact(inst, terminals, kMaxExactTerminals);
    if (st.exists && (!have || st.cost < best_cost)) {
      have = true;
      best_cost = st.cost;
      best_pick = pick;
      best_tree = std::move(st);
    }
    std::size_t s = 0;
    while (s < slots.size() && ++pick[s] == slots[s].demands.size()) {
      pick[s] = 0;
      ++s;
    }
    if (s == slots.size()) break;
  }
  if (!have) return out;
  for (std::size_t s = 0; s < slots.size(); ++s)
    out.reps.push_back({slots[s].demands[best_pick[s]], slots[s].role});
  out.connector = best_tree.edge_ids;
  std::sort(out.connector.begin(), out.connector.end());
  out.cost = best_cost;
  out.ok = true;
  return out;
}

}  // namespace

std::vector<AutarkicTuple> enumerate_tuples(const MoatTrace& trace, const Instance& inst,
                                            bool include_triples, const TupleLimits& limits) {
  std::vector<const SupportSet*> sep_sets;
  for (const SupportSet& s : trace.support)
    if (s.kind == SetKind::sep) sep_sets.push_back(&s);

  // coverage groups: total dual mass per fingerprint
  std::map<std::vector<int>, Rational> fp_mass;
  for (const SupportSet* s : sep_sets) fp_mass[s->sep_fingerprint] += s->y;

  DistanceIndex dist(inst);
  std::vector<AutarkicTuple> out;

  auto coverage_of = [&](const std::vector<const SupportSet*>& members) {
    std::vector<const std::vector<int>*> fps;
    Rational cov = 0;
    for (const SupportSet* m : members) {
      bool seen = false;
      for (const auto* f : fps)
        if (*f == m->sep_fingerprint) seen = true;
      if (!seen) {
        fps.push_back(&m->sep_fingerprint);
        cov += fp_mass.at(m->sep_fingerprint);
      }
    }
    return cov;
  };

  auto finish = [&](std::vector<const SupportSet*> members, const Rational& witness,
                    RepChoice&& rc) {
    AutarkicTuple t;
    for (const SupportSet* m : members) t.member_set_ids.push_back(m->id);
    std::sort(t.member_set_ids.begin(), t.member_set_ids.end());
    t.witness_time = witness;
    for (const SupportSet* m : members) t.sep_union = sorted_union(t.sep_union, m->sep_fingerprint);
    t.representatives = std::move(rc.reps);
    t.connector = std::move(rc.connector);
    t.cost = std::move(rc.cost);
    t.coverage = coverage_of(members);
    t.profit = 2 * t.coverage - t.cost;
    out.push_back(std::move(t));
  };

  // pairs: equal nonempty fingerprints, disjoint, simultaneously active
  std::map<std::vector<int>, std::vector<const SupportSet*>> by_fp;
  for (const SupportSet* s : sep_sets) by_fp[s->sep_fingerprint].push_back(s);
  for (const auto& [fp, group] : by_fp) {
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        std::vector<const SupportSet*> members = {group[i], group[j]};
        Rational witness;
        if (!sorted_disjoint(group[i]->vertices, group[j]->vertices)) continue;
        if (!co_active(members, witness)) continue;
        RepChoice rc = pair_connector(inst, dist, fp);
        if (!rc.ok) continue;
        finish(std::move(members), witness, std::move(rc));
      }
  }

  if (include_triples) {
    std::size_t produced = 0;
    const std::size_t n = sep_sets.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!sorted_disjoint(sep_sets[i]->vertices, sep_sets[j]->vertices)) continue;
        for (std::size_t l = j + 1; l < n; ++l) {
          if (!sorted_disjoint(sep_sets[i]->vertices, sep_sets[l]->vertices)) continue;
          if (!sorted_disjoint(sep_sets[j]->vertices, sep_sets[l]->vertices)) continue;
          std::vector<const SupportSet*> members = {sep_sets[i], sep_sets[j], sep_sets[l]};
          Rational witness;
          if (!co_active(members, witness)) continue;
          // autarky: every separated demand keeps both endpoints inside the union
          std::vector<int> union_vs = sorted_union(
              sorted_union(sep_sets[i]->vertices, sep_sets[j]->vertices), sep_sets[l]->vertices);
          std::vector<int> all_fp = sorted_union(
              sorted_union(sep_sets[i]->sep_fingerprint, sep_sets[j]->sep_fingerprint),
              sep_sets[l]->sep_fingerprint);
          bool autarkic = true;
          for (int d : all_fp) {
            auto [a, b] = inst.demands[d];
            if (!std::binary_search(union_vs.begin(), union_vs.end(), a) ||
                !std::binary_search(union_vs.begin(), union_vs.end(), b)) {
              autarkic = false;
              break;
            }
          }
          if (!autarkic) continue;
          if (++produced > limits.triple_cap)
            throw std::runtime_error("enumerate_tuples: triple count exceeds cap of " +
                                     std::to_string(limits.triple_cap));
          RepChoice rc = triple_connector(inst, dist, members, limits.rep_candidates_per_slot);
          if (!rc.ok) continue;
          finish(std::move(members), witness, std::move(rc));
        }
      }
  }
  return out;
}

LaminarRelation laminar_order(const AutarkicTuple& p, const AutarkicTuple& q,
                              const MoatTrace& trace) {
  auto contained = [&](const AutarkicTuple& a, const AutarkicTuple& b) {
    for (int ai : a.member_set_ids) {
      bool inside = false;
      for (int bj : b.member_set_ids)
        if (sorted_subset(trace.support[ai].vertices, trace.support[bj].vertices)) {
          inside = true;
          break;
        }
      if (!inside) return false;
    }
    return true;
  };
  bool p_in_q = contained(p, q);
  bool q_in_p = contained(q, p);
  if (p_in_q && q_in_p) throw std::logic_error("laminar_order: tuples coincide");
  if (p_in_q) return LaminarRelation::subset;
  if (q_in_p) return LaminarRelation::superset;
  for (int ai : p.member_set_ids)
    for (int bj : q.member_set_ids)
      if (!sorted_disjoint(trace.support[ai].vertices, trace.support[bj].vertices))
        throw std::logic_error("laminar_order: tuple pair is neither nested nor disjoint");
  return LaminarRelation::disjoint;
}

AutarkicCollection max_profit_collection(const std::vector<AutarkicTuple>& tuples,
                                         const MoatTrace& trace) {
  AutarkicCollection out;
  out.total_coverage = 0;
  out.total_cost = 0;
  out.total_profit = 0;
  const int m = static_cast<int>(tuples.size());
  if (m == 0) return out;

  // strict subset and crossing matrices
  std::vector<std::vector<char>> sub(m, std::vector<char>(m, 0));
  std::vector<std::vector<char>> cross(m, std::vector<char>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (laminar_order(tuples[i], tuples[j], trace) == LaminarRelation::subset) sub[i][j] = 1;
      if (sorted_intersect(tuples[i].sep_union, tuples[j].sep_union)) cross[i][j] = 1;
    }

  // process in an order where subsets come first
  std::vector<int> order(m), depth(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (sub[j][i]) ++depth[i];  // tuples below i
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (depth[a] != depth[b]) return depth[a] < depth[b];
    return a < b;
  });

  auto maximal_among = [&](const std::vector<int>& pool) {
    std::vector<int> maximal;
    for (int i : pool) {
      bool dominated = false;
      for (int j : pool)
        if (sub[i][j]) {
          dominated = true;
          break;
        }
      if (!dominated) maximal.push_back(i);
    }
    return maximal;
  };

  std::vector<Rational> dp(m);
  std::vector<char> take(m, 0);
  std::vector<std::vector<int>> dp_children(m);
  for (int q : order) {
    std::vector<int> below, below_noncross;
    for (int i = 0; i < m; ++i)
      if (sub[i][q]) {
        below.push_back(i);
        if (!cross[i][q]) below_noncross.push_back(i);
      }
    Rational excluded = 0;
    std::vector<int> excl_children = maximal_among(below);
    for (int c : excl_children) excluded += dp[c];
    Rational included = tuples[q].profit;
    std::vector<int> incl_children = maximal_among(below_noncross);
    for (int c : incl_children) included += dp[c];
    if (included > excluded) {
      dp[q] = included;
      take[q] = 1;
      dp_children[q] = std::move(incl_children);
    } else {
      dp[q] = excluded;
      take[q] = 0;
      dp_children[q] = std::move(excl_children);
    }
  }

  std::vector<int> roots;
  for (int i = 0; i < m; ++i) roots.push_back(i);
  roots = maximal_among(roots);

  std::vector<int> chosen;
  std::vector<int> stack = roots;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    if (take[q]) chosen.push_back(q);
    for (int c : dp_children[q]) stack.push_back(c);
  }
  std::sort(chosen.begin(), chosen.end());
  for (int q : chosen) {
    out.tuples.push_back(tuples[q]);
    out.total_coverage += tuples[q].coverage;
    out.total_cost += tuples[q].cost;
    out.total_profit += tuples[q].profit;
  }
  return out;
}

SolutionForest build_f3(const Instance& inst, const MoatTrace& trace,
                        const AutarkicCollection& coll, const Rational& epsilon) {
  for (const AutarkicTuple& t : coll.tuples)
    for (int id : t.member_set_ids)
      if (id < 0 || id >= static_cast<int>(trace.support.size()))
        throw std::invalid_argument("build_f3: tuple references an unknown support set");
  std::vector<int> connector_edges;
  for (const AutarkicTuple& t : coll.tuples)
    connector_edges.insert(connector_edges.end(), t.connector.begin(), t.connector.end());
  std::sort(connector_edges.begin(), connector_edges.end());
  connector_edges.erase(std::unique(connector_edges.begin(), connector_edges.end()),
                        connector_edges.end());

  // contract each connector's vertex set; overlapping connectors collapse
  // into one group through the shared union-find
  std::vector<std::vector<int>> groups;
  for (const AutarkicTuple& t : coll.tuples) {
    std::vector<int> vs;
    for (int e : t.connector) {
      vs.push_back(inst.edges[e].u);
      vs.push_back(inst.edges[e].v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (!vs.empty()) groups.push_back(std::move(vs));
  }

  Contraction ctr = contract_vertex_groups(inst, groups);
  MoatTrace inner = run_extended_moat(ctr.contracted, epsilon);
  SolutionForest inner_forest = extract_forest(ctr.contracted, inner);

  std::vector<int> edges = connector_edges;
  for (int e : inner_forest.edge_ids) edges.push_back(ctr.edge_origin[e]);
  return make_forest(inst, std::move(edges));
}

}  // namespace sforest

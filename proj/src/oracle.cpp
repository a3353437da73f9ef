#include "sforest/oracle.hpp"

#include "sforest/dsu.hpp"
#include "sforest/gain.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace sforest {

namespace {

std::vector<int> collect_terminals(const Instance& inst) {
  std::vector<int> t;
  for (const auto& [a, b] : inst.demands) {
    t.push_back(a);
    t.push_back(b);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace

namespace {

// An optimal forest splits the demand groups (demand pairs pre-merged into
// connectivity groups) into blocks, one tree per block; its cost is the sum
// of exact Steiner trees over the block terminals. The subset DP below
// walks all block partitions bottom-up. The single-block option of a mask
// is priced exactly only when a cheap lower bound (terminal diameter, then
// the Steiner cost of a farthest-point sample) fails to dominate the best
// split, so large blocks are almost never evaluated.
struct ForestOracle {
  const Instance& inst;
  std::vector<std::vector<int>> groups;
  int g = 0;
  DistanceIndex dist;

  std::map<unsigned, SteinerResult> exact_blocks;

  // Dreyfus-Wagner stays tractable well past the default oracle limit, so
  // raising max_terminals for a fixture does not blow up single blocks.
  static constexpr int kDwCap = 12;

  explicit ForestOracle(const Instance& inst_) : inst(inst_), dist(inst_) {}

  std::vector<int> block_terminals(unsigned mask) const {
    std::vector<int> terms;
    for (int i = 0; i < g; ++i)
      if (mask >> i & 1) terms.insert(terms.end(), groups[i].begin(), groups[i].end());
    std::sort(terms.begin(), terms.end());
    return terms;
  }

  // max pairwise distance; unreachable pairs make the block impossible
  bool diameter_bound(const std::vector<int>& terms, Rational& lb) const {
    lb = 0;
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        if (!dist.reachable(terms[i], terms[j])) return false;
        lb = std::max(lb, dist.distance(terms[i], terms[j]));
      }
    return true;
  }

  std::vector<int> farthest_sample(const std::vector<int>& terms, int cap) const {
    if (static_cast<int>(terms.size()) <= cap) return terms;
    int best_a = terms[0], best_b = terms[1];
    Rational best_d = dist.distance(best_a, best_b);
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j)
        if (dist.distance(terms[i], terms[j]) > best_d) {
          best_d = dist.distance(terms[i], terms[j]);
          best_a = terms[i];
          best_b = terms[j];
        }
    std::vector<int> picked = {best_a, best_b};
    while (static_cast<int>(picked.size()) < cap) {
      int next = -1;
      Rational next_d;
      for (int t : terms) {
        if (std::find(picked.begin(), picked.end(), t) != picked.end()) continue;
        Rational mind = dist.distance(t, picked[0]);
        for (int p : picked) mind = std::min(mind, dist.distance(t, p));
        if (next < 0 || mind > next_d) {
          next = t;
          next_d = mind;
        }
      }
      picked.push_back(next);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  // metric-closure MST over the terminals; half of it lower-bounds the
  // Steiner cost
  Rational mst_closure(const std::vector<int>& terms) const {
    const std::size_t n = terms.size();
    std::vector<char> in_tree(n, 0);
    std::vector<Rational> best(n);
    Rational total = 0;
    in_tree[0] = 1;
    for (std::size_t i = 1; i < n; ++i) best[i] = dist.distance(terms[0], terms[i]);
    for (std::size_t round = 1; round < n; ++round) {
      std::size_t pick = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (in_tree[i]) continue;
        if (pick == 0 || best[i] < best[pick]) pick = i;
      }
      in_tree[pick] = 1;
      total += best[pick];
      for (std::size_t i = 1; i < n; ++i)
        if (!in_tree[i]) best[i] = std::min(best[i], dist.distance(terms[pick], terms[i]));
    }
    return total;
  }

  std::map<std::vector<int>, Rational> sample_cache;

  // Steiner cost of a farthest-point sample: a lower bound by monotonicity
  Rational sampled_bound(const std::vector<int>& terms, int cap) {
    std::vector<int> sample = farthest_sample(terms, cap);
    auto it = sample_cache.find(sample);
    if (it != sample_cache.end()) return it->second;
    SteinerResult st = steiner_tree_unbounded(inst, sample);
    Rational cost = st.exists ? st.cost : Rational(0);
    sample_cache.emplace(std::move(sample), cost);
    return cost;
  }

  bool exactify(unsigned mask, const std::vector<int>& terms, Rational& out_cost) {
    SteinerResult st = steiner_tree_unbounded(inst, terms);
    if (!st.exists) return false;
    out_cost = st.cost;
    exact_blocks[mask] = std::move(st);
    return true;
  }

  // returns false when an oversized block cannot be priced or dominated
  bool run(ExactForestResult& out) {
    const unsigned full = (1u << g) - 1;
    std::vector<Rational> dp(full + 1, Rational(0));
    std::vector<int> choice(full + 1, -2);  // -1 = single block, else the split submask
    std::vector<char> feasible(full + 1, 1);

    for (unsigned mask = 1; mask <= full; ++mask) {
      std::vector<int> terms = block_terminals(mask);
      Rational lb;
      bool connected = diameter_bound(terms, lb);

      // best split into a part containing the lowest group plus the rest
      bool have_split = false;
      Rational split;
      unsigned split_sub = 0;
      unsigned low = mask & (~mask + 1);
      if (mask != low) {
        for (unsigned sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
          if (!(sub & low)) continue;
          if (!feasible[sub] || !feasible[mask ^ sub]) continue;
          Rational c = dp[sub] + dp[mask ^ sub];
          if (!have_split || c < split) {
            have_split = true;
            split = c;
            split_sub = sub;
          }
        }
      }

      if (!connected) {  // single block impossible
        if (!have_split) {
          feasible[mask] = 0;
          continue;
        }
        dp[mask] = split;
        choice[mask] = static_cast<int>(split_sub);
        continue;
      }
      if (have_split && lb >= split) {  // split dominates, block never needed
        dp[mask] = split;
        choice[mask] = static_cast<int>(split_sub);
        continue;
      }
      // the block could win: price it exactly, strengthening the bound for
      // oversized terminal sets with a sampled Steiner tree first
      if (static_cast<int>(terms.size()) > kDwCap) {
        Rational half_mst = mst_closure(terms) / 2;
        lb = std::max(lb, half_mst);
        for (int cap : {5, 7, 9, kDwCap}) {
          if (have_split && lb >= split) break;
          lb = std::max(lb, sampled_bound(terms, cap));
        }
        if (have_split && lb >= split) {
          dp[mask] = split;
          choice[mask] = static_cast<int>(split_sub);
          continue;
        }
        return false;  // oversized block survives every bound
      }
      Rational exact;
      if (!exactify(mask, terms, exact)) {
        if (!have_split) {
          feasible[mask] = 0;
          continue;
        }
        dp[mask] = split;
        choice[mask] = static_cast<int>(split_sub);
        continue;
      }
      if (!have_split || exact <= split) {
        dp[mask] = exact;
        choice[mask] = -1;
      } else {
        dp[mask] = split;
        choice[mask] = static_cast<int>(split_sub);
      }
    }
    if (!feasible[full]) throw std::invalid_argument("exact_steiner_forest: instance is infeasible");

    std::set<int> edges;
    std::vector<unsigned> stack = {full};
    while (!stack.empty()) {
      unsigned mask = stack.back();
      stack.pop_back();
      if (choice[mask] == -1) {
        const SteinerResult& st = exact_blocks.at(mask);
        edges.insert(st.edge_ids.begin(), st.edge_ids.end());
      } else {
        unsigned sub = static_cast<unsigned>(choice[mask]);
        stack.push_back(sub);
        stack.push_back(mask ^ sub);
      }
    }
    std::vector<int> kept(edges.begin(), edges.end());
    // inclusionwise minimality: drop removable zero-cost edges
    for (std::size_t r = kept.size(); r-- > 0;) {
      int cand = kept[r];
      if (inst.edges[cand].cost != 0) continue;
      Dsu d2(inst.vertex_count);
      for (int e : kept)
        if (e != cand) d2.unite(inst.edges[e].u, inst.edges[e].v);
      bool needed = false;
      for (const auto& [a, b] : inst.demands)
        if (!d2.same(a, b)) {
          needed = true;
          break;
        }
      if (!needed) kept.erase(kept.begin() + r);
    }
    out.forest = make_forest(inst, kept);
    return true;
  }
};

}  // namespace

ExactForestResult exact_steiner_forest(const Instance& inst, const OracleLimits& limits) {
  ExactForestResult out;
  std::vector<int> terminals = collect_terminals(inst);
  if (static_cast<int>(terminals.size()) > limits.max_terminals) {
    out.status = OracleStatus::limits_exceeded;
    return out;
  }
  if (inst.demands.empty()) {
    out.forest = make_forest(inst, {});
    return out;
  }

  ForestOracle oracle(inst);
  Dsu dsu(inst.vertex_count);
  for (const auto& [a, b] : inst.demands) dsu.unite(a, b);
  std::map<int, std::vector<int>> group_map;
  for (int t : terminals) group_map[dsu.find(t)].push_back(t);
  for (auto& [root, vs] : group_map) oracle.groups.push_back(std::move(vs));
  oracle.g = static_cast<int>(oracle.groups.size());
  if (oracle.g > 12) {  // subset DP width
    out.status = OracleStatus::limits_exceeded;
    return out;
  }
  if (!oracle.run(out)) out.status = OracleStatus::limits_exceeded;
  return out;
}

BruteProfitResult brute_force_max_profit(const std::vector<AutarkicTuple>& tuples,
                                         const OracleLimits& limits) {
  BruteProfitResult out;
  out.collection.total_coverage = 0;
  out.collection.total_cost = 0;
  out.collection.total_profit = 0;
  const std::size_t m = tuples.size();
  if (m > limits.max_tuples) {
    out.status = OracleStatus::limits_exceeded;
    return out;
  }
  std::vector<std::vector<char>> cross(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      std::vector<int> common;
      std::set_intersection(tuples[i].sep_union.begin(), tuples[i].sep_union.end(),
                            tuples[j].sep_union.begin(), tuples[j].sep_union.end(),
                            std::back_inserter(common));
      cross[i][j] = cross[j][i] = common.empty() ? 0 : 1;
    }
  Rational best = 0;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    bool ok = true;
    Rational profit = 0;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < m && ok; ++j)
        if ((mask >> j & 1) && cross[i][j]) ok = false;
      profit += tuples[i].profit;
    }
    if (ok && profit > best) {
      best = profit;
      best_mask = mask;
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (best_mask >> i & 1) {
      out.collection.tuples.push_back(tuples[i]);
      out.collection.total_coverage += tuples[i].coverage;
      out.collection.total_cost += tuples[i].cost;
      out.collection.total_profit += tuples[i].profit;
    }
  return out;
}

namespace {

// y_U(t) for a support set that grows over [birth, growth_end)
Rational y_at(const SupportSet& s, const Rational& t) {
  if (t <= s.birth) return Rational(0);
  Rational clamped = std::min(t, s.growth_end);
  return clamped - s.birth;
}

Rational load_at(const MoatTrace& trace, int u, int v, const Rational& t) {
  Rational sum = 0;
  for (const SupportSet& s : trace.support) {
    if (s.y == 0) continue;
    bool has_u = std::binary_search(s.vertices.begin(), s.vertices.end(), u);
    bool has_v = std::binary_search(s.vertices.begin(), s.vertices.end(), v);
    if (has_u != has_v) sum += y_at(s, t);
  }
  return sum;
}

// first time two vertices end up in the same component, from the merge log
std::map<std::pair<int, int>, Rational> connect_times(const MoatTrace& trace, int n) {
  std::map<std::pair<int, int>, Rational> out;
  std::vector<int> label(n);
  for (int v = 0; v < n; ++v) label[v] = v;
  for (const MergeEvent& ev : trace.merge_events) {
    const auto& verts = trace.support[ev.new_id].vertices;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        if (label[verts[i]] != label[verts[j]])
          out.emplace(std::minmax(verts[i], verts[j]), ev.time);
    for (int v : verts) label[v] = ev.new_id + n;  // shared fresh label
  }
  return out;
}

void check_contracted_load_equality(const Instance& inst, const MoatTrace& trace,
                               std::vector<std::string>& out) {
  if (inst.demands.empty()) return;
  // sampled plan: the first demand pair, always actively connected
  std::vector<int> set = {inst.demands[0].first, inst.demands[0].second};
  std::sort(set.begin(), set.end());
  Contraction ctr = contract_vertex_groups(inst, {set});
  std::vector<Rational> deac(ctr.contracted.vertex_count);
  for (int v = 0; v < inst.vertex_count; ++v) deac[ctr.vertex_image[v]] = trace.deactivation[v];
  if (trace.deactivation[set[0]] != trace.deactivation[set[1]]) {
    out.push_back("contracted pair has unequal deactivation times");
    return;
  }
  MoatTrace orig = run_timed_moat(inst, trace.deactivation);
  MoatTrace contr = run_timed_moat(ctr.contracted, deac);

  auto ct = connect_times(contr, ctr.contracted.vertex_count);

  // map original edges to contracted endpoints
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    int u = ctr.vertex_image[inst.edges[e].u];
    int v = ctr.vertex_image[inst.edges[e].v];
    if (u == v) continue;  // internal to the contracted set from the start
    Rational horizon = orig.end_time();
    auto it = ct.find(std::minmax(u, v));
    if (it != ct.end()) horizon = std::min(horizon, it->second);
    // both load curves are piecewise linear with breakpoints at set births
    // and growth ends; equality at every breakpoint implies equality
    std::set<Rational> points;
    points.insert(Rational(0));
    points.insert(horizon);
    auto add_points = [&](const MoatTrace& tr) {
      for (const SupportSet& s : tr.support) {
        if (s.y == 0) continue;
        if (s.birth < horizon) points.insert(s.birth);
        if (s.growth_end < horizon) points.insert(s.growth_end);
      }
    };
    add_points(orig);
    add_points(contr);
    for (const Rational& t : points) {
      Rational lo = load_at(orig, inst.edges[e].u, inst.edges[e].v, t);
      Rational lc = load_at(contr, u, v, t);
      if (lo != lc) {
        out.push_back("timed-run load mismatch on edge " + std::to_string(e) + " at time " +
                      fraction_str(t));
        return;
      }
    }
  }
}

}  // namespace

std::vector<std::string> verify_ledgers(const Instance& inst, const MoatTrace& trace) {
  std::vector<std::string> out;
  const int n = inst.vertex_count;
  const bool extended = trace.mode == TraceMode::extended;

  // timeline structure and the integral identity
  Rational integral = 0;
  Rational prev_end = 0;
  for (std::size_t i = 0; i < trace.timeline.size(); ++i) {
    const TimelineInterval& iv = trace.timeline[i];
    if (!(iv.t0 < iv.t1)) out.push_back("timeline interval " + std::to_string(i) + " is empty");
    if (iv.t0 != prev_end)
      out.push_back("timeline interval " + std::to_string(i) + " does not start at the previous end");
    prev_end = iv.t1;
    integral += (iv.t1 - iv.t0) * static_cast<int>(iv.active_set_ids.size());
  }
  DualSummary duals = trace.dual_summary();
  if (integral != duals.y_total)
    out.push_back("sum of duals differs from the timeline integral: " + fraction_str(duals.y_total) +
                  " vs " + fraction_str(integral));

  if (extended && duals.y_unsep_total != trace.epsilon * duals.y_sep_total)
    out.push_back("epsilon ledger violated: y_unsep = " + fraction_str(duals.y_unsep_total) +
                  ", eps*y_sep = " + fraction_str(trace.epsilon * duals.y_sep_total));

  if (extended)
    for (const auto& [id, b] : trace.budgets_final)
      if (b != 0) out.push_back("nonzero final budget on set " + std::to_string(id));

  // per-set bookkeeping: growth window, fingerprint, kind
  for (const SupportSet& s : trace.support) {
    if (s.y != s.growth_end - s.birth)
      out.push_back("set " + std::to_string(s.id) + ": y differs from growth_end - birth");
    if ((s.y == 0) != (s.kind == SetKind::zero_growth))
      out.push_back("set " + std::to_string(s.id) + ": zero-growth kind mismatch");
    if (s.kind == SetKind::sep && s.sep_fingerprint.empty())
      out.push_back("set " + std::to_string(s.id) + ": sep kind with empty fingerprint");
    if (s.kind == SetKind::unsep && !s.sep_fingerprint.empty())
      out.push_back("set " + std::to_string(s.id) + ": unsep kind with nonempty fingerprint");
    std::vector<int> fp;
    for (std::size_t d = 0; d < inst.demands.size(); ++d) {
      bool ha = std::binary_search(s.vertices.begin(), s.vertices.end(), inst.demands[d].first);
      bool hb = std::binary_search(s.vertices.begin(), s.vertices.end(), inst.demands[d].second);
      if (ha != hb) fp.push_back(static_cast<int>(d));
    }
    if (fp != s.sep_fingerprint)
      out.push_back("set " + std::to_string(s.id) + ": stored fingerprint is wrong");
  }

  // merge genealogy: every merged set points at the set it merged into
  for (const MergeEvent& ev : trace.merge_events)
    for (int id : ev.merged_ids) {
      const auto& parent = trace.support[id].parent;
      if (!parent || *parent != ev.new_id)
        out.push_back("set " + std::to_string(id) + " has a wrong parent link");
    }

  // laminarity
  for (std::size_t i = 0; i < trace.support.size(); ++i)
    for (std::size_t j = i + 1; j < trace.support.size(); ++j) {
      const auto& a = trace.support[i].vertices;
      const auto& b = trace.support[j].vertices;
      bool nested = std::includes(a.begin(), a.end(), b.begin(), b.end()) ||
                    std::includes(b.begin(), b.end(), a.begin(), a.end());
      if (nested) continue;
      std::vector<int> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      if (!common.empty())
        out.push_back("support sets " + std::to_string(i) + " and " + std::to_string(j) +
                      " violate laminarity");
    }

  // dual feasibility with equality exactly on tight edges
  std::vector<char> is_tight(inst.edges.size(), 0);
  for (int e : trace.tight_edges) is_tight[e] = 1;
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    Rational load = edge_dual_load(inst, trace, static_cast<int>(e));
    if (load > inst.edges[e].cost)
      out.push_back("dual infeasibility on edge " + std::to_string(e));
    if (is_tight[e] && load != inst.edges[e].cost)
      out.push_back("edge " + std::to_string(e) + " declared tight but not loaded to cost");
    if (!is_tight[e] && load == inst.edges[e].cost && inst.edges[e].u != inst.edges[e].v)
      out.push_back("edge " + std::to_string(e) + " loaded to cost but not declared tight");
  }

  // deactivation consistency; under an arbitrary time vector demands may
  // legitimately stay unconnected, so the partner check is extended-only
  if (extended) {
    auto ct = connect_times(trace, n);
    for (int v = 0; v < n; ++v) {
      for (std::size_t d = 0; d < inst.demands.size(); ++d) {
        auto [a, b] = inst.demands[d];
        if (a != v && b != v) continue;
        int partner = a == v ? b : a;
        auto it = ct.find(std::minmax(v, partner));
        if (it == ct.end()) {
          out.push_back("demand " + std::to_string(d) + " never connects in the trace");
          continue;
        }
        if (trace.deactivation[v] < it->second)
          out.push_back("vertex " + std::to_string(v) +
                        " deactivates before connecting to its partner");
      }
    }
  }
  std::vector<int> labels = actively_connected_classes(trace);
  for (int v = 0; v < n; ++v)
    if (trace.deactivation[v] != trace.deactivation[labels[v]])
      out.push_back("vertex " + std::to_string(v) +
                    " has a different deactivation time than its class");

  if (extended) {
    // the timed engine fed with this trace's deactivation vector must
    // reproduce the dual vector exactly
    MoatTrace timed = run_timed_moat(inst, trace.deactivation);
    std::map<std::vector<int>, Rational> ours, theirs;
    for (const SupportSet& s : trace.support)
      if (s.y != 0) ours[s.vertices] += s.y;
    for (const SupportSet& s : timed.support)
      if (s.y != 0) theirs[s.vertices] += s.y;
    if (ours != theirs) out.push_back("timed re-run does not reproduce the dual vector");

    check_contracted_load_equality(inst, trace, out);
  }
  return out;
}

}  // namespace sforest

#include "sforest/gain.hpp"

#include "sforest/dsu.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sforest {

namespace {

// Exact Steiner connector for a small vertex set, using the shared distance
// index: direct path for two vertices, the classic meeting-vertex formula
// for three, Dreyfus-Wagner beyond that.
SteinerResult steiner_for_set(const Instance& inst, const DistanceIndex& dist,
                              const std::vector<int>& vertices) {
  SteinerResult r;
  if (vertices.size() <= 1) {
    r.exists = true;
    r.cost = 0;
    return r;
  }
  for (std::size_t i = 1; i < vertices.size(); ++i)
    if (!dist.reachable(vertices[0], vertices[i])) return r;
  if (vertices.size() == 2) {
    r.exists = true;
    r.cost = dist.distance(vertices[0], vertices[1]);
    r.edge_ids = dist.path_edges(vertices[0], vertices[1]);
    std::sort(r.edge_ids.begin(), r.edge_ids.end());
    return r;
  }
  if (vertices.size() == 3) {
    int best_v = -1;
    Rational best;
    for (int v = 0; v < dist.vertex_count(); ++v) {
      if (!dist.reachable(vertices[0], v)) continue;
      Rational c = dist.distance(vertices[0], v) + dist.distance(vertices[1], v) +
                   dist.distance(vertices[2], v);
      if (best_v == -1 || c < best) {
        best_v = v;
        best = c;
      }
    }
    std::set<int> edges;
    for (int t : vertices) {
      auto p = dist.path_edges(best_v, t);
      edges.insert(p.begin(), p.end());
    }
    r.exists = true;
    r.cost = best;
    r.edge_ids.assign(edges.begin(), edges.end());
    return r;
  }
  return steiner_tree_unbounded(inst, vertices);
}

// Per-interval geometry of a trace plus the union-find state a profit
// search mutates as it picks sets to contract.
struct GainEvaluator {
  struct Iv {
    Rational len2;              // 2 * interval length
    std::vector<int> vtx2pos;   // vertex -> position in the active list, or -1
    int nsets = 0;
  };
  std::vector<Iv> ivs;
  std::vector<std::vector<int>> parent;  // per interval, DSU over positions
  Rational current_gain;

  GainEvaluator(const MoatTrace& trace, int vertex_count) {
    for (const TimelineInterval& tl : trace.timeline) {
      if (tl.active_set_ids.size() < 2) continue;  // nothing can merge here
      Iv iv;
      iv.len2 = 2 * (tl.t1 - tl.t0);
      iv.nsets = static_cast<int>(tl.active_set_ids.size());
      iv.vtx2pos.assign(vertex_count, -1);
      for (std::size_t p = 0; p < tl.active_set_ids.size(); ++p)
        for (int v : trace.support[tl.active_set_ids[p]].vertices)
          iv.vtx2pos[v] = static_cast<int>(p);
      ivs.push_back(std::move(iv));
    }
    reset();
  }

  void reset() {
    parent.resize(ivs.size());
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      parent[i].resize(ivs[i].nsets);
      for (int p = 0; p < ivs[i].nsets; ++p) parent[i][p] = p;
    }
    current_gain = 0;
  }

  int find(int iv, int x) {
    auto& par = parent[iv];
    while (par[x] != x) {
      par[x] = par[par[x]];
      x = par[x];
    }
    return x;
  }

  // positions of the active sets a vertex set touches in interval iv
  void positions_of(int iv, const std::vector<int>& vertices, std::vector<int>& out) const {
    out.clear();
    for (int v : vertices) {
      int p = ivs[iv].vtx2pos[v];
      if (p >= 0 && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
  }

  std::vector<int> scratch_pos, scratch_roots;

  Rational marginal_of(const std::vector<int>& vertices) {
    Rational m = 0;
    std::vector<int>& pos = scratch_pos;
    std::vector<int>& roots = scratch_roots;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      positions_of(static_cast<int>(i), vertices, pos);
      if (pos.size() < 2) continue;
      roots.clear();
      for (int p : pos) {
        int r = find(static_cast<int>(i), p);
        if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
      }
      if (roots.size() >= 2) m += ivs[i].len2 * static_cast<int>(roots.size() - 1);
    }
    return m;
  }

  void apply(const std::vector<int>& vertices) {
    std::vector<int>& pos = scratch_pos;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      positions_of(static_cast<int>(i), vertices, pos);
      if (pos.size() < 2) continue;
      int anchor = find(static_cast<int>(i), pos[0]);
      for (std::size_t j = 1; j < pos.size(); ++j) {
        int r = find(static_cast<int>(i), pos[j]);
        if (r != anchor) {
          int lo = std::min(anchor, r), hi = std::max(anchor, r);
          parent[i][hi] = lo;
          anchor = lo;
          current_gain += ivs[i].len2;
        }
      }
    }
  }

  void rebuild(const std::vector<std::vector<int>>& groups) {
    reset();
    for (const auto& g : groups) apply(g);
  }
};

void check_actively_connected(const std::vector<int>& labels, const std::vector<int>& set) {
  if (set.empty()) throw std::invalid_argument("gain: empty vertex set");
  for (int v : set) {
    if (v < 0 || v >= static_cast<int>(labels.size()))
      throw std::invalid_argument("gain: vertex out of range");
    if (labels[v] != labels[set[0]])
      throw std::invalid_argument(
          "gain: set is not actively connected (vertices span different classes)");
  }
}

}  // namespace

std::vector<CandidateSet> enumerate_restricted_sets(const MoatTrace& trace, const Instance& inst,
                                                    int k, std::size_t candidate_cap) {
  if (k < 2) throw std::invalid_argument("enumerate_restricted_sets: need k >= 2");
  if (k > kMaxExactTerminals)
    throw std::invalid_argument("enumerate_restricted_sets: k exceeds the exact Steiner bound");
  auto classes = actively_connected_partition(trace);

  // count before computing anything expensive
  std::size_t count = 0;
  for (const auto& cls : classes) {
    std::size_t c = cls.size();
    std::size_t binom = 1;
    for (int j = 2; j <= k && j <= static_cast<int>(c); ++j) {
      binom = 1;
      for (int i = 0; i < j; ++i) binom = binom * (c - i) / (i + 1);
      count += binom;
    }
    if (count > candidate_cap)
      throw std::runtime_error("enumerate_restricted_sets: candidate count exceeds cap of " +
                               std::to_string(candidate_cap) +
                               "; lower k or raise the cap");
  }

  DistanceIndex dist(inst);
  std::vector<CandidateSet> out;
  std::vector<int> labels = actively_connected_classes(trace);
  for (const auto& cls : classes) {
    if (cls.size() < 2) continue;
    const int c = static_cast<int>(cls.size());
    for (int size = 2; size <= k && size <= c; ++size) {
      std::vector<int> idx(size);
      for (int i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        std::vector<int> verts(size);
        for (int i = 0; i < size; ++i) verts[i] = cls[idx[i]];
        SteinerResult st = steiner_for_set(inst, dist, verts);
        if (st.exists) {
          CandidateSet cand;
          cand.vertices = std::move(verts);
          cand.steiner_cost = std::move(st.cost);
          cand.steiner_tree = std::move(st.edge_ids);
          cand.class_witness = labels[cls[0]];
          out.push_back(std::move(cand));
        }
        int i = size - 1;
        while (i >= 0 && idx[i] == c - size + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }
  return out;
}

Rational gain_of(const MoatTrace& trace, const std::vector<std::vector<int>>& sets) {
  std::vector<int> labels = actively_connected_classes(trace);
  for (const auto& s : sets) check_actively_connected(labels, s);
  GainEvaluator ev(trace, static_cast<int>(trace.deactivation.size()));
  for (const auto& s : sets) ev.apply(s);
  return ev.current_gain;
}

Rational gain_of(const MoatTrace& trace, const std::vector<CandidateSet>& sets) {
  std::vector<std::vector<int>> raw;
  raw.reserve(sets.size());
  for (const auto& s : sets) raw.push_back(s.vertices);
  return gain_of(trace, raw);
}

namespace {

struct Group {
  std::vector<int> vertices;  // sorted
  Rational steiner_cost;
  std::vector<int> steiner_tree;
};

// One greedy pass: seed the state with the enumerated high-cost guess, then
// repeatedly take the element with the best marginal-gain/cost density from
// the pool (lowest index on ties), tracking the best prefix seen. Density
// comparisons go through a double-precision filter with a wide safety band;
// only candidates inside the band pay for exact rational comparisons, so
// tie-breaking stays exact.
struct ProfitSearch {
  const Instance& inst;
  const DistanceIndex& dist;
  const std::vector<CandidateSet>& cands;
  GainEvaluator& ev;
  const std::vector<Rational>& init_gain;  // gain({e}) upper bounds
  const std::vector<double>& init_d;       // double view of the initial densities
  const std::vector<int>& order;           // candidate ids by initial density desc, id asc

  std::vector<Group> groups;
  Rational f, c;

  Rational best_profit;
  std::vector<Group> best_groups;

  // Per-element marginal caches, epoch-stamped so runs can share the
  // arrays. A cache entry stamped with the current state version is the
  // element's exact current marginal; older entries are still upper bounds
  // because marginals only shrink as the collection grows.
  std::vector<Rational>& ub;
  std::vector<double>& ub_d;
  std::vector<int>& ub_stamp;
  std::vector<int>& ub_version;
  int stamp;
  int version = 0;  // bumped whenever a pick changes the collection

  std::map<std::vector<int>, SteinerResult>& steiner_cache;

  ProfitSearch(const Instance& inst_, const DistanceIndex& dist_,
               const std::vector<CandidateSet>& cands_, GainEvaluator& ev_,
               const std::vector<Rational>& init_gain_, const std::vector<double>& init_d_,
               const std::vector<int>& order_, std::vector<Rational>& ub_,
               std::vector<double>& ub_d_, std::vector<int>& ub_stamp_,
               std::vector<int>& ub_version_, int stamp_,
               std::map<std::vector<int>, SteinerResult>& steiner_cache_)
      : inst(inst_), dist(dist_), cands(cands_), ev(ev_), init_gain(init_gain_), init_d(init_d_),
        order(order_), f(0), c(0), best_profit(0), ub(ub_), ub_d(ub_d_), ub_stamp(ub_stamp_),
        ub_version(ub_version_), stamp(stamp_), steiner_cache(steiner_cache_) {
    ev.reset();
  }

  const SteinerResult& cached_steiner(const std::vector<int>& verts) {
    auto it = steiner_cache.find(verts);
    if (it != steiner_cache.end()) return it->second;
    return steiner_cache.emplace(verts, steiner_for_set(inst, dist, verts)).first->second;
  }

  const Rational& bound(int e) const { return ub_stamp[e] == stamp ? ub[e] : init_gain[e]; }
  double bound_d(int e) const { return ub_stamp[e] == stamp ? ub_d[e] : init_d[e]; }
  bool fresh(int e) const { return ub_stamp[e] == stamp && ub_version[e] == version; }
  void remember(int e, const Rational& m) {
    ub[e] = m;
    ub_d[e] = density_double(m, cands[e].steiner_cost);
    ub_stamp[e] = stamp;
    ub_version[e] = version;
  }

  void note_prefix() {
    Rational profit = f - c;
    if (profit > best_profit) {
      best_profit = profit;
      best_groups = groups;
    }
  }

  // density comparison: a/ca vs b/cb with zero costs sorting as +infinity
  static int cmp_density(const Rational& a, const Rational& ca, const Rational& b,
                         const Rational& cb) {
    bool ia = ca == 0 && a > 0, ib = cb == 0 && b > 0;
    if (ia != ib) return ia ? 1 : -1;
    if (ia && ib) return 0;
    Rational lhs = a * cb, rhs = b * ca;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }

  static double density_double(const Rational& gain, const Rational& cost) {
    double g = gain.convert_to<double>();
    double cd = cost.convert_to<double>();
    if (cd == 0.0) return g > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return g / cd;
  }

  // a conservative lower cutoff: nothing with a double density below this
  // can beat the current best exactly
  static double cutoff(double best_d) {
    if (std::isinf(best_d)) return std::numeric_limits<double>::max();
    return best_d - 1e-9 * (std::abs(best_d) + 1.0);
  }

  // three-way double comparison with the same safety band; 0 means the
  // values are too close to separate without exact arithmetic
  static int cmp_fast(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b ? 0 : (a > b ? 1 : -1);
    double band = 1e-9 * (std::abs(a) + std::abs(b) + 1.0);
    if (a > b + band) return 1;
    if (a < b - band) return -1;
    return 0;
  }

  // size of the group union a pick of e would force; picks breaching the
  // exact-Steiner bound can never apply, so the scan drops them up front
  bool pick_can_apply(int e) const {
    std::size_t extra = 0;
    for (const Group& g : groups) {
      bool hit = false;
      std::size_t inside = 0;
      for (int v : cands[e].vertices)
        if (std::binary_search(g.vertices.begin(), g.vertices.end(), v)) {
          hit = true;
          ++inside;
        }
      if (hit) extra += g.vertices.size() - inside;
    }
    return cands[e].vertices.size() + extra <= static_cast<std::size_t>(kMaxExactTerminals);
  }

  // Returns false when the pick was skipped because merging overlapping
  // groups would exceed the exact-Steiner size bound.
  bool apply_pick(int e) {
    std::vector<int> overlaps;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      bool hit = false;
      for (int v : cands[e].vertices)
        if (std::binary_search(groups[g].vertices.begin(), groups[g].vertices.end(), v)) {
          hit = true;
          break;
        }
      if (hit) overlaps.push_back(static_cast<int>(g));
    }
    if (overlaps.empty()) {
      ev.apply(cands[e].vertices);
      f = ev.current_gain;
      c += cands[e].steiner_cost;
      Group g;
      g.vertices = cands[e].vertices;
      g.steiner_cost = cands[e].steiner_cost;
      g.steiner_tree = cands[e].steiner_tree;
      groups.push_back(std::move(g));
      return true;
    }
    std::vector<int> merged = cands[e].vertices;
    for (int g : overlaps)
      merged.insert(merged.end(), groups[g].vertices.begin(), groups[g].vertices.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (static_cast<int>(merged.size()) > kMaxExactTerminals) return false;
    const SteinerResult& st = cached_steiner(merged);
    if (!st.exists) return false;
    for (auto it = overlaps.rbegin(); it != overlaps.rend(); ++it) {
      c -= groups[*it].steiner_cost;
      groups.erase(groups.begin() + *it);
    }
    Group g;
    g.vertices = std::move(merged);
    g.steiner_cost = st.cost;
    g.steiner_tree = st.edge_ids;
    c += g.steiner_cost;
    groups.push_back(std::move(g));
    std::vector<std::vector<int>> raw;
    raw.reserve(groups.size());
    for (const auto& gr : groups) raw.push_back(gr.vertices);
    ev.rebuild(raw);
    f = ev.current_gain;
    return true;
  }

  void run(const std::vector<int>& seed, const std::vector<char>& in_pool) {
    note_prefix();
    for (int e : seed) {
      if (apply_pick(e)) {
        ++version;
        note_prefix();
      }
    }
    std::vector<char> dead(cands.size(), 0);
    while (true) {
      int best = -1;
      Rational best_marg;
      double best_d = -1.0;
      for (int e : order) {
        if (!in_pool[e] || dead[e]) continue;
        if (best >= 0) {
          double cut = cutoff(best_d);
          // initial densities bound current ones; past this point nothing wins
          if (init_d[e] < cut) break;
          if (bound_d(e) < cut) continue;
          // the band is decided exactly, clear wins and losses by doubles
          int c0 = cmp_fast(init_d[e], best_d);
          if (c0 == 0)
            c0 = cmp_density(init_gain[e], cands[e].steiner_cost, best_marg,
                             cands[best].steiner_cost);
          if (c0 < 0 || (c0 == 0 && e > best)) continue;
          int c1 = cmp_fast(bound_d(e), best_d);
          if (c1 == 0)
            c1 = cmp_density(bound(e), cands[e].steiner_cost, best_marg,
                             cands[best].steiner_cost);
          if (c1 < 0 || (c1 == 0 && e > best)) continue;
          if (fresh(e)) {  // the cached value is current and has just won
            if (!dead_weight(e, dead)) {
              best = e;
              best_marg = ub[e];
              best_d = ub_d[e];
            }
            continue;
          }
        } else if (fresh(e)) {
          if (ub[e] != 0 && !dead_weight(e, dead)) {
            best = e;
            best_marg = ub[e];
            best_d = ub_d[e];
          }
          continue;
        }
        Rational m = ev.marginal_of(cands[e].vertices);
        remember(e, m);
        if (m == 0) continue;  // marginals never recover, so skip for good
        if (dead_weight(e, dead)) continue;
        if (best < 0) {
          best = e;
          best_marg = m;
          best_d = ub_d[e];
          continue;
        }
        int cc = cmp_fast(ub_d[e], best_d);
        if (cc == 0)
          cc = cmp_density(m, cands[e].steiner_cost, best_marg, cands[best].steiner_cost);
        if (cc > 0 || (cc == 0 && e < best)) {
          best = e;
          best_marg = m;
          best_d = ub_d[e];
        }
      }
      if (best < 0 || best_marg == 0) break;
      dead[best] = 1;
      if (apply_pick(best)) {
        ++version;
        note_prefix();
      }
    }
  }

  // a pick that cannot apply is dropped before it can shadow real picks
  bool dead_weight(int e, std::vector<char>& dead) const {
    if (pick_can_apply(e)) return false;
    dead[e] = 1;
    return true;
  }
};

}  // namespace

ContractionPlan maximize_profit(const Instance& inst, const std::vector<CandidateSet>& candidates,
                                const MoatTrace& trace, const Rational& alpha,
                                const Rational& gamma, const ProfitSearchOptions& opts) {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("maximize_profit: alpha must be in [0,1]");
  if (gamma <= 0) throw std::invalid_argument("maximize_profit: gamma must be positive");
  ContractionPlan plan;
  plan.gain_value = 0;
  plan.cost_value = 0;
  if (candidates.empty()) return plan;

  const int n_cand = static_cast<int>(candidates.size());
  DistanceIndex dist(inst);
  GainEvaluator ev(trace, static_cast<int>(trace.deactivation.size()));

  std::vector<Rational> init_gain(n_cand);
  std::vector<double> init_d(n_cand);
  for (int e = 0; e < n_cand; ++e) {
    init_gain[e] = ev.marginal_of(candidates[e].vertices);
    init_d[e] = ProfitSearch::density_double(init_gain[e], candidates[e].steiner_cost);
  }

  std::vector<int> order(n_cand);
  for (int e = 0; e < n_cand; ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int c = ProfitSearch::cmp_density(init_gain[a], candidates[a].steiner_cost, init_gain[b],
                                      candidates[b].steiner_cost);
    if (c != 0) return c > 0;
    return a < b;
  });

  // enumeration depth: ceil(1/gamma) from the guarantee, capped for desk scale
  BigInt inv = (numer(Rational(1) / gamma) + denom(Rational(1) / gamma) - 1) / denom(Rational(1) / gamma);
  int depth = opts.enum_depth_cap;
  if (inv < opts.enum_depth_cap) depth = static_cast<int>(inv);

  // pool thresholds: distinct candidate costs (thinned), plus the empty pool
  std::vector<Rational> costs;
  for (const auto& c : candidates) costs.push_back(c.steiner_cost);
  std::sort(costs.begin(), costs.end());
  costs.erase(std::unique(costs.begin(), costs.end()), costs.end());
  std::vector<Rational> thresholds;
  if (static_cast<int>(costs.size()) <= opts.threshold_cap) {
    thresholds = costs;
  } else {
    for (int i = 0; i < opts.threshold_cap; ++i) {
      std::size_t pick = (costs.size() - 1) * static_cast<std::size_t>(i) / (opts.threshold_cap - 1);
      thresholds.push_back(costs[pick]);
    }
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  }

  Rational best_profit = 0;
  std::vector<Group> best_groups;
  std::vector<Rational> ub(n_cand);
  std::vector<double> ub_d(n_cand);
  std::vector<int> ub_stamp(n_cand, -1);
  std::vector<int> ub_version(n_cand, -1);
  int stamp = 0;

  std::map<std::vector<int>, SteinerResult> steiner_cache;
  auto run_one = [&](const std::vector<int>& seed, const std::vector<char>& in_pool) {
    ++stamp;
    ProfitSearch search(inst, dist, candidates, ev, init_gain, init_d, order, ub, ub_d, ub_stamp,
                        ub_version, stamp, steiner_cache);
    search.run(seed, in_pool);
    if (search.best_profit > best_profit) {
      best_profit = search.best_profit;
      best_groups = search.best_groups;
    }
  };

  std::vector<char> in_pool(n_cand, 0);
  std::vector<int> highs;
  auto enumerate_seeds = [&](auto&& self, std::vector<int>& seed, std::size_t from,
                             int remaining) -> void {
    run_one(seed, in_pool);
    if (remaining == 0) return;
    for (std::size_t i = from; i < highs.size(); ++i) {
      seed.push_back(highs[i]);
      self(self, seed, i + 1, remaining - 1);
      seed.pop_back();
    }
  };

  // Sentinel empty pool first: its singleton seeds realize every bare
  // candidate as a prefix, so the result dominates all single candidates.
  // Then each kept threshold with the high-cost guesses capped by density
  // rank.
  for (int t = -1; t < static_cast<int>(thresholds.size()); ++t) {
    highs.clear();
    for (int e = 0; e < n_cand; ++e)
      in_pool[e] = t >= 0 && candidates[e].steiner_cost <= thresholds[t] ? 1 : 0;
    for (int e : order)
      if (!in_pool[e]) highs.push_back(e);
    if (t >= 0 && static_cast<int>(highs.size()) > opts.seed_cap) highs.resize(opts.seed_cap);
    std::vector<int> seed;
    enumerate_seeds(enumerate_seeds, seed, 0, depth);
  }

  for (const Group& g : best_groups) {
    CandidateSet s;
    s.vertices = g.vertices;
    s.steiner_cost = g.steiner_cost;
    s.steiner_tree = g.steiner_tree;
    plan.selected.push_back(std::move(s));
  }
  if (!plan.selected.empty()) {
    std::vector<int> labels = actively_connected_classes(trace);
    std::vector<std::vector<int>> raw;
    for (auto& s : plan.selected) {
      s.class_witness = labels[s.vertices[0]];
      raw.push_back(s.vertices);
    }
    plan.gain_value = gain_of(trace, raw);
    for (const auto& s : plan.selected) plan.cost_value += s.steiner_cost;
  }
  return plan;
}

Contraction contract_vertex_groups(const Instance& inst, const std::vector<std::vector<int>>& groups) {
  const int n = inst.vertex_count;
  Dsu dsu(n);
  for (const auto& g : groups)
    for (std::size_t i = 1; i < g.size(); ++i) dsu.unite(g[0], g[i]);

  Contraction out;
  out.vertex_image.assign(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (dsu.find(v) == v) out.vertex_image[v] = next++;
  for (int v = 0; v < n; ++v) out.vertex_image[v] = out.vertex_image[dsu.find(v)];
  out.contracted.vertex_count = next;

  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    int u = out.vertex_image[inst.edges[i].u];
    int v = out.vertex_image[inst.edges[i].v];
    if (u == v) continue;
    out.contracted.edges.push_back({std::min(u, v), std::max(u, v), inst.edges[i].cost});
    out.edge_origin.push_back(static_cast<int>(i));
  }
  for (std::size_t d = 0; d < inst.demands.size(); ++d) {
    int a = out.vertex_image[inst.demands[d].first];
    int b = out.vertex_image[inst.demands[d].second];
    if (a == b) continue;
    out.contracted.demands.emplace_back(std::min(a, b), std::max(a, b));
    out.demand_origin.push_back(static_cast<int>(d));
  }
  return out;
}

SolutionForest build_f2(const Instance& inst, const MoatTrace& trace, const ContractionPlan& plan) {
  std::vector<std::vector<int>> groups;
  for (const auto& s : plan.selected) groups.push_back(s.vertices);
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t j = i + 1; j < groups.size(); ++j)
      for (int v : groups[i])
        if (std::binary_search(groups[j].begin(), groups[j].end(), v))
          throw std::invalid_argument("build_f2: plan sets must be pairwise disjoint");

  Contraction ctr = contract_vertex_groups(inst, groups);
  std::vector<Rational> deac(ctr.contracted.vertex_count);
  for (int v = 0; v < inst.vertex_count; ++v) deac[ctr.vertex_image[v]] = trace.deactivation[v];
  for (const auto& g : groups)
    for (int v : g)
      if (trace.deactivation[v] != trace.deactivation[g[0]])
        throw std::logic_error("build_f2: contracted set with mixed deactivation times");

  MoatTrace timed = run_timed_moat(ctr.contracted, deac);
  SolutionForest inner = extract_forest(ctr.contracted, timed);

  std::vector<int> edges;
  for (int e : inner.edge_ids) edges.push_back(ctr.edge_origin[e]);
  for (const auto& s : plan.selected)
    edges.insert(edges.end(), s.steiner_tree.begin(), s.steiner_tree.end());
  return make_forest(inst, std::move(edges));
}

}  // namespace sforest

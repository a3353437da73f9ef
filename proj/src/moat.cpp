#include "sforest/moat.hpp"

#include "sforest/dsu.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sforest {

DualSummary MoatTrace::dual_summary() const {
  DualSummary s;
  for (const SupportSet& u : support) {
    if (u.kind == SetKind::sep)
      s.y_sep_total += u.y;
    else if (u.kind == SetKind::unsep)
      s.y_unsep_total += u.y;
  }
  s.y_total = s.y_sep_total + s.y_unsep_total;
  return s;
}

namespace {

// sep(A u B) = sep(A) xor sep(B) for disjoint A, B: a demand separated by
// both has one endpoint in each, so the union swallows it.
std::vector<int> sym_diff(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct ReducedEdge {
  int u, v;
  Rational cost;
  int orig_id;
};

struct Component {
  int set_id = -1;
  bool alive = false;
  bool active = false;
  Rational budget;    // extended mode
  Rational deadline;  // timed mode: max deac over members
};

struct Engine {
  const Instance& inst;
  TraceMode mode;
  Rational epsilon;
  const std::vector<Rational>* deac_in = nullptr;

  MoatTrace trace;
  std::vector<ReducedEdge> redges;
  std::vector<Rational> load;
  std::vector<char> tight;
  std::vector<int> comp_of;  // vertex -> component index
  std::vector<Component> comps;
  std::vector<char> deac_set;
  Rational now;

  Engine(const Instance& inst_, TraceMode mode_) : inst(inst_), mode(mode_) {}

  const std::vector<int>& comp_vertices(int c) const { return trace.support[comps[c].set_id].vertices; }
  const std::vector<int>& comp_fp(int c) const { return trace.support[comps[c].set_id].sep_fingerprint; }

  void reduce_edges() {
    // Parallel edges stay in the model but only the cheapest per endpoint
    // pair (lowest id on cost ties) takes part in moat growing.
    std::map<std::pair<int, int>, int> best;
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      const Edge& e = inst.edges[i];
      auto key = std::minmax(e.u, e.v);
      auto it = best.find(key);
      if (it == best.end() || e.cost < inst.edges[it->second].cost) best[key] = static_cast<int>(i);
    }
    for (const auto& [key, id] : best)
      redges.push_back({key.first, key.second, inst.edges[id].cost, id});
    std::sort(redges.begin(), redges.end(),
              [](const ReducedEdge& a, const ReducedEdge& b) { return a.orig_id < b.orig_id; });
    load.assign(redges.size(), Rational(0));
    tight.assign(redges.size(), 0);
  }

  void init() {
    const int n = inst.vertex_count;
    reduce_edges();
    trace.mode = mode;
    trace.deactivation.assign(n, Rational(0));
    deac_set.assign(n, 0);
    comp_of.resize(n);
    comps.resize(n);
    std::vector<std::vector<int>> fp(n);
    for (std::size_t d = 0; d < inst.demands.size(); ++d) {
      fp[inst.demands[d].first].push_back(static_cast<int>(d));
      fp[inst.demands[d].second].push_back(static_cast<int>(d));
    }
    for (int v = 0; v < n; ++v) {
      SupportSet s;
      s.id = v;
      s.vertices = {v};
      s.birth = 0;
      s.growth_end = 0;
      s.y = 0;
      s.sep_fingerprint = std::move(fp[v]);
      trace.support.push_back(std::move(s));
      comp_of[v] = v;
      comps[v].set_id = v;
      comps[v].alive = true;
      if (mode == TraceMode::timed) comps[v].deadline = (*deac_in)[v];
    }
    now = 0;
  }

  bool comp_active_rule(const Component& c) const {
    if (mode == TraceMode::timed) return c.deadline > now;
    return !trace.support[c.set_id].sep_fingerprint.empty() || c.budget > 0;
  }

  // All edge tightenings first (ascending edge id), then component
  // recomputation, then activity and budget reclassification.
  void process_instant() {
    std::vector<int> newly_tight;
    for (std::size_t i = 0; i < redges.size(); ++i)
      if (!tight[i] && load[i] == redges[i].cost) newly_tight.push_back(static_cast<int>(i));
    if (!newly_tight.empty()) {
      Dsu groups(static_cast<int>(comps.size()));
      for (int i : newly_tight) {
        tight[i] = 1;
        trace.tight_edges.push_back(redges[i].orig_id);
        trace.tight_times.push_back(now);
        groups.unite(comp_of[redges[i].u], comp_of[redges[i].v]);
      }
      std::map<int, std::vector<int>> merged;  // group root -> constituent comps
      for (int c = 0; c < static_cast<int>(comps.size()); ++c)
        if (comps[c].alive && groups.find(c) != c) merged[groups.find(c)].push_back(c);
      for (auto& [root, others] : merged) {
        std::vector<int> members = others;
        members.push_back(root);
        std::sort(members.begin(), members.end());

        SupportSet s;
        s.id = static_cast<int>(trace.support.size());
        s.birth = now;
        s.growth_end = now;
        Component merged_comp;
        merged_comp.set_id = s.id;
        merged_comp.alive = true;
        MergeEvent ev;
        ev.time = now;
        ev.new_id = s.id;
        for (int c : members) {
          SupportSet& part = trace.support[comps[c].set_id];
          s.vertices.insert(s.vertices.end(), part.vertices.begin(), part.vertices.end());
          s.sep_fingerprint = sym_diff(s.sep_fingerprint, part.sep_fingerprint);
          part.parent = s.id;
          merged_comp.budget += comps[c].budget;
          merged_comp.deadline = std::max(merged_comp.deadline, comps[c].deadline);
          ev.merged_ids.push_back(comps[c].set_id);
          close_growth(c);
          comps[c].alive = false;
        }
        std::sort(s.vertices.begin(), s.vertices.end());
        std::sort(ev.merged_ids.begin(), ev.merged_ids.end());
        trace.support.push_back(std::move(s));
        trace.merge_events.push_back(std::move(ev));
        int idx = static_cast<int>(comps.size());
        comps.push_back(merged_comp);
        for (int v : comp_vertices(idx)) comp_of[v] = idx;
      }
    }
    // reclassify
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (!comps[c].alive) continue;
      bool was_active = comps[c].active;
      bool now_active = comp_active_rule(comps[c]);
      if (was_active && !now_active) close_growth(static_cast<int>(c));
      comps[c].active = now_active;
      if (!now_active)
        for (int v : comp_vertices(static_cast<int>(c)))
          if (!deac_set[v]) {
            deac_set[v] = 1;
            trace.deactivation[v] = now;
          }
    }
  }

  void close_growth(int c) {
    if (comps[c].active) {
      trace.support[comps[c].set_id].growth_end = now;
      comps[c].active = false;
    }
  }

  bool any_active() const {
    for (const Component& c : comps)
      if (c.alive && c.active) return true;
    return false;
  }

  // Smallest upcoming event: an edge reaching its cost, a budget running
  // out, or (timed mode) a component hitting its deadline.
  bool next_event(Rational& when) const {
    bool found = false;
    auto consider = [&](const Rational& t) {
      if (!found || t < when) {
        when = t;
        found = true;
      }
    };
    for (const Component& c : comps) {
      if (!c.alive || !c.active) continue;
      if (mode == TraceMode::timed)
        consider(c.deadline);
      else if (trace.support[c.set_id].sep_fingerprint.empty() && c.budget > 0)
        consider(now + c.budget);
    }
    for (std::size_t i = 0; i < redges.size(); ++i) {
      if (tight[i]) continue;
      int a = comp_of[redges[i].u];
      int b = comp_of[redges[i].v];
      if (a == b) continue;
      int rate = (comps[a].active ? 1 : 0) + (comps[b].active ? 1 : 0);
      if (rate == 0) continue;
      consider(now + (redges[i].cost - load[i]) / rate);
    }
    return found;
  }

  void advance(const Rational& to) {
    Rational delta = to - now;
    TimelineInterval iv;
    iv.t0 = now;
    iv.t1 = to;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (!comps[c].alive || !comps[c].active) continue;
      iv.active_set_ids.push_back(comps[c].set_id);
      trace.support[comps[c].set_id].y += delta;
      trace.support[comps[c].set_id].growth_end = to;
      if (mode == TraceMode::extended) {
        if (!comp_fp(static_cast<int>(c)).empty())
          comps[c].budget += epsilon * delta;
        else
          comps[c].budget -= delta;
      }
    }
    std::sort(iv.active_set_ids.begin(), iv.active_set_ids.end());
    for (std::size_t i = 0; i < redges.size(); ++i) {
      if (tight[i]) continue;
      int a = comp_of[redges[i].u];
      int b = comp_of[redges[i].v];
      if (a == b) continue;
      int rate = (comps[a].active ? 1 : 0) + (comps[b].active ? 1 : 0);
      if (rate > 0) load[i] += rate * delta;
    }
    trace.timeline.push_back(std::move(iv));
    now = to;
  }

  MoatTrace run() {
    init();
    process_instant();
    while (any_active()) {
      Rational when;
      if (!next_event(when)) throw std::logic_error("moat engine: active components but no next event");
      advance(when);
      process_instant();
    }
    finalize();
    return std::move(trace);
  }

  void finalize() {
    for (SupportSet& s : trace.support) {
      if (s.y == 0)
        s.kind = SetKind::zero_growth;
      else
        s.kind = s.sep_fingerprint.empty() ? SetKind::unsep : SetKind::sep;
    }
    if (mode == TraceMode::extended)
      for (std::size_t c = 0; c < comps.size(); ++c)
        if (comps[c].alive) trace.budgets_final.emplace_back(comps[c].set_id, comps[c].budget);
    // Parallel twins of tight representatives become tight at the same
    // instant; record them so dual feasibility is exact on every edge.
    std::map<std::pair<int, int>, std::pair<Rational, Rational>> tight_pairs;  // pair -> (cost, time)
    for (std::size_t i = 0; i < trace.tight_edges.size(); ++i) {
      const Edge& e = inst.edges[trace.tight_edges[i]];
      tight_pairs[std::minmax(e.u, e.v)] = {e.cost, trace.tight_times[i]};
    }
    std::vector<std::pair<Rational, int>> records;
    for (std::size_t i = 0; i < trace.tight_edges.size(); ++i)
      records.emplace_back(trace.tight_times[i], trace.tight_edges[i]);
    std::vector<char> is_rep(inst.edges.size(), 0);
    for (const ReducedEdge& re : redges) is_rep[re.orig_id] = 1;
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      if (is_rep[i]) continue;
      auto it = tight_pairs.find(std::minmax(inst.edges[i].u, inst.edges[i].v));
      if (it != tight_pairs.end() && it->second.first == inst.edges[i].cost)
        records.emplace_back(it->second.second, static_cast<int>(i));
    }
    std::sort(records.begin(), records.end());
    trace.tight_edges.clear();
    trace.tight_times.clear();
    for (auto& [t, id] : records) {
      trace.tight_times.push_back(t);
      trace.tight_edges.push_back(id);
    }
  }
};

}  // namespace

MoatTrace run_extended_moat(const Instance& inst, const Rational& epsilon) {
  if (epsilon < 0) throw std::invalid_argument("run_extended_moat: epsilon must be >= 0");
  if (!validate(inst).empty())
    throw std::invalid_argument("run_extended_moat: instance does not validate");
  Engine eng(inst, TraceMode::extended);
  eng.epsilon = epsilon;
  eng.trace.epsilon = epsilon;
  return eng.run();
}

MoatTrace run_timed_moat(const Instance& inst, const std::vector<Rational>& deac) {
  if (static_cast<int>(deac.size()) != inst.vertex_count)
    throw std::invalid_argument("run_timed_moat: deactivation vector size mismatch");
  for (const Rational& d : deac)
    if (d < 0) throw std::invalid_argument("run_timed_moat: deactivation times must be >= 0");
  Engine eng(inst, TraceMode::timed);
  eng.deac_in = &deac;
  return eng.run();
}

SolutionForest extract_forest(const Instance& inst, const MoatTrace& trace) {
  std::vector<int> kept = trace.tight_edges;
  Dsu full(inst.vertex_count);
  for (int e : kept) full.unite(inst.edges[e].u, inst.edges[e].v);
  std::vector<int> targets;  // demands connected by the full tight set
  for (std::size_t d = 0; d < inst.demands.size(); ++d)
    if (full.same(inst.demands[d].first, inst.demands[d].second))
      targets.push_back(static_cast<int>(d));

  std::vector<char> removed(inst.edges.size(), 0);
  // records are stored (time asc, id asc); scan in reverse
  for (std::size_t r = kept.size(); r-- > 0;) {
    int cand = kept[r];
    Dsu dsu(inst.vertex_count);
    for (int e : kept)
      if (e != cand && !removed[e]) dsu.unite(inst.edges[e].u, inst.edges[e].v);
    bool needed = false;
    for (int d : targets)
      if (!dsu.same(inst.demands[d].first, inst.demands[d].second)) {
        needed = true;
        break;
      }
    if (!needed) removed[cand] = 1;
  }
  std::vector<int> final_edges;
  for (int e : kept)
    if (!removed[e]) final_edges.push_back(e);
  return make_forest(inst, std::move(final_edges));
}

std::vector<int> actively_connected_classes(const MoatTrace& trace) {
  const int n = static_cast<int>(trace.deactivation.size());
  Dsu dsu(n);
  for (const MergeEvent& ev : trace.merge_events) {
    const SupportSet& s = trace.support[ev.new_id];
    int anchor = -1;
    for (int v : s.vertices) {
      if (trace.deactivation[v] < ev.time) continue;
      if (anchor == -1)
        anchor = v;
      else
        dsu.unite(anchor, v);
    }
  }
  std::vector<int> label(n);
  for (int v = 0; v < n; ++v) label[v] = dsu.find(v);
  return label;
}

std::vector<std::vector<int>> actively_connected_partition(const MoatTrace& trace) {
  std::vector<int> label = actively_connected_classes(trace);
  std::map<int, std::vector<int>> groups;
  for (std::size_t v = 0; v < label.size(); ++v) groups[label[v]].push_back(static_cast<int>(v));
  std::vector<std::vector<int>> out;
  out.reserve(groups.size());
  for (auto& [k, vs] : groups) out.push_back(std::move(vs));
  return out;
}

Rational excess(const SolutionForest& forest, const MoatTrace& trace) {
  if (!forest.feasible()) throw std::invalid_argument("excess: forest is infeasible");
  return forest.total_cost - trace.dual_summary().y_sep_total;
}

Rational lambda_diagnostic(const Instance& inst, const SolutionForest& forest,
                           const MoatTrace& trace) {
  Rational lambda = 0;
  for (const SupportSet& s : trace.support) {
    if (s.y == 0) continue;
    int crossings = 0;
    for (int e : forest.edge_ids) {
      bool has_u = std::binary_search(s.vertices.begin(), s.vertices.end(), inst.edges[e].u);
      bool has_v = std::binary_search(s.vertices.begin(), s.vertices.end(), inst.edges[e].v);
      if (has_u != has_v && ++crossings >= 2) break;
    }
    if (crossings >= 2) lambda += s.y;
  }
  return lambda;
}

Rational edge_dual_load(const Instance& inst, const MoatTrace& trace, int edge_id) {
  const Edge& e = inst.edges[edge_id];
  Rational sum = 0;
  for (const SupportSet& s : trace.support) {
    if (s.y == 0) continue;
    bool has_u = std::binary_search(s.vertices.begin(), s.vertices.end(), e.u);
    bool has_v = std::binary_search(s.vertices.begin(), s.vertices.end(), e.v);
    if (has_u != has_v) sum += s.y;
  }
  return sum;
}

}  // namespace sforest

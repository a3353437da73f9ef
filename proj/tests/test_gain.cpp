#include <doctest.h>

#include "fixtures.hpp"
#include "sforest/dsu.hpp"
#include "sforest/gain.hpp"
#include "sforest/oracle.hpp"

#include <set>

using namespace sforest;

namespace {

struct GadgetSetup {
  Instance inst;
  MoatTrace trace;
  explicit GadgetSetup(int k, const Rational& eps = Rational(1, 100))
      : inst(fixtures::matching_gadget(k)), trace(run_extended_moat(inst, eps)) {}
};

bool has_candidate(const std::vector<CandidateSet>& cands, std::vector<int> verts) {
  std::sort(verts.begin(), verts.end());
  for (const auto& c : cands)
    if (c.vertices == verts) return true;
  return false;
}

// exhaustive profit maximizer over every subset of candidates, applying the
// same disjointness rule is unnecessary here: inputs are chosen disjoint
Rational brute_force_best_profit(const Instance& inst, const MoatTrace& trace,
                                 const std::vector<CandidateSet>& cands) {
  REQUIRE(cands.size() <= 12);
  Rational best = 0;
  for (std::uint32_t mask = 0; mask < (1u << cands.size()); ++mask) {
    std::vector<std::vector<int>> sets;
    Rational cost = 0;
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (mask >> i & 1) {
        sets.push_back(cands[i].vertices);
        cost += cands[i].steiner_cost;
      }
    bool disjoint = true;
    for (std::size_t i = 0; i < sets.size() && disjoint; ++i)
      for (std::size_t j = i + 1; j < sets.size() && disjoint; ++j)
        for (int v : sets[i])
          if (std::binary_search(sets[j].begin(), sets[j].end(), v)) disjoint = false;
    if (!disjoint) continue;
    Rational profit = gain_of(trace, sets) - cost;
    if (profit > best) best = profit;
  }
  (void)inst;
  return best;
}

}  // namespace

TEST_CASE("candidate enumeration on the matching gadget") {
  GadgetSetup fx(3);
  auto cands = enumerate_restricted_sets(fx.trace, fx.inst, 2);
  CHECK(has_candidate(cands, {fixtures::gadget_a(3, 1), fixtures::gadget_b(3, 1)}));
  for (const auto& c : cands) {
    CHECK(c.vertices.size() == 2);
    if (c.vertices == std::vector<int>{fixtures::gadget_a(3, 1), fixtures::gadget_b(3, 1)})
      CHECK(c.steiner_cost == 1);
  }
  // all 22 choose 2 pairs of the single class
  CHECK(cands.size() == 28);  // 8 choose 2
}

TEST_CASE("single demand instance has exactly one candidate at k=2") {
  Instance inst = fixtures::single_edge();
  MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
  auto cands = enumerate_restricted_sets(trace, inst, 2);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].vertices == std::vector<int>{0, 1});
  CHECK(cands[0].steiner_cost == 5);
}

TEST_CASE("relay path: no candidate mixes the two classes") {
  Instance inst = fixtures::relay_path();
  MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
  auto cands = enumerate_restricted_sets(trace, inst, 3);
  for (const auto& c : cands) {
    bool has_a1 = std::binary_search(c.vertices.begin(), c.vertices.end(), fixtures::relay_a1);
    bool has_a2 = std::binary_search(c.vertices.begin(), c.vertices.end(), fixtures::relay_a2);
    CHECK_FALSE((has_a1 && has_a2));
  }
}

TEST_CASE("candidate cap guard") {
  GadgetSetup fx(5);
  CHECK_THROWS_AS(enumerate_restricted_sets(fx.trace, fx.inst, 3, 10), std::runtime_error);
}

TEST_CASE("gain values on the fixtures") {
  GadgetSetup fx(3);
  CHECK(gain_of(fx.trace, std::vector<std::vector<int>>{}) == 0);
  CHECK(gain_of(fx.trace, {{fixtures::gadget_a(3, 1), fixtures::gadget_b(3, 1)}}) == 1);

  Instance relay = fixtures::relay_path();
  MoatTrace t2 = run_extended_moat(relay, Rational(1, 10));
  CHECK_THROWS_AS(gain_of(t2, {{fixtures::relay_a1, fixtures::relay_a2, fixtures::relay_b2,
                                fixtures::relay_a3}}),
                  std::invalid_argument);
  CHECK(gain_of(t2, {{fixtures::relay_a1, fixtures::relay_b1}}) > 0);
  CHECK(gain_of(t2, {{fixtures::relay_a2, fixtures::relay_b2}}) > 0);
}

TEST_CASE("gain is monotone and submodular on sampled collections") {
  GenParams p;
  p.n = 9;
  p.edge_density = 0.5;
  p.demand_count = 3;
  p.max_cost = 7;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Instance inst = generate_random(p, seed);
    MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
    auto classes = actively_connected_partition(trace);
    // sample nested collections from pair subsets of the classes
    std::vector<std::vector<int>> pool;
    for (const auto& cls : classes)
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = i + 1; j < cls.size(); ++j) pool.push_back({cls[i], cls[j]});
    if (pool.size() < 3) continue;
    for (std::size_t a = 0; a + 2 < pool.size() && a < 12; ++a) {
      std::vector<std::vector<int>> s1 = {pool[a]};
      std::vector<std::vector<int>> s2 = {pool[a], pool[a + 1]};
      const std::vector<int>& extra = pool[a + 2];
      Rational m1 = gain_of(trace, {pool[a], extra}) - gain_of(trace, s1);
      std::vector<std::vector<int>> s2x = s2;
      s2x.push_back(extra);
      Rational m2 = gain_of(trace, s2x) - gain_of(trace, s2);
      CHECK(m1 >= m2);  // diminishing returns
      CHECK(gain_of(trace, s2) >= gain_of(trace, s1));  // monotone
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("profit maximization outcomes") {
  SUBCASE("zero gain everywhere yields the empty plan") {
    Instance inst = fixtures::single_edge();
    MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
    // fabricate candidates with zero gain: single vertices never merge moats
    std::vector<CandidateSet> cands;
    CandidateSet c;
    c.vertices = {0, 1};
    c.steiner_cost = Rational(100);  // gain 5 < cost
    c.steiner_tree = {0};
    cands.push_back(c);
    ContractionPlan plan = maximize_profit(inst, cands, trace, Rational(9, 100), Rational(1, 100));
    CHECK(plan.selected.empty());
    CHECK(plan.profit() == 0);
  }
  SUBCASE("matching gadget: the demand-pair candidates never push profit below zero") {
    GadgetSetup fx(3);
    DistanceIndex dist(fx.inst);
    std::vector<CandidateSet> cands;
    for (const auto& [a, b] : fx.inst.demands) {
      CandidateSet c;
      c.vertices = {std::min(a, b), std::max(a, b)};
      c.steiner_cost = dist.distance(a, b);
      c.steiner_tree = dist.path_edges(a, b);
      cands.push_back(c);
    }
    ContractionPlan plan =
        maximize_profit(fx.inst, cands, fx.trace, Rational(9, 100), Rational(1, 100));
    CHECK(plan.profit() >= 0);
    CHECK(plan.profit() == brute_force_best_profit(fx.inst, fx.trace, cands));
    CHECK(plan.profit() == 0);  // every pair has gain = cost here
  }
  SUBCASE("a strictly profitable triple is selected") {
    // star: three leaves on spokes of cost 2; contracting all three leaves
    // merges three moats over [0,2), gain 8 against a Steiner cost of 6
    Instance inst;
    inst.vertex_count = 4;  // h=0, a=1, b=2, c=3
    inst.edges.push_back({0, 1, Rational(2)});
    inst.edges.push_back({0, 2, Rational(2)});
    inst.edges.push_back({0, 3, Rational(2)});
    inst.demands.emplace_back(1, 2);
    inst.demands.emplace_back(2, 3);
    MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
    CHECK(gain_of(trace, {{1, 2, 3}}) == 8);
    auto cands = enumerate_restricted_sets(trace, inst, 3);
    ContractionPlan plan =
        maximize_profit(inst, cands, trace, Rational(9, 100), Rational(1, 100));
    Rational oracle = brute_force_best_profit(inst, trace, cands);
    CHECK(plan.profit() == oracle);
    CHECK(plan.profit() == 2);
    REQUIRE(plan.selected.size() == 1);
    CHECK(plan.selected[0].vertices == std::vector<int>{1, 2, 3});
    SolutionForest f2 = build_f2(inst, trace, plan);
    CHECK(f2.feasible());
  }
  SUBCASE("result is at least every single candidate's profit") {
    GenParams p;
    p.n = 8;
    p.edge_density = 0.55;
    p.demand_count = 3;
    p.max_cost = 6;
    for (std::uint64_t seed = 20; seed <= 23; ++seed) {
      Instance inst = generate_random(p, seed);
      MoatTrace trace = run_extended_moat(inst, Rational(83, 10000));
      auto cands = enumerate_restricted_sets(trace, inst, 3);
      ContractionPlan plan =
          maximize_profit(inst, cands, trace, Rational(9, 100), Rational(1, 100));
      CHECK(plan.profit() >= 0);
      for (const auto& c : cands) {
        Rational single = gain_of(trace, {c.vertices}) - c.steiner_cost;
        CHECK(plan.profit() >= single);
      }
    }
  }
}

TEST_CASE("lemma ledger: contracted timed duals match 2*y - gain exactly") {
  SUBCASE("matching gadget with all three demand pairs contracted") {
    GadgetSetup fx(3);
    std::vector<CandidateSet> sel;
    for (int i = 1; i <= 3; ++i) {
      CandidateSet c;
      c.vertices = {fixtures::gadget_a(3, i), fixtures::gadget_b(3, i)};
      std::sort(c.vertices.begin(), c.vertices.end());
      c.steiner_cost = 1;
      c.steiner_tree = {i - 1};
      sel.push_back(c);
    }
    ContractionPlan plan;
    plan.selected = sel;
    std::vector<std::vector<int>> raw;
    for (const auto& s : sel) raw.push_back(s.vertices);
    plan.gain_value = gain_of(fx.trace, raw);
    for (const auto& s : sel) plan.cost_value += s.steiner_cost;
    CHECK(plan.gain_value == 3);

    Contraction ctr = contract_vertex_groups(fx.inst, raw);
    std::vector<Rational> deac(ctr.contracted.vertex_count);
    for (int v = 0; v < fx.inst.vertex_count; ++v)
      deac[ctr.vertex_image[v]] = fx.trace.deactivation[v];
    MoatTrace timed = run_timed_moat(ctr.contracted, deac);
    CHECK(2 * timed.y_total() == 2 * fx.trace.y_total() - plan.gain_value);

    SolutionForest f2 = build_f2(fx.inst, fx.trace, plan);
    CHECK(f2.feasible());
    CHECK(f2.total_cost <= 2 * fx.trace.y_total() - plan.gain_value + plan.cost_value);
    CHECK(f2.total_cost == 7);  // chain of 4 + the 3 matching edges
  }
  SUBCASE("contracted timed run mirrors the quotient of the original active sets") {
    GadgetSetup fx(3);
    std::vector<std::vector<int>> groups;
    for (int i = 1; i <= 3; ++i) {
      std::vector<int> g = {fixtures::gadget_a(3, i), fixtures::gadget_b(3, i)};
      std::sort(g.begin(), g.end());
      groups.push_back(g);
    }
    Contraction ctr = contract_vertex_groups(fx.inst, groups);
    std::vector<Rational> deac(ctr.contracted.vertex_count);
    for (int v = 0; v < fx.inst.vertex_count; ++v)
      deac[ctr.vertex_image[v]] = fx.trace.deactivation[v];
    MoatTrace orig = run_timed_moat(fx.inst, fx.trace.deactivation);
    MoatTrace contr = run_timed_moat(ctr.contracted, deac);

    REQUIRE(orig.timeline.size() == contr.timeline.size());
    for (std::size_t i = 0; i < orig.timeline.size(); ++i) {
      CHECK(orig.timeline[i].t0 == contr.timeline[i].t0);
      CHECK(orig.timeline[i].t1 == contr.timeline[i].t1);
      // quotient the original active sets by the contracted groups
      std::set<std::vector<int>> quotient;
      {
        // two original active sets fall together iff a group intersects both
        Dsu piece(fx.inst.vertex_count);
        for (int id : orig.timeline[i].active_set_ids)
          for (std::size_t j = 1; j < orig.support[id].vertices.size(); ++j)
            piece.unite(orig.support[id].vertices[0], orig.support[id].vertices[j]);
        for (const auto& g : groups)
          for (std::size_t j = 1; j < g.size(); ++j) piece.unite(g[0], g[j]);
        std::map<int, std::set<int>> by_piece;
        for (int id : orig.timeline[i].active_set_ids)
          for (int v : orig.support[id].vertices)
            by_piece[piece.find(v)].insert(ctr.vertex_image[v]);
        for (auto& [root, images] : by_piece)
          quotient.insert(std::vector<int>(images.begin(), images.end()));
      }
      std::set<std::vector<int>> contracted_active;
      for (int id : contr.timeline[i].active_set_ids)
        contracted_active.insert(contr.support[id].vertices);
      CHECK(quotient == contracted_active);
    }
  }
  SUBCASE("random sweep") {
    GenParams p;
    p.n = 9;
    p.edge_density = 0.5;
    p.demand_count = 3;
    p.max_cost = 8;
    int checked = 0;
    for (std::uint64_t seed = 30; seed <= 36; ++seed) {
      Instance inst = generate_random(p, seed);
      MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
      // plan: contract the first demand pair (always actively connected)
      std::vector<int> set = {inst.demands[0].first, inst.demands[0].second};
      std::sort(set.begin(), set.end());
      Rational g = gain_of(trace, {set});
      Contraction ctr = contract_vertex_groups(inst, {set});
      std::vector<Rational> deac(ctr.contracted.vertex_count);
      for (int v = 0; v < inst.vertex_count; ++v)
        deac[ctr.vertex_image[v]] = trace.deactivation[v];
      MoatTrace timed = run_timed_moat(ctr.contracted, deac);
      CHECK(2 * timed.y_total() == 2 * trace.y_total() - g);
      ++checked;
    }
    CHECK(checked == 7);
  }
}

TEST_CASE("build_f2 fixtures") {
  SUBCASE("empty plan reproduces the primal-dual forest cost") {
    GadgetSetup fx(3);
    ContractionPlan empty;
    empty.gain_value = 0;
    empty.cost_value = 0;
    SolutionForest f2 = build_f2(fx.inst, fx.trace, empty);
    SolutionForest f1 = extract_forest(fx.inst, fx.trace);
    CHECK(f2.feasible());
    CHECK(f2.total_cost == f1.total_cost);
  }
  SUBCASE("single demand and edge: contraction leaves just the Steiner tree") {
    Instance inst = fixtures::single_edge();
    MoatTrace trace = run_extended_moat(inst, Rational(1, 10));
    ContractionPlan plan;
    CandidateSet c;
    c.vertices = {0, 1};
    c.steiner_cost = 5;
    c.steiner_tree = {0};
    plan.selected.push_back(c);
    plan.gain_value = gain_of(trace, {{0, 1}});
    plan.cost_value = 5;
    SolutionForest f2 = build_f2(inst, trace, plan);
    CHECK(f2.feasible());
    CHECK(f2.edge_ids == std::vector<int>{0});
  }
}

#include "sforest/json_io.hpp"

namespace sforest {

Json rational_json(const Rational& r) { return fraction_str(r); }

namespace {

Json rational_with_decimal(const Rational& r) {
  Json j;
  j["exact"] = fraction_str(r);
  j["approx"] = decimal_str(r);
  return j;
}

const char* kind_name(SetKind k) {
  switch (k) {
    case SetKind::sep: return "sep";
    case SetKind::unsep: return "unsep";
    default: return "zero-growth";
  }
}

}  // namespace

Json trace_to_json(const MoatTrace& trace) {
  Json j;
  j["mode"] = trace.mode == TraceMode::extended ? "extended" : "timed";
  j["epsilon"] = rational_json(trace.epsilon);
  Json support = Json::array();
  for (const SupportSet& s : trace.support) {
    Json js;
    js["id"] = s.id;
    Json verts = Json::array();
    for (int v : s.vertices) verts.push_back(v + 1);
    js["vertices"] = std::move(verts);
    js["birth"] = rational_json(s.birth);
    js["growth_end"] = rational_json(s.growth_end);
    js["y"] = rational_json(s.y);
    js["kind"] = kind_name(s.kind);
    js["fingerprint"] = s.sep_fingerprint;
    if (s.parent)
      js["parent"] = *s.parent;
    else
      js["parent"] = nullptr;
    support.push_back(std::move(js));
  }
  j["support"] = std::move(support);
  Json timeline = Json::array();
  for (const TimelineInterval& iv : trace.timeline) {
    Json ji;
    ji["t0"] = rational_json(iv.t0);
    ji["t1"] = rational_json(iv.t1);
    ji["active"] = iv.active_set_ids;
    timeline.push_back(std::move(ji));
  }
  j["timeline"] = std::move(timeline);
  Json merges = Json::array();
  for (const MergeEvent& ev : trace.merge_events) {
    Json je;
    je["time"] = rational_json(ev.time);
    je["merged"] = ev.merged_ids;
    je["new_id"] = ev.new_id;
    merges.push_back(std::move(je));
  }
  j["merge_events"] = std::move(merges);
  Json deac = Json::array();
  for (const Rational& d : trace.deactivation) deac.push_back(rational_json(d));
  j["deactivation"] = std::move(deac);
  Json budgets = Json::array();
  for (const auto& [id, b] : trace.budgets_final) {
    Json jb;
    jb["set"] = id;
    jb["budget"] = rational_json(b);
    budgets.push_back(std::move(jb));
  }
  j["budgets_final"] = std::move(budgets);
  Json tight = Json::array();
  for (std::size_t i = 0; i < trace.tight_edges.size(); ++i) {
    Json jt;
    jt["edge"] = trace.tight_edges[i];
    jt["time"] = rational_json(trace.tight_times[i]);
    tight.push_back(std::move(jt));
  }
  j["tight_edges"] = std::move(tight);
  return j;
}

Json forest_to_json(const SolutionForest& forest) {
  Json j;
  j["cost"] = rational_with_decimal(forest.total_cost);
  j["edges"] = forest.edge_ids;
  j["feasible"] = forest.feasible();
  return j;
}

Json plan_to_json(const ContractionPlan& plan) {
  Json j;
  Json sets = Json::array();
  for (const CandidateSet& s : plan.selected) {
    Json js;
    Json verts = Json::array();
    for (int v : s.vertices) verts.push_back(v + 1);
    js["vertices"] = std::move(verts);
    js["steiner_cost"] = rational_json(s.steiner_cost);
    js["steiner_tree"] = s.steiner_tree;
    sets.push_back(std::move(js));
  }
  j["selected"] = std::move(sets);
  j["gain"] = rational_json(plan.gain_value);
  j["cost"] = rational_json(plan.cost_value);
  j["profit"] = rational_json(plan.profit());
  return j;
}

Json collection_to_json(const AutarkicCollection& coll) {
  Json j;
  Json tuples = Json::array();
  for (const AutarkicTuple& t : coll.tuples) {
    Json jt;
    jt["members"] = t.member_set_ids;
    jt["witness_time"] = rational_json(t.witness_time);
    jt["sep"] = t.sep_union;
    Json reps = Json::array();
    for (const auto& r : t.representatives) {
      Json jr;
      jr["demand"] = r.demand;
      jr["role"] = r.role;
      reps.push_back(std::move(jr));
    }
    jt["representatives"] = std::move(reps);
    jt["connector"] = t.connector;
    jt["cost"] = rational_json(t.cost);
    jt["coverage"] = rational_json(t.coverage);
    jt["profit"] = rational_json(t.profit);
    tuples.push_back(std::move(jt));
  }
  j["tuples"] = std::move(tuples);
  j["coverage"] = rational_json(coll.total_coverage);
  j["cost"] = rational_json(coll.total_cost);
  j["profit"] = rational_json(coll.total_profit);
  return j;
}

Json report_to_json(const Instance& inst, const Report& report, bool with_times) {
  Json j;
  Json params;
  params["epsilon"] = rational_json(report.params.epsilon);
  params["alpha"] = rational_json(report.params.alpha);
  params["gamma"] = rational_json(report.params.gamma);
  params["k"] = report.params.k;
  params["include_triples"] = report.params.include_triples;
  params["classic_gw_inner"] = report.params.classic_gw_inner;
  params["seed"] = report.params.seed;
  params["implied_alpha_plus_delta"] = rational_json(report.implied_alpha_plus_delta());
  j["params"] = std::move(params);

  j["instance"] = {{"vertices", inst.vertex_count},
                   {"edges", inst.edges.size()},
                   {"demands", inst.demands.size()}};

  j["f1"] = forest_to_json(report.f1);
  j["f2"] = forest_to_json(report.f2);
  j["f3"] = forest_to_json(report.f3);
  j["best"] = {{"forest", report.best_index}, {"cost", rational_with_decimal(report.best_cost)}};

  Json duals;
  duals["y_sep"] = rational_with_decimal(report.duals.y_sep_total);
  duals["y_unsep"] = rational_with_decimal(report.duals.y_unsep_total);
  duals["y_total"] = rational_with_decimal(report.duals.y_total);
  j["duals"] = std::move(duals);

  j["plan"] = plan_to_json(report.plan);
  j["collection"] = collection_to_json(report.collection);

  if (report.has_exact) {
    Json ex;
    ex["cost"] = rational_with_decimal(report.exact_forest.total_cost);
    ex["edges"] = report.exact_forest.edge_ids;
    if (report.ratio_defined) ex["ratio"] = rational_with_decimal(report.ratio);
    ex["excess_of_opt"] = rational_json(report.excess_opt);
    ex["lambda_of_opt"] = rational_json(report.lambda_opt);
    ex["excess_case"] = report.excess_case;    // excess(OPT) >= 0.0116 c(OPT)
    ex["profit_case"] = report.profit_case;    // profit >= 0.03 c(OPT)
    j["exact"] = std::move(ex);
  }
  if (with_times) {
    Json t;
    t["moat_s"] = report.times.moat_seconds;
    t["f1_s"] = report.times.f1_seconds;
    t["f2_s"] = report.times.f2_seconds;
    t["f3_s"] = report.times.f3_seconds;
    t["total_s"] = report.times.total_seconds;
    j["times"] = std::move(t);
  }
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sforest

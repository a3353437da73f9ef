#pragma once

#include "sforest/orchestrator.hpp"

#include <json.hpp>

namespace sforest {

using Json = nlohmann::ordered_json;

// All rationals serialize as "p/q" strings; selected headline quantities
// additionally carry a decimal approximation. Key order is fixed so equal
// inputs give byte-identical documents.
Json rational_json(const Rational& r);

Json trace_to_json(const MoatTrace& trace);
Json forest_to_json(const SolutionForest& forest);
Json plan_to_json(const ContractionPlan& plan);
Json collection_to_json(const AutarkicCollection& coll);
Json report_to_json(const Instance& inst, const Report& report, bool with_times = false);

std::string dump_json(const Json& j);

}  // namespace sforest

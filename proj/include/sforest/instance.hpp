#pragma once

#include "sforest/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sforest {

// Exact Steiner trees are only ever requested on constant-size terminal
// sets: connectors use at most six representatives and gain candidates have
// at most k <= 6 vertices.
inline constexpr int kMaxExactTerminals = 6;

struct Edge {
  int u = 0;  // 0-based vertex ids
  int v = 0;
  Rational cost;
};

struct Instance {
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<std::pair<int, int>> demands;  // unordered pairs, stored (min,max)
};

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& reason)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(column_) + ": " + reason),
        line(line_),
        column(column_) {}
};

// STP-F reader/writer. The serializer emits the canonical form: sorted
// edges, costs as integers or fractions in lowest terms.
Instance parse_instance(std::istream& in);
Instance parse_instance_text(const std::string& text);
Instance load_instance_file(const std::string& path);
std::string serialize_instance(const Instance& inst);

// Empty result means every Instance invariant holds, including
// demand-connectivity. Violations are human-readable one-liners.
std::vector<std::string> validate(const Instance& inst);

struct SolutionForest {
  std::vector<int> edge_ids;  // sorted, unique
  Rational total_cost;
  std::vector<bool> satisfied;  // per demand index

  bool feasible() const {
    for (bool s : satisfied)
      if (!s) return false;
    return true;
  }
};

// Builds a forest from an edge set: dedupes ids, sums costs, computes the
// per-demand feasibility certificate.
SolutionForest make_forest(const Instance& inst, std::vector<int> edge_ids);

struct PathResult {
  bool reachable = false;
  Rational distance;
  std::vector<int> edge_ids;  // in order from s to t
};

PathResult shortest_path(const Instance& inst, int s, int t);

struct SteinerResult {
  bool exists = false;
  Rational cost;
  std::vector<int> edge_ids;  // sorted, unique
};

// Minimum-cost edge set connecting all terminals (Dreyfus-Wagner). Terminal
// sets larger than k_max are rejected with std::invalid_argument; singleton
// and empty sets yield an empty tree of cost 0.
SteinerResult steiner_tree_exact(const Instance& inst, const std::vector<int>& terminals,
                                 int k_max = kMaxExactTerminals);

// Same recursion without the k_max guard; the desk-scale oracle runs it on
// blocks of up to ten terminals.
SteinerResult steiner_tree_unbounded(const Instance& inst, const std::vector<int>& terminals);

struct GenParams {
  int n = 2;
  double edge_density = 0.5;
  int demand_count = 1;
  long max_cost = 10;
  bool metric = false;
};

// Deterministic for a fixed seed. The sampled graph is augmented with extra
// edges until every demand pair is connected, so the result always
// validates. Throws std::invalid_argument on unsatisfiable parameters.
Instance generate_random(const GenParams& params, std::uint64_t seed);

// Shared shortest-path index: exact distances and deterministic
// predecessor edges from every source. Built once per instance and reused
// by the gain and autarkic modules.
class DistanceIndex {
 public:
  explicit DistanceIndex(const Instance& inst);

  bool reachable(int s, int t) const { return reach_[s][t]; }
  const Rational& distance(int s, int t) const { return dist_[s][t]; }
  // Edge ids along the deterministic shortest s-t path.
  std::vector<int> path_edges(int s, int t) const;
  int vertex_count() const { return n_; }

 private:
  int n_;
  std::vector<std::vector<Rational>> dist_;
  std::vector<std::vector<char>> reach_;
  std::vector<std::vector<int>> parent_edge_;  // parent_edge_[s][v]: last edge on s->v path
  std::vector<std::vector<int>> parent_vtx_;
  const Instance* inst_;
};

}  // namespace sforest

#include "sforest/instance.hpp"

#include "sforest/dsu.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace sforest {

namespace {

std::vector<std::string> tokenize(const std::string& line, std::vector<int>& columns) {
  std::vector<std::string> toks;
  columns.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    toks.push_back(line.substr(start, i - start));
    columns.push_back(static_cast<int>(start) + 1);
  }
  return toks;
}

int parse_vertex_ref(const std::string& tok, int vertex_count, int line, int col) {
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(line, col, "expected vertex id, got '" + tok + "'");
  long id = std::strtol(tok.c_str(), nullptr, 10);
  if (id < 1 || id > vertex_count)
    throw ParseError(line, col,
                     "dangling vertex reference " + tok + " (graph has " +
                         std::to_string(vertex_count) + " vertices)");
  return static_cast<int>(id) - 1;
}

}  // namespace

Instance parse_instance(std::istream& in) {
  Instance inst;
  enum class Section { None, Graph, Demands, Done };
  Section section = Section::None;
  bool saw_header = false;
  bool saw_end = false;

  std::string line;
  int lineno = 0;
  std::vector<int> cols;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = tokenize(line, cols);
    if (toks.empty()) continue;
    if (saw_end) throw ParseError(lineno, cols[0], "content after END");
    const std::string& kw = toks[0];

    if (!saw_header) {
      if (kw != "STPF" || toks.size() != 2 || toks[1] != "1")
        throw ParseError(lineno, cols[0], "expected header 'STPF 1'");
      saw_header = true;
      continue;
    }
    if (kw == "SECTION") {
      if (toks.size() != 2) throw ParseError(lineno, cols[0], "SECTION needs a name");
      if (toks[1] == "Graph") {
        if (section != Section::None) throw ParseError(lineno, cols[1], "duplicate or misplaced Graph section");
        section = Section::Graph;
      } else if (toks[1] == "Demands") {
        if (section != Section::Graph) throw ParseError(lineno, cols[1], "Demands section before Graph");
        section = Section::Demands;
      } else {
        throw ParseError(lineno, cols[1], "unknown section '" + toks[1] + "'");
      }
    } else if (kw == "V") {
      if (section != Section::Graph) throw ParseError(lineno, cols[0], "V outside Graph section");
      if (toks.size() != 2) throw ParseError(lineno, cols[0], "V needs a count");
      try {
        long n = std::stol(toks[1]);
        if (n < 0) throw std::invalid_argument("negative");
        inst.vertex_count = static_cast<int>(n);
      } catch (const std::exception&) {
        throw ParseError(lineno, cols[1], "bad vertex count '" + toks[1] + "'");
      }
    } else if (kw == "E") {
      if (section != Section::Graph) throw ParseError(lineno, cols[0], "E outside Graph section");
      if (toks.size() != 4) throw ParseError(lineno, cols[0], "E needs 'E u v cost'");
      Edge e;
      e.u = parse_vertex_ref(toks[1], inst.vertex_count, lineno, cols[1]);
      e.v = parse_vertex_ref(toks[2], inst.vertex_count, lineno, cols[2]);
      try {
        e.cost = parse_rational(toks[3]);
      } catch (const std::exception& ex) {
        throw ParseError(lineno, cols[3], ex.what());
      }
      if (e.cost < 0) throw ParseError(lineno, cols[3], "negative cost");
      if (e.u > e.v) std::swap(e.u, e.v);
      inst.edges.push_back(std::move(e));
    } else if (kw == "D") {
      if (section != Section::Demands) throw ParseError(lineno, cols[0], "D outside Demands section");
      if (toks.size() != 3) throw ParseError(lineno, cols[0], "D needs 'D u v'");
      int a = parse_vertex_ref(toks[1], inst.vertex_count, lineno, cols[1]);
      int b = parse_vertex_ref(toks[2], inst.vertex_count, lineno, cols[2]);
      inst.demands.emplace_back(std::min(a, b), std::max(a, b));
    } else if (kw == "END") {
      saw_end = true;
    } else {
      throw ParseError(lineno, cols[0], "unknown keyword '" + kw + "'");
    }
  }
  if (!saw_header) throw ParseError(1, 1, "missing header 'STPF 1'");
  if (!saw_end) throw ParseError(lineno + 1, 1, "missing END");
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_instance(in);
}

std::string serialize_instance(const Instance& inst) {
  std::vector<Edge> edges = inst.edges;
  for (auto& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.cost < b.cost;
  });
  std::vector<std::pair<int, int>> demands = inst.demands;
  for (auto& d : demands)
    if (d.first > d.second) std::swap(d.first, d.second);
  std::sort(demands.begin(), demands.end());

  std::ostringstream out;
  out << "STPF 1\n";
  out << "SECTION Graph\n";
  out << "V " << inst.vertex_count << "\n";
  for (const auto& e : edges)
    out << "E " << e.u + 1 << " " << e.v + 1 << " " << fraction_str(e.cost) << "\n";
  out << "SECTION Demands\n";
  for (const auto& d : demands) out << "D " << d.first + 1 << " " << d.second + 1 << "\n";
  out << "END\n";
  return out.str();
}

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  const int n = inst.vertex_count;
  for (std::size_t i = 0; i < inst.edges.size(); ++i) {
    const Edge& e = inst.edges[i];
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      out.push_back("edge " + std::to_string(i) + " references a missing vertex");
      continue;
    }
    if (e.u == e.v) out.push_back("edge " + std::to_string(i) + " is a self-loop");
    if (e.cost < 0) out.push_back("edge " + std::to_string(i) + " has negative cost");
  }
  for (std::size_t i = 0; i < inst.demands.size(); ++i) {
    auto [a, b] = inst.demands[i];
    if (a < 0 || a >= n || b < 0 || b >= n) {
      out.push_back("demand " + std::to_string(i) + " references a missing vertex");
      continue;
    }
    if (a == b) out.push_back("demand " + std::to_string(i) + " joins a vertex to itself");
  }
  if (out.empty()) {
    Dsu dsu(n);
    for (const Edge& e : inst.edges) dsu.unite(e.u, e.v);
    for (std::size_t i = 0; i < inst.demands.size(); ++i) {
      auto [a, b] = inst.demands[i];
      if (dsu.find(a) != dsu.find(b))
        out.push_back("demand " + std::to_string(i) + " {" + std::to_string(a + 1) + "," +
                      std::to_string(b + 1) + "} is infeasible: endpoints in different components");
    }
  }
  return out;
}

SolutionForest make_forest(const Instance& inst, std::vector<int> edge_ids) {
  std::sort(edge_ids.begin(), edge_ids.end());
  edge_ids.erase(std::unique(edge_ids.begin(), edge_ids.end()), edge_ids.end());
  SolutionForest f;
  f.total_cost = 0;
  Dsu dsu(inst.vertex_count);
  for (int id : edge_ids) {
    if (id < 0 || id >= static_cast<int>(inst.edges.size()))
      throw std::invalid_argument("forest references unknown edge id " + std::to_string(id));
    f.total_cost += inst.edges[id].cost;
    dsu.unite(inst.edges[id].u, inst.edges[id].v);
  }
  f.edge_ids = std::move(edge_ids);
  f.satisfied.reserve(inst.demands.size());
  for (const auto& [a, b] : inst.demands) f.satisfied.push_back(dsu.find(a) == dsu.find(b));
  return f;
}

namespace {

struct Adjacency {
  struct Arc {
    int to;
    int edge_id;
  };
  std::vector<std::vector<Arc>> arcs;
  explicit Adjacency(const Instance& inst) : arcs(inst.vertex_count) {
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
      const Edge& e = inst.edges[i];
      arcs[e.u].push_back({e.v, static_cast<int>(i)});
      arcs[e.v].push_back({e.u, static_cast<int>(i)});
    }
  }
};

// Dijkstra with deterministic tie-breaking: vertices settle in (distance,
// id) order and a parent is only replaced on strict improvement.
void dijkstra(const Instance& inst, const Adjacency& adj, int s, std::vector<Rational>& dist,
              std::vector<char>& reached, std::vector<int>& parent_edge,
              std::vector<int>& parent_vtx) {
  const int n = inst.vertex_count;
  dist.assign(n, Rational(0));
  reached.assign(n, 0);
  parent_edge.assign(n, -1);
  parent_vtx.assign(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<Rational, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[s] = 0;
  reached[s] = 1;
  pq.push({Rational(0), s});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u] || d != dist[u]) continue;
    done[u] = 1;
    for (const auto& arc : adj.arcs[u]) {
      Rational nd = d + inst.edges[arc.edge_id].cost;
      if (!reached[arc.to] || nd < dist[arc.to]) {
        reached[arc.to] = 1;
        dist[arc.to] = nd;
        parent_edge[arc.to] = arc.edge_id;
        parent_vtx[arc.to] = u;
        pq.push({nd, arc.to});
      }
    }
  }
}

}  // namespace

PathResult shortest_path(const Instance& inst, int s, int t) {
  if (s < 0 || s >= inst.vertex_count || t < 0 || t >= inst.vertex_count)
    throw std::invalid_argument("shortest_path: vertex out of range");
  Adjacency adj(inst);
  std::vector<Rational> dist;
  std::vector<char> reached;
  std::vector<int> pe, pv;
  dijkstra(inst, adj, s, dist, reached, pe, pv);
  PathResult r;
  if (!reached[t]) return r;
  r.reachable = true;
  r.distance = dist[t];
  for (int v = t; v != s; v = pv[v]) r.edge_ids.push_back(pe[v]);
  std::reverse(r.edge_ids.begin(), r.edge_ids.end());
  return r;
}

DistanceIndex::DistanceIndex(const Instance& inst) : n_(inst.vertex_count), inst_(&inst) {
  Adjacency adj(inst);
  dist_.resize(n_);
  reach_.resize(n_);
  parent_edge_.resize(n_);
  parent_vtx_.resize(n_);
  for (int s = 0; s < n_; ++s) dijkstra(inst, adj, s, dist_[s], reach_[s], parent_edge_[s], parent_vtx_[s]);
}

std::vector<int> DistanceIndex::path_edges(int s, int t) const {
  std::vector<int> out;
  if (!reach_[s][t]) throw std::invalid_argument("path_edges: unreachable pair");
  for (int v = t; v != s; v = parent_vtx_[s][v]) out.push_back(parent_edge_[s][v]);
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

// Dreyfus-Wagner over exact rationals with edge reconstruction.
struct SteinerDp {
  const Instance& inst;
  const Adjacency adj;
  std::vector<int> terms;  // deduped
  int m;                   // |terms| - 1 non-root terminals

  struct Cell {
    bool set = false;
    Rational cost;
    int kind = 0;  // 0 unset, 1 base (path from terminal), 2 edge step, 3 split
    int arg_vertex = -1;
    int arg_edge = -1;
    unsigned arg_mask = 0;
  };
  // dp[mask][v]: cheapest tree connecting {terms[i+1] : bit i of mask} + v
  std::vector<std::vector<Cell>> dp;
  std::vector<std::vector<Rational>> term_dist;
  std::vector<std::vector<int>> term_pe, term_pv;
  std::vector<std::vector<char>> term_reach;

  explicit SteinerDp(const Instance& inst_, std::vector<int> t)
      : inst(inst_), adj(inst_), terms(std::move(t)), m(static_cast<int>(terms.size()) - 1) {}

  bool run(SteinerResult& out) {
    const int n = inst.vertex_count;
    term_dist.resize(terms.size());
    term_pe.resize(terms.size());
    term_pv.resize(terms.size());
    term_reach.resize(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
      dijkstra(inst, adj, terms[i], term_dist[i], term_reach[i], term_pe[i], term_pv[i]);
    for (std::size_t i = 1; i < terms.size(); ++i)
      if (!term_reach[i][static_cast<std::size_t>(terms[0])]) return false;

    const unsigned full = (1u << m) - 1;
    dp.assign(full + 1, std::vector<Cell>(n));
    for (int i = 0; i < m; ++i) {
      unsigned mask = 1u << i;
      for (int v = 0; v < n; ++v) {
        if (!term_reach[i + 1][v]) continue;
        Cell& c = dp[mask][v];
        c.set = true;
        c.cost = term_dist[i + 1][v];
        c.kind = 1;
        c.arg_vertex = i + 1;
      }
    }
    using Item = std::pair<Rational, int>;
    for (unsigned mask = 1; mask <= full; ++mask) {
      if ((mask & (mask - 1)) == 0) continue;  // singletons done above
      auto& row = dp[mask];
      // merge step: split off the submask containing the lowest bit
      unsigned low = mask & (~mask + 1);
      for (unsigned sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
        if (!(sub & low)) continue;
        unsigned rest = mask ^ sub;
        for (int v = 0; v < n; ++v) {
          if (!dp[sub][v].set || !dp[rest][v].set) continue;
          Rational c = dp[sub][v].cost + dp[rest][v].cost;
          if (!row[v].set || c < row[v].cost) {
            row[v].set = true;
            row[v].cost = c;
            row[v].kind = 3;
            row[v].arg_mask = sub;
          }
        }
      }
      // graph step: Dijkstra seeded with the merged values
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      for (int v = 0; v < n; ++v)
        if (row[v].set) pq.push({row[v].cost, v});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (!row[u].set || d != row[u].cost) continue;
        for (const auto& arc : adj.arcs[u]) {
          Rational nd = d + inst.edges[arc.edge_id].cost;
          Cell& c = row[arc.to];
          if (!c.set || nd < c.cost) {
            c.set = true;
            c.cost = nd;
            c.kind = 2;
            c.arg_vertex = u;
            c.arg_edge = arc.edge_id;
            pq.push({nd, arc.to});
          }
        }
      }
    }
    const int root = terms[0];
    if (!dp[full][root].set) return false;
    std::set<int> edges;
    collect(full, root, edges);
    out.exists = true;
    out.cost = dp[full][root].cost;
    out.edge_ids.assign(edges.begin(), edges.end());
    return true;
  }

  void collect(unsigned mask, int v, std::set<int>& edges) {
    const Cell& c = dp[mask][v];
    switch (c.kind) {
      case 1: {  // shortest path from terminal c.arg_vertex to v
        int ti = c.arg_vertex;
        for (int x = v; x != terms[ti]; x = term_pv[ti][x]) edges.insert(term_pe[ti][x]);
        break;
      }
      case 2:
        edges.insert(c.arg_edge);
        collect(mask, c.arg_vertex, edges);
        break;
      case 3:
        collect(c.arg_mask, v, edges);
        collect(mask ^ c.arg_mask, v, edges);
        break;
      default:
        break;
    }
  }
};

}  // namespace

SteinerResult steiner_tree_unbounded(const Instance& inst, const std::vector<int>& terminals) {
  std::vector<int> terms = terminals;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  for (int t : terms)
    if (t < 0 || t >= inst.vertex_count)
      throw std::invalid_argument("steiner tree: terminal out of range");
  SteinerResult r;
  if (terms.size() <= 1) {
    r.exists = true;
    r.cost = 0;
    return r;
  }
  SteinerDp dp(inst, std::move(terms));
  if (!dp.run(r)) return SteinerResult{};
  return r;
}

SteinerResult steiner_tree_exact(const Instance& inst, const std::vector<int>& terminals,
                                 int k_max) {
  std::vector<int> terms = terminals;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (static_cast<int>(terms.size()) > k_max)
    throw std::invalid_argument("steiner_tree_exact: " + std::to_string(terms.size()) +
                                " terminals exceed the configured bound of " + std::to_string(k_max));
  return steiner_tree_unbounded(inst, terms);
}

Instance generate_random(const GenParams& params, std::uint64_t seed) {
  if (params.n < 2) throw std::invalid_argument("generate_random: need n >= 2");
  if (params.demand_count < 1) throw std::invalid_argument("generate_random: need demand_count >= 1");
  if (params.max_cost < 1) throw std::invalid_argument("generate_random: need max_cost >= 1");
  const long long pairs = static_cast<long long>(params.n) * (params.n - 1) / 2;
  if (params.demand_count > pairs)
    throw std::invalid_argument("generate_random: more demands than vertex pairs");
  if (!(params.edge_density > 0.0))
    throw std::invalid_argument("generate_random: edge density must be positive when demands exist");

  std::mt19937_64 rng(seed);
  auto next_unit = [&rng]() {  // uniform in [0,1), bit-stable across platforms
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
  };
  auto next_below = [&rng](std::uint64_t bound) { return static_cast<long>(rng() % bound); };

  Instance inst;
  inst.vertex_count = params.n;

  std::vector<std::pair<long, long>> points;
  if (params.metric) {
    points.reserve(params.n);
    for (int v = 0; v < params.n; ++v) {
      long x = next_below(static_cast<std::uint64_t>(params.max_cost) + 1);
      long y = next_below(static_cast<std::uint64_t>(params.max_cost) + 1);
      points.emplace_back(x, y);
    }
  }
  auto edge_cost = [&](int u, int v) -> Rational {
    if (params.metric)
      return Rational(std::llabs(points[u].first - points[v].first) +
                      std::llabs(points[u].second - points[v].second));
    return Rational(1 + next_below(static_cast<std::uint64_t>(params.max_cost)));
  };

  for (int u = 0; u < params.n; ++u)
    for (int v = u + 1; v < params.n; ++v)
      if (next_unit() < params.edge_density) inst.edges.push_back({u, v, edge_cost(u, v)});

  std::set<std::pair<int, int>> chosen;
  while (static_cast<int>(chosen.size()) < params.demand_count) {
    int a = static_cast<int>(next_below(static_cast<std::uint64_t>(params.n)));
    int b = static_cast<int>(next_below(static_cast<std::uint64_t>(params.n)));
    if (a == b) continue;
    chosen.insert({std::min(a, b), std::max(a, b)});
  }
  inst.demands.assign(chosen.begin(), chosen.end());

  // Augment until every demand pair is connected.
  Dsu dsu(params.n);
  for (const Edge& e : inst.edges) dsu.unite(e.u, e.v);
  for (const auto& [a, b] : inst.demands) {
    if (dsu.find(a) != dsu.find(b)) {
      inst.edges.push_back({a, b, edge_cost(a, b)});
      dsu.unite(a, b);
    }
  }

  std::sort(inst.edges.begin(), inst.edges.end(), [](const Edge& x, const Edge& y) {
    if (x.u != y.u) return x.u < y.u;
    if (x.v != y.v) return x.v < y.v;
    return x.cost < y.cost;
  });
  return inst;
}

}  // namespace sforest

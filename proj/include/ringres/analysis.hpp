#pragma once

// Whole-scenario pipeline: split into connected components, schedule each,
// decompose into rings, compute UR/SN/IR and compare with the closed forms of
// any recognised topology.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringres/error.hpp"
#include "ringres/resilience.hpp"
#include "ringres/rings.hpp"
#include "ringres/scenario.hpp"
#include "ringres/schedule.hpp"
#include "ringres/simulator.hpp"

namespace ringres {

struct Recognized {
  std::string kind;       // chain, tree, grid, cycle, or empty
  std::vector<int> dims;  // as closed_form expects; cycle dims come later
};

namespace detail {

inline std::vector<int> bfs_dist(const CommGraph& g, int src) {
  std::vector<int> d(static_cast<std::size_t>(g.size()), -1);
  std::queue<int> q;
  d[static_cast<std::size_t>(src)] = 0;
  q.push(src);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : g.incident(v)) {
      int w = g.other(e, v);
      if (d[static_cast<std::size_t>(w)] < 0) {
        d[static_cast<std::size_t>(w)] = d[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
    }
  }
  return d;
}

// Coordinates from distances to two adjacent corners; a grid iff they form a
// bijection onto the lattice and every edge is a unit step.
inline bool is_grid(const CommGraph& g, int rows, int cols) {
  std::vector<int> corners;
  for (int v = 0; v < g.size(); ++v)
    if (g.degree(v) == 2) corners.push_back(v);
  if (corners.size() != 4) return false;
  const int c0 = corners[0];
  auto d0 = bfs_dist(g, c0);
  for (int c1 : corners) {
    if (c1 == c0 || d0[static_cast<std::size_t>(c1)] != cols - 1) continue;
    auto d1 = bfs_dist(g, c1);
    std::vector<std::pair<int, int>> pos(static_cast<std::size_t>(g.size()));
    std::vector<bool> used(static_cast<std::size_t>(rows * cols), false);
    bool ok = true;
    for (int v = 0; v < g.size() && ok; ++v) {
      int a = d0[static_cast<std::size_t>(v)], b = d1[static_cast<std::size_t>(v)];
      int twice_x = a - b + cols - 1;
      if (a < 0 || b < 0 || twice_x % 2 != 0) {
        ok = false;
        break;
      }
      int x = twice_x / 2, y = a - x;
      if (x < 0 || x >= cols || y < 0 || y >= rows || used[static_cast<std::size_t>(y * cols + x)]) {
        ok = false;
        break;
      }
      used[static_cast<std::size_t>(y * cols + x)] = true;
      pos[static_cast<std::size_t>(v)] = {x, y};
    }
    if (!ok) continue;
    for (const Edge& e : g.edges()) {
      auto [xi, yi] = pos[static_cast<std::size_t>(e.i)];
      auto [xj, yj] = pos[static_cast<std::size_t>(e.j)];
      if (std::abs(xi - xj) + std::abs(yi - yj) != 1) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

// Connected graphs only.
inline Recognized recognize_topology(const CommGraph& g) {
  const int n = g.size();
  const int m = static_cast<int>(g.edges().size());
  int max_deg = 0;
  bool all_two = n > 0;
  for (int v = 0; v < n; ++v) {
    max_deg = std::max(max_deg, g.degree(v));
    all_two = all_two && g.degree(v) == 2;
  }
  if (m == n - 1) {
    if (max_deg <= 2) return {"chain", {n}};
    return {"tree", {n}};
  }
  // rows + cols = 2n - m and rows * cols = n.
  const int s = 2 * n - m;
  for (int rows = 2; rows * 2 <= s; ++rows) {
    int cols = s - rows;
    if (rows * cols == n && (detail::is_grid(g, rows, cols) || detail::is_grid(g, cols, rows)))
      return {"grid", {rows, cols}};
  }
  if (all_two && m == n) return {"cycle", {}};
  return {};
}

struct ComponentReport {
  std::vector<int> nodes;  // original trajectory ids, ascending
  CommGraph graph;
  FeasibilityReport feasibility;
  std::optional<SimModel> model;
  std::optional<SlotModel> slots;
  std::optional<MeetingGraph> meeting;
  int ur = 0;
  int sn = 0;
  std::vector<int> sn_robots;  // original ids of one maximum starving set
  int ir = 0;
  Recognized topology;
  std::optional<ClosedForm> expected;
  std::vector<std::string> mismatches;

  int size() const { return static_cast<int>(nodes.size()); }
};

struct AnalyzeOptions {
  bool force = false;  // lift the exact-search slot guard
  int root = -1;       // propagation root, local to each component
  bool reverse = false;  // analyze under (f, -g)
};

struct Analysis {
  Scenario scenario;
  CommGraph graph;
  std::vector<ComponentReport> components;

  bool feasible() const {
    return std::all_of(components.begin(), components.end(),
                       [](const ComponentReport& c) { return c.feasibility.feasible(); });
  }
  int n() const { return graph.size(); }
  // Robots in different components never meet, so starving sets add up and
  // the weakest ring anywhere bounds coverage.
  int ur() const {
    int v = n();
    for (const auto& c : components) v = std::min(v, c.ur);
    return v;
  }
  int sn() const {
    int v = 0;
    for (const auto& c : components) v += c.sn;
    return v;
  }
  int ir() const { return isolation_resilience(n(), sn()); }
  std::vector<std::string> mismatches() const {
    std::vector<std::string> out;
    for (const auto& c : components) out.insert(out.end(), c.mismatches.begin(), c.mismatches.end());
    return out;
  }
};

inline SimModel build_model(const CommGraph& g, const Schedule& s) {
  SimModel m;
  m.graph = g;
  m.schedule = s;
  m.rings = extract_rings(g, s.g);
  return m;
}

inline void check_expected(ComponentReport& c) {
  const auto& cf = *c.expected;
  auto flag = [&](const std::string& what, int got, int lo, int hi) {
    if (got < lo || got > hi) {
      std::string want = lo == hi ? std::to_string(lo)
                                  : "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
      c.mismatches.push_back(cf.kind + " component: " + what + " = " + std::to_string(got) +
                             ", closed form says " + want);
    }
  };
  flag("ring count", c.model->rings.size(), cf.rings, cf.rings);
  flag("UR", c.ur, cf.ur, cf.ur);
  flag("SN", c.sn, cf.sn_min, cf.sn_max);
  flag("IR", c.ir, cf.ir_min, cf.ir_max);
}

inline ComponentReport analyze_component(const CommGraph& whole, std::vector<int> nodes,
                                         const AnalyzeOptions& opt) {
  ComponentReport c;
  c.nodes = std::move(nodes);
  c.graph = induced_subgraph(whole, c.nodes);
  if (opt.root >= c.graph.size()) throw ParameterError("root out of range for component");
  c.feasibility = solve_schedule(c.graph, opt.root);
  if (!c.feasibility.feasible()) return c;

  Schedule s = c.feasibility.schedule();
  if (opt.reverse) s = opposite_schedule(s);
  c.model = build_model(c.graph, s);
  c.slots = build_slot_model(c.model->rings, s, c.graph);
  c.meeting = build_meeting_graph(*c.slots);
  c.ur = uncovering_resilience(c.model->rings);
  StarvationResult sr = starvation_number(*c.meeting, opt.force);
  c.sn = sr.sn;
  for (int slot : sr.slots)
    c.sn_robots.push_back(c.nodes[static_cast<std::size_t>(c.slots->slots[static_cast<std::size_t>(slot)].robot)]);
  std::sort(c.sn_robots.begin(), c.sn_robots.end());
  c.ir = isolation_resilience(c.size(), c.sn);

  c.topology = recognize_topology(c.graph);
  if (c.topology.kind == "cycle") {
    // The cycle formulas are stated in terms of the two ring capacities.
    if (c.model->rings.size() == 2)
      c.topology.dims = {c.model->rings.ring(0).k, c.model->rings.ring(1).k};
    else
      c.mismatches.push_back("cycle component: expected 2 rings, found " +
                             std::to_string(c.model->rings.size()));
  }
  if (!c.topology.kind.empty() && !c.topology.dims.empty()) {
    c.expected = closed_form(c.topology.kind, c.topology.dims);
    check_expected(c);
  }
  return c;
}

inline Analysis analyze(const Scenario& s, const AnalyzeOptions& opt = {}) {
  Analysis a;
  a.scenario = s;
  a.graph = build_comm_graph(s);
  for (auto& comp : connected_components(a.graph))
    a.components.push_back(analyze_component(a.graph, std::move(comp), opt));
  return a;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json rings_json(const RingSet& rs, const std::vector<int>& ids) {
  nlohmann::json out = nlohmann::json::array();
  for (const Ring& r : rs.rings) {
    nlohmann::json arcs = nlohmann::json::array();
    for (const Arc& a : r.arcs)
      arcs.push_back({{"trajectory", ids[static_cast<std::size_t>(a.trajectory)]},
                      {"start", a.start},
                      {"end", a.end},
                      {"direction", a.direction},
                      {"length", a.length}});
    out.push_back({{"id", r.id}, {"k", r.k}, {"length", r.length}, {"length_over_pi", r.length / kPi},
                   {"arcs", arcs}});
  }
  return out;
}

inline nlohmann::json witness_json(const FeasibilityReport& f, const std::vector<int>& ids) {
  auto map_ids = [&](const std::vector<int>& local) {
    std::vector<int> out;
    for (int v : local) out.push_back(ids[static_cast<std::size_t>(v)]);
    return out;
  };
  if (const auto* odd = std::get_if<OddCycle>(&f.witness))
    return {{"kind", "odd_cycle"}, {"cycle", map_ids(odd->nodes)}};
  const auto& inc = std::get<InconsistentCycle>(f.witness);
  return {{"kind", "inconsistent_cycle"}, {"cycle", map_ids(inc.nodes)}, {"residual", inc.residual}};
}

inline nlohmann::json closed_form_json(const ClosedForm& cf) {
  nlohmann::json j = {{"kind", cf.kind}, {"rings", cf.rings}, {"ur", cf.ur}};
  if (cf.exact()) {
    j["sn"] = cf.sn_min;
    j["ir"] = cf.ir_min;
  } else {
    j["sn"] = {cf.sn_min, cf.sn_max};
    j["ir"] = {cf.ir_min, cf.ir_max};
  }
  return j;
}

inline nlohmann::json component_json(const ComponentReport& c) {
  nlohmann::json j;
  j["nodes"] = c.nodes;
  j["edges"] = c.graph.edges().size();
  j["feasible"] = c.feasibility.feasible();
  if (!c.feasibility.feasible()) {
    j["witness"] = witness_json(c.feasibility, c.nodes);
    return j;
  }
  const RingSet& rs = c.model->rings;
  std::vector<int> ks;
  std::vector<double> lengths;
  for (const Ring& r : rs.rings) {
    ks.push_back(r.k);
    lengths.push_back(r.length);
  }
  j["rings"] = {{"count", rs.size()}, {"k", ks}, {"lengths", lengths}};
  j["slots"] = c.slots->slot_count();
  j["meeting_edges"] = c.meeting->edge_count();
  j["ur"] = c.ur;
  j["sn"] = c.sn;
  j["sn_witness"] = c.sn_robots;
  j["ir"] = c.ir;
  j["topology"] = c.topology.kind.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.topology.kind);
  if (c.expected) j["expected"] = closed_form_json(*c.expected);
  j["mismatches"] = c.mismatches;
  return j;
}

inline nlohmann::json analysis_json(const Analysis& a) {
  nlohmann::json j;
  j["n"] = a.n();
  j["edges"] = a.graph.edges().size();
  j["components"] = nlohmann::json::array();
  for (const auto& c : a.components) j["components"].push_back(component_json(c));
  j["feasible"] = a.feasible();
  if (a.feasible()) {
    j["ur"] = a.ur();
    j["sn"] = a.sn();
    j["ir"] = a.ir();
    j["mismatches"] = a.mismatches();
  }
  return j;
}

// Schedule over all trajectories, stitched from the per-component schedules.
inline Schedule global_schedule(const Analysis& a) {
  Schedule s;
  s.f.assign(static_cast<std::size_t>(a.n()), 0.0);
  s.g.assign(static_cast<std::size_t>(a.n()), 1);
  for (const auto& c : a.components) {
    if (!c.model) throw ParameterError("scenario has no synchronization schedule");
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
      s.f[static_cast<std::size_t>(c.nodes[k])] = c.model->schedule.f[k];
      s.g[static_cast<std::size_t>(c.nodes[k])] = c.model->schedule.g[k];
    }
  }
  return s;
}

// Single model over every trajectory, for simulation across components.
inline SimModel global_model(const Analysis& a) {
  return build_model(a.graph, global_schedule(a));
}

}  // namespace ringres

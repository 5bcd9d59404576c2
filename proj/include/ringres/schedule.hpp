#pragma once

// Synchronization schedules: starting angle and direction per trajectory such
// that every pair of neighbors reaches its shared link at the same instant
// while flying in opposite directions.

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ringres/angles.hpp"
#include "ringres/error.hpp"
#include "ringres/scenario.hpp"

namespace ringres {

struct Schedule {
  std::vector<double> f;  // start angle in [0, 2pi)
  std::vector<int> g;     // +1 counterclockwise, -1 clockwise

  int size() const { return static_cast<int>(f.size()); }
  bool operator==(const Schedule&) const = default;
};

struct OddCycle {
  std::vector<int> nodes;
};

// A cycle whose accumulated phase constraint does not close.
struct InconsistentCycle {
  std::vector<int> nodes;
  double residual = 0.0;  // radians, in (-pi, pi]
};

struct FeasibilityReport {
  std::variant<Schedule, OddCycle, InconsistentCycle> witness;

  bool feasible() const { return std::holds_alternative<Schedule>(witness); }
  const Schedule& schedule() const { return std::get<Schedule>(witness); }
};

// Phase that C_j must start at for the pair (i, j) to meet, given f(C_i).
inline double required_phase(double beta_ij, double f_i) {
  return normalize_angle(2.0 * beta_ij - f_i + kPi);
}

// Signed amount by which f_j misses the pairing relation of edge e.
inline double edge_residual(const CommGraph& g, int e, const Schedule& s) {
  const Edge& ed = g.edge(e);
  double want = required_phase(ed.beta, s.f[static_cast<std::size_t>(ed.i)]);
  return wrap_signed(s.f[static_cast<std::size_t>(ed.j)] - want);
}

namespace detail {

// Tree path u -> lca -> v, using BFS parents.
inline std::vector<int> tree_cycle(const std::vector<int>& parent,
                                   const std::vector<int>& depth, int u,
                                   int v) {
  std::vector<int> left, right;
  while (depth[static_cast<std::size_t>(u)] > depth[static_cast<std::size_t>(v)]) {
    left.push_back(u);
    u = parent[static_cast<std::size_t>(u)];
  }
  while (depth[static_cast<std::size_t>(v)] > depth[static_cast<std::size_t>(u)]) {
    right.push_back(v);
    v = parent[static_cast<std::size_t>(v)];
  }
  while (u != v) {
    left.push_back(u);
    right.push_back(v);
    u = parent[static_cast<std::size_t>(u)];
    v = parent[static_cast<std::size_t>(v)];
  }
  left.push_back(u);
  left.insert(left.end(), right.rbegin(), right.rend());
  return left;
}

}  // namespace detail

// Two-colors the graph for directions and propagates start angles over a
// breadth-first spanning tree. `root` defaults to the lowest id; every other
// component is rooted at its own lowest id. The root starts at angle 0 and
// flies counterclockwise.
inline FeasibilityReport solve_schedule(const CommGraph& g, int root = -1) {
  const auto n = static_cast<std::size_t>(g.size());
  Schedule s;
  s.f.assign(n, 0.0);
  s.g.assign(n, 0);
  std::vector<int> parent(n, -1), depth(n, 0), tree_edge(n, -1);

  std::vector<int> roots;
  if (root >= 0) {
    if (root >= g.size()) throw ParameterError("root out of range");
    roots.push_back(root);
  }
  for (int v = 0; v < g.size(); ++v) roots.push_back(v);

  for (int r : roots) {
    if (s.g[static_cast<std::size_t>(r)] != 0) continue;
    s.g[static_cast<std::size_t>(r)] = 1;
    s.f[static_cast<std::size_t>(r)] = 0.0;
    std::queue<int> q;
    q.push(r);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : g.incident(v)) {
        int w = g.other(e, v);
        auto wi = static_cast<std::size_t>(w);
        if (s.g[wi] != 0) continue;
        s.g[wi] = -s.g[static_cast<std::size_t>(v)];
        s.f[wi] = required_phase(g.beta_from(e, v), s.f[static_cast<std::size_t>(v)]);
        parent[wi] = v;
        depth[wi] = depth[static_cast<std::size_t>(v)] + 1;
        tree_edge[wi] = e;
        q.push(w);
      }
    }
  }

  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const Edge& ed = g.edge(e);
    if (s.g[static_cast<std::size_t>(ed.i)] == s.g[static_cast<std::size_t>(ed.j)])
      return {OddCycle{detail::tree_cycle(parent, depth, ed.i, ed.j)}};
  }
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const Edge& ed = g.edge(e);
    if (tree_edge[static_cast<std::size_t>(ed.i)] == e ||
        tree_edge[static_cast<std::size_t>(ed.j)] == e)
      continue;
    double res = edge_residual(g, e, s);
    if (std::abs(res) > kResidualTol)
      return {InconsistentCycle{detail::tree_cycle(parent, depth, ed.i, ed.j), res}};
  }
  return {std::move(s)};
}

struct EdgeCheck {
  int edge = -1;
  bool phase_ok = true;
  bool direction_ok = true;
  double residual = 0.0;
};

struct VerifyReport {
  std::vector<EdgeCheck> failures;
  bool ok() const { return failures.empty(); }
};

inline VerifyReport verify_schedule(const CommGraph& g, const Schedule& s,
                                    double tol = kResidualTol) {
  if (s.size() != g.size() || s.g.size() != s.f.size())
    throw ValidationError("schedule size does not match graph");
  VerifyReport rep;
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const Edge& ed = g.edge(e);
    EdgeCheck c;
    c.edge = e;
    c.residual = edge_residual(g, e, s);
    c.phase_ok = std::abs(c.residual) <= tol;
    c.direction_ok = s.g[static_cast<std::size_t>(ed.i)] ==
                         -s.g[static_cast<std::size_t>(ed.j)] &&
                     std::abs(s.g[static_cast<std::size_t>(ed.i)]) == 1;
    if (!c.phase_ok || !c.direction_ok) rep.failures.push_back(c);
  }
  return rep;
}

// Angle of trajectory i's schedule point after t periods.
inline double position_at(const Schedule& s, int i, double t) {
  if (i < 0 || i >= s.size())
    throw ParameterError("unknown trajectory " + std::to_string(i));
  if (!(t >= 0.0)) throw ParameterError("time must be >= 0");
  auto k = static_cast<std::size_t>(i);
  // Only the fractional period matters; dropping the integer part keeps the
  // angle exact for long horizons.
  double frac = t - std::floor(t);
  return normalize_angle(s.f[k] + s.g[k] * kTwoPi * frac);
}

inline Schedule opposite_schedule(const Schedule& s) {
  Schedule out = s;
  for (int& d : out.g) d = -d;
  return out;
}

inline nlohmann::json to_json(const Schedule& s) {
  return {{"f", s.f}, {"g", s.g}};
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("f") || !j.contains("g"))
    throw ParseError("schedule needs 'f' and 'g'");
  Schedule s;
  try {
    s.f = j.at("f").get<std::vector<double>>();
    s.g = j.at("g").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad schedule: ") + e.what());
  }
  if (s.f.size() != s.g.size()) throw ValidationError("f and g differ in size");
  for (double& a : s.f) a = normalize_angle(a);
  return s;
}

}  // namespace ringres

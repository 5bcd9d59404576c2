#pragma once

// Starving-motion graph (SMG) and its decomposition into rings: the closed
// paths a robot follows when it never meets anybody and therefore switches
// trajectory at every link position it reaches.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ringres/angles.hpp"
#include "ringres/error.hpp"
#include "ringres/scenario.hpp"
#include "ringres/schedule.hpp"

namespace ringres {

enum class NodeClass { kV = 0, kW = 1 };

struct SmgNode {
  int trajectory = 0;
  int link = 0;  // index in the clockwise enumeration starting at angle 0
  NodeClass cls = NodeClass::kV;
  double angle = 0.0;
  int comm_edge = -1;
};

enum class SmgEdgeKind { kWithin, kCrossing };

struct SmgEdge {
  int from = 0;
  int to = 0;
  SmgEdgeKind kind = SmgEdgeKind::kWithin;
  int comm_edge = -1;  // set for crossings
};

// Node ids are 2 * (global link index) + class, so ascending id is the
// lexicographic order (trajectory, link, class).
struct Smg {
  int trajectories = 0;
  std::vector<int> direction;    // g per trajectory
  std::vector<int> link_offset;  // size trajectories + 1
  std::vector<SmgNode> nodes;
  std::vector<SmgEdge> edges;
  std::vector<int> out_edge;                 // per node, index into edges
  std::vector<std::array<int, 2>> edge_links;  // per comm edge: link on i, on j
  std::vector<std::array<int, 2>> edge_ends;   // per comm edge: i, j

  int link_count(int t) const {
    return link_offset[static_cast<std::size_t>(t) + 1] -
           link_offset[static_cast<std::size_t>(t)];
  }
  int node_id(int t, int link, NodeClass c) const {
    return 2 * (link_offset[static_cast<std::size_t>(t)] + link) +
           static_cast<int>(c);
  }
  // A robot leaves a link position through this node...
  NodeClass departure_class(int t) const {
    return direction[static_cast<std::size_t>(t)] > 0 ? NodeClass::kW
                                                       : NodeClass::kV;
  }
  // ...and reaches one through this one.
  NodeClass arrival_class(int t) const {
    return direction[static_cast<std::size_t>(t)] > 0 ? NodeClass::kV
                                                      : NodeClass::kW;
  }
  int successor(int node) const {
    return edges[static_cast<std::size_t>(out_edge[static_cast<std::size_t>(node)])].to;
  }
};

// Builds the SMG for direction assignment g (+1/-1 per trajectory).
inline Smg build_smg(const CommGraph& graph, const std::vector<int>& g) {
  const int n = graph.size();
  if (static_cast<int>(g.size()) != n)
    throw ValidationError("direction assignment size does not match graph");
  for (const Edge& e : graph.edges())
    if (std::abs(g[static_cast<std::size_t>(e.i)]) != 1 ||
        g[static_cast<std::size_t>(e.i)] != -g[static_cast<std::size_t>(e.j)])
      throw ValidationError("directions must alternate across edge " +
                            std::to_string(e.i) + "-" + std::to_string(e.j));

  Smg smg;
  smg.trajectories = n;
  smg.direction = g;
  smg.link_offset.assign(static_cast<std::size_t>(n) + 1, 0);
  smg.edge_links.assign(graph.edges().size(), {-1, -1});
  for (const Edge& e : graph.edges()) smg.edge_ends.push_back({e.i, e.j});

  // Step 1: per trajectory, link points in clockwise order from angle 0.
  std::vector<std::vector<int>> order(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    auto& links = order[static_cast<std::size_t>(t)];
    links = graph.incident(t);
    auto cw_key = [&](int e) {
      double a = graph.link_angle(e, t);
      return a == 0.0 ? 0.0 : kTwoPi - a;
    };
    std::sort(links.begin(), links.end(),
              [&](int a, int b) { return cw_key(a) < cw_key(b); });
    for (std::size_t k = 1; k < links.size(); ++k)
      if (angles_equal(graph.link_angle(links[k], t),
                       graph.link_angle(links[k - 1], t)) ||
          angles_equal(graph.link_angle(links[k], t),
                       graph.link_angle(links.front(), t)))
        throw ValidationError("two link positions coincide on trajectory " +
                              std::to_string(t));
    smg.link_offset[static_cast<std::size_t>(t) + 1] =
        smg.link_offset[static_cast<std::size_t>(t)] + static_cast<int>(links.size());
  }

  // Step 2: two nodes per link position.
  smg.nodes.resize(2 * static_cast<std::size_t>(smg.link_offset.back()));
  for (int t = 0; t < n; ++t) {
    const auto& links = order[static_cast<std::size_t>(t)];
    for (int k = 0; k < static_cast<int>(links.size()); ++k) {
      int e = links[static_cast<std::size_t>(k)];
      for (NodeClass c : {NodeClass::kV, NodeClass::kW})
        smg.nodes[static_cast<std::size_t>(smg.node_id(t, k, c))] = {
            t, k, c, graph.link_angle(e, t), e};
      smg.edge_links[static_cast<std::size_t>(e)][graph.edge(e).i == t ? 0 : 1] = k;
    }
  }

  // Step 3: arcs along each trajectory in its direction of motion.
  for (int t = 0; t < n; ++t) {
    const int m = smg.link_count(t);
    if (m == 0) continue;
    if (g[static_cast<std::size_t>(t)] > 0) {
      for (int k = 0; k < m; ++k)
        smg.edges.push_back({smg.node_id(t, k, NodeClass::kW),
                             smg.node_id(t, (k + m - 1) % m, NodeClass::kV),
                             SmgEdgeKind::kWithin, -1});
    } else {
      for (int k = 0; k < m; ++k)
        smg.edges.push_back({smg.node_id(t, k, NodeClass::kV),
                             smg.node_id(t, (k + 1) % m, NodeClass::kW),
                             SmgEdgeKind::kWithin, -1});
    }
  }

  // Step 4: crossings between neighboring trajectories.
  for (int e = 0; e < static_cast<int>(graph.edges().size()); ++e) {
    const Edge& ed = graph.edge(e);
    int k = smg.edge_links[static_cast<std::size_t>(e)][0];
    int l = smg.edge_links[static_cast<std::size_t>(e)][1];
    int vi = smg.node_id(ed.i, k, NodeClass::kV), wi = smg.node_id(ed.i, k, NodeClass::kW);
    int vj = smg.node_id(ed.j, l, NodeClass::kV), wj = smg.node_id(ed.j, l, NodeClass::kW);
    if (g[static_cast<std::size_t>(ed.i)] > 0) {
      smg.edges.push_back({vi, vj, SmgEdgeKind::kCrossing, e});
      smg.edges.push_back({wj, wi, SmgEdgeKind::kCrossing, e});
    } else {
      smg.edges.push_back({vj, vi, SmgEdgeKind::kCrossing, e});
      smg.edges.push_back({wi, wj, SmgEdgeKind::kCrossing, e});
    }
  }

  smg.out_edge.assign(smg.nodes.size(), -1);
  for (int k = 0; k < static_cast<int>(smg.edges.size()); ++k)
    smg.out_edge[static_cast<std::size_t>(smg.edges[static_cast<std::size_t>(k)].from)] = k;
  return smg;
}

// Every node of a well-formed SMG has in-degree and out-degree one.
inline bool has_unit_degrees(const Smg& smg) {
  std::vector<int> in(smg.nodes.size(), 0), out(smg.nodes.size(), 0);
  for (const SmgEdge& e : smg.edges) {
    ++out[static_cast<std::size_t>(e.from)];
    ++in[static_cast<std::size_t>(e.to)];
  }
  for (std::size_t k = 0; k < smg.nodes.size(); ++k)
    if (in[k] != 1 || out[k] != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rings

struct Arc {
  int trajectory = 0;
  double start = 0.0;  // link angle where the arc begins
  double end = 0.0;
  int direction = 1;
  double length = 0.0;
  double offset = 0.0;  // arclength of `start` measured from the ring origin
  int depart_node = -1;  // -1 for an isolated trajectory
  int arrive_node = -1;
};

struct Ring {
  int id = 0;
  std::vector<Arc> arcs;  // cyclic, in direction of motion
  double length = 0.0;
  int k = 0;  // slot capacity, length / 2pi
};

struct RingPoint {
  int ring = -1;
  double arclength = 0.0;
};

struct RingSet {
  std::vector<Ring> rings;
  std::vector<int> direction;  // g the rings were built for
  // Per trajectory: (ring, arc index) pairs, one per arc of that trajectory.
  std::vector<std::vector<std::pair<int, int>>> arcs_by_trajectory;
  // Per SMG node: owning ring and arclength from the ring origin.
  std::vector<int> node_ring;
  std::vector<double> node_arclength;
  // Per communication edge: arrival node at phi_ij on C_i, at phi_ji on C_j.
  std::vector<std::array<int, 2>> edge_arrivals;
  int total_k = 0;

  int size() const { return static_cast<int>(rings.size()); }
  const Ring& ring(int r) const { return rings[static_cast<std::size_t>(r)]; }
  const Arc& arc(std::pair<int, int> ref) const {
    return rings[static_cast<std::size_t>(ref.first)]
        .arcs[static_cast<std::size_t>(ref.second)];
  }
};

namespace detail {

// Rotates a cyclic arc list so it starts at the canonical origin (the
// smallest SMG node on the ring) and fills offsets, length and capacity.
inline Ring finalize_ring(int id, std::vector<Arc> arcs) {
  std::size_t first = 0;
  int best = -1;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const Arc& arc = arcs[a];
    if (arc.depart_node >= 0 && (best < 0 || arc.depart_node < best)) {
      best = arc.depart_node;
      first = a;
    }
    if (arc.arrive_node >= 0 && (best < 0 || arc.arrive_node < best)) {
      best = arc.arrive_node;
      first = (a + 1) % arcs.size();
    }
  }
  std::rotate(arcs.begin(), arcs.begin() + static_cast<std::ptrdiff_t>(first),
              arcs.end());
  Ring ring;
  ring.id = id;
  double acc = 0.0;
  for (Arc& arc : arcs) {
    arc.offset = acc;
    acc += arc.length;
  }
  ring.arcs = std::move(arcs);
  ring.length = acc;
  double k = acc / kTwoPi;
  ring.k = static_cast<int>(std::lround(k));
  if (std::abs(k - ring.k) > kResidualTol || ring.k < 1)
    throw ValidationError("ring length " + std::to_string(acc / kPi) +
                          "pi is not a positive multiple of 2pi; the graph is "
                          "not synchronizable");
  return ring;
}

inline void index_rings(RingSet& rs, int trajectories, std::size_t node_count) {
  rs.arcs_by_trajectory.assign(static_cast<std::size_t>(trajectories), {});
  rs.node_ring.assign(node_count, -1);
  rs.node_arclength.assign(node_count, 0.0);
  rs.total_k = 0;
  for (const Ring& ring : rs.rings) {
    rs.total_k += ring.k;
    for (int a = 0; a < static_cast<int>(ring.arcs.size()); ++a) {
      const Arc& arc = ring.arcs[static_cast<std::size_t>(a)];
      rs.arcs_by_trajectory[static_cast<std::size_t>(arc.trajectory)].emplace_back(ring.id, a);
      if (arc.depart_node >= 0) {
        rs.node_ring[static_cast<std::size_t>(arc.depart_node)] = ring.id;
        rs.node_arclength[static_cast<std::size_t>(arc.depart_node)] = arc.offset;
        rs.node_ring[static_cast<std::size_t>(arc.arrive_node)] = ring.id;
        rs.node_arclength[static_cast<std::size_t>(arc.arrive_node)] =
            std::fmod(arc.offset + arc.length, ring.length);
      }
    }
  }
}

inline Arc isolated_arc(int t, int dir) {
  Arc a;
  a.trajectory = t;
  a.direction = dir;
  a.length = kTwoPi;
  return a;
}

}  // namespace detail

// Follows successor links to enumerate the directed cycles of the SMG; each
// becomes a ring. Trajectories without neighbors become single-arc rings.
inline RingSet extract_rings(const Smg& smg) {
  if (!has_unit_degrees(smg))
    throw InternalError("SMG violates the unit in/out degree invariant");
  RingSet rs;
  rs.direction = smg.direction;
  std::vector<bool> seen(smg.nodes.size(), false);
  for (int t = 0; t < smg.trajectories; ++t) {
    int dir = smg.direction[static_cast<std::size_t>(t)];
    if (smg.link_count(t) == 0) {
      rs.rings.push_back(detail::finalize_ring(
          static_cast<int>(rs.rings.size()), {detail::isolated_arc(t, dir == 0 ? 1 : dir)}));
      continue;
    }
    for (int node = smg.node_id(t, 0, NodeClass::kV);
         node < smg.node_id(t + 1, 0, NodeClass::kV); ++node) {
      if (seen[static_cast<std::size_t>(node)]) continue;
      std::vector<Arc> arcs;
      int cur = node;
      do {
        if (seen[static_cast<std::size_t>(cur)])
          throw InternalError("SMG walk revisited a node off its cycle");
        seen[static_cast<std::size_t>(cur)] = true;
        const SmgEdge& e =
            smg.edges[static_cast<std::size_t>(smg.out_edge[static_cast<std::size_t>(cur)])];
        if (e.kind == SmgEdgeKind::kWithin) {
          const SmgNode& from = smg.nodes[static_cast<std::size_t>(e.from)];
          const SmgNode& to = smg.nodes[static_cast<std::size_t>(e.to)];
          Arc arc;
          arc.trajectory = from.trajectory;
          arc.start = from.angle;
          arc.end = to.angle;
          arc.direction = smg.direction[static_cast<std::size_t>(from.trajectory)];
          arc.length = directed_sweep(from.angle, to.angle, arc.direction);
          if (arc.length == 0.0) arc.length = kTwoPi;  // single link position
          arc.depart_node = e.from;
          arc.arrive_node = e.to;
          arcs.push_back(arc);
        }
        cur = e.to;
      } while (cur != node);
      rs.rings.push_back(
          detail::finalize_ring(static_cast<int>(rs.rings.size()), std::move(arcs)));
    }
  }
  rs.edge_arrivals.resize(smg.edge_links.size());
  for (std::size_t e = 0; e < smg.edge_links.size(); ++e) {
    auto [ti, tj] = smg.edge_ends[e];
    rs.edge_arrivals[e] = {
        smg.node_id(ti, smg.edge_links[e][0], smg.arrival_class(ti)),
        smg.node_id(tj, smg.edge_links[e][1], smg.arrival_class(tj))};
  }
  detail::index_rings(rs, smg.trajectories, smg.nodes.size());
  return rs;
}

inline RingSet extract_rings(const CommGraph& graph, const std::vector<int>& g) {
  return extract_rings(build_smg(graph, g));
}

// Ring and ring arclength of the point at `angle` on trajectory t. A point at
// a link position belongs to the arc that departs from it.
inline RingPoint ring_of_point(const RingSet& rs, int t, double angle) {
  if (t < 0 || t >= static_cast<int>(rs.arcs_by_trajectory.size()))
    throw ParameterError("unknown trajectory " + std::to_string(t));
  angle = normalize_angle(angle);
  for (auto ref : rs.arcs_by_trajectory[static_cast<std::size_t>(t)]) {
    const Arc& arc = rs.arc(ref);
    double off = directed_sweep(arc.start, angle, arc.direction);
    if (off <= kAngleTol) return {ref.first, arc.offset};
    if (off < arc.length - kAngleTol) return {ref.first, arc.offset + off};
  }
  throw InternalError("point not covered by any ring arc");
}

// Ring point held by the robot on trajectory traj just before the link
// arrivals at time t are resolved. A robot sitting on a link still belongs to
// the arc it came in on; failures at t act on this state.
inline RingPoint held_ring_point(const RingSet& rs, const Schedule& s, int traj, double t) {
  constexpr double kBack = 1e-7;
  const int dir = s.g[static_cast<std::size_t>(traj)];
  RingPoint p = ring_of_point(rs, traj, position_at(s, traj, t) - dir * kBack);
  const double len = rs.ring(p.ring).length;
  p.arclength += kBack;
  if (p.arclength >= len - kAngleTol) p.arclength -= len;
  if (p.arclength < 0.0) p.arclength = 0.0;
  return p;
}

// Ring set for the opposite directions: same arcs traversed backwards.
inline RingSet reverse_rings(const RingSet& rs) {
  RingSet out;
  out.direction = rs.direction;
  for (int& d : out.direction) d = -d;
  for (const Ring& ring : rs.rings) {
    std::vector<Arc> arcs;
    for (auto it = ring.arcs.rbegin(); it != ring.arcs.rend(); ++it) {
      Arc a = *it;
      std::swap(a.start, a.end);
      std::swap(a.depart_node, a.arrive_node);
      a.direction = -a.direction;
      arcs.push_back(a);
    }
    out.rings.push_back(detail::finalize_ring(ring.id, std::move(arcs)));
  }
  // Under -g the arrival node at a link is the other class of the same link.
  out.edge_arrivals = rs.edge_arrivals;
  for (auto& pair : out.edge_arrivals)
    for (int& node : pair) node ^= 1;
  detail::index_rings(out, static_cast<int>(rs.arcs_by_trajectory.size()),
                      rs.node_ring.size());
  return out;
}

// Exact structural equality up to the angular tolerance.
inline bool same_rings(const RingSet& a, const RingSet& b, double tol = kResidualTol) {
  if (a.size() != b.size()) return false;
  for (int r = 0; r < a.size(); ++r) {
    const Ring &x = a.ring(r), &y = b.ring(r);
    if (x.k != y.k || x.arcs.size() != y.arcs.size()) return false;
    for (std::size_t k = 0; k < x.arcs.size(); ++k) {
      const Arc &p = x.arcs[k], &q = y.arcs[k];
      if (p.trajectory != q.trajectory || p.direction != q.direction ||
          p.depart_node != q.depart_node || p.arrive_node != q.arrive_node ||
          !angles_equal(p.start, q.start, tol) || !angles_equal(p.end, q.end, tol) ||
          std::abs(p.length - q.length) > tol || std::abs(p.offset - q.offset) > tol)
        return false;
    }
  }
  return true;
}

}  // namespace ringres

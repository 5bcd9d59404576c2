#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "support.hpp"

using namespace ringres;

namespace {

struct Built {
  CommGraph graph;
  Schedule schedule;
  Smg smg;
  RingSet rings;
};

Built build(const Scenario& s) {
  Built b;
  b.graph = build_comm_graph(s);
  b.schedule = solve_schedule(b.graph).schedule();
  b.smg = build_smg(b.graph, b.schedule.g);
  b.rings = extract_rings(b.smg);
  return b;
}

using ArcKey = std::tuple<int, long long, long long, int>;

// Ring set as a multiset of arc sets, for comparisons up to relabeling.
std::multiset<std::vector<ArcKey>> canonical(const RingSet& rs) {
  std::multiset<std::vector<ArcKey>> out;
  for (const Ring& r : rs.rings) {
    std::vector<ArcKey> keys;
    for (const Arc& a : r.arcs)
      keys.emplace_back(a.trajectory, std::llround(normalize_angle(a.start) * 1e6),
                        std::llround(normalize_angle(a.end) * 1e6), a.direction);
    std::sort(keys.begin(), keys.end());
    out.insert(keys);
  }
  return out;
}

void expect_ring_invariants(const Built& b) {
  const int n = b.graph.size();
  double total = 0.0;
  int total_k = 0;
  for (const Ring& r : b.rings.rings) {
    double sum = 0.0;
    for (const Arc& a : r.arcs) sum += a.length;
    EXPECT_NEAR(sum, r.length, 1e-9);
    EXPECT_NEAR(r.length / kTwoPi, r.k, 1e-6);
    EXPECT_GE(r.k, 1);
    total += r.length;
    total_k += r.k;
    // Consecutive arcs meet at link positions of neighboring trajectories.
    for (std::size_t k = 0; k < r.arcs.size() && r.arcs.size() > 1; ++k) {
      const Arc& cur = r.arcs[k];
      const Arc& next = r.arcs[(k + 1) % r.arcs.size()];
      int e = b.graph.find_edge(cur.trajectory, next.trajectory);
      ASSERT_GE(e, 0);
      EXPECT_TRUE(angles_equal(cur.end, b.graph.link_angle(e, cur.trajectory), 1e-9));
      EXPECT_TRUE(angles_equal(next.start, b.graph.link_angle(e, next.trajectory), 1e-9));
    }
  }
  EXPECT_NEAR(total, kTwoPi * n, 1e-6);
  EXPECT_EQ(total_k, n);
  EXPECT_EQ(b.rings.total_k, n);
  // Arcs of each trajectory partition the full circle exactly once.
  for (int t = 0; t < n; ++t) {
    double cover = 0.0;
    for (auto ref : b.rings.arcs_by_trajectory[static_cast<std::size_t>(t)]) cover += b.rings.arc(ref).length;
    EXPECT_NEAR(cover, kTwoPi, 1e-9) << "trajectory " << t;
  }
}

}  // namespace

TEST(Smg, TwoChain) {
  Built b = build(support::chain(2));
  EXPECT_EQ(b.smg.nodes.size(), 4u);
  EXPECT_EQ(b.smg.edges.size(), 4u);
  EXPECT_TRUE(has_unit_degrees(b.smg));
}

TEST(Smg, SquareHasSixteenNodes) {
  Built b = build(support::square());
  EXPECT_EQ(b.smg.nodes.size(), 16u);
  EXPECT_TRUE(has_unit_degrees(b.smg));
}

TEST(Smg, NodeCountIsFourTimesEdges) {
  for (const Scenario& s : {support::grid(3, 4), support::star(6), support::tree(12, 4), support::cycle(10)}) {
    Built b = build(s);
    EXPECT_EQ(b.smg.nodes.size(), 4 * b.graph.edges().size());
    EXPECT_TRUE(has_unit_degrees(b.smg));
    std::size_t crossings = 0;
    for (const auto& e : b.smg.edges) crossings += e.kind == SmgEdgeKind::kCrossing;
    EXPECT_EQ(crossings, 2 * b.graph.edges().size());
  }
}

TEST(Smg, SingleCircle) {
  Built b = build(support::chain(1));
  EXPECT_TRUE(b.smg.nodes.empty());
  ASSERT_EQ(b.rings.size(), 1);
  EXPECT_NEAR(b.rings.ring(0).length, kTwoPi, 1e-12);
  EXPECT_EQ(b.rings.ring(0).k, 1);
}

TEST(Smg, Errors) {
  CommGraph g = build_comm_graph(support::chain(2));
  EXPECT_THROW(build_smg(g, {1, 1}), ValidationError);
  EXPECT_THROW(build_smg(g, {1}), ValidationError);
  // Two neighbors at the same angle on trajectory 0.
  CommGraph dup = build_comm_graph(support::abstract(3, {{0, 1, 0.5}, {0, 2, 0.5}}));
  EXPECT_THROW(build_smg(dup, {1, -1, -1}), ValidationError);
}

TEST(ExtractRings, TreesHaveOneRing) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Built b = build(support::tree(9, seed));
    ASSERT_EQ(b.rings.size(), 1);
    EXPECT_NEAR(b.rings.ring(0).length, 2 * 9 * kPi, 1e-6);
    expect_ring_invariants(b);
  }
  Built st = build(support::star(6));
  ASSERT_EQ(st.rings.size(), 1);
  EXPECT_EQ(st.rings.ring(0).k, 6);
}

TEST(ExtractRings, SquareGrids) {
  for (int n = 2; n <= 6; ++n) {
    Built b = build(support::grid(n, n));
    ASSERT_EQ(b.rings.size(), n);
    for (const Ring& r : b.rings.rings) EXPECT_NEAR(r.length, 2 * n * kPi, 1e-6);
    expect_ring_invariants(b);
  }
}

TEST(ExtractRings, GridGcd) {
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= 6; ++m) {
      Built b = build(support::grid(n, m));
      int g = std::gcd(n, m);
      ASSERT_EQ(b.rings.size(), g) << n << "x" << m;
      for (const Ring& r : b.rings.rings) EXPECT_EQ(r.k, n * m / g);
    }
}

TEST(ExtractRings, EvenCyclesHaveTwoRings) {
  for (int n : {4, 6, 8, 10, 12, 14}) {
    Built b = build(support::cycle(n));
    ASSERT_EQ(b.rings.size(), 2) << n;
    EXPECT_EQ(b.rings.ring(0).k + b.rings.ring(1).k, n);
    for (const auto& arr : b.rings.edge_arrivals)
      EXPECT_NE(b.rings.node_ring[static_cast<std::size_t>(arr[0])],
                b.rings.node_ring[static_cast<std::size_t>(arr[1])]);
    expect_ring_invariants(b);
  }
}

TEST(ExtractRings, CanonicalOrigin) {
  Built b = build(support::grid(3, 3));
  std::vector<int> origins;
  for (const Ring& r : b.rings.rings) {
    int lowest = r.arcs.front().depart_node;
    for (const Arc& a : r.arcs) lowest = std::min({lowest, a.depart_node, a.arrive_node});
    // The ring starts at its smallest node: either leaving it or just past it.
    EXPECT_TRUE(r.arcs.front().depart_node == lowest || r.arcs.back().arrive_node == lowest);
    EXPECT_NEAR(r.arcs.front().offset, 0.0, 1e-12);
    origins.push_back(lowest);
  }
  // Discovery order means origins ascend with ring id.
  EXPECT_TRUE(std::is_sorted(origins.begin(), origins.end()));
}

TEST(ExtractRings, CorruptSmgRejected) {
  Built b = build(support::chain(3));
  Smg bad = b.smg;
  bad.edges[0].to = bad.edges[1].to;
  EXPECT_THROW(extract_rings(bad), InternalError);
}

TEST(RingOfPoint, SingleCircle) {
  Built b = build(support::chain(1));
  RingPoint p = ring_of_point(b.rings, 0, 1.0);
  EXPECT_EQ(p.ring, 0);
  EXPECT_GE(p.arclength, 0.0);
  EXPECT_LT(p.arclength, kTwoPi);
}

TEST(RingOfPoint, BoundaryBelongsToDepartingArc) {
  Built b = build(support::chain(2));
  const Edge& e = b.graph.edge(0);
  const int dir = b.schedule.g[0];
  RingPoint at = ring_of_point(b.rings, 0, e.phi_ij);
  RingPoint past = ring_of_point(b.rings, 0, e.phi_ij + dir * 1e-4);
  EXPECT_EQ(at.ring, past.ring);
  EXPECT_NEAR(past.arclength - at.arclength, 1e-4, 1e-9);
  // The departing arc starts at the link.
  bool found = false;
  for (auto ref : b.rings.arcs_by_trajectory[0]) {
    const Arc& a = b.rings.arc(ref);
    if (angles_equal(a.start, e.phi_ij, 1e-9)) {
      found = true;
      EXPECT_EQ(ref.first, at.ring);
      EXPECT_NEAR(a.offset, at.arclength, 1e-9);
    }
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(ring_of_point(b.rings, 5, 0.0), ParameterError);
}

TEST(RingOfPoint, AgreesWithArcTable) {
  Built b = build(support::grid(2, 3));
  for (int t = 0; t < b.graph.size(); ++t)
    for (int k = 0; k < 64; ++k) {
      double angle = kTwoPi * (k + 0.5) / 64;
      RingPoint p = ring_of_point(b.rings, t, angle);
      int hits = 0;
      for (auto ref : b.rings.arcs_by_trajectory[static_cast<std::size_t>(t)]) {
        const Arc& a = b.rings.arc(ref);
        double off = directed_sweep(a.start, angle, a.direction);
        if (off < a.length) {
          ++hits;
          EXPECT_EQ(ref.first, p.ring);
          EXPECT_NEAR(a.offset + off, p.arclength, 1e-9);
        }
      }
      EXPECT_EQ(hits, 1);
    }
}

TEST(ReverseRings, TreeRingReversed) {
  Built b = build(support::tree(6, 2));
  RingSet rev = reverse_rings(b.rings);
  ASSERT_EQ(rev.size(), 1);
  EXPECT_NEAR(rev.ring(0).length, b.rings.ring(0).length, 1e-9);
  EXPECT_EQ(rev.direction, opposite_schedule(b.schedule).g);
}

TEST(ReverseRings, Involution) {
  for (const Scenario& s : {support::grid(2, 2), support::grid(3, 3), support::tree(8, 5), support::cycle(8)}) {
    Built b = build(s);
    EXPECT_TRUE(same_rings(reverse_rings(reverse_rings(b.rings)), b.rings));
  }
}

TEST(ReverseRings, MatchesOppositeDirections) {
  for (const Scenario& s : {support::grid(2, 2), support::grid(2, 3), support::grid(4, 6), support::cycle(10),
                            support::star(5), support::tree(11, 7)}) {
    Built b = build(s);
    std::vector<int> neg = opposite_schedule(b.schedule).g;
    RingSet direct = extract_rings(b.graph, neg);
    RingSet rev = reverse_rings(b.rings);
    EXPECT_EQ(canonical(direct), canonical(rev));
    // Crossing arrival nodes must agree too.
    for (std::size_t e = 0; e < direct.edge_arrivals.size(); ++e)
      EXPECT_EQ(direct.edge_arrivals[e], rev.edge_arrivals[e]);
    std::vector<int> ka, kb;
    for (const Ring& r : direct.rings) ka.push_back(r.k);
    for (const Ring& r : rev.rings) kb.push_back(r.k);
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    EXPECT_EQ(ka, kb);
  }
}

TEST(ReverseRings, GridTwoByTwo) {
  Built b = build(support::grid(2, 2));
  RingSet rev = reverse_rings(b.rings);
  ASSERT_EQ(rev.size(), 2);
  for (const Ring& r : rev.rings) EXPECT_EQ(r.k, 2);
}

TEST(ExtractRings, Invariants) {
  for (const Scenario& s : {support::grid(1, 5), support::grid(5, 3), support::star(6), support::cycle(12),
                            support::tree(12, 11)})
    expect_ring_invariants(build(s));
}

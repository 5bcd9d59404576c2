#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "support.hpp"

using namespace ringres;

namespace {

std::vector<Scenario> corpus() {
  std::vector<Scenario> out;
  for (int n = 1; n <= 6; ++n) out.push_back(support::chain(n));
  for (auto [r, c] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {2, 4}, {3, 4}, {4, 4}, {4, 6}})
    out.push_back(support::grid(r, c));
  for (int n : {4, 6, 8, 10, 12}) out.push_back(support::cycle(n));
  for (std::uint64_t seed = 1; seed <= 6; ++seed) out.push_back(support::tree(8, seed));
  out.push_back(support::star(6));
  return out;
}

std::multiset<int> ring_sizes(const RingSet& rs) {
  std::multiset<int> k;
  for (const Ring& r : rs.rings) k.insert(r.k);
  return k;
}

}  // namespace

TEST(Properties, RingLengthsAddUp) {
  for (const Scenario& s : corpus()) {
    SimModel m = support::model_of(s);
    double total = 0.0;
    int k = 0;
    for (const Ring& r : m.rings.rings) {
      total += r.length;
      k += r.k;
      EXPECT_NEAR(r.length, kTwoPi * r.k, 1e-9);
    }
    EXPECT_NEAR(total, kTwoPi * s.size(), 1e-9);
    EXPECT_EQ(k, s.size());
  }
}

TEST(Properties, RootChoiceKeepsStructure) {
  for (const Scenario& s : corpus()) {
    CommGraph g = build_comm_graph(s);
    SimModel base = support::model_of(s);
    MeetingGraph mg0 = build_meeting_graph(build_slot_model(base.rings, base.schedule, base.graph));
    int sn0 = starvation_number(mg0).sn;
    for (int root = 0; root < s.size(); ++root) {
      FeasibilityReport f = solve_schedule(g, root);
      ASSERT_TRUE(f.feasible());
      EXPECT_TRUE(verify_schedule(g, f.schedule()).failures.empty());
      SimModel m = build_model(g, f.schedule());
      EXPECT_EQ(ring_sizes(m.rings), ring_sizes(base.rings));
      MeetingGraph mg = build_meeting_graph(build_slot_model(m.rings, m.schedule, m.graph));
      EXPECT_EQ(starvation_number(mg).sn, sn0);
    }
  }
}

TEST(Properties, OppositeDirectionKeepsStructure) {
  for (const Scenario& s : corpus()) {
    SimModel m = support::model_of(s);
    Schedule opp = opposite_schedule(m.schedule);
    EXPECT_TRUE(verify_schedule(m.graph, opp).failures.empty());
    SimModel r = build_model(m.graph, opp);
    EXPECT_EQ(ring_sizes(r.rings), ring_sizes(m.rings));
    int a = starvation_number(build_meeting_graph(build_slot_model(m.rings, m.schedule, m.graph))).sn;
    int b = starvation_number(build_meeting_graph(build_slot_model(r.rings, r.schedule, r.graph))).sn;
    EXPECT_EQ(a, b);
  }
}

TEST(Properties, RotationKeepsStructure) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (const Scenario& s : corpus()) {
    SimModel m = support::model_of(s);
    Analysis base = analyze(s);
    for (int rep = 0; rep < 3; ++rep) {
      Scenario rot = rotated(s, ang(rng));
      SimModel mr = support::model_of(rot);
      EXPECT_EQ(ring_sizes(mr.rings), ring_sizes(m.rings));
      Analysis ar = analyze(rot);
      EXPECT_EQ(ar.sn(), base.sn());
      EXPECT_EQ(ar.ur(), base.ur());
    }
  }
}

TEST(Properties, SnPlusIrIsNMinusOne) {
  for (const Scenario& s : corpus()) {
    Analysis a = analyze(s);
    EXPECT_EQ(a.sn() + a.ir(), a.n() - 1);
    EXPECT_TRUE(a.mismatches().empty()) << a.mismatches().front();
  }
}

// With nobody failed, the simulated meetings are exactly the meeting graph.
TEST(Properties, SimulatedMeetingsMatchMeetingGraph) {
  for (const Scenario& s : corpus()) {
    SimModel m = support::model_of(s);
    SlotModel sm = build_slot_model(m.rings, m.schedule, m.graph);
    MeetingGraph mg = build_meeting_graph(sm);
    SimTrace tr = simulate(m, FailurePlan{});
    std::set<std::pair<int, int>> seen;
    for (const SimEvent& e : tr.events) {
      if (e.kind != EventKind::kMeeting) continue;
      // Robots trade slots when they meet, so look up what each holds now.
      int a = slot_at(sm, m.rings, m.schedule, e.trajectory, e.time);
      int b = slot_at(sm, m.rings, m.schedule, m.graph.other(e.edge, e.trajectory), e.time);
      seen.insert({std::min(a, b), std::max(a, b)});
    }
    std::set<std::pair<int, int>> expected;
    for (int v = 0; v < mg.size(); ++v)
      for (int w : mg.adj[static_cast<std::size_t>(v)])
        if (v < w) expected.insert({v, w});
    EXPECT_EQ(seen, expected);
    EXPECT_EQ(tr.starvation_state(), s.size() == 1);
  }
}

TEST(Properties, MisMatchesSubsetEnumeration) {
  for (const Scenario& s : corpus()) {
    if (s.size() > 20) continue;
    SimModel m = support::model_of(s);
    MeetingGraph mg = build_meeting_graph(build_slot_model(m.rings, m.schedule, m.graph));
    EXPECT_EQ(starvation_number(mg).sn, support::exhaustive_mis(mg));
  }
}

// Failing everyone outside a maximum starving set leaves robots that never
// meet; failing everyone outside a larger set does not.
TEST(Properties, StarvingSetStarvesInSimulation) {
  for (const Scenario& s : corpus()) {
    Analysis a = analyze(s);
    SimModel m = global_model(a);
    std::vector<bool> keep(static_cast<std::size_t>(s.size()), false);
    std::vector<int> witness;
    for (const auto& c : a.components) witness.insert(witness.end(), c.sn_robots.begin(), c.sn_robots.end());
    for (int r : witness) keep[static_cast<std::size_t>(r)] = true;
    std::vector<int> failed;
    for (int r = 0; r < s.size(); ++r)
      if (!keep[static_cast<std::size_t>(r)]) failed.push_back(r);
    SimTrace tr = simulate(m, FailurePlan::at_zero(failed));
    EXPECT_TRUE(tr.starvation_state());
  }
}

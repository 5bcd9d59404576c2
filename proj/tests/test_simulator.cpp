#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace ringres;

namespace {

std::size_t count_kind(const SimTrace& tr, EventKind k) {
  std::size_t c = 0;
  for (const auto& ev : tr.events) c += ev.kind == k;
  return c;
}

}  // namespace

TEST(FailurePlan, Parse) {
  FailurePlan p = parse_failure_plan("1@0,3@0.5,4");
  ASSERT_EQ(p.failures.size(), 3u);
  EXPECT_EQ(p.failures[0].robot, 1);
  EXPECT_EQ(p.failures[1].time, 0.5);
  EXPECT_EQ(p.failures[2].time, 0.0);
  EXPECT_EQ(parse_failure_plan("2", 1.5).failures[0].time, 1.5);
  EXPECT_TRUE(parse_failure_plan("").failures.empty());
  EXPECT_THROW(parse_failure_plan("x@1"), ParseError);
  EXPECT_THROW(parse_failure_plan("1@zz"), ParseError);
  EXPECT_THROW(parse_failure_plan("1x"), ParseError);
}

TEST(FailurePlan, Validation) {
  SimModel m = support::model_of(support::chain(3));
  EXPECT_THROW(simulate(m, parse_failure_plan("3")), ValidationError);
  EXPECT_THROW(simulate(m, parse_failure_plan("1,1@2")), ValidationError);
  EXPECT_THROW(simulate(m, FailurePlan{{{0, -1.0}}}), ValidationError);
}

TEST(Simulate, SquareWithoutFailures) {
  SimModel m = support::model_of(support::square());
  SimTrace tr = simulate(m, {});
  EXPECT_EQ(tr.period, 2);
  EXPECT_EQ(count_kind(tr, EventKind::kSwitch), 0u);
  // Every robot meets both neighbors once per period.
  std::map<std::pair<int, int>, int> pairs;
  for (const auto& ev : tr.events)
    if (ev.kind == EventKind::kMeeting) ++pairs[{ev.robot, ev.partner}];
  EXPECT_EQ(pairs.size(), 4u);
  for (const auto& [pair, count] : pairs) EXPECT_EQ(count, 2) << pair.first << "-" << pair.second;
  for (int r = 0; r < 4; ++r) EXPECT_EQ(tr.meetings[static_cast<std::size_t>(r)], 4);
  EXPECT_FALSE(tr.starvation_state());
  for (const auto& c : coverage_report(m, tr)) {
    EXPECT_TRUE(c.by_rings);
    EXPECT_TRUE(c.by_sweep);
  }
}

TEST(Simulate, SquareOppositeFailuresStarve) {
  SimModel m = support::model_of(support::square());
  for (auto pair : {std::vector<int>{0, 2}, std::vector<int>{1, 3}}) {
    SimTrace tr = simulate(m, FailurePlan::at_zero(pair));
    EXPECT_EQ(tr.survivors(), 2);
    EXPECT_TRUE(tr.starvation_state());
    for (const auto& c : coverage_report(m, tr)) {
      EXPECT_FALSE(c.by_rings);
      EXPECT_FALSE(c.by_sweep);
    }
  }
  // Adjacent failures leave one robot per ring.
  SimTrace tr = simulate(m, FailurePlan::at_zero({0, 1}));
  EXPECT_FALSE(tr.starvation_state());
}

TEST(Simulate, ChainSurvivorSwitches) {
  SimModel m = support::model_of(support::chain(2));
  SimOptions opt;
  opt.horizon = 8.0;
  SimTrace tr = simulate(m, FailurePlan::at_zero({1}), opt);
  std::vector<double> switch_times;
  for (const auto& ev : tr.events)
    if (ev.kind == EventKind::kSwitch) {
      EXPECT_EQ(ev.robot, 0);
      switch_times.push_back(ev.time);
    }
  ASSERT_GE(switch_times.size(), 6u);
  for (std::size_t k = 1; k < switch_times.size(); ++k) EXPECT_NEAR(switch_times[k] - switch_times[k - 1], 1.0, 1e-9);
  EXPECT_TRUE(tr.starving[0]);
  for (const auto& c : coverage_report(m, tr)) {
    EXPECT_TRUE(c.by_rings);
    EXPECT_TRUE(c.by_sweep);
  }
}

TEST(Simulate, NeverTwoRobotsOnATrajectory) {
  std::mt19937_64 rng(99);
  for (const Scenario& s : {support::grid(3, 3), support::cycle(10), support::tree(10, 2)}) {
    SimModel m = support::model_of(s);
    for (int trial = 0; trial < 10; ++trial) {
      FailurePlan plan;
      for (int r = 0; r < s.size(); ++r)
        if (rng() % 3 == 0) plan.failures.push_back({r, static_cast<double>(rng() % 7) * 0.37});
      SimTrace tr = simulate(m, plan);
      std::vector<int> where(static_cast<std::size_t>(s.size()), -1);
      for (int t = 0; t < s.size(); ++t)
        for (const Stay& a : tr.stays[static_cast<std::size_t>(t)])
          for (const Stay& b : tr.stays[static_cast<std::size_t>(t)])
            if (&a != &b) {
              EXPECT_TRUE(a.to <= b.from + 1e-12 || b.to <= a.from + 1e-12);
            }
    }
  }
}

TEST(Simulate, EventsAreTimeOrderedAndDeterministic) {
  SimModel m = support::model_of(support::grid(2, 3));
  SimTrace a = simulate(m, parse_failure_plan("1@0.3,4@1.1"));
  SimTrace b = simulate(m, parse_failure_plan("1@0.3,4@1.1"));
  for (std::size_t k = 1; k < a.events.size(); ++k) EXPECT_LE(a.events[k - 1].time, a.events[k].time);
  std::ostringstream sa, sb;
  write_trace_csv(sa, a);
  write_trace_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NEAR(a.window_start, 1.1, 1e-12);
  EXPECT_NEAR(a.end, 1.1 + 6.0, 1e-12);
}

TEST(Simulate, RingCountsDropOnlyAtFailures) {
  SimModel m = support::model_of(support::grid(3, 3));
  SimTrace tr = simulate(m, parse_failure_plan("4@0.7"));
  ASSERT_FALSE(tr.occupancy.empty());
  auto total = [](const OccupancySample& s) { return std::accumulate(s.counts.begin(), s.counts.end(), 0); };
  EXPECT_EQ(total(tr.occupancy.front()), 9);
  EXPECT_EQ(total(tr.occupancy.back()), 8);
  for (const auto& s : tr.occupancy) {
    if (s.time < 0.7) {
      EXPECT_EQ(s.counts, tr.occupancy.front().counts);
    } else {
      EXPECT_EQ(s.counts, tr.occupancy.back().counts);
      EXPECT_EQ(s.counts, tr.ring_count_after_failures);
    }
  }
}

TEST(Simulate, StarvationFlagMatchesMeetings) {
  SimModel m = support::model_of(support::grid(3, 3));
  SimTrace tr = simulate(m, FailurePlan::at_zero({1, 3, 5}));
  for (int r = 0; r < 9; ++r) {
    auto k = static_cast<std::size_t>(r);
    if (!tr.alive[k]) continue;
    EXPECT_EQ(tr.starving[k], tr.meetings[k] == 0);
  }
}

TEST(Simulate, TruncationAtEventCap) {
  SimModel m = support::model_of(support::grid(2, 2));
  SimOptions opt;
  opt.max_events = 10;
  opt.horizon = 100.0;
  SimTrace tr = simulate(m, {}, opt);
  EXPECT_TRUE(tr.truncated);
  EXPECT_LE(tr.events.size(), 10u);
}

TEST(TraceCsv, Format) {
  SimModel m = support::model_of(support::chain(2));
  SimTrace tr = simulate(m, FailurePlan::at_zero({1}));
  std::ostringstream os;
  write_trace_csv(os, tr);
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "time,event,robot,trajectory,angle,partner");
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line.rfind("0.000000000,failure,1,1,", 0), 0u) << line;
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, tr.events.size());
}

TEST(Coverage, TreeSurvivesOneFailure) {
  SimModel m = support::model_of(support::tree(4, 1));
  for (int r = 0; r < 4; ++r) {
    SimTrace tr = simulate(m, FailurePlan::at_zero({r}));
    for (const auto& c : coverage_report(m, tr)) {
      EXPECT_TRUE(c.by_rings);
      EXPECT_TRUE(c.by_sweep);
    }
  }
}

TEST(Coverage, NoFailuresAllCovered) {
  SimModel m = support::model_of(support::grid(3, 4));
  SimTrace tr = simulate(m, {});
  for (const auto& c : coverage_report(m, tr)) EXPECT_TRUE(c.by_rings && c.by_sweep);
}

TEST(Revisit, Examples) {
  SimModel chain = support::model_of(support::chain(2));
  EXPECT_NEAR(revisit_period(chain, simulate(chain, {}), 0, 1.0), 1.0, 1e-6);
  EXPECT_NEAR(revisit_period(chain, simulate(chain, FailurePlan::at_zero({1})), 0, 1.0), 2.0, 1e-6);
  EXPECT_NEAR(revisit_period(chain, simulate(chain, FailurePlan::at_zero({1})), 1, 4.0), 2.0, 1e-6);

  SimModel single = support::model_of(support::chain(1));
  EXPECT_NEAR(revisit_period(single, simulate(single, {}), 0, 2.5), 1.0, 1e-6);

  SimModel g = support::model_of(support::grid(3, 3));
  // Leave robot 0 alone on its ring.
  int ring0 = held_ring_point(g.rings, g.schedule, 0, 0.0).ring;
  std::vector<int> fail;
  for (int r = 1; r < 9; ++r)
    if (held_ring_point(g.rings, g.schedule, r, 0.0).ring == ring0) fail.push_back(r);
  ASSERT_EQ(fail.size(), 2u);
  SimTrace tr = simulate(g, FailurePlan::at_zero(fail));
  for (auto ref : g.rings.arcs_by_trajectory[0]) {
    if (ref.first != ring0) continue;
    const Arc& a = g.rings.arc(ref);
    double mid = a.start + a.direction * a.length / 2;
    EXPECT_NEAR(revisit_period(g, tr, 0, mid), 3.0, 1e-6);
  }
}

TEST(Revisit, EmptyRingThrows) {
  SimModel m = support::model_of(support::chain(2));
  SimTrace tr = simulate(m, FailurePlan::at_zero({0, 1}));
  EXPECT_THROW(revisit_period(m, tr, 0, 1.0), ParameterError);
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_sn(support::model_of(support::chain(4))).value, 1);
  EXPECT_EQ(brute_force_sn(support::model_of(support::grid(2, 2))).value, 2);
  EXPECT_EQ(brute_force_ur(support::model_of(support::tree(5, 3))).value, 4);
  EXPECT_EQ(brute_force_ur(support::model_of(support::grid(2, 2))).value, 1);
  SimModel sq = support::model_of(support::square());
  EXPECT_EQ(brute_force_ur(sq).value, std::min(sq.rings.ring(0).k, sq.rings.ring(1).k) - 1);
}

TEST(BruteForce, StarMatchesEngine) {
  SimModel m = support::model_of(support::star(5));
  SlotModel sm = build_slot_model(m.rings, m.schedule, m.graph);
  EXPECT_EQ(brute_force_sn(m).value, starvation_number(build_meeting_graph(sm)).sn);
}

TEST(BruteForce, WitnessReproduces) {
  SimModel m = support::model_of(support::grid(3, 3));
  OracleResult sn = brute_force_sn(m);
  SimTrace tr = simulate(m, FailurePlan::at_zero(sn.witness));
  EXPECT_TRUE(tr.starvation_state());
  EXPECT_EQ(tr.survivors(), sn.value);
}

TEST(BruteForce, BoundsAndCaps) {
  SimModel big = support::model_of(support::grid(3, 5));
  OracleOptions opt;
  opt.max_n = 12;
  EXPECT_THROW(brute_force_sn(big, opt), BoundError);
  EXPECT_THROW(brute_force_ur(big, opt), BoundError);
  SimModel m = support::model_of(support::chain(5));
  opt.max_fail = 2;
  // SN = 1 needs four failures, beyond the cap.
  EXPECT_FALSE(brute_force_sn(m, opt).complete);
  OracleResult ur = brute_force_ur(support::model_of(support::grid(2, 2)), opt);
  EXPECT_TRUE(ur.complete);
  EXPECT_EQ(ur.value, 1);
}

TEST(BruteForce, JobsDoNotChangeResults) {
  SimModel m = support::model_of(support::grid(3, 3));
  OracleOptions one, many;
  one.jobs = 1;
  many.jobs = 4;
  EXPECT_EQ(brute_force_sn(m, one).value, brute_force_sn(m, many).value);
  EXPECT_EQ(brute_force_sn(m, one).witness, brute_force_sn(m, many).witness);
  EXPECT_EQ(brute_force_ur(m, one).value, brute_force_ur(m, many).value);
}

#pragma once

// Event-driven simulation of robots flying the schedule. A robot always sits
// on the schedule point of the trajectory it currently occupies; it meets a
// neighbor when both schedule points hit the shared link at the same instant
// while both trajectories are occupied, and it hops to the neighboring
// trajectory when that one is empty.
//
// Nothing here uses the slot model or the meeting graph, which is what makes
// the brute-force oracles below worth comparing against.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ringres/angles.hpp"
#include "ringres/error.hpp"
#include "ringres/rings.hpp"
#include "ringres/scenario.hpp"
#include "ringres/schedule.hpp"

namespace ringres {

struct SimModel {
  CommGraph graph;
  Schedule schedule;
  RingSet rings;

  int size() const { return graph.size(); }
};

struct Failure {
  int robot = 0;
  double time = 0.0;
};

struct FailurePlan {
  std::vector<Failure> failures;

  static FailurePlan at_zero(const std::vector<int>& robots) {
    FailurePlan p;
    for (int r : robots) p.failures.push_back({r, 0.0});
    return p;
  }
  double last_time() const {
    double t = 0.0;
    for (const auto& f : failures) t = std::max(t, f.time);
    return t;
  }
};

// "1@0,3@0.5"; a bare id fails at default_time.
inline FailurePlan parse_failure_plan(const std::string& text, double default_time = 0.0) {
  FailurePlan plan;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? text.size() : comma + 1;
    if (item.empty()) continue;
    Failure f;
    f.time = default_time;
    try {
      std::size_t at = item.find('@');
      std::size_t used = 0;
      f.robot = std::stoi(item.substr(0, at), &used);
      if (used != (at == std::string::npos ? item.size() : at)) throw std::invalid_argument(item);
      if (at != std::string::npos) {
        std::string ts = item.substr(at + 1);
        f.time = std::stod(ts, &used);
        if (used != ts.size()) throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad failure item '" + item + "', expected ROBOT[@TIME]");
    }
    plan.failures.push_back(f);
  }
  return plan;
}

inline void validate_plan(const FailurePlan& plan, int n) {
  std::set<int> seen;
  for (const auto& f : plan.failures) {
    if (f.robot < 0 || f.robot >= n)
      throw ValidationError("failure names unknown robot " + std::to_string(f.robot));
    if (!(f.time >= 0.0) || !std::isfinite(f.time))
      throw ValidationError("failure time must be finite and >= 0");
    if (!seen.insert(f.robot).second)
      throw ValidationError("robot " + std::to_string(f.robot) + " fails twice");
  }
}

enum class EventKind { kLinkArrival, kMeeting, kSwitch, kFailure };

inline const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::kLinkArrival: return "link_arrival";
    case EventKind::kMeeting: return "meeting";
    case EventKind::kSwitch: return "switch";
    case EventKind::kFailure: return "failure";
  }
  return "?";
}

struct SimEvent {
  double time = 0.0;
  EventKind kind = EventKind::kLinkArrival;
  int robot = -1;
  int trajectory = -1;  // for a switch, the destination
  double angle = 0.0;
  int partner = -1;     // meeting: other robot; switch: source trajectory
  int edge = -1;
};

struct Stay {
  int robot = -1;
  double from = 0.0;
  double to = 0.0;
};

struct OccupancySample {
  double time = 0.0;
  std::vector<int> counts;  // per ring
};

struct SimOptions {
  double horizon = 0.0;  // periods; <= 0 means automatic
  bool record = true;    // events, stays and occupancy samples
  std::size_t max_events = 1'000'000;
};

struct SimTrace {
  int n = 0;
  double window_start = 0.0;  // instant of the last failure
  double end = 0.0;
  long long period = 1;       // lcm of ring capacities
  bool automatic = true;
  bool truncated = false;
  std::size_t event_count = 0;
  std::vector<SimEvent> events;

  std::vector<bool> alive;
  std::vector<int> final_trajectory;  // -1 for failed robots
  std::vector<double> final_angle;
  std::vector<int> meetings;          // per robot, counted from window_start
  std::vector<bool> starving;

  std::vector<int> occupant;          // per trajectory at the end
  std::vector<std::vector<Stay>> stays;          // per trajectory
  std::vector<std::vector<bool>> segment_visited;  // per trajectory, per link
  std::vector<OccupancySample> occupancy;  // whole run, failures included
  std::vector<int> ring_count_after_failures;

  int survivors() const {
    return static_cast<int>(std::count(alive.begin(), alive.end(), true));
  }
  bool starvation_state() const {
    if (survivors() == 0) return false;
    for (int r = 0; r < n; ++r)
      if (alive[static_cast<std::size_t>(r)] && !starving[static_cast<std::size_t>(r)]) return false;
    return true;
  }
};

inline long long hyper_period(const RingSet& rs, long long cap = 1'000'000) {
  long long h = 1;
  for (const Ring& r : rs.rings) {
    h = std::lcm(h, static_cast<long long>(r.k));
    if (h > cap) return cap;
  }
  return h;
}

namespace detail {

struct LinkInfo {
  int edge = -1;
  int neighbor = -1;
  double angle = 0.0;
  double tau = 0.0;      // arrival offset within a period, [0, 1)
  double seg_len = 0.0;  // arc from the previous link in direction of motion
  int group = -1;
};

struct Arrival {
  int trajectory = 0;
  int link = 0;
};

struct Group {
  double tau = 0.0;
  std::vector<Arrival> arrivals;
};

inline std::vector<std::vector<LinkInfo>> link_table(const CommGraph& g, const Schedule& s) {
  std::vector<std::vector<LinkInfo>> links(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    auto& li = links[static_cast<std::size_t>(i)];
    const double f = s.f[static_cast<std::size_t>(i)];
    const int dir = s.g[static_cast<std::size_t>(i)];
    for (int e : g.incident(i)) {
      LinkInfo info;
      info.edge = e;
      info.neighbor = g.other(e, i);
      info.angle = g.link_angle(e, i);
      double tau = directed_sweep(f, info.angle, dir) / kTwoPi;
      if (tau >= 1.0 - kSimultaneityTol) tau = 0.0;
      info.tau = tau;
      li.push_back(info);
    }
    // Previous link along the motion is the one with the largest earlier tau.
    std::vector<std::size_t> order(li.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return li[a].tau < li[b].tau; });
    for (std::size_t k = 0; k < order.size(); ++k) {
      LinkInfo& cur = li[order[k]];
      const LinkInfo& prev = li[order[(k + order.size() - 1) % order.size()]];
      double len = directed_sweep(prev.angle, cur.angle, dir);
      cur.seg_len = len <= kAngleTol ? kTwoPi : len;
    }
  }
  return links;
}

inline std::vector<Group> group_arrivals(std::vector<std::vector<LinkInfo>>& links) {
  std::vector<std::pair<double, Arrival>> all;
  for (std::size_t i = 0; i < links.size(); ++i)
    for (std::size_t l = 0; l < links[i].size(); ++l)
      all.push_back({links[i][l].tau, {static_cast<int>(i), static_cast<int>(l)}});
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second.trajectory < b.second.trajectory;
  });
  std::vector<Group> groups;
  for (const auto& [tau, arr] : all) {
    if (groups.empty() || tau - groups.back().tau > kSimultaneityTol) groups.push_back({tau, {}});
    groups.back().arrivals.push_back(arr);
    links[static_cast<std::size_t>(arr.trajectory)][static_cast<std::size_t>(arr.link)].group =
        static_cast<int>(groups.size()) - 1;
  }
  return groups;
}

}  // namespace detail

class Simulator {
 public:
  Simulator(const SimModel& model, const FailurePlan& plan, SimOptions opt)
      : m_(model), opt_(opt) {
    const int n = m_.size();
    if (m_.schedule.size() != n) throw ValidationError("schedule size does not match graph");
    if (m_.rings.direction != m_.schedule.g)
      throw ValidationError("ring set was built for different directions");
    validate_plan(plan, n);
    failures_ = plan.failures;
    std::stable_sort(failures_.begin(), failures_.end(), [](const Failure& a, const Failure& b) {
      return a.time != b.time ? a.time < b.time : a.robot < b.robot;
    });
    links_ = detail::link_table(m_.graph, m_.schedule);
    groups_ = detail::group_arrivals(links_);
  }

  SimTrace run() {
    const int n = m_.size();
    SimTrace& tr = trace_;
    tr.n = n;
    tr.period = hyper_period(m_.rings);
    tr.window_start = failures_.empty() ? 0.0 : failures_.back().time;
    tr.automatic = !(opt_.horizon > 0.0);
    tr.end = tr.automatic ? tr.window_start + static_cast<double>(tr.period) : opt_.horizon;
    tr.alive.assign(static_cast<std::size_t>(n), true);
    tr.meetings.assign(static_cast<std::size_t>(n), 0);
    tr.stays.assign(static_cast<std::size_t>(n), {});
    tr.segment_visited.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      tr.segment_visited[static_cast<std::size_t>(i)].assign(links_[static_cast<std::size_t>(i)].size(), false);

    occupant_.resize(static_cast<std::size_t>(n));
    robot_at_.resize(static_cast<std::size_t>(n));
    entered_.assign(static_cast<std::size_t>(n), -kInf);
    std::iota(occupant_.begin(), occupant_.end(), 0);
    std::iota(robot_at_.begin(), robot_at_.end(), 0);
    for (int i = 0; i < n; ++i) open_stay(i, i, 0.0);
    window_open_ = failures_.empty();
    if (window_open_) tr.ring_count_after_failures = ring_counts(0.0, true);
    sample(0.0, true);

    std::size_t next_fail = 0;
    bool done = false;
    for (long long p = 0; !done && !groups_.empty(); ++p) {
      for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
        const double t = static_cast<double>(p) + groups_[gi].tau;
        if (t >= tr.end) {
          done = true;
          break;
        }
        while (next_fail < failures_.size() && failures_[next_fail].time <= t) {
          ++next_fail;
          fail(failures_[next_fail - 1], next_fail == failures_.size());
        }
        process_group(gi, t);
        if (tr.truncated) {
          done = true;
          break;
        }
      }
    }
    while (next_fail < failures_.size()) {
      ++next_fail;
      fail(failures_[next_fail - 1], next_fail == failures_.size());
    }

    tr.occupant = occupant_;
    tr.final_trajectory = robot_at_;
    tr.final_angle.assign(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < n; ++r)
      if (robot_at_[static_cast<std::size_t>(r)] >= 0)
        tr.final_angle[static_cast<std::size_t>(r)] =
            position_at(m_.schedule, robot_at_[static_cast<std::size_t>(r)], tr.end);
    for (int i = 0; i < n; ++i) close_stay(i, tr.end);
    tr.starving.assign(static_cast<std::size_t>(n), false);
    for (int r = 0; r < n; ++r)
      tr.starving[static_cast<std::size_t>(r)] =
          tr.alive[static_cast<std::size_t>(r)] && tr.meetings[static_cast<std::size_t>(r)] == 0;
    return std::move(trace_);
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  void log(const SimEvent& ev) {
    if (++trace_.event_count > opt_.max_events) {
      trace_.truncated = true;
      return;
    }
    if (opt_.record) trace_.events.push_back(ev);
  }

  void open_stay(int traj, int robot, double t) {
    if (opt_.record) trace_.stays[static_cast<std::size_t>(traj)].push_back({robot, t, kInf});
  }
  void close_stay(int traj, double t) {
    if (!opt_.record) return;
    auto& v = trace_.stays[static_cast<std::size_t>(traj)];
    if (!v.empty() && v.back().to == kInf) v.back().to = t;
  }

  void fail(const Failure& f, bool last) {
    const auto r = static_cast<std::size_t>(f.robot);
    const int traj = robot_at_[r];
    log({f.time, EventKind::kFailure, f.robot, traj, position_at(m_.schedule, traj, f.time), -1, -1});
    close_stay(traj, f.time);
    occupant_[static_cast<std::size_t>(traj)] = -1;
    robot_at_[r] = -1;
    trace_.alive[r] = false;
    if (last) {
      // Everything before the last failure is transient; the measured window
      // starts now, and the robots present are treated as having been there.
      window_open_ = true;
      std::fill(trace_.meetings.begin(), trace_.meetings.end(), 0);
      for (auto& v : trace_.segment_visited) std::fill(v.begin(), v.end(), false);
      std::fill(entered_.begin(), entered_.end(), -kInf);
      trace_.ring_count_after_failures = ring_counts(f.time, true);
    }
    sample(f.time, true);
  }

  // A robot sitting on a link belongs to the arc it leaves by once the
  // arrivals at t are processed; before that, to the arc it came in on.
  std::vector<int> ring_counts(double t, bool before_arrivals) const {
    std::vector<int> counts(m_.rings.rings.size(), 0);
    for (std::size_t r = 0; r < robot_at_.size(); ++r) {
      int traj = robot_at_[r];
      if (traj < 0) continue;
      RingPoint p = before_arrivals ? held_ring_point(m_.rings, m_.schedule, traj, t)
                                    : ring_of_point(m_.rings, traj, position_at(m_.schedule, traj, t));
      ++counts[static_cast<std::size_t>(p.ring)];
    }
    return counts;
  }

  void sample(double t, bool before_arrivals) {
    if (!opt_.record) return;
    trace_.occupancy.push_back({t, ring_counts(t, before_arrivals)});
  }

  void process_group(std::size_t gi, double t) {
    struct Move {
      int robot, from, to, edge;
      double angle;
    };
    std::vector<Move> moves;
    std::vector<const detail::Arrival*> active;
    for (const auto& a : groups_[gi].arrivals)
      if (occupant_[static_cast<std::size_t>(a.trajectory)] >= 0) active.push_back(&a);
    std::sort(active.begin(), active.end(), [&](const auto* x, const auto* y) {
      return occupant_[static_cast<std::size_t>(x->trajectory)] <
             occupant_[static_cast<std::size_t>(y->trajectory)];
    });

    for (const auto* a : active) {
      const int i = a->trajectory;
      const int robot = occupant_[static_cast<std::size_t>(i)];
      const auto& link = links_[static_cast<std::size_t>(i)][static_cast<std::size_t>(a->link)];
      log({t, EventKind::kLinkArrival, robot, i, link.angle, -1, link.edge});

      // Segment ending here counts as swept only if this robot covered all of it.
      if (window_open_ &&
          entered_[static_cast<std::size_t>(i)] <= t - link.seg_len / kTwoPi + kSimultaneityTol)
        trace_.segment_visited[static_cast<std::size_t>(i)][static_cast<std::size_t>(a->link)] = true;

      const int j = link.neighbor;
      const int other = occupant_[static_cast<std::size_t>(j)];
      if (other < 0) {
        moves.push_back({robot, i, j, link.edge, link.angle});
        continue;
      }
      // Meeting needs the neighbor's point at the reciprocal link right now.
      const auto& back = reciprocal(j, link.edge);
      if (back.group != static_cast<int>(gi)) continue;
      if (robot < other) {
        log({t, EventKind::kMeeting, robot, i, link.angle, other, link.edge});
        if (window_open_) {
          ++trace_.meetings[static_cast<std::size_t>(robot)];
          ++trace_.meetings[static_cast<std::size_t>(other)];
        }
      }
    }

    for (const Move& mv : moves) {
      log({t, EventKind::kSwitch, mv.robot, mv.to,
           reciprocal(mv.to, mv.edge).angle, mv.from, mv.edge});
      close_stay(mv.from, t);
      occupant_[static_cast<std::size_t>(mv.from)] = -1;
    }
    for (const Move& mv : moves) {
      if (occupant_[static_cast<std::size_t>(mv.to)] >= 0)
        throw InternalError("two robots on trajectory " + std::to_string(mv.to) +
                            " at t=" + std::to_string(t));
      occupant_[static_cast<std::size_t>(mv.to)] = mv.robot;
      robot_at_[static_cast<std::size_t>(mv.robot)] = mv.to;
      entered_[static_cast<std::size_t>(mv.to)] = t;
      open_stay(mv.to, mv.robot, t);
    }
    if (!active.empty()) sample(t, false);
  }

  const detail::LinkInfo& reciprocal(int traj, int edge) const {
    for (const auto& l : links_[static_cast<std::size_t>(traj)])
      if (l.edge == edge) return l;
    throw InternalError("edge missing from trajectory link table");
  }

  const SimModel& m_;
  SimOptions opt_;
  std::vector<Failure> failures_;
  std::vector<std::vector<detail::LinkInfo>> links_;
  std::vector<detail::Group> groups_;
  SimTrace trace_;
  std::vector<int> occupant_;  // per trajectory, robot or -1
  std::vector<int> robot_at_;  // per robot, trajectory or -1
  std::vector<double> entered_;
  bool window_open_ = false;
};

inline SimTrace simulate(const SimModel& model, const FailurePlan& plan, SimOptions opt = {}) {
  return Simulator(model, plan, opt).run();
}

// ---------------------------------------------------------------------------
// Coverage and revisits

struct CoverageEntry {
  int trajectory = 0;
  bool by_rings = false;  // every ring through the trajectory is occupied
  bool by_sweep = false;  // every segment swept within the window
};

inline std::vector<CoverageEntry> coverage_report(const SimModel& model, const SimTrace& tr) {
  std::vector<CoverageEntry> out;
  const std::vector<int>& counts = tr.ring_count_after_failures;
  if (counts.size() != model.rings.rings.size())
    throw ParameterError("trace does not belong to this model");
  for (int i = 0; i < tr.n; ++i) {
    CoverageEntry c;
    c.trajectory = i;
    c.by_rings = true;
    for (auto ref : model.rings.arcs_by_trajectory[static_cast<std::size_t>(i)])
      if (counts[static_cast<std::size_t>(ref.first)] == 0) c.by_rings = false;
    const auto& seg = tr.segment_visited[static_cast<std::size_t>(i)];
    c.by_sweep = seg.empty() ? tr.occupant[static_cast<std::size_t>(i)] >= 0
                             : std::all_of(seg.begin(), seg.end(), [](bool b) { return b; });
    out.push_back(c);
  }
  return out;
}

// Sweep-only coverage, usable on unrecorded traces.
inline bool all_swept(const SimTrace& tr) {
  for (int i = 0; i < tr.n; ++i) {
    const auto& seg = tr.segment_visited[static_cast<std::size_t>(i)];
    bool ok = seg.empty() ? tr.occupant[static_cast<std::size_t>(i)] >= 0
                          : std::all_of(seg.begin(), seg.end(), [](bool b) { return b; });
    if (!ok) return false;
  }
  return true;
}

struct RevisitStats {
  std::vector<double> visits;
  double min_gap = 0.0;
  double max_gap = 0.0;
};

// Times at which some robot passes the point, within the measured window.
// On an automatic horizon the window is one full period of the dynamics, so
// the first visit recurs one period later.
inline RevisitStats revisit_stats(const SimModel& model, const SimTrace& tr, int traj,
                                  double angle) {
  if (traj < 0 || traj >= tr.n) throw ParameterError("unknown trajectory " + std::to_string(traj));
  const double f = model.schedule.f[static_cast<std::size_t>(traj)];
  const int dir = model.schedule.g[static_cast<std::size_t>(traj)];
  double tau = directed_sweep(f, normalize_angle(angle), dir) / kTwoPi;
  double first = tr.window_start + (tau - std::fmod(tr.window_start, 1.0));
  if (first < tr.window_start - kSimultaneityTol) first += 1.0;
  RevisitStats st;
  const auto& stays = tr.stays[static_cast<std::size_t>(traj)];
  for (double t = first; t < tr.end - kSimultaneityTol; t += 1.0) {
    bool occupied = std::any_of(stays.begin(), stays.end(), [&](const Stay& s) {
      return s.from <= t + kSimultaneityTol && t <= s.to + kSimultaneityTol &&
             s.from < tr.end;
    });
    if (occupied) st.visits.push_back(t);
  }
  if (tr.automatic && !st.visits.empty()) st.visits.push_back(st.visits.front() + static_cast<double>(tr.period));
  if (st.visits.size() < 2)
    throw ParameterError("point on trajectory " + std::to_string(traj) + " is not revisited");
  st.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < st.visits.size(); ++k) {
    double gap = st.visits[k] - st.visits[k - 1];
    st.min_gap = std::min(st.min_gap, gap);
    st.max_gap = std::max(st.max_gap, gap);
  }
  return st;
}

// Longest time the point waits between two consecutive visits.
inline double revisit_period(const SimModel& model, const SimTrace& tr, int traj, double angle) {
  return revisit_stats(model, tr, traj, angle).max_gap;
}

// ---------------------------------------------------------------------------
// Brute-force oracles

inline int default_jobs() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

namespace detail {

template <typename Fn>
void parallel_for(std::uint64_t count, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count < 64) {
    for (std::uint64_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      try {
        for (std::uint64_t k; (k = next.fetch_add(1)) < count;) fn(k);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline std::vector<int> mask_members(std::uint64_t mask, int n) {
  std::vector<int> out;
  for (int r = 0; r < n; ++r)
    if (mask >> r & 1u) out.push_back(r);
  return out;
}

}  // namespace detail

struct OracleOptions {
  int max_n = 12;
  int max_fail = -1;  // cap on the failed-set size; < 0 means n
  int jobs = default_jobs();
};

namespace detail {

inline std::vector<std::uint64_t> masks_of_size(int n, int size) {
  std::vector<std::uint64_t> out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (std::popcount(mask) == size) out.push_back(mask);
  return out;
}

}  // namespace detail

// Largest survivor set that ends in starvation state, failures at t = 0.
// Failed sets are tried smallest first, so the first size that yields a
// starvation state gives the answer. `complete` is false when the cap on the
// failed-set size stopped the sweep early.
struct OracleResult {
  int value = 0;
  std::vector<int> witness;  // failed robots
  bool complete = true;
};

inline OracleResult brute_force_sn(const SimModel& model, const OracleOptions& opt = {}) {
  const int n = model.size();
  if (n > opt.max_n || n > 62)
    throw BoundError("brute-force starvation number limited to n <= " + std::to_string(opt.max_n));
  const int cap = opt.max_fail < 0 ? n - 1 : std::min(opt.max_fail, n - 1);
  SimOptions sim;
  sim.record = false;
  for (int size = 0; size <= cap; ++size) {
    auto masks = detail::masks_of_size(n, size);
    std::vector<char> starved(masks.size(), 0);
    detail::parallel_for(masks.size(), opt.jobs, [&](std::uint64_t k) {
      SimTrace tr = simulate(model, FailurePlan::at_zero(detail::mask_members(masks[k], n)), sim);
      starved[k] = tr.starvation_state();
    });
    for (std::size_t k = 0; k < masks.size(); ++k)
      if (starved[k]) return {n - size, detail::mask_members(masks[k], n), true};
  }
  return {0, {}, false};
}

// Smallest failed set leaving some trajectory unswept, minus one.
inline OracleResult brute_force_ur(const SimModel& model, const OracleOptions& opt = {}) {
  const int n = model.size();
  if (n > opt.max_n || n > 62)
    throw BoundError("brute-force uncovering-resilience limited to n <= " + std::to_string(opt.max_n));
  const int cap = opt.max_fail < 0 ? n : std::min(opt.max_fail, n);
  SimOptions sim;
  sim.record = false;
  for (int size = 1; size <= cap; ++size) {
    auto masks = detail::masks_of_size(n, size);
    std::vector<char> uncovered(masks.size(), 0);
    detail::parallel_for(masks.size(), opt.jobs, [&](std::uint64_t k) {
      SimTrace tr = simulate(model, FailurePlan::at_zero(detail::mask_members(masks[k], n)), sim);
      uncovered[k] = !all_swept(tr);
    });
    for (std::size_t k = 0; k < masks.size(); ++k)
      if (uncovered[k]) return {size - 1, detail::mask_members(masks[k], n), true};
  }
  if (cap == n) throw InternalError("removing every robot left all trajectories covered");
  return {0, {}, false};
}

// ---------------------------------------------------------------------------
// Trace CSV

inline void write_trace_csv(std::ostream& os, const SimTrace& tr) {
  os << "time,event,robot,trajectory,angle,partner\n";
  char buf[64];
  for (const SimEvent& ev : tr.events) {
    std::snprintf(buf, sizeof buf, "%.9f", ev.time);
    os << buf << ',' << event_name(ev.kind) << ',' << ev.robot << ',' << ev.trajectory << ',';
    std::snprintf(buf, sizeof buf, "%.9f", ev.angle);
    os << buf << ',';
    if (ev.partner >= 0) os << ev.partner;
    os << '\n';
  }
}

}  // namespace ringres

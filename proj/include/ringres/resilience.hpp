#pragma once

// Resilience measures. Robots on a ring sit on evenly spaced slots whose
// occupancy never changes, so the whole failure analysis reduces to integer
// arithmetic on slot indices:
//   - uncovering-resilience is the smallest ring capacity minus one;
//   - a set of survivors is in starvation iff no two of their slots ever meet,
//     so the starvation number is a maximum independent set of the slot
//     meeting graph;
//   - isolation-resilience follows from SN + IR = n - 1.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringres/angles.hpp"
#include "ringres/error.hpp"
#include "ringres/rings.hpp"
#include "ringres/scenario.hpp"
#include "ringres/schedule.hpp"

namespace ringres {

struct SlotRing {
  int k = 0;
  double d0 = 0.0;     // arclength of slot 0 at t = 0
  int first_slot = 0;  // global id of slot 0
};

struct Slot {
  int ring = 0;
  int index = 0;
  int robot = 0;  // robot occupying the slot at t = 0
};

// One per communication edge: the two ring points where the neighbors arrive
// simultaneously.
struct Crossing {
  int edge = 0;
  int ring_a = 0;
  double arc_a = 0.0;
  int ring_b = 0;
  double arc_b = 0.0;
  double phase_a = 0.0;  // (arc_a - d0_a) / 2pi
  double phase_b = 0.0;
  long long delta = 0;   // phase_b - phase_a, integral
};

struct SlotModel {
  std::vector<SlotRing> rings;
  std::vector<Slot> slots;
  std::vector<int> robot_slot;  // per robot
  std::vector<Crossing> crossings;

  int slot_count() const { return static_cast<int>(slots.size()); }
  int slot_id(int ring, int index) const {
    return rings[static_cast<std::size_t>(ring)].first_slot + index;
  }
};

inline long long floor_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

// Slot whose ring point the robot on traj holds just before time t.
inline int slot_at(const SlotModel& sm, const RingSet& rs, const Schedule& s, int traj, double t) {
  RingPoint p = held_ring_point(rs, s, traj, t);
  const SlotRing& sr = sm.rings[static_cast<std::size_t>(p.ring)];
  long long idx = std::llround((p.arclength - sr.d0) / kTwoPi - t);
  return sm.slot_id(p.ring, static_cast<int>(floor_mod(idx, sr.k)));
}

inline SlotModel build_slot_model(const RingSet& rs, const Schedule& sched,
                                  const CommGraph& graph) {
  if (sched.size() != graph.size() ||
      static_cast<int>(rs.arcs_by_trajectory.size()) != graph.size())
    throw ValidationError("slot model inputs disagree on the trajectory count");
  if (rs.direction != sched.g)
    throw ValidationError("ring set was built for different directions");

  SlotModel sm;
  sm.rings.resize(rs.rings.size());
  std::vector<std::vector<std::pair<double, int>>> members(rs.rings.size());
  for (int robot = 0; robot < graph.size(); ++robot) {
    RingPoint p = held_ring_point(rs, sched, robot, 0.0);
    members[static_cast<std::size_t>(p.ring)].emplace_back(p.arclength, robot);
  }

  sm.robot_slot.assign(static_cast<std::size_t>(graph.size()), -1);
  int next = 0;
  for (std::size_t r = 0; r < rs.rings.size(); ++r) {
    auto& mem = members[r];
    const int k = rs.rings[r].k;
    if (static_cast<int>(mem.size()) != k)
      throw ValidationError("ring " + std::to_string(r) + " holds " +
                            std::to_string(mem.size()) + " robots but has capacity " +
                            std::to_string(k) + "; schedule is not synchronizing");
    std::sort(mem.begin(), mem.end());
    SlotRing& sr = sm.rings[r];
    sr.k = k;
    sr.d0 = mem.front().first;
    sr.first_slot = next;
    for (int s = 0; s < k; ++s) {
      double q = (mem[static_cast<std::size_t>(s)].first - sr.d0) / kTwoPi;
      if (std::abs(q - s) > kResidualTol)
        throw ValidationError("robots on ring " + std::to_string(r) +
                              " are not 2pi apart; schedule is not synchronizing");
      int robot = mem[static_cast<std::size_t>(s)].second;
      sm.slots.push_back({static_cast<int>(r), s, robot});
      sm.robot_slot[static_cast<std::size_t>(robot)] = next + s;
    }
    next += k;
  }

  for (int e = 0; e < static_cast<int>(graph.edges().size()); ++e) {
    const auto& arrivals = rs.edge_arrivals[static_cast<std::size_t>(e)];
    Crossing c;
    c.edge = e;
    c.ring_a = rs.node_ring[static_cast<std::size_t>(arrivals[0])];
    c.ring_b = rs.node_ring[static_cast<std::size_t>(arrivals[1])];
    c.arc_a = rs.node_arclength[static_cast<std::size_t>(arrivals[0])];
    c.arc_b = rs.node_arclength[static_cast<std::size_t>(arrivals[1])];
    c.phase_a = (c.arc_a - sm.rings[static_cast<std::size_t>(c.ring_a)].d0) / kTwoPi;
    c.phase_b = (c.arc_b - sm.rings[static_cast<std::size_t>(c.ring_b)].d0) / kTwoPi;
    double diff = c.phase_b - c.phase_a;
    c.delta = std::llround(diff);
    if (std::abs(diff - static_cast<double>(c.delta)) >= kResidualTol)
      throw ValidationError("neighbors on edge " + std::to_string(e) +
                            " do not arrive together; schedule is not synchronizing");
    if (c.ring_a == c.ring_b &&
        floor_mod(c.delta, sm.rings[static_cast<std::size_t>(c.ring_a)].k) == 0)
      throw InternalError("same-ring crossing pairs a slot with itself");
    sm.crossings.push_back(c);
  }
  return sm;
}

// Undirected graph on slots; an edge joins two slots that reach the two ends
// of some crossing at the same instant.
struct MeetingGraph {
  std::vector<std::vector<int>> adj;  // sorted, unique

  int size() const { return static_cast<int>(adj.size()); }
  bool has_edge(int a, int b) const {
    const auto& v = adj[static_cast<std::size_t>(a)];
    return std::binary_search(v.begin(), v.end(), b);
  }
  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& v : adj) total += v.size();
    return total / 2;
  }
};

inline MeetingGraph build_meeting_graph(const SlotModel& sm) {
  MeetingGraph mg;
  mg.adj.resize(sm.slots.size());
  auto link = [&](int x, int y) {
    if (x == y) throw InternalError("meeting graph self-loop");
    mg.adj[static_cast<std::size_t>(x)].push_back(y);
    mg.adj[static_cast<std::size_t>(y)].push_back(x);
  };
  for (const Crossing& c : sm.crossings) {
    const SlotRing& ra = sm.rings[static_cast<std::size_t>(c.ring_a)];
    const SlotRing& rb = sm.rings[static_cast<std::size_t>(c.ring_b)];
    if (c.ring_a == c.ring_b) {
      for (int s = 0; s < ra.k; ++s)
        link(sm.slot_id(c.ring_a, s),
             sm.slot_id(c.ring_a, static_cast<int>(floor_mod(s + c.delta, ra.k))));
      continue;
    }
    // Slot s_a is at the crossing when t = phase_a - s_a (mod k_a), slot s_b
    // when t = phase_b - s_b (mod k_b). A common t exists iff
    // s_b = s_a + delta (mod gcd(k_a, k_b)).
    const long long gcd = std::gcd(ra.k, rb.k);
    for (int sa = 0; sa < ra.k; ++sa)
      for (int sb = 0; sb < rb.k; ++sb)
        if (floor_mod(sb - sa - c.delta, gcd) == 0)
          link(sm.slot_id(c.ring_a, sa), sm.slot_id(c.ring_b, sb));
  }
  for (auto& v : mg.adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return mg;
}

// ---------------------------------------------------------------------------
// Maximum independent set

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

  void set(int i) { words_[static_cast<std::size_t>(i) / 64] |= bit(i); }
  void reset(int i) { words_[static_cast<std::size_t>(i) / 64] &= ~bit(i); }
  bool test(int i) const { return words_[static_cast<std::size_t>(i) / 64] & bit(i); }
  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
  }
  int count_and(const Bitset& o) const {
    int c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) c += std::popcount(words_[k] & o.words_[k]);
    return c;
  }
  void subtract(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      for (auto w = words_[k]; w; w &= w - 1)
        fn(static_cast<int>(k * 64 + static_cast<std::size_t>(std::countr_zero(w))));
  }
  std::vector<int> members() const {
    std::vector<int> out;
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

 private:
  static std::uint64_t bit(int i) { return std::uint64_t{1} << (static_cast<unsigned>(i) % 64); }
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

namespace detail {

class MisSolver {
 public:
  explicit MisSolver(const MeetingGraph& mg) : n_(mg.size()) {
    for (int v = 0; v < n_; ++v) {
      Bitset b(n_);
      for (int w : mg.adj[static_cast<std::size_t>(v)]) b.set(w);
      adj_.push_back(std::move(b));
    }
  }

  std::vector<int> solve() {
    Bitset all(n_);
    for (int v = 0; v < n_; ++v) all.set(v);
    best_ = greedy(all);
    best_size_ = static_cast<int>(best_.size());
    std::vector<int> chosen;
    search(all, chosen);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  // Minimum-degree greedy; a valid independent set used as the first bound.
  std::vector<int> greedy(Bitset cand) const {
    std::vector<int> out;
    while (cand.any()) {
      int pick = -1, pick_deg = n_ + 1;
      cand.for_each([&](int v) {
        int d = adj_[static_cast<std::size_t>(v)].count_and(cand);
        if (d < pick_deg) {
          pick_deg = d;
          pick = v;
        }
      });
      out.push_back(pick);
      cand.reset(pick);
      cand.subtract(adj_[static_cast<std::size_t>(pick)]);
    }
    return out;
  }

  void search(Bitset cand, std::vector<int>& chosen) {
    const std::size_t mark = chosen.size();
    // Vertices of degree 0 or 1 belong to some maximum independent set.
    for (bool changed = true; changed;) {
      changed = false;
      cand.for_each([&](int v) {
        if (changed || !cand.test(v)) return;
        if (adj_[static_cast<std::size_t>(v)].count_and(cand) <= 1) {
          chosen.push_back(v);
          cand.reset(v);
          cand.subtract(adj_[static_cast<std::size_t>(v)]);
          changed = true;
        }
      });
    }

    if (!cand.any()) {
      if (static_cast<int>(chosen.size()) > best_size_) {
        best_ = chosen;
        best_size_ = static_cast<int>(chosen.size());
      }
      chosen.resize(mark);
      return;
    }

    // Every edge inside cand has an endpoint outside the independent set and
    // each such vertex covers at most max_deg edges.
    int size = 0, deg_sum = 0, max_deg = 0, pivot = -1;
    cand.for_each([&](int v) {
      int d = adj_[static_cast<std::size_t>(v)].count_and(cand);
      ++size;
      deg_sum += d;
      if (d > max_deg) {
        max_deg = d;
        pivot = v;
      }
    });
    int edges = deg_sum / 2;
    int bound = static_cast<int>(chosen.size()) + size - (edges + max_deg - 1) / max_deg;
    if (bound > best_size_) {
      Bitset with = cand;
      with.reset(pivot);
      with.subtract(adj_[static_cast<std::size_t>(pivot)]);
      chosen.push_back(pivot);
      search(with, chosen);
      chosen.pop_back();

      Bitset without = cand;
      without.reset(pivot);
      search(without, chosen);
    }
    chosen.resize(mark);
  }

  int n_;
  std::vector<Bitset> adj_;
  std::vector<int> best_;
  int best_size_ = 0;
};

}  // namespace detail

inline constexpr int kMaxExactSlots = 64;

struct StarvationResult {
  int sn = 0;
  std::vector<int> slots;  // a maximum independent set of the meeting graph
};

inline StarvationResult starvation_number(const MeetingGraph& mg, bool force = false) {
  if (mg.size() > kMaxExactSlots && !force)
    throw BoundError("meeting graph has " + std::to_string(mg.size()) +
                     " slots; exact search is limited to " +
                     std::to_string(kMaxExactSlots) + " without --force");
  if (mg.size() == 0) return {};
  StarvationResult r;
  r.slots = detail::MisSolver(mg).solve();
  r.sn = static_cast<int>(r.slots.size());
  return r;
}

inline int uncovering_resilience(const RingSet& rs) {
  if (rs.rings.empty()) throw ParameterError("empty ring set");
  int k = rs.rings.front().k;
  for (const Ring& r : rs.rings) k = std::min(k, r.k);
  return k - 1;
}

inline int isolation_resilience(int n, int sn) {
  if (sn < 1 || sn > n)
    throw ParameterError("starvation number must lie in [1, n]");
  return n - sn - 1;
}

// ---------------------------------------------------------------------------
// Closed forms for recognised topologies

struct ClosedForm {
  std::string kind;
  int rings = 0;
  int ur = 0;
  int sn_min = 0, sn_max = 0;  // equal when exact
  int ir_min = 0, ir_max = 0;

  bool exact() const { return sn_min == sn_max; }
};

// dims: chain/tree {n}; grid {rows, cols}; cycle {N(a), N(b)}, the two ring
// capacities.
inline ClosedForm closed_form(std::string_view kind, const std::vector<int>& dims) {
  auto need = [&](std::size_t count) {
    if (dims.size() != count || std::any_of(dims.begin(), dims.end(), [](int d) { return d < 1; }))
      throw ParameterError("closed form '" + std::string(kind) + "' expects " +
                           std::to_string(count) + " positive dimension(s)");
  };
  ClosedForm cf;
  cf.kind = std::string(kind);
  if (kind == "chain") {
    need(1);
    int n = dims[0];
    cf.rings = 1;
    cf.ur = n - 1;
    cf.sn_min = cf.sn_max = 1;
    cf.ir_min = cf.ir_max = n - 2;
  } else if (kind == "tree") {
    need(1);
    int n = dims[0];
    cf.rings = 1;
    cf.ur = n - 1;
    cf.sn_min = 1;
    cf.sn_max = std::max(1, n / 2);
    cf.ir_min = n - cf.sn_max - 1;
    cf.ir_max = n - 2;
  } else if (kind == "grid") {
    need(2);
    int n = dims[0], m = dims[1];
    int g = std::gcd(n, m);
    cf.rings = g;
    cf.ur = n * m / g - 1;
    cf.sn_min = cf.sn_max = std::min(n, m);
    cf.ir_min = cf.ir_max = n * m - std::min(n, m) - 1;
  } else if (kind == "cycle") {
    need(2);
    int a = dims[0], b = dims[1];
    cf.rings = 2;
    cf.ur = std::min(a, b) - 1;
    cf.sn_min = cf.sn_max = std::max(a, b);
    cf.ir_min = cf.ir_max = std::min(a, b) - 1;
  } else {
    throw ParameterError("unknown closed-form kind '" + std::string(kind) + "'");
  }
  return cf;
}

}  // namespace ringres

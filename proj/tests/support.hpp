#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ringres/ringres.hpp"

namespace support {

using namespace ringres;

inline Scenario chain(int n) {
  GenerateParams p;
  p.n = n;
  return generate(Topology::kChain, p);
}
inline Scenario grid(int rows, int cols) {
  GenerateParams p;
  p.rows = rows;
  p.cols = cols;
  return generate(Topology::kGrid, p);
}
inline Scenario cycle(int n) {
  GenerateParams p;
  p.n = n;
  return generate(Topology::kCycle, p);
}
inline Scenario star(int n) {
  GenerateParams p;
  p.n = n;
  return generate(Topology::kStar, p);
}
inline Scenario tree(int n, std::uint64_t seed) {
  GenerateParams p;
  p.n = n;
  p.seed = seed;
  return generate(Topology::kRandomTree, p);
}

inline Scenario abstract(int n, std::vector<AbstractEdge> edges) {
  Scenario s;
  s.abstract_mode = true;
  s.abstract_n = n;
  s.abstract_edges = std::move(edges);
  validate(s);
  return s;
}

// Four circles on the corners of a square.
inline Scenario square() { return rectangle_cycle(2, 2); }

inline SimModel model_of(const Scenario& s) {
  CommGraph g = build_comm_graph(s);
  FeasibilityReport f = solve_schedule(g);
  if (!f.feasible()) throw ParameterError("scenario not synchronizable");
  return build_model(g, f.schedule());
}

// Plain subset enumeration; only for small graphs.
inline int exhaustive_mis(const MeetingGraph& mg) {
  const int n = mg.size();
  int best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    int size = std::popcount(mask);
    if (size <= best) continue;
    bool independent = true;
    for (int v = 0; v < n && independent; ++v) {
      if (!(mask >> v & 1u)) continue;
      for (int w : mg.adj[static_cast<std::size_t>(v)])
        if (mask >> w & 1u) independent = false;
    }
    if (independent) best = size;
  }
  return best;
}

inline MeetingGraph random_graph(int n, double p, std::mt19937_64& rng) {
  MeetingGraph mg;
  mg.adj.resize(static_cast<std::size_t>(n));
  std::bernoulli_distribution coin(p);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) {
        mg.adj[static_cast<std::size_t>(a)].push_back(b);
        mg.adj[static_cast<std::size_t>(b)].push_back(a);
      }
  return mg;
}

inline bool is_independent(const MeetingGraph& mg, const std::vector<int>& set) {
  for (int v : set)
    for (int w : set)
      if (v != w && mg.has_edge(v, w)) return false;
  return true;
}

}  // namespace support

#pragma once

// Scenarios of unit-circle trajectories and the communication graph derived
// from them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ringres/angles.hpp"
#include "ringres/error.hpp"

namespace ringres {

struct Circle {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct AbstractEdge {
  int a = 0;
  int b = 0;
  double beta = 0.0;  // direction of the center line a -> b
};

// Either a set of unit circles with a communication range, or an abstract
// graph whose edges carry the center-line angle directly.
struct Scenario {
  std::vector<Circle> circles;  // circles[i].id == i once loaded
  double range = 0.0;
  bool abstract_mode = false;
  int abstract_n = 0;
  std::vector<AbstractEdge> abstract_edges;

  int size() const {
    return abstract_mode ? abstract_n : static_cast<int>(circles.size());
  }
};

struct Edge {
  int i = 0;  // i < j
  int j = 0;
  double beta = 0.0;    // angle of the vector i -> j, in [0, 2pi)
  double phi_ij = 0.0;  // link position on C_i
  double phi_ji = 0.0;  // link position on C_j
};

class CommGraph {
 public:
  CommGraph() = default;
  explicit CommGraph(int n) : n_(n), incident_(static_cast<std::size_t>(n)) {}

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  // Edge ids touching node v, in insertion order.
  const std::vector<int>& incident(int v) const {
    return incident_[static_cast<std::size_t>(v)];
  }
  int degree(int v) const { return static_cast<int>(incident(v).size()); }

  int other(int e, int v) const {
    const Edge& ed = edge(e);
    return ed.i == v ? ed.j : ed.i;
  }
  // Link position of edge e on trajectory v.
  double link_angle(int e, int v) const {
    const Edge& ed = edge(e);
    return ed.i == v ? ed.phi_ij : ed.phi_ji;
  }
  // Center-line angle of edge e seen from v towards its neighbor.
  double beta_from(int e, int v) const {
    const Edge& ed = edge(e);
    return ed.i == v ? ed.beta : normalize_angle(ed.beta + kPi);
  }

  // Adds edge {a, b} whose center line a -> b has angle beta_ab.
  int add_edge(int a, int b, double beta_ab) {
    if (a == b) throw ValidationError("self-loop on node " + std::to_string(a));
    if (a < 0 || b < 0 || a >= n_ || b >= n_)
      throw ValidationError("edge endpoint out of range");
    Edge e;
    if (a < b) {
      e.i = a;
      e.j = b;
      e.beta = normalize_angle(beta_ab);
    } else {
      e.i = b;
      e.j = a;
      e.beta = normalize_angle(beta_ab + kPi);
    }
    e.phi_ij = e.beta;
    e.phi_ji = normalize_angle(e.beta + kPi);
    int id = static_cast<int>(edges_.size());
    edges_.push_back(e);
    incident_[static_cast<std::size_t>(e.i)].push_back(id);
    incident_[static_cast<std::size_t>(e.j)].push_back(id);
    return id;
  }

  int find_edge(int a, int b) const {
    for (int e : incident(a))
      if (other(e, a) == b) return e;
    return -1;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

// ---------------------------------------------------------------------------
// Loading and validation

namespace detail {

inline void reject_unknown(const nlohmann::json& obj,
                           std::initializer_list<std::string_view> allowed,
                           std::string_view where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](std::string_view k) { return k == it.key(); });
    if (!ok)
      throw ParseError("unknown field '" + it.key() + "' in " +
                       std::string(where));
  }
}

inline double get_number(const nlohmann::json& obj, const char* key,
                         std::string_view where) {
  if (!obj.contains(key) || !obj.at(key).is_number())
    throw ParseError(std::string("missing or non-numeric '") + key + "' in " +
                     std::string(where));
  double v = obj.at(key).get<double>();
  if (!std::isfinite(v))
    throw ParseError(std::string("non-finite '") + key + "'");
  return v;
}

inline long long get_int(const nlohmann::json& obj, const char* key,
                         std::string_view where) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer())
    throw ParseError(std::string("missing or non-integer '") + key + "' in " +
                     std::string(where));
  return obj.at(key).get<long long>();
}

}  // namespace detail

// Checks the structural invariants of a scenario. Throws ValidationError.
inline void validate(const Scenario& s) {
  if (s.abstract_mode) {
    if (s.abstract_n < 1) throw ValidationError("abstract scenario needs n >= 1");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : s.abstract_edges) {
      if (e.a < 0 || e.b < 0 || e.a >= s.abstract_n || e.b >= s.abstract_n)
        throw ValidationError("edge endpoint out of range");
      if (e.a == e.b)
        throw ValidationError("self-loop on node " + std::to_string(e.a));
      auto key = std::minmax(e.a, e.b);
      if (!seen.insert(key).second)
        throw ValidationError("duplicate edge " + std::to_string(key.first) +
                              "-" + std::to_string(key.second));
    }
    return;
  }
  if (s.circles.empty()) throw ValidationError("scenario has no circles");
  if (!(s.range >= 0.0)) throw ValidationError("range must be >= 0");
  for (std::size_t a = 0; a < s.circles.size(); ++a) {
    if (s.circles[a].id != static_cast<int>(a))
      throw ValidationError("circle ids must be 0..n-1");
    for (std::size_t b = a + 1; b < s.circles.size(); ++b) {
      double d = std::hypot(s.circles[b].x - s.circles[a].x,
                            s.circles[b].y - s.circles[a].y);
      if (d <= 2.0 + kAngleTol)
        throw ValidationError("circles " + std::to_string(a) + " and " +
                              std::to_string(b) +
                              " are not disjoint (center distance <= 2)");
    }
  }
}

// Parses a scenario document. Ids are renumbered to 0..n-1 by ascending
// original id.
inline Scenario load_scenario(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");

  Scenario s;
  if (doc.contains("abstract")) {
    detail::reject_unknown(doc, {"abstract", "n", "edges"}, "scenario");
    if (!doc.at("abstract").is_boolean() || !doc.at("abstract").get<bool>())
      throw ParseError("'abstract' must be true when present");
    s.abstract_mode = true;
    long long n = detail::get_int(doc, "n", "scenario");
    if (n < 1 || n > 1'000'000) throw ValidationError("n out of range");
    s.abstract_n = static_cast<int>(n);
    if (!doc.contains("edges") || !doc.at("edges").is_array())
      throw ParseError("'edges' must be an array");
    for (const auto& e : doc.at("edges")) {
      if (!e.is_object()) throw ParseError("edge must be an object");
      detail::reject_unknown(e, {"a", "b", "beta"}, "edge");
      AbstractEdge ae;
      ae.a = static_cast<int>(detail::get_int(e, "a", "edge"));
      ae.b = static_cast<int>(detail::get_int(e, "b", "edge"));
      ae.beta = detail::get_number(e, "beta", "edge");
      s.abstract_edges.push_back(ae);
    }
    validate(s);
    return s;
  }

  detail::reject_unknown(doc, {"range", "circles"}, "scenario");
  s.range = detail::get_number(doc, "range", "scenario");
  if (!doc.contains("circles") || !doc.at("circles").is_array())
    throw ParseError("'circles' must be an array");
  std::vector<Circle> raw;
  for (const auto& c : doc.at("circles")) {
    if (!c.is_object()) throw ParseError("circle must be an object");
    detail::reject_unknown(c, {"id", "x", "y"}, "circle");
    Circle circ;
    circ.id = static_cast<int>(detail::get_int(c, "id", "circle"));
    circ.x = detail::get_number(c, "x", "circle");
    circ.y = detail::get_number(c, "y", "circle");
    raw.push_back(circ);
  }
  std::sort(raw.begin(), raw.end(),
            [](const Circle& a, const Circle& b) { return a.id < b.id; });
  for (std::size_t k = 1; k < raw.size(); ++k)
    if (raw[k].id == raw[k - 1].id)
      throw ValidationError("duplicate circle id " + std::to_string(raw[k].id));
  for (std::size_t k = 0; k < raw.size(); ++k) raw[k].id = static_cast<int>(k);
  s.circles = std::move(raw);
  validate(s);
  return s;
}

inline nlohmann::json to_json(const Scenario& s) {
  nlohmann::json j;
  if (s.abstract_mode) {
    j["abstract"] = true;
    j["n"] = s.abstract_n;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : s.abstract_edges)
      j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"beta", e.beta}});
  } else {
    j["range"] = s.range;
    j["circles"] = nlohmann::json::array();
    for (const auto& c : s.circles)
      j["circles"].push_back({{"id", c.id}, {"x", c.x}, {"y", c.y}});
  }
  return j;
}

// ---------------------------------------------------------------------------
// Communication graph

inline CommGraph build_comm_graph(const Scenario& s) {
  CommGraph g(s.size());
  if (s.abstract_mode) {
    for (const auto& e : s.abstract_edges) g.add_edge(e.a, e.b, e.beta);
    return g;
  }
  const double reach = 2.0 + s.range + kAngleTol;
  for (std::size_t a = 0; a < s.circles.size(); ++a) {
    for (std::size_t b = a + 1; b < s.circles.size(); ++b) {
      double dx = s.circles[b].x - s.circles[a].x;
      double dy = s.circles[b].y - s.circles[a].y;
      if (std::hypot(dx, dy) <= reach)
        g.add_edge(static_cast<int>(a), static_cast<int>(b),
                   std::atan2(dy, dx));
    }
  }
  return g;
}

// Connected components, each sorted ascending, ordered by smallest member.
inline std::vector<std::vector<int>> connected_components(const CommGraph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.size()), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.size(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::queue<int> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = id;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      out.back().push_back(v);
      for (int e : g.incident(v)) {
        int w = g.other(e, v);
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = id;
          q.push(w);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// Subgraph induced by `nodes`, renumbered in the given order.
inline CommGraph induced_subgraph(const CommGraph& g,
                                  const std::vector<int>& nodes) {
  std::map<int, int> index;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    index[nodes[k]] = static_cast<int>(k);
  CommGraph sub(static_cast<int>(nodes.size()));
  for (const Edge& e : g.edges()) {
    auto a = index.find(e.i), b = index.find(e.j);
    if (a != index.end() && b != index.end())
      sub.add_edge(a->second, b->second, e.beta);
  }
  return sub;
}

// ---------------------------------------------------------------------------
// Generators

enum class Topology { kChain, kCycle, kGrid, kStar, kRandomTree };

inline Topology parse_topology(std::string_view name) {
  if (name == "chain") return Topology::kChain;
  if (name == "cycle") return Topology::kCycle;
  if (name == "grid") return Topology::kGrid;
  if (name == "star") return Topology::kStar;
  if (name == "random_tree") return Topology::kRandomTree;
  throw ParameterError("unknown generator kind '" + std::string(name) + "'");
}

struct GenerateParams {
  int n = 4;      // node count for chain, cycle, star, random_tree
  int rows = 2;   // grid
  int cols = 2;   // grid
  double spacing = 2.2;
  double range = 0.5;
  std::uint64_t seed = 1;
};

namespace detail {

using Cell = std::pair<int, int>;

inline Scenario from_points(const std::vector<std::pair<double, double>>& pts,
                            double range) {
  Scenario s;
  s.range = range;
  for (std::size_t k = 0; k < pts.size(); ++k)
    s.circles.push_back({static_cast<int>(k), pts[k].first, pts[k].second});
  return s;
}

inline std::vector<std::pair<double, double>> lattice_points(
    const std::vector<Cell>& cells, double d) {
  std::vector<std::pair<double, double>> pts;
  for (auto [cx, cy] : cells) pts.emplace_back(cx * d, cy * d);
  return pts;
}

// Cells of the perimeter of a rows x cols rectangle, walked counterclockwise.
inline std::vector<Cell> rectangle_perimeter(int rows, int cols) {
  std::vector<Cell> cells;
  for (int x = 0; x < cols; ++x) cells.emplace_back(x, 0);
  for (int y = 1; y < rows; ++y) cells.emplace_back(cols - 1, y);
  for (int x = cols - 2; x >= 0; --x) cells.emplace_back(x, rows - 1);
  for (int y = rows - 2; y >= 1; --y) cells.emplace_back(0, y);
  return cells;
}

inline std::vector<Cell> random_lattice_tree(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<Cell> used{{0, 0}};
  std::vector<Cell> order{{0, 0}};
  const Cell steps[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  auto occupied_neighbors = [&](Cell c) {
    int k = 0;
    for (auto [dx, dy] : steps) k += used.count({c.first + dx, c.second + dy});
    return k;
  };
  while (static_cast<int>(order.size()) < n) {
    // Frontier cells touching exactly one placed cell keep the graph a tree.
    std::set<Cell> frontier;
    for (const Cell& c : order)
      for (auto [dx, dy] : steps) {
        Cell nb{c.first + dx, c.second + dy};
        if (!used.count(nb) && occupied_neighbors(nb) == 1) frontier.insert(nb);
      }
    std::vector<Cell> cand(frontier.begin(), frontier.end());
    Cell pick = cand[static_cast<std::size_t>(rng() % cand.size())];
    used.insert(pick);
    order.push_back(pick);
  }
  return order;
}

}  // namespace detail

// Builds a scenario whose communication graph is exactly the requested
// topology. Throws ParameterError when the spacing/range band does not admit
// it.
inline Scenario generate(Topology kind, const GenerateParams& p) {
  const double d = p.spacing, r = p.range;
  if (!(r >= 0.0)) throw ParameterError("range must be >= 0");
  if (!(d > 2.0 + kAngleTol) || d > 2.0 + r + kAngleTol)
    throw ParameterError("spacing must satisfy 2 < d <= 2 + range");
  const bool lattice = kind != Topology::kStar && kind != Topology::kChain;
  if (lattice && d * std::sqrt(2.0) <= 2.0 + r + kAngleTol)
    throw ParameterError("spacing*sqrt(2) must exceed 2 + range");

  std::vector<std::pair<double, double>> pts;
  std::vector<std::pair<int, int>> want;  // expected edges
  switch (kind) {
    case Topology::kChain: {
      if (p.n < 1) throw ParameterError("chain needs n >= 1");
      for (int k = 0; k < p.n; ++k) pts.emplace_back(k * d, 0.0);
      for (int k = 0; k + 1 < p.n; ++k) want.emplace_back(k, k + 1);
      break;
    }
    case Topology::kGrid: {
      if (p.rows < 1 || p.cols < 1) throw ParameterError("grid needs dims >= 1");
      for (int row = 0; row < p.rows; ++row)
        for (int col = 0; col < p.cols; ++col) {
          pts.emplace_back(col * d, -row * d);
          int id = row * p.cols + col;
          if (col + 1 < p.cols) want.emplace_back(id, id + 1);
          if (row + 1 < p.rows) want.emplace_back(id, id + p.cols);
        }
      break;
    }
    case Topology::kCycle: {
      if (p.n < 3) throw ParameterError("cycle needs n >= 3");
      if (p.n == 4 || (p.n % 2 == 0 && p.n >= 8)) {
        int half = p.n / 2 + 2;  // rows + cols
        int rows = p.n == 4 ? 2 : std::max(3, half / 2);
        int cols = half - rows;
        pts = detail::lattice_points(detail::rectangle_perimeter(rows, cols), d);
      } else {
        // Regular polygon with side d.
        double radius = d / (2.0 * std::sin(kPi / p.n));
        for (int k = 0; k < p.n; ++k) {
          double a = kTwoPi * k / p.n - kPi / 2.0 - kPi / p.n;
          pts.emplace_back(radius * std::cos(a), radius * std::sin(a));
        }
      }
      for (int k = 0; k < p.n; ++k) want.emplace_back(k, (k + 1) % p.n);
      break;
    }
    case Topology::kStar: {
      if (p.n < 1) throw ParameterError("star needs n >= 1");
      pts.emplace_back(0.0, 0.0);
      for (int k = 1; k < p.n; ++k) {
        double a = kTwoPi * (k - 1) / (p.n - 1);
        pts.emplace_back(d * std::cos(a), d * std::sin(a));
        want.emplace_back(0, k);
      }
      break;
    }
    case Topology::kRandomTree: {
      if (p.n < 1) throw ParameterError("random_tree needs n >= 1");
      auto cells = detail::random_lattice_tree(p.n, p.seed);
      pts = detail::lattice_points(cells, d);
      for (std::size_t a = 0; a < cells.size(); ++a)
        for (std::size_t b = a + 1; b < cells.size(); ++b)
          if (std::abs(cells[a].first - cells[b].first) +
                  std::abs(cells[a].second - cells[b].second) ==
              1)
            want.emplace_back(static_cast<int>(a), static_cast<int>(b));
      break;
    }
  }

  Scenario s = detail::from_points(pts, r);
  try {
    validate(s);
  } catch (const ValidationError& e) {
    throw ParameterError(std::string("generated layout invalid: ") + e.what());
  }
  std::set<std::pair<int, int>> expected;
  for (auto [a, b] : want) expected.insert(std::minmax(a, b));
  std::set<std::pair<int, int>> got;
  const CommGraph built = build_comm_graph(s);
  for (const Edge& e : built.edges()) got.insert({e.i, e.j});
  if (got != expected)
    throw ParameterError("spacing/range produce unintended edges for this layout");
  return s;
}

// Cycle laid out on the border cells of a rows x cols lattice rectangle.
// Needs rows, cols >= 3 (or 2 x 2) so no interior edge appears.
inline Scenario rectangle_cycle(int rows, int cols, double spacing = 2.2, double range = 0.5) {
  if (!((rows >= 3 && cols >= 3) || (rows == 2 && cols == 2)))
    throw ParameterError("rectangle cycle needs rows, cols >= 3 or a 2 x 2 square");
  if (!(spacing > 2.0 + kAngleTol) || spacing > 2.0 + range + kAngleTol ||
      spacing * std::sqrt(2.0) <= 2.0 + range + kAngleTol)
    throw ParameterError("spacing must satisfy 2 < d <= 2 + range < d*sqrt(2)");
  Scenario s = detail::from_points(
      detail::lattice_points(detail::rectangle_perimeter(rows, cols), spacing), range);
  validate(s);
  return s;
}

inline Scenario rotated(const Scenario& s, double angle) {
  Scenario out = s;
  const double c = std::cos(angle), sn = std::sin(angle);
  for (auto& circ : out.circles) {
    double x = circ.x * c - circ.y * sn;
    double y = circ.x * sn + circ.y * c;
    circ.x = x;
    circ.y = y;
  }
  for (auto& e : out.abstract_edges) e.beta = normalize_angle(e.beta + angle);
  return out;
}

}  // namespace ringres

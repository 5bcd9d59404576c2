// ringres: command-line front end.
//
// Exit codes: 0 success, 1 infeasible scenario (witness printed),
// 2 invalid input or arguments, 3 internal error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringres/ringres.hpp"

namespace {

using namespace ringres;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kInvalid = 2;
constexpr int kInternal = 3;

struct Common {
  std::string input;
  std::string format = "table";
  bool json_flag = false;
  bool force = false;
  int root = -1;

  bool as_json() const { return json_flag || format == "json"; }
};

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k]);
  return s;
}

std::string fixed(double v, int prec = 3) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(prec) << v;
  return ss.str();
}

Analysis load_and_analyze(const Common& c, bool reverse = false) {
  Scenario s = load_scenario(read_input(c.input));
  AnalyzeOptions opt;
  opt.force = c.force;
  opt.root = c.root;
  opt.reverse = reverse;
  return analyze(s, opt);
}

// Prints witnesses of infeasible components on stderr; true if any.
bool report_infeasible(const Analysis& a) {
  bool bad = false;
  for (const auto& comp : a.components) {
    if (comp.feasibility.feasible()) continue;
    bad = true;
    json w = witness_json(comp.feasibility, comp.nodes);
    std::cerr << "infeasible: " << w["kind"].get<std::string>() << " through "
              << join(w["cycle"].get<std::vector<int>>());
    if (w.contains("residual")) std::cerr << " (residual " << w["residual"].get<double>() << " rad)";
    std::cerr << '\n';
  }
  return bad;
}

void print_ring_table(std::ostream& os, const RingSet& rs, const std::vector<int>& ids) {
  os << "  ring   k  length/pi  arcs\n";
  for (const Ring& r : rs.rings) {
    os << "  " << std::setw(4) << r.id << std::setw(4) << r.k << std::setw(11) << fixed(r.length / kPi)
       << "  ";
    for (std::size_t k = 0; k < r.arcs.size(); ++k) {
      const Arc& arc = r.arcs[k];
      os << (k ? " " : "") << ids[static_cast<std::size_t>(arc.trajectory)] << '['
         << fixed(arc.start) << (arc.direction > 0 ? "+" : "-") << fixed(arc.length) << ']';
    }
    os << '\n';
  }
}

std::string expected_line(const ClosedForm& cf, const std::vector<int>& dims) {
  std::ostringstream os;
  os << cf.kind;
  if (cf.kind == "grid") os << ' ' << dims[0] << 'x' << dims[1];
  else if (cf.kind == "cycle") os << " N(a)=" << dims[0] << " N(b)=" << dims[1];
  else os << " n=" << dims[0];
  os << ": rings=" << cf.rings << " UR=" << cf.ur;
  if (cf.exact())
    os << " SN=" << cf.sn_min << " IR=" << cf.ir_min;
  else
    os << " SN in [" << cf.sn_min << "," << cf.sn_max << "] IR in [" << cf.ir_min << "," << cf.ir_max << "]";
  return os.str();
}

void print_analysis_table(std::ostream& os, const Analysis& a, bool with_rings) {
  os << "trajectories " << a.n() << ", edges " << a.graph.edges().size() << ", components "
     << a.components.size() << '\n';
  for (std::size_t ci = 0; ci < a.components.size(); ++ci) {
    const auto& c = a.components[ci];
    os << "component " << ci << ": {" << join(c.nodes) << "}, " << c.graph.edges().size() << " edges, ";
    if (!c.feasibility.feasible()) {
      os << "not synchronizable\n";
      continue;
    }
    os << "synchronizable\n";
    if (with_rings) print_ring_table(os, c.model->rings, c.nodes);
    os << "  UR " << c.ur << "  SN " << c.sn << "  IR " << c.ir << "  (starving set {" << join(c.sn_robots)
       << "}, " << c.slots->slot_count() << " slots, " << c.meeting->edge_count() << " meeting edges)\n";
    if (c.expected) {
      os << "  expected " << expected_line(*c.expected, c.topology.dims)
         << (c.mismatches.empty() ? "  [match]" : "  [MISMATCH]") << '\n';
    }
    for (const auto& m : c.mismatches) os << "  mismatch: " << m << '\n';
  }
  if (a.feasible() && a.components.size() > 1)
    os << "system: UR " << a.ur() << "  SN " << a.sn() << "  IR " << a.ir() << '\n';
}

// ---------------------------------------------------------------------------

int cmd_generate(const std::string& kind, GenerateParams p, bool seed_given, const std::string& out) {
  if (!seed_given) {
    if (const char* env = std::getenv("RING_RESILIENCE_SEED")) {
      try {
        std::size_t used = 0;
        p.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::logic_error&) {
        throw ParameterError(std::string("RING_RESILIENCE_SEED is not an unsigned integer: ") + env);
      }
    }
  }
  Scenario s = generate(parse_topology(kind), p);
  write_output(out, to_json(s).dump(2) + "\n");
  return kOk;
}

int cmd_analyze(const Common& c) {
  Analysis a = load_and_analyze(c);
  bool bad = report_infeasible(a);
  if (c.as_json())
    std::cout << analysis_json(a).dump(2) << '\n';
  else
    print_analysis_table(std::cout, a, true);
  for (const auto& m : a.mismatches()) std::cerr << "warning: " << m << '\n';
  return bad ? kInfeasible : kOk;
}

int cmd_schedule(const Common& c, const std::string& verify_path, const std::string& out) {
  Scenario s = load_scenario(read_input(c.input));
  CommGraph g = build_comm_graph(s);
  if (!verify_path.empty()) {
    Schedule sched = schedule_from_json(json::parse(read_input(verify_path), nullptr, false));
    VerifyReport rep = verify_schedule(g, sched);
    json fails = json::array();
    for (const auto& f : rep.failures) {
      const Edge& e = g.edge(f.edge);
      fails.push_back({{"edge", {e.i, e.j}}, {"phase_ok", f.phase_ok}, {"direction_ok", f.direction_ok},
                       {"residual", f.residual}});
      std::cerr << "edge (" << e.i << "," << e.j << ") fails:" << (f.phase_ok ? "" : " phase")
                << (f.direction_ok ? "" : " direction") << " residual " << f.residual << '\n';
    }
    if (c.as_json()) std::cout << json{{"ok", rep.ok()}, {"failures", fails}}.dump(2) << '\n';
    else std::cout << (rep.ok() ? "schedule verifies on all " : "schedule fails on some of ")
                   << g.edges().size() << " edges\n";
    return rep.ok() ? kOk : kInfeasible;
  }
  Analysis a;
  a.scenario = s;
  a.graph = g;
  for (auto& comp : connected_components(g)) {
    ComponentReport r;
    r.nodes = comp;
    r.graph = induced_subgraph(g, comp);
    r.feasibility = solve_schedule(r.graph, c.root >= r.graph.size() ? -1 : c.root);
    if (r.feasibility.feasible()) r.model = SimModel{r.graph, r.feasibility.schedule(), {}};
    a.components.push_back(std::move(r));
  }
  if (report_infeasible(a)) return kInfeasible;
  Schedule sched = global_schedule(a);
  if (c.as_json() || !out.empty()) {
    write_output(out, to_json(sched).dump(2) + "\n");
  } else {
    std::cout << "trajectory        f(rad)     f/pi   g\n";
    for (int i = 0; i < sched.size(); ++i)
      std::cout << std::setw(10) << i << std::setw(14) << fixed(sched.f[static_cast<std::size_t>(i)], 6)
                << std::setw(9) << fixed(sched.f[static_cast<std::size_t>(i)] / kPi) << std::setw(4)
                << (sched.g[static_cast<std::size_t>(i)] > 0 ? "+1" : "-1") << '\n';
  }
  return kOk;
}

int cmd_rings(const Common& c, const std::string& svg) {
  Analysis a = load_and_analyze(c);
  if (report_infeasible(a)) return kInfeasible;
  if (c.as_json()) {
    json comps = json::array();
    for (const auto& comp : a.components)
      comps.push_back({{"nodes", comp.nodes}, {"rings", rings_json(comp.model->rings, comp.nodes)}});
    std::cout << json{{"components", comps}}.dump(2) << '\n';
  } else {
    for (std::size_t ci = 0; ci < a.components.size(); ++ci) {
      std::cout << "component " << ci << " {" << join(a.components[ci].nodes) << "}\n";
      print_ring_table(std::cout, a.components[ci].model->rings, a.components[ci].nodes);
    }
  }
  if (!svg.empty()) write_output(svg, render_svg(a));
  return kOk;
}

int cmd_resilience(const Common& c) {
  Analysis a = load_and_analyze(c);
  if (report_infeasible(a)) return kInfeasible;
  json j = analysis_json(a);
  // Table format appends the human summary after the JSON.
  std::cout << j.dump(2) << '\n';
  if (!c.as_json()) {
    std::cout << '\n';
    print_analysis_table(std::cout, a, false);
  }
  return kOk;
}

int cmd_simulate(const Common& c, const std::string& fail, double fail_at, const std::string& horizon,
                 const std::string& trace_path) {
  Analysis a = load_and_analyze(c);
  if (report_infeasible(a)) return kInfeasible;
  SimModel model = global_model(a);
  FailurePlan plan = parse_failure_plan(fail, fail_at);
  SimOptions opt;
  if (horizon != "auto") {
    try {
      std::size_t used = 0;
      opt.horizon = std::stod(horizon, &used);
      if (used != horizon.size() || !(opt.horizon > 0.0)) throw std::invalid_argument(horizon);
    } catch (const std::logic_error&) {
      throw ParameterError("--horizon must be 'auto' or a positive number of periods");
    }
  }
  SimTrace tr = simulate(model, plan, opt);
  if (tr.truncated) std::cerr << "warning: event cap reached, trace truncated at " << opt.max_events << " events\n";
  auto cov = coverage_report(model, tr);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw ParseError("cannot write '" + trace_path + "'");
    write_trace_csv(out, tr);
  }
  std::size_t meetings = 0, switches = 0;
  for (const auto& ev : tr.events) {
    meetings += ev.kind == EventKind::kMeeting;
    switches += ev.kind == EventKind::kSwitch;
  }
  if (c.as_json()) {
    json robots = json::array();
    for (int r = 0; r < tr.n; ++r)
      robots.push_back({{"robot", r},
                        {"alive", static_cast<bool>(tr.alive[static_cast<std::size_t>(r)])},
                        {"trajectory", tr.final_trajectory[static_cast<std::size_t>(r)]},
                        {"meetings", tr.meetings[static_cast<std::size_t>(r)]},
                        {"starving", static_cast<bool>(tr.starving[static_cast<std::size_t>(r)])}});
    json covj = json::array();
    for (const auto& e : cov)
      covj.push_back({{"trajectory", e.trajectory}, {"covered", e.by_rings}, {"swept", e.by_sweep}});
    std::cout << json{{"window", {tr.window_start, tr.end}},
                      {"period", tr.period},
                      {"events", tr.event_count},
                      {"meetings", meetings},
                      {"switches", switches},
                      {"starvation_state", tr.starvation_state()},
                      {"robots", robots},
                      {"coverage", covj}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "window [" << fixed(tr.window_start) << ", " << fixed(tr.end) << ") periods, dynamics period "
              << tr.period << ", " << tr.event_count << " events, " << meetings << " meetings, " << switches
              << " switches\n";
    std::cout << "robot  alive  trajectory  meetings  starving\n";
    for (int r = 0; r < tr.n; ++r) {
      auto k = static_cast<std::size_t>(r);
      std::cout << std::setw(5) << r << std::setw(7) << (tr.alive[k] ? "yes" : "no") << std::setw(12)
                << tr.final_trajectory[k] << std::setw(10) << tr.meetings[k] << std::setw(10)
                << (tr.alive[k] ? (tr.starving[k] ? "yes" : "no") : "-") << '\n';
    }
    std::cout << "uncovered trajectories: {";
    bool first = true;
    for (const auto& e : cov)
      if (!e.by_rings) {
        std::cout << (first ? "" : " ") << e.trajectory;
        first = false;
      }
    std::cout << "}\n";
    std::cout << "starvation state: " << (tr.starvation_state() ? "yes" : "no") << '\n';
  }
  return kOk;
}

int cmd_oracle(const Common& c, int max_fail, int max_n, int jobs) {
  Analysis a = load_and_analyze(c);
  if (report_infeasible(a)) return kInfeasible;
  SimModel model = global_model(a);
  OracleOptions opt;
  opt.max_fail = max_fail;
  opt.max_n = max_n;
  opt.jobs = jobs > 0 ? jobs : default_jobs();
  OracleResult sn = brute_force_sn(model, opt);
  OracleResult ur = brute_force_ur(model, opt);
  const int n = a.n();
  // A capped sweep can only confirm values within its reach.
  bool sn_ok = sn.complete ? sn.value == a.sn() : a.sn() < n - std::max(0, max_fail);
  bool ur_ok = ur.complete ? ur.value == a.ur() : a.ur() >= max_fail;
  if (c.as_json()) {
    json j = {{"n", n},
              {"engine", {{"sn", a.sn()}, {"ur", a.ur()}, {"ir", a.ir()}}},
              {"oracle",
               {{"sn", sn.complete ? json(sn.value) : json(nullptr)},
                {"sn_failed_set", sn.witness},
                {"ur", ur.complete ? json(ur.value) : json(nullptr)},
                {"ur_failed_set", ur.witness}}},
              {"agree", sn_ok && ur_ok}};
    std::cout << j.dump(2) << '\n';
  } else {
    auto show = [](const OracleResult& r) { return r.complete ? std::to_string(r.value) : std::string("beyond cap"); };
    std::cout << "measure  engine  oracle  agree\n";
    std::cout << "SN     " << std::setw(8) << a.sn() << std::setw(8) << show(sn) << std::setw(7)
              << (sn_ok ? "yes" : "NO") << '\n';
    std::cout << "UR     " << std::setw(8) << a.ur() << std::setw(8) << show(ur) << std::setw(7)
              << (ur_ok ? "yes" : "NO") << '\n';
    if (sn.complete) std::cout << "starvation reached by failing {" << join(sn.witness) << "}\n";
    if (ur.complete) std::cout << "a trajectory is uncovered after failing {" << join(ur.witness) << "}\n";
  }
  if (!sn_ok || !ur_ok) {
    std::cerr << "engine and oracle disagree\n";
    return kInternal;
  }
  return kOk;
}

int cmd_render(const Common& c, const std::string& out) {
  Analysis a = load_and_analyze(c);
  report_infeasible(a);
  write_output(out, render_svg(a));
  return kOk;
}

void add_common(CLI::App* sub, Common& c, bool needs_input = true) {
  if (needs_input) sub->add_option("input", c.input, "scenario JSON file, '-' for stdin")->required();
  auto* fmt = sub->add_option("--format", c.format, "output format")
                  ->check(CLI::IsMember({"table", "json"}));
  sub->add_flag("--json", c.json_flag, "shorthand for --format json")->excludes(fmt);
  sub->add_option("--root", c.root, "propagation root within each component")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronized patrol analyzer: schedules, rings, resilience and simulation"};
  app.require_subcommand(1);
  Common c;

  std::string kind = "grid", out;
  GenerateParams gp;
  auto* gen = app.add_subcommand("generate", "write a scenario of a named topology");
  gen->add_option("--kind", kind, "chain|cycle|grid|star|random_tree")->required();
  gen->add_option("--n", gp.n, "trajectory count (chain, cycle, star, random_tree)");
  gen->add_option("--rows", gp.rows, "grid rows");
  gen->add_option("--cols", gp.cols, "grid columns");
  gen->add_option("--spacing", gp.spacing, "center spacing");
  gen->add_option("--range", gp.range, "communication range r");
  auto* seed_opt = gen->add_option("--seed", gp.seed, "random_tree seed");
  gen->add_option("-o,--output", out, "output path (stdout if omitted)");

  auto* ana = app.add_subcommand("analyze", "graph stats, feasibility, rings, UR/SN/IR");
  add_common(ana, c);
  ana->add_flag("--force", c.force, "run exact search above 64 slots");

  std::string verify;
  auto* sch = app.add_subcommand("schedule", "compute or verify a synchronization schedule");
  add_common(sch, c);
  auto* verify_opt = sch->add_option("--verify", verify, "schedule JSON to check instead of solving");
  sch->add_option("-o,--output", out, "write the schedule JSON here")->excludes(verify_opt);

  std::string svg;
  auto* rin = app.add_subcommand("rings", "ring decomposition");
  add_common(rin, c);
  rin->add_option("--svg", svg, "also render an SVG figure");

  auto* res = app.add_subcommand("resilience", "resilience report");
  add_common(res, c);
  res->add_flag("--force", c.force, "run exact search above 64 slots");

  std::string fail, horizon = "auto", trace;
  double fail_at = 0.0;
  auto* sim = app.add_subcommand("simulate", "event simulation with failures");
  add_common(sim, c);
  sim->add_option("--fail", fail, "failures as ROBOT[@TIME],...");
  sim->add_option("--fail-at", fail_at, "time for failures given without @TIME")->check(CLI::NonNegativeNumber);
  sim->add_option("--horizon", horizon, "'auto' or periods");
  sim->add_option("--trace", trace, "write the event trace CSV here");

  int max_fail = -1, max_n = 12, jobs = 0;
  auto* ora = app.add_subcommand("oracle", "compare engine UR/SN with brute-force simulation");
  add_common(ora, c);
  ora->add_option("--max-fail", max_fail, "largest failed set to enumerate")->check(CLI::NonNegativeNumber);
  ora->add_option("--max-n", max_n, "refuse scenarios with more trajectories")->check(CLI::PositiveNumber);
  ora->add_option("--jobs", jobs, "worker threads")->check(CLI::NonNegativeNumber);
  ora->add_flag("--force", c.force, "run exact search above 64 slots");

  auto* ren = app.add_subcommand("render", "SVG figure of trajectories and rings");
  add_common(ren, c);
  ren->add_option("-o,--output", out, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*gen) return cmd_generate(kind, gp, seed_opt->count() > 0, out);
    if (*ana) return cmd_analyze(c);
    if (*sch) return cmd_schedule(c, verify, out);
    if (*rin) return cmd_rings(c, svg);
    if (*res) return cmd_resilience(c);
    if (*sim) return cmd_simulate(c, fail, fail_at, horizon, trace);
    if (*ora) return cmd_oracle(c, max_fail, max_n, jobs);
    if (*ren) return cmd_render(c, out);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

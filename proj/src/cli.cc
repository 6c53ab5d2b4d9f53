#include "gasnet/cli.h"

#include <charconv>
#include <fstream>
#include <memory>
#include <ostream>

#include "CLI11.hpp"
#include "gasnet/dom.h"
#include "gasnet/network_io.h"
#include "gasnet/preprocess.h"
#include "gasnet/report.h"
#include "gasnet/restoration.h"
#include "gasnet/significance.h"

namespace gasnet {

namespace {

std::optional<std::size_t> as_index(const std::string& s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string display(const Network& net, NodeIndex j) {
  const auto& n = net.node(j).name;
  return n.empty() ? std::to_string(j) : n;
}

struct SweepFlags {
  bool weighted = false;
  std::string zero_outage = "exclude";
  bool joint = false;
  std::size_t jobs = 1;
  bool use_costs = false;
  std::string scenario_set = "edges";
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_flag("--weighted", f.weighted, "Also average with edge failure probabilities");
  cmd->add_option("--zero-outage", f.zero_outage, "Scenarios without outage: exclude or zero")
      ->check(CLI::IsMember({"exclude", "zero"}));
  cmd->add_flag("--joint", f.joint, "Also activate all reservoirs together");
  cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--use-costs", f.use_costs, "Weight line usage by transfer costs");
  cmd->add_option("--scenarios", f.scenario_set, "Scenario set: edges, nodes or both")
      ->check(CLI::IsMember({"edges", "nodes", "both"}));
}

std::pair<std::vector<ScenarioResult>, SignificanceReport> run_sweep(const NetworkDocument& doc,
                                                                     const SweepFlags& f) {
  std::vector<Scenario> scenarios;
  if (f.scenario_set != "nodes") scenarios = n_minus_one_scenarios(doc.network);
  if (f.scenario_set != "edges") {
    for (NodeIndex j = 0; j < doc.network.node_count(); ++j) {
      scenarios.push_back(Scenario::node_failure(doc.network, j));
    }
  }
  SweepOptions opts;
  opts.joint = f.joint;
  opts.jobs = f.jobs;
  opts.restoration.use_costs = f.use_costs;
  auto results = scenario_sweep(doc.network, doc.nom, scenarios, opts);
  SignificanceOptions sig;
  sig.weighted = f.weighted;
  sig.zero_outage = f.zero_outage == "zero" ? ZeroOutagePolicy::kZero : ZeroOutagePolicy::kExclude;
  auto report = significance_measure(results, sig);
  return {std::move(results), std::move(report)};
}

}  // namespace

EdgeIndex resolve_edge(const Network& net, const std::string& selector) {
  for (const auto& e : net.edges()) {
    if (!e.name.empty() && e.name == selector) return e.id;
  }
  if (auto id = as_index(selector); id && *id < net.edge_count()) return *id;
  if (auto arrow = selector.find("->"); arrow != std::string::npos) {
    const std::string from = selector.substr(0, arrow);
    const std::string to = selector.substr(arrow + 2);
    if (auto edge = net.find_edge(resolve_node(net, from), resolve_node(net, to))) return *edge;
  }
  throw InputError("no edge matches '" + selector + "'");
}

NodeIndex resolve_node(const Network& net, const std::string& selector) {
  if (auto j = net.find_node(selector)) return *j;
  if (auto id = as_index(selector); id && *id < net.node_count()) return *id;
  throw InputError("no node matches '" + selector + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contingency analysis and reservoir significance for gas pipeline networks",
               "gasnet"};
  app.require_subcommand(1);
  std::string format_name = "table";
  app.add_option("--format", format_name, "Output format: table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check a network file and its NOM");
  validate->add_option("file", file, "Network file")->required();

  std::string output;
  auto* strip = app.add_subcommand("strip-cycles", "Remove cyclic flows from a network file");
  strip->add_option("file", file, "Network file")->required();
  strip->add_option("-o,--output", output, "Where to write the stripped network")->required();

  std::string fail_edge;
  double fraction = 0.0;
  auto* dom = app.add_subcommand("dom", "Disrupted operation mode for one line failure");
  dom->add_option("file", file, "Network file")->required();
  dom->add_option("--fail-edge", fail_edge, "Edge name, id or FROM->TO")->required();
  dom->add_option("--fraction", fraction, "Remaining capacity share")->check(CLI::Range(0.0, 1.0));

  std::string mode = "raom";
  std::string reservoir = "all";
  bool use_costs = false;
  auto* restore = app.add_subcommand("restore", "Re-routing and reservoir activation");
  restore->add_option("file", file, "Network file")->required();
  restore->add_option("--fail-edge", fail_edge, "Edge name, id or FROM->TO")->required();
  restore->add_option("--fraction", fraction, "Remaining capacity share")
      ->check(CLI::Range(0.0, 1.0));
  restore->add_option("--mode", mode, "Last mode to compute: rrom or raom")
      ->check(CLI::IsMember({"rrom", "raom"}));
  restore->add_option("--reservoir", reservoir, "Reservoir node to activate, or all");
  restore->add_flag("--use-costs", use_costs, "Weight line usage by transfer costs");

  SweepFlags sweep;
  auto* significance = app.add_subcommand("significance", "N-1 sweep and reservoir significance");
  significance->add_option("file", file, "Network file")->required();
  add_sweep_flags(significance, sweep);

  std::string json_path;
  auto* report = app.add_subcommand("report", "Significance table plus the JSON document");
  report->add_option("file", file, "Network file")->required();
  report->add_option("-o,--json", json_path, "Write the JSON document here instead of stdout");
  add_sweep_flags(report, sweep);

  std::vector<std::string> argv_store{"gasnet"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const Format format = parse_format(format_name);
    if (*validate) {
      const auto doc = load_network(file);
      out << "ok: " << doc.network.node_count() << " nodes, " << doc.network.edge_count()
          << " edges, nominal consumption " << fixed4(doc.nom.total_consumption()) << "\n";
      return kExitOk;
    }
    if (*strip) {
      auto doc = read_network_document(file);
      const auto stripped = strip_flow_cycles(doc.network, doc.nom.flow);
      Volume removed = 0;
      for (std::size_t i = 0; i < stripped.size(); ++i) removed += doc.nom.flow[i] - stripped[i];
      doc.nom.flow = stripped;
      const auto drop = cycle_closing_edges(doc.network, doc.nom.flow);
      auto [net, nom] = remove_edges(doc.network, doc.nom, drop);
      NetworkDocument cleaned{std::move(net), std::move(nom)};
      validate_document(cleaned);
      std::ofstream os(output);
      if (!os) throw InputError("cannot write " + output);
      os << serialize_network(cleaned.network, cleaned.nom);
      err << "removed " << fixed4(removed) << " mcm of cyclic flow";
      if (!drop.empty()) {
        err << "; dropped idle edges closing cycles:";
        for (EdgeIndex e : drop) {
          const auto& edge = doc.network.edge(e);
          err << ' ' << display(doc.network, edge.from) << "->" << display(doc.network, edge.to);
        }
      }
      err << "\n";
      return kExitOk;
    }
    if (*dom) {
      const auto doc = load_network(file);
      const auto scenario =
          Scenario::edge_failure(doc.network, resolve_edge(doc.network, fail_edge), fraction);
      const auto result = compute_dom(doc.network, doc.nom, scenario);
      out << render_dom(doc.network, doc.nom, scenario.label, result.state, format);
      return kExitOk;
    }
    if (*restore) {
      const auto doc = load_network(file);
      const auto& net = doc.network;
      const auto scenario = Scenario::edge_failure(net, resolve_edge(net, fail_edge), fraction);
      RestorationOptions opts;
      opts.use_costs = use_costs;
      auto disrupted = compute_dom(net, doc.nom, scenario);
      RestoreView view;
      view.label = scenario.label;
      view.dom = disrupted.state;
      view.rrom = compute_rrom(net, doc.nom, view.dom, disrupted.overrides, opts, &view.rerouting);
      if (mode == "raom") {
        std::optional<std::set<NodeIndex>> filter;
        if (reservoir != "all") filter = std::set<NodeIndex>{resolve_node(net, reservoir)};
        RestorationSolution sol;
        view.raom = compute_raom(net, doc.nom, view.rrom, disrupted.overrides, filter, opts, &sol);
        view.reservoir = sol;
        view.ratio = compensation_ratio(doc.nom, view.rrom, *view.raom);
      }
      out << render_restore(net, doc.nom, view, format);
      return kExitOk;
    }
    if (*significance) {
      const auto doc = load_network(file);
      const auto [results, rep] = run_sweep(doc, sweep);
      out << render_significance(doc.network, results, rep, format);
      return kExitOk;
    }
    if (*report) {
      const auto doc = load_network(file);
      const auto [results, rep] = run_sweep(doc, sweep);
      out << render_significance(doc.network, results, rep, Format::kTable);
      const std::string json = render_significance(doc.network, results, rep, Format::kJson);
      if (json_path.empty()) {
        out << "\n" << json;
      } else {
        std::ofstream os(json_path);
        if (!os) throw InputError("cannot write " + json_path);
        os << json;
      }
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}

}  // namespace gasnet

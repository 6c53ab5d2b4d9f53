#include "gasnet/dom.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include "gasnet/preprocess.h"

namespace gasnet {

namespace {

std::string display_name(const Network& net, NodeIndex j) {
  const auto& name = net.node(j).name;
  return name.empty() ? std::to_string(j) : name;
}

}  // namespace

Scenario Scenario::edge_failure(const Network& net, EdgeIndex edge, double fraction) {
  const auto& e = net.edge(edge);
  Scenario s;
  s.failed_edges.push_back({edge, fraction});
  std::ostringstream label;
  label << "edge " << (e.name.empty() ? std::to_string(edge) : e.name) << " "
        << display_name(net, e.from) << "->" << display_name(net, e.to);
  if (fraction != 0.0) label << " @" << fraction;
  s.label = label.str();
  s.weight = e.failure_probability;
  return s;
}

Scenario Scenario::node_failure(const Network& net, NodeIndex node) {
  Scenario s;
  std::vector<EdgeIndex> incident;
  for (EdgeIndex i : net.in_edges(node)) incident.push_back(i);
  for (EdgeIndex i : net.out_edges(node)) incident.push_back(i);
  std::sort(incident.begin(), incident.end());
  double weight = 1.0;
  bool weighted = true;
  for (EdgeIndex i : incident) {
    s.failed_edges.push_back({i, 0.0});
    const auto& p = net.edge(i).failure_probability;
    if (p) {
      weight *= *p;
    } else {
      weighted = false;
    }
  }
  s.label = "node " + display_name(net, node);
  if (weighted && !incident.empty()) s.weight = weight;
  return s;
}

Disruption apply_disruption(const Network& net, const OperationState& nom,
                            const Scenario& scenario) {
  Disruption d{nom, {}};
  d.state.mode = Mode::kDom;
  for (const auto& failure : scenario.failed_edges) {
    const auto& e = net.edge(failure.edge);
    if (!(failure.residual_fraction >= 0.0 && failure.residual_fraction <= 1.0)) {
      throw InputError("residual fraction for edge " + std::to_string(failure.edge) +
                       " must lie in [0,1]");
    }
    const Volume cap = failure.residual_fraction * e.capacity;
    auto [it, inserted] = d.overrides.emplace(failure.edge, cap);
    if (!inserted) it->second = std::min(it->second, cap);
    d.state.flow.at(failure.edge) = std::min(d.state.flow.at(failure.edge), it->second);
  }
  return d;
}

void resolve_surplus(const Network& net, OperationState& state, NodeIndex node, Volume eps) {
  const Volume residual = node_balance_residual(net, state, node);
  if (residual <= eps) return;
  Volume supply = state.inlet[node] + state.reservoir_inlet[node];
  for (EdgeIndex i : net.in_edges(node)) supply += state.flow[i];
  if (supply <= 0) {
    throw InvariantError("node " + display_name(net, node) + " has surplus without supply");
  }
  const double k = std::clamp((supply - residual) / supply, 0.0, 1.0);
  state.inlet[node] *= k;
  state.reservoir_inlet[node] *= k;
  for (EdgeIndex i : net.in_edges(node)) state.flow[i] *= k;
}

void resolve_deficiency(const Network& net, OperationState& state, NodeIndex node,
                        Volume eps) {
  const Volume residual = node_balance_residual(net, state, node);
  if (residual >= -eps) return;
  Volume available = state.inlet[node] + state.reservoir_inlet[node];
  for (EdgeIndex i : net.in_edges(node)) available += state.flow[i];
  state.consumption[node] = std::min(state.consumption[node], available);
  const Volume remaining = std::max(0.0, available - state.consumption[node]);
  Volume outflow = 0;
  for (EdgeIndex i : net.out_edges(node)) outflow += state.flow[i];
  if (outflow <= 0) {
    if (remaining > eps) {
      throw InvariantError("node " + display_name(net, node) +
                           " must forward gas but has no outflows");
    }
    return;
  }
  const double k = std::clamp(remaining / outflow, 0.0, 1.0);
  for (EdgeIndex i : net.out_edges(node)) state.flow[i] *= k;
}

DomResult compute_dom(const Network& net, const OperationState& nom, const Scenario& scenario,
                      Volume eps) {
  auto order_result = topological_order(net);
  if (std::holds_alternative<CycleWitness>(order_result)) {
    throw InputError("network contains a directed cycle; run strip-cycles first");
  }
  const auto& order = std::get<TopologicalOrder>(order_result).nodes;

  auto [state, overrides] = apply_disruption(net, nom, scenario);
  DomResult result{std::move(state), std::move(overrides), 0};
  OperationState& s = result.state;

  const std::size_t cap =
      std::max<std::size_t>(10 * net.node_count() * std::max<std::size_t>(net.edge_count(), 1), 10);
  for (;;) {
    bool changed = false;
    for (NodeIndex j : order) {
      if (node_balance_residual(net, s, j) < -eps) {
        resolve_deficiency(net, s, j, eps);
        ++result.resolutions;
        changed = true;
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (node_balance_residual(net, s, *it) > eps) {
        resolve_surplus(net, s, *it, eps);
        ++result.resolutions;
        changed = true;
      }
    }
    if (!changed) break;
    if (result.resolutions > cap) {
      std::ostringstream os;
      os << "disruption cascade for '" << scenario.label << "' did not settle after "
         << result.resolutions << " resolutions; imbalanced:";
      for (NodeIndex j = 0; j < net.node_count(); ++j) {
        const Volume r = node_balance_residual(net, s, j);
        if (std::abs(r) > eps) os << ' ' << display_name(net, j) << '=' << r;
      }
      throw InvariantError(os.str());
    }
  }
  return result;
}

}  // namespace gasnet

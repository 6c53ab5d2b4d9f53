#include "gasnet/preprocess.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>

namespace gasnet {

namespace {

// DFS with colors; returns the first cycle met when roots and out-edges are
// visited in ascending id.
std::optional<std::vector<EdgeIndex>> find_cycle_edges(const Network& net,
                                                       std::span<const double> weight,
                                                       double eps) {
  const std::size_t n = net.node_count();
  enum Color : unsigned char { kWhite, kGrey, kBlack };
  std::vector<Color> color(n, kWhite);
  std::vector<EdgeIndex> path;  // edges on the current DFS stack

  struct Frame {
    NodeIndex node;
    std::size_t next = 0;
  };
  for (NodeIndex root = 0; root < n; ++root) {
    if (color[root] != kWhite) continue;
    std::vector<Frame> stack{{root}};
    color[root] = kGrey;
    while (!stack.empty()) {
      Frame& top = stack.back();
      auto outs = net.out_edges(top.node);
      if (top.next == outs.size()) {
        color[top.node] = kBlack;
        stack.pop_back();
        if (!path.empty()) path.pop_back();
        continue;
      }
      const EdgeIndex e = outs[top.next++];
      if (!(weight[e] > eps)) continue;
      const NodeIndex v = net.edge(e).to;
      if (color[v] == kGrey) {
        // Back edge: the cycle is the stack suffix starting at v.
        std::size_t k = 0;
        while (stack[k].node != v) ++k;
        std::vector<EdgeIndex> cycle(path.begin() + static_cast<std::ptrdiff_t>(k), path.end());
        cycle.push_back(e);
        return cycle;
      }
      if (color[v] == kWhite) {
        color[v] = kGrey;
        path.push_back(e);
        stack.push_back({v});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

OrderResult topological_order(const Network& net, std::span<const double> weight,
                              double eps) {
  const std::size_t n = net.node_count();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& e : net.edges()) {
    if (weight[e.id] > eps) ++indegree[e.to];
  }
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex j = 0; j < n; ++j) {
    if (indegree[j] == 0) ready.push(j);
  }
  TopologicalOrder order;
  order.nodes.reserve(n);
  while (!ready.empty()) {
    const NodeIndex u = ready.top();
    ready.pop();
    order.nodes.push_back(u);
    for (EdgeIndex e : net.out_edges(u)) {
      if (weight[e] > eps && --indegree[net.edge(e).to] == 0) ready.push(net.edge(e).to);
    }
  }
  if (order.nodes.size() == n) return order;

  auto cycle = find_cycle_edges(net, weight, eps);
  if (!cycle) throw InvariantError("Kahn's algorithm stalled but no cycle was found");
  CycleWitness witness;
  for (EdgeIndex e : *cycle) witness.nodes.push_back(net.edge(e).from);
  return witness;
}

OrderResult topological_order(const Network& net) {
  std::vector<double> all(net.edge_count(), 1.0);
  return topological_order(net, all, 0.0);
}

std::vector<Volume> strip_flow_cycles(const Network& net, std::span<const Volume> flow,
                                      double eps) {
  if (flow.size() != net.edge_count()) throw InputError("flow vector size mismatch");
  std::vector<Volume> out(flow.begin(), flow.end());
  for (EdgeIndex i = 0; i < out.size(); ++i) {
    if (out[i] < 0) throw InputError("negative flow on edge " + std::to_string(i));
  }
  // Each round zeroes at least one edge, so m rounds bound the loop.
  for (std::size_t round = 0; round <= net.edge_count(); ++round) {
    auto cycle = find_cycle_edges(net, out, eps);
    if (!cycle) return out;
    Volume least = std::numeric_limits<Volume>::infinity();
    EdgeIndex argmin = cycle->front();
    for (EdgeIndex e : *cycle) {
      if (out[e] < least) {
        least = out[e];
        argmin = e;
      }
    }
    for (EdgeIndex e : *cycle) out[e] = std::max(0.0, out[e] - least);
    out[argmin] = 0.0;
  }
  throw InvariantError("cycle cancellation did not terminate within m rounds");
}

std::vector<EdgeIndex> cycle_closing_edges(const Network& net, std::span<const Volume> flow,
                                           double eps) {
  std::vector<double> kept(net.edge_count(), 1.0);
  std::vector<EdgeIndex> dropped;
  while (auto cycle = find_cycle_edges(net, kept, 0.5)) {
    std::optional<EdgeIndex> victim;
    for (EdgeIndex e : *cycle) {
      if (flow[e] <= eps && (!victim || e > *victim)) victim = e;
    }
    if (!victim) throw InputError("graph cycle carries positive flow on every edge; strip flows first");
    kept[*victim] = 0.0;
    dropped.push_back(*victim);
  }
  std::sort(dropped.begin(), dropped.end());
  return dropped;
}

std::pair<Network, OperationState> remove_edges(const Network& net, const OperationState& state,
                                                const std::vector<EdgeIndex>& drop) {
  std::vector<bool> gone(net.edge_count(), false);
  for (EdgeIndex e : drop) gone.at(e) = true;
  std::vector<NodeParams> nodes(net.nodes().begin(), net.nodes().end());
  std::vector<EdgeParams> edges;
  OperationState out = state;
  out.flow.clear();
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    if (gone[i]) continue;
    EdgeParams e = net.edge(i);
    e.id = edges.size();
    edges.push_back(std::move(e));
    out.flow.push_back(state.flow.at(i));
  }
  return {Network(std::move(nodes), std::move(edges)), std::move(out)};
}

NomCheck check_nom(const Network& net, const OperationState& nom, Volume eps) {
  NomCheck result;
  if (nom.mode != Mode::kNom) {
    throw InputError(std::string("check_nom expects a NOM state, got ") + mode_name(nom.mode));
  }
  result.violations = validate_state(net, nom, eps);
  result.accepted = result.violations.empty();
  return result;
}

}  // namespace gasnet

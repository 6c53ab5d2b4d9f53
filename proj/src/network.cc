#include "gasnet/network.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace gasnet {

namespace {

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0; }

std::string node_label(const Network& net, NodeIndex j) {
  const auto& name = net.node(j).name;
  return name.empty() ? std::to_string(j) : name;
}

std::string edge_label(const Network& net, EdgeIndex i) {
  const auto& e = net.edge(i);
  std::ostringstream os;
  os << "edge " << (e.name.empty() ? std::to_string(i) : e.name) << " ("
     << node_label(net, e.from) << "->" << node_label(net, e.to) << ")";
  return os.str();
}

}  // namespace

Network::Network(std::vector<NodeParams> nodes, std::vector<EdgeParams> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const std::size_t n = nodes_.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& p = nodes_[j];
    if (p.id != j) {
      throw InputError("node ids must be dense and in order: expected " +
                       std::to_string(j) + ", got " + std::to_string(p.id));
    }
    if (!finite_nonnegative(p.max_inlet) || !finite_nonnegative(p.reservoir_capacity) ||
        !finite_nonnegative(p.nominal_consumption)) {
      throw InputError("node " + std::to_string(j) + " has a negative or non-finite parameter");
    }
  }
  out_.assign(n, {});
  in_.assign(n, {});
  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    const std::string where = "edge " + std::to_string(i);
    if (e.id != i) {
      throw InputError("edge ids must be dense and in order: expected " + std::to_string(i) +
                       ", got " + std::to_string(e.id));
    }
    if (e.from >= n || e.to >= n) throw InputError(where + " references an unknown node");
    if (e.from == e.to) throw InputError(where + " is a self-loop");
    if (!finite_nonnegative(e.capacity)) throw InputError(where + " has a negative capacity");
    if (e.failure_probability &&
        !(*e.failure_probability >= 0 && *e.failure_probability <= 1)) {
      throw InputError(where + " has a failure probability outside [0,1]");
    }
    if (e.transfer_cost && !finite_nonnegative(*e.transfer_cost)) {
      throw InputError(where + " has a negative transfer cost");
    }
    if (!seen.emplace(e.from, e.to).second) {
      throw InputError(where + " duplicates an existing (from, to) pair");
    }
    out_[e.from].push_back(i);
    in_[e.to].push_back(i);
  }
}

const NodeParams& Network::node(NodeIndex j) const {
  if (j >= nodes_.size()) throw InputError("unknown node id " + std::to_string(j));
  return nodes_[j];
}

const EdgeParams& Network::edge(EdgeIndex i) const {
  if (i >= edges_.size()) throw InputError("unknown edge id " + std::to_string(i));
  return edges_[i];
}

std::span<const EdgeIndex> Network::out_edges(NodeIndex j) const {
  node(j);
  return out_[j];
}

std::span<const EdgeIndex> Network::in_edges(NodeIndex j) const {
  node(j);
  return in_[j];
}

std::optional<NodeIndex> Network::find_node(const std::string& name) const {
  for (const auto& p : nodes_) {
    if (p.name == name) return p.id;
  }
  return std::nullopt;
}

std::optional<EdgeIndex> Network::find_edge(NodeIndex from, NodeIndex to) const {
  if (from >= nodes_.size()) return std::nullopt;
  for (EdgeIndex i : out_[from]) {
    if (edges_[i].to == to) return i;
  }
  return std::nullopt;
}

bool operator==(const NodeParams& a, const NodeParams& b) {
  return a.id == b.id && a.name == b.name && a.max_inlet == b.max_inlet &&
         a.reservoir_capacity == b.reservoir_capacity &&
         a.nominal_consumption == b.nominal_consumption;
}

bool operator==(const EdgeParams& a, const EdgeParams& b) {
  return a.id == b.id && a.name == b.name && a.from == b.from && a.to == b.to &&
         a.capacity == b.capacity && a.failure_probability == b.failure_probability &&
         a.transfer_cost == b.transfer_cost;
}

bool Network::operator==(const Network& other) const {
  return nodes_ == other.nodes_ && edges_ == other.edges_;
}

Volume effective_capacity(const Network& net, const CapacityOverrides& overrides,
                          EdgeIndex edge) {
  auto it = overrides.find(edge);
  return it != overrides.end() ? it->second : net.edge(edge).capacity;
}

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kNom: return "NOM";
    case Mode::kDom: return "DOM";
    case Mode::kRrom: return "RROM";
    case Mode::kRaom: return "RAOM";
  }
  return "?";
}

OperationState OperationState::zero(const Network& net, Mode mode) {
  OperationState s;
  s.mode = mode;
  s.inlet.assign(net.node_count(), 0.0);
  s.reservoir_inlet.assign(net.node_count(), 0.0);
  s.consumption.assign(net.node_count(), 0.0);
  s.flow.assign(net.edge_count(), 0.0);
  return s;
}

Volume OperationState::total_consumption() const {
  return std::accumulate(consumption.begin(), consumption.end(), 0.0);
}

namespace {

void require_dimensions(const Network& net, const OperationState& state) {
  const std::size_t n = net.node_count();
  if (state.inlet.size() != n || state.reservoir_inlet.size() != n ||
      state.consumption.size() != n || state.flow.size() != net.edge_count()) {
    throw InputError("state dimensions do not match the network");
  }
}

}  // namespace

Volume node_balance_residual(const Network& net, const OperationState& state,
                             NodeIndex node) {
  require_dimensions(net, state);
  Volume supply = state.inlet.at(node) + state.reservoir_inlet[node];
  Volume demand = state.consumption[node];
  for (EdgeIndex i : net.in_edges(node)) supply += state.flow[i];
  for (EdgeIndex i : net.out_edges(node)) demand += state.flow[i];
  return supply - demand;
}

bool is_balanced(const Network& net, const OperationState& state, Volume eps) {
  for (NodeIndex j = 0; j < net.node_count(); ++j) {
    if (std::abs(node_balance_residual(net, state, j)) > eps) return false;
  }
  return true;
}

std::vector<Volume> free_capacity(const Network& net, const OperationState& state,
                                  const CapacityOverrides& overrides) {
  require_dimensions(net, state);
  std::vector<Volume> free(net.edge_count());
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    const Volume cap = effective_capacity(net, overrides, i);
    const Volume slack = cap - state.flow[i];
    if (slack < -kSolverTol) {
      throw InvariantError(edge_label(net, i) + " carries " + std::to_string(state.flow[i]) +
                           " above its capacity " + std::to_string(cap));
    }
    free[i] = std::max(slack, 0.0);
  }
  return free;
}

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDimensionMismatch: return "dimension mismatch";
    case ViolationKind::kNegativeValue: return "negative value";
    case ViolationKind::kInletExceedsMax: return "inlet exceeds maximum";
    case ViolationKind::kReservoirExceedsCapacity: return "reservoir inlet exceeds capacity";
    case ViolationKind::kReservoirOutsideRaom: return "reservoir active outside RAOM";
    case ViolationKind::kConsumptionExceedsNominal: return "consumption exceeds nominal";
    case ViolationKind::kFlowExceedsCapacity: return "flow exceeds capacity";
    case ViolationKind::kImbalance: return "node imbalance";
  }
  return "?";
}

std::string Violation::describe(const Network& net) const {
  std::ostringstream os;
  if (kind == ViolationKind::kDimensionMismatch) {
    os << violation_kind_name(kind);
    return os.str();
  }
  os << (on_edge ? edge_label(net, index) : "node " + node_label(net, index)) << ": "
     << violation_kind_name(kind) << " (" << magnitude << ")";
  return os.str();
}

std::vector<Violation> validate_state(const Network& net, const OperationState& state,
                                      Volume eps, const CapacityOverrides& overrides) {
  std::vector<Violation> out;
  const std::size_t n = net.node_count();
  if (state.inlet.size() != n || state.reservoir_inlet.size() != n ||
      state.consumption.size() != n || state.flow.size() != net.edge_count()) {
    out.push_back({ViolationKind::kDimensionMismatch});
    return out;
  }
  auto node_issue = [&](ViolationKind k, NodeIndex j, double mag) {
    out.push_back({k, false, j, mag});
  };
  for (NodeIndex j = 0; j < n; ++j) {
    const auto& p = net.node(j);
    for (double v : {state.inlet[j], state.reservoir_inlet[j], state.consumption[j]}) {
      if (v < -eps || !std::isfinite(v)) node_issue(ViolationKind::kNegativeValue, j, v);
    }
    if (state.inlet[j] > p.max_inlet + eps) {
      node_issue(ViolationKind::kInletExceedsMax, j, state.inlet[j] - p.max_inlet);
    }
    if (state.reservoir_inlet[j] > p.reservoir_capacity + eps) {
      node_issue(ViolationKind::kReservoirExceedsCapacity, j,
                 state.reservoir_inlet[j] - p.reservoir_capacity);
    }
    if (state.mode != Mode::kRaom && std::abs(state.reservoir_inlet[j]) > eps) {
      node_issue(ViolationKind::kReservoirOutsideRaom, j, state.reservoir_inlet[j]);
    }
    if (state.consumption[j] > p.nominal_consumption + eps) {
      node_issue(ViolationKind::kConsumptionExceedsNominal, j,
                 state.consumption[j] - p.nominal_consumption);
    }
  }
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    const double f = state.flow[i];
    if (f < -eps || !std::isfinite(f)) out.push_back({ViolationKind::kNegativeValue, true, i, f});
    const Volume cap = effective_capacity(net, overrides, i);
    if (f > cap + eps) out.push_back({ViolationKind::kFlowExceedsCapacity, true, i, f - cap});
  }
  for (NodeIndex j = 0; j < n; ++j) {
    const Volume r = node_balance_residual(net, state, j);
    if (std::abs(r) > eps) node_issue(ViolationKind::kImbalance, j, r);
  }
  return out;
}

}  // namespace gasnet

#ifndef GASNET_NETWORK_H_
#define GASNET_NETWORK_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gasnet {

// Monthly gas volume in million cubic meters.
using Volume = double;
using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

inline constexpr Volume kBalanceEps = 1e-6;
inline constexpr double kSolverTol = 1e-9;

// Bad user input: malformed files, unknown ids, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant. Reaching one of these is a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct NodeParams {
  NodeIndex id = 0;
  std::string name;
  Volume max_inlet = 0;
  Volume reservoir_capacity = 0;
  Volume nominal_consumption = 0;
};

struct EdgeParams {
  EdgeIndex id = 0;
  std::string name;
  NodeIndex from = 0;
  NodeIndex to = 0;
  Volume capacity = 0;
  std::optional<double> failure_probability;
  std::optional<double> transfer_cost;
};

// Immutable directed graph. Construction validates parameter ranges, id
// density and uniqueness of (from, to) pairs. Acyclicity is checked by
// preprocess::topological_order, since cyclic inputs must still be loadable
// for cycle stripping.
class Network {
 public:
  Network() = default;
  Network(std::vector<NodeParams> nodes, std::vector<EdgeParams> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const NodeParams& node(NodeIndex j) const;
  const EdgeParams& edge(EdgeIndex i) const;
  std::span<const NodeParams> nodes() const { return nodes_; }
  std::span<const EdgeParams> edges() const { return edges_; }

  // Edge ids, ascending.
  std::span<const EdgeIndex> out_edges(NodeIndex j) const;
  std::span<const EdgeIndex> in_edges(NodeIndex j) const;

  std::optional<NodeIndex> find_node(const std::string& name) const;
  std::optional<EdgeIndex> find_edge(NodeIndex from, NodeIndex to) const;

  bool operator==(const Network& other) const;

 private:
  std::vector<NodeParams> nodes_;
  std::vector<EdgeParams> edges_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
};

bool operator==(const NodeParams& a, const NodeParams& b);
bool operator==(const EdgeParams& a, const EdgeParams& b);

// Per-edge capacity replacing the nominal one for a scenario.
using CapacityOverrides = std::map<EdgeIndex, Volume>;

Volume effective_capacity(const Network& net, const CapacityOverrides& overrides,
                          EdgeIndex edge);

enum class Mode { kNom, kDom, kRrom, kRaom };

const char* mode_name(Mode mode);

struct OperationState {
  Mode mode = Mode::kNom;
  std::vector<Volume> inlet;
  std::vector<Volume> reservoir_inlet;
  std::vector<Volume> consumption;
  std::vector<Volume> flow;

  // All-zero state sized for `net`.
  static OperationState zero(const Network& net, Mode mode);

  Volume total_consumption() const;
  bool operator==(const OperationState& other) const = default;
};

// (inflows + inlet + reservoir inlet) - (consumption + outflows).
// Positive means surplus, negative means deficiency.
Volume node_balance_residual(const Network& net, const OperationState& state,
                             NodeIndex node);

bool is_balanced(const Network& net, const OperationState& state, Volume eps);

// Effective capacity minus flow, per edge. Throws InvariantError when a flow
// exceeds its capacity by more than kSolverTol; smaller excesses clamp to 0.
std::vector<Volume> free_capacity(const Network& net, const OperationState& state,
                                  const CapacityOverrides& overrides = {});

enum class ViolationKind {
  kDimensionMismatch,
  kNegativeValue,
  kInletExceedsMax,
  kReservoirExceedsCapacity,
  kReservoirOutsideRaom,
  kConsumptionExceedsNominal,
  kFlowExceedsCapacity,
  kImbalance,
};

const char* violation_kind_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  bool on_edge = false;
  std::size_t index = 0;
  double magnitude = 0;

  std::string describe(const Network& net) const;
};

std::vector<Violation> validate_state(const Network& net, const OperationState& state,
                                      Volume eps,
                                      const CapacityOverrides& overrides = {});

}  // namespace gasnet

#endif  // GASNET_NETWORK_H_

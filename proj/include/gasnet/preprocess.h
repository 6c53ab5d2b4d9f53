#ifndef GASNET_PREPROCESS_H_
#define GASNET_PREPROCESS_H_

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "gasnet/network.h"

namespace gasnet {

struct TopologicalOrder {
  std::vector<NodeIndex> nodes;
};

// Nodes of one directed cycle, in traversal order (last links back to first).
struct CycleWitness {
  std::vector<NodeIndex> nodes;
};

using OrderResult = std::variant<TopologicalOrder, CycleWitness>;

// Kahn's algorithm; among ready nodes the lowest id goes first.
OrderResult topological_order(const Network& net);

// Same, over the subgraph of edges with weight > eps.
OrderResult topological_order(const Network& net, std::span<const double> edge_weight,
                              double eps);

// Cancels positive-flow cycles: finds a cycle by ascending-id DFS over edges
// with flow > eps and subtracts the cycle's smallest flow from every edge on
// it, until the positive-flow subgraph is acyclic. Node residuals are
// preserved and no flow increases.
std::vector<Volume> strip_flow_cycles(const Network& net, std::span<const Volume> flow,
                                      double eps = kBalanceEps);

// After strip_flow_cycles the positive-flow subgraph is acyclic but the
// graph itself may not be. Returns edges with flow <= eps whose removal makes
// it acyclic: while a cycle exists, the highest-id such edge on it is dropped.
std::vector<EdgeIndex> cycle_closing_edges(const Network& net, std::span<const Volume> flow,
                                           double eps = kBalanceEps);

// Copy of the network and state without `drop`; remaining edges keep their
// names and order and are renumbered densely.
std::pair<Network, OperationState> remove_edges(const Network& net, const OperationState& state,
                                                const std::vector<EdgeIndex>& drop);

struct NomCheck {
  bool accepted = false;
  std::vector<Violation> violations;
};

// Accepts a NOM iff validate_state is clean (which already covers reservoir
// inlets being zero outside RAOM).
NomCheck check_nom(const Network& net, const OperationState& nom, Volume eps = kBalanceEps);

}  // namespace gasnet

#endif  // GASNET_PREPROCESS_H_

#ifndef GASNET_DOM_H_
#define GASNET_DOM_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gasnet/network.h"

namespace gasnet {

struct EdgeFailure {
  EdgeIndex edge = 0;
  // Remaining share of nominal capacity; 0 is a full failure.
  double residual_fraction = 0.0;
};

struct Scenario {
  std::vector<EdgeFailure> failed_edges;
  std::string label;
  // Failure probability used for weighted averages, if known.
  std::optional<double> weight;

  static Scenario edge_failure(const Network& net, EdgeIndex edge, double fraction = 0.0);
  // Simultaneous full failure of every edge incident to `node`.
  static Scenario node_failure(const Network& net, NodeIndex node);
};

struct Disruption {
  OperationState state;
  CapacityOverrides overrides;
};

// Cuts the failed edges' capacities and clamps their flows; everything else
// is copied from the NOM. The result is usually imbalanced.
Disruption apply_disruption(const Network& net, const OperationState& nom,
                            const Scenario& scenario);

// Scales the node's inlets and inflows by one common factor so that they
// exactly cover consumption plus outflows. No-op when the node has no surplus.
void resolve_surplus(const Network& net, OperationState& state, NodeIndex node,
                     Volume eps = kBalanceEps);

// Covers the node's own consumption first and spreads what is left over the
// outflows in proportion to their current values. No-op without deficiency.
void resolve_deficiency(const Network& net, OperationState& state, NodeIndex node,
                        Volume eps = kBalanceEps);

struct DomResult {
  OperationState state;
  CapacityOverrides overrides;
  std::size_t resolutions = 0;
};

// Iterates to the balanced disrupted state. Deficiencies are swept in
// topological order and surpluses in reverse topological order until no
// node is imbalanced. Throws InvariantError past 10*n*m resolutions.
DomResult compute_dom(const Network& net, const OperationState& nom, const Scenario& scenario,
                      Volume eps = kBalanceEps);

}  // namespace gasnet

#endif  // GASNET_DOM_H_

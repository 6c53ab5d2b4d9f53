#ifndef GASNET_RESTORATION_H_
#define GASNET_RESTORATION_H_

#include <optional>
#include <set>
#include <vector>

#include "gasnet/network.h"

namespace gasnet {

enum class SourceKind { kSpareInlets, kReservoirs };

struct RestorationProblem {
  SourceKind kind = SourceKind::kSpareInlets;
  // Extra inlet each node may supply.
  std::vector<Volume> source_bounds;
  // Consumption still missing relative to the NOM.
  std::vector<Volume> outage_bounds;
  // Free capacity of each edge in the base state.
  std::vector<Volume> edge_bounds;
  // Outage nodes reachable from a source over edges with free capacity,
  // ascending. Only these may receive restored consumption.
  std::vector<NodeIndex> reachable;
};

struct RestorationSolution {
  std::vector<Volume> source_inlet;
  std::vector<Volume> restored_consumption;
  std::vector<Volume> incremental_flow;
  // Maximum total restoration.
  Volume stage1_total = 0;
  // Consumption vector of the equalizing stage, fixed for the last stage.
  std::vector<Volume> stage2_vector;
  double stage2_objective = 0;
  Volume stage2_flow_total = 0;
  Volume stage3_flow_total = 0;
};

struct RestorationOptions {
  // Weight the last stage by edge transfer costs (edges without a cost count 1).
  bool use_costs = false;
  double tol = kSolverTol;
  Volume eps = kBalanceEps;
};

// max(nom.consumption - current.consumption, 0) per node.
std::vector<Volume> outage_vector(const OperationState& nom, const OperationState& current);

// Outage nodes reachable from any source (sources included) over edges whose
// free capacity exceeds eps.
std::vector<NodeIndex> reachable_outage_nodes(const Network& net, std::span<const Volume> free,
                                              const std::vector<NodeIndex>& sources,
                                              std::span<const Volume> outages, Volume eps);

// Overload computing free capacity of `base` under `overrides`.
std::vector<NodeIndex> reachable_outage_nodes(const Network& net, const OperationState& base,
                                              const std::vector<NodeIndex>& sources,
                                              std::span<const Volume> outages, Volume eps,
                                              const CapacityOverrides& overrides = {});

// reservoir_filter restricts reservoir sources; ignored for spare inlets.
RestorationProblem build_restoration_problem(
    const Network& net, const OperationState& base, const OperationState& nom, SourceKind kind,
    const std::optional<std::set<NodeIndex>>& reservoir_filter,
    const CapacityOverrides& overrides, Volume eps = kBalanceEps);

// Three chained solves: maximize total restored consumption (LP); among
// those, minimize the chained squared differences of restored consumption
// over the reachable set in ascending id (QP); with that consumption vector
// fixed, minimize total (or cost-weighted) incremental flow (LP).
RestorationSolution solve_restoration(const Network& net, const RestorationProblem& problem,
                                      const RestorationOptions& options = {});

// DOM plus re-routing of spare inlet capacity.
OperationState compute_rrom(const Network& net, const OperationState& nom,
                            const OperationState& dom, const CapacityOverrides& overrides,
                            const RestorationOptions& options = {},
                            RestorationSolution* solution = nullptr);

// RROM plus reservoir withdrawal. An empty filter activates every reservoir.
OperationState compute_raom(const Network& net, const OperationState& nom,
                            const OperationState& rrom, const CapacityOverrides& overrides,
                            const std::optional<std::set<NodeIndex>>& reservoir_filter,
                            const RestorationOptions& options = {},
                            RestorationSolution* solution = nullptr);

}  // namespace gasnet

#endif  // GASNET_RESTORATION_H_

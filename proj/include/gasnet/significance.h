#ifndef GASNET_SIGNIFICANCE_H_
#define GASNET_SIGNIFICANCE_H_

#include <optional>
#include <string>
#include <vector>

#include "gasnet/dom.h"
#include "gasnet/network.h"
#include "gasnet/restoration.h"

namespace gasnet {

// Share of the post-re-routing outage that reservoir activation restores:
// (sum C_raom - sum C_rrom) / (sum C_nom - sum C_rrom). Empty when the
// denominator is at most eps.
std::optional<double> compensation_ratio(const OperationState& nom, const OperationState& rrom,
                                         const OperationState& raom, Volume eps = kBalanceEps);

struct ReservoirOutcome {
  NodeIndex reservoir = 0;
  OperationState raom;
  Volume compensated = 0;
  std::optional<double> ratio;
};

struct ScenarioResult {
  Scenario scenario;
  // Set when the scenario could not be evaluated; the states are then empty.
  std::optional<std::string> error;
  OperationState dom;
  OperationState rrom;
  Volume outage_after_dom = 0;
  Volume rerouted = 0;
  Volume outage_after_rrom = 0;
  // One entry per reservoir node (ascending id), each activated alone.
  std::vector<ReservoirOutcome> reservoirs;
  // All reservoirs activated together, when requested.
  std::optional<ReservoirOutcome> joint;
};

struct SweepOptions {
  bool joint = false;
  std::size_t jobs = 1;
  RestorationOptions restoration;
};

// Nodes with positive reservoir capacity, ascending.
std::vector<NodeIndex> reservoir_nodes(const Network& net);

// Full failure of each edge in turn.
std::vector<Scenario> n_minus_one_scenarios(const Network& net);

ScenarioResult evaluate_scenario(const Network& net, const OperationState& nom,
                                 const Scenario& scenario, const SweepOptions& options = {});

// Evaluates each scenario (the N-1 set when `scenarios` is empty) on up to
// options.jobs threads. Results keep input order; per-scenario failures are
// recorded in ScenarioResult::error.
std::vector<ScenarioResult> scenario_sweep(const Network& net, const OperationState& nom,
                                           const std::optional<std::vector<Scenario>>& scenarios,
                                           const SweepOptions& options = {});

enum class ZeroOutagePolicy { kExclude, kZero };

struct SignificanceOptions {
  bool weighted = false;
  ZeroOutagePolicy zero_outage = ZeroOutagePolicy::kExclude;
};

struct ReservoirSignificance {
  // Empty for the joint row.
  std::optional<NodeIndex> reservoir;
  // Empty when no scenario has a defined ratio.
  std::optional<double> average;
  std::optional<double> weighted_average;
  std::size_t scenario_count = 0;
  std::size_t excluded_count = 0;
  std::size_t failed_count = 0;
};

struct SignificanceReport {
  std::vector<ReservoirSignificance> per_reservoir;
  std::optional<ReservoirSignificance> joint;
  std::size_t total_scenarios = 0;
};

// Averages the per-scenario ratios per reservoir. With options.weighted the
// weights (one per result, defaulting to each scenario's own weight) are
// normalized over the scenarios that count; a missing weight on a counted
// scenario is an InputError.
SignificanceReport significance_measure(const std::vector<ScenarioResult>& results,
                                        const SignificanceOptions& options = {},
                                        const std::optional<std::vector<double>>& weights = {});

}  // namespace gasnet

#endif  // GASNET_SIGNIFICANCE_H_

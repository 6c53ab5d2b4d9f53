#include "gasnet/significance.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <thread>

namespace gasnet {

std::optional<double> compensation_ratio(const OperationState& nom, const OperationState& rrom,
                                         const OperationState& raom, Volume eps) {
  const Volume outage = nom.total_consumption() - rrom.total_consumption();
  if (outage <= eps) return std::nullopt;
  const Volume compensated = raom.total_consumption() - rrom.total_consumption();
  return std::clamp(compensated / outage, 0.0, 1.0);
}

std::vector<NodeIndex> reservoir_nodes(const Network& net) {
  std::vector<NodeIndex> out;
  for (const auto& node : net.nodes()) {
    if (node.reservoir_capacity > 0) out.push_back(node.id);
  }
  return out;
}

std::vector<Scenario> n_minus_one_scenarios(const Network& net) {
  std::vector<Scenario> out;
  out.reserve(net.edge_count());
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) out.push_back(Scenario::edge_failure(net, i));
  return out;
}

namespace {

ReservoirOutcome activate(const Network& net, const OperationState& nom, const ScenarioResult& r,
                          const CapacityOverrides& overrides,
                          const std::optional<std::set<NodeIndex>>& filter,
                          const SweepOptions& options) {
  ReservoirOutcome out;
  out.raom = compute_raom(net, nom, r.rrom, overrides, filter, options.restoration);
  out.compensated = out.raom.total_consumption() - r.rrom.total_consumption();
  out.ratio = compensation_ratio(nom, r.rrom, out.raom, options.restoration.eps);
  return out;
}

}  // namespace

ScenarioResult evaluate_scenario(const Network& net, const OperationState& nom,
                                 const Scenario& scenario, const SweepOptions& options) {
  ScenarioResult r;
  r.scenario = scenario;
  const auto reservoirs = reservoir_nodes(net);
  try {
    auto dom = compute_dom(net, nom, scenario, options.restoration.eps);
    r.dom = std::move(dom.state);
    r.rrom = compute_rrom(net, nom, r.dom, dom.overrides, options.restoration);
    const Volume nominal = nom.total_consumption();
    r.outage_after_dom = nominal - r.dom.total_consumption();
    r.rerouted = r.rrom.total_consumption() - r.dom.total_consumption();
    r.outage_after_rrom = nominal - r.rrom.total_consumption();
    for (NodeIndex res : reservoirs) {
      auto outcome = activate(net, nom, r, dom.overrides, std::set<NodeIndex>{res}, options);
      outcome.reservoir = res;
      r.reservoirs.push_back(std::move(outcome));
    }
    if (options.joint) r.joint = activate(net, nom, r, dom.overrides, std::nullopt, options);
  } catch (const std::exception& e) {
    r = ScenarioResult{};
    r.scenario = scenario;
    r.error = e.what();
    for (NodeIndex res : reservoirs) r.reservoirs.push_back({res, {}, 0, std::nullopt});
  }
  return r;
}

std::vector<ScenarioResult> scenario_sweep(const Network& net, const OperationState& nom,
                                           const std::optional<std::vector<Scenario>>& scenarios,
                                           const SweepOptions& options) {
  const std::vector<Scenario> list = scenarios ? *scenarios : n_minus_one_scenarios(net);
  std::vector<ScenarioResult> results(list.size());
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(list.size(), 1));
  if (jobs == 1) {
    for (std::size_t k = 0; k < list.size(); ++k) {
      results[k] = evaluate_scenario(net, nom, list[k], options);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < list.size(); k = next++) {
        results[k] = evaluate_scenario(net, nom, list[k], options);
      }
    });
  }
  workers.clear();  // joins
  return results;
}

namespace {

struct Accumulator {
  double sum = 0;
  double weighted_sum = 0;
  double weight_total = 0;
  bool missing_weight = false;
  ReservoirSignificance row;

  void add(std::optional<double> ratio, bool failed, std::optional<double> weight,
           ZeroOutagePolicy policy) {
    if (failed) {
      ++row.excluded_count;
      ++row.failed_count;
      return;
    }
    if (!ratio) {
      if (policy == ZeroOutagePolicy::kExclude) {
        ++row.excluded_count;
        return;
      }
      ratio = 0.0;
    }
    ++row.scenario_count;
    sum += *ratio;
    if (weight) {
      weighted_sum += *weight * *ratio;
      weight_total += *weight;
    } else {
      missing_weight = true;
    }
  }

  ReservoirSignificance finish(bool weighted) {
    if (row.scenario_count > 0) row.average = sum / static_cast<double>(row.scenario_count);
    if (weighted) {
      if (missing_weight) {
        throw InputError("weighted significance needs a failure probability for every scenario");
      }
      if (weight_total > 0) row.weighted_average = weighted_sum / weight_total;
    }
    return row;
  }
};

}  // namespace

SignificanceReport significance_measure(const std::vector<ScenarioResult>& results,
                                        const SignificanceOptions& options,
                                        const std::optional<std::vector<double>>& weights) {
  if (weights && weights->size() != results.size()) {
    throw InputError("weights must have one entry per scenario result");
  }
  SignificanceReport report;
  report.total_scenarios = results.size();
  std::map<NodeIndex, Accumulator> per;
  Accumulator joint;
  const bool joint_mode =
      std::any_of(results.begin(), results.end(), [](const auto& r) { return r.joint.has_value(); });
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    const std::optional<double> w = weights ? std::optional<double>((*weights)[k]) : r.scenario.weight;
    if (w && !(*w >= 0)) throw InputError("scenario weights must be nonnegative");
    const bool failed = r.error.has_value();
    for (const auto& outcome : r.reservoirs) {
      auto& acc = per[outcome.reservoir];
      acc.row.reservoir = outcome.reservoir;
      acc.add(outcome.ratio, failed, w, options.zero_outage);
    }
    if (joint_mode) {
      joint.add(r.joint ? r.joint->ratio : std::nullopt, failed, w, options.zero_outage);
    }
  }
  for (auto& [node, acc] : per) report.per_reservoir.push_back(acc.finish(options.weighted));
  if (joint_mode) report.joint = joint.finish(options.weighted);
  return report;
}

}  // namespace gasnet

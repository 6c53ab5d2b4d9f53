#include "gasnet/restoration.h"

#include <algorithm>
#include <numeric>

#include "gasnet/solver.h"

namespace gasnet {

namespace {

// Variable layout shared by all three stages: sources, consumptions, flows.
struct Layout {
  std::size_t n;
  std::size_t m;
  std::size_t source(NodeIndex j) const { return j; }
  std::size_t consumption(NodeIndex j) const { return n + j; }
  std::size_t flow(EdgeIndex i) const { return 2 * n + i; }
  std::size_t size() const { return 2 * n + m; }
};

LinearProgram base_program(const Network& net, const RestorationProblem& p, const Layout& lay) {
  LinearProgram lp;
  lp.objective.assign(lay.size(), 0.0);
  lp.lower.assign(lay.size(), 0.0);
  lp.upper.assign(lay.size(), 0.0);
  for (NodeIndex j = 0; j < lay.n; ++j) lp.upper[lay.source(j)] = p.source_bounds[j];
  for (NodeIndex j : p.reachable) lp.upper[lay.consumption(j)] = p.outage_bounds[j];
  for (EdgeIndex i = 0; i < lay.m; ++i) lp.upper[lay.flow(i)] = p.edge_bounds[i];
  // source + inflow - outflow - consumption = 0 at every node
  for (NodeIndex j = 0; j < lay.n; ++j) {
    LinearRow row;
    row.terms.emplace_back(lay.source(j), 1.0);
    row.terms.emplace_back(lay.consumption(j), -1.0);
    for (EdgeIndex i : net.in_edges(j)) row.terms.emplace_back(lay.flow(i), 1.0);
    for (EdgeIndex i : net.out_edges(j)) row.terms.emplace_back(lay.flow(i), -1.0);
    lp.equalities.push_back(std::move(row));
  }
  return lp;
}

Volume flow_total(const std::vector<double>& x, const Layout& lay) {
  Volume total = 0;
  for (EdgeIndex i = 0; i < lay.m; ++i) total += x[lay.flow(i)];
  return total;
}

RestorationSolution empty_solution(const Layout& lay) {
  RestorationSolution s;
  s.source_inlet.assign(lay.n, 0.0);
  s.restored_consumption.assign(lay.n, 0.0);
  s.incremental_flow.assign(lay.m, 0.0);
  s.stage2_vector.assign(lay.n, 0.0);
  return s;
}

std::string stage_failure(int stage, SolveStatus status) {
  return "restoration stage " + std::to_string(stage) + " failed: " + solve_status_name(status);
}

}  // namespace

std::vector<Volume> outage_vector(const OperationState& nom, const OperationState& current) {
  if (nom.consumption.size() != current.consumption.size()) {
    throw InputError("outage_vector: states have different node counts");
  }
  std::vector<Volume> out(nom.consumption.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::max(0.0, nom.consumption[j] - current.consumption[j]);
  }
  return out;
}

std::vector<NodeIndex> reachable_outage_nodes(const Network& net, std::span<const Volume> free,
                                              const std::vector<NodeIndex>& sources,
                                              std::span<const Volume> outages, Volume eps) {
  std::vector<bool> seen(net.node_count(), false);
  std::vector<NodeIndex> stack;
  for (NodeIndex s : sources) {
    if (!seen.at(s)) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    for (EdgeIndex i : net.out_edges(u)) {
      const NodeIndex v = net.edge(i).to;
      if (free[i] > eps && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  std::vector<NodeIndex> out;
  for (NodeIndex j = 0; j < net.node_count(); ++j) {
    if (seen[j] && outages[j] > eps) out.push_back(j);
  }
  return out;
}

std::vector<NodeIndex> reachable_outage_nodes(const Network& net, const OperationState& base,
                                              const std::vector<NodeIndex>& sources,
                                              std::span<const Volume> outages, Volume eps,
                                              const CapacityOverrides& overrides) {
  const auto free = free_capacity(net, base, overrides);
  return reachable_outage_nodes(net, free, sources, outages, eps);
}

RestorationProblem build_restoration_problem(
    const Network& net, const OperationState& base, const OperationState& nom, SourceKind kind,
    const std::optional<std::set<NodeIndex>>& reservoir_filter,
    const CapacityOverrides& overrides, Volume eps) {
  RestorationProblem p;
  p.kind = kind;
  const std::size_t n = net.node_count();
  p.source_bounds.assign(n, 0.0);
  for (NodeIndex j = 0; j < n; ++j) {
    const auto& node = net.node(j);
    if (kind == SourceKind::kSpareInlets) {
      p.source_bounds[j] = std::max(0.0, node.max_inlet - base.inlet[j]);
    } else if (!reservoir_filter || reservoir_filter->contains(j)) {
      p.source_bounds[j] = std::max(0.0, node.reservoir_capacity - base.reservoir_inlet[j]);
    }
  }
  p.outage_bounds = outage_vector(nom, base);
  p.edge_bounds = free_capacity(net, base, overrides);
  std::vector<NodeIndex> sources;
  for (NodeIndex j = 0; j < n; ++j) {
    if (p.source_bounds[j] > eps) sources.push_back(j);
  }
  p.reachable = reachable_outage_nodes(net, p.edge_bounds, sources, p.outage_bounds, eps);
  return p;
}

RestorationSolution solve_restoration(const Network& net, const RestorationProblem& problem,
                                      const RestorationOptions& options) {
  const Layout lay{net.node_count(), net.edge_count()};
  if (problem.source_bounds.size() != lay.n || problem.outage_bounds.size() != lay.n ||
      problem.edge_bounds.size() != lay.m) {
    throw InputError("restoration problem dimensions do not match the network");
  }
  if (problem.reachable.empty()) return empty_solution(lay);

  // Stage 1: maximize total restored consumption.
  LinearProgram stage1 = base_program(net, problem, lay);
  stage1.sense = Sense::kMaximize;
  for (NodeIndex j : problem.reachable) stage1.objective[lay.consumption(j)] = 1.0;
  const LpResult r1 = solve_lp(stage1, options.tol);
  if (r1.status != SolveStatus::kOptimal) throw InvariantError(stage_failure(1, r1.status));
  if (r1.objective <= options.tol) return empty_solution(lay);

  // Stage 2: equalize restoration along the reachable chain.
  QuadraticProgram stage2;
  stage2.equalities = stage1.equalities;
  stage2.lower = stage1.lower;
  stage2.upper = stage1.upper;
  LinearRow total;
  for (NodeIndex j : problem.reachable) total.terms.emplace_back(lay.consumption(j), 1.0);
  total.rhs = r1.objective;
  stage2.equalities.push_back(std::move(total));
  for (std::size_t k = 0; k + 1 < problem.reachable.size(); ++k) {
    stage2.squared_differences.push_back(
        {lay.consumption(problem.reachable[k]), lay.consumption(problem.reachable[k + 1]), 1.0});
  }
  const QpResult r2 = solve_qp(stage2, options.tol);
  if (r2.status != SolveStatus::kOptimal) throw InvariantError(stage_failure(2, r2.status));

  // Stage 3: fix the consumption vector, minimize line usage.
  LinearProgram stage3 = base_program(net, problem, lay);
  stage3.sense = Sense::kMinimize;
  std::vector<Volume> c2(lay.n, 0.0);
  for (NodeIndex j = 0; j < lay.n; ++j) {
    c2[j] = r2.x[lay.consumption(j)];
    stage3.lower[lay.consumption(j)] = c2[j];
    stage3.upper[lay.consumption(j)] = c2[j];
  }
  for (EdgeIndex i = 0; i < lay.m; ++i) {
    const auto& cost = net.edge(i).transfer_cost;
    stage3.objective[lay.flow(i)] = options.use_costs && cost ? *cost : 1.0;
  }
  const LpResult r3 = solve_lp(stage3, options.tol);
  if (r3.status != SolveStatus::kOptimal) throw InvariantError(stage_failure(3, r3.status));

  RestorationSolution s;
  s.stage1_total = r1.objective;
  s.stage2_vector = c2;
  s.stage2_objective = r2.objective;
  s.stage2_flow_total = flow_total(r2.x, lay);
  s.stage3_flow_total = flow_total(r3.x, lay);
  s.source_inlet.resize(lay.n);
  s.restored_consumption.resize(lay.n);
  s.incremental_flow.resize(lay.m);
  for (NodeIndex j = 0; j < lay.n; ++j) {
    s.source_inlet[j] = r3.x[lay.source(j)];
    s.restored_consumption[j] = r3.x[lay.consumption(j)];
  }
  for (EdgeIndex i = 0; i < lay.m; ++i) s.incremental_flow[i] = r3.x[lay.flow(i)];
  return s;
}

namespace {

OperationState apply_solution(const Network& net, const OperationState& base,
                              const RestorationSolution& sol, const CapacityOverrides& overrides,
                              Mode mode) {
  OperationState out = base;
  out.mode = mode;
  for (NodeIndex j = 0; j < net.node_count(); ++j) {
    const auto& node = net.node(j);
    if (mode == Mode::kRaom) {
      out.reservoir_inlet[j] =
          std::min(out.reservoir_inlet[j] + sol.source_inlet[j], node.reservoir_capacity);
    } else {
      out.inlet[j] = std::min(out.inlet[j] + sol.source_inlet[j], node.max_inlet);
    }
    out.consumption[j] =
        std::min(out.consumption[j] + sol.restored_consumption[j], node.nominal_consumption);
  }
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    out.flow[i] = std::min(out.flow[i] + sol.incremental_flow[i],
                           std::max(base.flow[i], effective_capacity(net, overrides, i)));
  }
  return out;
}

}  // namespace

OperationState compute_rrom(const Network& net, const OperationState& nom,
                            const OperationState& dom, const CapacityOverrides& overrides,
                            const RestorationOptions& options, RestorationSolution* solution) {
  const auto problem = build_restoration_problem(net, dom, nom, SourceKind::kSpareInlets,
                                                 std::nullopt, overrides, options.eps);
  const auto sol = solve_restoration(net, problem, options);
  if (solution) *solution = sol;
  return apply_solution(net, dom, sol, overrides, Mode::kRrom);
}

OperationState compute_raom(const Network& net, const OperationState& nom,
                            const OperationState& rrom, const CapacityOverrides& overrides,
                            const std::optional<std::set<NodeIndex>>& reservoir_filter,
                            const RestorationOptions& options, RestorationSolution* solution) {
  const auto problem = build_restoration_problem(net, rrom, nom, SourceKind::kReservoirs,
                                                 reservoir_filter, overrides, options.eps);
  const auto sol = solve_restoration(net, problem, options);
  if (solution) *solution = sol;
  return apply_solution(net, rrom, sol, overrides, Mode::kRaom);
}

}  // namespace gasnet

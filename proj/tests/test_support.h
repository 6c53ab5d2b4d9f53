#ifndef GASNET_TESTS_TEST_SUPPORT_H_
#define GASNET_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "gasnet/network.h"
#include "gasnet/network_io.h"
#include "gasnet/solver.h"

namespace gasnet::testing {

// Six-node example network with its hand-reconstructed NOM, built in code
// so the loader is not involved. `extended` raises A->C to 150 and C->D to
// 100.
NetworkDocument example_network(bool extended = false);

// Node and edge ids of the example network.
enum ExampleNode : NodeIndex { kA = 0, kB, kC, kD, kE, kF };
enum ExampleEdge : EdgeIndex { kAB = 0, kAC, kBC, kBD, kBE, kCD, kCF, kDE, kDF, kEF };

std::string fixture_path(const std::string& name);

struct RandomCaseOptions {
  std::size_t min_nodes = 2;
  std::size_t max_nodes = 10;
  std::size_t max_edges = 20;
  double edge_probability = 0.45;
  // Values are multiples of this quantum, which keeps scaling by powers of
  // two exact.
  double quantum = 0.25;
};

// Random DAG (ids shuffled against the topological order) with a balanced
// NOM meeting every nominal consumption, spare inlet/line capacity and a few
// reservoirs.
NetworkDocument random_case(std::mt19937_64& rng, const RandomCaseOptions& options = {});

// Multiplies every capacity, inlet, reservoir, consumption and NOM flow.
NetworkDocument scaled(const NetworkDocument& doc, double lambda);

// Network with the given edges (from, to, capacity); nodes default to zero.
Network make_network(std::size_t n, const std::vector<std::tuple<NodeIndex, NodeIndex, Volume>>& edges);

struct CyclicFlowCase {
  Network network;
  std::vector<Volume> flow;
};

// Random graph with back edges injected into a DAG, and a nonnegative flow
// that puts positive volume on at least one directed cycle.
CyclicFlowCase random_cyclic_flow(std::mt19937_64& rng, std::size_t max_nodes = 8);

// Small LP with integer coefficients, finite bounds and a feasible point by
// construction. Up to `max_vars` variables and three equality rows.
LinearProgram random_lp(std::mt19937_64& rng, std::size_t max_vars = 6);

// Same constraint shape with random squared differences and linear terms.
QuadraticProgram random_qp(std::mt19937_64& rng, std::size_t max_vars = 6);

}  // namespace gasnet::testing

#endif  // GASNET_TESTS_TEST_SUPPORT_H_

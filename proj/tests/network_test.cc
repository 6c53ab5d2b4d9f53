#include "gasnet/network.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.h"

namespace gasnet {
namespace {

using testing::example_network;
using testing::make_network;
using namespace testing;

bool has_violation(const std::vector<Violation>& v, ViolationKind kind, std::size_t index) {
  return std::any_of(v.begin(), v.end(),
                     [&](const Violation& x) { return x.kind == kind && x.index == index; });
}

TEST(Network, AdjacencyIsSortedById) {
  const auto doc = example_network();
  const auto out = doc.network.out_edges(kB);
  EXPECT_EQ(std::vector<EdgeIndex>(out.begin(), out.end()),
            (std::vector<EdgeIndex>{kBC, kBD, kBE}));
  const auto in = doc.network.in_edges(kF);
  EXPECT_EQ(std::vector<EdgeIndex>(in.begin(), in.end()), (std::vector<EdgeIndex>{kCF, kDF, kEF}));
  EXPECT_EQ(doc.network.find_edge(kC, kD), std::optional<EdgeIndex>(kCD));
  EXPECT_EQ(doc.network.find_edge(kD, kC), std::nullopt);
  EXPECT_EQ(doc.network.find_node("E"), std::optional<NodeIndex>(kE));
}

TEST(Network, RejectsBadParameters) {
  EXPECT_THROW(make_network(2, {{0, 1, -1.0}}), InputError);
  EXPECT_THROW(make_network(2, {{0, 0, 1.0}}), InputError);
  EXPECT_THROW(make_network(2, {{0, 2, 1.0}}), InputError);
  EXPECT_THROW(make_network(2, {{0, 1, 1.0}, {0, 1, 2.0}}), InputError);
  std::vector<NodeParams> nodes(2);
  nodes[0].id = 0;
  nodes[1].id = 0;
  EXPECT_THROW(Network(nodes, {}), InputError);
  nodes[1].id = 1;
  nodes[1].max_inlet = -2;
  EXPECT_THROW(Network(nodes, {}), InputError);
}

TEST(Network, AntiparallelEdgesAreAllowed) {
  const auto net = make_network(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  EXPECT_EQ(net.edge_count(), 2u);
}

TEST(Network, BalanceResidualAfterZeroingAnEdge) {
  const auto doc = example_network();
  auto state = doc.nom;
  EXPECT_TRUE(is_balanced(doc.network, state, kBalanceEps));
  state.flow[kAB] = 0;
  EXPECT_DOUBLE_EQ(node_balance_residual(doc.network, state, kA), 60.0);
  EXPECT_DOUBLE_EQ(node_balance_residual(doc.network, state, kB), -60.0);
  EXPECT_DOUBLE_EQ(node_balance_residual(doc.network, state, kC), 0.0);
  EXPECT_FALSE(is_balanced(doc.network, state, kBalanceEps));
}

TEST(Network, FreeCapacity) {
  const auto doc = example_network();
  auto free = free_capacity(doc.network, doc.nom);
  EXPECT_DOUBLE_EQ(free[kCD], 5.0);
  EXPECT_DOUBLE_EQ(free[kAC], 0.0);
  auto state = doc.nom;
  state.flow[kCD] = 72;
  EXPECT_DOUBLE_EQ(free_capacity(doc.network, state)[kCD], 13.0);
  const auto ext = example_network(true);
  state.flow[kCD] = 72;
  EXPECT_DOUBLE_EQ(free_capacity(ext.network, state)[kCD], 28.0);
}

TEST(Network, FreeCapacityHonoursOverrides) {
  const auto doc = example_network();
  auto state = doc.nom;
  state.flow[kAB] = 0;
  EXPECT_DOUBLE_EQ(free_capacity(doc.network, state, {{kAB, 0.0}})[kAB], 0.0);
  EXPECT_DOUBLE_EQ(effective_capacity(doc.network, {{kAB, 45.0}}, kAB), 45.0);
  EXPECT_DOUBLE_EQ(effective_capacity(doc.network, {}, kAB), 90.0);
}

TEST(Network, FreeCapacityRejectsOverfullEdge) {
  const auto doc = example_network();
  auto state = doc.nom;
  state.flow[kCD] = 85 + 1e-3;
  EXPECT_THROW(free_capacity(doc.network, state), InvariantError);
  state.flow[kCD] = 85 + 1e-12;
  EXPECT_EQ(free_capacity(doc.network, state)[kCD], 0.0);
}

TEST(Network, ValidateStateReportsEachViolation) {
  const auto doc = example_network();
  EXPECT_TRUE(validate_state(doc.network, doc.nom, kBalanceEps).empty());

  auto state = doc.nom;
  state.inlet[kA] = 210;
  state.flow[kAB] = 70;
  auto v = validate_state(doc.network, state, kBalanceEps);
  EXPECT_TRUE(has_violation(v, ViolationKind::kInletExceedsMax, kA));
  EXPECT_TRUE(has_violation(v, ViolationKind::kImbalance, kB));

  state = doc.nom;
  state.reservoir_inlet[kC] = 5;
  state.consumption[kC] = 45;
  v = validate_state(doc.network, state, kBalanceEps);
  EXPECT_TRUE(has_violation(v, ViolationKind::kReservoirOutsideRaom, kC));
  EXPECT_TRUE(has_violation(v, ViolationKind::kConsumptionExceedsNominal, kC));

  state.mode = Mode::kRaom;
  state.consumption[kC] = 40;
  state.inlet[kC] = 5;
  v = validate_state(doc.network, state, kBalanceEps);
  EXPECT_TRUE(v.empty()) << v.front().describe(doc.network);

  state.reservoir_inlet[kC] = 35;
  state.inlet[kC] = 0;
  state.consumption[kC] = 40;
  state.flow[kCD] = 110;
  v = validate_state(doc.network, state, kBalanceEps);
  EXPECT_TRUE(has_violation(v, ViolationKind::kReservoirExceedsCapacity, kC));
  const auto flow_violation = std::find_if(v.begin(), v.end(), [](const Violation& x) {
    return x.kind == ViolationKind::kFlowExceedsCapacity;
  });
  ASSERT_NE(flow_violation, v.end());
  EXPECT_TRUE(flow_violation->on_edge);
  EXPECT_EQ(flow_violation->index, kCD);
  EXPECT_DOUBLE_EQ(flow_violation->magnitude, 25.0);

  state = doc.nom;
  state.flow[kEF] = -1;
  state.consumption.pop_back();
  v = validate_state(doc.network, state, kBalanceEps);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kDimensionMismatch);
}

TEST(Network, ValidateStateUsesOverrides) {
  const auto doc = example_network();
  const auto v = validate_state(doc.network, doc.nom, kBalanceEps, {{kAB, 30.0}});
  EXPECT_TRUE(has_violation(v, ViolationKind::kFlowExceedsCapacity, kAB));
}

TEST(Network, ViolationDescriptionNamesTheElement) {
  const auto doc = example_network();
  auto state = doc.nom;
  state.flow[kCD] = 90;
  state.consumption[kD] = 40;
  const auto v = validate_state(doc.network, state, kBalanceEps);
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v[0].describe(doc.network).find("C->D"), std::string::npos)
      << v[0].describe(doc.network);
}

TEST(Network, TotalConsumption) {
  EXPECT_DOUBLE_EQ(example_network().nom.total_consumption(), 210.0);
}

}  // namespace
}  // namespace gasnet

#include "gasnet/dom.h"

#include <gtest/gtest.h>

#include "test_support.h"

namespace gasnet {
namespace {

using namespace testing;

constexpr double kTol = 1e-9;

TEST(Scenario, EdgeFailureLabelAndWeight) {
  auto doc = example_network();
  const auto s = Scenario::edge_failure(doc.network, kAB);
  EXPECT_EQ(s.label, "edge 1 A->B");
  EXPECT_FALSE(s.weight.has_value());
  ASSERT_EQ(s.failed_edges.size(), 1u);
  EXPECT_EQ(s.failed_edges[0].residual_fraction, 0.0);
  EXPECT_EQ(Scenario::edge_failure(doc.network, kCD, 0.5).label, "edge 6 C->D @0.5");
}

TEST(Scenario, NodeFailureWeightIsProductOfIncidentEdges) {
  std::vector<NodeParams> nodes(3);
  for (NodeIndex j = 0; j < 3; ++j) nodes[j].id = j;
  std::vector<EdgeParams> edges(2);
  edges[0] = {0, "", 0, 1, 1.0, 0.5, {}};
  edges[1] = {1, "", 1, 2, 1.0, 0.25, {}};
  const Network net(nodes, edges);
  const auto s = Scenario::node_failure(net, 1);
  EXPECT_EQ(s.failed_edges.size(), 2u);
  ASSERT_TRUE(s.weight.has_value());
  EXPECT_DOUBLE_EQ(*s.weight, 0.125);
  EXPECT_EQ(s.label, "node 1");
  EXPECT_DOUBLE_EQ(*Scenario::node_failure(net, 0).weight, 0.5);
}

TEST(ApplyDisruption, PartialFailureCutsCapacityAndFlow) {
  const auto doc = example_network();
  const auto d = apply_disruption(doc.network, doc.nom, Scenario::edge_failure(doc.network, kAB, 0.5));
  EXPECT_DOUBLE_EQ(d.overrides.at(kAB), 45.0);
  EXPECT_DOUBLE_EQ(d.state.flow[kAB], 45.0);
  EXPECT_EQ(d.state.mode, Mode::kDom);

  const auto loose =
      apply_disruption(doc.network, doc.nom, Scenario::edge_failure(doc.network, kAB, 0.9));
  EXPECT_DOUBLE_EQ(loose.overrides.at(kAB), 81.0);
  EXPECT_DOUBLE_EQ(loose.state.flow[kAB], 60.0);
}

TEST(ApplyDisruption, RejectsFractionOutsideUnitInterval) {
  const auto doc = example_network();
  Scenario s = Scenario::edge_failure(doc.network, kAB);
  s.failed_edges[0].residual_fraction = 1.5;
  EXPECT_THROW(apply_disruption(doc.network, doc.nom, s), InputError);
}

TEST(ResolveSurplus, ScalesInletsAndInflowsByOneFactor) {
  const auto net = make_network(2, {{0, 1, 40.0}});
  auto state = OperationState::zero(net, Mode::kDom);
  state.inlet = {30, 10};
  state.flow = {30};
  state.consumption = {0, 20};
  resolve_surplus(net, state, 1);
  EXPECT_DOUBLE_EQ(state.inlet[1], 5.0);
  EXPECT_DOUBLE_EQ(state.flow[0], 15.0);
  EXPECT_NEAR(node_balance_residual(net, state, 1), 0.0, kTol);
}

TEST(ResolveSurplus, ExampleSourceLosesItsFailedOutflow) {
  const auto doc = example_network();
  auto state = apply_disruption(doc.network, doc.nom, Scenario::edge_failure(doc.network, kAB)).state;
  resolve_surplus(doc.network, state, kA);
  EXPECT_DOUBLE_EQ(state.inlet[kA], 140.0);
}

TEST(ResolveSurplus, NoOpWhenBalanced) {
  const auto doc = example_network();
  auto state = doc.nom;
  resolve_surplus(doc.network, state, kC);
  EXPECT_EQ(state, doc.nom);
}

TEST(ResolveDeficiency, ConsumptionFirstThenProportionalOutflows) {
  const auto net = make_network(4, {{0, 1, 100.0}, {1, 2, 100.0}, {1, 3, 100.0}});
  auto state = OperationState::zero(net, Mode::kDom);
  state.inlet[0] = 50;
  state.flow = {50, 20, 10};
  state.consumption = {0, 40, 20, 10};
  resolve_deficiency(net, state, 1);
  EXPECT_DOUBLE_EQ(state.consumption[1], 40.0);
  EXPECT_NEAR(state.flow[1], 20.0 / 3, kTol);
  EXPECT_NEAR(state.flow[2], 10.0 / 3, kTol);
  EXPECT_NEAR(node_balance_residual(net, state, 1), 0.0, kTol);
}

TEST(ResolveDeficiency, ShortSupplyCutsConsumptionAndClosesOutflows) {
  const auto net = make_network(3, {{0, 1, 100.0}, {1, 2, 100.0}});
  auto state = OperationState::zero(net, Mode::kDom);
  state.flow = {30, 20};
  state.consumption = {0, 40, 20};
  resolve_deficiency(net, state, 1);
  EXPECT_DOUBLE_EQ(state.consumption[1], 30.0);
  EXPECT_DOUBLE_EQ(state.flow[1], 0.0);
}

TEST(ComputeDom, ExampleFailureOfAB) {
  const auto doc = example_network();
  const auto r = compute_dom(doc.network, doc.nom, Scenario::edge_failure(doc.network, kAB));
  const auto& s = r.state;
  EXPECT_TRUE(is_balanced(doc.network, s, kBalanceEps));
  EXPECT_NEAR(s.consumption[kB], 0.0, 1e-6);
  EXPECT_NEAR(s.consumption[kE], 5.5, 1e-6);
  EXPECT_NEAR(s.consumption[kF], 34.5, 1e-6);
  EXPECT_NEAR(s.consumption[kA] + s.consumption[kC] + s.consumption[kD], 110.0, 1e-6);
  EXPECT_NEAR(s.flow[kCD], 72.0, 1e-6);
  EXPECT_NEAR(s.flow[kCF], 18.0, 1e-6);
  EXPECT_NEAR(s.flow[kDE], 5.5, 1e-6);
  EXPECT_NEAR(s.flow[kDF], 16.5, 1e-6);
  EXPECT_NEAR(s.inlet[kA], 140.0, 1e-6);
  EXPECT_EQ(r.overrides.at(kAB), 0.0);
  EXPECT_TRUE(validate_state(doc.network, s, kBalanceEps, r.overrides).empty());
}

TEST(ComputeDom, FullCapacityScenarioKeepsNom) {
  const auto doc = example_network();
  const auto r = compute_dom(doc.network, doc.nom, Scenario::edge_failure(doc.network, kAB, 1.0));
  EXPECT_EQ(r.resolutions, 0u);
  EXPECT_EQ(r.state.consumption, doc.nom.consumption);
}

TEST(ComputeDom, RejectsCyclicNetwork) {
  const auto net = make_network(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  const auto nom = OperationState::zero(net, Mode::kNom);
  EXPECT_THROW(compute_dom(net, nom, Scenario::edge_failure(net, 0)), InputError);
}

TEST(ComputeDom, EveryN1ScenarioIsValid) {
  for (bool extended : {false, true}) {
    const auto doc = example_network(extended);
    for (EdgeIndex i = 0; i < doc.network.edge_count(); ++i) {
      const auto r = compute_dom(doc.network, doc.nom, Scenario::edge_failure(doc.network, i));
      const auto v = validate_state(doc.network, r.state, kBalanceEps, r.overrides);
      EXPECT_TRUE(v.empty()) << "edge " << i << ": " << v.front().describe(doc.network);
    }
  }
}

}  // namespace
}  // namespace gasnet

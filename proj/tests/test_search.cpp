#include <cmath>
#include <numbers>

#include "doctest.h"

#include "coverage/search.hpp"

using namespace coverage;
using std::numbers::pi;

namespace {

Domain uniform_annulus() { return Domain(AnnularRegion::circular(1.0, 2.0), DensityField::uniform()); }

std::vector<AgentNode> nodes_with_costs(const std::vector<double>& costs) {
  std::vector<AgentNode> nodes(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i) {
    nodes[i].id = i;
    nodes[i].cost_set = CostSet{{i, costs[i]}};
  }
  return nodes;
}

}  // namespace

TEST_CASE("K* from epsilon") {
  CHECK(compute_k_star(kTwoPi) == 1);
  CHECK(compute_k_star(pi) == 2);
  CHECK(compute_k_star(0.1) == 63);
  CHECK(kTwoPi / 63 <= 0.1);
  CHECK(kTwoPi / 62 > 0.1);
  CHECK(compute_k_star(7.0) == 1);

  SearchConfig c;
  c.epsilon_p = pi;
  CHECK(c.resolved_k_star() == 2);
  c.k_star = 5;
  CHECK(c.resolved_k_star() == 5);
}

TEST_CASE("anchor assignment") {
  CHECK(anchor_angle(0, 4) == 0.0);
  CHECK(anchor_angle(1, 4) == doctest::Approx(pi / 2));
  CHECK(anchor_assignment({0.1, 2.0, 4.0}, 0, 4) == 0);
  CHECK(anchor_assignment({0.1, 6.2}, 0, 4) == 1);
  // 0.5 from either side of the anchor at π.
  CHECK(anchor_assignment({pi - 0.5, pi + 0.5}, 1, 2) == 0);
}

TEST_CASE("ring gossip") {
  std::vector<AgentNode> single = nodes_with_costs({3.0});
  CHECK(gossip_until_stable(single, 0).rounds == 0);
  CHECK(single[0].epoch_totals == std::vector<double>{3.0});

  for (std::size_t n : {2u, 3u, 4u, 8u}) {
    std::vector<double> costs;
    for (std::size_t i = 0; i < n; ++i) costs.push_back(1.0 + 0.25 * static_cast<double>(i));
    std::vector<AgentNode> nodes = nodes_with_costs(costs);
    const GossipOutcome g = gossip_until_stable(nodes, 0);
    CHECK(g.changing_rounds == static_cast<int>(n) - 1);
    CHECK(g.rounds == static_cast<int>(n));
    double total = 0.0;
    for (double c : costs) total += c;
    for (const AgentNode& node : nodes) {
      CHECK(node.cost_set.size() == n);
      CHECK(node.cost_set == nodes.front().cost_set);
      CHECK(node.epoch_totals.back() == doctest::Approx(total));
    }
  }

  // Equal costs from different agents are kept apart.
  std::vector<AgentNode> same = nodes_with_costs({2.0, 2.0, 2.0});
  gossip_until_stable(same, 0);
  CHECK(same[1].epoch_totals.back() == 6.0);
}

TEST_CASE("selection ties go to the earliest epoch") {
  const Domain d = uniform_annulus();
  std::vector<AgentNode> nodes(2);
  const std::vector<double> totals{5.0, 4.2, 4.2, 6.0};
  for (std::size_t i = 0; i < 2; ++i) {
    nodes[i].id = i;
    nodes[i].epoch_totals = totals;
    for (int k = 0; k < 4; ++k) {
      const double ph = static_cast<double>(i) * pi + 0.1 * k;
      nodes[i].records.push_back({ph, Vec2(1.5 * std::cos(ph + pi / 2), 1.5 * std::sin(ph + pi / 2)), 0.0});
    }
  }
  const FinalSelection f = select_and_finalize(nodes, d, CostModel::squared_distance(), 0.03);
  CHECK(f.k_star_index == 1);
  CHECK(f.stored_cost == 4.2);
  CHECK(f.phases[0] == doctest::Approx(0.1));
  CHECK(nodes[1].phase == doctest::Approx(pi + 0.1));
}

TEST_CASE("epoch pins the anchor bar") {
  const Domain d = uniform_annulus();
  SearchConfig cfg;
  cfg.k_star = 4;
  cfg.t_epsilon = 5.0;
  const CoupledState x0{{0.3, 2.5, 4.0}, {Vec2(1.5, 0.5), Vec2(-1.4, 0.4), Vec2(0.2, -1.6)}};
  std::vector<AgentNode> nodes = make_nodes(x0);
  const EpochSummary s = run_epoch(nodes, d, CostModel::squared_distance(), 1, cfg, {0.03, 0.1, 0.01});
  CHECK(s.anchor == 1);
  CHECK(nodes[1].phase == doctest::Approx(pi / 2).epsilon(1e-14));
  for (const AgentNode& node : nodes) {
    CHECK(std::isfinite(node.records.back().subregion_cost));
    CHECK(node.cost_set.size() == 1);
  }
}

TEST_CASE("epoch with static bars relaxes agents only") {
  const Domain d = uniform_annulus();
  SearchConfig cfg;
  cfg.k_star = 1;
  cfg.t_epsilon = 30.0;
  const CoupledState x0{{0.0, 2.0, 4.0}, {Vec2(1.5, 0.5), Vec2(-1.4, 0.4), Vec2(0.2, -1.6)}};
  std::vector<AgentNode> nodes = make_nodes(x0);
  run_epoch(nodes, d, CostModel::squared_distance(), 0, cfg, {0.0, 0.1, 0.01});
  const PartitionState part = PartitionState::from_unwrapped({0.0, 2.0, 4.0}, 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(nodes[i].phase == x0.phi[i]);
    const double expected = (x0.p[i] - centroid(part, d, i)).norm() * std::exp(-0.1 * 30.0);
    CHECK((nodes[i].position - centroid(part, d, i)).norm() == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("two agents on a symmetric annulus end opposite") {
  const Domain d = uniform_annulus();
  SearchConfig cfg;
  cfg.k_star = 2;
  cfg.t_epsilon = 200.0;
  const CoupledState x0{{0.5, 2.0}, {Vec2(1.5, 0.5), Vec2(-1.4, 0.4)}};
  std::vector<AgentNode> nodes = make_nodes(x0);
  run_epoch(nodes, d, CostModel::squared_distance(), 0, cfg, {0.03, 0.1, 0.01});
  CHECK(nodes[0].phase == 0.0);
  CHECK(std::abs(nodes[1].phase - pi) < 1e-4);
}

TEST_CASE("full search") {
  const Domain d = uniform_annulus();
  SearchConfig cfg;
  cfg.epsilon_p = pi;
  cfg.t_epsilon = 20.0;
  const CoupledState x0{{0.5, 2.0}, {Vec2(1.5, 0.5), Vec2(-1.4, 0.4)}};
  const SearchResult r = run_search(d, CostModel::squared_distance(), x0, cfg, {0.03, 0.1, 0.01});
  CHECK(r.k_star == 2);
  CHECK(r.epochs.size() == 2);
  double best = r.epochs[0].total_cost;
  for (const EpochLog& e : r.epochs) best = std::min(best, e.total_cost);
  CHECK(r.final.stored_cost == best);
  CHECK(r.final.recomputed_cost == doctest::Approx(r.final.stored_cost).epsilon(1e-6));

  const SearchResult again = run_search(d, CostModel::squared_distance(), x0, cfg, {0.03, 0.1, 0.01});
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(again.epochs[k].total_cost == r.epochs[k].total_cost);
    CHECK(again.epochs[k].anchor == r.epochs[k].anchor);
  }

  SearchConfig one;
  one.k_star = 1;
  one.t_epsilon = 1.0;
  CHECK(run_search(d, CostModel::squared_distance(), x0, one, {0.03, 0.1, 0.01}).final.k_star_index == 0);
}

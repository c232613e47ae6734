#include "coverage/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coverage {

int compute_k_star(double epsilon_p) {
  if (!(epsilon_p > 0.0)) throw std::invalid_argument("epsilon_p must be positive");
  int k = std::max(1, static_cast<int>(std::ceil(kTwoPi / epsilon_p)));
  while (kTwoPi / k > epsilon_p) ++k;
  while (k > 1 && kTwoPi / (k - 1) <= epsilon_p) --k;
  return k;
}

int SearchConfig::resolved_k_star() const {
  if (k_star) {
    if (*k_star < 1) throw std::invalid_argument("K_star must be positive");
    return *k_star;
  }
  if (epsilon_p) return compute_k_star(*epsilon_p);
  throw std::invalid_argument("search needs epsilon_p or K_star");
}

double anchor_angle(int k, int k_star) { return kTwoPi * k / k_star; }

std::size_t anchor_assignment(const std::vector<double>& phases, int k, int k_star) {
  const double anchor = anchor_angle(k, k_star);
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double d = circular_distance(phases[i], anchor);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return best;
}

std::vector<AgentNode> make_nodes(const CoupledState& initial) {
  std::vector<AgentNode> nodes(initial.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].id = i;
    nodes[i].phase = initial.phi[i];
    nodes[i].position = initial.p[i];
  }
  return nodes;
}

EpochSummary run_epoch(std::vector<AgentNode>& nodes, const Domain& domain,
                       const CostModel& cost, int k, const SearchConfig& config,
                       const EpochParams& params) {
  const int k_star = config.resolved_k_star();
  CoupledState x;
  for (const AgentNode& node : nodes) {
    x.phi.push_back(node.phase);
    x.p.push_back(node.position);
  }
  std::vector<double> wrapped(x.phi.size());
  std::transform(x.phi.begin(), x.phi.end(), wrapped.begin(), wrap_angle);

  EpochSummary summary;
  summary.anchor = anchor_assignment(wrapped, k, k_star);
  // Jump along the shorter arc; no other bar lies between, so order holds.
  const double anchor = anchor_angle(k, k_star);
  double shift = wrap_angle(anchor - wrapped[summary.anchor]);
  if (shift > std::numbers::pi) shift -= kTwoPi;
  x.phi[summary.anchor] += shift;

  const CoupledSystem system(domain, cost, params.kappa_phi, params.kappa_p, summary.anchor);
  const auto steps = static_cast<long>(std::ceil(config.t_epsilon / params.dt - 1e-9));
  for (long s = 1; s <= steps; ++s) {
    const double h =
        (s == steps) ? config.t_epsilon - static_cast<double>(steps - 1) * params.dt : params.dt;
    StepOutcome out = guarded_step(system, x, h);
    summary.halvings += out.halvings;
    x = std::move(out.state);
  }

  const PartitionState part = system.partition(x);
  AgentState agents{x.p, {}, params.kappa_p};
  const std::vector<double> costs = subregion_costs(part, agents, domain, cost);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].phase = x.phi[i];
    nodes[i].position = x.p[i];
    nodes[i].records.push_back({x.phi[i], x.p[i], costs[i]});
    nodes[i].cost_set = CostSet{{nodes[i].id, costs[i]}};
  }
  return summary;
}

GossipOutcome gossip_until_stable(std::vector<AgentNode>& nodes, int k) {
  const std::size_t n = nodes.size();
  GossipOutcome out;
  if (n > 1) {
    while (true) {
      if (out.rounds > static_cast<int>(n)) {
        throw ProtocolError("ring gossip did not stabilize within N+1 rounds");
      }
      // Lockstep: all sends use the sets as they were at the start of the round.
      std::vector<RingMessage> inbox(n);
      for (std::size_t i = 0; i < n; ++i) {
        inbox[(i + 1) % n] = RingMessage{nodes[i].id, k, nodes[i].cost_set};
      }
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t before = nodes[i].cost_set.size();
        nodes[i].cost_set.insert(inbox[i].payload.begin(), inbox[i].payload.end());
        changed = changed || nodes[i].cost_set.size() != before;
      }
      ++out.rounds;
      if (!changed) break;
      ++out.changing_rounds;
    }
  }
  for (AgentNode& node : nodes) {
    double total = 0.0;
    for (const auto& [id, c] : node.cost_set) total += c;
    node.epoch_totals.push_back(total);
  }
  return out;
}

FinalSelection select_and_finalize(std::vector<AgentNode>& nodes, const Domain& domain,
                                   const CostModel& cost, double kappa_phi) {
  FinalSelection sel;
  if (nodes.empty() || nodes.front().epoch_totals.empty()) {
    throw std::invalid_argument("no completed epochs to select from");
  }
  // Every node holds the same totals after gossip, so each selects the same k*.
  const std::vector<double>& totals = nodes.front().epoch_totals;
  sel.k_star_index = static_cast<int>(std::min_element(totals.begin(), totals.end()) - totals.begin());
  sel.stored_cost = totals[sel.k_star_index];
  for (AgentNode& node : nodes) {
    const EpochRecord& r = node.records[sel.k_star_index];
    node.phase = r.phase;
    node.position = r.position;
    sel.phases.push_back(r.phase);
    sel.positions.push_back(r.position);
  }
  const PartitionState part = PartitionState::from_unwrapped(sel.phases, kappa_phi);
  AgentState agents{sel.positions, {}, 0.0};
  sel.recomputed_cost = cost_J(part, agents, domain, cost);
  return sel;
}

SearchResult run_search(const Domain& domain, const CostModel& cost, const CoupledState& initial,
                        const SearchConfig& config, const EpochParams& params) {
  SearchResult result;
  result.k_star = config.resolved_k_star();
  std::vector<AgentNode> nodes = make_nodes(initial);
  for (int k = 0; k < result.k_star; ++k) {
    EpochLog log;
    log.k = k;
    try {
      const EpochSummary summary = run_epoch(nodes, domain, cost, k, config, params);
      log.anchor = summary.anchor;
      log.halvings = summary.halvings;
    } catch (const IntegrationError& e) {
      throw SearchError("epoch " + std::to_string(k + 1) + " failed: " + e.what(),
                        result.epochs);
    }
    log.gossip = gossip_until_stable(nodes, k);
    log.total_cost = nodes.front().epoch_totals.back();
    for (const AgentNode& node : nodes) {
      log.phases.push_back(node.phase);
      log.positions.push_back(node.position);
    }
    result.epochs.push_back(std::move(log));
  }
  result.final = select_and_finalize(nodes, domain, cost, params.kappa_phi);
  return result;
}

}  // namespace coverage

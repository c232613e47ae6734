#pragma once

// Circular search-and-monitoring over anchored bar phases, simulated on a
// synchronous ring of agent nodes.
//
// Each epoch k pins the bar closest to the anchor angle 2πk/K* (0-based k)
// while the rest of the system relaxes for T_ε. The nodes then flood their
// sub-region costs around the ring until every node holds all N of them,
// and after K* epochs every node restores the epoch with the least total.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "coverage/dynamics.hpp"

namespace coverage {

struct SearchConfig {
  std::optional<double> epsilon_p;
  std::optional<int> k_star;  ///< overrides epsilon_p when present
  double t_epsilon = 50.0;
  std::uint64_t rng_seed = 1;

  /// K* from k_star if given, else from epsilon_p.
  int resolved_k_star() const;

  bool operator==(const SearchConfig&) const = default;
};

/// Smallest k ≥ 1 with 2π/k ≤ ε_p.
int compute_k_star(double epsilon_p);

/// Anchor angle for 0-based epoch k.
double anchor_angle(int k, int k_star);

/// Lowest-index agent whose bar is circularly closest to the anchor angle.
std::size_t anchor_assignment(const std::vector<double>& phases, int k, int k_star);

/// (agent id, J_{E_i}) pairs; keyed by agent so equal costs stay distinct.
using CostSet = std::map<std::size_t, double>;

struct EpochRecord {
  double phase = 0.0;  ///< unwrapped phase at epoch end
  Vec2 position = Vec2::Zero();
  double subregion_cost = 0.0;
};

struct AgentNode {
  std::size_t id = 0;
  double phase = 0.0;  ///< unwrapped
  Vec2 position = Vec2::Zero();
  std::vector<EpochRecord> records;  ///< C_i^k per completed epoch
  CostSet cost_set;                  ///< Ω_i^k for the current epoch
  std::vector<double> epoch_totals;  ///< J_i^k per completed epoch
};

struct RingMessage {
  std::size_t sender_id = 0;
  int epoch = 0;
  CostSet payload;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<AgentNode> make_nodes(const CoupledState& initial);

struct EpochParams {
  double kappa_phi = 0.03;
  double kappa_p = 0.1;
  double dt = 0.01;
};

struct EpochSummary {
  std::size_t anchor = 0;
  int halvings = 0;
};

/// Runs epoch k: jump the anchor bar to its angle, pin it and integrate for
/// T_ε, then store C_i^k and seed each Ω_i^k with its own cost.
EpochSummary run_epoch(std::vector<AgentNode>& nodes, const Domain& domain,
                       const CostModel& cost, int k, const SearchConfig& config,
                       const EpochParams& params);

struct GossipOutcome {
  int rounds = 0;           ///< rounds executed, including the confirming one
  int changing_rounds = 0;  ///< rounds in which some set grew
};

/// Synchronous ring flooding: each round node i sends Ω_i to node i+1 and
/// unions what it receives from i−1; stops after a round with no change.
/// Afterwards every node appends J_i^k = Σ Ω_i^k to its epoch totals.
GossipOutcome gossip_until_stable(std::vector<AgentNode>& nodes, int k);

struct FinalSelection {
  int k_star_index = 0;  ///< 0-based epoch with least total cost
  std::vector<double> phases;
  std::vector<Vec2> positions;
  double stored_cost = 0.0;
  double recomputed_cost = 0.0;
};

/// Argmin over epochs (ties to the lowest k); restores every node from C^{k*}.
FinalSelection select_and_finalize(std::vector<AgentNode>& nodes, const Domain& domain,
                                   const CostModel& cost, double kappa_phi);

struct EpochLog {
  int k = 0;  ///< 0-based
  std::size_t anchor = 0;
  std::vector<double> phases;
  std::vector<Vec2> positions;
  double total_cost = 0.0;
  GossipOutcome gossip;
  int halvings = 0;
};

struct SearchResult {
  int k_star = 0;
  std::vector<EpochLog> epochs;
  FinalSelection final;
};

class SearchError : public std::runtime_error {
 public:
  SearchError(const std::string& what, std::vector<EpochLog> completed)
      : std::runtime_error(what), completed_(std::move(completed)) {}
  const std::vector<EpochLog>& completed() const { return completed_; }

 private:
  std::vector<EpochLog> completed_;
};

/// Full search from an initial configuration. Throws SearchError carrying the
/// epochs completed so far if an epoch fails to integrate.
SearchResult run_search(const Domain& domain, const CostModel& cost, const CoupledState& initial,
                        const SearchConfig& config, const EpochParams& params);

}  // namespace coverage

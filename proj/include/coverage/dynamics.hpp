#pragma once

// Coupled bar/agent dynamics and the guarded fixed-step RK4 integrator.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "coverage/agents.hpp"
#include "coverage/domain.hpp"
#include "coverage/partition.hpp"

namespace coverage {

/// Stacked integration state: unwrapped bar phases and agent positions.
struct CoupledState {
  std::vector<double> phi;
  std::vector<Vec2> p;

  std::size_t size() const { return phi.size(); }

  CoupledState& operator+=(const CoupledState& o);
  CoupledState& operator*=(double s);
  friend CoupledState operator+(CoupledState a, const CoupledState& b) { return a += b; }
  friend CoupledState operator*(double s, CoupledState a) { return a *= s; }
};

/// Classical four-stage Runge–Kutta step for any state supporting `+` and
/// scalar `*`.
template <class State, class Derivative>
State rk4_step(const State& x, Derivative&& f, double dt) {
  const State k1 = f(x);
  const State k2 = f(x + (0.5 * dt) * k1);
  const State k3 = f(x + (0.5 * dt) * k2);
  const State k4 = f(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Everything the right-hand side needs at one state.
struct Evaluation {
  WorkloadVector workloads;
  std::vector<double> phi_rates;
  std::vector<Vec2> targets;
  std::vector<Vec2> centroids;
};

/// φ̇_i = κ_φ (m_i − m_{i−1}) (zero for a pinned bar), ṗ_i = −κ_p (p_i − p_i*).
class CoupledSystem {
 public:
  CoupledSystem(const Domain& domain, CostModel cost, double kappa_phi, double kappa_p,
                std::optional<std::size_t> pinned_bar = std::nullopt);

  const Domain& domain() const { return *domain_; }
  const CostModel& cost() const { return cost_; }
  double kappa_phi() const { return kappa_phi_; }
  double kappa_p() const { return kappa_p_; }
  std::optional<std::size_t> pinned_bar() const { return pinned_; }

  PartitionState partition(const CoupledState& x) const {
    return PartitionState::from_unwrapped(x.phi, kappa_phi_);
  }

  Evaluation evaluate(const CoupledState& x) const;
  CoupledState derivative(const CoupledState& x) const;
  CoupledState operator()(const CoupledState& x) const { return derivative(x); }

 private:
  const Domain* domain_;
  CostModel cost_;
  double kappa_phi_;
  double kappa_p_;
  std::optional<std::size_t> pinned_;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative workload floor below which a step is rejected (fraction of m̄).
inline constexpr double kWorkloadFloor = 1e-9;
inline constexpr int kMaxHalvings = 8;

struct StepOutcome {
  CoupledState state;
  int halvings = 0;
};

/// Advances by dt with RK4. If the result would push any workload to
/// kWorkloadFloor·m̄ or below, the step is split in halves (up to kMaxHalvings
/// levels); exhausting the halvings throws IntegrationError.
StepOutcome guarded_step(const CoupledSystem& system, const CoupledState& x, double dt);

}  // namespace coverage

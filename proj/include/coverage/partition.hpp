#pragma once

// Partition bars, sub-region workloads and the load-balancing dynamics
// φ̇_i = κ_φ (m_i − m_{i−1}) together with their convergence certificates.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "coverage/domain.hpp"

namespace coverage {

/// Minimum separation accepted between initial bar phases.
inline constexpr double kMinPhaseSeparation = 1e-6;

class InvalidPartition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bar phases. Unwrapped phases are the integration state; wrapped phases are
/// derived for reporting and branch selection.
class PartitionState {
 public:
  PartitionState() = default;

  /// Validates strictly increasing phases in [0, 2π), separated (cyclically)
  /// by at least kMinPhaseSeparation.
  static PartitionState from_phases(std::vector<double> phases, double kappa_phi);

  /// Takes an unwrapped phase vector as-is (used by the integrator).
  static PartitionState from_unwrapped(std::vector<double> unwrapped, double kappa_phi);

  std::size_t size() const { return unwrapped_.size(); }
  double kappa_phi() const { return kappa_phi_; }

  const std::vector<double>& unwrapped() const { return unwrapped_; }
  std::vector<double>& unwrapped() { return unwrapped_; }
  std::vector<double> wrapped() const;

  /// Unwrapped angular span [lo, hi] of sub-region i (0-based), bounded by
  /// bars i and i+1 (bar N wraps to bar 1 shifted by 2π).
  std::pair<double, double> slice(std::size_t i) const;

  double mean_phase() const;

 private:
  std::vector<double> unwrapped_;
  double kappa_phi_ = 0.0;
};

/// Span of sub-region i computed from wrapped phases with the explicit
/// wrap-around branch (φ_{i+1} < φ_i adds 2π).
std::pair<double, double> wrapped_slice(const std::vector<double>& wrapped_phases,
                                        std::size_t i);

struct WorkloadVector {
  std::vector<double> m;
  double mean = 0.0;  ///< total workload / N

  std::size_t size() const { return m.size(); }
  double min() const;
  /// max_i |m_i − m̄| / m̄.
  double max_relative_imbalance() const;
};

double subregion_workload(const PartitionState& state, const Domain& domain, std::size_t i);

WorkloadVector workloads(const PartitionState& state, const Domain& domain);

/// κ_φ (m_i − m_{i−1}) with m_0 = m_N.
std::vector<double> partition_rates(const WorkloadVector& w, double kappa_phi);

std::vector<double> partition_rhs(const PartitionState& state, const Domain& domain);

/// V = ½ Σ (m_i − m̄)².
double lyapunov_V(const WorkloadVector& w);
double lyapunov_V(const PartitionState& state, const Domain& domain);

/// Σ (m_i − m_{i−1})² over the ring.
double cyclic_difference_energy(const std::vector<double>& m);

struct SMatrix {
  Eigen::MatrixXd matrix;
  double lambda_min = 0.0;
};

/// (N−1)×(N−1) matrix of the cyclic difference form Σ (e_i − e_{i−1})² once
/// e_N = −Σ_{j<N} e_j is eliminated.
SMatrix build_S(std::size_t n);

struct ConvergenceConstants {
  double c1 = 0.0;  ///< √(2 V(0))
  double c2 = 0.0;  ///< κ_φ ω_min λ_min(S) / N
  double omega_min = 0.0;
  double lambda_min = 0.0;
};

ConvergenceConstants convergence_constants(const PartitionState& initial, const Domain& domain,
                                           int grid_size = kDefaultGridSize);

struct XiResult {
  double unwrapped = 0.0;  ///< ξ(φ) in [φ, φ + 2π]
  double wrapped = 0.0;
  double residual = 0.0;   ///< |∫_φ^ξ ω − m̄|
};

/// Phase one mean workload ahead of φ: ∫_φ^ξ ω = total/N.
XiResult xi_solve(const Domain& domain, std::size_t n, double phi);

/// Equitable configuration anchored at φ: φ, ξ(φ), ξ²(φ), ... (unwrapped).
std::vector<double> equitable_phases(const Domain& domain, std::size_t n, double phi);

/// True iff min_i m_i > floor.
bool min_workload_guard(const WorkloadVector& w, double floor);

}  // namespace coverage

#include "coverage/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace coverage {

PartitionState PartitionState::from_phases(std::vector<double> phases, double kappa_phi) {
  if (phases.empty()) {
    throw InvalidPartition("at least one partition bar is required");
  }
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (!(phases[i] >= 0.0 && phases[i] < kTwoPi)) {
      throw InvalidPartition("initial phase " + std::to_string(i + 1) + " outside [0, 2pi)");
    }
    if (i > 0 && !(phases[i] - phases[i - 1] >= kMinPhaseSeparation)) {
      throw InvalidPartition("initial phases not strictly separated");
    }
  }
  if (phases.size() > 1 && !(phases.front() + kTwoPi - phases.back() >= kMinPhaseSeparation)) {
    throw InvalidPartition("initial phases not strictly separated");
  }
  return from_unwrapped(std::move(phases), kappa_phi);
}

PartitionState PartitionState::from_unwrapped(std::vector<double> unwrapped, double kappa_phi) {
  PartitionState s;
  s.unwrapped_ = std::move(unwrapped);
  s.kappa_phi_ = kappa_phi;
  return s;
}

std::vector<double> PartitionState::wrapped() const {
  std::vector<double> w(unwrapped_.size());
  std::transform(unwrapped_.begin(), unwrapped_.end(), w.begin(), wrap_angle);
  return w;
}

std::pair<double, double> PartitionState::slice(std::size_t i) const {
  const std::size_t n = unwrapped_.size();
  if (i + 1 < n) return {unwrapped_[i], unwrapped_[i + 1]};
  return {unwrapped_[i], unwrapped_[0] + kTwoPi};
}

double PartitionState::mean_phase() const {
  return std::accumulate(unwrapped_.begin(), unwrapped_.end(), 0.0) /
         static_cast<double>(unwrapped_.size());
}

std::pair<double, double> wrapped_slice(const std::vector<double>& wrapped_phases,
                                        std::size_t i) {
  const std::size_t n = wrapped_phases.size();
  const double lo = wrapped_phases[i];
  if (n == 1) return {lo, lo + kTwoPi};
  return unwrap_interval(lo, wrapped_phases[(i + 1) % n]);
}

double WorkloadVector::min() const { return *std::min_element(m.begin(), m.end()); }

double WorkloadVector::max_relative_imbalance() const {
  double worst = 0.0;
  for (double v : m) worst = std::max(worst, std::abs(v - mean) / mean);
  return worst;
}

double subregion_workload(const PartitionState& state, const Domain& domain, std::size_t i) {
  const auto [lo, hi] = state.slice(i);
  return domain.profile().integrate(lo, hi).mass;
}

WorkloadVector workloads(const PartitionState& state, const Domain& domain) {
  const std::size_t n = state.size();
  WorkloadVector w;
  w.m.resize(n);
  w.mean = domain.total_workload() / static_cast<double>(n);
  // Adjacent slices share a bar, so evaluate each boundary primitive once.
  std::vector<double> prim(n + 1);
  for (std::size_t i = 0; i < n; ++i) prim[i] = domain.profile().primitive(state.unwrapped()[i]).mass;
  prim[n] = prim[0] + domain.total_workload();
  for (std::size_t i = 0; i < n; ++i) w.m[i] = prim[i + 1] - prim[i];
  return w;
}

std::vector<double> partition_rates(const WorkloadVector& w, double kappa_phi) {
  const std::size_t n = w.size();
  std::vector<double> rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    rates[i] = kappa_phi * (w.m[i] - w.m[(i + n - 1) % n]);
  }
  return rates;
}

std::vector<double> partition_rhs(const PartitionState& state, const Domain& domain) {
  return partition_rates(workloads(state, domain), state.kappa_phi());
}

double lyapunov_V(const WorkloadVector& w) {
  double v = 0.0;
  for (double m : w.m) v += (m - w.mean) * (m - w.mean);
  return 0.5 * v;
}

double lyapunov_V(const PartitionState& state, const Domain& domain) {
  return lyapunov_V(workloads(state, domain));
}

double cyclic_difference_energy(const std::vector<double>& m) {
  const std::size_t n = m.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = m[i] - m[(i + n - 1) % n];
    s += d * d;
  }
  return s;
}

SMatrix build_S(std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("S matrix requires N >= 2");
  }
  const auto k = static_cast<Eigen::Index>(n - 1);
  // Σ_i (e_i − e_{i−1})² is a sum of squared linear forms a·e; accumulate a aᵀ.
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
  auto add_form = [&s](const Eigen::VectorXd& a) { s += a * a.transpose(); };
  // e_N expressed in the reduced coordinates.
  const Eigen::VectorXd e_last = -Eigen::VectorXd::Ones(k);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    auto coord = [&](Eigen::Index j) -> Eigen::VectorXd {
      if (j == k) return e_last;
      Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
      u[j] = 1.0;
      return u;
    };
    const Eigen::Index prev = (i == 0) ? k : i - 1;
    add_form(coord(i) - coord(prev));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  return {s, eig.eigenvalues().minCoeff()};
}

ConvergenceConstants convergence_constants(const PartitionState& initial, const Domain& domain,
                                           int grid_size) {
  const std::size_t n = initial.size();
  ConvergenceConstants c;
  c.c1 = std::sqrt(2.0 * lyapunov_V(initial, domain));
  c.omega_min = omega_extrema(domain.region(), domain.density(), grid_size,
                              domain.quadrature())
                    .min;
  c.lambda_min = build_S(n).lambda_min;
  c.c2 = initial.kappa_phi() * c.omega_min * c.lambda_min / static_cast<double>(n);
  return c;
}

XiResult xi_solve(const Domain& domain, std::size_t n, double phi) {
  const MomentProfile& profile = domain.profile();
  const double target = domain.total_workload() / static_cast<double>(n);
  const double base = profile.primitive(phi).mass;
  auto g = [&](double x) { return profile.primitive(x).mass - base - target; };

  double lo = phi;
  double hi = phi + kTwoPi;
  if (!(g(lo) < 0.0 && g(hi) >= 0.0)) {
    throw std::runtime_error("xi: root not bracketed on [phi, phi + 2pi]");
  }
  // Bisection to a tight bracket, then Newton polish with ω as the derivative.
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(phi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double slope = profile.at(x).mass;
    const double next = x - g(x) / slope;
    if (next < phi || next > phi + kTwoPi) break;
    x = next;
  }
  return {x, wrap_angle(x), std::abs(g(x))};
}

std::vector<double> equitable_phases(const Domain& domain, std::size_t n, double phi) {
  std::vector<double> phases(n);
  phases[0] = phi;
  for (std::size_t i = 1; i < n; ++i) phases[i] = xi_solve(domain, n, phases[i - 1]).unwrapped;
  return phases;
}

bool min_workload_guard(const WorkloadVector& w, double floor) {
  return !w.m.empty() && w.min() > floor;
}

}  // namespace coverage

#include "coverage/dynamics.hpp"

#include <cmath>

namespace coverage {

CoupledState& CoupledState::operator+=(const CoupledState& o) {
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += o.phi[i];
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += o.p[i];
  return *this;
}

CoupledState& CoupledState::operator*=(double s) {
  for (double& v : phi) v *= s;
  for (Vec2& v : p) v *= s;
  return *this;
}

CoupledSystem::CoupledSystem(const Domain& domain, CostModel cost, double kappa_phi,
                             double kappa_p, std::optional<std::size_t> pinned_bar)
    : domain_(&domain),
      cost_(cost),
      kappa_phi_(kappa_phi),
      kappa_p_(kappa_p),
      pinned_(pinned_bar) {}

Evaluation CoupledSystem::evaluate(const CoupledState& x) const {
  const std::size_t n = x.size();
  const PartitionState part = partition(x);
  const MomentProfile& profile = domain_->profile();

  Evaluation ev;
  ev.workloads.mean = domain_->total_workload() / static_cast<double>(n);
  ev.workloads.m.resize(n);
  ev.centroids.resize(n);

  std::vector<MomentSet> prim(n + 1);
  for (std::size_t i = 0; i < n; ++i) prim[i] = profile.primitive(x.phi[i]);
  prim[n] = profile.primitive(x.phi[0] + kTwoPi);
  const Vec2& origin = domain_->region().origin();
  for (std::size_t i = 0; i < n; ++i) {
    const MomentSet s = prim[i + 1] - prim[i];
    ev.workloads.m[i] = s.mass;
    ev.centroids[i] = origin + Vec2(s.mx / s.mass, s.my / s.mass);
  }

  ev.phi_rates = partition_rates(ev.workloads, kappa_phi_);
  if (pinned_) ev.phi_rates[*pinned_] = 0.0;

  if (cost_.kind() == CostModel::Kind::kSquaredDistance) {
    ev.targets = ev.centroids;
  } else {
    ev.targets.resize(n);
    for (std::size_t i = 0; i < n; ++i) ev.targets[i] = optimal_target(part, *domain_, cost_, i);
  }
  return ev;
}

CoupledState CoupledSystem::derivative(const CoupledState& x) const {
  const Evaluation ev = evaluate(x);
  CoupledState d;
  d.phi = ev.phi_rates;
  d.p.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d.p[i] = -kappa_p_ * (x.p[i] - ev.targets[i]);
  return d;
}

namespace {

bool acceptable(const CoupledSystem& system, const CoupledState& x) {
  for (double v : x.phi) {
    if (!std::isfinite(v)) return false;
  }
  for (const Vec2& v : x.p) {
    if (!v.allFinite()) return false;
  }
  const WorkloadVector w = workloads(system.partition(x), system.domain());
  return min_workload_guard(w, kWorkloadFloor * w.mean);
}

}  // namespace

StepOutcome guarded_step(const CoupledSystem& system, const CoupledState& x, double dt) {
  StepOutcome out{x, 0};
  double remaining = dt;
  double h = dt;
  while (remaining > 0.0) {
    const double step = std::min(h, remaining);
    CoupledState next = rk4_step(out.state, system, step);
    if (acceptable(system, next)) {
      out.state = std::move(next);
      remaining -= step;
      if (remaining <= 1e-15 * dt) break;
      continue;
    }
    if (out.halvings == kMaxHalvings) {
      throw IntegrationError("workload floor violated after " + std::to_string(kMaxHalvings) +
                             " step halvings");
    }
    h = 0.5 * step;
    ++out.halvings;
  }
  return out;
}

}  // namespace coverage

#pragma once

// Sub-region centroids, the service cost J and its derivatives, per-agent
// targets and the proportional control law u_i = −κ_p (p_i − p_i*).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "coverage/domain.hpp"
#include "coverage/partition.hpp"

namespace coverage {

struct AgentState {
  std::vector<Vec2> positions;
  std::vector<Vec2> targets;
  double kappa_p = 0.0;

  std::size_t size() const { return positions.size(); }
};

/// Service cost f(p, q) of an agent at p handling an event at q.
class CostModel {
 public:
  enum class Kind { kSquaredDistance, kGeneric };
  /// Built-in forms available to the generic path.
  enum class Form { kSquared, kQuartic, kPseudoHuber };

  static CostModel squared_distance();
  /// Evaluated through numerical quadrature and descent, never analytically.
  static CostModel generic(Form form, double delta = 1.0);

  Kind kind() const { return kind_; }
  Form form() const { return form_; }
  double delta() const { return delta_; }

  double value(const Vec2& p, const Vec2& q) const;
  /// ∂f/∂p.
  Vec2 gradient(const Vec2& p, const Vec2& q) const;

  bool operator==(const CostModel&) const = default;

 private:
  Kind kind_ = Kind::kSquaredDistance;
  Form form_ = Form::kSquared;
  double delta_ = 1.0;
};

std::string to_string(CostModel::Form form);

class DegenerateSubregion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density-weighted centroid of sub-region i.
Vec2 centroid(const PartitionState& partition, const Domain& domain, std::size_t i);

/// Centroid of an arbitrary unwrapped slice [lo, hi].
Vec2 slice_centroid(const Domain& domain, double lo, double hi);

/// ∫_{E_i} f(p, q) ρ(q) dq for an agent at p.
double subregion_cost(const PartitionState& partition, const Domain& domain,
                      const CostModel& cost, std::size_t i, const Vec2& p);

double cost_J(const PartitionState& partition, const AgentState& agents, const Domain& domain,
              const CostModel& cost);

/// Per-sub-region cost terms J_{E_i}.
std::vector<double> subregion_costs(const PartitionState& partition, const AgentState& agents,
                                    const Domain& domain, const CostModel& cost);

/// ∇_{p_i} J at an explicit position.
Vec2 grad_J_at(const PartitionState& partition, const Domain& domain, const CostModel& cost,
               std::size_t i, const Vec2& p);

Vec2 grad_J(const PartitionState& partition, const AgentState& agents, const Domain& domain,
            const CostModel& cost, std::size_t i);

Vec2 control_input(const AgentState& agents, std::size_t i);

/// p_i*: the centroid for squared distance, otherwise the least-cost point
/// among descent critical points inside E_i and a boundary sweep of E_i.
Vec2 optimal_target(const PartitionState& partition, const Domain& domain,
                    const CostModel& cost, std::size_t i);

/// True iff θ (any real) lies inside the unwrapped slice i and the point is in Ω.
bool in_subregion(const PartitionState& partition, const Domain& domain, std::size_t i,
                  const Vec2& p);

struct Box {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
};

/// Sampled boundary sign test ⟨∇J(Az + b), z⟩ > 0 on ∂[−1,1]². A true result
/// certifies (at sample resolution) a critical point inside the box; false
/// makes no claim.
bool miranda_existence_test(const PartitionState& partition, const Domain& domain,
                            const CostModel& cost, std::size_t i, const Box& box,
                            int boundary_samples);

/// η(θ, s) = ∫ ‖s − q(r, θ)‖² ρ r dr along the ray at θ.
double eta(const AnnularRegion& region, const DensityField& density, double theta,
           const Vec2& s, const QuadratureOptions& opts = {});

struct HessianResult {
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Zero();
  int rank = 0;
};

HessianResult hessian_at(const PartitionState& partition, const Domain& domain,
                         const CostModel& cost, std::size_t i, const Vec2& p);

HessianResult hessian_J(const PartitionState& partition, const AgentState& agents,
                        const Domain& domain, const CostModel& cost, std::size_t i);

/// H = Σ m_i ‖p_i − c_{E_i}‖².
double centroid_energy(const std::vector<double>& m, const std::vector<Vec2>& positions,
                       const std::vector<Vec2>& centroids);

}  // namespace coverage

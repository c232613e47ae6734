#include "coverage/agents.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace coverage {

CostModel CostModel::squared_distance() { return CostModel{}; }

CostModel CostModel::generic(Form form, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("cost delta must be positive");
  CostModel c;
  c.kind_ = Kind::kGeneric;
  c.form_ = form;
  c.delta_ = delta;
  return c;
}

double CostModel::value(const Vec2& p, const Vec2& q) const {
  const double d2 = (p - q).squaredNorm();
  if (kind_ == Kind::kSquaredDistance) return d2;
  switch (form_) {
    case Form::kSquared:
      return d2;
    case Form::kQuartic:
      return d2 * d2;
    case Form::kPseudoHuber:
      return delta_ * delta_ * (std::sqrt(1.0 + d2 / (delta_ * delta_)) - 1.0);
  }
  return d2;
}

Vec2 CostModel::gradient(const Vec2& p, const Vec2& q) const {
  const Vec2 d = p - q;
  if (kind_ == Kind::kSquaredDistance) return 2.0 * d;
  switch (form_) {
    case Form::kSquared:
      return 2.0 * d;
    case Form::kQuartic:
      return 4.0 * d.squaredNorm() * d;
    case Form::kPseudoHuber:
      return d / std::sqrt(1.0 + d.squaredNorm() / (delta_ * delta_));
  }
  return 2.0 * d;
}

std::string to_string(CostModel::Form form) {
  switch (form) {
    case CostModel::Form::kSquared:
      return "squared";
    case CostModel::Form::kQuartic:
      return "quartic";
    case CostModel::Form::kPseudoHuber:
      return "pseudo_huber";
  }
  return "unknown";
}

namespace {

bool analytic(const CostModel& cost) {
  return cost.kind() == CostModel::Kind::kSquaredDistance;
}

MomentSet slice_moments(const PartitionState& partition, const Domain& domain, std::size_t i) {
  const auto [lo, hi] = partition.slice(i);
  return domain.profile().integrate(lo, hi);
}

// Gradient magnitude of f for a displacement of one region radius; sets the
// scale for convergence and finite-difference steps.
double gradient_scale(const Domain& domain, const CostModel& cost, double mass) {
  const double radius = domain.region().max_outer_radius();
  return mass * cost.gradient(Vec2(radius, 0.0), Vec2::Zero()).norm();
}

}  // namespace

Vec2 slice_centroid(const Domain& domain, double lo, double hi) {
  const MomentSet s = domain.profile().integrate(lo, hi);
  if (!(s.mass > 0.0)) {
    throw DegenerateSubregion("sub-region has zero workload");
  }
  return domain.region().origin() + Vec2(s.mx / s.mass, s.my / s.mass);
}

Vec2 centroid(const PartitionState& partition, const Domain& domain, std::size_t i) {
  const auto [lo, hi] = partition.slice(i);
  return slice_centroid(domain, lo, hi);
}

double subregion_cost(const PartitionState& partition, const Domain& domain,
                      const CostModel& cost, std::size_t i, const Vec2& p) {
  if (analytic(cost)) {
    const MomentSet s = slice_moments(partition, domain, i);
    const Vec2 rel = p - domain.region().origin();
    return s.mass * rel.squaredNorm() - 2.0 * (rel.x() * s.mx + rel.y() * s.my) + s.m2;
  }
  const auto [lo, hi] = partition.slice(i);
  return slice_integral(
      domain.region(), domain.density(), lo, hi,
      [&](const Vec2& q) { return cost.value(p, q); }, domain.quadrature());
}

std::vector<double> subregion_costs(const PartitionState& partition, const AgentState& agents,
                                    const Domain& domain, const CostModel& cost) {
  std::vector<double> out(partition.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = subregion_cost(partition, domain, cost, i, agents.positions[i]);
  }
  return out;
}

double cost_J(const PartitionState& partition, const AgentState& agents, const Domain& domain,
              const CostModel& cost) {
  if (agents.size() != partition.size()) {
    throw std::invalid_argument("agent and partition counts differ");
  }
  double j = 0.0;
  for (double v : subregion_costs(partition, agents, domain, cost)) j += v;
  return j;
}

Vec2 grad_J_at(const PartitionState& partition, const Domain& domain, const CostModel& cost,
               std::size_t i, const Vec2& p) {
  if (analytic(cost)) {
    const MomentSet s = slice_moments(partition, domain, i);
    const Vec2 rel = p - domain.region().origin();
    return 2.0 * (s.mass * rel - Vec2(s.mx, s.my));
  }
  const auto [lo, hi] = partition.slice(i);
  return slice_integral(
      domain.region(), domain.density(), lo, hi,
      [&](const Vec2& q) -> Vec2 { return cost.gradient(p, q); }, domain.quadrature());
}

Vec2 grad_J(const PartitionState& partition, const AgentState& agents, const Domain& domain,
            const CostModel& cost, std::size_t i) {
  return grad_J_at(partition, domain, cost, i, agents.positions[i]);
}

Vec2 control_input(const AgentState& agents, std::size_t i) {
  return -agents.kappa_p * (agents.positions[i] - agents.targets[i]);
}

bool in_subregion(const PartitionState& partition, const Domain& domain, std::size_t i,
                  const Vec2& p) {
  if (!contains(domain.region(), p)) return false;
  const auto [lo, hi] = partition.slice(i);
  const Vec2 d = p - domain.region().origin();
  const double theta = lo + wrap_angle(std::atan2(d.y(), d.x()) - lo);
  return theta <= hi;
}

HessianResult hessian_at(const PartitionState& partition, const Domain& domain,
                         const CostModel& cost, std::size_t i, const Vec2& p) {
  HessianResult h;
  if (analytic(cost)) {
    h.matrix = 2.0 * subregion_workload(partition, domain, i) * Eigen::Matrix2d::Identity();
  } else {
    const double step = 1e-4 * domain.region().max_outer_radius();
    for (int axis = 0; axis < 2; ++axis) {
      Vec2 e = Vec2::Zero();
      e[axis] = step;
      h.matrix.col(axis) = (grad_J_at(partition, domain, cost, i, p + e) -
                            grad_J_at(partition, domain, cost, i, p - e)) /
                           (2.0 * step);
    }
    h.matrix = 0.5 * (h.matrix + h.matrix.transpose()).eval();
  }
  const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2d>(h.matrix).singularValues();
  h.rank = sv[0] > 0.0 ? (sv[1] > 1e-8 * sv[0] ? 2 : 1) : 0;
  return h;
}

HessianResult hessian_J(const PartitionState& partition, const AgentState& agents,
                        const Domain& domain, const CostModel& cost, std::size_t i) {
  return hessian_at(partition, domain, cost, i, agents.positions[i]);
}

namespace {

struct DescentOutcome {
  Vec2 point = Vec2::Zero();
  double residual = 0.0;
  bool converged = false;
  bool left_subregion = false;
};

DescentOutcome descend(const PartitionState& partition, const Domain& domain,
                       const CostModel& cost, std::size_t i, Vec2 p, double grad_tol,
                       double step_tol) {
  DescentOutcome out;
  double f = subregion_cost(partition, domain, cost, i, p);
  for (int it = 0; it < 60; ++it) {
    const Vec2 g = grad_J_at(partition, domain, cost, i, p);
    out.residual = g.norm();
    if (out.residual <= grad_tol) {
      out.point = p;
      out.converged = true;
      return out;
    }
    const Eigen::Matrix2d h = hessian_at(partition, domain, cost, i, p).matrix;
    Eigen::LLT<Eigen::Matrix2d> llt(h);
    Vec2 dir = (llt.info() == Eigen::Success) ? Vec2(-llt.solve(g)) : Vec2(-g / g.norm());
    if (llt.info() != Eigen::Success) {
      dir *= 0.1 * domain.region().max_outer_radius();
    }
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Vec2 trial = p + alpha * dir;
      const double ft = subregion_cost(partition, domain, cost, i, trial);
      if (ft <= f + 1e-4 * alpha * g.dot(dir)) {
        if ((alpha * dir).norm() <= step_tol) {
          out.point = trial;
          out.converged = true;
          return out;
        }
        p = trial;
        f = ft;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No decrease at any step length: p is a minimizer to working precision.
      out.point = p;
      out.converged = true;
      return out;
    }
    if (!in_subregion(partition, domain, i, p)) {
      out.point = p;
      out.left_subregion = true;
      return out;
    }
  }
  out.point = p;
  return out;
}

}  // namespace

Vec2 optimal_target(const PartitionState& partition, const Domain& domain,
                    const CostModel& cost, std::size_t i) {
  if (analytic(cost)) return centroid(partition, domain, i);

  const double mass = subregion_workload(partition, domain, i);
  if (!(mass > 0.0)) throw DegenerateSubregion("sub-region has zero workload");
  const AnnularRegion& region = domain.region();
  const auto [lo, hi] = partition.slice(i);
  const double grad_tol = 1e-9 * gradient_scale(domain, cost, mass);
  const double step_tol = 1e-10 * region.max_outer_radius();

  Vec2 best = Vec2::Zero();
  double best_cost = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec2& p) {
    const double c = subregion_cost(partition, domain, cost, i, p);
    if (c < best_cost) {
      best_cost = c;
      best = p;
    }
  };

  constexpr std::array<double, 3> fractions{0.25, 0.5, 0.75};
  std::vector<double> residuals;
  bool any_resolved = false;
  for (double ft : fractions) {
    const double theta = lo + ft * (hi - lo);
    for (double fr : fractions) {
      const double r = region.r_in(theta) + fr * (region.r_out(theta) - region.r_in(theta));
      const DescentOutcome d =
          descend(partition, domain, cost, i, region.point(r, theta), grad_tol, step_tol);
      residuals.push_back(d.residual);
      if (d.converged || d.left_subregion) any_resolved = true;
      if (d.converged && in_subregion(partition, domain, i, d.point)) consider(d.point);
    }
  }
  if (!any_resolved) {
    std::ostringstream msg;
    msg << "target search did not converge; residual gradients:";
    for (double r : residuals) msg << ' ' << r;
    throw std::runtime_error(msg.str());
  }

  // Boundary sweep: 16 samples on each of the two bars and two arcs.
  constexpr int kPerSide = 16;
  for (int k = 0; k < kPerSide; ++k) {
    const double u = static_cast<double>(k) / kPerSide;
    const double theta = lo + u * (hi - lo);
    const double back = hi - u * (hi - lo);
    consider(region.point(region.r_in(lo) + u * (region.r_out(lo) - region.r_in(lo)), lo));
    consider(region.point(region.r_out(theta), theta));
    consider(region.point(region.r_out(hi) - u * (region.r_out(hi) - region.r_in(hi)), hi));
    consider(region.point(region.r_in(back), back));
  }
  return best;
}

bool miranda_existence_test(const PartitionState& partition, const Domain& domain,
                            const CostModel& cost, std::size_t i, const Box& box,
                            int boundary_samples) {
  if (!(box.x_hi > box.x_lo && box.y_hi > box.y_lo) || boundary_samples < 1) {
    throw std::invalid_argument("box must have positive side lengths");
  }
  const Eigen::Vector2d half(0.5 * (box.x_hi - box.x_lo), 0.5 * (box.y_hi - box.y_lo));
  const Vec2 center(0.5 * (box.x_hi + box.x_lo), 0.5 * (box.y_hi + box.y_lo));
  for (int j = 0; j < boundary_samples; ++j) {
    // Perimeter parameter s ∈ [0, 8) walking ∂[−1,1]² counter-clockwise from (−1,−1).
    const double s = 8.0 * j / boundary_samples;
    Vec2 z;
    if (s < 2.0) {
      z = Vec2(-1.0 + s, -1.0);
    } else if (s < 4.0) {
      z = Vec2(1.0, -1.0 + (s - 2.0));
    } else if (s < 6.0) {
      z = Vec2(1.0 - (s - 4.0), 1.0);
    } else {
      z = Vec2(-1.0, 1.0 - (s - 6.0));
    }
    const Vec2 p = center + half.cwiseProduct(z);
    if (!(grad_J_at(partition, domain, cost, i, p).dot(z) > 0.0)) return false;
  }
  return true;
}

double eta(const AnnularRegion& region, const DensityField& density, double theta,
           const Vec2& s, const QuadratureOptions& opts) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  const Eigen::Vector4d m = integrate(
      [&](double r) {
        const double w = density(r, theta) * r;
        return Eigen::Vector4d(w * r * r, w, w * r * c, w * r * sn);
      },
      region.r_in(theta), region.r_out(theta), opts);
  const Vec2 rel = s - region.origin();
  return m[0] + rel.squaredNorm() * m[1] - 2.0 * (rel.x() * m[2] + rel.y() * m[3]);
}

double centroid_energy(const std::vector<double>& m, const std::vector<Vec2>& positions,
                       const std::vector<Vec2>& centroids) {
  double h = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) h += m[i] * (positions[i] - centroids[i]).squaredNorm();
  return h;
}

}  // namespace coverage

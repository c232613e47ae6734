#pragma once

// Annular coverage region, workload density and the polar quadrature
// primitives shared by the partition, agent and simulation layers.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "coverage/quadrature.hpp"

namespace coverage {

using Vec2 = Eigen::Vector2d;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2π).
double wrap_angle(double theta);

/// Shortest distance between two angles on the circle, in [0, π].
double circular_distance(double a, double b);

/// Thrown when a region or density fails validation.
class InvalidGeometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Truncated Fourier series r(θ) = mean + Σ cos_k cos(kθ) + Σ sin_k sin(kθ),
/// with k starting at 1 for the first entry of each coefficient list.
struct PolarCurve {
  double mean = 1.0;
  std::vector<double> cosine_coeffs;
  std::vector<double> sine_coeffs;

  double operator()(double theta) const;

  bool operator==(const PolarCurve&) const = default;
};

double evaluate_curve(const PolarCurve& curve, double theta);

inline constexpr int kDefaultGridSize = 2048;

/// The set {(r, θ) : r_in(θ) ≤ r ≤ r_out(θ)} about `origin`.
class AnnularRegion {
 public:
  AnnularRegion(PolarCurve inner, PolarCurve outer, Vec2 origin = Vec2::Zero(),
                int validation_grid_size = kDefaultGridSize);

  /// Circular annulus, handy for tests and the uniform reference scenarios.
  static AnnularRegion circular(double r_in, double r_out);

  const PolarCurve& inner() const { return inner_; }
  const PolarCurve& outer() const { return outer_; }
  const Vec2& origin() const { return origin_; }
  int validation_grid_size() const { return grid_size_; }

  double r_in(double theta) const { return inner_(theta); }
  double r_out(double theta) const { return outer_(theta); }

  /// Largest outer radius seen on the validation grid.
  double max_outer_radius() const { return max_outer_; }

  /// Region-frame point at polar coordinates (r, θ) about the origin.
  Vec2 point(double r, double theta) const {
    return origin_ + Vec2(r * std::cos(theta), r * std::sin(theta));
  }

 private:
  PolarCurve inner_;
  PolarCurve outer_;
  Vec2 origin_;
  int grid_size_;
  double max_outer_ = 0.0;
};

/// Outcome of a membership query. `degenerate_angle` is set when the point
/// coincides with the origin and the polar angle is undefined.
struct Containment {
  bool inside = false;
  bool degenerate_angle = false;

  explicit operator bool() const { return inside; }
};

Containment contains(const AnnularRegion& region, const Vec2& point);

/// Workload density ρ(r, θ). All built-in kinds are polynomial in r with
/// θ-dependent coefficients.
class DensityField {
 public:
  enum class Kind { kUniform, kPaperCaseStudy, kRadialPolynomialTimesAngular };

  /// ρ = value.
  static DensityField uniform(double value = 1.0);
  /// ρ = scale·exp(sin²θ + cos θ) + radial_coeff·r.
  static DensityField case_study(double scale = 1.0, double radial_coeff = 0.01);
  /// ρ = P(r)·A(θ), P(r) = Σ radial[j] r^j, A(θ) = mean + Σ cos_k cos kθ + Σ sin_k sin kθ.
  static DensityField radial_times_angular(std::vector<double> radial, PolarCurve angular);

  Kind kind() const { return kind_; }
  const std::vector<double>& parameters() const { return params_; }
  const PolarCurve& angular() const { return angular_; }

  double operator()(double r, double theta) const;

  /// Same field multiplied by a positive constant.
  DensityField scaled(double factor) const;

  /// (ρ_lower, ρ_upper) sampled over grid_size angles × grid_size/8 radii of Ω.
  std::pair<double, double> bounds(const AnnularRegion& region,
                                   int grid_size = kDefaultGridSize) const;

  /// Throws InvalidGeometry unless ρ_lower > 0 on the sampling grid.
  void validate(const AnnularRegion& region, int grid_size = kDefaultGridSize) const;

  bool operator==(const DensityField&) const = default;

 private:
  Kind kind_ = Kind::kUniform;
  std::vector<double> params_{1.0};
  PolarCurve angular_{1.0, {}, {}};
};

std::string to_string(DensityField::Kind kind);

/// Radial weights for the moments ∫ w(r, θ) ρ r dr.
enum class Moment {
  kPlain,  ///< w = 1, gives ω(θ)
  kX,      ///< w = r cos θ
  kY,      ///< w = r sin θ
  kR2,     ///< w = r²
};

/// Point-valued weight w(q) for the cost moments, q in region coordinates.
using PointWeight = std::function<double(const Vec2&)>;

double radial_moment(const AnnularRegion& region, const DensityField& density,
                     double theta, Moment weight, const QuadratureOptions& opts = {});

double radial_moment(const AnnularRegion& region, const DensityField& density,
                     double theta, const PointWeight& weight,
                     const QuadratureOptions& opts = {});

/// Angular span [lo, hi] of a slice; hi < lo wraps through 2π.
std::pair<double, double> unwrap_interval(double phi_lo, double phi_hi);

double region_integral(const AnnularRegion& region, const DensityField& density,
                       double phi_lo, double phi_hi, Moment integrand,
                       const QuadratureOptions& opts = {});

double region_integral(const AnnularRegion& region, const DensityField& density,
                       double phi_lo, double phi_hi, const PointWeight& integrand,
                       const QuadratureOptions& opts = {});

/// Vector-valued slice integral ∫∫ g(q) ρ(q) dq over θ ∈ [lo, hi] (no wrapping
/// applied; callers pass an already unwrapped interval).
template <class G>
auto slice_integral(const AnnularRegion& region, const DensityField& density, double lo,
                    double hi, G&& integrand, const QuadratureOptions& opts = {}) {
  auto radial = [&](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return integrate(
        [&](double r) {
          const Vec2 q = region.origin() + Vec2(r * c, r * s);
          // Evaluate into a plain value so no expression outlives q.
          typename detail::plain_result<std::decay_t<decltype(integrand(q))>>::type v =
              integrand(q);
          v *= density(r, theta) * r;
          return v;
        },
        region.r_in(theta), region.r_out(theta), opts);
  };
  return integrate(radial, lo, hi, opts);
}

struct OmegaExtrema {
  double min = 0.0;
  double max = 0.0;
};

/// Min and max of ω(θ) over a uniform grid of `grid_size` angles (≥ 64).
OmegaExtrema omega_extrema(const AnnularRegion& region, const DensityField& density,
                           int grid_size = kDefaultGridSize,
                           const QuadratureOptions& opts = {});

}  // namespace coverage

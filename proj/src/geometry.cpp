#include "coverage/geometry.hpp"

#include <algorithm>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

namespace coverage {

namespace detail {

const GaussLegendre16& gauss_legendre_16() {
  static const GaussLegendre16 rule = [] {
    using Rule = boost::math::quadrature::gauss<double, 16>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    GaussLegendre16 r{};
    // Boost stores the 8 non-negative abscissae of the symmetric rule.
    for (std::size_t k = 0; k < x.size(); ++k) {
      r.nodes[7 - k] = -x[k];
      r.weights[7 - k] = w[k];
      r.nodes[8 + k] = x[k];
      r.weights[8 + k] = w[k];
    }
    return r;
  }();
  return rule;
}

}  // namespace detail

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double circular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

double PolarCurve::operator()(double theta) const {
  double r = mean;
  for (std::size_t k = 0; k < cosine_coeffs.size(); ++k) {
    r += cosine_coeffs[k] * std::cos(static_cast<double>(k + 1) * theta);
  }
  for (std::size_t k = 0; k < sine_coeffs.size(); ++k) {
    r += sine_coeffs[k] * std::sin(static_cast<double>(k + 1) * theta);
  }
  return r;
}

double evaluate_curve(const PolarCurve& curve, double theta) { return curve(theta); }

AnnularRegion::AnnularRegion(PolarCurve inner, PolarCurve outer, Vec2 origin,
                             int validation_grid_size)
    : inner_(std::move(inner)),
      outer_(std::move(outer)),
      origin_(std::move(origin)),
      grid_size_(validation_grid_size) {
  if (grid_size_ < 8) {
    throw InvalidGeometry("region validation grid must have at least 8 samples");
  }
  for (int j = 0; j < grid_size_; ++j) {
    const double theta = kTwoPi * j / grid_size_;
    const double ri = inner_(theta);
    const double ro = outer_(theta);
    if (!(ri > 0.0)) {
      throw InvalidGeometry("inner curve is not positive at theta=" + std::to_string(theta));
    }
    if (!(ro > ri)) {
      throw InvalidGeometry("outer curve does not exceed inner curve at theta=" +
                            std::to_string(theta));
    }
    max_outer_ = std::max(max_outer_, ro);
  }
}

AnnularRegion AnnularRegion::circular(double r_in, double r_out) {
  return AnnularRegion(PolarCurve{r_in, {}, {}}, PolarCurve{r_out, {}, {}});
}

Containment contains(const AnnularRegion& region, const Vec2& point) {
  const Vec2 d = point - region.origin();
  const double r = d.norm();
  if (r == 0.0) {
    return {false, true};
  }
  const double theta = std::atan2(d.y(), d.x());
  return {region.r_in(theta) <= r && r <= region.r_out(theta), false};
}

DensityField DensityField::uniform(double value) {
  DensityField d;
  d.kind_ = Kind::kUniform;
  d.params_ = {value};
  return d;
}

DensityField DensityField::case_study(double scale, double radial_coeff) {
  DensityField d;
  d.kind_ = Kind::kPaperCaseStudy;
  d.params_ = {scale, radial_coeff};
  return d;
}

DensityField DensityField::radial_times_angular(std::vector<double> radial,
                                                PolarCurve angular) {
  if (radial.empty()) {
    throw InvalidGeometry("radial polynomial needs at least one coefficient");
  }
  DensityField d;
  d.kind_ = Kind::kRadialPolynomialTimesAngular;
  d.params_ = std::move(radial);
  d.angular_ = std::move(angular);
  return d;
}

double DensityField::operator()(double r, double theta) const {
  switch (kind_) {
    case Kind::kUniform:
      return params_[0];
    case Kind::kPaperCaseStudy: {
      const double s = std::sin(theta);
      return params_[0] * std::exp(s * s + std::cos(theta)) + params_[1] * r;
    }
    case Kind::kRadialPolynomialTimesAngular: {
      double poly = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) poly = poly * r + *it;
      return poly * angular_(theta);
    }
  }
  return 0.0;
}

DensityField DensityField::scaled(double factor) const {
  // Every built-in kind is linear in its parameter list.
  DensityField d = *this;
  for (double& p : d.params_) p *= factor;
  return d;
}

std::pair<double, double> DensityField::bounds(const AnnularRegion& region,
                                               int grid_size) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const int radial_samples = std::max(2, grid_size / 8);
  for (int j = 0; j < grid_size; ++j) {
    const double theta = kTwoPi * j / grid_size;
    const double ri = region.r_in(theta);
    const double ro = region.r_out(theta);
    for (int k = 0; k <= radial_samples; ++k) {
      const double r = ri + (ro - ri) * k / radial_samples;
      const double v = (*this)(r, theta);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

void DensityField::validate(const AnnularRegion& region, int grid_size) const {
  const auto [lo, hi] = bounds(region, grid_size);
  if (!(lo > 0.0) || !std::isfinite(hi)) {
    throw InvalidGeometry("density lower bound must be positive on the region (got " +
                          std::to_string(lo) + ")");
  }
}

std::string to_string(DensityField::Kind kind) {
  switch (kind) {
    case DensityField::Kind::kUniform:
      return "uniform";
    case DensityField::Kind::kPaperCaseStudy:
      return "paper_case_study";
    case DensityField::Kind::kRadialPolynomialTimesAngular:
      return "radial_polynomial_times_angular";
  }
  return "unknown";
}

namespace {

double moment_weight(Moment weight, double r, double theta) {
  switch (weight) {
    case Moment::kPlain:
      return 1.0;
    case Moment::kX:
      return r * std::cos(theta);
    case Moment::kY:
      return r * std::sin(theta);
    case Moment::kR2:
      return r * r;
  }
  return 0.0;
}

}  // namespace

double radial_moment(const AnnularRegion& region, const DensityField& density,
                     double theta, Moment weight, const QuadratureOptions& opts) {
  return integrate(
      [&](double r) { return moment_weight(weight, r, theta) * density(r, theta) * r; },
      region.r_in(theta), region.r_out(theta), opts);
}

double radial_moment(const AnnularRegion& region, const DensityField& density,
                     double theta, const PointWeight& weight,
                     const QuadratureOptions& opts) {
  return integrate(
      [&](double r) { return weight(region.point(r, theta)) * density(r, theta) * r; },
      region.r_in(theta), region.r_out(theta), opts);
}

std::pair<double, double> unwrap_interval(double phi_lo, double phi_hi) {
  if (phi_hi < phi_lo) phi_hi += kTwoPi;
  return {phi_lo, phi_hi};
}

double region_integral(const AnnularRegion& region, const DensityField& density,
                       double phi_lo, double phi_hi, Moment integrand,
                       const QuadratureOptions& opts) {
  const auto [lo, hi] = unwrap_interval(phi_lo, phi_hi);
  return integrate(
      [&](double theta) { return radial_moment(region, density, theta, integrand, opts); },
      lo, hi, opts);
}

double region_integral(const AnnularRegion& region, const DensityField& density,
                       double phi_lo, double phi_hi, const PointWeight& integrand,
                       const QuadratureOptions& opts) {
  const auto [lo, hi] = unwrap_interval(phi_lo, phi_hi);
  return integrate(
      [&](double theta) { return radial_moment(region, density, theta, integrand, opts); },
      lo, hi, opts);
}

OmegaExtrema omega_extrema(const AnnularRegion& region, const DensityField& density,
                           int grid_size, const QuadratureOptions& opts) {
  if (grid_size < 64) {
    throw std::invalid_argument("omega_extrema needs at least 64 grid points");
  }
  OmegaExtrema e{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
  for (int j = 0; j < grid_size; ++j) {
    const double w = radial_moment(region, density, kTwoPi * j / grid_size, Moment::kPlain, opts);
    e.min = std::min(e.min, w);
    e.max = std::max(e.max, w);
  }
  if (!(e.min > 0.0)) {
    throw InvalidGeometry("omega must be positive everywhere (min " + std::to_string(e.min) +
                          ")");
  }
  return e;
}

}  // namespace coverage

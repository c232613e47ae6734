#include "coverage/domain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace coverage {

namespace {

std::array<double, 4> sample_moments(const AnnularRegion& region, const DensityField& density,
                                     double theta, const QuadratureOptions& opts) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // One radial pass for all four weights.
  const Eigen::Vector4d v = integrate(
      [&](double r) {
        const double w = density(r, theta) * r;
        return Eigen::Vector4d(w, w * r * c, w * r * s, w * r * r);
      },
      region.r_in(theta), region.r_out(theta), opts);
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

MomentProfile MomentProfile::build(const AnnularRegion& region, const DensityField& density,
                                   double tolerance, int max_samples) {
  const QuadratureOptions radial{1e-14, 1 << 10};
  auto sample_grid = [&](int count, double offset) {
    std::vector<std::array<double, 4>> out(count);
    for (int j = 0; j < count; ++j) {
      out[j] = sample_moments(region, density, offset + kTwoPi * j / count, radial);
    }
    return out;
  };

  auto fit = [](const std::vector<std::array<double, 4>>& values) {
    const int m = static_cast<int>(values.size());
    const int half = m / 2;
    MomentProfile p;
    p.samples_ = m;
    for (int q = 0; q < 4; ++q) {
      double mean = 0.0;
      for (const auto& v : values) mean += v[q];
      p.mean_[q] = mean / m;
      p.cos_[q].assign(half, 0.0);
      p.sin_[q].assign(half, 0.0);
    }
    for (int k = 1; k <= half; ++k) {
      // Nyquist term carries half weight in the trigonometric interpolant.
      const double scale = (k == half) ? 1.0 / m : 2.0 / m;
      for (int j = 0; j < m; ++j) {
        const double arg = kTwoPi * static_cast<double>((static_cast<long>(k) * j) % m) / m;
        const double c = std::cos(arg);
        const double s = (k == half) ? 0.0 : std::sin(arg);
        for (int q = 0; q < 4; ++q) {
          p.cos_[q][k - 1] += scale * values[j][q] * c;
          p.sin_[q][k - 1] += scale * values[j][q] * s;
        }
      }
    }
    return p;
  };

  int count = 32;
  auto values = sample_grid(count, 0.0);
  while (true) {
    MomentProfile coarse = fit(values);
    const auto offsets = sample_grid(count, kTwoPi / (2 * count));
    double scale = 0.0;
    double worst = 0.0;
    for (int j = 0; j < count; ++j) {
      const MomentSet predicted = coarse.at(kTwoPi * (j + 0.5) / count);
      const std::array<double, 4> p{predicted.mass, predicted.mx, predicted.my, predicted.m2};
      for (int q = 0; q < 4; ++q) {
        scale = std::max({scale, std::abs(offsets[j][q]), std::abs(values[j][q])});
        worst = std::max(worst, std::abs(p[q] - offsets[j][q]));
      }
    }
    std::vector<std::array<double, 4>> merged(2 * count);
    for (int j = 0; j < count; ++j) {
      merged[2 * j] = values[j];
      merged[2 * j + 1] = offsets[j];
    }
    values = std::move(merged);
    count *= 2;
    if (worst <= tolerance * scale) {
      return fit(values);
    }
    if (count >= max_samples) {
      throw QuadratureError("angular moment profile did not resolve", worst / scale);
    }
  }
}

MomentSet MomentProfile::at(double theta) const {
  const double t = wrap_angle(theta);
  const std::complex<double> step(std::cos(t), std::sin(t));
  std::complex<double> z = step;
  std::array<double, 4> acc = mean_;
  const std::size_t n = cos_[0].size();
  for (std::size_t k = 0; k < n; ++k) {
    for (int q = 0; q < 4; ++q) acc[q] += cos_[q][k] * z.real() + sin_[q][k] * z.imag();
    z *= step;
  }
  return {acc[0], acc[1], acc[2], acc[3]};
}

MomentSet MomentProfile::primitive(double theta) const {
  // Linear part uses the unreduced angle; the periodic part is reduced first.
  const double t = wrap_angle(theta);
  const std::complex<double> step(std::cos(t), std::sin(t));
  std::complex<double> z = step;
  std::array<double, 4> acc{};
  for (int q = 0; q < 4; ++q) acc[q] = mean_[q] * theta;
  const std::size_t n = cos_[0].size();
  for (std::size_t k = 0; k < n; ++k) {
    const double inv_k = 1.0 / static_cast<double>(k + 1);
    for (int q = 0; q < 4; ++q) {
      acc[q] += inv_k * (cos_[q][k] * z.imag() + sin_[q][k] * (1.0 - z.real()));
    }
    z *= step;
  }
  return {acc[0], acc[1], acc[2], acc[3]};
}

Domain::Domain(AnnularRegion region, DensityField density, QuadratureOptions quadrature)
    : region_(std::move(region)),
      density_(std::move(density)),
      quadrature_(quadrature),
      profile_((density_.validate(region_, region_.validation_grid_size()),
                MomentProfile::build(region_, density_))) {}

}  // namespace coverage

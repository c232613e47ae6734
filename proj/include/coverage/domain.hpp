#pragma once

// Region + density bundle with a spectral representation of the angular
// moment profiles ω, ω_x, ω_y and ω_r² (the radial moments as functions of θ).
//
// The profiles are smooth and 2π-periodic, so a trigonometric interpolant
// built from adaptive-quadrature samples reproduces them to near machine
// precision, and slice integrals reduce to differences of a closed-form
// antiderivative. This is what makes per-step workload/centroid evaluation
// cheap inside the integrator.

#include <array>
#include <vector>

#include "coverage/geometry.hpp"

namespace coverage {

/// The four angular moments of a slice (or their densities at one angle).
struct MomentSet {
  double mass = 0.0;  ///< ∫ ρ r dr dθ
  double mx = 0.0;    ///< ∫ x ρ r dr dθ (about the region origin)
  double my = 0.0;    ///< ∫ y ρ r dr dθ
  double m2 = 0.0;    ///< ∫ r² ρ r dr dθ

  MomentSet& operator+=(const MomentSet& o) {
    mass += o.mass;
    mx += o.mx;
    my += o.my;
    m2 += o.m2;
    return *this;
  }
  MomentSet& operator-=(const MomentSet& o) {
    mass -= o.mass;
    mx -= o.mx;
    my -= o.my;
    m2 -= o.m2;
    return *this;
  }
  friend MomentSet operator+(MomentSet a, const MomentSet& b) { return a += b; }
  friend MomentSet operator-(MomentSet a, const MomentSet& b) { return a -= b; }
};

class MomentProfile {
 public:
  /// Samples the radial moments on successively doubled angular grids until
  /// the interpolant predicts the next level's samples to `tolerance`
  /// (relative to the largest sampled magnitude).
  static MomentProfile build(const AnnularRegion& region, const DensityField& density,
                             double tolerance = 1e-13, int max_samples = 8192);

  /// Radial moments at angle θ.
  MomentSet at(double theta) const;

  /// ∫_0^θ of each moment; valid for any real θ (including unwrapped angles).
  MomentSet primitive(double theta) const;

  /// ∫_lo^hi of each moment, no wrap-around applied.
  MomentSet integrate(double lo, double hi) const { return primitive(hi) - primitive(lo); }

  /// ∫_0^{2π} ω.
  double total_mass() const { return kTwoPi * mean_[0]; }

  int samples() const { return samples_; }
  int harmonics() const { return static_cast<int>(cos_[0].size()); }

 private:
  int samples_ = 0;
  std::array<double, 4> mean_{};
  std::array<std::vector<double>, 4> cos_;
  std::array<std::vector<double>, 4> sin_;
};

/// Immutable region + density pair used by all higher-level operations.
class Domain {
 public:
  Domain(AnnularRegion region, DensityField density, QuadratureOptions quadrature = {});

  const AnnularRegion& region() const { return region_; }
  const DensityField& density() const { return density_; }
  const QuadratureOptions& quadrature() const { return quadrature_; }
  const MomentProfile& profile() const { return profile_; }

  /// ∫_Ω ρ.
  double total_workload() const { return profile_.total_mass(); }

  double omega(double theta) const { return profile_.at(theta).mass; }

 private:
  AnnularRegion region_;
  DensityField density_;
  QuadratureOptions quadrature_;
  MomentProfile profile_;
};

}  // namespace coverage

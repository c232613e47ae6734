#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"

#include "coverage/partition.hpp"

using namespace coverage;
using std::numbers::pi;

namespace {

Domain uniform_annulus() { return Domain(AnnularRegion::circular(1.0, 2.0), DensityField::uniform()); }

Domain case_study_domain() {
  return Domain(AnnularRegion(PolarCurve{1.0, {}, {0.0, 0.5}}, PolarCurve{3.0, {0.0, 0.5}, {}}),
                DensityField::case_study());
}

double reference_omega(double th) {
  const double ri = 1.0 + 0.5 * std::sin(2 * th);
  const double ro = 3.0 + 0.5 * std::cos(2 * th);
  const double s = std::sin(th);
  return std::exp(s * s + std::cos(th)) * (ro * ro - ri * ri) / 2 +
         0.01 * (ro * ro * ro - ri * ri * ri) / 3;
}

// Quadratic form Σ (e_i − e_{i−1})² with e_N = −Σ_{j<N} e_j.
double reduced_form(const Eigen::VectorXd& e) {
  const auto n = e.size() + 1;
  Eigen::VectorXd full(n);
  full.head(n - 1) = e;
  full(n - 1) = -e.sum();
  double q = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = full(i) - full((i + n - 1) % n);
    q += d * d;
  }
  return q;
}

}  // namespace

TEST_CASE("phase validation") {
  CHECK_NOTHROW(PartitionState::from_phases({0.0, 1.0, 2.0}, 0.03));
  CHECK_THROWS_WITH_AS(PartitionState::from_phases({1.0, 1.0}, 0.03),
                       doctest::Contains("initial phases not strictly separated"), InvalidPartition);
  CHECK_THROWS_AS(PartitionState::from_phases({2.0, 1.0}, 0.03), InvalidPartition);
  CHECK_THROWS_AS(PartitionState::from_phases({0.0, 7.0}, 0.03), InvalidPartition);
  // Too close across the 2π seam.
  CHECK_THROWS_AS(PartitionState::from_phases({0.0, kTwoPi - 1e-8}, 0.03), InvalidPartition);
}

TEST_CASE("slices and wrapped slices agree") {
  const PartitionState s = PartitionState::from_unwrapped({-0.5, 1.0, 4.0}, 0.03);
  const auto w = s.wrapped();
  CHECK(w[0] == doctest::Approx(kTwoPi - 0.5));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto [lo, hi] = s.slice(i);
    const auto [wlo, whi] = wrapped_slice(w, i);
    CHECK(hi - lo == doctest::Approx(whi - wlo).epsilon(1e-14));
  }
  CHECK(s.slice(2).second == doctest::Approx(-0.5 + kTwoPi));
}

TEST_CASE("subregion workloads") {
  const Domain d = uniform_annulus();
  const PartitionState two = PartitionState::from_phases({0.0, pi / 2}, 0.03);
  CHECK(subregion_workload(two, d, 0) == doctest::Approx(3 * pi / 4).epsilon(1e-13));
  CHECK(subregion_workload(two, d, 1) == doctest::Approx(9 * pi / 4).epsilon(1e-13));

  const PartitionState four = PartitionState::from_phases({0.0, pi / 2, pi, 3 * pi / 2}, 0.03);
  for (double m : workloads(four, d).m) CHECK(m == doctest::Approx(3 * pi / 4).epsilon(1e-13));

  const Domain pd = case_study_domain();
  const PartitionState s = PartitionState::from_phases({0.3, 1.1, 2.0, 4.4, 5.9}, 0.03);
  const WorkloadVector w = workloads(s, pd);
  double sum = 0.0;
  for (double m : w.m) sum += m;
  CHECK(sum == doctest::Approx(pd.total_workload()).epsilon(1e-13));
  CHECK(w.mean == doctest::Approx(pd.total_workload() / 5).epsilon(1e-14));
  // Direct quadrature of the wrapped slice as an independent path.
  CHECK(w.m[4] == doctest::Approx(region_integral(pd.region(), pd.density(), 5.9, 0.3,
                                                  Moment::kPlain))
                      .epsilon(1e-12));
}

TEST_CASE("partition rates and V") {
  const Domain d = uniform_annulus();
  const PartitionState two = PartitionState::from_phases({0.0, pi / 2}, 0.03);
  const std::vector<double> r = partition_rhs(two, d);
  CHECK(r[0] == doctest::Approx(0.03 * (3 * pi / 4 - 9 * pi / 4)).epsilon(1e-12));
  CHECK(r[0] == doctest::Approx(-0.14137).epsilon(1e-4));
  CHECK(r[1] == doctest::Approx(0.14137).epsilon(1e-4));
  CHECK(lyapunov_V(two, d) == doctest::Approx((3 * pi / 4) * (3 * pi / 4)).epsilon(1e-12));

  const PartitionState four = PartitionState::from_phases({0.0, pi / 2, pi, 3 * pi / 2}, 0.03);
  for (double v : partition_rhs(four, d)) CHECK(std::abs(v) < 1e-13);
  CHECK(lyapunov_V(four, d) < 1e-25);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, kTwoPi);
  const Domain pd = case_study_domain();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> ph(6);
    for (double& v : ph) v = unit(rng);
    std::sort(ph.begin(), ph.end());
    const PartitionState s = PartitionState::from_phases(ph, 0.03);
    double total = 0.0;
    for (double v : partition_rhs(s, pd)) total += v;
    CHECK(std::abs(total) < 1e-12);
    CHECK(lyapunov_V(s, pd) >= 0.0);
  }
}

TEST_CASE("S matrix") {
  const SMatrix s2 = build_S(2);
  REQUIRE(s2.matrix.rows() == 1);
  CHECK(s2.matrix(0, 0) == 8.0);
  CHECK(s2.lambda_min == doctest::Approx(8.0));

  const SMatrix s3 = build_S(3);
  CHECK(s3.matrix(0, 0) == 6.0);
  CHECK(s3.matrix(0, 1) == 3.0);
  CHECK(s3.matrix(1, 0) == 3.0);
  CHECK(s3.matrix(1, 1) == 6.0);
  CHECK(s3.lambda_min == doctest::Approx(3.0));

  CHECK_THROWS(build_S(1));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (std::size_t n = 2; n <= 12; ++n) {
    const SMatrix s = build_S(n);
    const auto k = static_cast<Eigen::Index>(n - 1);
    // Polarization of the form as an independent construction.
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) {
        const Eigen::VectorXd ea = Eigen::VectorXd::Unit(k, a);
        const Eigen::VectorXd eb = Eigen::VectorXd::Unit(k, b);
        const double entry = 0.5 * (reduced_form(ea + eb) - reduced_form(ea) - reduced_form(eb));
        CHECK(s.matrix(a, b) == doctest::Approx(entry).epsilon(1e-12));
      }
    }
    for (int t = 0; t < 5; ++t) {
      Eigen::VectorXd e(k);
      for (Eigen::Index j = 0; j < k; ++j) e(j) = g(rng);
      const double lhs = e.dot(s.matrix * e);
      CHECK(std::abs(lhs - reduced_form(e)) < 1e-10 * std::max(1.0, lhs));
    }
    CHECK(s.lambda_min > 0.0);
  }
}

TEST_CASE("convergence constants") {
  const Domain d = uniform_annulus();
  const PartitionState eq = PartitionState::from_phases({0.0, pi}, 0.03);
  const ConvergenceConstants c = convergence_constants(eq, d);
  CHECK(c.c1 == doctest::Approx(0.0));
  CHECK(c.c2 == doctest::Approx(0.18).epsilon(1e-12));

  const PartitionState off = PartitionState::from_phases({0.0, pi / 2}, 0.03);
  CHECK(convergence_constants(off, d).c1 == doctest::Approx(std::sqrt(2.0) * 3 * pi / 4).epsilon(1e-12));

  const Domain pd = case_study_domain();
  const PartitionState s = PartitionState::from_phases({0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0}, 0.03);
  double omega_min = 1e300;
  for (int k = 0; k < 16384; ++k) omega_min = std::min(omega_min, reference_omega(kTwoPi * k / 16384));
  const double lambda7 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(build_S(8).matrix).eigenvalues()(0);
  CHECK(convergence_constants(s, pd).c2 == doctest::Approx(0.03 * omega_min * lambda7 / 8).epsilon(1e-3));
}

TEST_CASE("xi map") {
  const Domain d = uniform_annulus();
  CHECK(xi_solve(d, 4, 0.0).unwrapped == doctest::Approx(pi / 2).epsilon(1e-12));

  const Domain pd = case_study_domain();
  // Dense cumulative integral of ω on 1e5 points, inverted linearly.
  const int grid = 100000;
  std::vector<double> cum(grid + 1, 0.0);
  const double h = kTwoPi / grid;
  for (int k = 0; k < grid; ++k) {
    const double a = k * h;
    cum[k + 1] = cum[k] + h / 6 * (reference_omega(a) + 4 * reference_omega(a + h / 2) + reference_omega(a + h));
  }
  const double target = cum[grid] / 8;
  const auto it = std::lower_bound(cum.begin(), cum.end(), target);
  const auto k = static_cast<int>(it - cum.begin());
  const double frac = (target - cum[k - 1]) / (cum[k] - cum[k - 1]);
  const double oracle = (k - 1 + frac) * h;
  const XiResult xi = xi_solve(pd, 8, 0.0);
  CHECK(xi.unwrapped == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(xi.residual < 1e-10 * target);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, kTwoPi);
  for (const Domain* dom : {&d, &pd}) {
    for (int t = 0; t < 8; ++t) {
      const double phi = unit(rng);
      const std::vector<double> eq = equitable_phases(*dom, 8, phi);
      REQUIRE(eq.size() == 8);
      CHECK(eq.front() == phi);
      const XiResult last = xi_solve(*dom, 8, eq.back());
      CHECK(std::abs(last.unwrapped - phi - kTwoPi) < 1e-8);
      const WorkloadVector w = workloads(PartitionState::from_unwrapped(eq, 0.03), *dom);
      CHECK(w.max_relative_imbalance() < 1e-9);
    }
  }
}

TEST_CASE("min workload guard") {
  WorkloadVector w{{2.0, 2.0}, 2.0};
  CHECK(min_workload_guard(w, 0.0));
  w.m[1] = 0.0;
  CHECK_FALSE(min_workload_guard(w, 0.0));
  const WorkloadVector two = workloads(PartitionState::from_phases({0.0, pi / 2}, 0.03), uniform_annulus());
  CHECK(min_workload_guard(two, 1.0));
  CHECK(two.min() == doctest::Approx(3 * pi / 4));
}

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "coverage/agents.hpp"

using namespace coverage;
using std::numbers::pi;

namespace {

Domain uniform_annulus() { return Domain(AnnularRegion::circular(1.0, 2.0), DensityField::uniform()); }

Domain case_study_domain() {
  return Domain(AnnularRegion(PolarCurve{1.0, {}, {0.0, 0.5}}, PolarCurve{3.0, {0.0, 0.5}, {}}),
                DensityField::case_study());
}

// A single sector [−π/4, π/4] of the uniform annulus, as bar 1 of two.
PartitionState quarter_sector() { return PartitionState::from_unwrapped({-pi / 4, pi / 4}, 0.0); }

const double kSectorCentroidX = 28.0 * std::sqrt(2.0) / (9.0 * pi);

PartitionState random_partition(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, kTwoPi);
  std::vector<double> ph(n);
  for (double& v : ph) v = unit(rng);
  std::sort(ph.begin(), ph.end());
  return PartitionState::from_phases(ph, 0.03);
}

Vec2 random_point(std::mt19937_64& rng, const AnnularRegion& region) {
  std::uniform_real_distribution<double> c(-region.max_outer_radius(), region.max_outer_radius());
  for (;;) {
    const Vec2 q(c(rng), c(rng));
    if (contains(region, q)) return q;
  }
}

// ∫_{E_i} f(p, q) ρ dq by direct nested quadrature, independent of the
// moment profile.
double direct_cost(const Domain& d, const PartitionState& s, std::size_t i, const CostModel& f,
                   const Vec2& p) {
  const auto [lo, hi] = s.slice(i);
  return slice_integral(d.region(), d.density(), lo, hi,
                        [&](const Vec2& q) { return f.value(p, q); });
}

}  // namespace

TEST_CASE("cost models") {
  const CostModel sq = CostModel::squared_distance();
  CHECK(sq.value(Vec2(1, 2), Vec2(0, 0)) == doctest::Approx(5.0));
  CHECK(sq.gradient(Vec2(1, 2), Vec2(0, 0)).isApprox(Vec2(2, 4)));
  for (auto form : {CostModel::Form::kSquared, CostModel::Form::kQuartic, CostModel::Form::kPseudoHuber}) {
    const CostModel f = CostModel::generic(form, 0.7);
    const Vec2 p(0.3, -0.4), q(1.1, 0.2);
    CHECK(f.value(p, q) >= 0.0);
    const double h = 1e-6;
    const Vec2 fd((f.value(p + Vec2(h, 0), q) - f.value(p - Vec2(h, 0), q)) / (2 * h),
                  (f.value(p + Vec2(0, h), q) - f.value(p - Vec2(0, h), q)) / (2 * h));
    CHECK((f.gradient(p, q) - fd).norm() < 1e-7);
  }
}

TEST_CASE("centroid") {
  const Domain d = uniform_annulus();
  const Vec2 c = centroid(quarter_sector(), d, 0);
  CHECK(c.x() == doctest::Approx(kSectorCentroidX).epsilon(1e-12));
  CHECK(kSectorCentroidX == doctest::Approx(1.40044).epsilon(1e-4));
  CHECK(std::abs(c.y()) < 1e-13);

  const PartitionState one = PartitionState::from_unwrapped({0.7}, 0.0);
  CHECK(centroid(one, d, 0).norm() < 1e-13);

  for (double alpha : {0.5, 2.0, 4.4}) {
    const PartitionState rotated = PartitionState::from_unwrapped({-pi / 4 + alpha, pi / 4 + alpha}, 0.0);
    const Vec2 r = centroid(rotated, d, 0);
    CHECK(r.x() == doctest::Approx(kSectorCentroidX * std::cos(alpha)).epsilon(1e-12));
    CHECK(r.y() == doctest::Approx(kSectorCentroidX * std::sin(alpha)).epsilon(1e-12));
  }

  // Case study domain: profile centroid against a direct quadrature centroid.
  const Domain pd = case_study_domain();
  const PartitionState s = PartitionState::from_phases({0.4, 2.5, 5.0}, 0.03);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto [lo, hi] = s.slice(i);
    const double m = slice_integral(pd.region(), pd.density(), lo, hi, [](const Vec2&) { return 1.0; });
    const Vec2 mom = slice_integral(pd.region(), pd.density(), lo, hi, [](const Vec2& q) { return q; });
    CHECK((centroid(s, pd, i) - mom / m).norm() < 1e-11);
  }
}

TEST_CASE("cost J") {
  const Domain d = uniform_annulus();
  const PartitionState one = PartitionState::from_unwrapped({0.0}, 0.0);
  AgentState origin{{Vec2::Zero()}, {}, 0.1};
  CHECK(cost_J(one, origin, d, CostModel::squared_distance()) ==
        doctest::Approx(15 * pi / 2).epsilon(1e-13));

  std::mt19937_64 rng(21);
  const Domain pd = case_study_domain();
  for (int t = 0; t < 5; ++t) {
    const PartitionState s = random_partition(rng, 4);
    AgentState a{{}, {}, 0.1};
    for (int k = 0; k < 4; ++k) a.positions.push_back(random_point(rng, pd.region()));
    const auto costs = subregion_costs(s, a, pd, CostModel::squared_distance());
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(costs[i] == doctest::Approx(direct_cost(pd, s, i, CostModel::squared_distance(),
                                                    a.positions[i]))
                            .epsilon(1e-10));
    }
    const CostModel huber = CostModel::generic(CostModel::Form::kPseudoHuber, 0.5);
    CHECK(subregion_cost(s, pd, huber, 2, a.positions[2]) ==
          doctest::Approx(direct_cost(pd, s, 2, huber, a.positions[2])).epsilon(1e-10));
  }
}

TEST_CASE("parallel axis identity") {
  std::mt19937_64 rng(8);
  const Domain pd = case_study_domain();
  for (int t = 0; t < 5; ++t) {
    const PartitionState s = random_partition(rng, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec2 p = random_point(rng, pd.region());
      const Vec2 c = centroid(s, pd, i);
      const auto [lo, hi] = s.slice(i);
      const double inertia = slice_integral(pd.region(), pd.density(), lo, hi,
                                            [&](const Vec2& q) { return (q - c).squaredNorm(); });
      const double m = subregion_workload(s, pd, i);
      const double j = subregion_cost(s, pd, CostModel::squared_distance(), i, p);
      CHECK(std::abs(j - inertia - m * (p - c).squaredNorm()) < 1e-9 * j);
    }
  }
}

TEST_CASE("gradient") {
  const Domain d = uniform_annulus();
  const PartitionState s = quarter_sector();
  const CostModel sq = CostModel::squared_distance();
  const Vec2 g = grad_J_at(s, d, sq, 0, Vec2::Zero());
  CHECK(g.x() == doctest::Approx(-2 * (3 * pi / 4) * kSectorCentroidX).epsilon(1e-12));
  CHECK(g.x() == doctest::Approx(-6.5997).epsilon(1e-4));
  CHECK(std::abs(g.y()) < 1e-12);
  CHECK(grad_J_at(s, d, sq, 0, centroid(s, d, 0)).norm() < 1e-12);

  std::mt19937_64 rng(4);
  const Domain pd = case_study_domain();
  const double h = 1e-5;
  for (const CostModel& f : {sq, CostModel::generic(CostModel::Form::kQuartic, 1.0),
                             CostModel::generic(CostModel::Form::kPseudoHuber, 0.8)}) {
    for (int t = 0; t < 4; ++t) {
      const PartitionState st = random_partition(rng, 3);
      const Vec2 p = random_point(rng, pd.region());
      const Vec2 fd((subregion_cost(st, pd, f, 1, p + Vec2(h, 0)) -
                     subregion_cost(st, pd, f, 1, p - Vec2(h, 0))) / (2 * h),
                    (subregion_cost(st, pd, f, 1, p + Vec2(0, h)) -
                     subregion_cost(st, pd, f, 1, p - Vec2(0, h))) / (2 * h));
      const Vec2 an = grad_J_at(st, pd, f, 1, p);
      CHECK((an - fd).norm() < 1e-4 * an.norm());
    }
  }
}

TEST_CASE("control input") {
  AgentState a{{Vec2(1, 0)}, {Vec2(0, 0)}, 0.1};
  CHECK(control_input(a, 0).isApprox(Vec2(-0.1, 0)));
  a.positions[0] = Vec2(2, 0);
  CHECK(control_input(a, 0).isApprox(Vec2(-0.2, 0)));
  a.targets[0] = a.positions[0];
  CHECK(control_input(a, 0).norm() == 0.0);
}

TEST_CASE("optimal target") {
  const Domain pd = case_study_domain();
  const PartitionState s = PartitionState::from_phases({0.3, 2.1, 3.9, 5.2}, 0.03);
  const CostModel sq = CostModel::squared_distance();
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 c = centroid(s, pd, i);
    const Vec2 t = optimal_target(s, pd, sq, i);
    CHECK(t.x() == c.x());
    CHECK(t.y() == c.y());
    const Vec2 generic = optimal_target(s, pd, CostModel::generic(CostModel::Form::kSquared), i);
    CHECK((generic - c).norm() < 1e-6);
  }

  // Sector symmetric about the x-axis: target stays on the axis.
  const Domain d = uniform_annulus();
  const Vec2 h = optimal_target(quarter_sector(), d, CostModel::generic(CostModel::Form::kPseudoHuber, 0.3), 0);
  CHECK(std::abs(h.y()) < 1e-6);
  CHECK(h.x() > 1.0);
  CHECK(in_subregion(quarter_sector(), d, 0, h));
}

TEST_CASE("miranda existence test") {
  const Domain pd = case_study_domain();
  const PartitionState s = PartitionState::from_phases({0.3, 2.1, 3.9, 5.2}, 0.03);
  const CostModel sq = CostModel::squared_distance();
  const Vec2 c = centroid(s, pd, 1);
  const Box around{c.x() - 0.1, c.x() + 0.1, c.y() - 0.1, c.y() + 0.1};
  CHECK(miranda_existence_test(s, pd, sq, 1, around, 4));
  CHECK(miranda_existence_test(s, pd, sq, 1, around, 256));
  const Box away{c.x() + 1.0, c.x() + 1.4, c.y() - 0.2, c.y() + 0.2};
  CHECK_FALSE(miranda_existence_test(s, pd, sq, 1, away, 64));
}

TEST_CASE("eta") {
  const AnnularRegion a = AnnularRegion::circular(1.0, 2.0);
  const DensityField u = DensityField::uniform();
  CHECK(eta(a, u, 0.9, Vec2::Zero()) == doctest::Approx(3.75).epsilon(1e-13));
  CHECK(eta(a, u, 0.0, Vec2(1, 0)) == doctest::Approx(3.75 + 1.5 - 2 * 7.0 / 3.0).epsilon(1e-12));
  CHECK(3.75 + 1.5 - 2 * 7.0 / 3.0 == doctest::Approx(0.583333).epsilon(1e-6));

  const Domain pd = case_study_domain();
  const Vec2 sp(0.4, -1.2);
  for (double th : {0.2, 1.7, 3.5}) {
    const double direct = integrate(
        [&](double r) {
          const Vec2 q(r * std::cos(th), r * std::sin(th));
          return (sp - q).squaredNorm() * pd.density()(r, th) * r;
        },
        pd.region().r_in(th), pd.region().r_out(th));
    CHECK(eta(pd.region(), pd.density(), th, sp) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("hessian") {
  const Domain d = uniform_annulus();
  const PartitionState s = quarter_sector();
  AgentState a{{Vec2(1.5, 0.0), Vec2(-1.5, 0.0)}, {}, 0.1};
  const HessianResult h = hessian_J(PartitionState::from_unwrapped({0.0, pi / 2}, 0.0), a, d,
                                    CostModel::squared_distance(), 0);
  CHECK(h.matrix(0, 0) == doctest::Approx(3 * pi / 2).epsilon(1e-12));
  CHECK(h.matrix(1, 1) == doctest::Approx(3 * pi / 2).epsilon(1e-12));
  CHECK(h.matrix(0, 1) == 0.0);
  CHECK(h.rank == 2);

  const HessianResult g = hessian_at(s, d, CostModel::generic(CostModel::Form::kSquared), 0, Vec2(1.2, 0.3));
  const double m = 3 * pi / 4;
  CHECK(g.matrix(0, 0) == doctest::Approx(2 * m).epsilon(1e-4));
  CHECK(g.matrix(1, 1) == doctest::Approx(2 * m).epsilon(1e-4));
  CHECK(std::abs(g.matrix(0, 1)) < 1e-4 * 2 * m);
  CHECK(g.rank == 2);
}

TEST_CASE("centroid energy") {
  CHECK(centroid_energy({2.0, 1.0}, {Vec2(1, 0), Vec2(0, 0)}, {Vec2(0, 0), Vec2(0, 3)}) ==
        doctest::Approx(2.0 + 9.0));
}

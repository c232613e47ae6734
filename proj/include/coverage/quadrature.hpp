#pragma once

// Composite Gauss–Legendre quadrature with panel doubling.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace coverage {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  int max_panels = 1 << 14;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

namespace detail {

/// 16-point Gauss–Legendre rule on [-1, 1].
struct GaussLegendre16 {
  std::array<double, 16> nodes;
  std::array<double, 16> weights;
};

const GaussLegendre16& gauss_legendre_16();

inline double magnitude(double v) { return std::abs(v); }

template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.template lpNorm<1>();
}

// Integrand results by value, so lambdas may return Eigen expressions.
template <class T, bool = std::is_base_of_v<Eigen::MatrixBase<T>, T>>
struct plain_result {
  using type = T;
};
template <class T>
struct plain_result<T, true> {
  using type = typename T::PlainObject;
};
template <class F>
using result_t = typename plain_result<std::decay_t<std::invoke_result_t<F&, double>>>::type;

template <class F>
auto composite_rule(F& f, double a, double b, int panels, double& l1) {
  const auto& rule = gauss_legendre_16();
  const double width = (b - a) / panels;
  const double half = 0.5 * width;
  using R = result_t<F>;
  R sum = f(a + half * (1.0 + rule.nodes[0])) * 0.0;
  l1 = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const R v = f(mid + half * rule.nodes[k]);
      const double w = rule.weights[k] * half;
      sum += v * w;
      l1 += magnitude(v) * w;
    }
  }
  return sum;
}

}  // namespace detail

/// ∫_a^b f. Panels double until successive estimates differ by less than
/// rel_tol times the estimate of ∫|f|. Works for double and Eigen vectors.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  using R = detail::result_t<F>;
  if (a == b) {
    return R(f(a) * 0.0);
  }
  double l1 = 0.0;
  R previous = detail::composite_rule(f, a, b, 1, l1);
  double residual = 0.0;
  for (int panels = 2; panels <= opts.max_panels; panels *= 2) {
    R current = detail::composite_rule(f, a, b, panels, l1);
    residual = detail::magnitude(R(current - previous));
    if (residual <= opts.rel_tol * std::abs(l1) || l1 == 0.0) {
      return current;
    }
    previous = current;
  }
  throw QuadratureError("quadrature did not converge at max refinement", residual);
}

}  // namespace coverage

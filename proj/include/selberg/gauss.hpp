#pragma once

// Gauss rules from three-term recurrences. Nodes come from the Golub-Welsch
// eigenproblem, are polished by Newton steps on the orthonormal polynomial and
// weights are taken as Christoffel numbers 1 / sum_j p_j(x)^2, which keeps
// full relative accuracy for the tiny weights next to singular endpoints.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "selberg/config.hpp"
#include "selberg/errors.hpp"

namespace selberg {

struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
  std::size_t size() const { return nodes.size(); }
};

namespace detail {

// Monic recurrence p_{i+1} = (x - alpha_i) p_i - beta_i p_{i-1}; mu0 is the
// total mass of the weight.
inline GaussRule gauss_from_recurrence(int n, const std::function<Real(int)>& alpha,
                                       const std::function<Real(int)>& beta, Real mu0) {
  if (n < 1) throw domain_error("gauss rule: order must be >= 1");
  std::vector<Real> a(n), sb(n);
  for (int i = 0; i < n; ++i) a[i] = alpha(i);
  for (int i = 1; i < n; ++i) sb[i] = std::sqrt(beta(i));

  using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1>;
  Vec diag(n), sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) diag[i] = static_cast<double>(a[i]);
  for (int i = 1; i < n; ++i) sub[i - 1] = static_cast<double>(sb[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw convergence_error("gauss rule: eigen solver failed");

  // Orthonormal values p_0..p_{n-1} at x, plus p_n and its derivative.
  const Real p0 = 1 / std::sqrt(mu0);
  auto eval = [&](Real x, Real& pn, Real& dpn, Real& sumsq) {
    Real pm1 = 0, p = p0, dpm1 = 0, dp = 0;
    sumsq = p * p;
    for (int i = 0; i < n; ++i) {
      const Real bnext = (i + 1 < n) ? sb[i + 1] : std::sqrt(beta(n));
      const Real bi = sb[i];
      const Real pn1 = ((x - a[i]) * p - bi * pm1) / bnext;
      const Real dpn1 = ((x - a[i]) * dp + p - bi * dpm1) / bnext;
      pm1 = p;
      p = pn1;
      dpm1 = dp;
      dp = dpn1;
      if (i + 1 < n) sumsq += p * p;
    }
    pn = p;
    dpn = dp;
  };

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    Real x = static_cast<Real>(eig.eigenvalues()[i]);
    Real pn, dpn, sumsq;
    for (int it = 0; it < 3; ++it) {
      eval(x, pn, dpn, sumsq);
      if (dpn == 0) break;
      const Real step = pn / dpn;
      x -= step;
      if (std::abs(step) <= kEps * std::abs(x)) break;
    }
    eval(x, pn, dpn, sumsq);
    rule.nodes[i] = x;
    rule.weights[i] = 1 / sumsq;
  }
  return rule;
}

inline Real log_beta(Real a, Real b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace detail

/// Gauss-Jacobi rule on [0, 1] for the weight (1-x)^a x^b, a, b > -1.
inline GaussRule gauss_jacobi01(int n, Real a, Real b) {
  if (!(a > -1) || !(b > -1)) throw domain_error("gauss_jacobi01: exponents must be > -1");
  // Jacobi recurrence on [-1, 1] with weight (1-y)^a (1+y)^b.
  const Real ab = a + b;
  auto alpha = [=](int i) -> Real {
    if (i == 0) return (b - a) / (ab + 2);
    const Real s = 2 * i + ab;
    return (b * b - a * a) / (s * (s + 2));
  };
  auto beta = [=](int i) -> Real {
    if (i == 1) return 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
    const Real s = 2 * i + ab;
    return 4 * i * (i + a) * (i + b) * (i + ab) / (s * s * (s + 1) * (s - 1));
  };
  const Real mu0 = std::exp((ab + 1) * std::log(Real(2)) + detail::log_beta(a + 1, b + 1));
  GaussRule r = detail::gauss_from_recurrence(n, alpha, beta, mu0);
  const Real scale = std::exp(-(ab + 1) * std::log(Real(2)));
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = (1 + r.nodes[i]) / 2;
    r.weights[i] *= scale;
  }
  return r;
}

/// Gauss-Legendre rule on [-1, 1].
inline GaussRule gauss_legendre(int n) {
  auto alpha = [](int) -> Real { return 0; };
  auto beta = [](int i) -> Real { return Real(i) * i / (Real(4) * i * i - 1); };
  return detail::gauss_from_recurrence(n, alpha, beta, 2);
}

/// Gauss-Hermite rule for the weight exp(-t^2/2) on the real line.
inline GaussRule gauss_hermite(int n) {
  auto alpha = [](int) -> Real { return 0; };
  auto beta = [](int i) -> Real { return Real(i); };
  return detail::gauss_from_recurrence(n, alpha, beta, std::sqrt(2 * kPi));
}

/// Process-wide cache of Gauss-Jacobi rules keyed by (n, a, b).
inline const GaussRule& cached_gauss_jacobi01(int n, Real a, Real b) {
  static std::mutex mu;
  static std::map<std::tuple<int, Real, Real>, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, a, b);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, gauss_jacobi01(n, a, b)).first;
  return it->second;
}

}  // namespace selberg

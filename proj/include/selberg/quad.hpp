#pragma once

// Integration engines for the domain shapes of the identities: weighted
// cubes, ordered simplices, tori, vertical lines, Gaussian-weighted R^k and
// seeded Monte Carlo. Integrands are callables Complex(std::span<const Real>)
// or, on the torus and vertical lines, Complex(std::span<const Complex>).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "selberg/config.hpp"
#include "selberg/errors.hpp"
#include "selberg/gauss.hpp"
#include "selberg/summation.hpp"

namespace selberg {

inline constexpr std::int64_t kMaxEvals = std::int64_t{1} << 24;

struct QuadResult {
  Complex value{};
  Real error_estimate = 0;
  std::int64_t n_evals = 0;
  bool converged = false;
};

enum class DomainKind { OrderedSimplex, Cube, Torus, VerticalLines, FullSpaceGaussian, ConstrainedBoxChain, LatticeSum };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::OrderedSimplex: return "ordered_simplex";
    case DomainKind::Cube: return "cube";
    case DomainKind::Torus: return "torus";
    case DomainKind::VerticalLines: return "vertical_lines";
    case DomainKind::FullSpaceGaussian: return "full_space_gaussian";
    case DomainKind::ConstrainedBoxChain: return "constrained_box_chain";
    case DomainKind::LatticeSum: return "lattice_sum";
  }
  return "?";
}

// One term of a chain: an ordered simplex in the interleaving of two sets of
// variables, weighted by a coefficient. `order[i]` is the variable sitting at
// rank i (rank 0 is the largest); values < k1 are t-variables, the rest s.
struct ChainTerm {
  std::vector<int> order;
  Complex coefficient{1};
};

struct DomainSpec {
  DomainKind kind = DomainKind::Cube;
  int k = 1;
  Real x = 0;
  Real y = 1;
  std::vector<ChainTerm> chain;

  static DomainSpec ordered_simplex(int k, Real x, Real y) {
    if (!(x < y)) throw domain_error("DomainSpec: ordered simplex needs x < y");
    return make(DomainKind::OrderedSimplex, k, x, y);
  }
  static DomainSpec cube(int k) { return make(DomainKind::Cube, k, 0, 1); }
  static DomainSpec torus(int k) { return make(DomainKind::Torus, k, 0, 0); }
  static DomainSpec vertical_lines(int k) { return make(DomainKind::VerticalLines, k, 0, 0); }
  static DomainSpec full_space_gaussian(int k) { return make(DomainKind::FullSpaceGaussian, k, 0, 0); }
  static DomainSpec lattice_sum(int k) { return make(DomainKind::LatticeSum, k, 0, 0); }
  static DomainSpec box_chain(int k, Real x, Real y, std::vector<ChainTerm> terms) {
    DomainSpec d = make(DomainKind::ConstrainedBoxChain, k, x, y);
    d.chain = std::move(terms);
    return d;
  }

 private:
  static DomainSpec make(DomainKind kind, int k, Real x, Real y) {
    if (k < 1) throw domain_error("DomainSpec: dimension must be >= 1");
    DomainSpec d;
    d.kind = kind;
    d.k = k;
    d.x = x;
    d.y = y;
    return d;
  }
};

// Weight (1-x)^a x^b on one axis of [0,1].
struct AxisExponents {
  Real a = 0;
  Real b = 0;
};

using RealIntegrand = std::function<Complex(std::span<const Real>)>;
using ComplexIntegrand = std::function<Complex(std::span<const Complex>)>;

namespace detail {

inline bool settled(const Complex& prev, const Complex& cur, Real l1, Real tol) {
  return std::abs(cur - prev) <= std::max(tol * std::abs(cur), 16 * kEps * l1);
}

inline std::int64_t ipow(std::int64_t n, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > (std::int64_t{1} << 62) / std::max<std::int64_t>(n, 1)) return std::int64_t{1} << 62;
    r *= n;
  }
  return r;
}

// Sum of w * f over a tensor grid given per-axis rules; returns (value, L1).
template <class Node, class F>
std::pair<Complex, Real> tensor_sum(int k, const std::vector<const std::vector<Node>*>& nodes,
                                    const std::vector<const std::vector<Complex>*>& weights, F&& f) {
  std::vector<int> idx(k, 0);
  std::vector<Node> pt(k);
  CompensatedSum<Complex> sum;
  CompensatedSum<Real> l1;
  for (int d = 0; d < k; ++d) pt[d] = (*nodes[d])[0];
  while (true) {
    Complex w = 1;
    for (int d = 0; d < k; ++d) w *= (*weights[d])[idx[d]];
    const Complex v = f(std::span<const Node>(pt)) * w;
    sum.add(v);
    l1.add(std::abs(v));
    int d = k - 1;
    while (d >= 0) {
      if (++idx[d] < static_cast<int>(nodes[d]->size())) {
        pt[d] = (*nodes[d])[idx[d]];
        break;
      }
      idx[d] = 0;
      pt[d] = (*nodes[d])[0];
      --d;
    }
    if (d < 0) break;
  }
  return {sum.value(), l1.value()};
}

inline std::vector<Complex> to_complex(const std::vector<Real>& w) { return {w.begin(), w.end()}; }

}  // namespace detail

/// Tensor Gauss-Jacobi rule on [0,1]^k with axis weights (1-x)^a x^b removed
/// from f. The order doubles from n0 until successive estimates agree.
template <class F>
QuadResult quad_jacobi_cube(F&& f, int k, std::span<const AxisExponents> exps, Real tol,
                            std::int64_t max_evals = kMaxEvals, int n0 = 4) {
  if (k < 1) throw domain_error("quad_jacobi_cube: k must be >= 1");
  if (static_cast<int>(exps.size()) != k && exps.size() != 1)
    throw domain_error("quad_jacobi_cube: need one exponent pair per axis");
  for (const auto& e : exps)
    if (!(e.a > -1) || !(e.b > -1)) throw domain_error("quad_jacobi_cube: exponents must be > -1");
  QuadResult res;
  Complex prev{};
  bool have_prev = false;
  for (int n = n0;; n *= 2) {
    const std::int64_t cost = detail::ipow(n, k);
    if (res.n_evals + cost > max_evals) break;
    std::vector<std::vector<Real>> nodes(k);
    std::vector<std::vector<Complex>> weights(k);
    std::vector<const std::vector<Real>*> np(k);
    std::vector<const std::vector<Complex>*> wp(k);
    for (int d = 0; d < k; ++d) {
      const auto& e = exps[exps.size() == 1 ? 0 : d];
      const GaussRule& r = cached_gauss_jacobi01(n, e.a, e.b);
      nodes[d] = r.nodes;
      weights[d] = detail::to_complex(r.weights);
      np[d] = &nodes[d];
      wp[d] = &weights[d];
    }
    auto [val, l1] = detail::tensor_sum<Real>(k, np, wp, f);
    res.n_evals += cost;
    res.value = val;
    if (have_prev) {
      res.error_estimate = std::abs(val - prev);
      if (detail::settled(prev, val, l1, tol)) {
        res.converged = true;
        return res;
      }
    }
    prev = val;
    have_prev = true;
  }
  if (!have_prev) throw domain_error("quad_jacobi_cube: evaluation budget below one rule");
  return res;
}

// Weight on the ordered simplex x <= t_k <= ... <= t_1 <= y:
//   prod_a (t_a - x)^lower_a (y - t_a)^upper_a prod_{a<b} (t_a - t_b)^pair.
// `lower`/`upper` hold one entry per variable or a single broadcast entry.
struct SimplexWeights {
  std::vector<Real> lower{0};
  std::vector<Real> upper{0};
  Real pair = 0;

  Real lo(int i) const { return lower.size() == 1 ? lower[0] : lower[i]; }
  Real up(int i) const { return upper.size() == 1 ? upper[0] : upper[i]; }
};

enum class Symmetry { none, symmetric };

namespace detail {

// One collapsed group of K ordered variables anchored at an endpoint:
// the l-th farthest variable (l = 1..K) sits at distance h * s_1 ... s_l.
struct CollapsedGroup {
  int size = 0;
  Real h = 0;
  std::vector<Real> anchor_exp;  // exponent of the distance for variable l
  Real pair = 0;

  // Jacobi exponents (a at s=1, b at s=0) for axis l (0-based).
  AxisExponents axis(int l) const {
    const int K = size;
    const int L = l + 1;
    Real e0 = K - L;
    for (int i = L; i <= K; ++i) e0 += anchor_exp[i - 1] + pair * (K - i);
    return {L >= 2 ? pair : Real(0), e0};
  }

  Real log_prefactor() const {
    Real e = size + pair * size * (size - 1) / 2;
    for (Real c : anchor_exp) e += c;
    return e * std::log(h);
  }
};

inline Real safe_pow(Real base, Real e) {
  if (e == 0) return 1;
  if (base <= 0) base = std::numeric_limits<Real>::min();
  return std::pow(base, e);
}

}  // namespace detail

/// Integral over the ordered simplex x <= t_k <= ... <= t_1 <= y of
/// weight(t) * f(t).
///
/// Symmetry::symmetric: f must be permutation symmetric and the endpoint
/// exponents equal on every axis; the cube integral with |t_a - t_b|^pair is
/// computed by quad_jacobi_cube and divided by k!.
///
/// Symmetry::none: the simplex is split at its midpoint into the k+1 products
/// of a simplex on [m, y] with one on [x, m]. Each factor is collapsed towards
/// its outer endpoint, which turns the endpoint and leading diagonal
/// singularities into Jacobi weights of a tensor rule.
template <class F>
QuadResult quad_ordered_simplex(F&& f, int k, Real x, Real y, const SimplexWeights& w, Real tol,
                                Symmetry sym = Symmetry::none, std::int64_t max_evals = kMaxEvals) {
  if (k < 1) throw domain_error("quad_ordered_simplex: k must be >= 1");
  if (!(x < y)) throw domain_error("quad_ordered_simplex: need x < y");
  for (int i = 0; i < k; ++i)
    if (!(w.lo(i) > -1) || !(w.up(i) > -1)) throw domain_error("quad_ordered_simplex: endpoint exponents must be > -1");
  if (!(w.pair > -1)) throw domain_error("quad_ordered_simplex: pair exponent must be > -1");
  const Real len = y - x;

  if (k == 1 || sym == Symmetry::symmetric) {
    if (sym == Symmetry::symmetric)
      for (int i = 1; i < k; ++i)
        if (w.lo(i) != w.lo(0) || w.up(i) != w.up(0))
          throw domain_error("quad_ordered_simplex: symmetric mode needs equal exponents on all axes");
    const AxisExponents e{w.up(0), w.lo(0)};
    std::vector<Real> t(k);
    Real log_scale = (k + k * w.lo(0) + k * w.up(0) + w.pair * k * (k - 1) / 2) * std::log(len);
    log_scale -= std::lgamma(Real(k + 1));
    const Real scale = std::exp(log_scale);
    auto g = [&](std::span<const Real> s) -> Complex {
      Real pairs = 1;
      for (int a = 0; a < k; ++a) {
        t[a] = x + len * s[a];
        for (int b = a + 1; b < k && w.pair != 0; ++b) pairs *= detail::safe_pow(std::abs(s[a] - s[b]), w.pair);
      }
      return f(std::span<const Real>(t)) * pairs;
    };
    std::vector<AxisExponents> exps(1, e);
    QuadResult r = quad_jacobi_cube(g, k, exps, tol, max_evals);
    r.value *= scale;
    r.error_estimate *= scale;
    return r;
  }

  const Real m = x + len / 2;
  // Per piece j: variables 0..j-1 in [m,y], j..k-1 in [x,m].
  QuadResult res;
  Complex prev{};
  bool have_prev = false;
  std::vector<Real> t(k);
  for (int n = 4;; n *= 2) {
    const std::int64_t cost = (k + 1) * detail::ipow(n, k);
    if (res.n_evals + cost > max_evals) break;
    CompensatedSum<Complex> total;
    Real l1 = 0;
    for (int j = 0; j <= k; ++j) {
      detail::CollapsedGroup top, bot;
      top.size = j;
      top.h = y - m;
      top.pair = w.pair;
      bot.size = k - j;
      bot.h = m - x;
      bot.pair = w.pair;
      // top: collapsed variable l (1-based) is t index j - l
      for (int l = 1; l <= j; ++l) top.anchor_exp.push_back(w.up(j - l));
      // bottom: collapsed variable l is t index j + l - 1
      for (int l = 1; l <= k - j; ++l) bot.anchor_exp.push_back(w.lo(j + l - 1));

      std::vector<std::vector<Real>> nodes(k);
      std::vector<std::vector<Complex>> weights(k);
      std::vector<const std::vector<Real>*> np(k);
      std::vector<const std::vector<Complex>*> wp(k);
      for (int d = 0; d < k; ++d) {
        const AxisExponents e = d < j ? top.axis(d) : bot.axis(d - j);
        if (!(e.a > -1) || !(e.b > -1)) throw domain_error("quad_ordered_simplex: integral diverges");
        const GaussRule& r = cached_gauss_jacobi01(n, e.a, e.b);
        nodes[d] = r.nodes;
        weights[d] = detail::to_complex(r.weights);
        np[d] = &nodes[d];
        wp[d] = &weights[d];
      }
      const Real pref = std::exp((j ? top.log_prefactor() : 0) + (k - j ? bot.log_prefactor() : 0));
      std::vector<Real> dist_top(j), dist_bot(k - j);
      auto g = [&](std::span<const Real> s) -> Complex {
        Real explicit_w = 1;
        Real p = 1;
        for (int l = 0; l < j; ++l) {
          p *= s[l];
          dist_top[l] = top.h * p;
          t[j - 1 - l] = y - dist_top[l];
        }
        p = 1;
        for (int l = 0; l < k - j; ++l) {
          p *= s[j + l];
          dist_bot[l] = bot.h * p;
          t[j + l] = x + dist_bot[l];
        }
        // far-endpoint weights
        for (int a = 0; a < j; ++a) explicit_w *= detail::safe_pow(t[a] - x, w.lo(a));
        for (int a = j; a < k; ++a) explicit_w *= detail::safe_pow(y - t[a], w.up(a));
        if (w.pair != 0) {
          // non-adjacent pairs inside each group: (1 - s_{i+1} ... s_{i'})^pair
          auto inner = [&](int off, int K) {
            for (int i = 0; i + 2 < K; ++i) {
              Real prod = s[off + i + 1];
              for (int i2 = i + 2; i2 < K; ++i2) {
                prod *= s[off + i2];
                explicit_w *= detail::safe_pow(1 - prod, w.pair);
              }
            }
          };
          inner(0, j);
          inner(j, k - j);
          for (int a = 0; a < j; ++a)
            for (int b = j; b < k; ++b) explicit_w *= detail::safe_pow(t[a] - t[b], w.pair);
        }
        return f(std::span<const Real>(t)) * explicit_w;
      };
      auto [val, piece_l1] = detail::tensor_sum<Real>(k, np, wp, g);
      total.add(val * pref);
      l1 += piece_l1 * pref;
    }
    res.n_evals += cost;
    res.value = total.value();
    if (have_prev) {
      res.error_estimate = std::abs(res.value - prev);
      if (detail::settled(prev, res.value, l1, tol)) {
        res.converged = true;
        return res;
      }
    }
    prev = res.value;
    have_prev = true;
  }
  if (!have_prev) throw domain_error("quad_ordered_simplex: evaluation budget below one rule");
  return res;
}

/// Product trapezoid rule on the torus |t_a| = 1 including dt_a = i t_a dtheta_a.
template <class F>
QuadResult quad_torus(F&& f, int k, Real tol, std::int64_t max_evals = kMaxEvals, int n0 = 8) {
  if (k < 1) throw domain_error("quad_torus: k must be >= 1");
  QuadResult res;
  Complex prev{};
  bool have_prev = false;
  for (int n = n0;; n *= 2) {
    const std::int64_t cost = detail::ipow(n, k);
    if (res.n_evals + cost > max_evals) break;
    std::vector<Complex> nodes(n), weights(n);
    for (int j = 0; j < n; ++j) {
      const Real th = 2 * kPi * j / n;
      nodes[j] = Complex(std::cos(th), std::sin(th));
      weights[j] = kI * nodes[j] * (2 * kPi / n);
    }
    std::vector<const std::vector<Complex>*> np(k, &nodes), wp(k, &weights);
    auto [val, l1] = detail::tensor_sum<Complex>(k, np, wp, f);
    res.n_evals += cost;
    res.value = val;
    if (have_prev) {
      res.error_estimate = std::abs(val - prev);
      if (detail::settled(prev, val, l1, tol)) {
        res.converged = true;
        return res;
      }
    }
    prev = val;
    have_prev = true;
  }
  if (!have_prev) throw domain_error("quad_torus: evaluation budget below one rule");
  return res;
}

/// Integral over t_a in i R for every axis (dt_a = i dy_a), truncated to
/// |y_a| <= T with composite 16-point Gauss-Legendre panels. Panels are
/// halved until the estimate settles, then T grows by half until the
/// truncated tail stops mattering. A tail that refuses to shrink is reported
/// as convergence_error.
template <class F>
QuadResult quad_vertical(F&& f, int k, Real T, Real tol, std::int64_t max_evals = kMaxEvals) {
  if (k < 1) throw domain_error("quad_vertical: k must be >= 1");
  if (!(T > 0)) throw domain_error("quad_vertical: T must be positive");
  constexpr int kPanelNodes = 16;
  static const GaussRule gl = gauss_legendre(kPanelNodes);
  QuadResult res;
  auto rule = [&](Real half, Real width, Real& l1, bool& fits) -> Complex {
    const int panels = std::max(1, static_cast<int>(std::ceil(2 * half / width - 1e-9)));
    const Real h = 2 * half / panels;
    const int per_axis = panels * kPanelNodes;
    const std::int64_t cost = detail::ipow(per_axis, k);
    fits = res.n_evals + cost <= max_evals;
    if (!fits) return {};
    std::vector<Complex> nodes, weights;
    nodes.reserve(per_axis);
    weights.reserve(per_axis);
    for (int p = 0; p < panels; ++p) {
      const Real c = -half + h * (p + Real(0.5));
      for (int i = 0; i < kPanelNodes; ++i) {
        nodes.emplace_back(0, c + h / 2 * gl.nodes[i]);
        weights.push_back(kI * (h / 2 * gl.weights[i]));
      }
    }
    std::vector<const std::vector<Complex>*> np(k, &nodes), wp(k, &weights);
    auto [val, l] = detail::tensor_sum<Complex>(k, np, wp, f);
    res.n_evals += cost;
    l1 = l;
    return val;
  };

  Real width = std::min(Real(2), T);
  Complex prev_T{};
  bool have_T = false;
  Real prev_tail = std::numeric_limits<Real>::infinity();
  int stalled = 0;
  for (;;) {
    Real l1 = 0;
    bool fits = true;
    Complex cur = rule(T, width, l1, fits);
    if (!fits) return res;  // budget spent; res holds the last full estimate
    res.value = cur;
    for (;;) {
      Real l1b = 0;
      const Complex finer = rule(T, width / 2, l1b, fits);
      if (!fits) return res;
      const bool ok = detail::settled(cur, finer, l1b, tol);
      cur = finer;
      l1 = l1b;
      width /= 2;
      res.value = cur;
      if (ok) break;
    }
    if (have_T) {
      const Real tail = std::abs(cur - prev_T);
      res.error_estimate = tail;
      if (detail::settled(prev_T, cur, l1, tol)) {
        res.converged = true;
        return res;
      }
      if (!(tail < Real(0.5) * prev_tail)) {
        if (++stalled >= 3) throw convergence_error("quad_vertical: integrand does not decay along the contour");
      } else {
        stalled = 0;
      }
      prev_tail = tail;
    }
    prev_T = cur;
    have_T = true;
    T *= Real(1.5);
  }
}

/// Tensor Gauss-Hermite rule for the weight exp(-|t|^2/2) on R^k. Exact for
/// polynomials of degree < 2*order per axis. The error estimate compares with
/// the rule of order+2.
template <class F>
QuadResult quad_gaussian_rk(F&& f, int k, int order) {
  if (k < 1) throw domain_error("quad_gaussian_rk: k must be >= 1");
  if (order < 1) throw domain_error("quad_gaussian_rk: order must be >= 1");
  QuadResult res;
  Complex vals[2];
  Real l1 = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const GaussRule r = gauss_hermite(order + 2 * pass);
    std::vector<Complex> w = detail::to_complex(r.weights);
    std::vector<const std::vector<Real>*> np(k, &r.nodes);
    std::vector<const std::vector<Complex>*> wp(k, &w);
    auto [val, l] = detail::tensor_sum<Real>(k, np, wp, f);
    vals[pass] = val;
    l1 = l;
    res.n_evals += detail::ipow(order + 2 * pass, k);
  }
  res.value = vals[0];
  res.error_estimate = std::abs(vals[1] - vals[0]);
  res.converged = detail::settled(vals[0], vals[1], l1, Real(1e-12));
  return res;
}

// --------------------------------------------------------------------------
// Monte Carlo

enum class SamplerKind { UniformSimplex, BetaImportance, GaussianIso, DirichletGaps, UniformCube };

struct Sampler {
  SamplerKind kind = SamplerKind::UniformSimplex;
  Real a = 1;  // beta shape parameters for BetaImportance
  Real b = 1;
  std::vector<Real> gap_exponents;  // k+1 exponents for DirichletGaps, top gap first

  static Sampler uniform_simplex() { return {SamplerKind::UniformSimplex, 1, 1, {}}; }
  static Sampler uniform_cube() { return {SamplerKind::UniformCube, 1, 1, {}}; }
  static Sampler beta_importance(Real a, Real b) { return {SamplerKind::BetaImportance, a, b, {}}; }
  static Sampler gaussian_iso() { return {SamplerKind::GaussianIso, 1, 1, {}}; }
  // Gaps y - t_1, t_1 - t_2, ..., t_k - x drawn from a Dirichlet law with
  // densities proportional to gap^e_i, matching power singularities.
  static Sampler dirichlet_gaps(std::vector<Real> e) { return {SamplerKind::DirichletGaps, 1, 1, std::move(e)}; }
};

inline const char* to_string(SamplerKind s) {
  switch (s) {
    case SamplerKind::UniformSimplex: return "uniform_simplex";
    case SamplerKind::BetaImportance: return "beta_importance";
    case SamplerKind::GaussianIso: return "gaussian_iso";
    case SamplerKind::DirichletGaps: return "dirichlet_gaps";
    case SamplerKind::UniformCube: return "uniform_cube";
  }
  return "?";
}

struct MCOptions {
  std::int64_t batch_size = std::int64_t{1} << 16;
  unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

struct BatchStats {
  std::int64_t n = 0;
  Complex mean{};
  Real m2_re = 0;
  Real m2_im = 0;

  void push(const Complex& x) {
    ++n;
    const Complex d = x - mean;
    mean += d / Real(n);
    m2_re += d.real() * (x.real() - mean.real());
    m2_im += d.imag() * (x.imag() - mean.imag());
  }
  void merge(const BatchStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const Real nt = Real(n + o.n);
    const Complex d = o.mean - mean;
    mean += d * (Real(o.n) / nt);
    m2_re += o.m2_re + d.real() * d.real() * Real(n) * Real(o.n) / nt;
    m2_im += o.m2_im + d.imag() * d.imag() * Real(n) * Real(o.n) / nt;
    n += o.n;
  }
};

}  // namespace detail

/// Seeded Monte Carlo estimate of the integral of f over `domain`.
/// Batch b draws from std::mt19937_64 seeded with seed_seq{seed, b}; batch
/// statistics are merged in batch order, so the result does not depend on the
/// number of threads.
template <class F>
QuadResult mc_integrate(F&& f, const DomainSpec& domain, const Sampler& sampler, std::int64_t n,
                        std::uint64_t seed, MCOptions opt = {}) {
  if (n < 2) throw domain_error("mc_integrate: need n >= 2");
  const int k = domain.k;
  const bool ok = (sampler.kind == SamplerKind::UniformSimplex && domain.kind == DomainKind::OrderedSimplex) ||
                  (sampler.kind == SamplerKind::DirichletGaps && domain.kind == DomainKind::OrderedSimplex) ||
                  (sampler.kind == SamplerKind::BetaImportance && domain.kind == DomainKind::Cube) ||
                  (sampler.kind == SamplerKind::UniformCube && domain.kind == DomainKind::Cube) ||
                  (sampler.kind == SamplerKind::GaussianIso && domain.kind == DomainKind::FullSpaceGaussian);
  if (!ok)
    throw std::invalid_argument(std::string("mc_integrate: sampler ") + to_string(sampler.kind) +
                                " cannot sample domain " + to_string(domain.kind));
  if (sampler.kind == SamplerKind::DirichletGaps) {
    if (static_cast<int>(sampler.gap_exponents.size()) != k + 1)
      throw std::invalid_argument("mc_integrate: dirichlet_gaps needs k+1 gap exponents");
    for (Real e : sampler.gap_exponents)
      if (!(e > -1)) throw std::invalid_argument("mc_integrate: gap exponents must be > -1");
  }
  if (sampler.kind == SamplerKind::BetaImportance && !(sampler.a > 0 && sampler.b > 0))
    throw std::invalid_argument("mc_integrate: beta shapes must be positive");

  const Real x = domain.x, y = domain.y, len = y - x;
  // Constant parts of the log densities.
  Real log_const = 0;
  switch (sampler.kind) {
    case SamplerKind::UniformSimplex: log_const = std::lgamma(Real(k + 1)) - k * std::log(len); break;
    case SamplerKind::UniformCube: log_const = 0; break;
    case SamplerKind::BetaImportance:
      log_const = -k * (std::lgamma(sampler.a) + std::lgamma(sampler.b) - std::lgamma(sampler.a + sampler.b));
      break;
    case SamplerKind::GaussianIso: log_const = 0; break;
    case SamplerKind::DirichletGaps: {
      Real total = 0;
      for (Real e : sampler.gap_exponents) {
        total += 1 + e;
        log_const -= std::lgamma(1 + e);
      }
      log_const += std::lgamma(total) - k * std::log(len);
      break;
    }
  }
  const Real gauss_scale = std::pow(2 * kPi, Real(k) / 2);

  const std::int64_t bs = std::max<std::int64_t>(1, opt.batch_size);
  const std::int64_t nb = (n + bs - 1) / bs;
  std::vector<detail::BatchStats> stats(nb);
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&]() {
    std::vector<Real> t(k), g(k + 1);
    try {
      for (;;) {
        const std::int64_t b = next.fetch_add(1);
        if (b >= nb || failed.load()) return;
        std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        std::mt19937_64 rng(ss);
        std::uniform_real_distribution<Real> unif(0, 1);
        std::normal_distribution<Real> normal(0, 1);
        std::vector<std::gamma_distribution<Real>> gammas;
        if (sampler.kind == SamplerKind::DirichletGaps)
          for (Real e : sampler.gap_exponents) gammas.emplace_back(1 + e, 1);
        std::gamma_distribution<Real> ga(sampler.a, 1), gb(sampler.b, 1);
        const std::int64_t count = std::min(bs, n - b * bs);
        detail::BatchStats st;
        for (std::int64_t i = 0; i < count; ++i) {
          Real log_density = log_const;
          switch (sampler.kind) {
            case SamplerKind::UniformSimplex:
              for (int d = 0; d < k; ++d) t[d] = x + len * unif(rng);
              std::sort(t.begin(), t.end(), std::greater<Real>());
              break;
            case SamplerKind::UniformCube:
              for (int d = 0; d < k; ++d) t[d] = unif(rng);
              break;
            case SamplerKind::BetaImportance:
              for (int d = 0; d < k; ++d) {
                Real u;
                do {
                  const Real A = ga(rng), B = gb(rng);
                  u = A / (A + B);
                } while (!(u > 0 && u < 1));
                t[d] = u;
                log_density += (sampler.a - 1) * std::log(u) + (sampler.b - 1) * std::log1p(-u);
              }
              break;
            case SamplerKind::GaussianIso:
              for (int d = 0; d < k; ++d) t[d] = normal(rng);
              break;
            case SamplerKind::DirichletGaps: {
              Real sum;
              bool zero;
              do {
                sum = 0;
                zero = false;
                for (int d = 0; d <= k; ++d) {
                  g[d] = gammas[d](rng);
                  zero = zero || !(g[d] > 0);
                  sum += g[d];
                }
              } while (zero);
              Real pos = y;
              for (int d = 0; d <= k; ++d) {
                g[d] /= sum;
                log_density += sampler.gap_exponents[d] * std::log(g[d]);
                if (d < k) {
                  pos -= len * g[d];
                  t[d] = pos;
                }
              }
              break;
            }
          }
          Complex v = f(std::span<const Real>(t));
          if (sampler.kind == SamplerKind::GaussianIso)
            v *= gauss_scale;
          else
            v *= std::exp(-log_density);
          st.push(v);
        }
        stats[b] = st;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };

  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, nb));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  detail::BatchStats all;
  for (const auto& s : stats) all.merge(s);
  QuadResult res;
  res.value = all.mean;
  const Real var = (all.m2_re + all.m2_im) / Real(all.n - 1);
  res.error_estimate = std::sqrt(std::max(Real(0), var) / Real(all.n));
  res.n_evals = all.n;
  res.converged = std::isfinite(res.error_estimate) && is_finite(res.value);
  return res;
}

}  // namespace selberg

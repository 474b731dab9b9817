#pragma once

// Registry of the Selberg-type identities: parameter schemas, validity
// predicates, right-hand sides and left-hand-side integration plans.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "selberg/config.hpp"
#include "selberg/coxeter.hpp"
#include "selberg/errors.hpp"
#include "selberg/qsums.hpp"
#include "selberg/quad.hpp"
#include "selberg/specfun.hpp"
#include "selberg/summation.hpp"

namespace selberg {

// --------------------------------------------------------------------------
// Parameters

enum class ParamKind { integer, real, complex, label };

struct ParamSpec {
  std::string name;
  ParamKind kind;
  std::string doc;
};

struct Params {
  std::map<std::string, Complex> num;
  std::map<std::string, std::string> text;

  bool has(const std::string& n) const { return num.count(n) || text.count(n); }
  Complex c(const std::string& n) const {
    auto it = num.find(n);
    if (it == num.end()) throw domain_error("missing parameter '" + n + "'");
    return it->second;
  }
  Real r(const std::string& n) const { return c(n).real(); }
  int i(const std::string& n) const { return static_cast<int>(std::lround(r(n))); }
  const std::string& s(const std::string& n) const {
    auto it = text.find(n);
    if (it == text.end()) throw domain_error("missing parameter '" + n + "'");
    return it->second;
  }
  Params& set(const std::string& n, Complex v) {
    num[n] = v;
    return *this;
  }
  Params& set(const std::string& n, const std::string& v) {
    text[n] = v;
    return *this;
  }
};

/// Parses "1.5", "-2e-3", "0.5+0.25i", "2i", "-i" into a complex number.
inline std::optional<Complex> parse_complex(const std::string& in) {
  std::string s;
  for (char ch : in)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) return std::nullopt;
  auto parse_real = [](const std::string& t, Real& out) {
    if (t.empty()) return false;
    try {
      std::size_t used = 0;
      const long double v = std::stold(t, &used);
      if (used != t.size()) return false;
      out = static_cast<Real>(v);
      return true;
    } catch (...) {
      return false;
    }
  };
  if (s.back() != 'i' && s.back() != 'j') {
    Real v;
    if (!parse_real(s, v)) return std::nullopt;
    return Complex(v, 0);
  }
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  std::string re_s = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_s = split == std::string::npos ? s : s.substr(split);
  if (im_s.empty() || im_s == "+") im_s = "1";
  if (im_s == "-") im_s = "-1";
  Real re = 0, im = 0;
  if (!re_s.empty() && !parse_real(re_s, re)) return std::nullopt;
  if (!parse_real(im_s, im)) return std::nullopt;
  return Complex(re, im);
}

// --------------------------------------------------------------------------
// Gamma products in log space

class GammaProduct {
 public:
  GammaProduct& mul(const Complex& z) {
    log_.add(log_gamma(z));
    return *this;
  }
  GammaProduct& div(const Complex& z) {
    log_.add(-log_gamma(z));
    return *this;
  }
  GammaProduct& times(const Complex& v) {
    if (v == Real(0)) zero_ = true;
    else log_.add(std::log(v));
    return *this;
  }
  Complex value(const char* what = "gamma product") const {
    if (zero_) return 0;
    return detail::checked(std::exp(log_.value()), what);
  }

 private:
  CompensatedSum<Complex> log_;
  bool zero_ = false;
};

inline Real factorial(int k) { return std::exp(std::lgamma(Real(k + 1))); }

// --------------------------------------------------------------------------
// Right-hand sides

/// prod_{j<k} Gamma((j+1)g)/Gamma(g) Gamma(a+jg) Gamma(b+jg) / Gamma(a+b+(2k-2-j)g).
/// The j = 0 ratio Gamma(g)/Gamma(g) is 1 and is not evaluated.
inline Complex rhs_selberg(int k, Complex alpha, Complex beta, Complex gamma) {
  if (k < 1) throw domain_error("rhs_selberg: k must be >= 1");
  GammaProduct g;
  for (int j = 0; j < k; ++j) {
    if (j > 0) g.mul(Real(j + 1) * gamma).div(gamma);
    g.mul(alpha + Real(j) * gamma).mul(beta + Real(j) * gamma).div(alpha + beta + Real(2 * k - 2 - j) * gamma);
  }
  return g.value("rhs_selberg");
}

inline Complex rhs_euler_beta(Complex alpha, Complex beta) { return rhs_selberg(1, alpha, beta, 1); }

/// prod_{j<k} Gamma((j+1)g) Gamma(a+jg) / Gamma(g).
inline Complex rhs_exp_selberg(int k, Complex alpha, Complex gamma) {
  if (k < 1) throw domain_error("rhs_exp_selberg: k must be >= 1");
  GammaProduct g;
  for (int j = 0; j < k; ++j) {
    if (j > 0) g.mul(Real(j + 1) * gamma).div(gamma);
    g.mul(alpha + Real(j) * gamma);
  }
  return g.value("rhs_exp_selberg");
}

inline Complex two_pi_i_pow_fact(int k) {
  return std::pow(2 * kPi * kI, k) * factorial(k);
}

inline Complex rhs_mb_gamma(int k, Complex a, Complex b, Complex c, Complex d, Complex e) {
  if (k < 1) throw domain_error("rhs_mb_gamma: k must be >= 1");
  GammaProduct g;
  for (int j = 0; j < k; ++j) {
    const Complex je = Real(j) * e;
    if (j > 0) g.mul(Real(j + 1) * e).div(e);
    g.mul(a + c + je).mul(a + d + je).mul(b + c + je).mul(b + d + je);
    g.div(a + b + c + d + Real(2 * k - 2 - j) * e);
  }
  return two_pi_i_pow_fact(k) * g.value("rhs_mb_gamma");
}

inline Complex rhs_mb_u(int k, Complex a, Complex gamma, Complex u) {
  if (k < 1) throw domain_error("rhs_mb_u: k must be >= 1");
  GammaProduct g;
  for (int j = 0; j < k; ++j) {
    if (j > 0) g.mul(Real(j + 1) * gamma).div(gamma);
    g.mul(Real(2) * a + Real(j) * gamma);
  }
  const Complex power = std::exp(-Real(k) * (Real(2) * a + Real(k - 1) * gamma) * std::log(u + Real(1) / u));
  return detail::checked(two_pi_i_pow_fact(k) * power * g.value("rhs_mb_u"), "rhs_mb_u");
}

inline Complex rhs_barnes1(Complex a, Complex b, Complex c, Complex d) { return rhs_mb_gamma(1, a, b, c, d, 1); }
inline Complex rhs_barnes2(Complex a, Complex u) { return rhs_mb_u(1, a, 1, u); }

struct QSelbergParams {
  Complex alpha, beta, gamma, delta, eps, u;
};

inline Complex rhs_q_selberg_abgd(int k, const QSelbergParams& p, const QContext& ctx) {
  if (k < 1) throw domain_error("rhs_q_selberg_abgd: k must be >= 1");
  const Complex abgd = p.alpha * p.beta * p.gamma * p.delta;
  Complex r = two_pi_i_pow_fact(k);
  for (int j = 0; j < k; ++j) {
    const Complex uj = detail::ipow(p.u, j);
    r *= qpoch_inf(p.u, ctx) * qpoch_inf(detail::ipow(p.u, k + j - 1) * abgd, ctx) *
         qtheta(uj * p.gamma * p.eps, ctx) * qtheta(uj * p.delta * p.eps, ctx) /
         (qpoch_inf_divisor(uj * p.u, ctx) * qpoch_inf_divisor(uj * p.alpha * p.gamma, ctx) *
          qpoch_inf_divisor(uj * p.beta * p.gamma, ctx) * qpoch_inf_divisor(uj * p.alpha * p.delta, ctx) *
          qpoch_inf_divisor(uj * p.beta * p.delta, ctx) * qpoch_q(ctx));
  }
  return detail::checked(r, "rhs_q_selberg_abgd");
}

// Second q-Selberg identity. `printed`: integrand with (delta t_a)_inf and the
// product (u)(u^j g d)(q u^j g/d)/((u^{j+1})(u^j g d)). `reconciled`:
// integrand with (delta/t_a)_inf and product
// (u)(q u^j g/e)(u^j d e)/((u^{j+1})(u^j g d)), whose k = 1 case is the
// one-dimensional contour formula.
enum class GdVariant { reconciled, printed };

inline const char* to_string(GdVariant v) { return v == GdVariant::reconciled ? "reconciled" : "printed"; }

inline Complex rhs_q_selberg_gd(int k, Complex gamma, Complex delta, Complex eps, Complex u, const QContext& ctx,
                                GdVariant variant = GdVariant::reconciled) {
  if (k < 1) throw domain_error("rhs_q_selberg_gd: k must be >= 1");
  Complex r = two_pi_i_pow_fact(k);
  for (int j = 0; j < k; ++j) {
    const Complex uj = detail::ipow(u, j);
    Complex num, den = qpoch_inf_divisor(uj * u, ctx) * qpoch_inf_divisor(uj * gamma * delta, ctx);
    if (variant == GdVariant::printed)
      num = qpoch_inf(u, ctx) * qpoch_inf(uj * gamma * delta, ctx) * qpoch_inf(ctx.q * uj * gamma / delta, ctx);
    else
      num = qpoch_inf(u, ctx) * qpoch_inf(ctx.q * uj * gamma / eps, ctx) * qpoch_inf(uj * delta * eps, ctx);
    r *= num / den;
  }
  return detail::checked(r, "rhs_q_selberg_gd");
}

/// 2 pi i (abgd)_inf theta(g e) theta(d e) / ((q)(ag)(bg)(ad)(bd)).
inline Complex rhs_q_contour_abgd(const QSelbergParams& p, const QContext& ctx) {
  QSelbergParams p1 = p;
  p1.u = 0;
  return rhs_q_selberg_abgd(1, p1, ctx);
}

/// 2 pi i (q g/e)_inf (d e)_inf / (g d)_inf.
inline Complex rhs_q_contour_gd(Complex gamma, Complex delta, Complex eps, const QContext& ctx) {
  return 2 * kPi * kI * qpoch_inf(ctx.q * gamma / eps, ctx) * qpoch_inf(delta * eps, ctx) /
         qpoch_inf_divisor(gamma * delta, ctx);
}

/// c_k = (2 pi)^{k/2} e^{pi i k/(k+1)} e^{-pi i (k+2)/4} prod_{a=1}^k (e^{-pi i a/(k+1)} - 1).
inline Complex elliptic_selberg_ck(int k) {
  Complex c = std::pow(2 * kPi, Real(k) / 2) * std::exp(kI * kPi * Real(k) / Real(k + 1)) *
              std::exp(-kI * kPi * Real(k + 2) / Real(4));
  for (int a = 1; a <= k; ++a) c *= std::exp(-kI * kPi * Real(a) / Real(k + 1)) - Real(1);
  return c;
}

/// c_k B_k(1/2 + 1/(2k+2), -k/(k+1), 1/(2k+2)) theta_1(lambda, tau)^{k+1}, with
/// B_k the Gamma product continued to negative beta.
inline Complex rhs_elliptic_selberg(int k, Complex lambda, Complex tau, Real tol = kDefaultTol) {
  if (k < 1) throw domain_error("rhs_elliptic_selberg: k must be >= 1");
  const Real kk = k;
  const Complex B = rhs_selberg(k, Real(0.5) + 1 / (2 * kk + 2), -kk / (kk + 1), 1 / (2 * kk + 2));
  return detail::checked(elliptic_selberg_ck(k) * B * std::pow(theta1(lambda, tau, tol), k + 1),
                         "rhs_elliptic_selberg");
}

// ---- sl3 chain ------------------------------------------------------------

struct ChainMap {
  int k1 = 0;
  int k2 = 0;
  std::vector<int> M;  // M[b-1] in 1..k1
};

/// All non-decreasing maps M: {1..k2} -> {1..k1} with M(b) <= k1 - k2 + b,
/// in lexicographic order.
inline std::vector<ChainMap> enumerate_chain_maps(int k1, int k2) {
  if (k2 < 0 || k1 < k2) throw domain_error("enumerate_chain_maps: need k1 >= k2 >= 0");
  std::vector<ChainMap> out;
  std::vector<int> M(k2, 1);
  std::function<void(int, int)> rec = [&](int b, int lo) {
    if (b == k2) {
      out.push_back({k1, k2, M});
      return;
    }
    for (int v = lo; v <= k1 - k2 + b + 1; ++v) {
      M[b] = v;
      rec(b + 1, v);
    }
  };
  rec(0, 1);
  return out;
}

namespace detail {
inline Real chain_sin(int n, Real gamma) { return std::sin(kPi * n * gamma); }
}  // namespace detail

/// Numerator of X_M: prod_b sin(pi (k1 - k2 - M(b) + b + 1) gamma).
inline Real chain_numerator(const ChainMap& m, Real gamma) {
  Real r = 1;
  for (int b = 1; b <= m.k2; ++b) r *= detail::chain_sin(m.k1 - m.k2 - m.M[b - 1] + b + 1, gamma);
  return r;
}

/// prod_b sin(pi (k1 - k2 + b) gamma), the common denominator of all X_M.
inline Real chain_denominator(int k1, int k2, Real gamma) {
  Real r = 1;
  for (int b = 1; b <= k2; ++b) r *= detail::chain_sin(k1 - k2 + b, gamma);
  return r;
}

/// X_M = prod_b sin(pi (k1-k2-M(b)+b+1) gamma) / sin(pi (k1-k2+b) gamma).
inline Real chain_coefficient(const ChainMap& m, Real gamma) {
  Real r = 1;
  for (int b = 1; b <= m.k2; ++b) {
    const Real den = detail::chain_sin(m.k1 - m.k2 + b, gamma);
    if (std::abs(den) < 1e-12) throw pole_error("chain_coefficient: sine in the denominator vanishes");
    r *= detail::chain_sin(m.k1 - m.k2 - m.M[b - 1] + b + 1, gamma) / den;
  }
  return r;
}

/// Total order of Delta_M from the top: variable indices, t_a -> a-1 and
/// s_b -> k1 + b - 1.
inline std::vector<int> chain_order(const ChainMap& m) {
  std::vector<int> order;
  for (int i = 1; i <= m.k1; ++i) {
    for (int b = 1; b <= m.k2; ++b)
      if (m.M[b - 1] == i) order.push_back(m.k1 + b - 1);
    order.push_back(i - 1);
  }
  return order;
}

namespace detail {

inline void sl3_gamma_product(GammaProduct& g, int k1, int k2, Complex a, Complex b1, Complex b2, Complex gm,
                              bool normalized) {
  for (int j = 0; j < k1; ++j) {
    g.mul(a + Real(j) * gm);
    if (j > 0) g.mul(Real(j + 1) * gm).div(gm);
  }
  for (int j = 0; j <= k1 - k2 - 1; ++j) g.mul(b1 + Real(j) * gm).div(a + b1 + Real(2 * k1 - k2 - 2 - j) * gm);
  for (int j = 0; j < k2; ++j) {
    g.mul(b2 + Real(j) * gm).mul(b1 + b2 + Real(j - 1) * gm);
    if (normalized)
      g.times(kPi).div(Real(k1 - j) * gm);  // Gamma(1-z) sin(pi z) = pi / Gamma(z)
    else
      g.mul(Real(1) + Real(j - k1) * gm);
    g.mul(Real(j + 1) * gm).div(gm);
    g.div(b2 + Real(1) + Real(2 * k2 - k1 - 2 - j) * gm).div(a + b1 + b2 + Real(k1 + k2 - 3 - j) * gm);
  }
}

}  // namespace detail

inline Complex rhs_sl3(int k1, int k2, Complex alpha, Complex beta1, Complex beta2, Complex gamma) {
  if (k2 < 0 || k1 < k2 || k1 < 1) throw domain_error("rhs_sl3: need k1 >= k2 >= 0, k1 >= 1");
  GammaProduct g;
  detail::sl3_gamma_product(g, k1, k2, alpha, beta1, beta2, gamma, false);
  return g.value("rhs_sl3");
}

/// rhs_sl3 multiplied by prod_b sin(pi (k1-k2+b) gamma); finite where the
/// sines vanish and rhs_sl3 itself has poles.
inline Complex rhs_sl3_normalized(int k1, int k2, Complex alpha, Complex beta1, Complex beta2, Complex gamma) {
  if (k2 < 0 || k1 < k2 || k1 < 1) throw domain_error("rhs_sl3: need k1 >= k2 >= 0, k1 >= 1");
  GammaProduct g;
  detail::sl3_gamma_product(g, k1, k2, alpha, beta1, beta2, gamma, true);
  return g.value("rhs_sl3_normalized");
}

/// 2^{-N gamma} (2 pi)^{k/2} prod_j Gamma(1 + gamma d_j) / Gamma(1 + gamma).
inline Complex rhs_macdonald_mehta(const CoxeterGroup& grp, Complex gamma) {
  GammaProduct g;
  g.times(std::exp(-Real(grp.hyperplanes()) * gamma * std::log(Real(2))));
  g.times(std::pow(2 * kPi, Real(grp.dim) / 2));
  for (int d : grp.degrees) g.mul(Real(1) + gamma * Real(d)).div(Real(1) + gamma);
  return g.value("rhs_macdonald_mehta");
}

inline Complex rhs_elliptic_beta(std::span<const Complex> u, const PQContext& ctx) {
  if (u.size() != 5) throw domain_error("rhs_elliptic_beta: need five parameters");
  Complex A = 1;
  for (const auto& x : u) A *= x;
  for (const auto& x : u)
    if (!(std::abs(x) < 1)) throw domain_error("rhs_elliptic_beta: need |u_m| < 1");
  if (!(std::abs(ctx.p * ctx.q) < std::abs(A))) throw domain_error("rhs_elliptic_beta: need |pq| < |A|");
  Complex num = 2;
  for (int l = 0; l < 5; ++l)
    for (int m = l + 1; m < 5; ++m) num *= ell_gamma(u[l] * u[m], ctx);
  Complex den = qpoch_q(QContext(ctx.q, ctx.tol)) * qpoch_q(QContext(ctx.p, ctx.tol));
  for (const auto& x : u) den *= ell_gamma(A / x, ctx);
  return detail::checked(num / den, "rhs_elliptic_beta");
}

// --------------------------------------------------------------------------
// Left-hand sides

// What build_lhs hands to the engines.
struct LhsPlan {
  DomainSpec domain = DomainSpec::cube(1);
  // Complete integrand on real domains, every weight included.
  RealIntegrand integrand;
  // Simplex engines: integrand with `weights` removed.
  RealIntegrand smooth;
  SimplexWeights weights;
  // Torus and vertical-line integrand (already includes any 1/t).
  ComplexIntegrand contour;
  Complex prefactor{1};
  Real T0 = 0;
  // Chain: integrand in variable coordinates (t_1..t_k1, s_1..s_k2).
  int k1 = 0;
  int k2 = 0;
  // Set when the chain coefficients are replaced by their numerators.
  bool sine_normalized = false;
  std::vector<std::vector<Real>> chain_gaps;  // Dirichlet exponents per chain term
  CoxeterGroup group;
};

namespace detail {

inline Real safe_pos_pow(Real x, Real e) {
  if (e == 0) return 1;
  return std::pow(std::max(x, std::numeric_limits<Real>::min()), e);
}

// Gamma(e + x) Gamma(e - x) / (Gamma(x) Gamma(-x)); the last two combine to
// -x sin(pi x)/pi, which handles x = 0.
inline Complex mb_pair(const Complex& x, const Complex& e) {
  const Complex inv = -x * detail::sin_pi(x) / kPi;
  if (inv == Real(0)) return 0;
  return std::exp(log_gamma(e + x) + log_gamma(e - x)) * inv;
}

// ln(1/tol)/rate + margin, the half-height where exp(-rate |y|) reaches tol.
inline Real vertical_T0(Real rate, Real tol) {
  return std::max(Real(4), std::log(1 / tol) / std::max(rate, Real(0.1)) + 4);
}

}  // namespace detail

struct ExpSelbergTruncation {
  Real R;
};

/// Cut-off R for the exponential Selberg integral: e^{-R} R^p < tol with
/// p = k(alpha-1) + k(k-1)gamma + k, the growth of the rest of the integrand.
inline Real exp_selberg_cutoff(int k, Real alpha, Real gamma, Real tol) {
  const Real p = std::max(Real(0), k * (alpha - 1) + k * (k - 1) * gamma + k);
  Real R = std::max(Real(1), std::log(1 / tol));
  for (int it = 0; it < 100; ++it) {
    const Real next = std::log(1 / tol) + p * std::log(R) + 2;
    if (std::abs(next - R) < 1e-6) break;
    R = next;
  }
  return R;
}

/// Elliptic Selberg LHS for k = 1, I_1 = J_1(lambda) + J_1(-lambda), with the
/// non-integrable endpoint behaviour t^{-3/2}, (1-t)^{-3/2} regularised by
/// analytic continuation in the endpoint exponents. Writing the integrand as
/// t^{-3/2}(1-t)^{-3/2} G(t) and G = G0 (1-t) + G1 t + t(1-t) R(t), the two
/// linear terms continue to multiples of B(-1/2, 1/2) = 0, leaving the
/// convergent integral of R(t) / sqrt(t(1-t)).
inline QuadResult elliptic_selberg_lhs_k1(Complex lambda, Complex tau, Real tol, int max_order = 1024) {
  const Complex th1p = theta1_prime0(tau);
  auto J = [&](Complex lam, int n, Real& l1) -> Complex {
    const Complex th_lam = theta1(lam, tau);
    const Complex G0 = theta_kn(4, 2, lam, tau);
    const Complex G1 = -theta_kn(4, 2, lam + Real(0.5), tau);
    const GaussRule& rule = cached_gauss_jacobi01(n, -0.5, -0.5);
    CompensatedSum<Complex> sum;
    l1 = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Real t = rule.nodes[i];
      const Complex th_t = theta1(t, tau);
      const Complex E = th_t / th1p;
      const Complex sigma = theta1(lam - t, tau) * th1p / (th_lam * th_t);
      const Complex G = theta_kn(4, 2, lam + t / 2, tau) * std::sqrt(t * (1 - t) / E) * (t * (1 - t)) * sigma;
      const Complex R = (G - G0 * (1 - t) - G1 * t) / (t * (1 - t));
      sum.add(rule.weights[i] * R);
      l1 += rule.weights[i] * std::abs(R);
    }
    return sum.value();
  };
  QuadResult res;
  Complex prev{};
  for (int n = 8; n <= max_order; n *= 2) {
    Real l1a, l1b;
    const Complex v = J(lambda, n, l1a) + J(-lambda, n, l1b);
    res.n_evals += 2 * n;
    res.value = v;
    if (n > 8) {
      res.error_estimate = std::abs(v - prev);
      if (detail::settled(prev, v, l1a + l1b, tol)) {
        res.converged = true;
        return res;
      }
    }
    prev = v;
  }
  return res;
}

namespace detail {

inline Complex q_abgd_integrand(std::span<const Complex> t, int k, const QSelbergParams& p, const QContext& ctx) {
  const Complex c = detail::ipow(p.u, k - 1) * p.gamma * p.delta * p.eps;
  Complex r = 1;
  for (const Complex& x : t) {
    r *= qtheta(ctx.q * x / p.eps, ctx) * qtheta(c * x, ctx) /
         (x * qpoch_inf(p.gamma * x, ctx) * qpoch_inf(p.delta * x, ctx) * qpoch_inf(p.alpha / x, ctx) *
          qpoch_inf(p.beta / x, ctx));
  }
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b)
      if (a != b) r *= qpoch_inf(t[a] / t[b], ctx) / qpoch_inf(p.u * t[a] / t[b], ctx);
  return r;
}

inline Complex q_gd_integrand(std::span<const Complex> t, const QSelbergParams& p, const QContext& ctx,
                              GdVariant variant) {
  Complex r = 1;
  for (const Complex& x : t) {
    const Complex dpart = variant == GdVariant::printed ? qpoch_inf(p.delta * x, ctx) : qpoch_inf(p.delta / x, ctx);
    r *= qtheta(p.eps * x, ctx) / (x * qpoch_inf(p.gamma * x, ctx) * dpart);
  }
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b)
      if (a != b) r *= qpoch_inf(t[a] / t[b], ctx) / qpoch_inf(p.u * t[a] / t[b], ctx);
  return r;
}

// Elliptic beta integrand times 1/t. The pair Gamma(t^2) Gamma(t^-2) is
// inverted through 1/(Gamma(z;p,q) Gamma(1/z;p,q)) = theta(z;p) theta(1/z;q),
// which stays finite at t = +-1.
inline Complex elliptic_beta_integrand(const Complex& t, std::span<const Complex> u, const PQContext& ctx) {
  Complex A = 1;
  for (const auto& x : u) A *= x;
  Complex r = 1;
  for (const auto& x : u) r *= ell_gamma(t * x, ctx) * ell_gamma(x / t, ctx);
  const Complex t2 = t * t;
  r *= theta_short(t2, QContext(ctx.p, ctx.tol)) * theta_short(Real(1) / t2, QContext(ctx.q, ctx.tol));
  r /= ell_gamma(t * A, ctx) * ell_gamma(A / t, ctx);
  return r / t;
}

inline QSelbergParams q_params(const Params& p) {
  QSelbergParams q{};
  auto get = [&](const char* n) { return p.has(n) ? p.c(n) : Complex(0); };
  q.alpha = get("alpha");
  q.beta = get("beta");
  q.gamma = get("gamma");
  q.delta = get("delta");
  q.eps = get("eps");
  q.u = get("u");
  return q;
}

}  // namespace detail

/// Full sl3 integrand in variable coordinates (t_1..t_k1, s_1..s_k2).
inline Real sl3_integrand(std::span<const Real> v, int k1, int k2, Real alpha, Real beta1, Real beta2, Real gamma) {
  Real r = 1;
  for (int a = 0; a < k1; ++a)
    r *= detail::safe_pos_pow(v[a], alpha - 1) * detail::safe_pos_pow(1 - v[a], beta1 - 1);
  for (int b = 0; b < k2; ++b) r *= detail::safe_pos_pow(1 - v[k1 + b], beta2 - 1);
  for (int a = 0; a < k1; ++a)
    for (int b = 0; b < k2; ++b) r *= detail::safe_pos_pow(std::abs(v[a] - v[k1 + b]), -gamma);
  for (int a = 0; a < k1; ++a)
    for (int b = a + 1; b < k1; ++b) r *= detail::safe_pos_pow(std::abs(v[a] - v[b]), 2 * gamma);
  for (int a = 0; a < k2; ++a)
    for (int b = a + 1; b < k2; ++b) r *= detail::safe_pos_pow(std::abs(v[k1 + a] - v[k1 + b]), 2 * gamma);
  return r;
}

/// Dirichlet gap exponents for one chain domain, top gap first.
inline std::vector<Real> sl3_gap_exponents(const std::vector<int>& order, int k1, Real alpha, Real beta1, Real beta2,
                                           Real gamma) {
  const int K = static_cast<int>(order.size());
  auto is_t = [&](int var) { return var < k1; };
  std::vector<Real> e(K + 1);
  e[0] = is_t(order[0]) ? beta1 - 1 : beta2 - 1;
  for (int i = 1; i < K; ++i) e[i] = is_t(order[i - 1]) == is_t(order[i]) ? 2 * gamma : -gamma;
  e[K] = is_t(order[K - 1]) ? alpha - 1 : 0;
  return e;
}

inline Real sl3_sine_floor() { return 1e-12; }

/// LHS plan of an identity. Jackson sums have no integrand; their plan only
/// carries the LatticeSum domain.
inline LhsPlan build_lhs(const std::string& id, const Params& p, const std::string& variant = "") {
  LhsPlan plan;
  auto k_or = [&](int def) { return p.has("k") ? p.i("k") : def; };

  if (id == "selberg" || id == "euler_beta") {
    const int k = id == "selberg" ? k_or(1) : 1;
    const Real a = p.r("alpha"), b = p.r("beta"), g = id == "selberg" ? p.r("gamma") : 0;
    plan.domain = DomainSpec::ordered_simplex(k, 0, 1);
    plan.weights.lower = {a - 1};
    plan.weights.upper = {b - 1};
    plan.weights.pair = 2 * g;
    plan.smooth = [](std::span<const Real>) -> Complex { return 1; };
    plan.integrand = [=](std::span<const Real> t) -> Complex {
      Real r = 1;
      for (int i = 0; i < k; ++i) r *= detail::safe_pos_pow(t[i], a - 1) * detail::safe_pos_pow(1 - t[i], b - 1);
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) r *= detail::safe_pos_pow(std::abs(t[i] - t[j]), 2 * g);
      return r;
    };
    return plan;
  }
  if (id == "exp_selberg") {
    const int k = k_or(1);
    const Real a = p.r("alpha"), g = p.r("gamma");
    const Real R = exp_selberg_cutoff(k, a, g, 1e-17);
    plan.domain = DomainSpec::ordered_simplex(k, 0, R);
    plan.weights.lower = {a - 1};
    plan.weights.upper = {0};
    plan.weights.pair = 2 * g;
    plan.smooth = [](std::span<const Real> t) -> Complex {
      Real s = 0;
      for (Real x : t) s += x;
      return std::exp(-s);
    };
    plan.integrand = [=](std::span<const Real> t) -> Complex {
      Real r = 1;
      for (int i = 0; i < k; ++i) r *= std::exp(-t[i]) * detail::safe_pos_pow(t[i], a - 1);
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) r *= detail::safe_pos_pow(std::abs(t[i] - t[j]), 2 * g);
      return r;
    };
    return plan;
  }
  if (id == "mb_gamma" || id == "barnes1") {
    const int k = id == "mb_gamma" ? k_or(1) : 1;
    const Complex a = p.c("alpha"), b = p.c("beta"), c = p.c("gamma"), d = p.c("delta");
    const Complex e = id == "mb_gamma" ? p.c("eps") : Complex(1);
    plan.domain = DomainSpec::vertical_lines(k);
    plan.T0 = detail::vertical_T0(2 * kPi, 1e-16);
    plan.contour = [=](std::span<const Complex> t) -> Complex {
      CompensatedSum<Complex> lg;
      for (int i = 0; i < k; ++i) {
        lg.add(log_gamma(a + t[i]));
        lg.add(log_gamma(b + t[i]));
        lg.add(log_gamma(c - t[i]));
        lg.add(log_gamma(d - t[i]));
      }
      Complex r = std::exp(lg.value());
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < i; ++j) r *= detail::mb_pair(t[i] - t[j], e);
      return r;
    };
    return plan;
  }
  if (id == "mb_u" || id == "barnes2") {
    const int k = id == "mb_u" ? k_or(1) : 1;
    const Complex a = p.c("alpha"), u = p.c("u");
    const Complex g = id == "mb_u" ? p.c("gamma") : Complex(1);
    const Complex logu = std::log(u);
    plan.domain = DomainSpec::vertical_lines(k);
    plan.T0 = detail::vertical_T0(kPi - 2 * std::abs(std::arg(u)), 1e-16);
    plan.contour = [=](std::span<const Complex> t) -> Complex {
      CompensatedSum<Complex> lg;
      for (int i = 0; i < k; ++i) {
        lg.add(Real(2) * t[i] * logu);
        lg.add(log_gamma(a + t[i]));
        lg.add(log_gamma(a - t[i]));
      }
      Complex r = std::exp(lg.value());
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < i; ++j) r *= detail::mb_pair(t[i] - t[j], g);
      return r;
    };
    return plan;
  }
  if (id == "q_selberg_abgd" || id == "q_contour_abgd") {
    const int k = id == "q_selberg_abgd" ? k_or(1) : 1;
    const QSelbergParams qp = detail::q_params(p);
    const QContext ctx(p.c("q"));
    plan.domain = DomainSpec::torus(k);
    plan.contour = [=](std::span<const Complex> t) { return detail::q_abgd_integrand(t, k, qp, ctx); };
    return plan;
  }
  if (id == "q_selberg_gd" || id == "q_contour_gd") {
    const int k = id == "q_selberg_gd" ? k_or(1) : 1;
    const QSelbergParams qp = detail::q_params(p);
    const QContext ctx(p.c("q"));
    const GdVariant v = (id == "q_selberg_gd" && variant == "printed") ? GdVariant::printed : GdVariant::reconciled;
    plan.domain = DomainSpec::torus(k);
    plan.contour = [=](std::span<const Complex> t) { return detail::q_gd_integrand(t, qp, ctx, v); };
    return plan;
  }
  if (id == "jackson_a" || id == "jackson_b") {
    plan.domain = DomainSpec::lattice_sum(k_or(1));
    return plan;
  }
  if (id == "elliptic_selberg") {
    const int k = k_or(1);
    if (k != 1) throw domain_error("build_lhs: the elliptic Selberg LHS is implemented for k = 1 only");
    const Complex lam = p.c("lambda"), tau = p.c("tau");
    plan.domain = DomainSpec::ordered_simplex(1, 0, 1);
    // Unregularised integrand of J_1(lambda); not integrable at the endpoints.
    plan.integrand = [=](std::span<const Real> t) -> Complex {
      return theta_kn(4, 2, lam + t[0] / 2, tau) * std::pow(weier_E(t[0], tau), Real(-0.5)) *
             sigma_lambda(lam, t[0], tau);
    };
    return plan;
  }
  if (id == "sl3_selberg") {
    const int k1 = p.i("k1"), k2 = p.i("k2");
    const Real a = p.r("alpha"), b1 = p.r("beta1"), b2 = p.r("beta2"), g = p.r("gamma");
    const auto maps = enumerate_chain_maps(k1, k2);
    const bool normalized = std::abs(chain_denominator(k1, k2, g)) < sl3_sine_floor();
    std::vector<ChainTerm> terms;
    for (const auto& m : maps) {
      ChainTerm term;
      term.order = chain_order(m);
      term.coefficient = normalized ? chain_numerator(m, g) : chain_coefficient(m, g);
      plan.chain_gaps.push_back(sl3_gap_exponents(term.order, k1, a, b1, b2, g));
      terms.push_back(std::move(term));
    }
    plan.k1 = k1;
    plan.k2 = k2;
    plan.sine_normalized = normalized;
    plan.domain = DomainSpec::box_chain(k1 + k2, 0, 1, std::move(terms));
    plan.integrand = [=](std::span<const Real> v) -> Complex { return sl3_integrand(v, k1, k2, a, b1, b2, g); };
    return plan;
  }
  if (id == "macdonald_mehta") {
    plan.group = parse_group(p.s("group"));
    const Real g = p.r("gamma");
    const CoxeterGroup grp = plan.group;
    plan.domain = DomainSpec::full_space_gaussian(grp.dim);
    // Gaussian weight excluded; engines for FullSpaceGaussian supply it.
    plan.integrand = [=](std::span<const Real> t) -> Complex {
      return detail::safe_pos_pow(distance_product(grp, t), 2 * g);
    };
    return plan;
  }
  if (id == "elliptic_beta") {
    std::vector<Complex> u;
    for (int m = 0; m < 5; ++m) u.push_back(p.c("u" + std::to_string(m)));
    const PQContext ctx(p.c("p"), p.c("q"));
    plan.domain = DomainSpec::torus(1);
    plan.prefactor = Real(1) / (2 * kPi * kI);
    plan.contour = [=](std::span<const Complex> t) { return detail::elliptic_beta_integrand(t[0], u, ctx); };
    return plan;
  }
  throw domain_error("unknown identity '" + id + "'");
}

// --------------------------------------------------------------------------
// Registry

struct IdentityDescriptor {
  std::string id;
  std::string summary;
  std::vector<ParamSpec> schema;
  Params sample;
  std::string default_engine;
  std::vector<std::string> engines;
  std::vector<std::string> variants;  // first entry is the default
  // Violated constraints, each naming the offending values.
  std::function<std::vector<std::string>(const Params&)> validate;
  std::function<Complex(const Params&, const std::string& variant)> rhs;
};

namespace detail {

inline std::string fmt(const Complex& z) {
  std::ostringstream os;
  os.precision(17);
  if (z.imag() == 0)
    os << z.real();
  else
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

struct Checker {
  const Params& p;
  std::vector<std::string> out;

  void require(bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
  }
  void re_pos(const std::string& n) {
    require(p.c(n).real() > 0, "Re " + n + " > 0 violated (" + n + " = " + fmt(p.c(n)) + ")");
  }
  void abs_lt1(const std::string& n) {
    require(std::abs(p.c(n)) < 1, "|" + n + "| < 1 violated (" + n + " = " + fmt(p.c(n)) + ")");
  }
  void in01(const std::string& n) {
    const Complex v = p.c(n);
    require(v.imag() == 0 && v.real() > 0 && v.real() < 1,
            n + " in (0, 1) violated (" + n + " = " + fmt(v) + ")");
  }
  void k_range(const std::string& n, int lo, int hi) {
    const int k = p.i(n);
    require(k >= lo && k <= hi,
            n + " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] violated (" + n + " = " +
                std::to_string(k) + ")");
  }
};

// z = q^m for an integer m, i.e. theta(z) = 0.
inline bool on_q_lattice(const Complex& z, const Complex& q) {
  if (z == Real(0) || q == Real(0)) return false;
  const Real m = std::round(std::log(std::abs(z)) / std::log(std::abs(q)));
  if (std::abs(m) > 4000) return false;
  const Complex qm = std::exp(m * std::log(q));
  return std::abs(z - qm) <= 1e-12 * std::abs(z);
}

inline void theta_nonzero(Checker& c, const Complex& z, const Complex& q, const std::string& what) {
  c.require(!on_q_lattice(z, q), "RHS vanishes: " + what + " = " + fmt(z) + " is an integer power of q");
}

inline ParamSpec num(const char* n, const char* doc) { return {n, ParamKind::real, doc}; }
inline ParamSpec cnum(const char* n, const char* doc) { return {n, ParamKind::complex, doc}; }
inline ParamSpec inum(const char* n, const char* doc) { return {n, ParamKind::integer, doc}; }

inline void selberg_conditions(Checker& c, int k, const std::string& a, const std::string& b, const std::string& g) {
  c.re_pos(a);
  c.re_pos(b);
  Real bound = Real(1) / k;
  if (k > 1) bound = std::min({bound, c.p.r(a) / (k - 1), c.p.r(b) / (k - 1)});
  c.require(c.p.r(g) > -bound, "Re gamma > -min(1/k, Re alpha/(k-1), Re beta/(k-1)) violated (gamma = " +
                                   fmt(c.p.c(g)) + ", bound = " + fmt(-bound) + ")");
}

inline std::vector<IdentityDescriptor> make_registry() {
  std::vector<IdentityDescriptor> reg;
  const std::vector<std::string> simplex_engines = {"gauss_jacobi", "cube", "mc"};

  {
    IdentityDescriptor d;
    d.id = "selberg";
    d.summary = "Selberg integral over the ordered simplex in [0,1]^k";
    d.schema = {inum("k", "dimension"), num("alpha", "exponent of t"), num("beta", "exponent of 1-t"),
                num("gamma", "half the pair exponent")};
    d.sample.set("k", 2).set("alpha", 1).set("beta", 1).set("gamma", 1);
    d.default_engine = "gauss_jacobi";
    d.engines = simplex_engines;
    d.validate = [](const Params& p) {
      Checker c{p, {}};
      c.k_range("k", 1, 6);
      if (c.out.empty()) selberg_conditions(c, p.i("k"), "alpha", "beta", "gamma");
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_selberg(p.i("k"), p.c("alpha"), p.c("beta"), p.c("gamma"));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "euler_beta";
    d.summary = "Euler beta integral";
    d.schema = {num("alpha", "exponent of t"), num("beta", "exponent of 1-t")};
    d.sample.set("alpha", 2).set("beta", 3);
    d.default_engine = "gauss_jacobi";
    d.engines = simplex_engines;
    d.validate = [](const Params& p) {
      Checker c{p, {}};
      c.re_pos("alpha");
      c.re_pos("beta");
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) { return rhs_euler_beta(p.c("alpha"), p.c("beta")); };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "exp_selberg";
    d.summary = "exponential Selberg integral over the ordered simplex in [0,inf)^k";
    d.schema = {inum("k", "dimension"), num("alpha", "exponent of t"), num("gamma", "half the pair exponent")};
    d.sample.set("k", 2).set("alpha", 1).set("gamma", 1);
    d.default_engine = "gauss_jacobi";
    d.engines = {"gauss_jacobi", "mc"};
    d.validate = [](const Params& p) {
      Checker c{p, {}};
      c.k_range("k", 1, 4);
      c.re_pos("alpha");
      if (c.out.empty() && p.i("k") > 1) {
        const Real bound = std::min(Real(1) / p.i("k"), p.r("alpha") / (p.i("k") - 1));
        c.require(p.r("gamma") > -bound, "Re gamma > -min(1/k, Re alpha/(k-1)) violated (gamma = " +
                                             fmt(p.c("gamma")) + ")");
      }
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_exp_selberg(p.i("k"), p.c("alpha"), p.c("gamma"));
    };
    reg.push_back(d);
  }
  auto mb_validate = [](std::vector<std::string> names, bool has_k) {
    return [names, has_k](const Params& p) {
      Checker c{p, {}};
      if (has_k) c.k_range("k", 1, 3);
      for (const auto& n : names) c.re_pos(n);
      if (p.has("u")) c.require(p.c("u") != Real(0), "u != 0 violated");
      return c.out;
    };
  };
  {
    IdentityDescriptor d;
    d.id = "mb_gamma";
    d.summary = "Mellin-Barnes Selberg integral, Gamma form";
    d.schema = {inum("k", "dimension"), cnum("alpha", ""), cnum("beta", ""), cnum("gamma", ""),
                cnum("delta", ""), cnum("eps", "interaction parameter")};
    d.sample.set("k", 2).set("alpha", 0.5).set("beta", 0.5).set("gamma", 0.5).set("delta", 0.5).set("eps", 0.5);
    d.default_engine = "vertical";
    d.engines = {"vertical"};
    d.validate = mb_validate({"alpha", "beta", "gamma", "delta", "eps"}, true);
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_mb_gamma(p.i("k"), p.c("alpha"), p.c("beta"), p.c("gamma"), p.c("delta"), p.c("eps"));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "mb_u";
    d.summary = "Mellin-Barnes Selberg integral, u form";
    d.schema = {inum("k", "dimension"), cnum("alpha", ""), cnum("gamma", "interaction parameter"),
                cnum("u", "base of u^{2t}")};
    d.sample.set("k", 2).set("alpha", 0.5).set("gamma", 0.5).set("u", 1);
    d.default_engine = "vertical";
    d.engines = {"vertical"};
    d.validate = mb_validate({"alpha", "gamma", "u"}, true);
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_mb_u(p.i("k"), p.c("alpha"), p.c("gamma"), p.c("u"));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "barnes1";
    d.summary = "Barnes first lemma";
    d.schema = {cnum("alpha", ""), cnum("beta", ""), cnum("gamma", ""), cnum("delta", "")};
    d.sample.set("alpha", 0.5).set("beta", 0.5).set("gamma", 0.5).set("delta", 0.5);
    d.default_engine = "vertical";
    d.engines = {"vertical"};
    d.validate = mb_validate({"alpha", "beta", "gamma", "delta"}, false);
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_barnes1(p.c("alpha"), p.c("beta"), p.c("gamma"), p.c("delta"));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "barnes2";
    d.summary = "Barnes second integral with u^{2t}";
    d.schema = {cnum("alpha", ""), cnum("u", "")};
    d.sample.set("alpha", 0.5).set("u", 1);
    d.default_engine = "vertical";
    d.engines = {"vertical"};
    d.validate = mb_validate({"alpha", "u"}, false);
    d.rhs = [](const Params& p, const std::string&) { return rhs_barnes2(p.c("alpha"), p.c("u")); };
    reg.push_back(d);
  }
  auto q_common = [](Checker& c, std::initializer_list<const char*> names) {
    for (const char* n : names) c.in01(n);
    const Complex q = c.p.c("q");
    c.require(q.imag() == 0 && q.real() > 0 && q.real() < 1, "q in (0, 1) violated (q = " + fmt(q) + ")");
  };
  {
    IdentityDescriptor d;
    d.id = "q_selberg_abgd";
    d.summary = "q-Selberg torus integral with alpha, beta, gamma, delta";
    d.schema = {inum("k", "dimension"), num("alpha", ""), num("beta", ""), num("gamma", ""), num("delta", ""),
                num("eps", "theta shift"), num("u", "interaction base"), num("q", "base")};
    d.sample.set("k", 2).set("alpha", 0.2).set("beta", 0.3).set("gamma", 0.25).set("delta", 0.15).set("eps", 0.45)
        .set("u", 0.35).set("q", 0.1);
    d.default_engine = "torus";
    d.engines = {"torus"};
    d.validate = [q_common](const Params& p) {
      Checker c{p, {}};
      c.k_range("k", 1, 3);
      q_common(c, {"alpha", "beta", "gamma", "delta", "u"});
      c.require(p.r("eps") > 0, "eps > 0 violated (eps = " + fmt(p.c("eps")) + ")");
      if (c.out.empty()) {
        const Complex q = p.c("q");
        for (int j = 0; j < p.i("k"); ++j) {
          const Complex uj = std::pow(p.c("u"), j);
          theta_nonzero(c, uj * p.c("gamma") * p.c("eps"), q, "u^" + std::to_string(j) + " gamma eps");
          theta_nonzero(c, uj * p.c("delta") * p.c("eps"), q, "u^" + std::to_string(j) + " delta eps");
        }
      }
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_q_selberg_abgd(p.i("k"), q_params(p), QContext(p.c("q")));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "q_selberg_gd";
    d.summary = "q-Selberg torus integral with gamma, delta";
    d.schema = {inum("k", "dimension"), num("gamma", ""), num("delta", ""), num("eps", "theta shift"),
                num("u", "interaction base"), num("q", "base")};
    d.sample.set("k", 2).set("gamma", 0.3).set("delta", 0.25).set("eps", 0.4).set("u", 0.35).set("q", 0.2);
    d.default_engine = "torus";
    d.engines = {"torus"};
    d.variants = {"reconciled", "printed"};
    d.validate = [q_common](const Params& p) {
      Checker c{p, {}};
      c.k_range("k", 1, 3);
      q_common(c, {"gamma", "delta", "u"});
      c.require(p.r("eps") > 0, "eps > 0 violated (eps = " + fmt(p.c("eps")) + ")");
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string& v) {
      return rhs_q_selberg_gd(p.i("k"), p.c("gamma"), p.c("delta"), p.c("eps"), p.c("u"), QContext(p.c("q")),
                              v == "printed" ? GdVariant::printed : GdVariant::reconciled);
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "q_contour_abgd";
    d.summary = "one-dimensional q-contour integral with alpha, beta, gamma, delta";
    d.schema = {num("alpha", ""), num("beta", ""), num("gamma", ""), num("delta", ""), num("eps", "theta shift"),
                num("q", "base")};
    d.sample.set("alpha", 0.2).set("beta", 0.3).set("gamma", 0.25).set("delta", 0.15).set("eps", 0.45).set("q", 0.1);
    d.default_engine = "torus";
    d.engines = {"torus"};
    d.validate = [q_common](const Params& p) {
      Checker c{p, {}};
      q_common(c, {"alpha", "beta", "gamma", "delta"});
      c.require(p.r("eps") > 0, "eps > 0 violated (eps = " + fmt(p.c("eps")) + ")");
      if (c.out.empty()) {
        theta_nonzero(c, p.c("gamma") * p.c("eps"), p.c("q"), "gamma eps");
        theta_nonzero(c, p.c("delta") * p.c("eps"), p.c("q"), "delta eps");
      }
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) { return rhs_q_contour_abgd(q_params(p), QContext(p.c("q"))); };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "q_contour_gd";
    d.summary = "one-dimensional q-contour integral with gamma, delta";
    d.schema = {num("gamma", ""), num("delta", ""), num("eps", "theta shift"), num("q", "base")};
    d.sample.set("gamma", 0.3).set("delta", 0.25).set("eps", 0.4).set("q", 0.2);
    d.default_engine = "torus";
    d.engines = {"torus"};
    d.validate = [q_common](const Params& p) {
      Checker c{p, {}};
      q_common(c, {"gamma", "delta"});
      c.require(p.r("eps") > 0, "eps > 0 violated (eps = " + fmt(p.c("eps")) + ")");
      if (c.out.empty()) {
        const Complex q = p.c("q");
        const Complex z1 = q * p.c("gamma") / p.c("eps"), z2 = p.c("delta") * p.c("eps");
        // (z)_inf = 0 exactly when z = q^{-m}, m >= 0
        c.require(!(on_q_lattice(z1, q) && std::abs(z1) >= 1), "RHS vanishes: (q gamma/eps)_inf = 0");
        c.require(!(on_q_lattice(z2, q) && std::abs(z2) >= 1), "RHS vanishes: (delta eps)_inf = 0");
      }
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_q_contour_gd(p.c("gamma"), p.c("delta"), p.c("eps"), QContext(p.c("q")));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "jackson_a";
    d.summary = "q-Selberg Jackson sum A";
    d.schema = {inum("k", "dimension"), num("alpha", ""), num("beta", ""), num("gamma", ""), num("delta", ""),
                num("u", "interaction base"), num("q", "base")};
    d.sample.set("k", 2).set("alpha", 0.2).set("beta", 0.3).set("gamma", 0.25).set("delta", 0.15).set("u", 0.35)
        .set("q", 0.1);
    d.default_engine = "series";
    d.engines = {"series"};
    d.variants = {"delta", "printed"};
    d.validate = [q_common](const Params& p) {
      Checker c{p, {}};
      c.k_range("k", 1, 3);
      q_common(c, {"alpha", "beta", "gamma", "delta", "u"});
      if (c.out.empty()) {
        const Complex quk = p.c("q") * std::pow(p.c("u"), p.i("k") - 1);
        c.require(std::abs(quk) < 1, "|q u^(k-1)| < 1 violated (|q u^(k-1)| = " + fmt(std::abs(quk)) + ")");
        const Complex q = p.c("q"), r = p.c("gamma") / p.c("delta");
        for (int j = 0; j < p.i("k"); ++j)
          theta_nonzero(c, std::pow(p.c("u"), j) * r, q, "u^" + std::to_string(j) + " gamma/delta");
      }
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      JacksonAParams jp{p.c("alpha"), p.c("beta"), p.c("gamma"), p.c("delta"), p.c("u")};
      return rhs_jackson_A(p.i("k"), jp, QContext(p.c("q")));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "jackson_b";
    d.summary = "q-Selberg Jackson sum B";
    d.schema = {inum("k", "dimension"), num("alpha", ""), num("v", "series variable"), num("u", "interaction base"),
                num("q", "base")};
    d.sample.set("k", 2).set("alpha", 0.3).set("v", 0.2).set("u", 0.5).set("q", 0.1);
    d.default_engine = "series";
    d.engines = {"series"};
    d.validate = [q_common](const Params& p) {
      Checker c{p, {}};
      c.k_range("k", 1, 4);
      q_common(c, {"alpha", "u"});
      if (c.out.empty()) {
        const Real lim = std::min(Real(1), std::abs(std::pow(p.c("u"), p.i("k") - 1)));
        c.require(std::abs(p.c("v")) < lim, "|v| < min(1, |u^(k-1)|) violated (|v| = " + fmt(std::abs(p.c("v"))) +
                                                ", min(1, |u^(k-1)|) = " + fmt(lim) + ")");
      }
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      JacksonBParams jp{p.c("alpha"), p.c("v"), p.c("u")};
      return rhs_jackson_B(p.i("k"), jp, QContext(p.c("q")));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "elliptic_selberg";
    d.summary = "elliptic Selberg integral I_k(lambda, tau)";
    d.schema = {inum("k", "dimension"), num("lambda", "shift in (0, 1)"), cnum("tau", "modulus, purely imaginary")};
    d.sample.set("k", 1).set("lambda", 0.3).set("tau", Complex(0, 1));
    d.default_engine = "finite_part";
    d.engines = {"finite_part"};
    d.validate = [](const Params& p) {
      Checker c{p, {}};
      c.require(p.i("k") == 1, "k = 1 required: the regularised LHS exists for k = 1 only (k = " +
                                   std::to_string(p.i("k")) + ")");
      const Complex tau = p.c("tau");
      c.require(tau.real() == 0 && tau.imag() > 0, "tau purely imaginary with Im tau > 0 violated (tau = " +
                                                       fmt(tau) + ")");
      c.in01("lambda");
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_elliptic_selberg(p.i("k"), p.c("lambda"), p.c("tau"));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "sl3_selberg";
    d.summary = "Selberg type integral over the sl3 chain";
    d.schema = {inum("k1", "number of t variables"), inum("k2", "number of s variables"), num("alpha", ""),
                num("beta1", ""), num("beta2", ""), num("gamma", "in (0, 1)")};
    d.sample.set("k1", 1).set("k2", 1).set("alpha", 1).set("beta1", 1).set("beta2", 1).set("gamma", 0.3);
    d.default_engine = "mc";
    d.engines = {"mc"};
    d.validate = [](const Params& p) {
      Checker c{p, {}};
      const int k1 = p.i("k1"), k2 = p.i("k2");
      c.require(k1 >= 1 && k2 >= 0 && k1 >= k2 && k1 + k2 <= 6,
                "k1 >= k2 >= 0, k1 >= 1, k1 + k2 <= 6 violated (k1 = " + std::to_string(k1) + ", k2 = " +
                    std::to_string(k2) + ")");
      c.re_pos("alpha");
      c.re_pos("beta1");
      c.re_pos("beta2");
      const Real g = p.r("gamma");
      c.require(g > 0 && g < 1, "gamma in (0, 1) violated (gamma = " + fmt(p.c("gamma")) + ")");
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      const int k1 = p.i("k1"), k2 = p.i("k2");
      const Real g = p.r("gamma");
      if (std::abs(chain_denominator(k1, k2, g)) < sl3_sine_floor())
        return rhs_sl3_normalized(k1, k2, p.c("alpha"), p.c("beta1"), p.c("beta2"), p.c("gamma"));
      return rhs_sl3(k1, k2, p.c("alpha"), p.c("beta1"), p.c("beta2"), p.c("gamma"));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "macdonald_mehta";
    d.summary = "Gaussian integral of a power of the Coxeter distance product";
    d.schema = {{"group", ParamKind::label, "A2, A3, B2, D4, I2(5), A1 (rank one on R^1)"},
                num("gamma", "half the exponent of |P|")};
    d.sample.set("group", std::string("A2")).set("gamma", 1);
    d.default_engine = "gauss_hermite";
    d.engines = {"gauss_hermite", "mc"};
    d.validate = [](const Params& p) {
      Checker c{p, {}};
      try {
        const CoxeterGroup g = parse_group(p.s("group"));
        c.require(g.dim <= 6, "dimension <= 6 violated (group = " + p.s("group") + ")");
      } catch (const std::exception& e) {
        c.out.push_back(e.what());
      }
      c.require(p.r("gamma") >= 0, "gamma >= 0 violated (gamma = " + fmt(p.c("gamma")) + ")");
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      return rhs_macdonald_mehta(parse_group(p.s("group")), p.c("gamma"));
    };
    reg.push_back(d);
  }
  {
    IdentityDescriptor d;
    d.id = "elliptic_beta";
    d.summary = "elliptic beta integral";
    d.schema = {cnum("u0", ""), cnum("u1", ""), cnum("u2", ""), cnum("u3", ""), cnum("u4", ""),
                cnum("p", "first base"), cnum("q", "second base")};
    d.sample.set("u0", 0.7).set("u1", 0.65).set("u2", 0.6).set("u3", 0.55).set("u4", 0.5).set("p", 0.15)
        .set("q", 0.2);
    d.default_engine = "torus";
    d.engines = {"torus"};
    d.validate = [](const Params& p) {
      Checker c{p, {}};
      Complex A = 1;
      for (int m = 0; m < 5; ++m) {
        const std::string n = "u" + std::to_string(m);
        c.abs_lt1(n);
        c.require(p.c(n) != Real(0), n + " != 0 violated");
        A *= p.c(n);
      }
      c.abs_lt1("p");
      c.abs_lt1("q");
      const Real pq = std::abs(p.c("p") * p.c("q"));
      c.require(pq < std::abs(A), "|pq| < |A| violated (|pq| = " + fmt(pq) + ", |A| = " + fmt(std::abs(A)) + ")");
      return c.out;
    };
    d.rhs = [](const Params& p, const std::string&) {
      std::vector<Complex> u;
      for (int m = 0; m < 5; ++m) u.push_back(p.c("u" + std::to_string(m)));
      return rhs_elliptic_beta(u, PQContext(p.c("p"), p.c("q")));
    };
    reg.push_back(d);
  }
  return reg;
}

}  // namespace detail

inline const std::vector<IdentityDescriptor>& registry() {
  static const std::vector<IdentityDescriptor> reg = detail::make_registry();
  return reg;
}

inline const IdentityDescriptor& find_identity(const std::string& id) {
  for (const auto& d : registry())
    if (d.id == id) return d;
  throw domain_error("unknown identity '" + id + "'");
}

}  // namespace selberg

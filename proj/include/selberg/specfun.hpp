#pragma once

// Scalar special functions: Gamma, q-Pochhammer and q-theta, Jacobi theta_1
// and the level-kappa theta functions, the elliptic gamma function.
//
// All functions are pure. Series and products are truncated with a priori
// tail bounds or, for the Gaussian theta series, once two consecutive terms
// past the peak fall below tol relative to the largest term seen.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "selberg/config.hpp"
#include "selberg/errors.hpp"
#include "selberg/summation.hpp"

namespace selberg {

// Base q of the q-series, 0 <= |q| < 1.
struct QContext {
  Complex q;
  Real tol = kDefaultTol;

  explicit QContext(Complex q_, Real tol_ = kDefaultTol) : q(q_), tol(tol_) {
    if (!(std::abs(q) < 1)) throw domain_error("QContext: |q| must be < 1");
    if (!(tol > 0)) throw domain_error("QContext: tol must be positive");
  }
};

// Bases p, q of the elliptic gamma function, |p| < 1 and |q| < 1.
struct PQContext {
  Complex p;
  Complex q;
  Real tol = kDefaultTol;

  PQContext(Complex p_, Complex q_, Real tol_ = kDefaultTol) : p(p_), q(q_), tol(tol_) {
    if (!(std::abs(p) < 1) || !(std::abs(q) < 1))
      throw domain_error("PQContext: |p| and |q| must be < 1");
    if (!(tol > 0)) throw domain_error("PQContext: tol must be positive");
  }
};

namespace detail {

// B_{2m} / (2m (2m-1)), m = 1..11.
inline constexpr std::array<long double, 11> kStirlingCoeffs = {
    1.0L / 12,          -1.0L / 360,     1.0L / 1260,         -1.0L / 1680,
    1.0L / 1188,        -691.0L / 360360, 1.0L / 156,          -3617.0L / 122400,
    43867.0L / 244188,  -174611.0L / 125400, 77683.0L / 5796};

inline bool is_nonpositive_integer(const Complex& z) {
  return z.imag() == 0 && z.real() <= 0 && std::floor(z.real()) == z.real();
}

// sin(pi z) with the real part reduced to [-1/2, 1/2] first.
inline Complex sin_pi(const Complex& z) {
  const Real n = std::round(z.real());
  const Real f = z.real() - n;
  const Real y = z.imag();
  Complex s{std::sin(kPi * f) * std::cosh(kPi * y), std::cos(kPi * f) * std::sinh(kPi * y)};
  return std::fmod(n, Real(2)) == 0 ? s : -s;
}

inline Real wrap_angle(Real a) {
  const Real two_pi = 2 * kPi;
  a = std::remainder(a, two_pi);
  if (a <= -kPi) a += two_pi;
  return a;
}

// Principal log sin(pi z); stays finite where sin(pi z) itself overflows.
inline Complex log_sin_pi(const Complex& z) {
  const Real y = z.imag();
  if (std::abs(y) < 20) return std::log(sin_pi(z));
  const Complex w = y > 0 ? z : std::conj(z);
  // sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 pi i w}), Im w > 0
  const Complex tail = std::log(Real(1) - std::exp(2 * kPi * kI * w));
  Complex l{-std::log(Real(2)) + kPi * w.imag() + tail.real(),
            wrap_angle(kPi / 2 - kPi * w.real() + tail.imag())};
  return y > 0 ? l : std::conj(l);
}

inline Complex log_gamma_stirling(const Complex& z) {
  const Complex inv = Real(1) / z;
  const Complex inv2 = inv * inv;
  Complex series = 0;
  Complex p = inv;
  for (long double c : kStirlingCoeffs) {
    series += static_cast<Real>(c) * p;
    p *= inv2;
  }
  return (z - Real(0.5)) * std::log(z) - z + Real(0.5) * std::log(2 * kPi) + series;
}

}  // namespace detail

/// Principal branch of log Gamma(z), the continuation from the positive axis
/// that is analytic off the negative real axis. Values come from the Stirling
/// series after an upward shift to Re z >= 15, subtracting principal logs of
/// the shifted factors. Far to the left (Re z < -10^4) the reflection formula
/// is used with the branch correction that keeps the imaginary part
/// continuous.
inline Complex log_gamma(const Complex& z) {
  if (!is_finite(z)) throw domain_error("log_gamma: argument is not finite");
  if (detail::is_nonpositive_integer(z))
    throw pole_error("log_gamma: pole at non-positive integer " + std::to_string(double(z.real())));
  if (z.real() < Real(-1e4)) {
    const Real branch = std::copysign(2 * kPi, z.imag()) * std::floor(Real(0.5) * z.real() + Real(0.25));
    return Complex{std::log(kPi), branch} - detail::log_sin_pi(z) - log_gamma(Real(1) - z);
  }
  constexpr Real kShiftTo = 15;
  if (z.real() >= kShiftTo) return detail::log_gamma_stirling(z);
  const int n = static_cast<int>(std::ceil(kShiftTo - z.real()));
  CompensatedSum<Complex> logs;
  for (int j = 0; j < n; ++j) logs.add(std::log(z + Real(j)));
  return detail::log_gamma_stirling(z + Real(n)) - logs.value();
}

inline Complex gamma(const Complex& z) { return detail::checked(std::exp(log_gamma(z)), "gamma"); }

// 1/Gamma(z); entire, so zero at the poles of Gamma.
inline Complex rgamma(const Complex& z) {
  if (detail::is_nonpositive_integer(z)) return 0;
  return detail::checked(std::exp(-log_gamma(z)), "rgamma");
}

/// (u; q)_inf = prod_{n>=0} (1 - q^n u). Stops once the neglected factors
/// can move the product by at most ctx.tol relatively:
/// |prod_{m>=N}(1 - q^m u) - 1| <= exp(|u||q|^N / (1-|q|)) - 1.
inline Complex qpoch_inf(const Complex& u, const QContext& ctx) {
  constexpr int kMaxFactors = 1 << 22;
  Complex prod = Real(1) - u;
  const Real aq = std::abs(ctx.q);
  const Real au = std::abs(u);
  if (aq == 0 || au == 0) return prod;
  const Real scale = au / (1 - aq);
  Complex qn = 1;
  for (int n = 1;; ++n) {
    qn *= ctx.q;
    if (std::abs(qn) * scale <= ctx.tol) break;
    if (n > kMaxFactors) throw convergence_error("qpoch_inf: too many factors, |q| too close to 1");
    prod *= Real(1) - qn * u;
  }
  return detail::checked(prod, "qpoch_inf");
}

/// (u; q)_inf for use as a divisor: pole_error when one of its factors
/// vanishes to working precision.
inline Complex qpoch_inf_divisor(const Complex& u, const QContext& ctx) {
  const Complex v = qpoch_inf(u, ctx);
  Complex qn = 1;
  const Real aq = std::abs(ctx.q);
  for (int n = 0;; ++n) {
    if (std::abs(Real(1) - qn * u) <= 64 * kEps) throw pole_error("q-Pochhammer divisor vanishes");
    qn *= ctx.q;
    if (aq == 0 || std::abs(qn * u) < Real(0.5)) break;
  }
  return v;
}

/// (q; q)_inf = prod_{n>=1} (1 - q^n).
inline Complex qpoch_q(const QContext& ctx) { return qpoch_inf(ctx.q, ctx); }

/// (u)_inf (q/u)_inf, the theta function without its (q)_inf factor.
/// With base p this is the theta(u; p) of the elliptic gamma reflection rules.
inline Complex theta_short(const Complex& u, const QContext& ctx) {
  if (u == Real(0)) throw domain_error("theta_short: zero argument");
  return qpoch_inf(u, ctx) * qpoch_inf(ctx.q / u, ctx);
}

/// theta(u) = (u)_inf (q u^{-1})_inf (q)_inf; theta(q u) = -u^{-1} theta(u).
inline Complex qtheta(const Complex& u, const QContext& ctx) {
  if (u == Real(0)) throw domain_error("qtheta: zero argument");
  return detail::checked(theta_short(u, ctx) * qpoch_q(ctx), "qtheta");
}

namespace detail {

inline void check_tau(const Complex& tau) {
  if (!(tau.imag() > 0)) throw domain_error("theta: Im tau must be positive");
  if (std::exp(-kPi * tau.imag()) >= Real(0.999))
    throw domain_error("theta: |exp(i pi tau)| >= 0.999, series too slowly convergent");
}

constexpr int kMaxThetaTerms = 100000;

}  // namespace detail

/// theta_1(t, tau) = -sum_j exp(pi i (j+1/2)^2 tau + 2 pi i (j+1/2)(t+1/2)),
/// summed with the j and -j-1 terms paired into
/// 2 (-1)^n exp(pi i tau (n+1/2)^2) sin((2n+1) pi t), which keeps full
/// relative accuracy near the zero at t = 0.
inline Complex theta1(const Complex& t, const Complex& tau, Real tol = kDefaultTol) {
  detail::check_tau(tau);
  const Real peak = std::abs(t.imag()) / tau.imag();
  CompensatedSum<Complex> sum;
  Real largest = 0;
  int quiet = 0;
  for (int n = 0; n < detail::kMaxThetaTerms; ++n) {
    const Real x = n + Real(0.5);
    Complex term = std::exp(kPi * kI * tau * (x * x)) * std::sin(Real(2 * n + 1) * kPi * t);
    if (n % 2) term = -term;
    sum.add(term);
    const Real mag = std::abs(term);
    largest = std::max(largest, mag);
    if (x > peak && mag <= tol * largest) {
      if (++quiet == 2) return detail::checked(Real(2) * sum.value(), "theta1");
    } else {
      quiet = 0;
    }
  }
  throw convergence_error("theta1: series did not converge");
}

/// d/dt theta_1(t, tau) at t = 0, differentiated term by term.
inline Complex theta1_prime0(const Complex& tau, Real tol = kDefaultTol) {
  detail::check_tau(tau);
  CompensatedSum<Complex> sum;
  Real largest = 0;
  int quiet = 0;
  for (int n = 0; n < detail::kMaxThetaTerms; ++n) {
    const Real x = n + Real(0.5);
    Complex term = std::exp(kPi * kI * tau * (x * x)) * (Real(2 * n + 1) * kPi);
    if (n % 2) term = -term;
    sum.add(term);
    const Real mag = std::abs(term);
    largest = std::max(largest, mag);
    if (mag <= tol * largest) {
      if (++quiet == 2) return detail::checked(Real(2) * sum.value(), "theta1_prime0");
    } else {
      quiet = 0;
    }
  }
  throw convergence_error("theta1_prime0: series did not converge");
}

/// theta_{kappa,n}(t, tau) = sum_j exp(2 pi i kappa (j + n/2kappa)^2 tau
///                                      + 2 pi i kappa (j + n/2kappa) t).
/// The window is centred on the largest term and grown symmetrically.
inline Complex theta_kn(int kappa, int n, const Complex& t, const Complex& tau,
                        Real tol = kDefaultTol) {
  if (kappa < 2) throw domain_error("theta_kn: kappa must be >= 2");
  detail::check_tau(tau);
  const Real shift = Real(n) / (2 * kappa);
  const Complex a = 2 * kPi * kI * Real(kappa) * tau;
  const Complex b = 2 * kPi * kI * Real(kappa) * t;
  auto term = [&](Real j) {
    const Real x = j + shift;
    return std::exp(a * (x * x) + b * x);
  };
  const Real centre = std::round(-t.imag() / (2 * tau.imag()) - shift);
  CompensatedSum<Complex> sum;
  Complex first = term(centre);
  sum.add(first);
  Real largest = std::abs(first);
  int quiet = 0;
  for (int d = 1; d < detail::kMaxThetaTerms; ++d) {
    const Complex up = term(centre + d);
    const Complex down = term(centre - d);
    sum.add(up);
    sum.add(down);
    const Real mag = std::max(std::abs(up), std::abs(down));
    largest = std::max(largest, mag);
    if (mag <= tol * largest) {
      if (++quiet == 2) return detail::checked(sum.value(), "theta_kn");
    } else {
      quiet = 0;
    }
  }
  throw convergence_error("theta_kn: series did not converge");
}

namespace detail {

// True when x lies on the lattice Z + tau Z of zeros of theta_1.
inline bool on_theta1_lattice(const Complex& x, const Complex& tau) {
  const Real nt = std::round(x.imag() / tau.imag());
  const Complex r = x - nt * tau;
  const Real m = std::round(r.real());
  return std::abs(r - m) <= 64 * kEps * std::max(Real(1), std::abs(x));
}

}  // namespace detail

/// sigma_lambda(t) = theta_1(lambda - t) theta_1'(0) / (theta_1(lambda) theta_1(t)).
inline Complex sigma_lambda(const Complex& lambda, const Complex& t, const Complex& tau,
                            Real tol = kDefaultTol) {
  detail::check_tau(tau);
  if (detail::on_theta1_lattice(lambda, tau)) throw pole_error("sigma_lambda: lambda at a zero of theta_1");
  if (detail::on_theta1_lattice(t, tau)) throw pole_error("sigma_lambda: t at a zero of theta_1");
  const Complex num = theta1(lambda - t, tau, tol) * theta1_prime0(tau, tol);
  return detail::checked(num / (theta1(lambda, tau, tol) * theta1(t, tau, tol)), "sigma_lambda");
}

/// E(t) = theta_1(t) / theta_1'(0), normalised so that E(t) ~ t near 0.
inline Complex weier_E(const Complex& t, const Complex& tau, Real tol = kDefaultTol) {
  return detail::checked(theta1(t, tau, tol) / theta1_prime0(tau, tol), "weier_E");
}

/// Elliptic gamma function
///   Gamma(t; p, q) = prod_{j,k>=0} (1 - t^{-1} q^{j+1} p^{k+1}) / (1 - t q^j p^k),
/// truncated on the region |q|^j |p|^k (|t| + |pq/t|) >= tol (1-|p|)(1-|q|).
inline Complex ell_gamma(const Complex& t, const PQContext& ctx) {
  if (t == Real(0)) throw domain_error("ell_gamma: zero argument");
  constexpr int kMaxIndex = 1 << 16;
  const Real ap = std::abs(ctx.p);
  const Real aq = std::abs(ctx.q);
  const Complex pq_over_t = ctx.p * ctx.q / t;
  const Real size = std::abs(t) + std::abs(pq_over_t);
  const Real row_cut = ctx.tol * (1 - ap) * (1 - aq);
  Complex result = 1;
  Complex pk = 1;
  for (int k = 0; k < kMaxIndex; ++k) {
    if (k > 0 && std::abs(pk) * size <= row_cut) return detail::checked(result, "ell_gamma");
    Complex qj = 1;
    for (int j = 0; j < kMaxIndex; ++j) {
      if (j > 0 && std::abs(qj) * std::abs(pk) * size <= row_cut) break;
      const Complex den = Real(1) - t * qj * pk;
      if (std::abs(den) <= 64 * kEps) throw pole_error("ell_gamma: pole at t = q^-j p^-k");
      result *= (Real(1) - pq_over_t * qj * pk) / den;
      qj *= ctx.q;
    }
    pk *= ctx.p;
  }
  throw convergence_error("ell_gamma: product did not converge");
}

}  // namespace selberg

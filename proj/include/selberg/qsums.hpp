#pragma once

// The two q-Selberg Jackson sums and their product evaluations.
//
// A sum is organised in shells: shell s holds the index vectors r with
// max_a r_a = s. Summation stops after two consecutive shells whose absolute
// contribution is below tol times the running total.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "selberg/config.hpp"
#include "selberg/errors.hpp"
#include "selberg/specfun.hpp"
#include "selberg/summation.hpp"

namespace selberg {

struct JacksonTruncation {
  int rmax = 400;
  Real tol = kDefaultTol;
};

struct JacksonResult {
  Complex value{};
  Real tail_estimate = 0;  // size of the last shell
  int shells = 0;
  std::int64_t n_terms = 0;
  bool converged = false;
};

struct JacksonAParams {
  Complex alpha, beta, gamma, delta, u;
};

struct JacksonBParams {
  Complex alpha, v, u;
};

// Reading of the last argument of the delta block in the A-sum: as printed
// (gamma) or following the pattern of the rest of the block (delta).
enum class JacksonAVariant { printed, delta };

inline const char* to_string(JacksonAVariant v) { return v == JacksonAVariant::printed ? "printed" : "delta"; }

namespace detail {

inline Complex ipow(const Complex& z, long long e) {
  if (e < 0) return Real(1) / ipow(z, -e);
  Complex r = 1, b = z;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// (a)_inf / (b)_inf as one product of factor ratios. Numerator and
// denominator may each overflow when |a|, |b| are huge while the ratio stays
// moderate.
inline Complex qpoch_ratio(const Complex& a, const Complex& b, const QContext& ctx) {
  constexpr int kMaxFactors = 1 << 22;
  const Real aq = std::abs(ctx.q);
  const Real scale = std::max(std::abs(a), std::abs(b)) / (1 - aq);
  Complex r = 1, qn = 1;
  for (int n = 0;; ++n) {
    if (n > 0 && (aq == 0 || std::abs(qn) * scale <= ctx.tol)) break;
    if (n > kMaxFactors) throw convergence_error("qpoch_ratio: too many factors");
    const Complex den = Real(1) - qn * b;
    if (std::abs(den) <= 64 * kEps) throw pole_error("q-Pochhammer divisor vanishes");
    r *= (Real(1) - qn * a) / den;
    qn *= ctx.q;
  }
  return r;
}

// prod_{a<b} (1 - t_b/t_a) (q t_b/(u t_a))_inf / (u t_b/t_a)_inf
inline Complex jackson_pair_factor(std::span<const Complex> t, const Complex& u, const QContext& ctx) {
  Complex r = 1;
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      const Complex x = t[b] / t[a];
      r *= (Real(1) - x) * qpoch_ratio(ctx.q * x / u, u * x, ctx);
    }
  return r;
}

// Iterates shells of {0..rmax}^k, calling term(r) and summing.
template <class Term>
JacksonResult shell_sum(int k, const JacksonTruncation& tr, Term&& term) {
  if (tr.rmax < 0) throw domain_error("JacksonTruncation: rmax must be >= 0");
  if (!(tr.tol > 0)) throw domain_error("JacksonTruncation: tol must be positive");
  JacksonResult res;
  CompensatedSum<Complex> total;
  std::vector<int> r(k, 0);
  int quiet = 0;
  for (int s = 0; s <= tr.rmax; ++s) {
    CompensatedSum<Complex> shell;
    Real shell_abs = 0;
    std::fill(r.begin(), r.end(), 0);
    for (;;) {
      bool on_shell = (s == 0);
      for (int a = 0; a < k && !on_shell; ++a) on_shell = (r[a] == s);
      if (on_shell) {
        const Complex v = term(std::span<const int>(r));
        shell.add(v);
        shell_abs += std::abs(v);
        ++res.n_terms;
      }
      int d = k - 1;
      while (d >= 0 && ++r[d] > s) r[d--] = 0;
      if (d < 0) break;
    }
    total.add(shell.value());
    res.shells = s + 1;
    res.tail_estimate = shell_abs;
    if (!is_finite(total.value())) throw overflow_error("Jackson sum: partial sum is not finite");
    if (s > 0 && shell_abs <= tr.tol * std::abs(total.value())) {
      if (++quiet == 2) {
        res.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  res.value = total.value();
  return res;
}

}  // namespace detail

/// A(t_1..t_k; u) = prod_a t_a (q t_a/gamma)_inf (q t_a/delta)_inf / ((alpha t_a)_inf (beta t_a)_inf)
///                * prod_{a<b} (1 - t_b/t_a) (q u^{-1} t_b/t_a)_inf / (u t_b/t_a)_inf.
inline Complex summand_A(std::span<const Complex> t, const JacksonAParams& p, const QContext& ctx) {
  Complex r = 1;
  for (const Complex& x : t) {
    if (x == Real(0)) throw domain_error("summand_A: zero argument");
    r *= x * qpoch_inf(ctx.q * x / p.gamma, ctx) * qpoch_inf(ctx.q * x / p.delta, ctx) /
         (qpoch_inf_divisor(p.alpha * x, ctx) * qpoch_inf_divisor(p.beta * x, ctx));
  }
  return detail::checked(r * detail::jackson_pair_factor(t, p.u, ctx), "summand_A");
}

/// B(t_1..t_k) = prod_a (q t_a)_inf / (alpha t_a)_inf * (same pair factor as A).
inline Complex summand_B(std::span<const Complex> t, const JacksonBParams& p, const QContext& ctx) {
  Complex r = 1;
  for (const Complex& x : t) {
    if (x == Real(0)) throw domain_error("summand_B: zero argument");
    r *= qpoch_inf(ctx.q * x, ctx) / qpoch_inf_divisor(p.alpha * x, ctx);
  }
  return detail::checked(r * detail::jackson_pair_factor(t, p.u, ctx), "summand_B");
}

/// Requires |q u^{k-1}| < 1. gamma and delta are used as divisors and must be nonzero.
inline JacksonResult jackson_sum_A(int k, const JacksonAParams& p, const QContext& ctx,
                                   const JacksonTruncation& tr = {},
                                   JacksonAVariant variant = JacksonAVariant::delta) {
  if (k < 1) throw domain_error("jackson_sum_A: k must be >= 1");
  if (!(std::abs(ctx.q * detail::ipow(p.u, k - 1)) < 1)) throw domain_error("jackson_sum_A: need |q u^(k-1)| < 1");
  if (p.gamma == Real(0) || p.delta == Real(0) || p.u == Real(0))
    throw domain_error("jackson_sum_A: gamma, delta and u must be nonzero");
  const Complex ratio = p.gamma / p.delta;
  // theta coefficient for each a
  std::vector<Complex> coef(k + 1);
  for (int a = 0; a <= k; ++a) {
    Complex c = (a % 2) ? Real(-1) : Real(1);
    for (int cc = 0; cc <= k - a - 1; ++cc) {
      const Complex den = qtheta(detail::ipow(p.u, a - cc) * ratio, ctx);
      if (std::abs(den) == 0) throw pole_error("jackson_sum_A: theta coefficient divides by zero");
      c *= qtheta(detail::ipow(p.u, a + cc) * ratio, ctx) / den;
    }
    coef[a] = c;
  }
  std::vector<Complex> args(k);
  auto term = [&](std::span<const int> r) -> Complex {
    CompensatedSum<Complex> acc;
    for (int a = 0; a <= k; ++a) {
      long long e2 = 0;  // twice the exponent of u
      long long head = 0;
      for (int b = 1; b <= k; ++b) e2 += 2LL * (k - b) * (k - b + 1) * r[b - 1];
      for (int b = 1; b <= a; ++b) head += r[b - 1];
      e2 -= static_cast<long long>(k - a - 1) * (k - a) * (1 + 2 * head);
      long long run = 0;
      for (int i = 0; i < a; ++i) {
        run += r[i];
        args[i] = detail::ipow(ctx.q, run) * detail::ipow(p.u, i) * p.gamma;
      }
      run = 0;
      for (int i = 0; i < k - a; ++i) {
        run += r[a + i];
        const bool last = (i == k - a - 1);
        const Complex base = (last && variant == JacksonAVariant::printed) ? p.gamma : p.delta;
        args[a + i] = detail::ipow(ctx.q, run) * detail::ipow(p.u, i) * base;
      }
      acc.add(coef[a] * detail::ipow(p.u, e2 / 2) * summand_A(args, p, ctx));
    }
    return acc.value();
  };
  return detail::shell_sum(k, tr, term);
}

/// Requires |v| < min(1, |u^{k-1}|).
inline JacksonResult jackson_sum_B(int k, const JacksonBParams& p, const QContext& ctx,
                                   const JacksonTruncation& tr = {}) {
  if (k < 1) throw domain_error("jackson_sum_B: k must be >= 1");
  if (p.u == Real(0)) throw domain_error("jackson_sum_B: u must be nonzero");
  if (!(std::abs(p.v) < std::min(Real(1), std::abs(detail::ipow(p.u, k - 1)))))
    throw domain_error("jackson_sum_B: need |v| < min(1, |u^(k-1)|)");
  std::vector<Complex> args(k);
  auto term = [&](std::span<const int> r) -> Complex {
    long long ev = 0, eu = 0, run = 0;
    for (int a = 1; a <= k; ++a) {
      ev += static_cast<long long>(k - a + 1) * r[a - 1];
      eu -= static_cast<long long>(a - 1) * (k - a + 1) * r[a - 1];
      run += r[a - 1];
      args[a - 1] = detail::ipow(ctx.q, run) * detail::ipow(p.u, a - 1);
    }
    if (ev > 0 && p.v == Real(0)) return 0;
    return detail::ipow(p.v, ev) * detail::ipow(p.u, eu) * summand_B(args, p, ctx);
  };
  return detail::shell_sum(k, tr, term);
}

/// prod_j (u)(u^{k+j-1} alpha beta gamma delta) delta theta(u^j gamma/delta)
///        / ((u^{j+1})(u^j alpha gamma)(u^j beta gamma)(u^j alpha delta)(u^j beta delta)).
inline Complex rhs_jackson_A(int k, const JacksonAParams& p, const QContext& ctx) {
  if (k < 1) throw domain_error("rhs_jackson_A: k must be >= 1");
  const Complex abgd = p.alpha * p.beta * p.gamma * p.delta;
  Complex r = 1;
  for (int j = 0; j < k; ++j) {
    const Complex uj = detail::ipow(p.u, j);
    r *= qpoch_inf(p.u, ctx) * qpoch_inf(detail::ipow(p.u, k + j - 1) * abgd, ctx) * p.delta *
         qtheta(uj * p.gamma / p.delta, ctx) /
         (qpoch_inf_divisor(uj * p.u, ctx) * qpoch_inf_divisor(uj * p.alpha * p.gamma, ctx) *
          qpoch_inf_divisor(uj * p.beta * p.gamma, ctx) * qpoch_inf_divisor(uj * p.alpha * p.delta, ctx) *
          qpoch_inf_divisor(uj * p.beta * p.delta, ctx));
  }
  return detail::checked(r, "rhs_jackson_A");
}

/// prod_j (u)(u^j alpha v)(q) / ((u^{j+1})(u^j alpha)(u^{-j} v)).
inline Complex rhs_jackson_B(int k, const JacksonBParams& p, const QContext& ctx) {
  if (k < 1) throw domain_error("rhs_jackson_B: k must be >= 1");
  Complex r = 1;
  for (int j = 0; j < k; ++j) {
    const Complex uj = detail::ipow(p.u, j);
    r *= qpoch_inf(p.u, ctx) * qpoch_inf(uj * p.alpha * p.v, ctx) * qpoch_q(ctx) /
         (qpoch_inf_divisor(uj * p.u, ctx) * qpoch_inf_divisor(uj * p.alpha, ctx) *
          qpoch_inf_divisor(p.v / uj, ctx));
  }
  return detail::checked(r, "rhs_jackson_B");
}

}  // namespace selberg

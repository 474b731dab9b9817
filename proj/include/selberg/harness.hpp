#pragma once

// Verification front-end: parameter validation, LHS-vs-RHS runs, parameter
// sweeps and JSON Lines reporting.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "selberg/identities.hpp"

namespace selberg {

using json = nlohmann::json;

/// Raised by verify() when the parameters violate the identity's constraints.
class validation_error : public std::invalid_argument {
 public:
  validation_error(const std::string& id, std::vector<std::string> v)
      : std::invalid_argument(join(id, v)), violations(std::move(v)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::string& id, const std::vector<std::string>& v) {
    std::string s = "invalid parameters for '" + id + "':";
    for (const auto& x : v) s += "\n  " + x;
    return s;
  }
};

struct EvalOptions {
  std::string engine;   // empty: the identity's default
  std::string variant;  // empty: the identity's default
  Real tol = 1e-8;
  std::uint64_t seed = 42;
  std::int64_t mc_samples = 1'000'000;
  unsigned threads = 0;  // Monte Carlo worker threads, 0 = all cores
  std::int64_t max_evals = kMaxEvals;
  bool timing = true;  // false: wall_time is reported as 0
};

struct VerificationReport {
  std::string id;
  Params params;
  Complex lhs{};
  Real lhs_error = 0;
  Complex rhs{};
  Real rel_err = 0;
  std::string method;
  std::int64_t n_evals = 0;
  double wall_time = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::string variant;
  bool stochastic = false;
  Real tolerance = 0;
  bool passed = false;
};

inline constexpr Real kRelErrFloor = 1e-300;

/// Monte Carlo agreement: |lhs - rhs| <= 4 stderr. The 1e-12 relative term
/// only matters for zero-variance estimators, whose estimate is exact up to
/// summation rounding.
inline bool stochastic_agrees(const Complex& lhs, const Complex& rhs, Real stderr_) {
  return std::abs(lhs - rhs) <= 4 * stderr_ + 1e-12 * std::abs(rhs);
}

/// Deterministic runs pass when rel_err < tol, Monte Carlo runs when
/// stochastic_agrees holds.
inline bool report_passes(const VerificationReport& r) {
  if (!r.converged) return false;
  if (r.stochastic) return stochastic_agrees(r.lhs, r.rhs, r.lhs_error);
  return r.rel_err < r.tolerance;
}

// --------------------------------------------------------------------------
// Parameters

/// Violated constraints of `params` for identity `id`; empty when valid.
/// Throws domain_error for an unknown id.
inline std::vector<std::string> validate_params(const std::string& id, const Params& params) {
  const IdentityDescriptor& d = find_identity(id);
  std::vector<std::string> out;
  for (const auto& ps : d.schema) {
    if (!params.has(ps.name)) {
      out.push_back("missing parameter '" + ps.name + "'");
      continue;
    }
    if (ps.kind == ParamKind::label) {
      if (!params.text.count(ps.name)) out.push_back("parameter '" + ps.name + "' must be a label");
      continue;
    }
    if (!params.num.count(ps.name)) {
      out.push_back("parameter '" + ps.name + "' must be numeric");
      continue;
    }
    const Complex v = params.num.at(ps.name);
    if (!is_finite(v)) out.push_back("parameter '" + ps.name + "' is not finite");
    if ((ps.kind == ParamKind::integer || ps.kind == ParamKind::real) && v.imag() != 0)
      out.push_back("parameter '" + ps.name + "' must be real (" + ps.name + " = " + detail::fmt(v) + ")");
    if (ps.kind == ParamKind::integer && v.real() != std::round(v.real()))
      out.push_back("parameter '" + ps.name + "' must be an integer (" + ps.name + " = " + detail::fmt(v) + ")");
  }
  for (const auto& [n, v] : params.num)
    if (std::none_of(d.schema.begin(), d.schema.end(), [&](const ParamSpec& s) { return s.name == n; }))
      out.push_back("unknown parameter '" + n + "'");
  for (const auto& [n, v] : params.text)
    if (std::none_of(d.schema.begin(), d.schema.end(), [&](const ParamSpec& s) { return s.name == n; }))
      out.push_back("unknown parameter '" + n + "'");
  if (!out.empty()) return out;
  return d.validate(params);
}

/// Parses "name=value" against the identity's schema.
inline void parse_param_into(const IdentityDescriptor& d, const std::string& kv, Params& p) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected name=value, got '" + kv + "'");
  const std::string name = kv.substr(0, eq), value = kv.substr(eq + 1);
  auto it = std::find_if(d.schema.begin(), d.schema.end(), [&](const ParamSpec& s) { return s.name == name; });
  if (it == d.schema.end()) throw std::invalid_argument("identity '" + d.id + "' has no parameter '" + name + "'");
  if (it->kind == ParamKind::label) {
    p.set(name, value);
    return;
  }
  const auto z = parse_complex(value);
  if (!z) throw std::invalid_argument("cannot parse '" + value + "' as a number for parameter '" + name + "'");
  p.set(name, *z);
}

inline json complex_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json params_json(const IdentityDescriptor& d, const Params& p) {
  json j = json::object();
  for (const auto& ps : d.schema) {
    if (ps.kind == ParamKind::label) {
      if (p.text.count(ps.name)) j[ps.name] = p.text.at(ps.name);
      continue;
    }
    if (!p.num.count(ps.name)) continue;
    const Complex v = p.num.at(ps.name);
    if (ps.kind == ParamKind::integer && v.imag() == 0 && v.real() == std::round(v.real()))
      j[ps.name] = static_cast<std::int64_t>(v.real());
    else if (ps.kind == ParamKind::complex && v.imag() != 0)
      j[ps.name] = complex_json(v);
    else if (v.imag() == 0)
      j[ps.name] = v.real();
    else
      j[ps.name] = complex_json(v);
  }
  return j;
}

/// Reads a parameter value from JSON: a number, {"re", "im"}, or a string
/// (label, or a complex literal such as "0.5+0.1i").
inline void set_param_from_json(const IdentityDescriptor& d, const std::string& name, const json& v, Params& p) {
  auto it = std::find_if(d.schema.begin(), d.schema.end(), [&](const ParamSpec& s) { return s.name == name; });
  if (it == d.schema.end()) throw std::invalid_argument("identity '" + d.id + "' has no parameter '" + name + "'");
  if (it->kind == ParamKind::label) {
    if (!v.is_string()) throw std::invalid_argument("parameter '" + name + "' must be a string");
    p.set(name, v.get<std::string>());
  } else if (v.is_number()) {
    p.set(name, Complex(v.get<Real>(), 0));
  } else if (v.is_object() && v.contains("re")) {
    p.set(name, Complex(v.at("re").get<Real>(), v.value("im", Real(0))));
  } else if (v.is_string()) {
    const auto z = parse_complex(v.get<std::string>());
    if (!z) throw std::invalid_argument("cannot parse parameter '" + name + "'");
    p.set(name, *z);
  } else {
    throw std::invalid_argument("unsupported value for parameter '" + name + "'");
  }
}

// --------------------------------------------------------------------------
// Registry listing

inline const char* to_string(ParamKind k) {
  switch (k) {
    case ParamKind::integer: return "integer";
    case ParamKind::real: return "real";
    case ParamKind::complex: return "complex";
    case ParamKind::label: return "label";
  }
  return "?";
}

inline json describe_identity(const IdentityDescriptor& d) {
  json schema = json::array();
  for (const auto& ps : d.schema) schema.push_back({{"name", ps.name}, {"kind", to_string(ps.kind)}, {"doc", ps.doc}});
  json j{{"id", d.id},         {"summary", d.summary},       {"params", schema},
         {"sample", params_json(d, d.sample)}, {"default_engine", d.default_engine}, {"engines", d.engines}};
  if (!d.variants.empty()) j["variants"] = d.variants;
  return j;
}

inline std::vector<std::string> list_identities() {
  std::vector<std::string> ids;
  for (const auto& d : registry()) ids.push_back(d.id);
  return ids;
}

// --------------------------------------------------------------------------
// LHS evaluation

struct LhsOutcome {
  QuadResult q;
  std::string method;
  bool stochastic = false;
};

namespace detail {

inline bool is_integer_gamma(Real g) { return g >= 0 && g == std::round(g) && g <= 16; }

inline std::string resolve_engine(const IdentityDescriptor& d, const Params& p, const std::string& requested) {
  if (!requested.empty() && requested != "auto") {
    if (std::find(d.engines.begin(), d.engines.end(), requested) == d.engines.end()) {
      std::string known;
      for (const auto& e : d.engines) known += (known.empty() ? "" : ", ") + e;
      throw std::invalid_argument("identity '" + d.id + "' has no engine '" + requested + "' (available: " + known +
                                  ")");
    }
    return requested;
  }
  if (d.id == "macdonald_mehta") return is_integer_gamma(p.r("gamma")) ? "gauss_hermite" : "mc";
  return d.default_engine;
}

inline std::string resolve_variant(const IdentityDescriptor& d, const std::string& requested) {
  if (d.variants.empty()) {
    if (!requested.empty())
      throw std::invalid_argument("identity '" + d.id + "' has no variants (got '" + requested + "')");
    return "";
  }
  if (requested.empty()) return d.variants.front();
  if (std::find(d.variants.begin(), d.variants.end(), requested) == d.variants.end())
    throw std::invalid_argument("identity '" + d.id + "' has no variant '" + requested + "'");
  return requested;
}

inline QuadResult from_jackson(const JacksonResult& j) {
  QuadResult q;
  q.value = j.value;
  q.error_estimate = j.tail_estimate;
  q.n_evals = j.n_terms;
  q.converged = j.converged;
  return q;
}

inline MCOptions mc_options(const EvalOptions& o) {
  MCOptions m;
  m.threads = o.threads;
  return m;
}

// Monte Carlo over the ordered simplex with Dirichlet gaps matched to the
// endpoint and leading pair singularities.
inline LhsOutcome simplex_mc(const LhsPlan& plan, const EvalOptions& o) {
  const int k = plan.domain.k;
  auto clamp = [](Real e) { return std::max(e, Real(-0.99)); };
  std::vector<Real> gaps(k + 1, clamp(plan.weights.pair));
  gaps.front() = clamp(plan.weights.up(0));
  gaps.back() = clamp(plan.weights.lo(k - 1));
  if (plan.domain.y - plan.domain.x > 2) {
    // unbounded-weight domains are sampled uniformly
    LhsOutcome out{mc_integrate(plan.integrand, plan.domain, Sampler::uniform_simplex(), o.mc_samples, o.seed,
                                mc_options(o)),
                   "simplex_mc_uniform", true};
    return out;
  }
  return {mc_integrate(plan.integrand, plan.domain, Sampler::dirichlet_gaps(gaps), o.mc_samples, o.seed,
                       mc_options(o)),
          "simplex_mc_dirichlet", true};
}

inline LhsOutcome chain_mc(const LhsPlan& plan, const EvalOptions& o) {
  const auto& terms = plan.domain.chain;
  const int K = plan.domain.k;
  const std::int64_t per_term = std::max<std::int64_t>(2, o.mc_samples / static_cast<std::int64_t>(terms.size()));
  LhsOutcome out;
  out.method = plan.sine_normalized ? "chain_mc_sine_normalized" : "chain_mc";
  out.stochastic = true;
  out.q.converged = true;
  Real var = 0;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    const std::vector<int> order = terms[m].order;
    auto f = [&plan, order, K](std::span<const Real> pos) -> Complex {
      Real v[16];
      for (int i = 0; i < K; ++i) v[order[i]] = pos[i];
      return plan.integrand(std::span<const Real>(v, K));
    };
    const DomainSpec dom = DomainSpec::ordered_simplex(K, plan.domain.x, plan.domain.y);
    const QuadResult r = mc_integrate(f, dom, Sampler::dirichlet_gaps(plan.chain_gaps[m]), per_term,
                                      o.seed + 0x9e3779b97f4a7c15ULL * (m + 1), mc_options(o));
    out.q.value += terms[m].coefficient * r.value;
    var += std::norm(terms[m].coefficient) * r.error_estimate * r.error_estimate;
    out.q.n_evals += r.n_evals;
    out.q.converged = out.q.converged && r.converged;
  }
  out.q.error_estimate = std::sqrt(var);
  return out;
}

}  // namespace detail

/// Evaluates the LHS of `id` with the requested engine. Engine tolerance is a
/// tenth of opts.tol.
inline LhsOutcome evaluate_lhs(const std::string& id, const Params& p, const EvalOptions& o) {
  const IdentityDescriptor& d = find_identity(id);
  const std::string engine = detail::resolve_engine(d, p, o.engine);
  const std::string variant = detail::resolve_variant(d, o.variant);
  const Real etol = o.tol / 10;
  const LhsPlan plan = build_lhs(id, p, variant);
  LhsOutcome out;

  if (engine == "gauss_jacobi" || engine == "cube") {
    const bool cube = engine == "cube";
    out.q = quad_ordered_simplex(plan.smooth, plan.domain.k, plan.domain.x, plan.domain.y, plan.weights, etol,
                                 cube ? Symmetry::symmetric : Symmetry::none, o.max_evals);
    out.method = cube ? "cube_gauss_jacobi_over_kfact" : "ordered_simplex_gauss_jacobi";
  } else if (engine == "mc" && plan.domain.kind == DomainKind::OrderedSimplex) {
    out = detail::simplex_mc(plan, o);
  } else if (engine == "mc" && plan.domain.kind == DomainKind::ConstrainedBoxChain) {
    out = detail::chain_mc(plan, o);
  } else if (engine == "mc" && plan.domain.kind == DomainKind::FullSpaceGaussian) {
    out.q = mc_integrate(plan.integrand, plan.domain, Sampler::gaussian_iso(), o.mc_samples, o.seed,
                         detail::mc_options(o));
    out.method = "gaussian_mc";
    out.stochastic = true;
  } else if (engine == "vertical") {
    try {
      out.q = quad_vertical(plan.contour, plan.domain.k, plan.T0, etol, o.max_evals);
    } catch (const convergence_error&) {
      out.q.converged = false;
      out.q.error_estimate = std::numeric_limits<Real>::max();
    }
    out.method = "vertical_gauss_legendre";
  } else if (engine == "torus") {
    out.q = quad_torus(plan.contour, plan.domain.k, etol, o.max_evals);
    out.q.value *= plan.prefactor;
    out.q.error_estimate *= std::abs(plan.prefactor);
    out.method = "torus_trapezoid";
  } else if (engine == "series") {
    const QContext ctx(p.c("q"));
    const JacksonTruncation tr{400, etol};
    if (id == "jackson_a") {
      const JacksonAParams jp{p.c("alpha"), p.c("beta"), p.c("gamma"), p.c("delta"), p.c("u")};
      out.q = detail::from_jackson(jackson_sum_A(p.i("k"), jp, ctx, tr,
                                                 variant == "printed" ? JacksonAVariant::printed
                                                                      : JacksonAVariant::delta));
    } else {
      const JacksonBParams jp{p.c("alpha"), p.c("v"), p.c("u")};
      out.q = detail::from_jackson(jackson_sum_B(p.i("k"), jp, ctx, tr));
    }
    out.method = "jackson_shell_sum";
  } else if (engine == "gauss_hermite") {
    const Real g = p.r("gamma");
    const int order = static_cast<int>(std::ceil(g * plan.group.hyperplanes())) + 2;
    out.q = quad_gaussian_rk(plan.integrand, plan.domain.k, order);
    if (!detail::is_integer_gamma(g)) out.q.converged = false;  // not a polynomial: no exactness
    out.method = "gauss_hermite";
  } else if (engine == "finite_part") {
    out.q = elliptic_selberg_lhs_k1(p.c("lambda"), p.c("tau"), etol);
    out.method = "finite_part_gauss_chebyshev";
  } else {
    throw std::invalid_argument("engine '" + engine + "' does not apply to identity '" + id + "'");
  }
  return out;
}

/// Runs one verification. Throws validation_error when the parameters are
/// invalid and std::invalid_argument for an unknown engine or variant.
inline VerificationReport verify(const std::string& id, const Params& p, const EvalOptions& o = {}) {
  const IdentityDescriptor& d = find_identity(id);
  const auto violations = validate_params(id, p);
  if (!violations.empty()) throw validation_error(id, violations);
  const std::string variant = detail::resolve_variant(d, o.variant);
  detail::resolve_engine(d, p, o.engine);

  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport r;
  r.id = id;
  r.params = p;
  r.seed = o.seed;
  r.variant = variant;
  r.tolerance = o.tol;
  r.rhs = d.rhs(p, variant);
  try {
    const LhsOutcome lhs = evaluate_lhs(id, p, o);
    r.lhs = lhs.q.value;
    r.lhs_error = lhs.q.error_estimate;
    r.n_evals = lhs.q.n_evals;
    r.converged = lhs.q.converged && is_finite(lhs.q.value);
    r.method = lhs.method;
    r.stochastic = lhs.stochastic;
  } catch (const convergence_error& e) {
    r.converged = false;
    r.method = std::string("failed: ") + e.what();
    r.lhs_error = std::numeric_limits<Real>::max();
  }
  r.rel_err = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.rhs), kRelErrFloor);
  r.passed = report_passes(r);
  if (o.timing) r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline json report_json(const VerificationReport& r) {
  const IdentityDescriptor& d = find_identity(r.id);
  json j{{"id", r.id},
         {"params", params_json(d, r.params)},
         {"lhs", complex_json(r.lhs)},
         {"lhs_error", r.lhs_error},
         {"rhs", complex_json(r.rhs)},
         {"rel_err", r.rel_err},
         {"method", r.method},
         {"n_evals", r.n_evals},
         {"wall_time", r.wall_time},
         {"seed", r.seed},
         {"converged", r.converged}};
  if (!r.variant.empty()) j["variant"] = r.variant;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  return j;
}

inline json skip_json(const IdentityDescriptor& d, const Params& p, const std::vector<std::string>& violations) {
  return json{{"id", d.id}, {"params", params_json(d, p)}, {"skipped", true}, {"violations", violations}};
}

// --------------------------------------------------------------------------
// Sweeps

struct SweepConfig {
  std::string id;
  // Parameter names in grid order; the last name varies fastest.
  std::vector<std::string> names;
  std::vector<std::vector<json>> grids;
  Params fixed;
  EvalOptions options;
  std::string out_path;
  std::string csv_path;
  unsigned workers = 0;  // grid points evaluated concurrently, 0 = all cores

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& g : grids) n *= g.size();
    return n;
  }
};

/// Builds a SweepConfig from JSON:
///   {"id": "euler_beta", "grid": {"alpha": [1, 2], "beta": {"range": [0.5, 2, 4]}},
///    "fixed": {...}, "engine": "...", "variant": "...", "tol": 1e-8, "seed": 42,
///    "mc_samples": 1000000, "workers": 0, "timing": false, "out": "...", "csv": "..."}
/// A range [lo, hi, n] expands to n equally spaced points including both ends.
inline SweepConfig parse_sweep_config(const json& j) {
  SweepConfig c;
  if (!j.is_object() || !j.contains("id")) throw std::invalid_argument("sweep config: missing \"id\"");
  c.id = j.at("id").get<std::string>();
  const IdentityDescriptor& d = find_identity(c.id);
  if (!j.contains("grid") || !j.at("grid").is_object() || j.at("grid").empty())
    throw std::invalid_argument("sweep config: \"grid\" must be a non-empty object");
  for (const auto& [name, axis] : j.at("grid").items()) {
    std::vector<json> values;
    if (axis.is_array()) {
      values.assign(axis.begin(), axis.end());
    } else if (axis.is_object() && axis.contains("range")) {
      const auto& rg = axis.at("range");
      if (!rg.is_array() || rg.size() != 3) throw std::invalid_argument("sweep config: range must be [lo, hi, n]");
      const Real lo = rg[0].get<Real>(), hi = rg[1].get<Real>();
      const int n = rg[2].get<int>();
      if (n < 1) throw std::invalid_argument("sweep config: range needs n >= 1");
      for (int i = 0; i < n; ++i) values.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    } else {
      values.push_back(axis);
    }
    if (values.empty()) throw std::invalid_argument("sweep config: grid for '" + name + "' is empty");
    Params probe;
    for (const auto& v : values) set_param_from_json(d, name, v, probe);
    c.names.push_back(name);
    c.grids.push_back(std::move(values));
  }
  if (j.contains("fixed"))
    for (const auto& [name, v] : j.at("fixed").items()) set_param_from_json(d, name, v, c.fixed);
  c.options.timing = false;
  c.options.engine = j.value("engine", std::string());
  c.options.variant = j.value("variant", std::string());
  c.options.tol = j.value("tol", Real(1e-8));
  c.options.seed = j.value("seed", std::uint64_t{42});
  c.options.mc_samples = j.value("mc_samples", std::int64_t{1'000'000});
  c.options.timing = j.value("timing", false);
  c.workers = j.value("workers", 0u);
  c.out_path = j.value("out", std::string());
  c.csv_path = j.value("csv", std::string());
  if (!(c.options.tol > 0)) throw std::invalid_argument("sweep config: tol must be positive");
  detail::resolve_variant(d, c.options.variant);
  return c;
}

inline Params sweep_point(const SweepConfig& c, std::size_t index) {
  const IdentityDescriptor& d = find_identity(c.id);
  Params p = c.fixed;
  for (std::size_t a = c.grids.size(); a-- > 0;) {
    const std::size_t n = c.grids[a].size();
    set_param_from_json(d, c.names[a], c.grids[a][index % n], p);
    index /= n;
  }
  return p;
}

struct SweepRecord {
  std::size_t index = 0;
  Params params;
  std::optional<VerificationReport> report;  // empty for skipped points
  std::vector<std::string> violations;
  std::string error;  // engine or evaluation error for this point
};

struct SweepSummary {
  std::size_t total = 0;
  std::size_t run = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;  // ran but did not pass, or errored
};

inline json sweep_record_json(const SweepConfig& c, const SweepRecord& rec) {
  const IdentityDescriptor& d = find_identity(c.id);
  if (rec.report) return report_json(*rec.report);
  if (!rec.error.empty())
    return json{{"id", c.id}, {"params", params_json(d, rec.params)}, {"error", rec.error}, {"passed", false}};
  return skip_json(d, rec.params, rec.violations);
}

/// Evaluates every grid point, in parallel, and hands records to `sink` in
/// grid order as soon as each prefix is complete. Point i uses seed
/// options.seed + i.
template <class Sink>
SweepSummary sweep(const SweepConfig& c, Sink&& sink) {
  const std::size_t n = c.size();
  unsigned workers = c.workers ? c.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::vector<std::optional<SweepRecord>> done(n);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      SweepRecord rec;
      rec.index = i;
      try {
        rec.params = sweep_point(c, i);
        rec.violations = validate_params(c.id, rec.params);
        if (rec.violations.empty()) {
          EvalOptions o = c.options;
          o.seed = c.options.seed + i;
          if (workers > 1) o.threads = 1;
          rec.report = verify(c.id, rec.params, o);
        }
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        done[i] = std::move(rec);
      }
      cv.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);

  SweepSummary s;
  s.total = n;
  for (std::size_t i = 0; i < n; ++i) {
    SweepRecord rec;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return done[i].has_value(); });
      rec = std::move(*done[i]);
      done[i].reset();
    }
    if (rec.report) {
      ++s.run;
      if (!rec.report->passed) ++s.failed;
    } else if (!rec.error.empty()) {
      ++s.failed;
    } else {
      ++s.skipped;
    }
    sink(rec);
  }
  for (auto& t : pool) t.join();
  return s;
}

/// Sweep writing JSON Lines to `jsonl` and, if given, CSV rows to `csv`.
inline SweepSummary sweep_to_streams(const SweepConfig& c, std::ostream& jsonl, std::ostream* csv = nullptr) {
  if (csv) *csv << "index,status,abs_lhs,abs_rhs,rel_err\n";
  return sweep(c, [&](const SweepRecord& rec) {
    jsonl << sweep_record_json(c, rec).dump() << '\n';
    jsonl.flush();
    if (csv) {
      *csv << rec.index << ',';
      if (rec.report) {
        std::ostringstream row;
        row.precision(17);
        row << (rec.report->passed ? "passed" : "failed") << ',' << std::abs(rec.report->lhs) << ','
            << std::abs(rec.report->rhs) << ',' << rec.report->rel_err;
        *csv << row.str() << '\n';
      } else {
        *csv << (rec.error.empty() ? "skipped" : "error") << ",,,\n";
      }
    }
  });
}

}  // namespace selberg

// Command-line front-end: list, verify, sweep, selftest.
//
// Exit codes: 0 everything converged within tolerance, 1 a tolerance was
// exceeded or an engine did not converge, 2 usage or validation error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "selberg/harness.hpp"
#include "selberg/selftest.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kToleranceExceeded = 1;
constexpr int kUsage = 2;

int cmd_list(bool as_json) {
  for (const auto& d : selberg::registry()) {
    if (as_json) {
      std::cout << selberg::describe_identity(d).dump() << '\n';
      continue;
    }
    std::cout << d.id << "  (" << d.summary << ")\n    params:";
    for (const auto& p : d.schema) std::cout << ' ' << p.name << ':' << selberg::to_string(p.kind);
    std::cout << "\n    engines:";
    for (const auto& e : d.engines) std::cout << ' ' << e << (e == d.default_engine ? "*" : "");
    if (!d.variants.empty()) {
      std::cout << "\n    variants:";
      for (const auto& v : d.variants) std::cout << ' ' << v;
    }
    std::cout << "\n    sample: " << selberg::params_json(d, d.sample).dump() << '\n';
  }
  return kOk;
}

struct VerifyArgs {
  std::string id;
  std::vector<std::string> params;
  std::string engine;
  std::string variant;
  std::string out;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  std::int64_t samples = 1'000'000;
  unsigned threads = 0;
  bool sample = false;
  bool no_timing = false;
};

int cmd_verify(const VerifyArgs& a) {
  const selberg::IdentityDescriptor* d = nullptr;
  try {
    d = &selberg::find_identity(a.id);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  selberg::Params p = a.sample ? d->sample : selberg::Params{};
  try {
    for (const auto& kv : a.params) selberg::parse_param_into(*d, kv, p);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  selberg::EvalOptions o;
  o.engine = a.engine;
  o.variant = a.variant;
  o.tol = a.tol;
  o.seed = a.seed;
  o.mc_samples = a.samples;
  o.threads = a.threads;
  o.timing = !a.no_timing;
  selberg::VerificationReport r;
  try {
    r = selberg::verify(a.id, p, o);
  } catch (const selberg::validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: evaluation failed: " << e.what() << '\n';
    return kToleranceExceeded;
  }
  const std::string line = selberg::report_json(r).dump();
  if (a.out.empty()) {
    std::cout << line << '\n';
  } else {
    std::ofstream f(a.out, std::ios::app);
    if (!f) {
      std::cerr << "error: cannot open " << a.out << '\n';
      return kUsage;
    }
    f << line << '\n';
  }
  return r.passed ? kOk : kToleranceExceeded;
}

int cmd_sweep(const std::string& config, const std::string& out_flag, const std::string& csv_flag) {
  selberg::SweepConfig c;
  try {
    std::ifstream f(config);
    if (!f) throw std::invalid_argument("cannot open config " + config);
    c = selberg::parse_sweep_config(selberg::json::parse(f));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!out_flag.empty()) c.out_path = out_flag;
  if (!csv_flag.empty()) c.csv_path = csv_flag;
  std::ofstream out, csv;
  if (!c.out_path.empty()) {
    out.open(c.out_path, std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot open " << c.out_path << '\n';
      return kUsage;
    }
  }
  if (!c.csv_path.empty()) {
    csv.open(c.csv_path, std::ios::trunc);
    if (!csv) {
      std::cerr << "error: cannot open " << c.csv_path << '\n';
      return kUsage;
    }
  }
  std::ostream& jsonl = c.out_path.empty() ? std::cout : out;
  const auto s = selberg::sweep_to_streams(c, jsonl, c.csv_path.empty() ? nullptr : &csv);
  std::cerr << s.total << " points: " << s.run << " run, " << s.skipped << " skipped, " << s.failed << " failed\n";
  return s.failed ? kToleranceExceeded : kOk;
}

int cmd_selftest(unsigned threads, std::int64_t samples) {
  selberg::SelftestOptions o;
  o.threads = threads;
  o.mc_samples = samples;
  o.on_result = [](const selberg::CriterionResult& c) { std::cout << selberg::format_criterion(c) << std::endl; };
  const auto results = selberg::run_acceptance(o);
  return selberg::acceptance_ok(results) ? kOk : kToleranceExceeded;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Selberg-type integral identities"};
  app.require_subcommand(1);

  bool list_json = false;
  auto* list = app.add_subcommand("list", "print the identity registry");
  list->add_flag("--json", list_json, "one JSON object per identity");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "compare LHS and RHS at one parameter point");
  verify->add_option("--id", va.id, "identity id")->required();
  verify->add_option("--param,-p", va.params, "name=value, repeatable; complex values as 0.5+0.1i");
  verify->add_flag("--sample", va.sample, "start from the identity's documented sample point");
  verify->add_option("--engine", va.engine, "LHS engine tag");
  verify->add_option("--variant", va.variant, "formula variant");
  verify->add_option("--tol", va.tol, "relative tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed, "Monte Carlo seed");
  verify->add_option("--samples", va.samples, "Monte Carlo sample count")->check(CLI::Range(2LL, 1LL << 40));
  verify->add_option("--threads", va.threads, "Monte Carlo threads, 0 = all cores");
  verify->add_flag("--no-timing", va.no_timing, "report wall_time as 0");
  verify->add_option("--out", va.out, "append the report to this JSONL file");

  std::string config, sweep_out, sweep_csv;
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid from a JSON config");
  sweep->add_option("--config", config, "sweep config (JSON)")->required();
  sweep->add_option("--out", sweep_out, "JSONL output path (overrides the config)");
  sweep->add_option("--csv", sweep_csv, "CSV output path (overrides the config)");

  unsigned st_threads = 0;
  std::int64_t st_samples = 10'000'000;
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--threads", st_threads, "Monte Carlo threads, 0 = all cores");
  selftest->add_option("--samples", st_samples, "Monte Carlo samples per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (*list) return cmd_list(list_json);
  if (*verify) return cmd_verify(va);
  if (*sweep) return cmd_sweep(config, sweep_out, sweep_csv);
  if (*selftest) return cmd_selftest(st_threads, st_samples);
  return kUsage;
}

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "selberg/harness.hpp"

using namespace selberg;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

Params make(std::initializer_list<std::pair<const char*, Real>> kv) {
  Params p;
  for (const auto& [k, v] : kv) p.set(k, v);
  return p;
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

int run_cli(const std::string& args, std::string* out = nullptr) {
  const std::string file = temp_path("cli_stdout.txt");
  const std::string cmd = std::string(SELBERG_CLI_PATH) + " " + args + " > " + file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream f(file);
    std::stringstream ss;
    ss << f.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(status);
}

}  // namespace

TEST(ListIdentities, ContainsEveryId) {
  const auto ids = list_identities();
  EXPECT_EQ(ids.size(), 17u);
  EXPECT_NE(std::find(ids.begin(), ids.end(), "selberg"), ids.end());
  for (const auto& id : ids) EXPECT_TRUE(validate_params(id, find_identity(id).sample).empty()) << id;
}

TEST(ValidateParams, NamesViolationsWithValues) {
  const auto v = validate_params("selberg", make({{"k", 2}, {"alpha", -1}, {"beta", 1}, {"gamma", 1}}));
  EXPECT_TRUE(mentions(v, "Re alpha > 0"));
  EXPECT_TRUE(mentions(v, "-1"));

  Params eb = find_identity("elliptic_beta").sample;
  eb.set("p", 0.9).set("q", 0.9);
  EXPECT_TRUE(mentions(validate_params("elliptic_beta", eb), "|pq| < |A|"));

  const auto jb = validate_params("jackson_b", make({{"k", 3}, {"alpha", 0.3}, {"v", 0.5}, {"u", 0.6}, {"q", 0.1}}));
  EXPECT_TRUE(mentions(jb, "|v| < min(1, |u^(k-1)|)"));

  EXPECT_TRUE(mentions(validate_params("euler_beta", make({{"alpha", 1}})), "missing parameter 'beta'"));
  EXPECT_TRUE(mentions(validate_params("euler_beta", make({{"alpha", 1}, {"beta", 1}, {"zeta", 1}})), "unknown"));
  EXPECT_THROW(validate_params("no_such_identity", {}), domain_error);
}

TEST(ValidateParams, RejectsRhsZeros) {
  Params p = find_identity("q_selberg_abgd").sample;
  p.set("eps", 0.4);  // gamma eps = q
  EXPECT_TRUE(mentions(validate_params("q_selberg_abgd", p), "RHS vanishes"));
}

TEST(Verify, DocumentedExamples) {
  EvalOptions o;
  o.tol = 1e-12;
  const auto eb = verify("euler_beta", make({{"alpha", 2}, {"beta", 3}}), o);
  EXPECT_TRUE(eb.passed);
  EXPECT_LT(eb.rel_err, 1e-12);

  o.tol = 1e-10;
  const auto s = verify("selberg", find_identity("selberg").sample, o);
  EXPECT_LT(s.rel_err, 1e-10);
  EXPECT_NEAR(s.lhs.real(), 1.0 / 12, 1e-12);

  Params mm;
  mm.set("group", std::string("A2")).set("gamma", 1);
  o.tol = 1e-12;
  const auto m = verify("macdonald_mehta", mm, o);
  EXPECT_EQ(m.method, "gauss_hermite");
  EXPECT_LT(m.rel_err, 1e-12);
}

TEST(Verify, InvalidInputs) {
  EXPECT_THROW(verify("selberg", make({{"k", 2}, {"alpha", -1}, {"beta", 1}, {"gamma", 1}})), validation_error);
  EvalOptions o;
  o.engine = "torus";
  EXPECT_THROW(verify("selberg", find_identity("selberg").sample, o), std::invalid_argument);
  o.engine.clear();
  o.variant = "bogus";
  EXPECT_THROW(verify("q_selberg_gd", find_identity("q_selberg_gd").sample, o), std::invalid_argument);
}

TEST(Verify, RelErrUsesFloor) {
  VerificationReport r;
  r.rhs = 0;
  r.lhs = 1e-310;
  EXPECT_GE(std::abs(r.lhs - r.rhs) / std::max(std::abs(r.rhs), kRelErrFloor), 0);
}

TEST(Verify, MonteCarloIsDeterministic) {
  EvalOptions o;
  o.engine = "mc";
  o.mc_samples = 100000;
  o.timing = false;
  o.threads = 1;
  // alpha = beta = gamma = 1 would make the Dirichlet sampler exact
  const Params p = make({{"k", 2}, {"alpha", 1.5}, {"beta", 1.2}, {"gamma", 0.5}});
  const auto a = verify("selberg", p, o);
  o.threads = 3;
  const auto b = verify("selberg", p, o);
  EXPECT_EQ(report_json(a).dump(), report_json(b).dump());
  EXPECT_TRUE(a.passed);
  o.seed = 43;
  EXPECT_NE(verify("selberg", p, o).lhs, a.lhs);
}

TEST(Verify, ReportJsonFields) {
  const auto r = verify("q_selberg_gd", find_identity("q_selberg_gd").sample);
  const json j = report_json(r);
  for (const char* f : {"id", "params", "lhs", "lhs_error", "rhs", "rel_err", "method", "n_evals", "wall_time", "seed",
                        "converged", "variant"})
    EXPECT_TRUE(j.contains(f)) << f;
  EXPECT_TRUE(j["lhs"].contains("re"));
  EXPECT_TRUE(j["rhs"].contains("im"));
  EXPECT_EQ(j["variant"], "reconciled");
}

TEST(Sweep, GridOfNinePoints) {
  const json cfg = json::parse(R"({"id": "euler_beta", "tol": 1e-12,
      "grid": {"alpha": [0.5, 1.5, 3.0], "beta": {"range": [0.7, 2.7, 3]}}})");
  const SweepConfig c = parse_sweep_config(cfg);
  EXPECT_EQ(c.size(), 9u);
  std::vector<SweepRecord> recs;
  const auto s = sweep(c, [&](const SweepRecord& r) { recs.push_back(r); });
  EXPECT_EQ(s.run, 9u);
  EXPECT_EQ(s.failed, 0u);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].index, i);
    ASSERT_TRUE(recs[i].report);
    EXPECT_LT(recs[i].report->rel_err, 1e-12);
  }
}

TEST(Sweep, InvalidPointBecomesSkipRecord) {
  const json cfg = json::parse(R"({"id": "euler_beta", "tol": 1e-12,
      "grid": {"alpha": [-1.0, 1.5, 3.0], "beta": [0.7, 1.7, 2.7]}})");
  const SweepConfig c = parse_sweep_config(cfg);
  std::ostringstream out;
  const auto s = sweep_to_streams(c, out);
  EXPECT_EQ(s.run, 6u);
  EXPECT_EQ(s.skipped, 3u);
  // partition equals validate_params
  std::istringstream lines(out.str());
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const json j = json::parse(line);
    const bool invalid = !validate_params("euler_beta", sweep_point(c, i)).empty();
    EXPECT_EQ(j.value("skipped", false), invalid);
    ++i;
  }
  EXPECT_EQ(i, 9u);
}

TEST(Sweep, RerunIsBitIdentical) {
  const json cfg = json::parse(R"({"id": "selberg", "engine": "mc", "mc_samples": 20000, "seed": 5,
      "grid": {"alpha": [0.8, 1.6], "beta": [1.0], "gamma": [0.5], "k": [2, 3]}})");
  SweepConfig c = parse_sweep_config(cfg);
  std::ostringstream a, b;
  c.workers = 1;
  sweep_to_streams(c, a);
  c.workers = 4;
  sweep_to_streams(c, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
}

TEST(Sweep, ConfigErrors) {
  EXPECT_THROW(parse_sweep_config(json::parse(R"({"grid": {"alpha": [1]}})")), std::invalid_argument);
  EXPECT_THROW(parse_sweep_config(json::parse(R"({"id": "euler_beta", "grid": {"alpha": []}})")),
               std::invalid_argument);
  EXPECT_THROW(parse_sweep_config(json::parse(R"({"id": "euler_beta", "grid": {"omega": [1]}})")),
               std::invalid_argument);
  EXPECT_THROW(parse_sweep_config(json::parse(R"({"id": "nope", "grid": {"alpha": [1]}})")), domain_error);
}

TEST(Cli, ExitCodes) {
  std::string out;
  EXPECT_EQ(run_cli("list", &out), 0);
  EXPECT_NE(out.find("elliptic_beta"), std::string::npos);
  EXPECT_EQ(run_cli("verify --id euler_beta --param alpha=2 --param beta=3 --tol 1e-12", &out), 0);
  EXPECT_EQ(json::parse(out)["passed"], true);
  EXPECT_EQ(run_cli("verify --id euler_beta --param alpha=-2 --param beta=3"), 2);
  EXPECT_EQ(run_cli("verify --id nope"), 2);
  EXPECT_EQ(run_cli("verify --id euler_beta --param alpha=2"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  // printed variant of the second q-Selberg identity misses the tolerance
  EXPECT_EQ(run_cli("verify --id q_selberg_gd --sample --variant printed --tol 1e-6"), 1);
}

TEST(Cli, SweepWritesJsonlAndCsv) {
  const std::string cfg = temp_path("sweep.json"), out = temp_path("sweep.jsonl"), csv = temp_path("sweep.csv");
  std::ofstream(cfg) << R"({"id": "euler_beta", "tol": 1e-12, "grid": {"alpha": [1, -1], "beta": [2]}})";
  EXPECT_EQ(run_cli("sweep --config " + cfg + " --out " + out + " --csv " + csv), 0);
  std::ifstream f(out);
  std::string l1, l2;
  std::getline(f, l1);
  std::getline(f, l2);
  EXPECT_EQ(json::parse(l1)["passed"], true);
  EXPECT_EQ(json::parse(l2)["skipped"], true);
  std::ifstream fc(csv);
  std::string header;
  std::getline(fc, header);
  EXPECT_EQ(header, "index,status,abs_lhs,abs_rhs,rel_err");
  EXPECT_EQ(run_cli("sweep --config /nonexistent.json"), 2);
}

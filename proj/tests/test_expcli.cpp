#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "langfit/config.hpp"
#include "langfit/experiments.hpp"
#include "langfit/io.hpp"

using namespace langfit;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.model.family = "kramers";
  c.sim.T = 200.0;
  c.sim.burn_in = 5.0;
  c.obs.h = 1.0 / 8.0;
  c.fit.structure = "M3";
  c.fit.q = 0;
  c.forecast.N0 = 3;
  c.forecast.N_ens = 4;
  c.forecast.K = 12;
  c.replicate.n_datasets = 2;
  return c;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& file = "") const { return (path / file).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LANGFIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("config text round-trips through dump and parse") {
  ExperimentConfig c = tiny_config();
  c.sim.seed = 424242;
  c.model.gamma = 0.7071067811865476;
  const ExperimentConfig back = parse_config(dump_config(c));
  CHECK(dump_config(back) == dump_config(c));
}

TEST_CASE("unknown keys and malformed values are rejected") {
  CHECK_THROWS_AS(parse_config("model.gamme = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.gamma : 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.gamma = fast\n"), ConfigError);
  ExperimentConfig c;
  CHECK_THROWS_AS(apply_override(c, "nonsense"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "fit.qq=1"), ConfigError);
  apply_override(c, "fit.q=1");
  CHECK(c.fit.q == 1);
  // comments and blank lines are fine
  const ExperimentConfig ok = parse_config("# comment\n\nmodel.gamma = 0.25 # trailing\n");
  CHECK(ok.model.gamma == 0.25);
}

TEST_CASE("validation reports every violated constraint by name") {
  ExperimentConfig c = tiny_config();
  c.model.gamma = -1.0;
  c.obs.h = 0.003;            // not a multiple of dt
  c.replicate.n_datasets = 1;
  c.forecast.N0 = 100000;     // blows the capacity bound
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    auto has = [&](const std::string& frag) {
      for (const auto& v : e.violations)
        if (v.find(frag) != std::string::npos) return true;
      return false;
    };
    CHECK(has("model.gamma"));
    CHECK(has("integer multiple"));
    CHECK(has("n_datasets"));
    CHECK(has("forecast capacity"));
    CHECK(e.violations.size() >= 4);
  }
}

TEST_CASE("replicate report: determinism and seed separation") {
  ExperimentConfig c = tiny_config();
  c.fit.method = "ct";
  const ReplicateReport a = replicate_estimators(c, 1);
  const ReplicateReport b = replicate_estimators(c, 2);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].mean == b.entries[i].mean);
    CHECK(a.entries[i].stddev == b.entries[i].stddev);
    CHECK(a.entries[i].stddev >= 0.0);
  }
  // distinct derived seeds produce distinct datasets, hence nonzero spread
  CHECK(a.entries[0].stddev > 0.0);

  // two fits of the same dataset agree exactly (std would be 0)
  const ObservationSeries one = generate_dataset(c, derive_seed(c.sim.seed, 0));
  const ContrastFit f1 = fit_contrast(one, PotentialKind::KramersForm);
  const ContrastFit f2 = fit_contrast(one, PotentialKind::KramersForm);
  CHECK(f1.theta.gamma == f2.theta.gamma);
  CHECK(f1.theta.drift2 == f2.theta.drift2);
  CHECK(f1.theta.sigma2 == f2.theta.sigma2);
}

TEST_CASE("simulate then estimate-ct composes to the in-process result") {
  TempDir dir("langfit_compose_test");
  RunContext ctx;
  ctx.config = tiny_config();
  ctx.out_dir = dir.str();
  run_simulate(ctx);

  RunContext est = ctx;
  est.data_path = dir.str("observations.csv");
  run_estimate_ct(est);

  // in-process path on the same derived seed
  const ObservationSeries obs = generate_dataset(ctx.config, derive_seed(ctx.config.sim.seed, 0));
  const ContrastFit fit = fit_contrast(obs, PotentialKind::KramersForm);

  std::ifstream in(dir.str("ct_fit.csv"));
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK(header == "family,h,gamma,drift2,sigma2,residual_sum,n_used");
  // gamma is the third field; full 17-digit round trip makes this exact
  std::size_t pos = 0;
  for (int i = 0; i < 2; ++i) pos = row.find(',', pos) + 1;
  const double gamma_file = std::stod(row.substr(pos));
  CHECK(gamma_file == fit.theta.gamma);
}

TEST_CASE("forecast pipeline writes aligned wide output with K rows") {
  TempDir dir("langfit_forecast_test");
  RunContext ctx;
  ctx.config = tiny_config();
  ctx.out_dir = dir.str();
  run_forecast(ctx);

  std::ifstream in(dir.str("rmse_wide.csv"));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "k,t,rmse_true,rmse_est_sde,rmse_narma");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == ctx.config.forecast.K);
  CHECK(fs::exists(dir.str("rmse_true.csv")));
  CHECK(fs::exists(dir.str("narma_model.txt")));
  CHECK(fs::exists(dir.str("manifest.txt")));

  // the serialized model parses back
  const NarmaModel m = read_narma_model(dir.str("narma_model.txt"));
  CHECK(m.spec.structure == NarmaStructure::M3);
}

TEST_CASE("stats outputs and the analytic marginal for the Kramers family") {
  TempDir dir("langfit_stats_test");
  RunContext ctx;
  ctx.config = tiny_config();
  ctx.config.sim.T = 1000.0;
  ctx.out_dir = dir.str();
  run_stats(ctx);
  CHECK(fs::exists(dir.str("pdf.csv")));
  CHECK(fs::exists(dir.str("acf.csv")));
  CHECK(fs::exists(dir.str("pdf_analytic.csv")));
}

TEST_CASE("CLI end-to-end: byte-identical reruns, overrides, failure diagnostics") {
  TempDir a("langfit_cli_a"), b("langfit_cli_b");
  const std::string base =
      "--set model.family=kramers --set sim.T=50 --set sim.burn_in=1 --set obs.h=0.125 "
      "--set forecast.N0=3 --set forecast.K=12";
  const std::string common = base + " --seed 777";
  REQUIRE(run_cli("simulate " + common + " --out " + a.str()) == 0);
  REQUIRE(run_cli("simulate " + common + " --out " + b.str()) == 0);
  CHECK(read_text_file(a.str("observations.csv")) == read_text_file(b.str("observations.csv")));
  CHECK(read_text_file(a.str("manifest.txt")) == read_text_file(b.str("manifest.txt")));

  // different seed changes the data
  REQUIRE(run_cli("simulate " + base + " --seed 778 --out " + b.str()) == 0);
  CHECK(read_text_file(a.str("observations.csv")) != read_text_file(b.str("observations.csv")));

  // invalid configuration exits nonzero
  CHECK(run_cli("simulate --set model.gamma=-2 --out " + a.str()) != 0);
  CHECK(run_cli("bogus-subcommand") != 0);
}

TEST_CASE("simulate row counting: T = 1 at h = 1/32 gives 32 observations") {
  TempDir dir("langfit_rows_test");
  REQUIRE(run_cli("simulate --set sim.T=1 --set sim.burn_in=0 --set obs.h=0.03125 "
                  "--set forecast.N0=1 --set forecast.K=2 --out " +
                  dir.str()) == 0);
  std::ifstream in(dir.str("observations.csv"));
  std::string line;
  REQUIRE(std::getline(in, line));
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 32);
}

TEST_CASE("full discrete-time pipeline lands on the expected AR coefficients") {
  // simulate Kramers at h = 1/32 and fit M3 via the CLI; a1 should sit near
  // the large-sample value 1.9906 (band widened for the reduced data length)
  TempDir dir("langfit_pipe_test");
  REQUIRE(run_cli("fit-narma --set model.family=kramers --set sim.T=2000 "
                  "--set sim.burn_in=50 --set obs.h=0.03125 --set fit.structure=M3 "
                  "--set fit.q=0 --set forecast.N0=3 --set forecast.K=12 --seed 99 --out " +
                  dir.str()) == 0);
  const NarmaModel m = read_narma_model(dir.str("narma_model.txt"));
  CHECK(m.spec.structure == NarmaStructure::M3);
  CHECK(std::abs(m.a1 - 1.9906) < 0.012);
  CHECK(std::abs(-m.a2 - 0.9896) < 0.012);
}

TEST_CASE("reproduce drivers run end to end at toy scale") {
  TempDir dir("langfit_repro_test");
  RunContext ctx;
  ctx.config.model.family = "kramers";
  ctx.config.sim.T = 600.0;
  ctx.config.sim.burn_in = 10.0;
  ctx.config.obs.h = 1.0 / 32.0;
  ctx.config.replicate.n_datasets = 2;
  ctx.config.forecast.N0 = 3;
  ctx.config.forecast.N_ens = 4;
  ctx.config.forecast.K = 16;
  ctx.config.fit.restarts = 2;
  ctx.out_dir = dir.str();

  run_reproduce(ctx, "table1");
  run_reproduce(ctx, "table3");
  run_reproduce(ctx, "table4");
  run_reproduce(ctx, "table5");
  ctx.config.obs.h = 1.0 / 8.0;
  run_reproduce(ctx, "fig-rmse");
  run_reproduce(ctx, "fig-acfpdf");
  for (const char* f : {"table1.csv", "table3.csv", "table4.csv", "table5.csv", "fig_rmse.csv",
                        "pdf_data.csv", "pdf_narma.csv", "pdf_est_sde.csv", "acf_data.csv"})
    CHECK(fs::exists(dir.str(f)));

  // the linear CT table holds gamma/alpha/sigma rows at three spacings
  const SpacingTable t1 = reproduce_table1(ctx.config, 1);
  REQUIRE(t1.h_values.size() == 3);
  for (const auto& entries : t1.per_h) {
    CHECK(entries.size() == 3);
    for (const auto& e : entries) CHECK(std::isfinite(e.mean));
  }

  // analytic references ride along in the ARMA table
  ctx.config.sim.T = 400.0;
  const SpacingTable t2 = reproduce_table2(ctx.config, 1);
  bool found_ref = false;
  for (const auto& e : t2.per_h[0])
    if (e.name == "a1") {
      found_ref = true;
      CHECK(e.ref == doctest::Approx(1.9806).epsilon(5e-5));
      CHECK(e.mean == doctest::Approx(e.ref).epsilon(0.01));
    }
  CHECK(found_ref);
}

TEST_CASE("every subcommand runs from the command line") {
  TempDir dir("langfit_subcmd_test");
  const std::string toy =
      "--set model.family=kramers --set sim.T=600 --set sim.burn_in=10 --set obs.h=0.125 "
      "--set forecast.N0=3 --set forecast.N_ens=4 --set forecast.K=12 "
      "--set replicate.n_datasets=2 --set fit.structure=M3 --seed 5 --out " +
      dir.str();
  REQUIRE(run_cli("replicate --set fit.method=ct " + toy) == 0);
  CHECK(fs::exists(dir.str("replicate.csv")));
  REQUIRE(run_cli("consistency " + toy) == 0);
  CHECK(fs::exists(dir.str("consistency.csv")));
  REQUIRE(run_cli("stats " + toy) == 0);
  REQUIRE(run_cli("forecast " + toy) == 0);
  REQUIRE(run_cli("reproduce table5 " + toy) == 0);
  CHECK(fs::exists(dir.str("table5.csv")));
}

TEST_CASE("consistency scan: oscillation of a self-generated spec shrinks") {
  ExperimentConfig c = tiny_config();
  c.sim.T = 3000.0;
  c.obs.h = 1.0 / 32.0;
  const ObservationSeries obs = generate_dataset(c, 9);
  const ConsistencyReport rep =
      consistency_scan(obs, {NarmaSpec{NarmaStructure::M2, 0}}, {0.25, 0.5, 1.0});
  REQUIRE(!rep.rows.empty());
  for (const auto& row : rep.rows) {
    CHECK_FALSE(row.failed);
    CHECK(row.values.size() == 3);
    CHECK(row.oscillation >= 0.0);
  }
  // AR coefficients are tightly pinned by the data
  for (const auto& row : rep.rows)
    if (row.coef == "a1" || row.coef == "a2") CHECK(row.oscillation < 0.01);
}

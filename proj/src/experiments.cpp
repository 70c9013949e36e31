#include "langfit/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "langfit/io.hpp"
#include "langfit/linear.hpp"
#include "langfit/parallel.hpp"
#include "langfit/stats.hpp"

namespace langfit {

namespace {

SimConfig sim_config_from(const ExperimentConfig& config, std::uint64_t seed) {
  SimConfig sc;
  sc.dt = config.sim.dt;
  sc.n_steps = static_cast<std::uint64_t>(std::llround(config.sim.T / config.sim.dt));
  sc.seed = seed;
  sc.initial = {config.sim.x0, config.sim.y0};
  sc.scheme = config.scheme();
  sc.burn_in = config.sim.burn_in;
  return sc;
}

PotentialKind fit_family(const ExperimentConfig& config) {
  const PotentialKind kind = potential_kind_from_string(config.model.family);
  if (kind == PotentialKind::DoubleWell)
    throw ConfigError("contrast fitting supports quadratic and kramers families");
  return kind;
}

// mean/std over replicate values, one entry per parameter
std::vector<TableEntry> summarize(const std::vector<std::string>& names,
                                  const std::vector<std::vector<double>>& rows) {
  std::vector<TableEntry> out(names.size());
  const double n = static_cast<double>(rows.size());
  for (std::size_t p = 0; p < names.size(); ++p) {
    out[p].name = names[p];
    long double mean = 0.0L;
    for (const auto& r : rows) mean += r[p];
    mean /= n;
    long double var = 0.0L;
    for (const auto& r : rows) {
      const long double d = r[p] - mean;
      var += d * d;
    }
    out[p].mean = static_cast<double>(mean);
    out[p].stddev = rows.size() > 1 ? std::sqrt(static_cast<double>(var / (n - 1.0))) : 0.0;
  }
  return out;
}

std::vector<std::string> narma_param_names(const NarmaSpec& spec) {
  std::vector<std::string> names{"a1", "a2"};
  for (int k = 1; k <= spec.n_regressors(); ++k) names.push_back("b" + std::to_string(k));
  for (int j = 1; j <= spec.q; ++j) names.push_back("c" + std::to_string(j));
  names.push_back("mu");
  names.push_back("c0");
  return names;
}

std::vector<double> narma_param_values(const NarmaModel& m) {
  std::vector<double> v{m.a1, m.a2};
  v.insert(v.end(), m.b.begin(), m.b.end());
  v.insert(v.end(), m.c.begin(), m.c.end());
  v.push_back(m.mu);
  v.push_back(m.c0);
  return v;
}

std::vector<std::string> ct_param_names(PotentialKind family) {
  return {"gamma", family == PotentialKind::Quadratic ? "alpha" : "beta", "sigma"};
}

std::vector<double> ct_param_values(const ContrastFit& fit) {
  return {fit.theta.gamma, fit.theta.drift2, std::sqrt(fit.theta.sigma2)};
}

// shared replicate loop: simulate each dataset once at the finest spacing,
// subsample per h, fit with `fit_one`, summarize per h
template <class FitOne>
SpacingTable spacing_replicates(const ExperimentConfig& base, const std::vector<double>& h_values,
                                const std::vector<std::string>& names, int workers,
                                FitOne&& fit_one) {
  ExperimentConfig config = base;
  config.obs.h = h_values.front();  // finest spacing first
  config.validate();
  const int n = config.replicate.n_datasets;

  std::vector<std::vector<std::vector<double>>> results(
      h_values.size());  // per h, per dataset, params
  for (auto& r : results) r.assign(static_cast<std::size_t>(n), {});
  std::vector<int> failures(static_cast<std::size_t>(n), 0);

  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    ObservationSeries fine;
    try {
      fine = generate_dataset(config, derive_seed(config.sim.seed, i));
    } catch (const std::exception&) {
      failures[i] = 1;
      return;
    }
    for (std::size_t hi = 0; hi < h_values.size(); ++hi) {
      const int factor = static_cast<int>(std::llround(h_values[hi] / h_values.front()));
      try {
        const ObservationSeries obs = factor == 1 ? fine : subsample(fine, factor);
        results[hi][i] = fit_one(obs, i);
      } catch (const std::exception&) {
        failures[i] = 1;
      }
    }
  });

  SpacingTable table;
  table.h_values = h_values;
  table.n_datasets = n;
  for (std::size_t hi = 0; hi < h_values.size(); ++hi) {
    std::vector<std::vector<double>> ok;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
      if (!failures[i] && !results[hi][i].empty()) ok.push_back(results[hi][i]);
    if (ok.empty()) throw std::runtime_error("replicate run: every dataset failed");
    table.per_h.push_back(summarize(names, ok));
  }
  for (int f : failures) table.excluded += f;
  return table;
}

const std::vector<double> kTableSpacings{1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0};

}  // namespace

ObservationSeries generate_dataset(const ExperimentConfig& config, std::uint64_t seed) {
  return simulate_and_observe(config.langevin_params(), sim_config_from(config, seed),
                              config.obs.h);
}

ObservationSeries subsample(const ObservationSeries& obs, int factor) {
  if (factor < 1) throw std::invalid_argument("subsample factor must be >= 1");
  ObservationSeries out;
  out.h = obs.h * factor;
  out.values.reserve(obs.size() / static_cast<std::size_t>(factor));
  for (std::size_t i = static_cast<std::size_t>(factor) - 1; i < obs.size();
       i += static_cast<std::size_t>(factor))
    out.values.push_back(obs.values[i]);
  return out;
}

ReplicateReport replicate_estimators(const ExperimentConfig& config, int workers) {
  config.validate();
  const int n = config.replicate.n_datasets;
  const bool ct = config.fit.method == "ct";
  const std::vector<std::string> names =
      ct ? ct_param_names(fit_family(config)) : narma_param_names(config.narma_spec());

  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  std::vector<int> failed(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    try {
      const ObservationSeries obs = generate_dataset(config, derive_seed(config.sim.seed, i));
      if (ct) {
        rows[i] = ct_param_values(fit_contrast(obs, fit_family(config)));
      } else {
        NarmaFitOptions opts;
        opts.restarts = config.fit.restarts;
        opts.seed = derive_seed(config.sim.seed, 0x66697400ULL + i);
        rows[i] = narma_param_values(fit_narma(config.narma_spec(), obs, opts).model);
      }
    } catch (const std::exception&) {
      failed[i] = 1;
    }
  });

  ReplicateReport report;
  std::vector<std::vector<double>> ok;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!failed[i]) ok.push_back(rows[i]);
  if (ok.empty()) throw std::runtime_error("replicate_estimators: every dataset failed");
  report.entries = summarize(names, ok);
  report.n_datasets = n;
  report.excluded = n - static_cast<int>(ok.size());
  report.config_echo = dump_config(config);
  return report;
}

std::string spacing_table_csv(const SpacingTable& table) {
  std::ostringstream out;
  out << "h,parameter,mean,std,ref\n";
  for (std::size_t hi = 0; hi < table.h_values.size(); ++hi)
    for (const auto& e : table.per_h[hi]) {
      out << format_double(table.h_values[hi]) << ',' << e.name << ',' << format_double(e.mean)
          << ',' << format_double(e.stddev) << ',';
      if (std::isnan(e.ref))
        out << "";
      else
        out << format_double(e.ref);
      out << '\n';
    }
  return out.str();
}

SpacingTable reproduce_table1(const ExperimentConfig& base, int workers) {
  ExperimentConfig config = base;
  config.model.family = "quadratic";
  config.fit.method = "ct";
  return spacing_replicates(config, kTableSpacings, ct_param_names(PotentialKind::Quadratic),
                            workers, [&](const ObservationSeries& obs, std::size_t) {
                              return ct_param_values(fit_contrast(obs, PotentialKind::Quadratic));
                            });
}

SpacingTable reproduce_table2(const ExperimentConfig& base, int workers) {
  ExperimentConfig config = base;
  config.model.family = "quadratic";
  config.fit.method = "narma";
  config.fit.structure = "ARMA";
  config.fit.q = 1;
  NarmaSpec spec = config.narma_spec();
  SpacingTable table = spacing_replicates(
      config, kTableSpacings, narma_param_names(spec), workers,
      [&](const ObservationSeries& obs, std::size_t i) {
        NarmaFitOptions opts;
        opts.restarts = config.fit.restarts;
        opts.seed = derive_seed(config.sim.seed, 0x66697400ULL + i);
        return narma_param_values(fit_narma(spec, obs, opts).model);
      });
  // analytic T-values of (a1, a2, theta1, sigma_w) alongside the estimates
  for (std::size_t hi = 0; hi < table.h_values.size(); ++hi) {
    const ArmaEquiv eq = arma21_equiv(config.model.gamma, config.model.alpha, config.model.sigma,
                                      table.h_values[hi]);
    for (auto& e : table.per_h[hi]) {
      if (e.name == "a1") e.ref = eq.a1;
      if (e.name == "a2") e.ref = eq.a2;
      if (e.name == "c1") e.ref = eq.theta1;
      if (e.name == "c0") e.ref = eq.sigma_w;
    }
  }
  return table;
}

SpacingTable reproduce_table3(const ExperimentConfig& base, int workers) {
  ExperimentConfig config = base;
  config.model.family = "kramers";
  config.fit.method = "ct";
  return spacing_replicates(config, kTableSpacings, ct_param_names(PotentialKind::KramersForm),
                            workers, [&](const ObservationSeries& obs, std::size_t) {
                              return ct_param_values(fit_contrast(obs, PotentialKind::KramersForm));
                            });
}

SpacingTable reproduce_table4(const ExperimentConfig& base, int workers) {
  ExperimentConfig config = base;
  config.model.family = "kramers";
  config.fit.method = "narma";
  config.fit.structure = "M3";
  config.fit.q = 0;
  const NarmaSpec spec = config.narma_spec();
  return spacing_replicates(config, kTableSpacings, narma_param_names(spec), workers,
                            [&](const ObservationSeries& obs, std::size_t) {
                              return narma_param_values(fit_narma(spec, obs).model);
                            });
}

ConsistencyReport consistency_scan(const ObservationSeries& obs, const std::vector<NarmaSpec>& specs,
                                   const std::vector<double>& fractions,
                                   const NarmaFitOptions& options) {
  if (fractions.empty()) throw std::invalid_argument("consistency_scan: no fractions");
  for (double f : fractions)
    if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("fractions must lie in (0, 1]");

  ConsistencyReport report;
  report.fractions = fractions;
  for (const auto& spec : specs) {
    const std::vector<std::string> names = narma_param_names(spec);
    std::vector<std::vector<double>> fits(fractions.size());
    std::vector<bool> failed(fractions.size(), false);
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
      ObservationSeries prefix;
      prefix.h = obs.h;
      const auto len = static_cast<std::size_t>(std::llround(fractions[fi] * static_cast<double>(obs.size())));
      prefix.values.assign(obs.values.begin(), obs.values.begin() + static_cast<long>(len));
      try {
        fits[fi] = narma_param_values(fit_narma(spec, prefix, options).model);
      } catch (const std::exception&) {
        failed[fi] = true;
      }
    }
    // reference fit: the largest fraction (by spec, fractions end at 1)
    const std::size_t full = fractions.size() - 1;
    for (std::size_t p = 0; p < names.size(); ++p) {
      ConsistencyReport::Row row;
      row.spec = to_string(spec.structure) + ",q=" + std::to_string(spec.q);
      row.coef = names[p];
      double osc = 0.0;
      for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        if (failed[fi]) {
          row.values.push_back(std::numeric_limits<double>::quiet_NaN());
          row.failed = true;
          continue;
        }
        row.values.push_back(fits[fi][p]);
      }
      if (!failed[full]) {
        const double ref = fits[full][p];
        for (std::size_t fi = 0; fi < fractions.size(); ++fi)
          if (!failed[fi])
            osc = std::max(osc, std::abs(fits[fi][p] - ref) /
                                    std::max(std::abs(ref), 1e-300));
      }
      row.oscillation = osc;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string consistency_csv(const ConsistencyReport& report) {
  std::ostringstream out;
  out << "spec,coef";
  for (double f : report.fractions) out << ",frac_" << format_double(f);
  out << ",oscillation\n";
  for (const auto& row : report.rows) {
    out << '"' << row.spec << "\"," << row.coef;
    for (double v : row.values) out << ',' << (std::isnan(v) ? std::string("failed") : format_double(v));
    out << ',' << format_double(row.oscillation) << '\n';
  }
  return out.str();
}

ConsistencyReport reproduce_table5(const ExperimentConfig& base, int workers) {
  (void)workers;
  ExperimentConfig config = base;
  config.model.family = "kramers";
  config.validate();
  const ObservationSeries obs = generate_dataset(config, derive_seed(config.sim.seed, 0));
  NarmaSpec m2{NarmaStructure::M2, 0};
  NarmaSpec m3{NarmaStructure::M3, 0};
  NarmaFitOptions opts;
  opts.seed = derive_seed(config.sim.seed, 0x74616235ULL);
  return consistency_scan(obs, {m2, m3}, {0.125, 0.25, 0.5, 1.0}, opts);
}

ForecastBenchmark run_forecast_pipeline(const ExperimentConfig& config, int workers) {
  config.validate();
  const ObservationSeries data = generate_dataset(config, derive_seed(config.sim.seed, 0));

  ObservationSeries fit_half, test_half;
  fit_half.h = test_half.h = data.h;
  const std::size_t half = data.size() / 2;
  fit_half.values.assign(data.values.begin(), data.values.begin() + static_cast<long>(half));
  test_half.values.assign(data.values.begin() + static_cast<long>(half), data.values.end());

  const PotentialKind family = fit_family(config);
  ForecastBenchmark bench;
  bench.ct_fit = fit_contrast(fit_half, family);
  NarmaFitOptions opts;
  opts.restarts = config.fit.restarts;
  opts.seed = derive_seed(config.sim.seed, 0x6e61726dULL);
  bench.narma_fit = fit_narma(config.narma_spec(), fit_half, opts);

  LangevinParams est = config.langevin_params();
  est.gamma = bench.ct_fit.theta.gamma;
  est.sigma = std::sqrt(bench.ct_fit.theta.sigma2);
  est.potential = family == PotentialKind::Quadratic
                      ? PotentialSpec::quadratic(bench.ct_fit.theta.drift2)
                      : PotentialSpec::kramers(bench.ct_fit.theta.drift2);

  ForecastConfig fc;
  fc.n_pieces = config.forecast.N0;
  fc.ensemble_size = config.forecast.N_ens;
  fc.horizon = config.forecast.K;
  fc.init_len = 2 * std::max(NarmaSpec::p, config.narma_spec().q) + 1;

  std::vector<Predictor> predictors;
  predictors.emplace_back(SdePredictor{config.langevin_params(), config.scheme(), config.forecast.dt_solve});
  predictors.emplace_back(SdePredictor{est, config.scheme(), config.forecast.dt_solve});
  predictors.emplace_back(NarmaPredictor{bench.narma_fit.model});
  bench.names = {"true", "est_sde", "narma"};
  bench.curves = forecast_experiment(test_half, predictors, fc,
                                     derive_seed(config.sim.seed, 0x666f7265ULL), workers);
  return bench;
}

void write_manifest(const RunContext& ctx) {
  std::ostringstream out;
  out << "langfit 0.1.0\n" << dump_config(ctx.config);
  write_text_file((std::filesystem::path(ctx.out_dir) / "manifest.txt").string(), out.str());
}

namespace {

std::string out_path(const RunContext& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

ObservationSeries load_or_simulate(const RunContext& ctx) {
  if (!ctx.data_path.empty()) return read_observations_csv(ctx.data_path);
  return generate_dataset(ctx.config, derive_seed(ctx.config.sim.seed, 0));
}

}  // namespace

void run_simulate(const RunContext& ctx) {
  ctx.config.validate();
  const ObservationSeries obs = generate_dataset(ctx.config, derive_seed(ctx.config.sim.seed, 0));
  write_observations_csv(out_path(ctx, "observations.csv"), obs);
  write_manifest(ctx);
}

void run_estimate_ct(const RunContext& ctx) {
  ctx.config.validate();
  const ObservationSeries obs = load_or_simulate(ctx);
  const PotentialKind family = fit_family(ctx.config);
  const ContrastFit fit = fit_contrast(obs, family);
  write_contrast_fit_csv(out_path(ctx, "ct_fit.csv"), fit, family, obs.h);
  write_manifest(ctx);
}

void run_fit_narma(const RunContext& ctx) {
  ctx.config.validate();
  const ObservationSeries obs = load_or_simulate(ctx);
  NarmaFitOptions opts;
  opts.restarts = ctx.config.fit.restarts;
  opts.seed = derive_seed(ctx.config.sim.seed, 0x66697400ULL);
  const NarmaFit fit = fit_narma(ctx.config.narma_spec(), obs, opts);
  write_narma_model(out_path(ctx, "narma_model.txt"), fit.model);
  write_manifest(ctx);
}

void run_forecast(const RunContext& ctx) {
  const ForecastBenchmark bench = run_forecast_pipeline(ctx.config, ctx.workers);
  for (std::size_t i = 0; i < bench.names.size(); ++i)
    write_rmse_csv(out_path(ctx, "rmse_" + bench.names[i] + ".csv"), bench.curves[i]);
  write_rmse_wide_csv(out_path(ctx, "rmse_wide.csv"), bench.names, bench.curves);
  write_contrast_fit_csv(out_path(ctx, "ct_fit.csv"), bench.ct_fit, fit_family(ctx.config),
                         ctx.config.obs.h);
  write_narma_model(out_path(ctx, "narma_model.txt"), bench.narma_fit.model);
  write_manifest(ctx);
}

void run_stats(const RunContext& ctx) {
  ctx.config.validate();
  const ObservationSeries obs = load_or_simulate(ctx);
  write_histogram_csv(out_path(ctx, "pdf.csv"), empirical_pdf(obs.values, 81));
  const int max_lag = std::min<int>(200, static_cast<int>(obs.size() / 10) - 1);
  write_acf_csv(out_path(ctx, "acf.csv"), empirical_acf(obs.values, max_lag), obs.h);
  if (potential_kind_from_string(ctx.config.model.family) == PotentialKind::KramersForm) {
    std::vector<double> grid;
    const double lim = 6.0 * std::sqrt(ctx.config.langevin_params().temperature()) +
                       2.0 * ctx.config.model.beta;
    for (int i = 0; i <= 800; ++i) grid.push_back(-lim + 2.0 * lim * i / 800.0);
    write_density_csv(out_path(ctx, "pdf_analytic.csv"),
                      kramers_stationary_pdf_x(ctx.config.langevin_params(), grid));
  }
  write_manifest(ctx);
}

void run_replicate(const RunContext& ctx) {
  const ReplicateReport report = replicate_estimators(ctx.config, ctx.workers);
  std::ostringstream out;
  out << "parameter,mean,std\n";
  for (const auto& e : report.entries)
    out << e.name << ',' << format_double(e.mean) << ',' << format_double(e.stddev) << '\n';
  out << "# n_datasets = " << report.n_datasets << ", excluded = " << report.excluded << '\n';
  write_text_file(out_path(ctx, "replicate.csv"), out.str());
  write_manifest(ctx);
}

void run_consistency(const RunContext& ctx) {
  ctx.config.validate();
  const ObservationSeries obs = load_or_simulate(ctx);
  NarmaSpec m2{NarmaStructure::M2, 0};
  NarmaSpec m3{NarmaStructure::M3, 0};
  NarmaFitOptions opts;
  opts.seed = derive_seed(ctx.config.sim.seed, 0x74616235ULL);
  const ConsistencyReport report = consistency_scan(obs, {m2, m3}, {0.125, 0.25, 0.5, 1.0}, opts);
  write_text_file(out_path(ctx, "consistency.csv"), consistency_csv(report));
  write_manifest(ctx);
}

void run_reproduce(const RunContext& ctx, const std::string& target) {
  if (target == "table1") {
    write_text_file(out_path(ctx, "table1.csv"), spacing_table_csv(reproduce_table1(ctx.config, ctx.workers)));
  } else if (target == "table2") {
    write_text_file(out_path(ctx, "table2.csv"), spacing_table_csv(reproduce_table2(ctx.config, ctx.workers)));
  } else if (target == "table3") {
    write_text_file(out_path(ctx, "table3.csv"), spacing_table_csv(reproduce_table3(ctx.config, ctx.workers)));
  } else if (target == "table4") {
    write_text_file(out_path(ctx, "table4.csv"), spacing_table_csv(reproduce_table4(ctx.config, ctx.workers)));
  } else if (target == "table5") {
    write_text_file(out_path(ctx, "table5.csv"), consistency_csv(reproduce_table5(ctx.config, ctx.workers)));
  } else if (target == "fig-rmse") {
    const ForecastBenchmark bench = run_forecast_pipeline(ctx.config, ctx.workers);
    write_rmse_wide_csv(out_path(ctx, "fig_rmse.csv"), bench.names, bench.curves);
  } else if (target == "fig-acfpdf") {
    ExperimentConfig config = ctx.config;
    config.validate();
    const ObservationSeries data = generate_dataset(config, derive_seed(config.sim.seed, 0));
    ObservationSeries fit_half;
    fit_half.h = data.h;
    fit_half.values.assign(data.values.begin(),
                           data.values.begin() + static_cast<long>(data.size() / 2));
    write_histogram_csv(out_path(ctx, "pdf_data.csv"), empirical_pdf(data.values, 81));
    write_acf_csv(out_path(ctx, "acf_data.csv"), empirical_acf(data.values, 200), data.h);
    // NARMA pipeline statistics
    NarmaFitOptions opts;
    opts.restarts = config.fit.restarts;
    opts.seed = derive_seed(config.sim.seed, 0x6e61726dULL);
    const NarmaFit nf = fit_narma(config.narma_spec(), fit_half, opts);
    Rng rng(derive_seed(config.sim.seed, 0x73696d00ULL));
    const std::vector<double> init(fit_half.values.end() - NarmaSpec::p, fit_half.values.end());
    const std::vector<double> narma_path = simulate_narma(nf.model, data.size(), init, rng);
    write_histogram_csv(out_path(ctx, "pdf_narma.csv"), empirical_pdf(narma_path, 81));
    write_acf_csv(out_path(ctx, "acf_narma.csv"), empirical_acf(narma_path, 200), data.h);
    // estimated-SDE pipeline statistics
    const PotentialKind family = fit_family(config);
    const ContrastFit cf = fit_contrast(fit_half, family);
    ExperimentConfig est = config;
    est.model.gamma = cf.theta.gamma;
    est.model.sigma = std::sqrt(cf.theta.sigma2);
    (family == PotentialKind::Quadratic ? est.model.alpha : est.model.beta) = cf.theta.drift2;
    const ObservationSeries est_obs = generate_dataset(est, derive_seed(config.sim.seed, 0x65737400ULL));
    write_histogram_csv(out_path(ctx, "pdf_est_sde.csv"), empirical_pdf(est_obs.values, 81));
    write_acf_csv(out_path(ctx, "acf_est_sde.csv"), empirical_acf(est_obs.values, 200), est_obs.h);
  } else {
    throw ConfigError("unknown reproduce target: " + target +
                      " (expected table1..table5, fig-rmse, fig-acfpdf)");
  }
  write_manifest(ctx);
}

}  // namespace langfit

#pragma once

#include <string>
#include <vector>

#include "langfit/contrast.hpp"
#include "langfit/forecast.hpp"
#include "langfit/narma.hpp"
#include "langfit/sde.hpp"
#include "langfit/stats.hpp"

namespace langfit {

// full-precision decimal formatting (17 significant digits)
std::string format_double(double v);

// observation series: header n,t,x with t = n*h
void write_observations_csv(const std::string& path, const ObservationSeries& obs);
ObservationSeries read_observations_csv(const std::string& path);

// contrast fit: family,h,gamma,drift2,sigma2,residual_sum,n_used
void write_contrast_fit_csv(const std::string& path, const ContrastFit& fit, PotentialKind family,
                            double h);

// fitted NARMA model as a key = value block; round-trips losslessly
std::string serialize_narma_model(const NarmaModel& model);
NarmaModel parse_narma_model(const std::string& text);
void write_narma_model(const std::string& path, const NarmaModel& model);
NarmaModel read_narma_model(const std::string& path);

// RMSE curves: k,t,rmse and the combined wide format
void write_rmse_csv(const std::string& path, const RmseCurve& curve);
void write_rmse_wide_csv(const std::string& path, const std::vector<std::string>& names,
                         const std::vector<RmseCurve>& curves);

// histogram: bin_left,bin_right,density; ACF: lag,t,acf
void write_histogram_csv(const std::string& path, const Histogram& hist);
void write_acf_csv(const std::string& path, const AcfCurve& acf, double h);
void write_density_csv(const std::string& path, const DensityCurve& curve);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace langfit

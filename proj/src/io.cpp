#include "langfit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace langfit {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_observations_csv(const std::string& path, const ObservationSeries& obs) {
  std::ostringstream out;
  out << "n,t,x\n";
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto n = static_cast<double>(i + 1);
    out << (i + 1) << ',' << format_double(n * obs.h) << ',' << format_double(obs.values[i])
        << '\n';
  }
  write_text_file(path, out.str());
}

ObservationSeries read_observations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,t,x", 0) != 0)
    throw std::runtime_error("bad observations header in " + path);
  ObservationSeries obs;
  double first_t = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t p1 = line.find(','), p2 = line.find(',', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw std::runtime_error("bad observations row in " + path + ": " + line);
    const double t = std::stod(line.substr(p1 + 1, p2 - p1 - 1));
    const double x = std::stod(line.substr(p2 + 1));
    if (obs.values.empty()) first_t = t;
    obs.values.push_back(x);
  }
  if (obs.values.empty()) throw std::runtime_error("empty observations file: " + path);
  obs.h = first_t;  // t = n*h and rows start at n = 1
  return obs;
}

void write_contrast_fit_csv(const std::string& path, const ContrastFit& fit, PotentialKind family,
                            double h) {
  std::ostringstream out;
  out << "family,h,gamma,drift2,sigma2,residual_sum,n_used\n";
  out << to_string(family) << ',' << format_double(h) << ',' << format_double(fit.theta.gamma)
      << ',' << format_double(fit.theta.drift2) << ',' << format_double(fit.theta.sigma2) << ','
      << format_double(fit.residual_sum) << ',' << fit.n_used << '\n';
  write_text_file(path, out.str());
}

std::string serialize_narma_model(const NarmaModel& model) {
  std::ostringstream out;
  out << "structure = " << to_string(model.spec.structure) << '\n';
  out << "p = " << NarmaSpec::p << '\n';
  out << "q = " << model.spec.q << '\n';
  out << "a1 = " << format_double(model.a1) << '\n';
  out << "a2 = " << format_double(model.a2) << '\n';
  for (std::size_t k = 0; k < model.b.size(); ++k)
    out << 'b' << (k + 1) << " = " << format_double(model.b[k]) << '\n';
  for (std::size_t j = 0; j < model.c.size(); ++j)
    out << 'c' << (j + 1) << " = " << format_double(model.c[j]) << '\n';
  out << "mu = " << format_double(model.mu) << '\n';
  out << "c0 = " << format_double(model.c0) << '\n';
  return out.str();
}

NarmaModel parse_narma_model(const std::string& text) {
  NarmaModel model;
  std::istringstream in(text);
  std::string line;
  bool have_structure = false, have_q = false;
  std::vector<std::pair<std::string, std::string>> fields;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad model line: " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    fields.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const auto& [key, value] : fields) {
    if (key == "structure") {
      model.spec.structure = narma_structure_from_string(value);
      have_structure = true;
    } else if (key == "q") {
      model.spec.q = std::stoi(value);
      have_q = true;
    }
  }
  if (!have_structure || !have_q) throw std::runtime_error("model block missing structure/q");
  model.b.assign(static_cast<std::size_t>(model.spec.n_regressors()), 0.0);
  model.c.assign(static_cast<std::size_t>(model.spec.q), 0.0);
  for (const auto& [key, value] : fields) {
    if (key == "structure") continue;
    if (key == "p") {
      if (std::stoi(value) != NarmaSpec::p) throw std::runtime_error("model block: p must be 2");
    } else if (key == "q") {
      continue;
    } else if (key == "a1") {
      model.a1 = std::stod(value);
    } else if (key == "a2") {
      model.a2 = std::stod(value);
    } else if (key == "mu") {
      model.mu = std::stod(value);
    } else if (key == "c0") {
      model.c0 = std::stod(value);
    } else if (key.size() >= 2 && (key[0] == 'b' || key[0] == 'c')) {
      const std::size_t idx = std::stoul(key.substr(1));
      auto& vec = key[0] == 'b' ? model.b : model.c;
      if (idx < 1 || idx > vec.size())
        throw std::runtime_error("model block: coefficient out of range: " + key);
      vec[idx - 1] = std::stod(value);
    } else {
      throw std::runtime_error("model block: unknown key: " + key);
    }
  }
  model.validate();
  return model;
}

void write_narma_model(const std::string& path, const NarmaModel& model) {
  write_text_file(path, serialize_narma_model(model));
}

NarmaModel read_narma_model(const std::string& path) {
  return parse_narma_model(read_text_file(path));
}

void write_rmse_csv(const std::string& path, const RmseCurve& curve) {
  std::ostringstream out;
  out << "k,t,rmse\n";
  for (std::size_t k = 0; k < curve.values.size(); ++k)
    out << (k + 1) << ',' << format_double(static_cast<double>(k + 1) * curve.h) << ','
        << format_double(curve.values[k]) << '\n';
  write_text_file(path, out.str());
}

void write_rmse_wide_csv(const std::string& path, const std::vector<std::string>& names,
                         const std::vector<RmseCurve>& curves) {
  if (names.size() != curves.size())
    throw std::invalid_argument("write_rmse_wide_csv: name/curve count mismatch");
  std::ostringstream out;
  out << "k,t";
  for (const auto& n : names) out << ",rmse_" << n;
  out << '\n';
  if (curves.empty()) {
    write_text_file(path, out.str());
    return;
  }
  const std::size_t horizon = curves[0].values.size();
  for (const auto& c : curves)
    if (c.values.size() != horizon)
      throw std::invalid_argument("write_rmse_wide_csv: curve length mismatch");
  for (std::size_t k = 0; k < horizon; ++k) {
    out << (k + 1) << ',' << format_double(static_cast<double>(k + 1) * curves[0].h);
    for (const auto& c : curves) out << ',' << format_double(c.values[k]);
    out << '\n';
  }
  write_text_file(path, out.str());
}

void write_histogram_csv(const std::string& path, const Histogram& hist) {
  std::ostringstream out;
  out << "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < hist.densities.size(); ++i)
    out << format_double(hist.bin_edges[i]) << ',' << format_double(hist.bin_edges[i + 1]) << ','
        << format_double(hist.densities[i]) << '\n';
  write_text_file(path, out.str());
}

void write_acf_csv(const std::string& path, const AcfCurve& acf, double h) {
  std::ostringstream out;
  out << "lag,t,acf\n";
  for (std::size_t k = 0; k < acf.values.size(); ++k)
    out << k << ',' << format_double(static_cast<double>(k) * h) << ','
        << format_double(acf.values[k]) << '\n';
  write_text_file(path, out.str());
}

void write_density_csv(const std::string& path, const DensityCurve& curve) {
  std::ostringstream out;
  out << "x,density\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    out << format_double(curve.grid[i]) << ',' << format_double(curve.density[i]) << '\n';
  write_text_file(path, out.str());
}

}  // namespace langfit

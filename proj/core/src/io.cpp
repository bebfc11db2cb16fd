#include "rvns/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "rvns/errors.hpp"

namespace rvns {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw io_error("cannot write " + path);
  }
  return out;
}

ordered_json density_to_json(const DensityVector& density) {
  ordered_json j;
  j["grid"] = density.grid->points();
  j["auxiliary"] = density.grid->auxiliary();
  j["density"] = density.values;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_dataset(const std::string& path, const Dataset& data) {
  auto out = open_out(path);
  out << "value\n";
  for (double v : data.values) {
    out << format_double(v) << "\n";
  }
}

void save_reports(const std::string& path,
                  const std::vector<PerturbedReport>& reports,
                  bool diagnostic) {
  auto out = open_out(path);
  out << (diagnostic ? "user_id,sample_index,value,band_offset\n"
                     : "user_id,sample_index,value\n");
  for (const auto& r : reports) {
    for (std::size_t j = 0; j < r.samples.size(); ++j) {
      out << r.user_id << "," << j << "," << format_double(r.samples[j]);
      if (diagnostic) {
        out << "," << format_double(r.band_offset);
      }
      out << "\n";
    }
  }
}

std::vector<PerturbedReport> load_reports(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw io_error("empty report file " + path);
  }
  const bool diagnostic = line.find("band_offset") != std::string::npos;

  // user_id order in the file is preserved; samples append in row order.
  std::vector<PerturbedReport> reports;
  std::map<std::uint64_t, std::size_t> index;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    unsigned long long user = 0;
    unsigned long long sample_index = 0;
    double value = 0.0;
    double offset = 0.0;
    const int got = diagnostic
                        ? std::sscanf(line.c_str(), "%llu,%llu,%lf,%lf", &user,
                                      &sample_index, &value, &offset)
                        : std::sscanf(line.c_str(), "%llu,%llu,%lf", &user,
                                      &sample_index, &value);
    if (got < (diagnostic ? 4 : 3)) {
      throw io_error("malformed report row: " + line);
    }
    auto [it, fresh] = index.try_emplace(user, reports.size());
    if (fresh) {
      reports.push_back(PerturbedReport{user, {}, offset});
    }
    reports[it->second].samples.push_back(value);
    if (diagnostic) {
      reports[it->second].band_offset = offset;
    }
  }
  if (reports.empty()) {
    throw io_error("no report rows in " + path);
  }
  return reports;
}

void save_density_json(const std::string& path, const DensityVector& density) {
  auto out = open_out(path);
  out << density_to_json(density).dump(2) << "\n";
}

void save_reconstruction_json(const std::string& path,
                              const ReconstructionResult& result) {
  ordered_json j = density_to_json(result.density);
  j["objective"] = result.objective_value;
  j["constraint_residual"] = result.constraint_residual;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

DensityVector load_density_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open " + path);
  }
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw io_error(std::string("bad density JSON: ") + e.what());
  }
  if (!j.contains("grid") || !j.contains("density")) {
    throw io_error("density JSON needs 'grid' and 'density' arrays");
  }
  std::vector<double> pts = j["grid"].get<std::vector<double>>();
  std::vector<double> vals = j["density"].get<std::vector<double>>();
  double aux;
  if (j.contains("auxiliary")) {
    aux = j["auxiliary"].get<double>();
  } else if (pts.size() >= 2) {
    aux = pts.back() + (pts.back() - pts[pts.size() - 2]);
  } else {
    throw io_error("density JSON needs 'auxiliary' for single-point grids");
  }
  auto grid = std::make_shared<const InterestGrid>(std::move(pts), aux);
  return DensityVector(std::move(grid), std::move(vals));
}

void save_attack_csv(const std::string& path, const AttackResult& result) {
  auto out = open_out(path);
  out << "user_id,x_infer,log_likelihood\n";
  for (std::size_t i = 0; i < result.inferred.size(); ++i) {
    out << i << "," << format_double(result.inferred.values[i]) << ","
        << format_double(result.log_likelihoods[i]) << "\n";
  }
}

void save_indicators_json(const std::string& path, const IndicatorSet& set) {
  ordered_json j;
  j["mean"] = set.mean;
  j["std_dev"] = set.std_dev;
  j["mode"] = set.mode;
  j["median"] = set.median;
  j["skewness"] = set.skewness;
  j["kurtosis"] = set.kurtosis;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace rvns

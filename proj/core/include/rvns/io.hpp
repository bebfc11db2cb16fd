#pragma once

#include <string>
#include <vector>

#include "rvns/attack.hpp"
#include "rvns/metrics.hpp"
#include "rvns/reconstruction.hpp"
#include "rvns/types.hpp"

namespace rvns {

// Shortest exact decimal form is not portable across formatting libraries,
// so all text output pins doubles to "%.17g": round-trippable and stable.
std::string format_double(double v);

// Single-column CSV with header `value`, one dataset entry per row.
void save_dataset(const std::string& path, const Dataset& data);

// Report batch CSV `user_id,sample_index,value`; with diagnostic=true a
// `band_offset` column is appended for test runs.
void save_reports(const std::string& path,
                  const std::vector<PerturbedReport>& reports,
                  bool diagnostic = false);
std::vector<PerturbedReport> load_reports(const std::string& path);

// Density JSON: {"grid": [...], "auxiliary": z, "density": [...]} plus the
// solver fields (objective, constraint_residual, iterations, converged)
// when written from a reconstruction result.
void save_density_json(const std::string& path, const DensityVector& density);
void save_reconstruction_json(const std::string& path,
                              const ReconstructionResult& result);
DensityVector load_density_json(const std::string& path);

// Attack CSV `user_id,x_infer,log_likelihood`.
void save_attack_csv(const std::string& path, const AttackResult& result);

// Indicator JSON with the six named fields.
void save_indicators_json(const std::string& path, const IndicatorSet& set);

}  // namespace rvns

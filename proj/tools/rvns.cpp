// Command line front end for the negative-survey pipeline. Six subcommands
// wire the library stages together: generate, perturb, reconstruct, attack,
// evaluate, and experiment (a config-driven sweep that averages the full
// pipeline over repetitions and emits a plot-ready CSV).
//
// Exit codes: 0 success, 1 I/O or data failure, 2 usage error (bad flags,
// bad parameter values, malformed experiment config).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "rvns/attack.hpp"
#include "rvns/baselines.hpp"
#include "rvns/data.hpp"
#include "rvns/errors.hpp"
#include "rvns/io.hpp"
#include "rvns/kde.hpp"
#include "rvns/metrics.hpp"
#include "rvns/perturbation.hpp"
#include "rvns/random.hpp"
#include "rvns/reconstruction.hpp"
#include "rvns/types.hpp"

namespace {

rvns::TieRule parse_tie_rule(const std::string& name) {
  if (name == "smallest") return rvns::TieRule::smallest_x;
  if (name == "centroid") return rvns::TieRule::centroid;
  throw std::invalid_argument("unknown tie rule: " + name +
                              " (expected smallest or centroid)");
}

// The range of a density loaded from JSON is implied by its grid: the grid
// spans [a, b] with the auxiliary point sitting at b for uniform grids.
rvns::DataRange density_range(const rvns::DensityVector& density) {
  return {density.grid->points().front(), density.grid->auxiliary()};
}

// Shared by cmd_evaluate and the experiment loop so a manually chained run
// reproduces the experiment numbers bit for bit.
struct EvaluationRow {
  double wasserstein = 0.0;
  rvns::IndicatorSet errors;
};

EvaluationRow evaluate_density(const rvns::Dataset& original,
                               const rvns::DensityVector& estimated,
                               const rvns::DensityVector& reference,
                               std::uint64_t seed) {
  EvaluationRow row;
  row.wasserstein = rvns::wasserstein1(estimated, reference);
  rvns::Rng rng(seed);
  row.errors = rvns::indicator_error(original, estimated.normalized(),
                                     original.size(), rng);
  return row;
}

void write_metrics_json(const std::string& path, const EvaluationRow& row) {
  nlohmann::ordered_json j;
  j["wasserstein"] = row.wasserstein;
  j["mean_err"] = row.errors.mean;
  j["std_err"] = row.errors.std_dev;
  j["mode_err"] = row.errors.mode;
  j["median_err"] = row.errors.median;
  j["skew_err"] = row.errors.skewness;
  j["kurt_err"] = row.errors.kurtosis;
  std::ofstream out(path);
  if (!out) throw rvns::io_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// experiment config: flat key=value lines, '#' comments, comma lists.

struct ExperimentConfig {
  std::string dataset;  // "chi2" or "csv"
  int df = 2;
  std::size_t n = 0;
  std::string csv_path;
  std::string csv_column = "value";
  double a = 0.0;
  double b = 0.0;
  bool have_range = false;
  int m = 100;
  int k = 5;
  std::vector<double> d_sweep;
  std::vector<double> scale_sweep;
  std::vector<std::string> mechanisms = {"rvns"};
  int grid_resolution = 1000;
  std::string tie_rule = "smallest";
  int reps = 11;
  std::uint64_t seed = 1;
  bool report_runtime = true;
  std::string out;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& s) {
  std::vector<double> values;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("config key " + key +
                                  ": not a number: " + item);
    }
  }
  return values;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("config key " + key + ": expected true/false");
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rvns::io_error("cannot open config " + path);
  ExperimentConfig config;
  bool have_a = false;
  bool have_b = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "dataset") {
        config.dataset = value;
      } else if (key == "df") {
        config.df = std::stoi(value);
      } else if (key == "n") {
        config.n = static_cast<std::size_t>(std::stoull(value));
      } else if (key == "csv_path") {
        config.csv_path = value;
      } else if (key == "csv_column") {
        config.csv_column = value;
      } else if (key == "a") {
        config.a = std::stod(value);
        have_a = true;
      } else if (key == "b") {
        config.b = std::stod(value);
        have_b = true;
      } else if (key == "m") {
        config.m = std::stoi(value);
      } else if (key == "k") {
        config.k = std::stoi(value);
      } else if (key == "d_sweep") {
        config.d_sweep = parse_double_list(key, value);
      } else if (key == "scale_sweep") {
        config.scale_sweep = parse_double_list(key, value);
      } else if (key == "mechanisms") {
        config.mechanisms = split_list(value);
      } else if (key == "grid_resolution") {
        config.grid_resolution = std::stoi(value);
      } else if (key == "tie_rule") {
        config.tie_rule = value;
      } else if (key == "reps") {
        config.reps = std::stoi(value);
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "report_runtime") {
        config.report_runtime = parse_bool(key, value);
      } else if (key == "out") {
        config.out = value;
      } else {
        throw std::invalid_argument("unknown config key: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key " + key + ": bad value " + value);
    }
  }
  if (config.dataset != "chi2" && config.dataset != "csv") {
    throw std::invalid_argument("config: dataset must be chi2 or csv");
  }
  if (config.dataset == "chi2" && config.n == 0) {
    throw std::invalid_argument("config: chi2 dataset needs n > 0");
  }
  if (config.dataset == "csv" && config.csv_path.empty()) {
    throw std::invalid_argument("config: csv dataset needs csv_path");
  }
  if (!have_a || !have_b) {
    throw std::invalid_argument("config: a and b are required");
  }
  if (config.reps < 1) {
    throw std::invalid_argument("config: reps must be at least 1");
  }
  if (config.out.empty()) {
    throw std::invalid_argument("config: out is required");
  }
  for (const auto& mechanism : config.mechanisms) {
    if (mechanism != "rvns" && mechanism != "laplace" &&
        mechanism != "gaussian") {
      throw std::invalid_argument("config: unknown mechanism " + mechanism);
    }
  }
  parse_tie_rule(config.tie_rule);  // validate eagerly
  config.have_range = true;
  return config;
}

// Per-job seeds so repetitions and sweep points are independent streams and
// any single point can be replayed with the standalone subcommands:
//   rep stream    s_rep     = mix_seed(seed, rep)
//   data          data_seed = mix_seed(s_rep, 0)
//   job           job_seed  = mix_seed(s_rep, 1000 + mechanism_index*100 + param_index)
//   perturb       mix_seed(job_seed, 1)
//   evaluate      mix_seed(job_seed, 2)
struct JobSeeds {
  std::uint64_t perturb;
  std::uint64_t evaluate;
};

JobSeeds job_seeds(std::uint64_t base, int rep, std::size_t mechanism_index,
                   std::size_t param_index) {
  const std::uint64_t s_rep =
      rvns::mix_seed(base, static_cast<std::uint64_t>(rep));
  const std::uint64_t job = rvns::mix_seed(
      s_rep, 1000 + 100 * static_cast<std::uint64_t>(mechanism_index) +
                 static_cast<std::uint64_t>(param_index));
  return {rvns::mix_seed(job, 1), rvns::mix_seed(job, 2)};
}

// One averaged output row of the tradeoff table.
struct SweepRow {
  std::string mechanism;
  double param = 0.0;
  double privacy = 0.0;
  EvaluationRow evaluation;
  double runtime_s = 0.0;
};

void accumulate(SweepRow& total, double privacy, const EvaluationRow& row,
                double seconds) {
  total.privacy += privacy;
  total.evaluation.wasserstein += row.wasserstein;
  total.evaluation.errors.mean += row.errors.mean;
  total.evaluation.errors.std_dev += row.errors.std_dev;
  total.evaluation.errors.mode += row.errors.mode;
  total.evaluation.errors.median += row.errors.median;
  total.evaluation.errors.skewness += row.errors.skewness;
  total.evaluation.errors.kurtosis += row.errors.kurtosis;
  total.runtime_s += seconds;
}

void finish_average(SweepRow& total, int reps) {
  const double inv = 1.0 / reps;
  total.privacy *= inv;
  total.evaluation.wasserstein *= inv;
  total.evaluation.errors.mean *= inv;
  total.evaluation.errors.std_dev *= inv;
  total.evaluation.errors.mode *= inv;
  total.evaluation.errors.median *= inv;
  total.evaluation.errors.skewness *= inv;
  total.evaluation.errors.kurtosis *= inv;
  total.runtime_s *= inv;
}

int cmd_experiment(const std::string& config_path) {
  const ExperimentConfig config = load_experiment_config(config_path);
  const rvns::DataRange range{config.a, config.b};
  const rvns::GridPtr grid = rvns::make_uniform_grid(range, config.m);
  const rvns::TieRule tie_rule = parse_tie_rule(config.tie_rule);

  // One dataset per repetition, shared by every mechanism at that
  // repetition so curves are compared on identical data. Synthetic data is
  // redrawn per repetition; a CSV dataset is fixed, only the mechanism
  // randomness varies.
  std::vector<rvns::Dataset> datasets;
  std::vector<rvns::DensityVector> references;
  datasets.reserve(config.reps);
  references.reserve(config.reps);
  for (int rep = 0; rep < config.reps; ++rep) {
    if (config.dataset == "chi2") {
      rvns::Rng rng(rvns::mix_seed(
          rvns::mix_seed(config.seed, static_cast<std::uint64_t>(rep)), 0));
      datasets.push_back(
          rvns::generate_chi_squared(config.df, config.n, range, rng));
    } else {
      datasets.push_back(
          rvns::load_csv(config.csv_path, config.csv_column, range).data);
    }
    references.push_back(
        rvns::kde_at(grid, datasets.back().values, rvns::KdeConfig{}));
  }

  std::vector<SweepRow> rows;
  for (std::size_t mi = 0; mi < config.mechanisms.size(); ++mi) {
    const std::string& mechanism = config.mechanisms[mi];
    const bool is_rvns = mechanism == "rvns";
    const std::vector<double>& sweep =
        is_rvns ? config.d_sweep : config.scale_sweep;
    for (std::size_t pi = 0; pi < sweep.size(); ++pi) {
      SweepRow row;
      row.mechanism = mechanism;
      row.param = sweep[pi];
      for (int rep = 0; rep < config.reps; ++rep) {
        const JobSeeds seeds = job_seeds(config.seed, rep, mi, pi);
        const rvns::Dataset& data = datasets[static_cast<std::size_t>(rep)];
        const auto start = std::chrono::steady_clock::now();
        double privacy = 0.0;
        EvaluationRow evaluation;
        if (is_rvns) {
          const rvns::PerturbationConfig pconfig{range, sweep[pi], config.k};
          rvns::Rng perturb_rng(seeds.perturb);
          const auto reports =
              rvns::perturb_dataset(data, pconfig, perturb_rng);
          const auto recon =
              rvns::reconstruct(reports, grid, pconfig, rvns::KdeConfig{},
                                rvns::ReconstructionConfig{});
          const auto attack = rvns::run_attack(
              reports, pconfig, config.grid_resolution, tie_rule);
          privacy = rvns::privacy_distance(data, attack.inferred);
          evaluation =
              evaluate_density(data, recon.density,
                               references[static_cast<std::size_t>(rep)],
                               seeds.evaluate);
        } else {
          rvns::NoiseConfig nconfig;
          nconfig.mechanism = mechanism == "laplace"
                                  ? rvns::NoiseConfig::Mechanism::laplace
                                  : rvns::NoiseConfig::Mechanism::gaussian;
          nconfig.scale = sweep[pi];
          rvns::Rng noise_rng(seeds.perturb);
          const rvns::Dataset noisy =
              rvns::perturb_noise_dataset(data, nconfig, noise_rng);
          privacy = rvns::baseline_privacy(data, noisy);
          const rvns::DensityVector estimated =
              rvns::kde_at(grid, noisy.values, rvns::KdeConfig{});
          evaluation =
              evaluate_density(data, estimated,
                               references[static_cast<std::size_t>(rep)],
                               seeds.evaluate);
        }
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        accumulate(row, privacy, evaluation, elapsed.count());
      }
      finish_average(row, config.reps);
      rows.push_back(row);
    }
  }

  std::ofstream out(config.out);
  if (!out) throw rvns::io_error("cannot write " + config.out);
  out << "mechanism,param,privacy_distance,wasserstein,mean_err,std_err,"
         "mode_err,median_err,skew_err,kurt_err,runtime_s\n";
  for (const auto& row : rows) {
    // Runtime depends on the machine, so it breaks byte-identical output;
    // report_runtime=false pins the column to zero for regression use.
    const double runtime = config.report_runtime ? row.runtime_s : 0.0;
    out << row.mechanism << ',' << rvns::format_double(row.param) << ','
        << rvns::format_double(row.privacy) << ','
        << rvns::format_double(row.evaluation.wasserstein) << ','
        << rvns::format_double(row.evaluation.errors.mean) << ','
        << rvns::format_double(row.evaluation.errors.std_dev) << ','
        << rvns::format_double(row.evaluation.errors.mode) << ','
        << rvns::format_double(row.evaluation.errors.median) << ','
        << rvns::format_double(row.evaluation.errors.skewness) << ','
        << rvns::format_double(row.evaluation.errors.kurtosis) << ','
        << rvns::format_double(runtime) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-value negative survey pipeline"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand(
      "generate", "Draw a truncated chi-squared dataset and save it as CSV");
  int gen_df = 2;
  std::size_t gen_n = 0;
  double gen_a = 0.0;
  double gen_b = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate->add_option("--df", gen_df, "Degrees of freedom")->required();
  generate->add_option("--n", gen_n, "Sample count")->required();
  generate->add_option("--a", gen_a, "Domain lower bound")->required();
  generate->add_option("--b", gen_b, "Domain upper bound")->required();
  generate->add_option("--seed", gen_seed, "RNG seed")->required();
  generate->add_option("--out", gen_out, "Output CSV path")->required();

  // perturb
  auto* perturb = app.add_subcommand(
      "perturb", "Apply the negative-survey perturbation to a dataset");
  std::string per_in;
  std::string per_column = "value";
  double per_a = 0.0;
  double per_b = 0.0;
  double per_d = 0.0;
  int per_k = 1;
  std::uint64_t per_seed = 0;
  std::string per_out;
  bool per_diagnostic = false;
  perturb->add_option("--in", per_in, "Input dataset CSV")->required();
  perturb->add_option("--column", per_column, "Value column name");
  perturb->add_option("--a", per_a, "Domain lower bound")->required();
  perturb->add_option("--b", per_b, "Domain upper bound")->required();
  perturb->add_option("--d", per_d, "Prohibited band width")->required();
  perturb->add_option("--k", per_k, "Samples per user")->required();
  perturb->add_option("--seed", per_seed, "RNG seed")->required();
  perturb->add_option("--out", per_out, "Output reports CSV")->required();
  perturb->add_flag("--diagnostic", per_diagnostic,
                    "Append the drawn band offset column");

  // reconstruct
  auto* reconstruct = app.add_subcommand(
      "reconstruct", "Estimate the original density from perturbed reports");
  std::string rec_reports;
  double rec_a = 0.0;
  double rec_b = 0.0;
  double rec_d = 0.0;
  int rec_k = 1;
  int rec_m = 100;
  std::optional<double> rec_bandwidth;
  rvns::ReconstructionConfig rec_config;
  std::string rec_out;
  reconstruct->add_option("--reports", rec_reports, "Reports CSV")->required();
  reconstruct->add_option("--a", rec_a, "Domain lower bound")->required();
  reconstruct->add_option("--b", rec_b, "Domain upper bound")->required();
  reconstruct->add_option("--d", rec_d, "Prohibited band width")->required();
  reconstruct->add_option("--k", rec_k, "Samples per user (metadata only)");
  reconstruct->add_option("--m", rec_m, "Interest grid size")->required();
  reconstruct->add_option("--bandwidth", rec_bandwidth,
                          "KDE bandwidth (default: Silverman)");
  reconstruct->add_option("--lambda1", rec_config.lambda1, "L1 weight");
  reconstruct->add_option("--lambda2", rec_config.lambda2, "L2 weight");
  reconstruct->add_option("--max-iterations", rec_config.max_iterations,
                          "Solver iteration budget");
  reconstruct->add_option("--objective-tolerance",
                          rec_config.objective_tolerance,
                          "Stationarity tolerance");
  reconstruct->add_option("--constraint-tolerance",
                          rec_config.constraint_tolerance,
                          "Area constraint tolerance");
  reconstruct->add_option("--out", rec_out, "Output density JSON")->required();

  // attack
  auto* attack = app.add_subcommand(
      "attack", "Run the maximum-likelihood inference attack on reports");
  std::string att_reports;
  double att_a = 0.0;
  double att_b = 0.0;
  double att_d = 0.0;
  int att_k = 1;
  int att_resolution = 1000;
  std::string att_tie = "smallest";
  std::string att_out;
  std::string att_original;
  attack->add_option("--reports", att_reports, "Reports CSV")->required();
  attack->add_option("--a", att_a, "Domain lower bound")->required();
  attack->add_option("--b", att_b, "Domain upper bound")->required();
  attack->add_option("--d", att_d, "Prohibited band width")->required();
  attack->add_option("--k", att_k, "Samples per user (metadata only)");
  attack->add_option("--grid-resolution", att_resolution,
                     "Coarse search grid size");
  attack->add_option("--tie-rule", att_tie,
                     "Plateau tie rule: smallest or centroid");
  attack->add_option("--out", att_out, "Output attack CSV")->required();
  attack->add_option("--original", att_original,
                     "Original dataset CSV; prints the privacy distance");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score an estimated density against the original dataset");
  std::string eva_original;
  std::string eva_column = "value";
  std::string eva_density;
  std::uint64_t eva_seed = 0;
  std::string eva_out;
  evaluate->add_option("--original", eva_original, "Original dataset CSV")
      ->required();
  evaluate->add_option("--column", eva_column, "Value column name");
  evaluate->add_option("--density", eva_density, "Estimated density JSON")
      ->required();
  evaluate->add_option("--seed", eva_seed, "Resampling RNG seed");
  evaluate->add_option("--out", eva_out, "Output metrics JSON")->required();

  // experiment
  auto* experiment = app.add_subcommand(
      "experiment", "Run a privacy/utility sweep from a config file");
  std::string exp_config;
  experiment->add_option("--config", exp_config, "key=value config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (generate->parsed()) {
      rvns::Rng rng(gen_seed);
      const rvns::Dataset data =
          rvns::generate_chi_squared(gen_df, gen_n, {gen_a, gen_b}, rng);
      rvns::save_dataset(gen_out, data);
    } else if (perturb->parsed()) {
      const rvns::DataRange range{per_a, per_b};
      const rvns::Dataset data =
          rvns::load_csv(per_in, per_column, range).data;
      const rvns::PerturbationConfig config{range, per_d, per_k};
      rvns::Rng rng(per_seed);
      const auto reports = rvns::perturb_dataset(data, config, rng);
      rvns::save_reports(per_out, reports, per_diagnostic);
    } else if (reconstruct->parsed()) {
      const auto reports = rvns::load_reports(rec_reports);
      const rvns::DataRange range{rec_a, rec_b};
      const rvns::PerturbationConfig pconfig{range, rec_d, rec_k};
      const rvns::GridPtr grid = rvns::make_uniform_grid(range, rec_m);
      rvns::KdeConfig kconfig;
      kconfig.bandwidth = rec_bandwidth;
      const auto result =
          rvns::reconstruct(reports, grid, pconfig, kconfig, rec_config);
      rvns::save_reconstruction_json(rec_out, result);
      if (!result.converged) {
        std::cerr << "warning: solver stopped after " << result.iterations
                  << " iterations without meeting tolerances\n";
      }
    } else if (attack->parsed()) {
      const rvns::TieRule tie_rule = parse_tie_rule(att_tie);
      const auto reports = rvns::load_reports(att_reports);
      const rvns::DataRange range{att_a, att_b};
      const rvns::PerturbationConfig config{range, att_d, att_k};
      const auto result =
          rvns::run_attack(reports, config, att_resolution, tie_rule);
      rvns::save_attack_csv(att_out, result);
      if (!att_original.empty()) {
        const rvns::Dataset original =
            rvns::load_csv(att_original, "value", range).data;
        std::cout << "privacy_distance="
                  << rvns::format_double(
                         rvns::privacy_distance(original, result.inferred))
                  << '\n';
      }
    } else if (evaluate->parsed()) {
      const rvns::DensityVector estimated =
          rvns::load_density_json(eva_density);
      const rvns::DataRange range = density_range(estimated);
      const rvns::Dataset original =
          rvns::load_csv(eva_original, eva_column, range).data;
      const rvns::DensityVector reference =
          rvns::kde_at(estimated.grid, original.values, rvns::KdeConfig{});
      write_metrics_json(
          eva_out, evaluate_density(original, estimated, reference, eva_seed));
    } else if (experiment->parsed()) {
      return cmd_experiment(exp_config);
    }
  } catch (const rvns::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const rvns::empty_dataset_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

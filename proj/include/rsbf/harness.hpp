#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rsbf/channel.hpp"
#include "rsbf/realify.hpp"
#include "rsbf/sketch.hpp"

namespace rsbf {

enum class Scenario { sampling_compare, snr_sweep, convergence, sumrate_convergence, bench };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

struct ExperimentConfig {
  Scenario scenario = Scenario::sampling_compare;
  ChannelConfig channel;
  std::vector<Eigen::Index> sketch_sizes{64, 128, 256, 512};
  std::vector<SamplingScheme> schemes{SamplingScheme::uniform};
  int iterations = 10;
  std::vector<double> snr_grid_db{100.0, 110.0, 120.0, 130.0, 140.0};
  int trials = 50;
  std::uint64_t master_seed = 1;
  std::string output_path;

  // Replace the random sketch with S = I_2M.
  bool identity_sketch = false;
  LeverageNormalization leverage_normalization = LeverageNormalization::rank;
  // When set, ridge leverage scores use lambda = ||Q - Q_ell||_F^2 / ell
  // instead of the regression parameter sigma^2 / gamma.
  std::optional<int> ridge_rank;
  std::optional<double> residual_tolerance;

  // bench only: antenna counts to time (defaults to channel.num_antennas) and
  // timed repetitions per point.
  std::vector<int> bench_antennas;
  int bench_repeats = 20;

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

// Rows of strings with a fixed header; floats are written with 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  void add_row(std::vector<std::string> row);

  // Index of a column; throws std::out_of_range.
  std::size_t column(std::string_view name) const;
  // Rows whose `key` column equals `value`.
  std::vector<const std::vector<std::string>*> select(std::string_view key, std::string_view value) const;

  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

// One replicated problem instance. The beamformer scale beta is fixed so the
// exact solution meets the power budget with equality; sketched iterates share
// the same right-hand side.
struct TrialProblem {
  std::uint64_t seed = 0;
  ChannelMatrix channel;
  double sigma2 = 0.0;
  double transmit_power = 0.0;
  RealEmbedding emb;
  Eigen::MatrixXd exact;      // M*
  Eigen::MatrixXcd wstar;     // lift(M*)
  SpectralProfile profile;
};

// Channel drawn from stream 0 of `trial_seed`; lambda = sigma^2 / gamma with gamma = P / K.
TrialProblem make_trial(const ChannelConfig& channel, double transmit_power, std::uint64_t trial_seed);

SamplingProbabilities trial_probabilities(const TrialProblem& trial, SamplingScheme scheme,
                                          const ExperimentConfig& cfg);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Least-squares fit of log10(y) against x over points with y > floor.
LinearFit fit_log10(const std::vector<double>& x, const std::vector<double>& y, double floor = 1e-12);

double median(std::vector<double> v);
double mean(const std::vector<double>& v);

CsvTable run_sampling_compare(const ExperimentConfig& cfg);
CsvTable run_snr_sweep(const ExperimentConfig& cfg);
CsvTable run_convergence(const ExperimentConfig& cfg);
CsvTable run_sumrate_convergence(const ExperimentConfig& cfg);
CsvTable run_bench(const ExperimentConfig& cfg);

CsvTable run_scenario(const ExperimentConfig& cfg);

// Time columns of the bench scenario; everything else is reproducible.
bool is_timing_column(std::string_view name);

}  // namespace rsbf

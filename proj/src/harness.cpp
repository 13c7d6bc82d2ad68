#include "rsbf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rsbf/metrics.hpp"
#include "rsbf/rzf.hpp"
#include "rsbf/solver.hpp"

namespace rsbf {

namespace {

constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kSketchStreamBase = 1;

std::string str(double v) { return format_double(v); }
std::string str(std::int64_t v) { return std::to_string(v); }
std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }

// Runs `body` and rethrows any failure tagged with the trial seed.
template <typename F>
auto with_seed(std::uint64_t seed, int trial, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    throw std::runtime_error("trial " + std::to_string(trial) + " (seed " + std::to_string(seed) +
                             "): " + e.what());
  }
}

SketchMatrix make_sketch(const TrialProblem& trial, const ExperimentConfig& cfg, SamplingScheme scheme,
                         Eigen::Index L, std::uint64_t stream) {
  if (cfg.identity_sketch) return SketchMatrix::identity(trial.emb.Q.cols());
  CounterRng rng(trial.seed, stream);
  return draw_sketch(trial_probabilities(trial, scheme, cfg), L, rng);
}

struct SweepPoint {
  SamplingScheme scheme;
  Eigen::Index L;
};

std::vector<SweepPoint> scheme_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> pts;
  for (auto s : cfg.schemes)
    for (auto L : cfg.sketch_sizes) pts.push_back({s, L});
  return pts;
}

// Power chosen per trial; the channel is independent of it.
double sweep_power(const ChannelConfig& ch, double snr_db) {
  return ch.noise_power * std::pow(10.0, snr_db / 10.0);
}

// Timed workloads sampled round-robin, so slow drift in machine load hits
// every workload alike. Each sample batches calls to at least kMinSample.
class InterleavedTimer {
 public:
  std::size_t add(std::function<void()> body) {
    jobs_.push_back({std::move(body), 1, {}});
    return jobs_.size() - 1;
  }

  void run(int repeats) {
    for (auto& j : jobs_) calibrate(j);
    for (int r = 0; r < repeats; ++r)
      for (auto& j : jobs_) j.samples.push_back(sample(j));
  }

  double median_seconds(std::size_t id) const { return median(jobs_[id].samples); }

 private:
  using clock = std::chrono::steady_clock;
  static constexpr double kMinSample = 5e-3;

  struct Job {
    std::function<void()> body;
    int batch;
    std::vector<double> samples;
  };

  static double elapsed(Job& j) {
    const auto t0 = clock::now();
    for (int i = 0; i < j.batch; ++i) j.body();
    return std::chrono::duration<double>(clock::now() - t0).count();
  }
  static void calibrate(Job& j) {
    j.body();  // warmup
    while (elapsed(j) < kMinSample && j.batch < (1 << 20)) j.batch *= 2;
  }
  static double sample(Job& j) { return elapsed(j) / j.batch; }

  std::vector<Job> jobs_;
};

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::sampling_compare: return "sampling_compare";
    case Scenario::snr_sweep: return "snr_sweep";
    case Scenario::convergence: return "convergence";
    case Scenario::sumrate_convergence: return "sumrate_convergence";
    case Scenario::bench: return "bench";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (auto s : {Scenario::sampling_compare, Scenario::snr_sweep, Scenario::convergence,
                 Scenario::sumrate_convergence, Scenario::bench}) {
    if (name == to_string(s)) return s;
  }
  // CLI spelling
  std::string alt(name);
  std::replace(alt.begin(), alt.end(), '-', '_');
  if (alt != name) return parse_scenario(alt);
  throw std::invalid_argument("unknown scenario: " + std::string(name));
}

void ExperimentConfig::validate() const {
  channel.validate();
  if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  if (iterations < 1) throw std::invalid_argument("ExperimentConfig: iterations must be >= 1");
  if ((scenario == Scenario::convergence || scenario == Scenario::sumrate_convergence) && iterations < 2)
    throw std::invalid_argument("ExperimentConfig: convergence scenarios need iterations >= 2");
  if (schemes.empty()) throw std::invalid_argument("ExperimentConfig: schemes must be nonempty");
  if (sketch_sizes.empty()) throw std::invalid_argument("ExperimentConfig: sketch_sizes must be nonempty");
  const Eigen::Index two_m = 2 * static_cast<Eigen::Index>(channel.num_antennas);
  for (auto L : sketch_sizes) {
    if (L < 1) throw std::invalid_argument("ExperimentConfig: sketch sizes must be >= 1");
    if (L > two_m) throw std::invalid_argument("ExperimentConfig: sketch size " + std::to_string(L) +
                                               " exceeds 2M = " + std::to_string(two_m));
  }
  if (scenario == Scenario::snr_sweep && snr_grid_db.empty())
    throw std::invalid_argument("ExperimentConfig: snr_grid_db must be nonempty");
  if (ridge_rank && *ridge_rank < 1) throw std::invalid_argument("ExperimentConfig: ridge_rank must be >= 1");
  if (residual_tolerance && !(*residual_tolerance > 0.0))
    throw std::invalid_argument("ExperimentConfig: residual_tolerance must be positive");
  if (bench_repeats < 1) throw std::invalid_argument("ExperimentConfig: bench_repeats must be >= 1");
  for (int m : bench_antennas) {
    if (m < channel.num_users) throw std::invalid_argument("ExperimentConfig: bench antenna count below K");
    for (auto L : sketch_sizes)
      if (L > 2 * static_cast<Eigen::Index>(m))
        throw std::invalid_argument("ExperimentConfig: sketch size exceeds 2M for a bench antenna count");
  }
}

// ---------------------------------------------------------------- CSV

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CsvTable: row width does not match header");
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const {
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) throw std::out_of_range("CsvTable: no column " + std::string(name));
  return static_cast<std::size_t>(it - header_.begin());
}

std::vector<const std::vector<std::string>*> CsvTable::select(std::string_view key,
                                                              std::string_view value) const {
  const auto c = column(key);
  std::vector<const std::vector<std::string>*> out;
  for (const auto& r : rows_)
    if (r[c] == value) out.push_back(&r);
  return out;
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  auto emit = [&os](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      os << r[i];
    }
    os << '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return os.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_string();
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_timing_column(std::string_view name) { return name.ends_with("_s") || name == "speedup"; }

// ---------------------------------------------------------------- stats

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

LinearFit fit_log10(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_log10: length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > floor && std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(std::log10(y[i]));
    }
  }
  LinearFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) return fit;
  const double mx = mean(xs), my = mean(ys);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

// ---------------------------------------------------------------- trials

TrialProblem make_trial(const ChannelConfig& channel, double transmit_power, std::uint64_t trial_seed) {
  TrialProblem t;
  t.seed = trial_seed;
  CounterRng rng(trial_seed, kChannelStream);
  t.channel = generate_channel(channel, rng);
  t.sigma2 = channel.noise_power;
  t.transmit_power = transmit_power;

  const double gamma = regularizer(transmit_power, channel.num_users);
  const double lambda = t.sigma2 / gamma;
  t.emb = embed(t.channel.entries, lambda, 1.0);
  const Eigen::MatrixXd unit = solve_exact_real(t.emb);
  // The solution is linear in Lambda, so fixing beta after one solve is exact.
  const double beta = power_scale(lift(unit), transmit_power);
  t.emb.beta = beta;
  t.emb.Lambda *= beta;
  t.exact = beta * unit;
  t.wstar = lift(t.exact);
  t.profile = spectral_profile(t.emb.Q);
  return t;
}

SamplingProbabilities trial_probabilities(const TrialProblem& trial, SamplingScheme scheme,
                                          const ExperimentConfig& cfg) {
  switch (scheme) {
    case SamplingScheme::uniform: return uniform_probs(trial.emb.Q.cols());
    case SamplingScheme::leverage: return leverage_probs(trial.profile, cfg.leverage_normalization);
    case SamplingScheme::ridge_leverage: {
      const double lambda = cfg.ridge_rank ? ridge_param_from_rank(trial.profile, *cfg.ridge_rank)
                                           : trial.emb.lambda;
      return ridge_leverage_probs(trial.profile, lambda);
    }
  }
  throw std::invalid_argument("unknown sampling scheme");
}

// ---------------------------------------------------------------- scenarios

CsvTable run_sampling_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto points = scheme_points(cfg);
  const std::size_t n_pts = points.size();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);
  std::vector<double> rel(n_pts * n_trials), rate_err(n_pts * n_trials), quality(n_pts * n_trials);
  std::vector<std::uint64_t> seeds(n_trials);

  CsvTable table({"row_type", "scheme", "L", "t", "trial", "seed", "rel_error", "sumrate_error",
                  "sketch_quality", "mean_rel_error", "median_rel_error", "mean_sumrate_error",
                  "median_sumrate_error"});

  for (std::size_t r = 0; r < n_trials; ++r) {
    seeds[r] = derive_seed(cfg.master_seed, r);
    with_seed(seeds[r], static_cast<int>(r), [&] {
      const TrialProblem trial = make_trial(cfg.channel, cfg.channel.transmit_power, seeds[r]);
      const double wnorm = trial.wstar.norm();
      const double r_exact = sum_rate(trial.channel.entries, trial.wstar, trial.sigma2).sum_rate;
      IterateOptions opts;
      opts.keep_iterates = false;
      opts.residual_tolerance = cfg.residual_tolerance;
      for (std::size_t p = 0; p < n_pts; ++p) {
        const SketchMatrix S = make_sketch(trial, cfg, points[p].scheme, points[p].L, kSketchStreamBase + p);
        const SolveTrace tr = iterate(trial.emb, S, cfg.iterations, opts);
        const Eigen::MatrixXcd w = tr.beamformer();
        const auto idx = p * n_trials + r;
        rel[idx] = solution_error(w, trial.wstar) / wnorm;
        rate_err[idx] = std::abs(sum_rate(trial.channel.entries, w, trial.sigma2).sum_rate - r_exact);
        quality[idx] = sketch_quality(trial.profile, S);
        table.add_row({"trial", std::string(to_string(points[p].scheme)),
                       str(static_cast<std::int64_t>(cfg.identity_sketch ? S.cols() : points[p].L)),
                       str(cfg.iterations), str(static_cast<int>(r)), str(seeds[r]), str(rel[idx]),
                       str(rate_err[idx]), str(quality[idx]), "", "", "", ""});
      }
      return 0;
    });
  }
  for (std::size_t p = 0; p < n_pts; ++p) {
    std::vector<double> e(rel.begin() + p * n_trials, rel.begin() + (p + 1) * n_trials);
    std::vector<double> s(rate_err.begin() + p * n_trials, rate_err.begin() + (p + 1) * n_trials);
    table.add_row({"summary", std::string(to_string(points[p].scheme)),
                   str(static_cast<std::int64_t>(cfg.identity_sketch ? 2 * cfg.channel.num_antennas : points[p].L)),
                   str(cfg.iterations), "", str(cfg.master_seed), "", "", "", str(mean(e)), str(median(e)),
                   str(mean(s)), str(median(s))});
  }
  return table;
}

CsvTable run_snr_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const SamplingScheme scheme = cfg.schemes.front();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t n_snr = cfg.snr_grid_db.size();
  const std::size_t n_l = cfg.sketch_sizes.size();
  std::vector<double> sketched(n_snr * n_l * n_trials), exact(n_snr * n_l * n_trials);

  CsvTable table({"row_type", "snr_db", "snr_convention", "scheme", "L", "t", "trial", "seed",
                  "rate_sketch_per_user", "rate_exact_per_user", "mean_rate_sketch_per_user",
                  "median_rate_sketch_per_user", "mean_rate_exact_per_user", "median_rate_exact_per_user"});

  const double k = cfg.channel.num_users;
  for (std::size_t r = 0; r < n_trials; ++r) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, r);
    with_seed(seed, static_cast<int>(r), [&] {
      for (std::size_t si = 0; si < n_snr; ++si) {
        const double power = sweep_power(cfg.channel, cfg.snr_grid_db[si]);
        const TrialProblem trial = make_trial(cfg.channel, power, seed);
        const double r_exact = sum_rate(trial.channel.entries, trial.wstar, trial.sigma2).sum_rate / k;
        IterateOptions opts;
        opts.keep_iterates = false;
        opts.residual_tolerance = cfg.residual_tolerance;
        for (std::size_t li = 0; li < n_l; ++li) {
          // Same sketch stream for every SNR so only the power changes along the sweep.
          const SketchMatrix S = make_sketch(trial, cfg, scheme, cfg.sketch_sizes[li], kSketchStreamBase + li);
          const SolveTrace tr = iterate(trial.emb, S, cfg.iterations, opts);
          const Eigen::MatrixXcd w = power_normalize(tr.beamformer(), power);
          const double r_sk = sum_rate(trial.channel.entries, w, trial.sigma2).sum_rate / k;
          const auto idx = (si * n_l + li) * n_trials + r;
          sketched[idx] = r_sk;
          exact[idx] = r_exact;
          table.add_row({"trial", str(cfg.snr_grid_db[si]), "P/sigma2", std::string(to_string(scheme)),
                         str(static_cast<std::int64_t>(cfg.sketch_sizes[li])), str(cfg.iterations),
                         str(static_cast<int>(r)), str(seed), str(r_sk), str(r_exact), "", "", "", ""});
        }
      }
      return 0;
    });
  }
  for (std::size_t si = 0; si < n_snr; ++si) {
    for (std::size_t li = 0; li < n_l; ++li) {
      const auto base = (si * n_l + li) * n_trials;
      std::vector<double> a(sketched.begin() + base, sketched.begin() + base + n_trials);
      std::vector<double> b(exact.begin() + base, exact.begin() + base + n_trials);
      table.add_row({"summary", str(cfg.snr_grid_db[si]), "P/sigma2", std::string(to_string(scheme)),
                     str(static_cast<std::int64_t>(cfg.sketch_sizes[li])), str(cfg.iterations), "",
                     str(cfg.master_seed), "", "", str(mean(a)), str(median(a)), str(mean(b)), str(median(b))});
    }
  }
  return table;
}

namespace {

// Per-iteration measurements for one (trial, sweep point).
struct ConvergenceRun {
  std::vector<double> abs_error, rel_error, sumrate_error;
  BoundReport bounds;
};

ConvergenceRun convergence_run(const TrialProblem& trial, const ExperimentConfig& cfg, SamplingScheme scheme,
                               Eigen::Index L, std::uint64_t stream) {
  const SketchMatrix S = make_sketch(trial, cfg, scheme, L, stream);
  IterateOptions opts;
  opts.exact = trial.exact;
  const SolveTrace tr = iterate(trial.emb, S, cfg.iterations, opts);

  ConvergenceRun run;
  const double wnorm = trial.wstar.norm();
  const double r_exact = sum_rate(trial.channel.entries, trial.wstar, trial.sigma2).sum_rate;
  for (const auto& rec : tr.iterations) {
    run.abs_error.push_back(*rec.error);
    run.rel_error.push_back(*rec.error / wnorm);
    const double r_hat = sum_rate(trial.channel.entries, lift(rec.partial_sum), trial.sigma2).sum_rate;
    run.sumrate_error.push_back(std::abs(r_hat - r_exact));
  }
  run.bounds = bound_report(trial.channel.entries, trial.wstar, trial.sigma2, trial.emb, trial.profile, S,
                            cfg.iterations);
  return run;
}

CsvTable run_convergence_impl(const ExperimentConfig& cfg, bool sumrate) {
  cfg.validate();
  const auto points = scheme_points(cfg);
  const std::size_t n_pts = points.size();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);
  std::vector<ConvergenceRun> runs(n_pts * n_trials);
  std::vector<std::uint64_t> seeds(n_trials);

  std::vector<std::string> header{"row_type", "scheme", "L", "iteration", "trial", "seed"};
  if (sumrate) {
    for (const char* c : {"sumrate_error", "epsilon", "rate_error_bound", "epsilon_ridge", "rate_ridge_bound",
                          "rate_ridge_literal_bound", "C", "eta", "eta_literal", "mean_sumrate_error",
                          "median_sumrate_error", "median_rate_bound", "qualifying_trials",
                          "bound_violations"})
      header.emplace_back(c);
  } else {
    for (const char* c : {"abs_error", "rel_error", "sumrate_error", "epsilon", "error_bound", "epsilon_ridge",
                          "ridge_error_bound", "xi", "mean_rel_error", "median_rel_error", "median_abs_error",
                          "median_sumrate_error", "median_error_bound", "qualifying_trials", "bound_violations"})
      header.emplace_back(c);
  }
  CsvTable table(std::move(header));

  for (std::size_t r = 0; r < n_trials; ++r) {
    seeds[r] = derive_seed(cfg.master_seed, r);
    with_seed(seeds[r], static_cast<int>(r), [&] {
      const TrialProblem trial = make_trial(cfg.channel, cfg.channel.transmit_power, seeds[r]);
      for (std::size_t p = 0; p < n_pts; ++p) {
        ConvergenceRun& run = runs[p * n_trials + r];
        run = convergence_run(trial, cfg, points[p].scheme, points[p].L, kSketchStreamBase + p);
        const BoundReport& b = run.bounds;
        for (std::size_t j = 0; j < run.abs_error.size(); ++j) {
          std::vector<std::string> row{"trial", std::string(to_string(points[p].scheme)),
                                       str(static_cast<std::int64_t>(points[p].L)), str(static_cast<int>(j + 1)),
                                       str(static_cast<int>(r)), str(seeds[r])};
          if (sumrate) {
            for (auto v : {run.sumrate_error[j], b.epsilon_effective, b.rate_rhs[j + 1],
                           b.epsilon_ridge_effective, b.rate_ridge_rhs[j + 1],
                           b.rate_ridge_literal_rhs[j + 1], b.C, b.eta, b.eta_literal})
              row.push_back(str(v));
            row.insert(row.end(), 5, "");
          } else {
            for (auto v : {run.abs_error[j], run.rel_error[j], run.sumrate_error[j], b.epsilon_effective,
                           b.error_rhs[j + 1], b.epsilon_ridge_effective, b.ridge_error_rhs[j + 1]})
              row.push_back(str(v));
            row.push_back(str(static_cast<std::int64_t>(b.xi)));
            row.insert(row.end(), 7, "");
          }
          table.add_row(std::move(row));
        }
      }
      return 0;
    });
  }

  for (std::size_t p = 0; p < n_pts; ++p) {
    for (int j = 0; j < cfg.iterations; ++j) {
      std::vector<double> abs_e, rel_e, sr_e, bound;
      int qualifying = 0, violations = 0;
      for (std::size_t r = 0; r < n_trials; ++r) {
        const ConvergenceRun& run = runs[p * n_trials + r];
        if (static_cast<std::size_t>(j) >= run.abs_error.size()) continue;
        abs_e.push_back(run.abs_error[j]);
        rel_e.push_back(run.rel_error[j]);
        sr_e.push_back(run.sumrate_error[j]);
        const double rhs = sumrate ? run.bounds.rate_rhs[j + 1] : run.bounds.error_rhs[j + 1];
        bound.push_back(rhs);
        if (run.bounds.epsilon_effective < 1.0) {
          ++qualifying;
          const double lhs = sumrate ? run.sumrate_error[j] : run.abs_error[j];
          if (lhs > rhs) ++violations;
        }
      }
      std::vector<std::string> row{"summary", std::string(to_string(points[p].scheme)),
                                   str(static_cast<std::int64_t>(points[p].L)), str(j + 1), "",
                                   str(cfg.master_seed)};
      if (sumrate) {
        row.insert(row.end(), 9, "");
        for (auto v : {mean(sr_e), median(sr_e), median(bound)}) row.push_back(str(v));
      } else {
        row.insert(row.end(), 8, "");
        for (auto v : {mean(rel_e), median(rel_e), median(abs_e), median(sr_e), median(bound)})
          row.push_back(str(v));
      }
      row.push_back(str(qualifying));
      row.push_back(str(violations));
      table.add_row(std::move(row));
    }
  }
  return table;
}

}  // namespace

CsvTable run_convergence(const ExperimentConfig& cfg) { return run_convergence_impl(cfg, false); }

CsvTable run_sumrate_convergence(const ExperimentConfig& cfg) { return run_convergence_impl(cfg, true); }

CsvTable run_bench(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<int> antennas = cfg.bench_antennas;
  if (antennas.empty()) antennas.push_back(cfg.channel.num_antennas);
  const SamplingScheme scheme = cfg.schemes.front();

  // Everything the timed closures touch must outlive the timer run.
  struct Point {
    int antennas;
    std::uint64_t seed;
    Eigen::Index L;
    std::size_t exact, product, factor, core, iter;
  };
  struct Instance {
    TrialProblem trial;
    std::vector<SketchMatrix> sketches;
    std::vector<Eigen::MatrixXd> products;
    std::vector<Preconditioner> preconds;
  };
  std::vector<std::unique_ptr<Instance>> instances;
  std::vector<Point> points;
  InterleavedTimer timer;
  IterateOptions opts;
  opts.keep_iterates = false;
  const int t = cfg.iterations;

  for (std::size_t ai = 0; ai < antennas.size(); ++ai) {
    ChannelConfig ch = cfg.channel;
    ch.num_antennas = antennas[ai];
    const std::uint64_t seed = derive_seed(cfg.master_seed, ai);
    with_seed(seed, static_cast<int>(ai), [&] {
      auto inst = std::make_unique<Instance>();
      inst->trial = make_trial(ch, ch.transmit_power, seed);
      const TrialProblem& trial = inst->trial;
      for (std::size_t li = 0; li < cfg.sketch_sizes.size(); ++li) {
        inst->sketches.push_back(make_sketch(trial, cfg, scheme, cfg.sketch_sizes[li], kSketchStreamBase + li));
        inst->products.push_back(inst->sketches.back().right_multiply(trial.emb.Q));
        inst->preconds.push_back(Preconditioner::from_sketch(inst->products.back(), trial.emb.lambda));
      }
      const Instance* in = inst.get();
      const std::size_t exact_id = timer.add([in] {
        volatile double sink = solve_exact_real(in->trial.emb)(0, 0);
        (void)sink;
      });
      for (std::size_t li = 0; li < cfg.sketch_sizes.size(); ++li) {
        Point pt{antennas[ai], seed, cfg.sketch_sizes[li], exact_id, 0, 0, 0, 0};
        pt.product = timer.add([in, li] {
          volatile double sink = in->sketches[li].right_multiply(in->trial.emb.Q)(0, 0);
          (void)sink;
        });
        pt.factor = timer.add([in, li] {
          volatile double sink = Preconditioner::from_sketch(in->products[li], in->trial.emb.lambda).spectrum()(0);
          (void)sink;
        });
        // Everything that does not touch Q: factorization plus t preconditioner solves.
        pt.core = timer.add([in, li, t] {
          const Preconditioner p = Preconditioner::from_sketch(in->products[li], in->trial.emb.lambda);
          Eigen::MatrixXd y = in->trial.emb.Lambda;
          for (int j = 0; j < t; ++j) y = p.apply_inverse(y);
          volatile double sink = y(0, 0);
          (void)sink;
        });
        pt.iter = timer.add([in, li, t, opts] {
          volatile double sink = iterate(in->trial.emb, in->preconds[li], t, opts).solution(0, 0);
          (void)sink;
        });
        points.push_back(pt);
      }
      instances.push_back(std::move(inst));
      return 0;
    });
  }

  timer.run(cfg.bench_repeats);

  CsvTable table({"M", "K", "L", "t", "scheme", "repeats", "seed", "exact_solve_s", "sketch_product_s",
                  "factorize_s", "core_s", "iterate_s", "sketch_total_s", "speedup"});
  for (const Point& pt : points) {
    const double t_exact = timer.median_seconds(pt.exact);
    const double t_product = timer.median_seconds(pt.product);
    const double t_factor = timer.median_seconds(pt.factor);
    const double t_total = t_product + t_factor + timer.median_seconds(pt.iter);
    table.add_row({str(pt.antennas), str(cfg.channel.num_users), str(static_cast<std::int64_t>(pt.L)), str(t),
                   std::string(to_string(scheme)), str(cfg.bench_repeats), str(pt.seed), str(t_exact),
                   str(t_product), str(t_factor), str(timer.median_seconds(pt.core)),
                   str(timer.median_seconds(pt.iter)), str(t_total), str(t_exact / t_total)});
  }
  return table;
}

CsvTable run_scenario(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::sampling_compare: return run_sampling_compare(cfg);
    case Scenario::snr_sweep: return run_snr_sweep(cfg);
    case Scenario::convergence: return run_convergence(cfg);
    case Scenario::sumrate_convergence: return run_sumrate_convergence(cfg);
    case Scenario::bench: return run_bench(cfg);
  }
  throw std::invalid_argument("unknown scenario");
}

}  // namespace rsbf

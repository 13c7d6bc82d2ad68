#include "rsbf/json_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace rsbf {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

// Scalars that may be null (no per-iteration error, etc.) are emitted as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const ChannelConfig& cfg) {
  return Json{{"M", cfg.num_antennas},
              {"K", cfg.num_users},
              {"region_half_width", cfg.region_half_width},
              {"pathloss_ref_db", cfg.pathloss_ref_db},
              {"pathloss_exponent_db_per_decade", cfg.pathloss_exponent_db_per_decade},
              {"shadowing_std_db", cfg.shadowing_std_db},
              {"antenna_gain_db", cfg.antenna_gain_db},
              {"noise_power", cfg.noise_power},
              {"transmit_power", cfg.transmit_power},
              {"seed", cfg.seed}};
}

ChannelConfig channel_config_from_json(const Json& j) {
  reject_unknown(j,
                 {"M", "K", "region_half_width", "pathloss_ref_db", "pathloss_exponent_db_per_decade",
                  "shadowing_std_db", "antenna_gain_db", "noise_power", "transmit_power", "seed"},
                 "ChannelConfig");
  ChannelConfig cfg;
  read_if(j, "M", cfg.num_antennas);
  read_if(j, "K", cfg.num_users);
  read_if(j, "region_half_width", cfg.region_half_width);
  read_if(j, "pathloss_ref_db", cfg.pathloss_ref_db);
  read_if(j, "pathloss_exponent_db_per_decade", cfg.pathloss_exponent_db_per_decade);
  read_if(j, "shadowing_std_db", cfg.shadowing_std_db);
  read_if(j, "antenna_gain_db", cfg.antenna_gain_db);
  read_if(j, "noise_power", cfg.noise_power);
  read_if(j, "transmit_power", cfg.transmit_power);
  read_if(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

Json to_json(const SketchMatrix& S) {
  Json entries = Json::array();
  for (const auto& e : S.columns) entries.push_back(Json::array({e.row, e.value}));
  return Json{{"rows", S.rows}, {"L", S.cols()}, {"entries", std::move(entries)}};
}

SketchMatrix sketch_from_json(const Json& j) {
  reject_unknown(j, {"rows", "L", "entries"}, "SketchMatrix");
  SketchMatrix S;
  S.rows = j.at("rows").get<Eigen::Index>();
  const auto L = j.at("L").get<Eigen::Index>();
  const Json& entries = j.at("entries");
  if (static_cast<Eigen::Index>(entries.size()) != L)
    throw std::invalid_argument("SketchMatrix: entry count does not match L");
  for (const auto& e : entries) {
    SketchEntry entry{e.at(0).get<Eigen::Index>(), e.at(1).get<double>()};
    if (entry.row < 0 || entry.row >= S.rows) throw std::invalid_argument("SketchMatrix: row out of range");
    if (!(entry.value > 0.0) || !std::isfinite(entry.value))
      throw std::invalid_argument("SketchMatrix: values must be finite and positive");
    S.columns.push_back(entry);
  }
  return S;
}

Json to_json(const SolveTrace& trace) {
  Json iters = Json::array();
  for (const auto& rec : trace.iterations) {
    Json it{{"iteration", rec.index}, {"residual_norm", rec.residual_norm}};
    it["error"] = rec.error ? number_or_null(*rec.error) : Json(nullptr);
    iters.push_back(std::move(it));
  }
  return Json{{"iterations", std::move(iters)},
              {"stopped_early", trace.stopped_early},
              {"rows", trace.solution.rows()},
              {"cols", trace.solution.cols()}};
}

Json to_json(const RateReport& r) {
  return Json{{"sinr", std::vector<double>(r.sinr.data(), r.sinr.data() + r.sinr.size())},
              {"rate", std::vector<double>(r.rate.data(), r.rate.data() + r.rate.size())},
              {"sum_rate", r.sum_rate},
              {"sum_rate_bits", r.sum_rate_bits}};
}

Json to_json(const BoundReport& r) {
  return Json{{"epsilon_effective", r.epsilon_effective},
              {"epsilon_ridge_effective", r.epsilon_ridge_effective},
              {"error_rhs", r.error_rhs},
              {"ridge_error_rhs", r.ridge_error_rhs},
              {"rate_rhs", r.rate_rhs},
              {"rate_ridge_rhs", r.rate_ridge_rhs},
              {"rate_ridge_literal_rhs", r.rate_ridge_literal_rhs},
              {"C", r.C},
              {"xi", r.xi},
              {"eta", r.eta},
              {"eta_literal", r.eta_literal}};
}

Json to_json(const ExperimentConfig& cfg) {
  std::vector<std::string> schemes;
  for (auto s : cfg.schemes) schemes.emplace_back(to_string(s));
  Json j{{"scenario", std::string(to_string(cfg.scenario))},
         {"channel", to_json(cfg.channel)},
         {"sketch_sizes", cfg.sketch_sizes},
         {"schemes", schemes},
         {"iterations", cfg.iterations},
         {"snr_grid_db", cfg.snr_grid_db},
         {"trials", cfg.trials},
         {"master_seed", cfg.master_seed},
         {"output_path", cfg.output_path},
         {"identity_sketch", cfg.identity_sketch},
         {"leverage_normalization",
          cfg.leverage_normalization == LeverageNormalization::rank ? "rank" : "antennas"},
         {"bench_antennas", cfg.bench_antennas},
         {"bench_repeats", cfg.bench_repeats}};
  j["ridge_rank"] = cfg.ridge_rank ? Json(*cfg.ridge_rank) : Json(nullptr);
  j["residual_tolerance"] = cfg.residual_tolerance ? Json(*cfg.residual_tolerance) : Json(nullptr);
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  reject_unknown(j,
                 {"scenario", "channel", "sketch_sizes", "schemes", "iterations", "snr_grid_db", "trials",
                  "master_seed", "output_path", "identity_sketch", "leverage_normalization", "ridge_rank",
                  "residual_tolerance", "bench_antennas", "bench_repeats"},
                 "ExperimentConfig");
  ExperimentConfig cfg;
  if (j.contains("scenario")) cfg.scenario = parse_scenario(j.at("scenario").get<std::string>());
  if (j.contains("channel")) cfg.channel = channel_config_from_json(j.at("channel"));
  read_if(j, "sketch_sizes", cfg.sketch_sizes);
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j.at("schemes")) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
  }
  read_if(j, "iterations", cfg.iterations);
  read_if(j, "snr_grid_db", cfg.snr_grid_db);
  read_if(j, "trials", cfg.trials);
  read_if(j, "master_seed", cfg.master_seed);
  read_if(j, "output_path", cfg.output_path);
  read_if(j, "identity_sketch", cfg.identity_sketch);
  if (j.contains("leverage_normalization")) {
    const auto v = j.at("leverage_normalization").get<std::string>();
    if (v == "rank") cfg.leverage_normalization = LeverageNormalization::rank;
    else if (v == "antennas") cfg.leverage_normalization = LeverageNormalization::antennas;
    else throw std::invalid_argument("ExperimentConfig: leverage_normalization must be 'rank' or 'antennas'");
  }
  if (j.contains("ridge_rank") && !j.at("ridge_rank").is_null()) cfg.ridge_rank = j.at("ridge_rank").get<int>();
  if (j.contains("residual_tolerance") && !j.at("residual_tolerance").is_null())
    cfg.residual_tolerance = j.at("residual_tolerance").get<double>();
  read_if(j, "bench_antennas", cfg.bench_antennas);
  read_if(j, "bench_repeats", cfg.bench_repeats);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& m) {
  const std::int64_t dims[2] = {m.rows(), m.cols()};
  out.write("RSBFMAT1", 8);
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_matrix_binary: write failed");
}

Eigen::MatrixXd read_matrix_binary(std::istream& in) {
  char magic[8];
  std::int64_t dims[2];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "RSBFMAT1", 8) != 0) throw std::runtime_error("read_matrix_binary: bad magic");
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (!in || dims[0] < 0 || dims[1] < 0) throw std::runtime_error("read_matrix_binary: bad header");
  Eigen::MatrixXd m(dims[0], dims[1]);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_matrix_binary: truncated data");
  return m;
}

}  // namespace rsbf

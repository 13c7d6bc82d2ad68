#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include "json.hpp"

#include "rsbf/channel.hpp"
#include "rsbf/harness.hpp"
#include "rsbf/metrics.hpp"
#include "rsbf/sketch.hpp"
#include "rsbf/solver.hpp"

namespace rsbf {

using Json = nlohmann::json;

// ChannelConfig uses the keys M, K, region_half_width, pathloss_ref_db,
// pathloss_exponent_db_per_decade, shadowing_std_db, antenna_gain_db,
// noise_power, transmit_power, seed. Missing keys keep their defaults;
// unknown keys are rejected.
Json to_json(const ChannelConfig& cfg);
ChannelConfig channel_config_from_json(const Json& j);

// {"rows": 2M, "L": L, "entries": [[row, value], ...]} with zero-based rows.
Json to_json(const SketchMatrix& S);
SketchMatrix sketch_from_json(const Json& j);

// Per-iteration scalars only.
Json to_json(const SolveTrace& trace);

Json to_json(const RateReport& r);
Json to_json(const BoundReport& r);

Json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j);
ExperimentConfig load_experiment_config(const std::string& path);

// Binary dump: "RSBFMAT1", int64 rows, int64 cols, then column-major doubles
// in native byte order.
void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_binary(std::istream& in);

}  // namespace rsbf

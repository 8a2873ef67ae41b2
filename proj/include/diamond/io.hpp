#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "diamond/ensemble.hpp"
#include "diamond/geometry.hpp"
#include "diamond/metrics.hpp"
#include "diamond/partition.hpp"

namespace diamond::io {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// %.17g
std::string format_double(double value);

// Model documents:
//   {"M": 3, "n": 1, "t": [0, 3], "alpha": [0], "beta": [4],
//    "theta_policy": "zeros" | {"kind": "fixed", "values": [...]}
//                            | {"kind": "seeded-random", "seed": 42}}
// "n" is optional and must match the length of alpha when present.
Json model_to_json(const ensemble::ModelSpec& spec);
ensemble::ModelSpec model_from_json(const Json& doc);
ensemble::ModelSpec load_model_file(const std::string& path);

Json theta_to_json(const ensemble::ThetaPolicy& policy);
ensemble::ThetaPolicy theta_from_json(const Json& doc);
// "zeros", "seed:<n>" or a comma-separated list of angles.
ensemble::ThetaPolicy parse_theta(const std::string& text);

// Points CSV: index,parallel,i,x,y,z,phi,z_height (17 significant digits).
void write_points_csv(std::ostream& os, const ensemble::DiamondModel& model, const geometry::PointSet<double>& points);
geometry::PointSet<double> read_points_csv(std::istream& is);

// Sidecar: the model document plus N, r[], z[] and h[] as exact rationals
// ("a/b" strings) and the theta values.
Json points_sidecar(const ensemble::DiamondModel& model);

// One record per region: kind, j, i, phi_lo, phi_hi, h_lo, h_hi, matched
// point index, area.
void write_partition_csv(std::ostream& os, const partition::Partition& partition, const partition::MatchingReport& matching);
Json partition_to_json(const partition::Partition& partition, const partition::MatchingReport& matching);

Json witness_to_json(const metrics::CapWitness& witness);
Json constants_to_json(const ensemble::ModelConstants& k);
Json report_to_json(const metrics::MetricsReport& report);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace diamond::io

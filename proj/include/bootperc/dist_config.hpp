#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bootperc/degree_model.hpp"

namespace bootperc {

// Raised for malformed configuration input; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Distribution config schema:
//   {"type": "gaussian", "mean": 50, "sd": 15, "support_max": 140,
//    "out_degree": "same_independent"}
//   {"type": "poisson", "mean": 5, "support_max": 40}
//   {"type": "regular", "degree": 3}
//   {"type": "table", "entries": [[j, k, p], ...]}
// "out_degree" defaults to "same_independent" (out-degree distributed as the
// in-degree law, independently); "table" instead takes "out_table":
// [[k, p], ...]. Unknown keys are rejected.
JointDegreeDistribution distribution_from_json(const nlohmann::json& config);

JointDegreeDistribution load_distribution_file(const std::string& path);

nlohmann::json load_json_file(const std::string& path);

}  // namespace bootperc

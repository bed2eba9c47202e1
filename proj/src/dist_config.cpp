#include "bootperc/dist_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <vector>

namespace bootperc {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError(where + ": unknown key \"" + key + "\"");
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw ConfigError(where + ": missing key \"" + key + "\"");
    if (!obj.at(key).is_number())
        throw ConfigError(where + ": \"" + key + "\" must be a number");
    return obj.at(key).get<double>();
}

int require_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_number_integer())
        throw ConfigError(where + ": \"" + key + "\" must be an integer");
    return obj.at(key).get<int>();
}

DiscreteLaw out_law_from_table(const json& config) {
    const auto& table = config.at("out_table");
    if (!table.is_array() || table.empty())
        throw ConfigError("distribution: \"out_table\" must be a nonempty array");
    int max_k = 0;
    for (const auto& row : table) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number_integer())
            throw ConfigError("distribution: out_table rows must be [k, p]");
        max_k = std::max(max_k, row[0].get<int>());
    }
    std::vector<double> mass(static_cast<std::size_t>(max_k) + 1, 0.0);
    for (const auto& row : table) {
        const int k = row[0].get<int>();
        if (k < 0)
            throw ConfigError("distribution: out_table degree must be >= 0");
        mass[static_cast<std::size_t>(k)] += row[1].get<double>();
    }
    return DiscreteLaw(std::move(mass));
}

JointDegreeDistribution with_out_degree(const json& config, const DiscreteLaw& in_law) {
    const std::string mode = config.value("out_degree", std::string("same_independent"));
    if (mode == "same_independent")
        return JointDegreeDistribution::product(in_law, in_law);
    if (mode == "table") {
        if (!config.contains("out_table"))
            throw ConfigError("distribution: out_degree \"table\" requires \"out_table\"");
        return JointDegreeDistribution::product(in_law, out_law_from_table(config));
    }
    throw ConfigError("distribution: unknown out_degree mode \"" + mode + "\"");
}

}  // namespace

JointDegreeDistribution distribution_from_json(const json& config) {
    if (!config.is_object())
        throw ConfigError("distribution: config must be a JSON object");
    if (!config.contains("type") || !config.at("type").is_string())
        throw ConfigError("distribution: missing \"type\"");
    const std::string type = config.at("type").get<std::string>();

    try {
        if (type == "gaussian") {
            require_keys(config, {"type", "mean", "sd", "support_max", "out_degree", "out_table"},
                         "gaussian distribution");
            const double mean = require_number(config, "mean", "gaussian distribution");
            const double sd = require_number(config, "sd", "gaussian distribution");
            const int support_max = config.contains("support_max")
                                        ? require_int(config, "support_max", "gaussian distribution")
                                        : default_gaussian_support(mean, sd);
            return with_out_degree(config, gaussian_law(mean, sd, support_max));
        }
        if (type == "poisson") {
            require_keys(config, {"type", "mean", "support_max", "out_degree", "out_table"},
                         "poisson distribution");
            const double mean = require_number(config, "mean", "poisson distribution");
            const int support_max = config.contains("support_max")
                                        ? require_int(config, "support_max", "poisson distribution")
                                        : -1;
            return with_out_degree(config, poisson_law(mean, support_max));
        }
        if (type == "regular") {
            require_keys(config, {"type", "degree", "out_degree", "out_table"},
                         "regular distribution");
            const int degree = require_int(config, "degree", "regular distribution");
            return with_out_degree(config, point_mass_law(degree));
        }
        if (type == "table") {
            require_keys(config, {"type", "entries"}, "table distribution");
            if (!config.contains("entries") || !config.at("entries").is_array())
                throw ConfigError("table distribution: \"entries\" must be an array");
            std::vector<JointDegreeDistribution::Entry> entries;
            for (const auto& row : config.at("entries")) {
                if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() ||
                    !row[1].is_number_integer() || !row[2].is_number())
                    throw ConfigError("table distribution: entries rows must be [j, k, p]");
                entries.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
            }
            return JointDegreeDistribution::from_table(std::move(entries));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("distribution: ") + e.what());
    }
    throw ConfigError("distribution: unknown type \"" + type + "\"");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open file: " + path);
    json parsed;
    try {
        in >> parsed;
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
    return parsed;
}

JointDegreeDistribution load_distribution_file(const std::string& path) {
    return distribution_from_json(load_json_file(path));
}

}  // namespace bootperc

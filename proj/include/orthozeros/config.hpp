#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthozeros/geometry.hpp"

namespace oz {

inline constexpr int kSchemaVersion = 1;

struct PeriodicityConfig {
    int N = 0;
    std::vector<int> k;  // bands 1..l-1; the last band gets N - sum
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    std::vector<double> endpoints;
    std::vector<double> R_roots;
    nlohmann::json weight;
    int n_min = 20;
    int n_max = 60;
    double epsilon = 0.02;
    double threshold = 1e-3;
    double tolerance = 1e-6;
    int bins = 50;
    std::vector<std::vector<double>> targets;
    std::optional<PeriodicityConfig> periodicity;

    IntervalSystem system() const { return IntervalSystem(endpoints); }
    WeightSpec weight_spec() const;
};

// Throws ConfigError; the message names the line (syntax) or the field (schema).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// JSON text with every floating value at 17 significant digits, keys in sorted order.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace oz

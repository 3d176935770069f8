#pragma once

#include "vage/distributions.hpp"
#include "vage/network.hpp"
#include "vage/simulator.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vage {

/// Run configuration as read from a JSON document:
///
///   { "nodes": [...], "source": "s",
///     "source_dist": {"type": "pareto1", "a": 3, "m": 0.5},
///     "links": [{"from": "s", "to": "a", "dist": {...}, "priority": 0}],
///     "horizon": 1000, "iterations": 20000, "seed": 1,
///     "targets": ["a"], "estimator": "terminal", "output": "run" }
///
/// Everything after `links` is optional.
struct RunConfig {
    explicit RunConfig(NetworkDescription net) : network(std::move(net)) {}

    NetworkDescription network;
    double horizon = 1000.0;
    std::uint64_t iterations = 20000;
    std::uint64_t seed = 1;
    std::vector<std::string> targets; // empty: all leaves
    Estimator estimator = Estimator::Terminal;
    std::string output;
};

/// Distribution literal `{"type": ..., <params>}`. `where` names the field
/// in diagnostics.
DistributionSpec parse_distribution(const nlohmann::json& j, const std::string& where = "dist");

/// Either a JSON literal or the compact form `type:key=value,...`, e.g.
/// `uniform:lo=0,hi=2`. Values may be fractions such as `1/3`.
DistributionSpec parse_distribution_literal(std::string_view text);

nlohmann::json to_json(const DistributionSpec& spec);
nlohmann::json to_json(const NetworkDescription& desc);
nlohmann::json to_json(const SimOutcome& outcome);

NetworkDescription parse_network(const nlohmann::json& j);

/// Throws Error(ConfigParse) with line/column for syntax errors and the
/// field path for schema errors.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

/// Normalized topology dump: declared nodes, source, and links with every
/// priority resolved. Re-parses to an identical network.
nlohmann::json normalized_dump(const CacheNetwork& net);

/// Stable hex digest of a run: normalized network plus run parameters.
std::string config_hash(const CacheNetwork& net, const RunConfig& config);

/// Decimal or `a/b` fraction.
double parse_number(std::string_view text);

} // namespace vage

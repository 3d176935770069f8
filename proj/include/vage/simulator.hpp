#pragma once

#include "vage/network.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vage {

enum class Estimator { Terminal, TimeAverage };

std::string_view to_string(Estimator e);
std::optional<Estimator> parse_estimator(std::string_view text);

struct SimOptions {
    /// Assert W_j <= W_0 after every event (and W_child <= W_parent on
    /// trees); a violation throws std::logic_error.
    bool check_invariants = false;
};

/// Result of one replication: per node, X_j(T) and the time average of
/// X_j over [T/2, T].
struct Replication {
    std::vector<std::uint64_t> terminal_age;
    std::vector<double> time_average_age;
    std::uint64_t source_version = 0;
    std::uint64_t events = 0;
};

/// Key used for the replication with this index; streams inside it are
/// separated by the network's stream ids.
std::uint64_t replication_key(std::uint64_t master_seed, std::uint64_t iteration);

/// One replication over [0, horizon]. Source renewals increment W_0; a
/// renewal on link (i, j) sets W_j = max(W_j, W_i). Equal timestamps are
/// processed source first, then links by (sender depth, priority).
Replication simulate_once(const CacheNetwork& net, double horizon, std::uint64_t key,
                          const SimOptions& options = {});

/// Stream index in a trace: 0 is the source, k + 1 is link k.
struct TraceStep {
    double time = 0.0;
    std::size_t stream = 0;
    std::vector<std::uint64_t> versions; // W_j after the event, per node
};

struct SimTrace {
    std::vector<TraceStep> steps;
    std::vector<std::vector<double>> stream_events; // renewal times up to the horizon
    Replication result;
};

/// Same as simulate_once, additionally recording every event. Meant for
/// short horizons.
SimTrace simulate_trace(const CacheNetwork& net, double horizon, std::uint64_t key,
                        const SimOptions& options = {});

/// Version age rebuilt from recurrence times along a source-to-node path:
/// X(t) = N_0(t) - N_0(t - sum_k D_k), where D_1 is the backward
/// recurrence time of the last link at t and D_k that of the k-th link from
/// the end, taken at t - (D_1 + ... + D_{k-1}). Link event lists are given
/// in hop order from the source.
std::uint64_t path_age_from_recurrences(std::span<const double> source_events,
                                        std::span<const std::vector<double>> path_link_events,
                                        double t);

struct SimOutcome {
    std::string target;
    Estimator estimator = Estimator::Terminal;
    std::vector<double> samples;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t iterations = 0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
};

/// Per-target samples of both estimators, indexed [target][iteration].
struct ReplicationTable {
    std::vector<std::size_t> targets;
    std::vector<std::vector<double>> terminal;
    std::vector<std::vector<double>> time_average;
};

ReplicationTable replicate(const CacheNetwork& net, std::span<const std::size_t> targets,
                           double horizon, std::uint64_t iterations, std::uint64_t master_seed,
                           unsigned threads = 0);

/// Independent replications aggregated in iteration order; the result is
/// bit-identical for a given master_seed whatever the thread count.
std::vector<SimOutcome> monte_carlo(const CacheNetwork& net, std::span<const std::size_t> targets,
                                    double horizon, std::uint64_t iterations,
                                    std::uint64_t master_seed, Estimator estimator,
                                    unsigned threads = 0);

} // namespace vage

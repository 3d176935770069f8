#pragma once

#include "vage/network.hpp"
#include "vage/simulator.hpp"
#include "vage/stats.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vage {

// Reference networks. Nodes are named "0" (source), "1", ..., "n".

/// 3-hop chain Rayleigh(1) / ChiSquare(1) / Beta(2,3), source ParetoI(3, m).
NetworkDescription source_mean_network(double m);
/// n-hop chain of Uniform(0,2) links, source ParetoI(3, 1/3).
NetworkDescription hop_count_network(int n);
/// 4-hop chain of Uniform(1 - sqrt(3v), 1 + sqrt(3v)) links (mean 1,
/// variance v), source ParetoI(3, 1/3). Requires 0 <= v <= 1/3.
NetworkDescription link_variance_network(double v);

struct SweepOptions {
    std::uint64_t iterations = 20000;
    double horizon = 1000.0;
    std::uint64_t seed = 1;
    Estimator estimator = Estimator::Terminal;
    unsigned threads = 0;
};

struct SweepPoint {
    double param = 0.0;
    double analytic = 0.0;
    double z = 0.0;
    std::uint64_t seed = 0; // per-point seed derived from (master seed, index)
    SimOutcome outcome;
};

struct ExperimentSweep {
    std::string kind; // source_mean | hop_count | link_variance | custom
    SweepOptions options;
    std::vector<SweepPoint> points;
    std::optional<LineFit> fit; // least squares of MC mean on param
    std::string config_digest;  // hash of the sweep definition

    /// Points with |z| >= 4.
    std::size_t exceedances() const;
    /// Fails when more than one point in twenty exceeds 4 sigma.
    bool passed() const;
};

/// Per-point seed for the point at `index`.
std::uint64_t point_seed(std::uint64_t master_seed, std::size_t index);

/// One sweep point's network and the node whose age is measured.
struct SweepCase {
    NetworkDescription network;
    std::string target;
};

using CaseBuilder = std::function<SweepCase(double)>;

/// Generic sweep: for each value, build the case, compute the closed form
/// at its target and estimate it by Monte Carlo. `values` must be strictly
/// monotone. `fit` requests a least-squares line of MC mean on value.
ExperimentSweep run_sweep(const std::string& kind, const std::vector<double>& values,
                          const CaseBuilder& build, const SweepOptions& options, bool fit);

ExperimentSweep sweep_source_mean(const std::vector<double>& m_values, const SweepOptions& options);
ExperimentSweep sweep_hop_count(const std::vector<int>& n_values, const SweepOptions& options);
ExperimentSweep sweep_link_variance(const std::vector<double>& v_values, const SweepOptions& options);

/// CSV: provenance comment lines, then
/// `sweep_kind,param,analytic,mc_mean,mc_stderr,z,iterations,horizon,seed`.
std::string sweep_csv(const ExperimentSweep& sweep);
/// JSON mirror with the full SimOutcome (samples included) per point.
std::string sweep_json(const ExperimentSweep& sweep);

/// Shortest round-trip decimal form used in every emitted file.
std::string format_number(double x);

} // namespace vage

#pragma once

#include "vage/distributions.hpp"
#include "vage/network.hpp"

#include <span>
#include <string>
#include <vector>

namespace vage {

/// Long-run expected version age of every node of a PATH/TREE network.
struct AnalyticAge {
    double source_mean = 0.0;               // E[Y_source]
    std::vector<double> node_age;           // indexed by node
    std::vector<double> link_contribution;  // E[Y^2] / (2 E[Y]), indexed by link
    std::vector<std::string> warnings;      // arithmetic inputs, outside the theorem's hypotheses
};

/// E[Y^2] / (2 E[Y]) for a link. Throws InfiniteMoment if E[Y^2] diverges.
double link_contribution(const DistributionSpec& dist);

/// age(node) = (sum of link contributions on its path) / E[Y_source].
/// Throws NotATree on GENERAL networks and InfiniteMoment naming the
/// offending link or the source.
AnalyticAge expected_version_age(const CacheNetwork& net);

/// All-exponential special case: source_rate * sum(1 / link_rate).
double expected_version_age_poisson(double source_rate, std::span<const double> link_rates);

} // namespace vage

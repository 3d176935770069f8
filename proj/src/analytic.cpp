#include "vage/analytic.hpp"

#include "vage/error.hpp"

#include <cmath>

namespace vage {

double link_contribution(const DistributionSpec& dist) {
    const Moments m = moments(dist);
    if (!m.finite_second_moment()) {
        throw Error(ErrorKind::InfiniteMoment, dist.describe() + " has infinite second moment");
    }
    return mean_backward_recurrence(m);
}

AnalyticAge expected_version_age(const CacheNetwork& net) {
    if (net.topology() == Topology::General) {
        throw Error(ErrorKind::NotATree, "closed form requires tree: network is GENERAL");
    }

    AnalyticAge out;
    const Moments source = moments(net.source_dist());
    if (!source.finite_second_moment()) {
        throw Error(ErrorKind::InfiniteMoment,
                    "source '" + net.name(net.source()) + "' " + net.source_dist().describe() +
                        " has infinite second moment");
    }
    out.source_mean = source.mean;
    if (net.source_dist().arithmetic()) {
        out.warnings.push_back("source '" + net.name(net.source()) + "' uses arithmetic " +
                               net.source_dist().describe() + "; the limit assumes non-arithmetic renewals");
    }

    out.link_contribution.reserve(net.links().size());
    for (const auto& l : net.links()) {
        const std::string label = "link " + net.name(l.from) + "->" + net.name(l.to);
        try {
            out.link_contribution.push_back(link_contribution(l.dist));
        } catch (const Error& e) {
            throw Error(e.kind(), label + ": " + e.what());
        }
        if (l.dist.arithmetic()) {
            out.warnings.push_back(label + " uses arithmetic " + l.dist.describe() +
                                   "; the limit assumes non-arithmetic renewals");
        }
    }

    out.node_age.assign(net.node_count(), 0.0);
    for (std::size_t node = 0; node < net.node_count(); ++node) {
        double total = 0.0;
        for (std::size_t k : path_to_source(net, node)) total += out.link_contribution[k];
        out.node_age[node] = total / out.source_mean;
    }
    return out;
}

double expected_version_age_poisson(double source_rate, std::span<const double> link_rates) {
    if (!(std::isfinite(source_rate) && source_rate > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "source rate must be > 0");
    }
    double total = 0.0;
    for (double rate : link_rates) {
        if (!(std::isfinite(rate) && rate > 0.0)) throw Error(ErrorKind::InvalidParameter, "link rates must be > 0");
        total += 1.0 / rate;
    }
    return source_rate * total;
}

} // namespace vage

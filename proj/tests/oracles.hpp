#pragma once

// Test-only reference computations, kept independent of the library's
// implementation paths.

#include "vage/distributions.hpp"
#include "vage/network.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>
#include <variant>
#include <vector>

namespace oracle {

struct QuadMoments {
    double mean;
    double second_moment;
};

// E[Y] and E[Y^2] by adaptive double-exponential quadrature of the density.
// Returns nullopt for point masses (no density).
inline std::optional<QuadMoments> quadrature_moments(const vage::DistributionSpec& spec) {
    using namespace vage;
    constexpr double tol = 1e-14;
    auto half_line = [&](double lo, auto&& density) {
        boost::math::quadrature::exp_sinh<double> integrator;
        const double m1 = integrator.integrate([&](double y) { return y * density(y); }, lo, INFINITY, tol);
        const double m2 = integrator.integrate([&](double y) { return y * y * density(y); }, lo, INFINITY, tol);
        return QuadMoments{m1, m2};
    };
    auto interval = [&](double lo, double hi, auto&& density) {
        boost::math::quadrature::tanh_sinh<double> integrator;
        const double m1 = integrator.integrate([&](double y) { return y * density(y); }, lo, hi, tol);
        const double m2 = integrator.integrate([&](double y) { return y * y * density(y); }, lo, hi, tol);
        return QuadMoments{m1, m2};
    };

    return std::visit([&](const auto& d) -> std::optional<QuadMoments> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) {
            return half_line(0.0, [&](double y) { return d.rate * std::exp(-d.rate * y); });
        } else if constexpr (std::is_same_v<T, Uniform>) {
            return interval(d.lo, d.hi, [&](double) { return 1.0 / (d.hi - d.lo); });
        } else if constexpr (std::is_same_v<T, Rayleigh>) {
            const double s2 = d.sigma * d.sigma;
            return half_line(0.0, [&](double y) { return y / s2 * std::exp(-y * y / (2.0 * s2)); });
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
            const double h = d.k / 2.0;
            const double norm = std::pow(2.0, h) * std::tgamma(h);
            return half_line(0.0, [&](double y) { return std::pow(y, h - 1.0) * std::exp(-y / 2.0) / norm; });
        } else if constexpr (std::is_same_v<T, Beta>) {
            const double norm = boost::math::beta(d.alpha, d.beta);
            // tanh_sinh passes the distance to the nearer endpoint as a second
            // argument; use it for 1 - y so singular endpoints keep full precision
            boost::math::quadrature::tanh_sinh<double> integrator;
            auto moment = [&](int p) {
                return integrator.integrate([&](double y, double yc) {
                    const double one_minus = yc > 0 ? yc : 1.0 - y;
                    return std::pow(y, p + d.alpha - 1.0) * std::pow(one_minus, d.beta - 1.0) / norm;
                }, 0.0, 1.0, tol);
            };
            return QuadMoments{moment(1), moment(2)};
        } else if constexpr (std::is_same_v<T, ParetoI>) {
            return half_line(d.m, [&](double y) { return d.a * std::pow(d.m, d.a) / std::pow(y, d.a + 1.0); });
        } else {
            return std::nullopt;
        }
    }, spec.params());
}

// Analytic CDF for goodness-of-fit checks.
inline double cdf(const vage::DistributionSpec& spec, double x) {
    using namespace vage;
    return std::visit([&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if (x <= 0.0) return 0.0;
        if constexpr (std::is_same_v<T, Exponential>) return -std::expm1(-d.rate * x);
        else if constexpr (std::is_same_v<T, Uniform>) return std::clamp((x - d.lo) / (d.hi - d.lo), 0.0, 1.0);
        else if constexpr (std::is_same_v<T, Rayleigh>) return -std::expm1(-x * x / (2.0 * d.sigma * d.sigma));
        else if constexpr (std::is_same_v<T, ChiSquare>) return boost::math::gamma_p(d.k / 2.0, x / 2.0);
        else if constexpr (std::is_same_v<T, Beta>) return x >= 1.0 ? 1.0 : boost::math::ibeta(d.alpha, d.beta, x);
        else if constexpr (std::is_same_v<T, ParetoI>) return x <= d.m ? 0.0 : 1.0 - std::pow(d.m / x, d.a);
        else return x >= d.c ? 1.0 : 0.0;
    }, spec.params());
}

// Kolmogorov-Smirnov statistic of a sample against `spec`.
inline double ks_statistic(std::vector<double> xs, const vage::DistributionSpec& spec) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(spec, xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

// Asymptotic 0.1% critical value of the one-sample KS statistic.
inline double ks_critical_001(std::size_t n) { return 1.94947 / std::sqrt(static_cast<double>(n)); }

// Version age from the general-network recursion: the last arrival at j
// (smallest backward recurrence over incoming links) determines
//   X_j(t) = N_0(t) - N_0(t - A) + min{X_i(t - A), X_j((t - A)^-)}.
// `stream_events[0]` holds source renewals and `stream_events[k + 1]` link k.
// Valid when no two events coincide (continuous distributions).
class GeneralRecursion {
public:
    GeneralRecursion(const vage::CacheNetwork& net, const std::vector<std::vector<double>>& stream_events)
        : net_(net), events_(stream_events) {}

    long long age(std::size_t node, double t) { return age_impl(node, t, false); }

private:
    // Events <= t, or < t when `strict`.
    static std::size_t count(const std::vector<double>& ev, double t, bool strict) {
        return strict ? std::lower_bound(ev.begin(), ev.end(), t) - ev.begin()
                      : std::upper_bound(ev.begin(), ev.end(), t) - ev.begin();
    }

    long long age_impl(std::size_t j, double t, bool strict) {
        if (j == net_.source()) return 0;
        const auto key = std::make_tuple(j, t, strict);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        const long long n0_t = static_cast<long long>(count(events_[0], t, strict));
        std::optional<std::pair<double, std::size_t>> last; // (arrival time, link)
        for (std::size_t k : net_.incoming(j)) {
            const auto& ev = events_[k + 1];
            const std::size_t n = count(ev, t, strict);
            if (n == 0) continue;
            if (!last || ev[n - 1] > last->first) last = {ev[n - 1], k};
        }
        long long result = n0_t;
        if (last) {
            const double s = last->first;
            const std::size_t sender = net_.links()[last->second].from;
            const long long n0_s = static_cast<long long>(count(events_[0], s, false));
            result = n0_t - n0_s + std::min(age_impl(sender, s, false), age_impl(j, s, true));
        }
        memo_.emplace(key, result);
        return result;
    }

    const vage::CacheNetwork& net_;
    const std::vector<std::vector<double>>& events_;
    std::map<std::tuple<std::size_t, double, bool>, long long> memo_;
};

} // namespace oracle

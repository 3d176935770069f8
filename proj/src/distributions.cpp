#include "vage/distributions.hpp"

#include "vage/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace vage {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, std::string_view family, std::string_view what) {
    if (!ok) {
        throw Error(ErrorKind::InvalidParameter,
                    std::string(family) + ": " + std::string(what));
    }
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

void validate(const DistributionSpec::Params& params) {
    std::visit(Overloaded{
        [](const Exponential& d) { require(positive(d.rate), "exponential", "rate must be > 0"); },
        [](const Uniform& d) {
            require(std::isfinite(d.lo) && d.lo >= 0.0, "uniform", "lo must be >= 0");
            require(std::isfinite(d.hi) && d.hi > d.lo, "uniform", "hi must be > lo");
        },
        [](const Rayleigh& d) { require(positive(d.sigma), "rayleigh", "sigma must be > 0"); },
        [](const ChiSquare& d) { require(d.k > 0, "chi_square", "k must be a positive integer"); },
        [](const Beta& d) {
            require(positive(d.alpha), "beta", "alpha must be > 0");
            require(positive(d.beta), "beta", "beta must be > 0");
        },
        [](const ParetoI& d) {
            require(positive(d.a), "pareto1", "a must be > 0");
            require(positive(d.m), "pareto1", "m must be > 0");
        },
        [](const Deterministic& d) { require(positive(d.c), "deterministic", "c must be > 0"); },
    }, params);
}

double standard_normal_pair(RngStream& rng, double& second) {
    const double radius = std::sqrt(-2.0 * std::log(rng.uniform()));
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    second = radius * std::sin(angle);
    return radius * std::cos(angle);
}

double sample_chi_square(int k, RngStream& rng) {
    double total = 0.0;
    for (int i = 0; i < k; i += 2) {
        double z2 = 0.0;
        const double z1 = standard_normal_pair(rng, z2);
        total += z1 * z1;
        if (i + 1 < k) total += z2 * z2;
    }
    return total;
}

// Cheng (1978), algorithms BB (both shapes > 1) and BC (min shape <= 1).
double sample_beta(double alpha_in, double beta_in, RngStream& rng) {
    constexpr double kLog4 = 1.3862943611198906;
    constexpr double kOnePlusLog5 = 2.6094379124341003;
    const double a = std::min(alpha_in, beta_in);
    const double b = std::max(alpha_in, beta_in);
    const double sum = a + b;

    auto v_w = [&](double u1, double scale, double spread, double& v) {
        v = spread * std::log(u1 / (1.0 - u1));
        const double w = scale * std::exp(v);
        return std::isfinite(w) ? w : std::numeric_limits<double>::max();
    };

    if (a > 1.0) {
        const double spread = std::sqrt((sum - 2.0) / (2.0 * a * b - sum));
        const double gamma = a + 1.0 / spread;
        double w = 0.0;
        for (;;) {
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            double v = 0.0;
            w = v_w(u1, a, spread, v);
            const double z = u1 * u1 * u2;
            const double r = gamma * v - kLog4;
            const double s = a + r - w;
            if (s + kOnePlusLog5 >= 5.0 * z) break;
            const double t = std::log(z);
            if (s > t) break;
            if (r + sum * std::log(sum / (b + w)) >= t) break;
        }
        return (alpha_in != a) ? b / (b + w) : w / (b + w);
    }

    const double spread = 1.0 / a;
    const double delta = 1.0 + b - a;
    const double k1 = delta * (0.0138889 + 0.0416667 * a) / (b * spread - 0.777778);
    const double k2 = 0.25 + (0.5 + 0.25 / delta) * a;
    double w = 0.0;
    for (;;) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        double z = 0.0;
        if (u1 < 0.5) {
            const double y = u1 * u2;
            z = u1 * y;
            if (0.25 * u2 + z - y >= k1) continue;
        } else {
            z = u1 * u1 * u2;
            if (z <= 0.25) {
                double v = 0.0;
                w = v_w(u1, b, spread, v);
                break;
            }
            if (z >= k2) continue;
        }
        double v = 0.0;
        w = v_w(u1, b, spread, v);
        if (sum * (std::log(sum / (a + w)) + v) - kLog4 >= std::log(z)) break;
    }
    return (alpha_in == a) ? a / (a + w) : w / (a + w);
}

} // namespace

DistributionSpec::DistributionSpec(Params params) : params_(params) { validate(params_); }

std::string_view DistributionSpec::type_name() const {
    return std::visit(Overloaded{
        [](const Exponential&) { return std::string_view("exponential"); },
        [](const Uniform&) { return std::string_view("uniform"); },
        [](const Rayleigh&) { return std::string_view("rayleigh"); },
        [](const ChiSquare&) { return std::string_view("chi_square"); },
        [](const Beta&) { return std::string_view("beta"); },
        [](const ParetoI&) { return std::string_view("pareto1"); },
        [](const Deterministic&) { return std::string_view("deterministic"); },
    }, params_);
}

std::string DistributionSpec::describe() const {
    std::ostringstream os;
    os.precision(10);
    os << type_name() << '(';
    std::visit(Overloaded{
        [&](const Exponential& d) { os << "rate=" << d.rate; },
        [&](const Uniform& d) { os << "lo=" << d.lo << ", hi=" << d.hi; },
        [&](const Rayleigh& d) { os << "sigma=" << d.sigma; },
        [&](const ChiSquare& d) { os << "k=" << d.k; },
        [&](const Beta& d) { os << "alpha=" << d.alpha << ", beta=" << d.beta; },
        [&](const ParetoI& d) { os << "a=" << d.a << ", m=" << d.m; },
        [&](const Deterministic& d) { os << "c=" << d.c; },
    }, params_);
    os << ')';
    return os.str();
}

bool Moments::finite_mean() const { return std::isfinite(mean); }
bool Moments::finite_second_moment() const { return std::isfinite(second_moment); }

Moments moments(const DistributionSpec& spec) {
    return std::visit(Overloaded{
        [](const Exponential& d) { return Moments{1.0 / d.rate, 2.0 / (d.rate * d.rate)}; },
        [](const Uniform& d) {
            return Moments{0.5 * (d.lo + d.hi), (d.lo * d.lo + d.lo * d.hi + d.hi * d.hi) / 3.0};
        },
        [](const Rayleigh& d) {
            return Moments{d.sigma * std::sqrt(std::numbers::pi / 2.0), 2.0 * d.sigma * d.sigma};
        },
        [](const ChiSquare& d) {
            const double k = d.k;
            return Moments{k, k * k + 2.0 * k};
        },
        [](const Beta& d) {
            const double s = d.alpha + d.beta;
            return Moments{d.alpha / s, d.alpha * (d.alpha + 1.0) / (s * (s + 1.0))};
        },
        [](const ParetoI& d) {
            const double mean = d.a > 1.0 ? d.a * d.m / (d.a - 1.0) : kInf;
            const double second = d.a > 2.0 ? d.a * d.m * d.m / (d.a - 2.0) : kInf;
            return Moments{mean, second};
        },
        [](const Deterministic& d) { return Moments{d.c, d.c * d.c}; },
    }, spec.params());
}

double sample(const DistributionSpec& spec, RngStream& rng) {
    return std::visit(Overloaded{
        [&](const Exponential& d) { return -std::log1p(-rng.uniform()) / d.rate; },
        [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * rng.uniform(); },
        [&](const Rayleigh& d) { return d.sigma * std::sqrt(-2.0 * std::log1p(-rng.uniform())); },
        [&](const ChiSquare& d) { return sample_chi_square(d.k, rng); },
        [&](const Beta& d) { return sample_beta(d.alpha, d.beta, rng); },
        [&](const ParetoI& d) { return d.m * std::exp(-std::log1p(-rng.uniform()) / d.a); },
        [&](const Deterministic& d) { return d.c; },
    }, spec.params());
}

double mean_backward_recurrence(const Moments& m) {
    return m.second_moment / (2.0 * m.mean);
}

} // namespace vage

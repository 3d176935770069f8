#pragma once

#include "vage/rng.hpp"

#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

namespace vage {

struct Exponential   { double rate; bool operator==(const Exponential&) const = default; };
struct Uniform       { double lo; double hi; bool operator==(const Uniform&) const = default; };
struct Rayleigh      { double sigma; bool operator==(const Rayleigh&) const = default; };
struct ChiSquare     { int k; bool operator==(const ChiSquare&) const = default; };
struct Beta          { double alpha; double beta; bool operator==(const Beta&) const = default; };
struct ParetoI       { double a; double m; bool operator==(const ParetoI&) const = default; };
struct Deterministic { double c; bool operator==(const Deterministic&) const = default; };

/// Inter-renewal time distribution. Parameters are validated on
/// construction, so every instance in circulation is well formed.
class DistributionSpec {
public:
    using Params = std::variant<Exponential, Uniform, Rayleigh, ChiSquare, Beta, ParetoI, Deterministic>;

    DistributionSpec(Params params); // NOLINT(google-explicit-constructor)

    template <class Family>
        requires std::is_constructible_v<Params, Family> && (!std::is_same_v<std::decay_t<Family>, Params>)
    DistributionSpec(Family family) : DistributionSpec(Params(family)) {} // NOLINT(google-explicit-constructor)

    const Params& params() const { return params_; }

    /// Config-file type tag: exponential, uniform, rayleigh, chi_square,
    /// beta, pareto1 or deterministic.
    std::string_view type_name() const;

    /// Lattice-supported distributions (only Deterministic among the
    /// supported families). The limit theorems assume non-arithmetic.
    bool arithmetic() const { return std::holds_alternative<Deterministic>(params_); }

    /// Human-readable literal such as `uniform(lo=0, hi=2)`.
    std::string describe() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

private:
    Params params_;
};

/// First and second moments; either may be +infinity when the defining
/// integral diverges (ParetoI with a <= 1 or a <= 2 respectively).
struct Moments {
    double mean = 0.0;
    double second_moment = 0.0;

    bool finite_mean() const;
    bool finite_second_moment() const;
    double variance() const { return second_moment - mean * mean; }
};

Moments moments(const DistributionSpec& spec);

/// One draw. Closed-form quantiles are inverted directly; ChiSquare(k) is a
/// sum of k squared Box-Muller normals and Beta uses Cheng's BB/BC
/// rejection samplers, so those consume a variable number of draws.
double sample(const DistributionSpec& spec, RngStream& rng);

/// E[Y^2] / (2 E[Y]): the limiting mean backward recurrence time.
double mean_backward_recurrence(const Moments& m);

} // namespace vage

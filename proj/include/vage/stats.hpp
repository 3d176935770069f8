#pragma once

#include <span>

namespace vage {

struct SampleSummary {
    double mean = 0.0;
    double std_error = 0.0; // sample stddev / sqrt(n)
    double stddev = 0.0;
};

/// Two-pass mean and unbiased standard deviation, accumulated in index
/// order so the result is bit-reproducible.
SampleSummary summarize_samples(std::span<const double> samples);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares fit of y on x. Needs two distinct x values.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

} // namespace vage

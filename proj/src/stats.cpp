#include "vage/stats.hpp"

#include "vage/error.hpp"

#include <cmath>

namespace vage {

SampleSummary summarize_samples(std::span<const double> samples) {
    SampleSummary s;
    const std::size_t n = samples.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double x : samples) sum += x;
    s.mean = sum / static_cast<double>(n);
    if (n < 2) return s;
    double ss = 0.0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    s.std_error = s.stddev / std::sqrt(static_cast<double>(n));
    return s;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorKind::InvalidParameter, "least squares needs >= 2 paired points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorKind::InvalidParameter, "least squares needs distinct x values");
    const double slope = sxy / sxx;
    return LineFit{slope, my - slope * mx};
}

} // namespace vage

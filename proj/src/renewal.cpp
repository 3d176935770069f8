#include "vage/renewal.hpp"

#include "vage/error.hpp"
#include "vage/parallel.hpp"
#include "vage/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vage {

namespace {

constexpr std::uint64_t kPrimaryStream = 0;
constexpr std::uint64_t kProbeStream = 1;
constexpr std::uint64_t kJitterStream = 2;

Moments finite_moments(const DistributionSpec& spec, std::string_view role) {
    const Moments m = moments(spec);
    if (!m.finite_second_moment()) {
        throw Error(ErrorKind::InfiniteMoment,
                    std::string(role) + " " + spec.describe() + " has infinite second moment");
    }
    return m;
}

// Instant at which a path is inspected. Lattice specs get a uniform offset
// over one span so the Cesaro limit is what gets estimated.
double inspection_time(const DistributionSpec& spec, double t_large, std::uint64_t path_key) {
    if (!spec.arithmetic()) return t_large;
    RngStream jitter(StreamKey{path_key, kJitterStream});
    return t_large + moments(spec).mean * jitter.uniform();
}

ZScore summarize(std::span<const double> samples, double target, double t) {
    const SampleSummary s = summarize_samples(samples);
    return ZScore{t, s.mean, s.std_error, target, z_score(s.mean, target, s.std_error), samples.size()};
}

void require_paths(std::uint64_t n_paths) {
    if (n_paths < 2) throw Error(ErrorKind::InvalidParameter, "need at least 2 paths");
}

} // namespace

RenewalStream::RenewalStream(DistributionSpec spec, StreamKey id)
    : spec_(std::move(spec)), rng_(id) {
    next_ = sample(spec_, rng_);
}

double RenewalStream::pop() {
    last_ = next_;
    next_ = last_ + sample(spec_, rng_);
    ++count_;
    return last_;
}

std::vector<double> RenewalStream::advance(double until) {
    std::vector<double> out;
    advance(until, [&](double t) { out.push_back(t); });
    return out;
}

std::uint64_t count_at(std::span<const double> events, double t) {
    return static_cast<std::uint64_t>(std::upper_bound(events.begin(), events.end(), t) - events.begin());
}

RecurrenceView recurrence_at(std::span<const double> events, double t) {
    if (t < 0.0) throw Error(ErrorKind::InvalidParameter, "recurrence time requested at t < 0");
    const std::uint64_t n = count_at(events, t);
    if (n >= events.size()) {
        throw Error(ErrorKind::NoFutureEvent,
                    "no renewal after t=" + std::to_string(t) + "; advance the stream further");
    }
    const double previous = n == 0 ? 0.0 : events[n - 1];
    return RecurrenceView{t, n, t - previous, events[n] - t};
}

double z_score(double estimate, double target, double std_error) {
    const double diff = estimate - target;
    if (std_error > 0.0) return diff / std_error;
    // Degenerate (all samples equal): accept round-off-level agreement.
    if (std::abs(diff) <= 1e-9 * std::max(1.0, std::abs(target))) return 0.0;
    return diff > 0.0 ? HUGE_VAL : -HUGE_VAL;
}

std::vector<ZScore> verify_martingale_zero_mean(const DistributionSpec& spec,
                                                std::span<const double> t_grid,
                                                std::uint64_t n_paths, std::uint64_t seed,
                                                unsigned threads) {
    const Moments m = finite_moments(spec, "spec");
    require_paths(n_paths);
    for (double t : t_grid) {
        if (!(t >= 0.0)) throw Error(ErrorKind::InvalidParameter, "t_grid entries must be >= 0");
    }

    std::vector<std::size_t> order(t_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return t_grid[a] < t_grid[b]; });

    const std::size_t k = t_grid.size();
    std::vector<double> samples(n_paths * k);
    parallel_for(n_paths, threads, [&](std::size_t path) {
        RenewalStream stream(spec, StreamKey{derive_key(seed, path), kPrimaryStream});
        for (std::size_t idx : order) {
            stream.advance(t_grid[idx], [](double) {});
            const double n_plus_one = static_cast<double>(stream.count() + 1);
            samples[idx * n_paths + path] = n_plus_one - stream.next_event() / m.mean;
        }
    });

    std::vector<ZScore> out;
    out.reserve(k);
    for (std::size_t idx = 0; idx < k; ++idx) {
        out.push_back(summarize(std::span(samples).subspan(idx * n_paths, n_paths), 0.0, t_grid[idx]));
    }
    return out;
}

ZScore verify_backward_recurrence_limit(const DistributionSpec& spec, double t_large,
                                        std::uint64_t n_paths, std::uint64_t seed,
                                        unsigned threads) {
    const Moments m = finite_moments(spec, "spec");
    require_paths(n_paths);
    if (!(t_large >= 50.0 * m.mean)) {
        throw Error(ErrorKind::InvalidParameter, "t_large must be at least 50 x mean");
    }

    std::vector<double> samples(n_paths);
    parallel_for(n_paths, threads, [&](std::size_t path) {
        const std::uint64_t key = derive_key(seed, path);
        const double t = inspection_time(spec, t_large, key);
        RenewalStream stream(spec, StreamKey{key, kPrimaryStream});
        stream.advance(t, [](double) {});
        samples[path] = t - stream.last_event();
    });
    return summarize(samples, mean_backward_recurrence(m), t_large);
}

ZScore verify_lemma2(const DistributionSpec& source, const DistributionSpec& probe,
                     double t_large, std::uint64_t n_paths, std::uint64_t seed,
                     unsigned threads) {
    const Moments ms = finite_moments(source, "source");
    const Moments mp = finite_moments(probe, "probe");
    require_paths(n_paths);
    if (!(t_large >= 50.0 * std::max(ms.mean, mp.mean))) {
        throw Error(ErrorKind::InvalidParameter, "t_large must be at least 50 x the larger mean");
    }

    std::vector<double> samples(n_paths);
    parallel_for(n_paths, threads, [&](std::size_t path) {
        const std::uint64_t key = derive_key(seed, path);
        const double t = inspection_time(probe, t_large, key);
        RenewalStream probe_stream(probe, StreamKey{key, kProbeStream});
        probe_stream.advance(t, [](double) {});
        const double window_start = probe_stream.last_event();

        RenewalStream source_stream(source, StreamKey{key, kPrimaryStream});
        source_stream.advance(window_start, [](double) {});
        const std::uint64_t before = source_stream.count();
        source_stream.advance(t, [](double) {});
        samples[path] = static_cast<double>(source_stream.count() - before);
    });
    return summarize(samples, mean_backward_recurrence(mp) / ms.mean, t_large);
}

} // namespace vage

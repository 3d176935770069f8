#pragma once

#include "vage/distributions.hpp"
#include "vage/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vage {

/// Lazily realized ordinary renewal process starting at time 0.
/// Holds only the current cursor, so memory does not grow with the horizon.
class RenewalStream {
public:
    RenewalStream(DistributionSpec spec, StreamKey id);

    const DistributionSpec& spec() const { return spec_; }
    StreamKey id() const { return rng_.id(); }

    /// Most recent renewal at or before the cursor (0 before the first one).
    double last_event() const { return last_; }
    /// Next renewal strictly after last_event().
    double next_event() const { return next_; }
    /// Renewals emitted so far.
    std::uint64_t count() const { return count_; }

    /// Consume the next renewal and return its time.
    double pop();

    /// Emit every renewal in (cursor, until] to `sink`.
    template <class Sink>
    void advance(double until, Sink&& sink) {
        while (next_ <= until) sink(pop());
    }

    std::vector<double> advance(double until);

private:
    DistributionSpec spec_;
    RngStream rng_;
    double last_ = 0.0;
    double next_ = 0.0;
    std::uint64_t count_ = 0;
};

/// Renewal count and recurrence times at an instant.
struct RecurrenceView {
    double t = 0.0;
    std::uint64_t count = 0; // N(t) = max{n : T_n <= t}
    double backward = 0.0;   // A(t) = t - T_{N(t)}, with T_0 = 0
    double forward = 0.0;    // B(t) = T_{N(t)+1} - t
};

/// `events` must be strictly increasing and contain at least one time > t.
RecurrenceView recurrence_at(std::span<const double> events, double t);

/// Number of events <= t in a sorted list.
std::uint64_t count_at(std::span<const double> events, double t);

// ---------------------------------------------------------------------------
// Statistical verifiers for the renewal identities the closed form relies on.

struct ZScore {
    double t = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z = 0.0;
    std::uint64_t paths = 0;
};

/// Studentized mean of M(t) = N(t) + 1 - T_{N(t)+1} / mu over independent
/// paths, for each t in the grid. Throws InfiniteMoment if E[Y^2] diverges.
std::vector<ZScore> verify_martingale_zero_mean(const DistributionSpec& spec,
                                                std::span<const double> t_grid,
                                                std::uint64_t n_paths,
                                                std::uint64_t seed,
                                                unsigned threads = 1);

/// Monte Carlo E[A(t_large)] against E[Y^2] / (2 E[Y]). Requires
/// t_large >= 50 E[Y]. For arithmetic specs E[A(t)] has no limit, so the
/// evaluation instant is jittered uniformly over one span past t_large and
/// the time-averaged limit is tested instead.
ZScore verify_backward_recurrence_limit(const DistributionSpec& spec, double t_large,
                                        std::uint64_t n_paths, std::uint64_t seed,
                                        unsigned threads = 1);

/// Monte Carlo E[N_src(t) - N_src(t - A_probe(t))] against
/// (E[Y_p^2] / (2 E[Y_p])) / E[Y_src], with independent source and probe.
/// Same jitter rule as above when the probe is arithmetic.
ZScore verify_lemma2(const DistributionSpec& source, const DistributionSpec& probe,
                     double t_large, std::uint64_t n_paths, std::uint64_t seed,
                     unsigned threads = 1);

/// z = (estimate - target) / stderr. With zero stderr (e.g. deterministic
/// paths) it is 0 when the difference is at round-off level, else +-inf.
double z_score(double estimate, double target, double std_error);

} // namespace vage

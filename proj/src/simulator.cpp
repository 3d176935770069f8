#include "vage/simulator.hpp"

#include "vage/parallel.hpp"
#include "vage/renewal.hpp"
#include "vage/stats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace vage {

namespace {

// Integral of a piecewise-constant counter over [window_start, ...).
struct Area {
    double value = 0.0;
    double since = 0.0;

    void advance(std::uint64_t level, double now, double window_start) {
        const double from = std::max(since, window_start);
        if (now > from) value += static_cast<double>(level) * (now - from);
        since = now;
    }
};

struct NoObserver {
    void operator()(double, std::size_t, const std::vector<std::uint64_t>&) const {}
    void record(std::size_t, double) const {}
};

class Engine {
public:
    Engine(const CacheNetwork& net, std::uint64_t key) : net_(net) {
        streams_.reserve(net.links().size() + 1);
        streams_.emplace_back(net.source_dist(), StreamKey{key, net.source_stream_id()});
        for (const auto& l : net.links()) streams_.emplace_back(l.dist, StreamKey{key, l.stream_id});

        // Tie order: source, then links by (sender depth, priority, index).
        std::vector<std::size_t> link_order(net.links().size());
        std::iota(link_order.begin(), link_order.end(), 0);
        std::sort(link_order.begin(), link_order.end(), [&](std::size_t a, std::size_t b) {
            const auto& la = net.links()[a];
            const auto& lb = net.links()[b];
            return std::tuple(net.depth(la.from), la.priority, a) < std::tuple(net.depth(lb.from), lb.priority, b);
        });
        rank_to_stream_.push_back(0);
        for (std::size_t k : link_order) rank_to_stream_.push_back(k + 1);

        for (std::size_t r = 0; r < rank_to_stream_.size(); ++r) {
            heap_.emplace_back(streams_[rank_to_stream_[r]].next_event(), r);
        }
        std::make_heap(heap_.begin(), heap_.end(), std::greater<>{});
        versions_.assign(net.node_count(), 0);
        areas_.assign(net.node_count(), Area{});
    }

    template <class Observer>
    Replication run(double horizon, const SimOptions& options, Observer&& observe) {
        const double window = 0.5 * horizon;
        const std::size_t source = net_.source();
        std::uint64_t events = 0;

        while (heap_.front().first <= horizon) {
            std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
            auto& [time, rank] = heap_.back();
            const std::size_t s = rank_to_stream_[rank];
            const double now = streams_[s].pop();
            observe.record(s, now);

            if (s == 0) {
                areas_[source].advance(versions_[source], now, window);
                ++versions_[source];
            } else {
                const Link& l = net_.links()[s - 1];
                if (versions_[l.from] > versions_[l.to]) {
                    areas_[l.to].advance(versions_[l.to], now, window);
                    versions_[l.to] = versions_[l.from];
                }
            }
            ++events;
            if (options.check_invariants) check(now);
            observe(now, s, versions_);

            time = streams_[s].next_event();
            std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
        }

        Replication out;
        out.events = events;
        out.source_version = versions_[source];
        out.terminal_age.resize(versions_.size());
        out.time_average_age.resize(versions_.size());
        for (std::size_t j = 0; j < versions_.size(); ++j) areas_[j].advance(versions_[j], horizon, window);
        const double width = horizon - window;
        for (std::size_t j = 0; j < versions_.size(); ++j) {
            out.terminal_age[j] = versions_[source] - versions_[j];
            out.time_average_age[j] = width > 0.0 ? (areas_[source].value - areas_[j].value) / width : 0.0;
        }
        return out;
    }

private:
    void check(double now) const {
        const std::uint64_t w0 = versions_[net_.source()];
        for (std::size_t j = 0; j < versions_.size(); ++j) {
            if (versions_[j] > w0) {
                throw std::logic_error("node '" + net_.name(j) + "' ahead of the source at t=" + std::to_string(now));
            }
        }
        if (net_.topology() == Topology::General) return;
        for (const auto& l : net_.links()) {
            if (versions_[l.to] > versions_[l.from]) {
                throw std::logic_error("node '" + net_.name(l.to) + "' ahead of its parent at t=" + std::to_string(now));
            }
        }
    }

    const CacheNetwork& net_;
    std::vector<RenewalStream> streams_;
    std::vector<std::size_t> rank_to_stream_;
    std::vector<std::pair<double, std::size_t>> heap_;
    std::vector<std::uint64_t> versions_;
    std::vector<Area> areas_;
};

struct TraceObserver {
    SimTrace* trace;
    void operator()(double now, std::size_t stream, const std::vector<std::uint64_t>& versions) const {
        trace->steps.push_back(TraceStep{now, stream, versions});
    }
    void record(std::size_t stream, double now) const { trace->stream_events[stream].push_back(now); }
};

std::uint64_t backward_count(std::span<const double> events, double t) { return count_at(events, t); }

double backward_time(std::span<const double> events, double t) {
    const std::uint64_t n = count_at(events, t);
    return n == 0 ? t : t - events[n - 1];
}

} // namespace

std::string_view to_string(Estimator e) {
    return e == Estimator::Terminal ? "terminal" : "time_average";
}

std::optional<Estimator> parse_estimator(std::string_view text) {
    if (text == "terminal") return Estimator::Terminal;
    if (text == "time_average") return Estimator::TimeAverage;
    return std::nullopt;
}

std::uint64_t replication_key(std::uint64_t master_seed, std::uint64_t iteration) {
    return derive_key(master_seed, iteration);
}

Replication simulate_once(const CacheNetwork& net, double horizon, std::uint64_t key, const SimOptions& options) {
    if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidParameter, "horizon must be > 0");
    Engine engine(net, key);
    return engine.run(horizon, options, NoObserver{});
}

SimTrace simulate_trace(const CacheNetwork& net, double horizon, std::uint64_t key, const SimOptions& options) {
    if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidParameter, "horizon must be > 0");
    SimTrace trace;
    trace.stream_events.resize(net.links().size() + 1);
    Engine engine(net, key);
    trace.result = engine.run(horizon, options, TraceObserver{&trace});
    return trace;
}

std::uint64_t path_age_from_recurrences(std::span<const double> source_events,
                                        std::span<const std::vector<double>> path_link_events,
                                        double t) {
    double lag = 0.0;
    for (auto it = path_link_events.rbegin(); it != path_link_events.rend(); ++it) {
        lag += backward_time(*it, t - lag);
    }
    return backward_count(source_events, t) - backward_count(source_events, t - lag);
}

ReplicationTable replicate(const CacheNetwork& net, std::span<const std::size_t> targets, double horizon,
                           std::uint64_t iterations, std::uint64_t master_seed, unsigned threads) {
    if (iterations < 1) throw Error(ErrorKind::InvalidParameter, "iterations must be >= 1");
    for (std::size_t t : targets) {
        if (t >= net.node_count()) throw Error(ErrorKind::UnknownNode, "target index out of range");
    }
    ReplicationTable table;
    table.targets.assign(targets.begin(), targets.end());
    table.terminal.assign(targets.size(), std::vector<double>(iterations));
    table.time_average.assign(targets.size(), std::vector<double>(iterations));

    parallel_for(iterations, threads, [&](std::size_t i) {
        const Replication r = simulate_once(net, horizon, replication_key(master_seed, i));
        for (std::size_t k = 0; k < targets.size(); ++k) {
            table.terminal[k][i] = static_cast<double>(r.terminal_age[targets[k]]);
            table.time_average[k][i] = r.time_average_age[targets[k]];
        }
    });
    return table;
}

std::vector<SimOutcome> monte_carlo(const CacheNetwork& net, std::span<const std::size_t> targets, double horizon,
                                    std::uint64_t iterations, std::uint64_t master_seed, Estimator estimator,
                                    unsigned threads) {
    ReplicationTable table = replicate(net, targets, horizon, iterations, master_seed, threads);
    std::vector<SimOutcome> out;
    out.reserve(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        SimOutcome o;
        o.target = net.name(targets[k]);
        o.estimator = estimator;
        o.samples = std::move(estimator == Estimator::Terminal ? table.terminal[k] : table.time_average[k]);
        const SampleSummary s = summarize_samples(o.samples);
        o.mean = s.mean;
        o.std_error = s.std_error;
        o.iterations = iterations;
        o.horizon = horizon;
        o.seed = master_seed;
        out.push_back(std::move(o));
    }
    return out;
}

} // namespace vage

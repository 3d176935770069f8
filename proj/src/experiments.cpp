#include "vage/experiments.hpp"

#include "vage/analytic.hpp"
#include "vage/config.hpp"
#include "vage/error.hpp"
#include "vage/renewal.hpp"
#include "vage/version.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace vage {

namespace {

NetworkDescription chain(const DistributionSpec& source, const std::vector<DistributionSpec>& links) {
    NetworkDescription desc{{"0"}, "0", source, {}};
    for (std::size_t k = 0; k < links.size(); ++k) {
        desc.nodes.push_back(std::to_string(k + 1));
        desc.links.push_back(LinkDescription{std::to_string(k), std::to_string(k + 1), links[k], std::nullopt});
    }
    return desc;
}

const DistributionSpec kReferenceSource = ParetoI{3.0, 1.0 / 3.0};

void require_monotone(const std::vector<double>& values) {
    if (values.empty()) throw Error(ErrorKind::InvalidParameter, "sweep needs at least one value");
    if (values.size() < 2) return;
    const bool up = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        const bool ok = up ? values[i] > values[i - 1] : values[i] < values[i - 1];
        if (!ok) throw Error(ErrorKind::InvalidParameter, "sweep values must be strictly monotone");
    }
}

std::string digest(const nlohmann::json& j) {
    const std::string text = j.dump();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text.data(), text.size())));
    return buf;
}

} // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

NetworkDescription source_mean_network(double m) {
    return chain(ParetoI{3.0, m}, {Rayleigh{1.0}, ChiSquare{1}, Beta{2.0, 3.0}});
}

NetworkDescription hop_count_network(int n) {
    if (n < 0) throw Error(ErrorKind::InvalidParameter, "hop count must be >= 0");
    return chain(kReferenceSource, std::vector<DistributionSpec>(static_cast<std::size_t>(n), Uniform{0.0, 2.0}));
}

NetworkDescription link_variance_network(double v) {
    if (!(v >= 0.0) || v > 1.0 / 3.0) {
        throw Error(ErrorKind::InvalidParameter, "link variance v must lie in [0, 1/3] so the support stays nonnegative");
    }
    const double half_width = std::sqrt(3.0 * v);
    const double lo = std::max(0.0, 1.0 - half_width);
    const DistributionSpec link = v == 0.0 ? DistributionSpec(Deterministic{1.0})
                                           : DistributionSpec(Uniform{lo, 1.0 + half_width});
    return chain(kReferenceSource, std::vector<DistributionSpec>(4, link));
}

std::size_t ExperimentSweep::exceedances() const {
    std::size_t n = 0;
    for (const auto& p : points) {
        if (!(std::abs(p.z) < 4.0)) ++n;
    }
    return n;
}

bool ExperimentSweep::passed() const { return exceedances() * 20 <= points.size(); }

std::uint64_t point_seed(std::uint64_t master_seed, std::size_t index) {
    return hash_combine(master_seed ^ 0x5EEDF00Dull, index);
}

ExperimentSweep run_sweep(const std::string& kind, const std::vector<double>& values, const CaseBuilder& build,
                          const SweepOptions& options, bool fit) {
    require_monotone(values);
    ExperimentSweep sweep;
    sweep.kind = kind;
    sweep.options = options;

    nlohmann::json definition{{"kind", kind}, {"values", values},
                              {"iterations", options.iterations}, {"horizon", options.horizon},
                              {"estimator", std::string(to_string(options.estimator))}, {"seed", options.seed}};
    nlohmann::json cases = nlohmann::json::array();

    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepCase c = build(values[i]);
        const CacheNetwork net(std::move(c.network));
        std::string topology = net.source_dist().describe();
        for (const auto& l : net.links()) {
            topology += ";" + net.name(l.from) + "->" + net.name(l.to) + ":" + l.dist.describe();
        }
        cases.push_back({{"target", c.target}, {"network", topology}});

        const std::size_t node = net.require_node(c.target);
        SweepPoint p;
        p.param = values[i];
        p.analytic = expected_version_age(net).node_age[node];
        p.seed = point_seed(options.seed, i);
        const std::size_t targets[] = {node};
        p.outcome = monte_carlo(net, targets, options.horizon, options.iterations, p.seed, options.estimator,
                                options.threads)
                        .front();
        p.z = z_score(p.outcome.mean, p.analytic, p.outcome.std_error);
        sweep.points.push_back(std::move(p));
    }
    definition["cases"] = cases;
    sweep.config_digest = digest(definition);

    if (fit && values.size() >= 2) {
        std::vector<double> x, y;
        for (const auto& p : sweep.points) {
            x.push_back(p.param);
            y.push_back(p.outcome.mean);
        }
        sweep.fit = least_squares(x, y);
    }
    return sweep;
}

ExperimentSweep sweep_source_mean(const std::vector<double>& m_values, const SweepOptions& options) {
    return run_sweep("source_mean", m_values,
                     [](double m) { return SweepCase{source_mean_network(m), "3"}; }, options, false);
}

ExperimentSweep sweep_hop_count(const std::vector<int>& n_values, const SweepOptions& options) {
    const std::vector<double> values(n_values.begin(), n_values.end());
    return run_sweep("hop_count", values,
                     [](double v) {
                         const int n = static_cast<int>(v);
                         return SweepCase{hop_count_network(n), std::to_string(n)};
                     },
                     options, true);
}

ExperimentSweep sweep_link_variance(const std::vector<double>& v_values, const SweepOptions& options) {
    for (double v : v_values) {
        if (!(v >= 0.0) || v > 1.0 / 3.0) {
            throw Error(ErrorKind::InvalidParameter,
                        "link variance v=" + format_number(v) + " outside [0, 1/3]; the support would go negative");
        }
    }
    return run_sweep("link_variance", v_values,
                     [](double v) { return SweepCase{link_variance_network(v), "4"}; }, options, true);
}

std::string sweep_csv(const ExperimentSweep& sweep) {
    std::ostringstream os;
    os << "# tool=" << kToolName << " version=" << kToolVersion << '\n';
    os << "# config_hash=" << sweep.config_digest << " seed=" << sweep.options.seed
       << " estimator=" << to_string(sweep.options.estimator) << '\n';
    if (sweep.fit) {
        os << "# fit slope=" << format_number(sweep.fit->slope)
           << " intercept=" << format_number(sweep.fit->intercept) << '\n';
    }
    os << "sweep_kind,param,analytic,mc_mean,mc_stderr,z,iterations,horizon,seed\n";
    for (const auto& p : sweep.points) {
        os << sweep.kind << ',' << format_number(p.param) << ',' << format_number(p.analytic) << ','
           << format_number(p.outcome.mean) << ',' << format_number(p.outcome.std_error) << ','
           << format_number(p.z) << ',' << p.outcome.iterations << ',' << format_number(p.outcome.horizon) << ','
           << p.seed << '\n';
    }
    return os.str();
}

std::string sweep_json(const ExperimentSweep& sweep) {
    nlohmann::json j;
    j["provenance"] = {{"tool", kToolName}, {"version", kToolVersion},
                       {"config_hash", sweep.config_digest}, {"seed", sweep.options.seed}};
    j["sweep_kind"] = sweep.kind;
    j["iterations"] = sweep.options.iterations;
    j["horizon"] = sweep.options.horizon;
    j["estimator"] = std::string(to_string(sweep.options.estimator));
    j["passed"] = sweep.passed();
    j["exceedances"] = sweep.exceedances();
    if (sweep.fit) {
        j["fit"] = {{"slope", sweep.fit->slope}, {"intercept", sweep.fit->intercept}};
    } else {
        j["fit"] = nullptr;
    }
    j["points"] = nlohmann::json::array();
    for (const auto& p : sweep.points) {
        j["points"].push_back({{"param", p.param}, {"analytic", p.analytic}, {"z", p.z},
                               {"seed", p.seed}, {"outcome", to_json(p.outcome)}});
    }
    return j.dump(2) + "\n";
}

} // namespace vage

#include "vage/cli.hpp"

#include "vage/analytic.hpp"
#include "vage/config.hpp"
#include "vage/error.hpp"
#include "vage/experiments.hpp"
#include "vage/renewal.hpp"
#include "vage/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace vage::cli {

namespace {

struct CommonFlags {
    std::optional<double> horizon;
    std::optional<std::uint64_t> iterations;
    std::optional<std::uint64_t> seed;
    std::string estimator;
    std::string out;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--horizon", flags.horizon, "simulation horizon T");
    cmd->add_option("--iterations", flags.iterations, "Monte Carlo replications");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--estimator", flags.estimator, "terminal | time_average");
    cmd->add_option("--out", flags.out, "output path prefix (writes <out>.csv and <out>.json)");
    cmd->add_option("--threads", flags.threads, "worker threads (speed only; 0 = VAGE_THREADS or all cores)");
}

Estimator estimator_or(const std::string& text, Estimator fallback) {
    if (text.empty()) return fallback;
    if (auto e = parse_estimator(text)) return *e;
    throw Error(ErrorKind::ConfigParse, "--estimator: expected 'terminal' or 'time_average', got '" + text + "'");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::ConfigParse, "cannot write '" + path + "'");
    f << content;
}

// Built-in networks for the reference experiments.
std::optional<RunConfig> builtin_config(const std::string& name) {
    RunConfig config{hop_count_network(0)};
    if (name == "fig5") config.network = source_mean_network(1.0 / 3.0);
    else if (name == "fig6") config.network = hop_count_network(6);
    else if (name == "fig7") config.network = link_variance_network(1.0 / 3.0);
    else return std::nullopt;
    return config;
}

RunConfig resolve_config(const std::string& name_or_path) {
    if (auto c = builtin_config(name_or_path)) return *c;
    return load_run_config(name_or_path);
}

std::vector<std::size_t> resolve_targets(const CacheNetwork& net, const std::vector<std::string>& names) {
    if (names.empty()) return net.leaves();
    std::vector<std::size_t> out;
    for (const auto& n : names) out.push_back(net.require_node(n));
    return out;
}

std::string fixed(double x, int digits = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

int cmd_analytic(const std::string& config_name, bool as_json, std::ostream& out) {
    const RunConfig config = resolve_config(config_name);
    const CacheNetwork net(config.network);
    if (net.topology() == Topology::General) {
        throw Error(ErrorKind::NotATree, "closed form requires tree; network is GENERAL (some node has several feeders)");
    }
    const AnalyticAge age = expected_version_age(net);

    if (as_json) {
        nlohmann::json j;
        j["provenance"] = {{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", config_hash(net, config)}};
        j["topology"] = std::string(to_string(net.topology()));
        j["source_mean"] = age.source_mean;
        j["nodes"] = nlohmann::json::array();
        for (std::size_t i = 0; i < net.node_count(); ++i) {
            j["nodes"].push_back({{"node", net.name(i)}, {"expected_age", age.node_age[i]}});
        }
        j["links"] = nlohmann::json::array();
        for (std::size_t k = 0; k < net.links().size(); ++k) {
            const auto& l = net.links()[k];
            j["links"].push_back({{"from", net.name(l.from)}, {"to", net.name(l.to)},
                                  {"dist", to_json(l.dist)}, {"contribution", age.link_contribution[k]}});
        }
        j["warnings"] = age.warnings;
        out << j.dump(2) << '\n';
        return kExitOk;
    }

    out << "topology " << to_string(net.topology()) << ", source '" << net.name(net.source()) << "' "
        << net.source_dist().describe() << ", E[Y_source] = " << format_number(age.source_mean) << '\n';
    out << "node\texpected_age\tpath_contributions\n";
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        out << net.name(i) << '\t' << fixed(age.node_age[i]) << '\t';
        const auto path = path_to_source(net, i);
        for (std::size_t p = 0; p < path.size(); ++p) {
            out << (p ? " + " : "") << fixed(age.link_contribution[path[p]]);
        }
        out << (path.empty() ? "-" : " (/ " + format_number(age.source_mean) + ")") << '\n';
    }
    out << "link\tcontribution\tdistribution\n";
    for (std::size_t k = 0; k < net.links().size(); ++k) {
        const auto& l = net.links()[k];
        out << net.name(l.from) << "->" << net.name(l.to) << '\t' << fixed(age.link_contribution[k], 6) << '\t'
            << l.dist.describe() << '\n';
    }
    for (const auto& w : age.warnings) out << "warning: " << w << '\n';
    return kExitOk;
}

int cmd_simulate(const std::string& config_name, const CommonFlags& flags, const std::vector<std::string>& targets_flag,
                 std::ostream& out) {
    RunConfig config = resolve_config(config_name);
    if (flags.horizon) config.horizon = *flags.horizon;
    if (flags.iterations) config.iterations = *flags.iterations;
    if (flags.seed) config.seed = *flags.seed;
    config.estimator = estimator_or(flags.estimator, config.estimator);
    if (!targets_flag.empty()) config.targets = targets_flag;
    if (!flags.out.empty()) config.output = flags.out;
    if (!(config.horizon > 0.0)) throw Error(ErrorKind::InvalidParameter, "--horizon must be > 0");
    if (config.iterations < 1) throw Error(ErrorKind::InvalidParameter, "--iterations must be >= 1");

    const CacheNetwork net(config.network);
    const auto targets = resolve_targets(net, config.targets);
    const auto outcomes =
        monte_carlo(net, targets, config.horizon, config.iterations, config.seed, config.estimator, flags.threads);
    std::optional<AnalyticAge> analytic;
    if (net.topology() != Topology::General) analytic = expected_version_age(net);

    const std::string hash = config_hash(net, config);
    std::ostringstream csv;
    csv << "# tool=" << kToolName << " version=" << kToolVersion << '\n';
    csv << "# config_hash=" << hash << " seed=" << config.seed << " topology=" << to_string(net.topology()) << '\n';
    csv << "target,estimator,analytic,mc_mean,mc_stderr,z,iterations,horizon,seed\n";
    nlohmann::json j;
    j["provenance"] = {{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", hash}, {"seed", config.seed}};
    j["network"] = normalized_dump(net);
    j["topology"] = std::string(to_string(net.topology()));
    j["outcomes"] = nlohmann::json::array();
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const auto& o = outcomes[k];
        std::string analytic_text, z_text;
        nlohmann::json entry = to_json(o);
        if (analytic) {
            const double a = analytic->node_age[targets[k]];
            const double z = z_score(o.mean, a, o.std_error);
            analytic_text = format_number(a);
            z_text = format_number(z);
            entry["analytic"] = a;
            entry["z"] = z;
        }
        csv << o.target << ',' << to_string(o.estimator) << ',' << analytic_text << ',' << format_number(o.mean) << ','
            << format_number(o.std_error) << ',' << z_text << ',' << o.iterations << ',' << format_number(o.horizon)
            << ',' << o.seed << '\n';
        j["outcomes"].push_back(std::move(entry));
    }

    if (config.output.empty()) {
        out << csv.str();
    } else {
        write_file(config.output + ".csv", csv.str());
        write_file(config.output + ".json", j.dump(2) + "\n");
        out << "wrote " << config.output << ".csv and " << config.output << ".json\n";
    }
    return kExitOk;
}

int cmd_verify(std::vector<std::string> literals, std::uint64_t paths, const std::string& t_grid_text,
               std::optional<double> t_large_flag, const std::string& source_literal, const CommonFlags& flags,
               std::ostream& out) {
    if (literals.empty()) {
        literals = {"exponential:rate=1", "uniform:lo=0,hi=2", "rayleigh:sigma=1", "chi_square:k=1",
                    "beta:alpha=2,beta=3", "pareto1:a=3,m=1/3", "deterministic:c=1"};
    }
    const std::vector<double> t_grid = parse_value_list(t_grid_text);
    const DistributionSpec source = parse_distribution_literal(source_literal);
    const std::uint64_t seed = flags.seed.value_or(1);
    bool all_pass = true;

    auto report = [&](const std::string& check, const DistributionSpec& spec, const ZScore& z) {
        const bool pass = std::abs(z.z) < 4.0;
        all_pass = all_pass && pass;
        out << (pass ? "PASS" : "FAIL") << '\t' << check << '\t' << spec.describe() << "\tt=" << format_number(z.t)
            << "\testimate=" << fixed(z.estimate, 6) << "\ttarget=" << fixed(z.target, 6)
            << "\tstderr=" << fixed(z.std_error, 6) << "\tz=" << fixed(z.z, 3) << '\n';
    };

    for (std::size_t i = 0; i < literals.size(); ++i) {
        const DistributionSpec spec = parse_distribution_literal(literals[i]);
        const std::uint64_t spec_seed = hash_combine(seed, i);
        for (const auto& z : verify_martingale_zero_mean(spec, t_grid, paths, spec_seed, flags.threads)) {
            report("martingale", spec, z);
        }
        const double mean = moments(spec).mean;
        const double t_large = t_large_flag.value_or(std::max(1000.0, 50.0 * mean));
        report("backward_recurrence", spec,
               verify_backward_recurrence_limit(spec, t_large, paths, hash_combine(spec_seed, 1), flags.threads));
        const double lemma_t = std::max(t_large, 50.0 * moments(source).mean);
        report("lemma2(source=" + source.describe() + ")", spec,
               verify_lemma2(source, spec, lemma_t, paths, hash_combine(spec_seed, 2), flags.threads));
    }
    return all_pass ? kExitOk : kExitGateFailed;
}

int cmd_sweep(const std::string& kind, const CommonFlags& flags, const std::string& values_text,
              const std::string& config_path, const std::string& param_pointer, std::ostream& out) {
    SweepOptions options;
    if (flags.horizon) options.horizon = *flags.horizon;
    if (flags.iterations) options.iterations = *flags.iterations;
    if (flags.seed) options.seed = *flags.seed;
    options.estimator = estimator_or(flags.estimator, Estimator::Terminal);
    options.threads = flags.threads;

    ExperimentSweep sweep;
    if (kind == "fig5") {
        sweep = sweep_source_mean(parse_value_list(values_text.empty() ? "1/6,1/3,2/3,1" : values_text), options);
    } else if (kind == "fig6") {
        std::vector<int> n;
        for (double v : parse_value_list(values_text.empty() ? "1..6" : values_text)) {
            if (v != std::floor(v)) throw Error(ErrorKind::InvalidParameter, "--n values must be integers");
            n.push_back(static_cast<int>(v));
        }
        sweep = sweep_hop_count(n, options);
    } else if (kind == "fig7") {
        sweep = sweep_link_variance(parse_value_list(values_text.empty() ? "0.05,0.15,0.25,1/3" : values_text), options);
    } else if (kind == "custom") {
        if (config_path.empty() || param_pointer.empty() || values_text.empty()) {
            throw Error(ErrorKind::ConfigParse, "sweep custom needs --config, --param (JSON pointer) and --values");
        }
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorKind::ConfigParse, config_path + ": cannot open file");
        std::stringstream buffer;
        buffer << in.rdbuf();
        const RunConfig base = parse_run_config(buffer.str());
        const nlohmann::json base_json = nlohmann::json::parse(buffer.str());
        const CacheNetwork base_net(base.network);
        const auto targets = resolve_targets(base_net, base.targets);
        if (targets.size() != 1) {
            throw Error(ErrorKind::ConfigParse, "sweep custom needs exactly one target (set \"targets\" in the config)");
        }
        const std::string target = base_net.name(targets.front());
        nlohmann::json::json_pointer pointer;
        try {
            pointer = nlohmann::json::json_pointer(param_pointer);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::ConfigParse, "--param: " + std::string(e.what()));
        }
        if (!base_json.contains(pointer) || !base_json.at(pointer).is_number()) {
            throw Error(ErrorKind::ConfigParse, "--param " + param_pointer + ": does not name a numeric field");
        }
        const bool integral = base_json.at(pointer).is_number_integer();
        options.horizon = flags.horizon.value_or(base.horizon);
        options.iterations = flags.iterations.value_or(base.iterations);
        options.seed = flags.seed.value_or(base.seed);
        options.estimator = estimator_or(flags.estimator, base.estimator);
        sweep = run_sweep("custom", parse_value_list(values_text),
                          [&](double v) {
                              nlohmann::json j = base_json;
                              // integer fields (e.g. chi_square k) stay integers when the value is whole
                              if (integral && v == std::floor(v)) j[pointer] = static_cast<std::int64_t>(v);
                              else j[pointer] = v;
                              return SweepCase{parse_network(j), target};
                          },
                          options, true);
    } else {
        throw Error(ErrorKind::ConfigParse, "unknown sweep '" + kind + "' (expected fig5|fig6|fig7|custom)");
    }

    const std::string csv = sweep_csv(sweep);
    if (flags.out.empty()) {
        out << csv;
    } else {
        write_file(flags.out + ".csv", csv);
        write_file(flags.out + ".json", sweep_json(sweep));
        out << "wrote " << flags.out << ".csv and " << flags.out << ".json\n";
    }
    return sweep.passed() ? kExitOk : kExitGateFailed;
}

} // namespace

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const double lo = parse_number(text.substr(0, dots));
        const double hi = parse_number(text.substr(dots + 2));
        if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo) {
            throw Error(ErrorKind::ConfigParse, "range '" + text + "' must be integer lo..hi with lo <= hi");
        }
        for (double v = lo; v <= hi; v += 1.0) values.push_back(v);
        return values;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(parse_number(item));
    }
    if (values.empty()) throw Error(ErrorKind::ConfigParse, "empty value list");
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Version age of information in multi-hop cache networks", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    std::string config_name;
    bool as_json = false;
    auto* analytic = app.add_subcommand("analytic", "closed-form expected version age (PATH/TREE networks)");
    analytic->add_option("config", config_name, "config file or fig5|fig6|fig7")->required();
    analytic->add_flag("--json", as_json, "emit JSON");

    CommonFlags sim_flags;
    std::vector<std::string> targets;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of version age");
    simulate->add_option("config", config_name, "config file or fig5|fig6|fig7")->required();
    simulate->add_option("--targets", targets, "target nodes (default: config targets, else leaves)")->delimiter(',');
    add_common(simulate, sim_flags);

    CommonFlags verify_flags;
    std::vector<std::string> literals;
    std::uint64_t paths = 100000;
    std::string t_grid = "10,100";
    std::optional<double> t_large;
    std::string source_literal = "exponential:rate=1";
    auto* verify = app.add_subcommand("verify", "statistical checks of the renewal identities");
    verify->add_option("spec", literals, "distributions, e.g. uniform:lo=0,hi=2 (default: reference set)");
    verify->add_option("--paths", paths, "independent paths per check");
    verify->add_option("--t-grid", t_grid, "martingale inspection times");
    verify->add_option("--t-large", t_large, "inspection time for the limit checks");
    verify->add_option("--source", source_literal, "source process for the composition check");
    verify->add_option("--seed", verify_flags.seed, "master seed");
    verify->add_option("--threads", verify_flags.threads, "worker threads (speed only; 0 = VAGE_THREADS or all cores)");

    CommonFlags sweep_flags;
    std::string sweep_kind, values, sweep_config, param;
    auto* sweep = app.add_subcommand("sweep", "parameter sweep: analytic vs Monte Carlo");
    sweep->add_option("kind", sweep_kind, "fig5 | fig6 | fig7 | custom")->required();
    sweep->add_option("--values,--m,--n,--v", values, "sweep values: list (1/6,1/3) or range (1..6)");
    sweep->add_option("--config", sweep_config, "base config for custom sweeps");
    sweep->add_option("--param", param, "JSON pointer of the swept field, e.g. /source_dist/m");
    add_common(sweep, sweep_flags);

    std::vector<std::string> argv_storage;
    argv_storage.push_back(kToolName);
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*analytic) return cmd_analytic(config_name, as_json, out);
        if (*simulate) return cmd_simulate(config_name, sim_flags, targets, out);
        if (*verify) return cmd_verify(literals, paths, t_grid, t_large, source_literal, verify_flags, out);
        if (*sweep) return cmd_sweep(sweep_kind, sweep_flags, values, sweep_config, param, out);
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) {
        err << "error [ConfigParse]: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}

} // namespace vage::cli

#include "vage/config.hpp"

#include "vage/error.hpp"

#include <charconv>
#include <cmath>
#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace vage {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::ConfigParse, where + ": " + what);
}

double number_field(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail(where, "missing parameter '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

const std::set<std::string>& parameter_names(const std::string& type) {
    static const std::map<std::string, std::set<std::string>> names{
        {"exponential", {"rate"}}, {"uniform", {"lo", "hi"}},       {"rayleigh", {"sigma"}},
        {"chi_square", {"k"}},     {"beta", {"alpha", "beta"}},     {"pareto1", {"a", "m"}},
        {"deterministic", {"c"}},
    };
    static const std::set<std::string> none;
    const auto it = names.find(type);
    return it == names.end() ? none : it->second;
}

std::string string_field(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail(where, "missing field '" + key + "'");
    if (!j.at(key).is_string()) fail(where + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

std::uint64_t unsigned_field(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail(key, "expected a nonnegative integer");
}

} // namespace

double parse_number(std::string_view text) {
    auto parse_plain = [&](std::string_view part) {
        double value = 0.0;
        const auto res = std::from_chars(part.data(), part.data() + part.size(), value);
        if (res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
            throw Error(ErrorKind::ConfigParse, "not a number: '" + std::string(text) + "'");
        }
        return value;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_plain(text);
    return parse_plain(text.substr(0, slash)) / parse_plain(text.substr(slash + 1));
}

DistributionSpec parse_distribution(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a distribution object");
    const std::string type = string_field(j, "type", where);
    const auto& allowed = parameter_names(type);
    if (allowed.empty()) {
        fail(where + ".type", "unknown distribution '" + type +
                                  "' (expected exponential|uniform|rayleigh|chi_square|beta|pareto1|deterministic)");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "type" && !allowed.contains(key)) fail(where, "unexpected parameter '" + key + "' for " + type);
    }
    auto num = [&](const std::string& key) { return number_field(j, key, where); };
    try {
        if (type == "exponential") return Exponential{num("rate")};
        if (type == "uniform") return Uniform{num("lo"), num("hi")};
        if (type == "rayleigh") return Rayleigh{num("sigma")};
        if (type == "chi_square") {
            const double k = num("k");
            if (k != std::floor(k) || k < 1 || k > 1e6) fail(where + ".k", "expected a positive integer");
            return ChiSquare{static_cast<int>(k)};
        }
        if (type == "beta") return Beta{num("alpha"), num("beta")};
        if (type == "pareto1") return ParetoI{num("a"), num("m")};
        return Deterministic{num("c")};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidParameter) throw Error(e.kind(), where + ": " + e.what());
        throw;
    }
}

DistributionSpec parse_distribution_literal(std::string_view text) {
    if (!text.empty() && text.front() == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::ConfigParse, std::string("distribution literal: ") + e.what());
        }
        return parse_distribution(j, "distribution");
    }
    const auto colon = text.find(':');
    json j;
    j["type"] = std::string(text.substr(0, colon));
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw Error(ErrorKind::ConfigParse, "distribution literal: expected key=value, got '" + std::string(item) + "'");
            }
            j[std::string(item.substr(0, eq))] = parse_number(item.substr(eq + 1));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    return parse_distribution(j, std::string(text));
}

json to_json(const DistributionSpec& spec) {
    json j{{"type", std::string(spec.type_name())}};
    std::visit([&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) j["rate"] = d.rate;
        else if constexpr (std::is_same_v<T, Uniform>) { j["lo"] = d.lo; j["hi"] = d.hi; }
        else if constexpr (std::is_same_v<T, Rayleigh>) j["sigma"] = d.sigma;
        else if constexpr (std::is_same_v<T, ChiSquare>) j["k"] = d.k;
        else if constexpr (std::is_same_v<T, Beta>) { j["alpha"] = d.alpha; j["beta"] = d.beta; }
        else if constexpr (std::is_same_v<T, ParetoI>) { j["a"] = d.a; j["m"] = d.m; }
        else j["c"] = d.c;
    }, spec.params());
    return j;
}

json to_json(const NetworkDescription& desc) {
    json links = json::array();
    for (const auto& l : desc.links) {
        json entry{{"from", l.from}, {"to", l.to}, {"dist", to_json(l.dist)}};
        if (l.priority) entry["priority"] = *l.priority;
        links.push_back(std::move(entry));
    }
    return json{{"nodes", desc.nodes}, {"source", desc.source}, {"source_dist", to_json(desc.source_dist)},
                {"links", std::move(links)}};
}

json to_json(const SimOutcome& o) {
    return {{"target", o.target},
            {"estimator", std::string(to_string(o.estimator))},
            {"mean", o.mean},
            {"stderr", o.std_error},
            {"iterations", o.iterations},
            {"horizon", o.horizon},
            {"seed", o.seed},
            {"samples", o.samples}};
}

NetworkDescription parse_network(const json& j) {
    if (!j.is_object()) fail("config", "expected a JSON object at top level");
    if (!j.contains("nodes") || !j.at("nodes").is_array()) fail("nodes", "expected an array of node ids");
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < j.at("nodes").size(); ++i) {
        const json& n = j.at("nodes")[i];
        if (!n.is_string()) fail("nodes[" + std::to_string(i) + "]", "expected a string");
        nodes.push_back(n.get<std::string>());
    }
    const std::string source = string_field(j, "source", "config");
    if (!j.contains("source_dist")) fail("config", "missing field 'source_dist'");
    NetworkDescription desc{std::move(nodes), source, parse_distribution(j.at("source_dist"), "source_dist"), {}};

    if (j.contains("links")) {
        if (!j.at("links").is_array()) fail("links", "expected an array");
        for (std::size_t i = 0; i < j.at("links").size(); ++i) {
            const std::string where = "links[" + std::to_string(i) + "]";
            const json& l = j.at("links")[i];
            if (!l.is_object()) fail(where, "expected an object");
            if (!l.contains("dist")) fail(where, "missing field 'dist'");
            LinkDescription link{string_field(l, "from", where), string_field(l, "to", where),
                                 parse_distribution(l.at("dist"), where + ".dist"), std::nullopt};
            if (l.contains("priority")) {
                if (!l.at("priority").is_number_integer()) fail(where + ".priority", "expected an integer");
                link.priority = l.at("priority").get<int>();
            }
            desc.links.push_back(std::move(link));
        }
    }
    return desc;
}

RunConfig parse_run_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorKind::ConfigParse, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                                ": " + e.what());
    }

    RunConfig config{parse_network(j)};
    if (j.contains("horizon")) {
        if (!j.at("horizon").is_number() || !(j.at("horizon").get<double>() > 0.0)) fail("horizon", "expected a positive number");
        config.horizon = j.at("horizon").get<double>();
    }
    if (j.contains("iterations")) {
        config.iterations = unsigned_field(j, "iterations");
        if (config.iterations < 1) fail("iterations", "expected a positive integer");
    }
    if (j.contains("seed")) config.seed = unsigned_field(j, "seed");
    if (j.contains("targets")) {
        if (!j.at("targets").is_array()) fail("targets", "expected an array of node ids");
        for (std::size_t i = 0; i < j.at("targets").size(); ++i) {
            const json& t = j.at("targets")[i];
            if (!t.is_string()) fail("targets[" + std::to_string(i) + "]", "expected a string");
            const auto name = t.get<std::string>();
            if (std::find(config.network.nodes.begin(), config.network.nodes.end(), name) == config.network.nodes.end()) {
                fail("targets[" + std::to_string(i) + "]", "unknown node '" + name + "'");
            }
            config.targets.push_back(name);
        }
    }
    if (j.contains("estimator")) {
        const std::string e = string_field(j, "estimator", "config");
        const auto parsed = parse_estimator(e);
        if (!parsed) fail("estimator", "expected 'terminal' or 'time_average', got '" + e + "'");
        config.estimator = *parsed;
    }
    if (j.contains("output")) config.output = string_field(j, "output", "config");
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigParse, path + ": cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_run_config(buffer.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

json normalized_dump(const CacheNetwork& net) { return to_json(net.describe()); }

std::string config_hash(const CacheNetwork& net, const RunConfig& config) {
    json j{{"network", normalized_dump(net)},
           {"horizon", config.horizon},
           {"iterations", config.iterations},
           {"seed", config.seed},
           {"targets", config.targets},
           {"estimator", std::string(to_string(config.estimator))}};
    const std::string text = j.dump();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text.data(), text.size())));
    return buf;
}

} // namespace vage

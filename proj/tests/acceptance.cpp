// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Scale follows the criteria (horizon 1e3, 2e4 iterations).

#include "vage/analytic.hpp"
#include "vage/cli.hpp"
#include "vage/experiments.hpp"
#include "vage/parallel.hpp"
#include "vage/renewal.hpp"
#include "vage/simulator.hpp"

#include "hand_traces.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace vage;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

void gate_sweep(Verdict& v, const ExperimentSweep& sweep) {
    for (const auto& p : sweep.points) {
        v.require(std::abs(p.z) < 4.0, sweep.kind + " param=" + fmt(p.param) + " z=" + fmt(p.z));
    }
}

std::string summary(const ExperimentSweep& sweep) {
    double worst = 0.0;
    for (const auto& p : sweep.points) worst = std::max(worst, std::abs(p.z));
    std::string s = "max|z|=" + fmt(worst);
    if (sweep.fit) s += " slope=" + fmt(sweep.fit->slope) + " intercept=" + fmt(sweep.fit->intercept);
    return s;
}

SweepOptions scaled() {
    SweepOptions o;
    o.iterations = 20000;
    o.horizon = 1000.0;
    o.seed = 1;
    return o;
}

Verdict criterion1() {
    Verdict v;
    const auto sweep = sweep_source_mean({1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, scaled());
    gate_sweep(v, sweep);
    for (const auto& p : sweep.points) {
        const double mu0 = 1.5 * p.param;
        v.require(std::abs(p.analytic - 2.5479 / mu0) < 1e-4 * p.analytic, "analytic off 2.5479/mu0");
    }
    v.detail = v.pass ? summary(sweep) : v.detail;
    return v;
}

Verdict criterion2() {
    Verdict v;
    const auto sweep = sweep_hop_count({1, 2, 3, 4, 5, 6}, scaled());
    gate_sweep(v, sweep);
    v.require(sweep.fit && std::abs(sweep.fit->slope - 4.0 / 3.0) <= 0.02 * 4.0 / 3.0, "slope");
    v.detail = v.pass ? summary(sweep) : v.detail + " " + summary(sweep);
    return v;
}

Verdict criterion3() {
    Verdict v;
    const auto sweep = sweep_link_variance({0.05, 0.15, 0.25, 1.0 / 3.0}, scaled());
    gate_sweep(v, sweep);
    v.require(sweep.fit && std::abs(sweep.fit->slope - 4.0) <= 0.05 * 4.0, "slope");
    v.require(sweep.fit && std::abs(sweep.fit->intercept - 4.0) <= 0.02 * 4.0, "intercept");
    v.detail = v.pass ? summary(sweep) : v.detail + " " + summary(sweep);
    return v;
}

Verdict criterion4() {
    Verdict v;
    std::mt19937_64 rng(20260418);
    std::uniform_real_distribution<double> rate(0.2, 5.0);
    std::uniform_int_distribution<int> hops(1, 6);
    double worst_rel = 0.0, worst_z = 0.0;
    for (int t = 0; t < 20; ++t) {
        const double ls = rate(rng);
        std::vector<double> rates(hops(rng));
        for (auto& r : rates) r = rate(rng);
        double expected = 0.0;
        for (double r : rates) expected += 1.0 / r;
        expected *= ls;

        NetworkDescription d{{"0"}, "0", Exponential{ls}, {}};
        for (std::size_t k = 0; k < rates.size(); ++k) {
            d.nodes.push_back(std::to_string(k + 1));
            d.links.push_back({std::to_string(k), std::to_string(k + 1), Exponential{rates[k]}, std::nullopt});
        }
        const CacheNetwork net(d);
        const auto age = expected_version_age(net);
        const double got = age.node_age.back();
        const double rel = std::abs(got - expected) / expected;
        worst_rel = std::max(worst_rel, rel);
        v.require(rel <= 1e-12, "tuple " + std::to_string(t) + " rel=" + fmt(rel));
        v.require(std::abs(expected_version_age_poisson(ls, rates) - expected) <= 1e-12 * expected, "poisson helper");

        if (t < 3) {
            const std::size_t target[] = {rates.size()};
            const auto out = monte_carlo(net, target, 1000.0, 20000, 400 + t, Estimator::Terminal);
            const double z = z_score(out.front().mean, expected, out.front().std_error);
            worst_z = std::max(worst_z, std::abs(z));
            v.require(std::abs(z) < 4.0, "MC tuple " + std::to_string(t) + " z=" + fmt(z));
        }
    }
    if (v.pass) v.detail = "max rel err=" + fmt(worst_rel) + " max|z|=" + fmt(worst_z);
    return v;
}

Verdict criterion5() {
    Verdict v;
    const std::vector<DistributionSpec> specs{Exponential{1.0}, Uniform{0.0, 2.0}, Rayleigh{1.0},
                                              ChiSquare{1},     Beta{2.0, 3.0},    ParetoI{3.0, 1.0 / 3.0}};
    const double grid[] = {10.0, 100.0};
    const unsigned threads = default_threads();
    double worst = 0.0;
    std::uint64_t seed = 9000;
    auto note = [&](const ZScore& z, const std::string& what) {
        worst = std::max(worst, std::abs(z.z));
        v.require(std::abs(z.z) < 4.0, what + " z=" + fmt(z.z));
    };
    for (const auto& spec : specs) {
        for (const auto& z : verify_martingale_zero_mean(spec, grid, 100000, ++seed, threads)) {
            note(z, "martingale " + spec.describe() + " t=" + fmt(z.t));
        }
        const double t_large = 60.0 * moments(spec).mean;
        note(verify_backward_recurrence_limit(spec, std::max(t_large, 100.0), 100000, ++seed, threads),
             "backward " + spec.describe());
    }
    const std::vector<std::pair<DistributionSpec, DistributionSpec>> pairs{
        {Exponential{1.0}, Uniform{0.0, 2.0}},
        {ParetoI{3.0, 1.0 / 3.0}, Rayleigh{1.0}},
        {Uniform{0.5, 1.5}, Beta{2.0, 3.0}},
    };
    for (const auto& [src, probe] : pairs) {
        note(verify_lemma2(src, probe, 100.0, 100000, ++seed, threads),
             "lemma2 " + src.describe() + " / " + probe.describe());
    }
    if (v.pass) v.detail = "max|z|=" + fmt(worst);
    return v;
}

Verdict criterion6() {
    Verdict v;
    auto label = [](const CacheNetwork& net, std::size_t stream) -> std::string {
        if (stream == 0) return "source";
        const auto& l = net.links()[stream - 1];
        return net.name(l.from) + "->" + net.name(l.to);
    };
    int n = 0;
    for (const auto& inst : hand::instances()) {
        ++n;
        const CacheNetwork net(inst.network);
        const SimTrace trace = simulate_trace(net, inst.horizon, 0, SimOptions{true});
        bool ok = trace.steps.size() == inst.rows.size();
        for (std::size_t i = 0; ok && i < inst.rows.size(); ++i) {
            ok = std::abs(trace.steps[i].time - inst.rows[i].time) <= 1e-12 * std::max(1.0, inst.rows[i].time) &&
                 label(net, trace.steps[i].stream) == inst.rows[i].stream &&
                 trace.steps[i].versions == inst.rows[i].versions;
        }
        ok = ok && trace.result.terminal_age == inst.final_age;
        v.require(ok, inst.name);
    }
    if (v.pass) v.detail = std::to_string(n) + " instances";
    return v;
}

Verdict criterion7() {
    Verdict v;
    const std::vector<DistributionSpec> specs{
        Exponential{1.0}, Exponential{2.5}, Uniform{0.0, 2.0}, Uniform{0.5, 1.5}, Rayleigh{1.0}, Rayleigh{3.0},
        ChiSquare{1},     ChiSquare{3},     Beta{2.0, 3.0},    Beta{0.5, 0.5},    ParetoI{3.0, 1.0 / 3.0},
        ParetoI{2.5, 1.0}, ParetoI{6.0, 2.0}};
    double worst = 0.0;
    for (const auto& spec : specs) {
        const auto q = oracle::quadrature_moments(spec);
        const auto m = moments(spec);
        if (!q) {
            v.require(false, "no oracle for " + spec.describe());
            continue;
        }
        const double e1 = std::abs(m.mean - q->mean) / std::abs(q->mean);
        const double e2 = std::abs(m.second_moment - q->second_moment) / std::abs(q->second_moment);
        worst = std::max({worst, e1, e2});
        v.require(e1 <= 1e-9 && e2 <= 1e-9, spec.describe());
    }
    if (v.pass) v.detail = std::to_string(specs.size()) + " specs, max rel err=" + fmt(worst);
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict criterion8() {
    Verdict v;
    const auto dir = std::filesystem::temp_directory_path() / "vage_acceptance";
    std::filesystem::create_directories(dir);
    auto run = [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return std::make_pair(code, out.str());
    };
    int compared = 0;
    for (const std::string cmd : {"simulate", "sweep"}) {
        std::vector<std::string> outputs;
        for (const std::string threads : {"1", "2", "7"}) {
            const auto base = (dir / (cmd + "_" + threads)).string();
            std::vector<std::string> args = cmd == "simulate"
                ? std::vector<std::string>{"simulate", "fig7", "--iterations", "2000", "--horizon", "300"}
                : std::vector<std::string>{"sweep", "fig6", "--n", "1..6", "--iterations", "1000", "--horizon", "200"};
            for (const std::string a : {"--seed", "7", "--threads", threads.c_str(), "--out", base.c_str()}) {
                args.push_back(a);
            }
            const auto [code, text] = run(args);
            v.require(code != cli::kExitInvalid, cmd + " exited " + std::to_string(code));
            outputs.push_back(slurp(base + ".csv") + '\0' + slurp(base + ".json"));
        }
        for (std::size_t i = 1; i < outputs.size(); ++i) {
            ++compared;
            v.require(outputs[i] == outputs[0], cmd + " output differs across --threads");
        }
        v.require(outputs[0].size() > 100, cmd + " wrote nothing");
    }
    if (v.pass) v.detail = std::to_string(compared) + " file pairs byte-identical";
    return v;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 source-mean sweep (3-hop chain)", criterion1},
        {"2 hop-count sweep", criterion2},
        {"3 link-variance sweep", criterion3},
        {"4 Poisson cross-check", criterion4},
        {"5 renewal lemma suite", criterion5},
        {"6 exact hand traces", criterion6},
        {"7 moments vs quadrature", criterion7},
        {"8 determinism across --threads", criterion8},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!v.pass) ++failures;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << name << "  [" << fmt(secs) << " s]  " << v.detail
                  << std::endl;
    }
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}

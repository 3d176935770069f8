#include "vage/analytic.hpp"
#include "vage/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace vage;

namespace {

NetworkDescription chain(DistributionSpec source, std::vector<DistributionSpec> links) {
    NetworkDescription d{{"0"}, "0", std::move(source), {}};
    for (std::size_t k = 0; k < links.size(); ++k) {
        d.nodes.push_back(std::to_string(k + 1));
        d.links.push_back({std::to_string(k), std::to_string(k + 1), links[k], std::nullopt});
    }
    return d;
}

double end_age(const NetworkDescription& d) {
    const CacheNetwork net(d);
    return expected_version_age(net).node_age.back();
}

} // namespace

TEST_CASE("link contribution") {
    CHECK(link_contribution(Uniform{0.0, 2.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(link_contribution(Exponential{4.0}) == doctest::Approx(0.25).epsilon(1e-15));
    for (double v : {0.01, 0.1, 0.2, 1.0 / 3.0}) {
        const double w = std::sqrt(3.0 * v);
        CHECK(link_contribution(Uniform{std::max(0.0, 1.0 - w), 1.0 + w}) == doctest::Approx((1.0 + v) / 2.0).epsilon(1e-12));
    }
    CHECK(link_contribution(Deterministic{3.0}) == doctest::Approx(1.5));
    try {
        link_contribution(ParetoI{2.0, 1.0});
        FAIL("expected InfiniteMoment");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfiniteMoment);
    }
}

TEST_CASE("expected version age: reference networks") {
    for (double m : {1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
        const double mu0 = 1.5 * m;
        CHECK(end_age(source_mean_network(m)) == doctest::Approx(2.5479 / mu0).epsilon(5e-5));
    }
    CHECK(end_age(source_mean_network(1.0 / 3.0)) == doctest::Approx(5.0958).epsilon(5e-5));
    CHECK(end_age(source_mean_network(2.0 / 3.0)) == doctest::Approx(2.5479).epsilon(5e-5));

    CHECK(end_age(chain(Exponential{3.0}, {Exponential{1.5}})) == doctest::Approx(2.0).epsilon(1e-14));
    // One hop with a general link: lambda_s * E[Y^2] / (2 E[Y]).
    CHECK(end_age(chain(Exponential{2.0}, {Rayleigh{1.0}})) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / 3.141592653589793)).epsilon(1e-14));

    for (double v : {0.05, 1.0 / 6.0, 0.25, 1.0 / 3.0}) {
        CHECK(end_age(link_variance_network(v)) == doctest::Approx(4.0 * v + 4.0).epsilon(1e-12));
    }
    CHECK(end_age(link_variance_network(1.0 / 3.0)) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK(end_age(link_variance_network(1.0 / 6.0)) == doctest::Approx(14.0 / 3.0).epsilon(1e-12));
    for (int n = 1; n <= 6; ++n) CHECK(end_age(hop_count_network(n)) == doctest::Approx(4.0 * n / 3.0).epsilon(1e-12));
}

TEST_CASE("expected version age: source is zero, tree uses per-leaf paths") {
    NetworkDescription d{{"s", "a", "b", "c"}, "s", Exponential{1.0},
                         {{"s", "a", Uniform{0.0, 2.0}, std::nullopt},
                          {"s", "b", Exponential{2.0}, std::nullopt},
                          {"a", "c", Deterministic{1.0}, std::nullopt}}};
    const CacheNetwork net(d);
    const auto age = expected_version_age(net);
    CHECK(age.node_age[0] == 0.0);
    CHECK(age.node_age[1] == doctest::Approx(2.0 / 3.0));
    CHECK(age.node_age[2] == doctest::Approx(0.5));
    CHECK(age.node_age[3] == doctest::Approx(2.0 / 3.0 + 0.5));
    REQUIRE(age.warnings.size() == 1);
    CHECK(age.warnings[0].find("a->c") != std::string::npos);
}

TEST_CASE("expected version age: errors") {
    NetworkDescription diamond{{"s", "a", "b", "c"}, "s", Exponential{1.0},
                               {{"s", "a", Exponential{1.0}, std::nullopt},
                                {"s", "b", Exponential{1.0}, std::nullopt},
                                {"a", "c", Exponential{1.0}, std::nullopt},
                                {"b", "c", Exponential{1.0}, std::nullopt}}};
    try {
        expected_version_age(CacheNetwork(diamond));
        FAIL("expected NotATree");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotATree);
        CHECK(std::string(e.what()).find("closed form requires tree") != std::string::npos);
    }
    try {
        expected_version_age(CacheNetwork(chain(Exponential{1.0}, {Exponential{1.0}, ParetoI{1.5, 1.0}})));
        FAIL("expected InfiniteMoment");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfiniteMoment);
        CHECK(std::string(e.what()).find("1->2") != std::string::npos);
    }
    try {
        expected_version_age(CacheNetwork(chain(ParetoI{2.0, 1.0}, {Exponential{1.0}})));
        FAIL("expected InfiniteMoment");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfiniteMoment);
        CHECK(std::string(e.what()).find("source") != std::string::npos);
    }
}

TEST_CASE("Poisson closed form") {
    const double two_ones[] = {1.0, 1.0};
    CHECK(expected_version_age_poisson(1.0, two_ones) == 2.0);
    CHECK(expected_version_age_poisson(3.0, {}) == 0.0);
    const double four[] = {4.0};
    CHECK(expected_version_age_poisson(2.0, four) == 0.5);
    const double bad[] = {1.0, 0.0};
    CHECK_THROWS_AS(expected_version_age_poisson(1.0, bad), Error);
    CHECK_THROWS_AS(expected_version_age_poisson(-1.0, four), Error);
}

TEST_CASE("Poisson reduction holds for random rate tuples") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> rate(0.05, 20.0);
    std::uniform_int_distribution<int> hops(1, 8);
    for (int i = 0; i < 100; ++i) {
        const double source = rate(rng);
        std::vector<double> rates(hops(rng));
        std::vector<DistributionSpec> links;
        for (auto& r : rates) {
            r = rate(rng);
            links.push_back(Exponential{r});
        }
        const double closed = expected_version_age_poisson(source, rates);
        CHECK(std::abs(end_age(chain(Exponential{source}, links)) - closed) <= 1e-13 * closed);
    }
}

TEST_CASE("properties: ordering invariance, additivity, source scaling") {
    std::vector<DistributionSpec> links{Rayleigh{1.0}, ChiSquare{1}, Beta{2.0, 3.0}, Uniform{0.0, 2.0}};
    const double base = end_age(chain(ParetoI{3.0, 0.5}, links));
    std::sort(links.begin(), links.end(), [](const DistributionSpec& a, const DistributionSpec& b) {
        return a.type_name() < b.type_name();
    });
    do {
        CHECK(end_age(chain(ParetoI{3.0, 0.5}, links)) == doctest::Approx(base).epsilon(1e-14));
    } while (std::next_permutation(links.begin(), links.end(), [](const DistributionSpec& a, const DistributionSpec& b) {
        return a.type_name() < b.type_name();
    }));

    const CacheNetwork net(chain(ParetoI{3.0, 0.5}, links));
    const auto age = expected_version_age(net);
    for (std::size_t k = 0; k < links.size(); ++k) {
        CHECK(age.node_age[k + 1] - age.node_age[k] ==
              doctest::Approx(age.link_contribution[k] / age.source_mean).epsilon(1e-12));
    }

    // Scaling the source mean by alpha divides every age by alpha.
    for (double alpha : {0.5, 2.0, 7.0}) {
        const auto scaled = expected_version_age(CacheNetwork(chain(ParetoI{3.0, 0.5 * alpha}, links)));
        for (std::size_t node = 0; node < net.node_count(); ++node) {
            CHECK(scaled.node_age[node] * alpha == doctest::Approx(age.node_age[node]).epsilon(1e-14));
        }
    }
}

TEST_CASE("deterministic links minimize the contribution at fixed mean") {
    const double c = 2.0;
    const double det = link_contribution(Deterministic{c});
    CHECK(det == doctest::Approx(c / 2.0));
    const std::vector<DistributionSpec> same_mean{
        Exponential{1.0 / c}, Uniform{0.0, 2.0 * c}, Uniform{1.5, 2.5}, Rayleigh{c / std::sqrt(3.141592653589793 / 2.0)},
        ChiSquare{2}, ParetoI{3.0, c * 2.0 / 3.0}};
    for (const auto& spec : same_mean) {
        CAPTURE(spec.describe());
        REQUIRE(moments(spec).mean == doctest::Approx(c));
        CHECK(link_contribution(spec) > det);
    }
}

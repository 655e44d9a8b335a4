// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "riskdp/errors.hpp"
#include "riskdp/harness.hpp"
#include "riskdp/risk.hpp"
#include "riskdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace riskdp;

namespace {

template <typename Fn>
std::string validation_code(Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.code();
    }
    return "";
}

std::vector<RiskSpec> spec_families() {
    return {RiskSpec::expectation(), RiskSpec::cvar(0.25), RiskSpec::cvar(0.7),
            RiskSpec::mean_cvar(0.5, 0.25), RiskSpec::worst_case()};
}

double sigma_on(const RiskSpec& spec, const std::vector<double>& values,
                const std::vector<double>& probs) {
    detail::SigmaWorkspace ws;
    return detail::sigma_atoms(spec, values, probs, ws);
}

} // namespace

TEST_CASE("make_distribution validates its inputs") {
    CHECK(make_distribution({{5.0, 1.0}}).size() == 1);
    CHECK(make_distribution({{0.0, 0.5}, {10.0, 0.5}}).size() == 2);

    CHECK(validation_code([] { make_distribution({{1.0, 0.5}, {2.0, 0.6}}); }) == "PROB_SUM");
    CHECK(validation_code([] { make_distribution({}); }) == "EMPTY_ATOMS");
    CHECK(validation_code([] { make_distribution({{1.0, -0.1}, {2.0, 1.1}}); }) ==
          "PROB_NONPOSITIVE");
    CHECK(validation_code([] { make_distribution({{1.0, 0.0}, {2.0, 1.0}}); }) ==
          "PROB_NONPOSITIVE");
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(validation_code([&] { make_distribution({{inf, 1.0}}); }) == "VALUE_NONFINITE");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(validation_code([&] { make_distribution({{1.0, nan}}); }) == "PROB_NONPOSITIVE");

    // atoms with identical values are kept, not merged
    CHECK(make_distribution({{3.0, 0.5}, {3.0, 0.5}}).size() == 2);
}

TEST_CASE("risk spec grammar") {
    CHECK(RiskSpec::parse("expectation") == RiskSpec::expectation());
    CHECK(RiskSpec::parse("worst-case") == RiskSpec::worst_case());
    CHECK(RiskSpec::parse("cvar:0.25") == RiskSpec::cvar(0.25));
    CHECK(RiskSpec::parse("cvar:1") == RiskSpec::cvar(1.0));
    CHECK(RiskSpec::parse("mean-cvar:0.5:0.25") == RiskSpec::mean_cvar(0.5, 0.25));

    for (const RiskSpec& spec : spec_families())
        CHECK(RiskSpec::parse(spec.to_string()) == spec);

    CHECK(validation_code([] { RiskSpec::parse("cvar:1.5"); }) == "ALPHA_RANGE");
    CHECK(validation_code([] { RiskSpec::parse("cvar:0"); }) == "ALPHA_RANGE");
    CHECK(validation_code([] { RiskSpec::parse("cvar:-0.5"); }) == "ALPHA_RANGE");
    CHECK(validation_code([] { RiskSpec::parse("mean-cvar:1.5:0.5"); }) == "LAMBDA_RANGE");
    CHECK(validation_code([] { RiskSpec::parse("CVAR:0.5"); }) == "RISK_GRAMMAR");
    CHECK(validation_code([] { RiskSpec::parse("cvar:"); }) == "RISK_GRAMMAR");
    CHECK(validation_code([] { RiskSpec::parse("cvar:abc"); }) == "RISK_GRAMMAR");
    CHECK(validation_code([] { RiskSpec::parse("cvar:0.5 "); }) == "RISK_GRAMMAR");
    CHECK(validation_code([] { RiskSpec::parse(" expectation"); }) == "RISK_GRAMMAR");
    CHECK(validation_code([] { RiskSpec::parse("mean-cvar:0.5"); }) == "RISK_GRAMMAR");
    CHECK(validation_code([] { RiskSpec::parse("worst_case"); }) == "RISK_GRAMMAR");
    CHECK(validation_code([] { RiskSpec::parse(""); }) == "RISK_GRAMMAR");
}

TEST_CASE("sigma_eval on hand-checked instances") {
    const auto coin = make_distribution({{0.0, 0.5}, {10.0, 0.5}});
    CHECK(sigma_eval(RiskSpec::cvar(0.5), coin) == doctest::Approx(10.0).epsilon(1e-12));

    // top 0.5 mass = all of the 5-atom (0.4) plus 0.1 of the 1-atom
    const auto skewed = make_distribution({{1.0, 0.6}, {5.0, 0.4}});
    CHECK(sigma_eval(RiskSpec::cvar(0.5), skewed) == doctest::Approx(4.2).epsilon(1e-12));
    CHECK(sigma_eval(RiskSpec::expectation(), skewed) == doctest::Approx(2.6).epsilon(1e-12));
    CHECK(sigma_eval(RiskSpec::worst_case(), skewed) == 5.0);
    CHECK(sigma_eval(RiskSpec::mean_cvar(0.5, 0.5), skewed) ==
          doctest::Approx(0.5 * 2.6 + 0.5 * 4.2).epsilon(1e-12));

    // level-1 tail average is the plain mean
    const auto three = make_distribution({{1.0, 0.25}, {2.0, 0.25}, {3.0, 0.5}});
    CHECK(sigma_eval(RiskSpec::cvar(1.0), three) == doctest::Approx(2.25).epsilon(1e-12));

    // degenerate law: every coherent functional returns the point
    for (const RiskSpec& spec : spec_families()) {
        const auto point = make_distribution({{-3.7, 1.0}});
        CHECK(sigma_eval(spec, point) == doctest::Approx(-3.7).epsilon(1e-14));
        CHECK(varsigma_eval(spec, point) == doctest::Approx(-3.7).epsilon(1e-14));
    }
}

TEST_CASE("varsigma is the reward-side functional") {
    const auto coin = make_distribution({{0.0, 0.5}, {10.0, 0.5}});
    CHECK(varsigma_eval(RiskSpec::cvar(0.5), coin) == doctest::Approx(0.0));

    const auto pair = make_distribution({{2.0, 0.3}, {7.0, 0.7}});
    CHECK(varsigma_eval(RiskSpec::worst_case(), pair) == 2.0);

    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto dist = harness::random_distribution(rng, 20, -10.0, 10.0);
        CHECK(varsigma_eval(RiskSpec::expectation(), dist) ==
              doctest::Approx(sigma_eval(RiskSpec::expectation(), dist)).epsilon(1e-12));
    }
}

TEST_CASE("support bounds") {
    const auto coin = make_distribution({{0.0, 0.5}, {10.0, 0.5}});
    CHECK(support_bounds(coin).lo == 0.0);
    CHECK(support_bounds(coin).hi == 10.0);
    const auto point = make_distribution({{4.25, 1.0}});
    CHECK(support_bounds(point).lo == 4.25);
    CHECK(support_bounds(point).hi == 4.25);
    const auto mixed = make_distribution({{-3.0, 0.1}, {4.0, 0.9}});
    CHECK(support_bounds(mixed).lo == -3.0);
    CHECK(support_bounds(mixed).hi == 4.0);
}

TEST_CASE("cvar at level 1 equals expectation") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto dist = harness::random_distribution(rng, 20, -10.0, 10.0);
        CHECK(sigma_eval(RiskSpec::cvar(1.0), dist) ==
              doctest::Approx(sigma_eval(RiskSpec::expectation(), dist)).epsilon(1e-12));
    }
}

TEST_CASE("coherence axioms hold on random sample spaces") {
    constexpr double kTol = 1e-9;
    Rng rng(13);
    for (int trial = 0; trial < 400; ++trial) {
        // random spec each round, covering the whole family
        RiskSpec spec = RiskSpec::expectation();
        switch (trial % 4) {
        case 1: spec = RiskSpec::cvar(rng.uniform_open01()); break;
        case 2: spec = RiskSpec::mean_cvar(rng.uniform01(), rng.uniform_open01()); break;
        case 3: spec = RiskSpec::worst_case(); break;
        default: break;
        }
        const auto s = harness::random_paired_samples(rng, 20, -10.0, 10.0);
        const int n = static_cast<int>(s.probs.size());

        const double sx = sigma_on(spec, s.x, s.probs);
        const double sy = sigma_on(spec, s.y, s.probs);

        // monotonicity
        std::vector<double> upper(n);
        for (int i = 0; i < n; ++i)
            upper[i] = std::max(s.x[i], s.y[i]);
        CHECK(sigma_on(spec, upper, s.probs) >= std::max(sx, sy) - kTol);

        // sub-additivity
        std::vector<double> sum(n);
        for (int i = 0; i < n; ++i)
            sum[i] = s.x[i] + s.y[i];
        CHECK(sigma_on(spec, sum, s.probs) <= sx + sy + kTol);

        // translation invariance
        const double c = rng.uniform(-5.0, 5.0);
        std::vector<double> shifted(n);
        for (int i = 0; i < n; ++i)
            shifted[i] = s.x[i] + c;
        CHECK(sigma_on(spec, shifted, s.probs) == doctest::Approx(sx + c).epsilon(1e-12));

        // positive homogeneity
        const double lam = rng.uniform(0.0, 3.0);
        std::vector<double> scaled(n);
        for (int i = 0; i < n; ++i)
            scaled[i] = lam * s.x[i];
        CHECK(sigma_on(spec, scaled, s.probs) == doctest::Approx(lam * sx).epsilon(1e-10));

        // support bounds
        CHECK(sx >= *std::min_element(s.x.begin(), s.x.end()) - kTol);
        CHECK(sx <= *std::max_element(s.x.begin(), s.x.end()) + kTol);

        // sup-norm continuity
        double dist = 0.0;
        for (int i = 0; i < n; ++i)
            dist = std::max(dist, std::fabs(s.x[i] - s.y[i]));
        CHECK(std::fabs(sx - sy) <= dist + kTol);
    }
}

TEST_CASE("law invariance: splitting atoms and permuting order") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dist = harness::random_distribution(rng, 12, -10.0, 10.0);
        for (const RiskSpec& spec : spec_families()) {
            const double reference = sigma_eval(spec, dist);

            // split every atom in half
            std::vector<Atom> split;
            for (const Atom& a : dist.atoms()) {
                split.push_back({a.value, a.probability / 2.0});
                split.push_back({a.value, a.probability / 2.0});
            }
            CHECK(sigma_eval(spec, DiscreteDistribution(split)) ==
                  doctest::Approx(reference).epsilon(1e-12));

            // random permutation
            std::vector<Atom> shuffled = dist.atoms();
            for (std::size_t i = shuffled.size(); i > 1; --i)
                std::swap(shuffled[i - 1],
                          shuffled[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);
            CHECK(sigma_eval(spec, DiscreteDistribution(shuffled)) ==
                  doctest::Approx(reference).epsilon(1e-12));
        }
    }
}

TEST_CASE("duplicate-value atoms evaluate like their merged form") {
    const auto split = make_distribution({{2.0, 0.25}, {5.0, 0.5}, {2.0, 0.25}});
    const auto merged = make_distribution({{2.0, 0.5}, {5.0, 0.5}});
    for (const RiskSpec& spec : spec_families()) {
        CHECK(sigma_eval(spec, split) == doctest::Approx(sigma_eval(spec, merged)).epsilon(1e-12));
        CHECK(varsigma_eval(spec, split) ==
              doctest::Approx(varsigma_eval(spec, merged)).epsilon(1e-12));
    }
}

TEST_CASE("axiom suite harness reports slack per axiom") {
    for (const RiskSpec& spec : spec_families()) {
        const auto results = harness::axiom_suite(spec, 300, 42);
        REQUIRE(results.size() == 5);
        for (const auto& r : results) {
            INFO(spec.to_string() << " / " << r.name << " slack " << r.worst_slack);
            CHECK(r.pass);
            CHECK(r.worst_slack <= 1e-9);
        }
    }
}

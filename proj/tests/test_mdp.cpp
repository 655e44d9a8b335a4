// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "riskdp/errors.hpp"
#include "riskdp/harness.hpp"
#include "riskdp/mdp.hpp"
#include "riskdp/solver.hpp"

#include <cmath>
#include <string>

using namespace riskdp;

namespace {

const char* kTwoStateDoc = R"({
  "gamma": 0.5,
  "risk": "worst-case",
  "states": ["s0", "s1"],
  "actions": {"s0": ["a"], "s1": ["a"]},
  "rewards": {"s0": {"a": 1.0}, "s1": {"a": 0.0}},
  "transitions": {
    "s0": {"a": [["s0", 0.5], ["s1", 0.5]]},
    "s1": {"a": [["s1", 1.0]]}
  }
})";

template <typename Fn>
std::string validation_code(Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.code();
    }
    return "";
}

std::string replace_first(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("the documented two-state model loads") {
    const MdpModel model = MdpModel::load(kTwoStateDoc);
    CHECK(model.num_states() == 2);
    CHECK(model.gamma() == 0.5);
    CHECK(model.risk() == RiskSpec::worst_case());
    CHECK(model.r_max() == 1.0);
    CHECK(model.value_upper_bound() == doctest::Approx(2.0));
    CHECK(model.state_index("s1") == 1);
    CHECK(model.state_index("nope") == -1);
    CHECK(model.actions(0).size() == 1);
    CHECK(model.transitions(0, 0).size() == 2);
    CHECK(model.transitions(0, 0)[0].next_state == 0);
}

TEST_CASE("risk key is optional and defaults to expectation") {
    const std::string doc = replace_first(kTwoStateDoc, "\"risk\": \"worst-case\",", "");
    CHECK(MdpModel::load(doc).risk() == RiskSpec::expectation());
}

TEST_CASE("validation error codes") {
    CHECK(validation_code([] {
              MdpModel::load(replace_first(kTwoStateDoc, "\"gamma\": 0.5", "\"gamma\": 1.0"));
          }) == "GAMMA_RANGE");
    CHECK(validation_code([] {
              MdpModel::load(replace_first(kTwoStateDoc, "\"a\": 1.0", "\"a\": -1.0"));
          }) == "REWARD_NEGATIVE");
    CHECK(validation_code([] {
              MdpModel::load(replace_first(kTwoStateDoc, "[\"s0\", 0.5]", "[\"s0\", 0.6]"));
          }) == "PROB_ROW_SUM");
    CHECK(validation_code([] {
              MdpModel::load(replace_first(kTwoStateDoc, "[\"s1\", 1.0]", "[\"s2\", 1.0]"));
          }) == "DANGLING_STATE");
    CHECK(validation_code([] {
              MdpModel::load(replace_first(kTwoStateDoc, "\"s1\": [\"a\"]", "\"s1\": []"));
          }) == "EMPTY_ACTIONS");
    CHECK(validation_code([] {
              MdpModel::load(replace_first(kTwoStateDoc, "\"s1\": {\"a\": 0.0}", "\"s1\": {}"));
          }) == "MISSING_REWARD");
    CHECK(validation_code([] {
              MdpModel::load(replace_first(kTwoStateDoc, "\"gamma\": 0.5,", ""));
          }) == "SCHEMA");
    CHECK(validation_code([] { MdpModel::load("{"); }) == "PARSE");
    CHECK(validation_code([] {
              MdpModel::load(R"({"gamma": 0.5, "states": ["s0", "s0"],
                                 "actions": {"s0": ["a"]},
                                 "rewards": {"s0": {"a": 1.0}},
                                 "transitions": {"s0": {"a": [["s0", 1.0]]}}})");
          }) == "DUPLICATE_STATE");
}

TEST_CASE("validation errors carry the offending path") {
    try {
        MdpModel::load(replace_first(kTwoStateDoc, "\"a\": 1.0", "\"a\": -1.0"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.path() == "/rewards/s0/a");
    }
}

TEST_CASE("save / load round trip preserves the semantic content") {
    for (const MdpModel& original :
         {MdpModel::load(kTwoStateDoc), MdpModel::random(5, 2, 3, 0.9, 1)}) {
        const MdpModel copy = MdpModel::load(original.save());
        REQUIRE(copy.num_states() == original.num_states());
        CHECK(copy.gamma() == original.gamma());
        CHECK(copy.risk() == original.risk());
        for (int s = 0; s < original.num_states(); ++s) {
            CHECK(copy.states()[s] == original.states()[s]);
            REQUIRE(copy.actions(s) == original.actions(s));
            for (std::size_t a = 0; a < original.actions(s).size(); ++a) {
                CHECK(copy.reward(s, a) == original.reward(s, a));
                const auto lhs = copy.transitions(s, a);
                const auto rhs = original.transitions(s, a);
                REQUIRE(lhs.size() == rhs.size());
                for (std::size_t k = 0; k < lhs.size(); ++k) {
                    CHECK(lhs[k].next_state == rhs[k].next_state);
                    CHECK(lhs[k].probability == rhs[k].probability);
                }
            }
        }
    }
}

TEST_CASE("random models are deterministic in the seed") {
    const MdpModel a = MdpModel::random(5, 2, 3, 0.9, 1);
    const MdpModel b = MdpModel::random(5, 2, 3, 0.9, 1);
    CHECK(a.save() == b.save());
    const MdpModel c = MdpModel::random(5, 2, 3, 0.9, 2);
    CHECK(a.save() != c.save());
}

TEST_CASE("random models pass validation for a thousand seeds") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const MdpModel model = MdpModel::random(1 + seed % 6, 1 + seed % 3,
                                                1 + static_cast<int>(seed % (1 + seed % 6)),
                                                0.9, seed);
        // construction validates; reloading exercises the document path too
        CHECK_NOTHROW(MdpModel::load(model.save()));
    }
}

TEST_CASE("single absorbing state: every risk spec gives r0 / (1 - gamma)") {
    MdpModel model = MdpModel::random(1, 1, 1, 0.5, 7);
    const double r0 = model.reward(0, 0);
    for (const char* risk : {"expectation", "cvar:0.25", "mean-cvar:0.5:0.5", "worst-case"}) {
        model.set_risk(RiskSpec::parse(risk));
        const SolveReport report = value_iteration(model, zero_value(model), 1e-12, 1'000'000);
        CHECK(report.v_star.values[0] == doctest::Approx(r0 / 0.5).epsilon(1e-9));
    }
}

TEST_CASE("random model parameter validation") {
    CHECK(validation_code([] { MdpModel::random(0, 1, 1, 0.5, 0); }) == "PARAM_RANGE");
    CHECK(validation_code([] { MdpModel::random(2, 0, 1, 0.5, 0); }) == "PARAM_RANGE");
    CHECK(validation_code([] { MdpModel::random(2, 1, 3, 0.5, 0); }) == "PARAM_RANGE");
    CHECK(validation_code([] { MdpModel::random(2, 1, 1, 1.0, 0); }) == "GAMMA_RANGE");
}

TEST_CASE("next_value_distribution substitutes values in row order") {
    const MdpModel model = MdpModel::load(kTwoStateDoc);
    const ValueFunction v{{4.0 / 3.0, 0.0}};

    const DiscreteDistribution d = model.next_value_distribution(v, 0, 0);
    REQUIRE(d.size() == 2);
    CHECK(d.atoms()[0].value == doctest::Approx(4.0 / 3.0));
    CHECK(d.atoms()[0].probability == 0.5);
    CHECK(d.atoms()[1].value == 0.0);

    const DiscreteDistribution det = model.next_value_distribution(v, 1, 0);
    REQUIRE(det.size() == 1);
    CHECK(det.atoms()[0].value == 0.0);
    CHECK(det.atoms()[0].probability == 1.0);

    CHECK(validation_code([&] { model.next_value_distribution(v, 0, 5); }) == "ACTION_RANGE");
}

TEST_CASE("duplicate next-state values evaluate law-invariantly") {
    // two rows into states that share the same value
    using T = MdpModel::Transition;
    const MdpModel model({"s0", "s1", "s2"}, {{"a"}, {"a"}, {"a"}}, {{1.0}, {0.0}, {0.0}},
                         {{{T{1, 0.5}, T{2, 0.5}}}, {{T{1, 1.0}}}, {{T{2, 1.0}}}}, 0.5,
                         RiskSpec::cvar(0.5));
    const ValueFunction v{{3.0, 2.0, 2.0}};
    const DiscreteDistribution split = model.next_value_distribution(v, 0, 0);
    const DiscreteDistribution merged = make_distribution({{2.0, 1.0}});
    for (const char* risk : {"expectation", "cvar:0.25", "worst-case"}) {
        const RiskSpec spec = RiskSpec::parse(risk);
        CHECK(varsigma_eval(spec, split) ==
              doctest::Approx(varsigma_eval(spec, merged)).epsilon(1e-12));
    }
}

TEST_CASE("value upper bound is finite for every valid model") {
    harness::fixture_models(); // construction asserts the invariants
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const MdpModel model = MdpModel::random(4, 2, 2, 0.99, seed);
        CHECK(std::isfinite(model.value_upper_bound()));
        CHECK(model.value_upper_bound() >= model.r_max());
    }
}

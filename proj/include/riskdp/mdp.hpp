// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riskdp/risk.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace riskdp {

/// State-indexed value vector, aligned with MdpModel's state order.
struct ValueFunction {
    std::vector<double> values;
};

/// State-indexed action choice; entries index into the state's admissible
/// action list.
struct Policy {
    std::vector<int> action;
};

/// Finite discounted MDP with a per-model one-stage risk functional.
/// Rewards are non-negative and bounded; transitions are stored as the
/// induced kernel P(next | state, action). Immutable after construction
/// apart from the risk override, so concurrent reads are safe.
class MdpModel {
  public:
    struct Transition {
        int next_state;
        double probability;
    };

    MdpModel(std::vector<std::string> states, std::vector<std::vector<std::string>> actions,
             std::vector<std::vector<double>> rewards,
             std::vector<std::vector<std::vector<Transition>>> transitions, double gamma,
             RiskSpec risk);

    /// Parses and validates the textual model document; errors carry the
    /// JSON path of the offending field.
    static MdpModel load(const std::string& text);

    /// Seed-deterministic random instance: rewards uniform in [0,1], each
    /// row `branching` distinct next states with simplex-uniform weights.
    static MdpModel random(int n_states, int n_actions, int branching, double gamma,
                           std::uint64_t seed);

    /// Canonical document; load(save()) gives back the same model.
    std::string save() const;

    int num_states() const noexcept { return static_cast<int>(states_.size()); }
    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<std::string>& actions(int s) const { return actions_[s]; }
    double reward(int s, int a) const { return rewards_[s][a]; }
    std::span<const Transition> transitions(int s, int a) const { return transitions_[s][a]; }
    double gamma() const noexcept { return gamma_; }
    const RiskSpec& risk() const noexcept { return risk_; }
    void set_risk(RiskSpec spec) { risk_ = spec; }
    double r_max() const noexcept { return r_max_; }

    /// Finite a-priori bound r_max / (1 - gamma) on any optimal value.
    double value_upper_bound() const noexcept { return r_max_ / (1.0 - gamma_); }

    int state_index(std::string_view name) const; // -1 when absent
    int action_index(int s, std::string_view name) const;

    /// Law of V(next state) under the (s, a) transition row, atoms in row
    /// order, duplicates kept.
    DiscreteDistribution next_value_distribution(const ValueFunction& v, int s, int a) const;

  private:
    std::vector<std::string> states_;
    std::vector<std::vector<std::string>> actions_;
    std::vector<std::vector<double>> rewards_;
    std::vector<std::vector<std::vector<Transition>>> transitions_;
    double gamma_;
    RiskSpec risk_;
    double r_max_ = 0.0;
};

} // namespace riskdp

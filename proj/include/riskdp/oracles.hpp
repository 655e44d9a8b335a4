// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riskdp/mdp.hpp"
#include "riskdp/tree.hpp"

namespace riskdp::oracles {

/// Brute-force baselines for the main implementations. Everything in this
/// namespace re-derives its answer from scratch — plain scalar loops, its own
/// sorting and its own one-stage evaluation — and shares only type
/// definitions with the code it cross-checks.

/// Midpoint-rule evaluation of the envelope-optimal quantile integral on a
/// uniform grid over (0,1). First-order accurate on step quantile functions:
/// the error is bounded by (range + max|value|) / (alpha * grid).
double sigma_grid(const RiskSpec& spec, const DiscreteDistribution& dist, long grid);

/// Nested stage-t risk by explicit recursive fold, materializing the
/// conditional one-step law at every node.
double nested_paths(const ScenarioTree& tree, const AdaptedProcess& process,
                    const RiskSpec& spec, int t);

/// Classical risk-neutral value iteration, written directly against the
/// transition kernel. The model's risk spec is ignored.
ValueFunction classical_vi(const MdpModel& model, double theta, long max_iters = 10'000'000);

struct PolicyEnumResult {
    ValueFunction best_value; // per starting state, max over stationary policies
    Policy best_policy;       // first policy attaining the largest value sum
    double tail_bound;        // gamma^(horizon+1) * r_max / (1 - gamma)
    long policies = 0;
    long max_tree_nodes = 0; // largest unrolled tree across (policy, start)
};

/// Exhaustive stationary-policy search: for every policy and starting state,
/// unrolls the induced scenario tree to `horizon`, evaluates the nested
/// certainty equivalent of the truncated discounted reward, and keeps the
/// per-state maximum. Refuses to unroll more than node_budget nodes.
PolicyEnumResult policy_enum(const MdpModel& model, int horizon, long node_budget = 1'000'000);

} // namespace riskdp::oracles

// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

// Independent baselines. Nothing here may call into the primary evaluation
// paths (risk_core sorting/dispatch, tree recursion, solver sweeps, kernels);
// each oracle re-derives its result with plain loops and its own sorting.

#include "riskdp/oracles.hpp"

#include "riskdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace riskdp::oracles {

namespace {

/// One-stage evaluation used inside the tree and policy oracles. Sorts
/// ascending and walks the tail from the top — deliberately a different code
/// path from the main evaluator.
double sigma_plain(const RiskSpec& spec, const std::vector<double>& values,
                   const std::vector<double>& probs) {
    const std::size_t n = values.size();
    auto mean = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += values[i] * probs[i];
        return acc;
    };
    auto upper_tail = [&](double alpha) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        double remaining = alpha;
        double acc = 0.0;
        for (std::size_t i = n; i-- > 0 && remaining > 0.0;) {
            const double take = std::min(probs[order[i]], remaining);
            acc += values[order[i]] * take;
            remaining -= take;
        }
        return acc / (alpha - std::max(remaining, 0.0));
    };
    switch (spec.kind()) {
    case RiskKind::expectation: return mean();
    case RiskKind::worst_case: return *std::max_element(values.begin(), values.end());
    case RiskKind::cvar: return upper_tail(spec.alpha());
    case RiskKind::mean_cvar:
        return spec.lambda() * mean() + (1.0 - spec.lambda()) * upper_tail(spec.alpha());
    }
    return 0.0;
}

} // namespace

double sigma_grid(const RiskSpec& spec, const DiscreteDistribution& dist, long grid) {
    if (grid < 10'000)
        throw ValidationError("PARAM_RANGE", "", "grid must be at least 10^4");

    const std::size_t n = dist.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    const auto& atoms = dist.atoms();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return atoms[a].value < atoms[b].value;
    });
    std::vector<double> value(n), cum(n);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        value[i] = atoms[order[i]].value;
        mass += atoms[order[i]].probability;
        cum[i] = mass;
    }

    const double inv = 1.0 / static_cast<double>(grid);
    // Sum of q((j + 0.5) / grid) over j in [first, grid), walking the step
    // quantile function and the grid in lock-step.
    auto midpoint_sum = [&](long first) {
        double acc = 0.0;
        std::size_t k = 0;
        const double u0 = (static_cast<double>(first) + 0.5) * inv;
        while (k + 1 < n && u0 > cum[k])
            ++k;
        for (long j = first; j < grid; ++j) {
            const double u = (static_cast<double>(j) + 0.5) * inv;
            while (k + 1 < n && u > cum[k])
                ++k;
            acc += value[k];
        }
        return acc;
    };

    auto expectation_part = [&] { return midpoint_sum(0) * inv; };
    auto cvar_part = [&](double alpha) {
        const double threshold = (1.0 - alpha) * static_cast<double>(grid);
        long first = static_cast<long>(std::llround(threshold));
        while (first > 0 && static_cast<double>(first) - 0.5 > threshold)
            --first;
        while (static_cast<double>(first) + 0.5 <= threshold)
            ++first;
        if (first < 0) first = 0;
        return midpoint_sum(first) * inv / alpha;
    };

    switch (spec.kind()) {
    case RiskKind::expectation: return expectation_part();
    case RiskKind::worst_case: return value.back();
    case RiskKind::cvar: return cvar_part(spec.alpha());
    case RiskKind::mean_cvar:
        return spec.lambda() * expectation_part() +
               (1.0 - spec.lambda()) * cvar_part(spec.alpha());
    }
    return 0.0;
}

double nested_paths(const ScenarioTree& tree, const AdaptedProcess& process,
                    const RiskSpec& spec, int t) {
    if (process.size() != static_cast<std::size_t>(tree.size()))
        throw ValidationError("PROCESS_SIZE", "", "process must assign a value per node");
    if (t < 0 || t > tree.depth())
        throw ValidationError("DEPTH_RANGE", "", "stage outside tree depth");

    auto fold = [&](auto&& self, int node) -> double {
        if (tree.node(node).depth == t)
            return process[node];
        const auto& children = tree.node(node).children;
        std::vector<double> values(children.size());
        std::vector<double> probs(children.size());
        for (std::size_t k = 0; k < children.size(); ++k) {
            values[k] = self(self, children[k]);
            probs[k] = tree.node(children[k]).prob;
        }
        return sigma_plain(spec, values, probs);
    };
    return fold(fold, 0);
}

ValueFunction classical_vi(const MdpModel& model, double theta, long max_iters) {
    if (!(theta > 0.0))
        throw ValidationError("THETA_RANGE", "", "theta must be > 0");
    const int n = model.num_states();
    std::vector<double> v(n, 0.0), w(n, 0.0);
    for (long iter = 0; iter < max_iters; ++iter) {
        for (int s = 0; s < n; ++s) {
            double best = -1.0;
            for (std::size_t a = 0; a < model.actions(s).size(); ++a) {
                double expect = 0.0;
                for (const auto& tr : model.transitions(s, static_cast<int>(a)))
                    expect += tr.probability * v[tr.next_state];
                const double q = model.reward(s, static_cast<int>(a)) + model.gamma() * expect;
                if (a == 0 || q > best) best = q;
            }
            w[s] = best;
        }
        double residual = 0.0;
        for (int s = 0; s < n; ++s)
            residual = std::max(residual, std::fabs(w[s] - v[s]));
        v = w;
        if (residual <= theta) return ValueFunction{std::move(v)};
    }
    throw IterationLimitError("classical baseline did not reach theta=" + std::to_string(theta));
}

namespace {

/// Unrolled-tree node count for a fixed policy, start state and depth.
double predicted_nodes(const MdpModel& model, const std::vector<int>& policy, int start,
                       int horizon) {
    const int n = model.num_states();
    std::vector<double> count(n, 1.0), next(n);
    for (int d = 1; d <= horizon; ++d) {
        for (int s = 0; s < n; ++s) {
            double total = 1.0;
            for (const auto& tr : model.transitions(s, policy[s]))
                total += count[tr.next_state];
            next[s] = total;
        }
        count.swap(next);
    }
    return count[start];
}

/// Nested value of the truncated discounted reward under a fixed policy:
/// folds the unrolled scenario tree leaf-to-root without materializing it.
/// `cum` carries -sum of discounted rewards strictly before stage t.
double fold_policy_tree(const MdpModel& model, const std::vector<int>& policy,
                        const RiskSpec& spec, int state, int t, int horizon, double discount,
                        double cum) {
    const double here = cum - discount * model.reward(state, policy[state]);
    if (t == horizon)
        return here;
    const auto row = model.transitions(state, policy[state]);
    std::vector<double> values(row.size());
    std::vector<double> probs(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
        values[k] = fold_policy_tree(model, policy, spec, row[k].next_state, t + 1, horizon,
                                     discount * model.gamma(), here);
        probs[k] = row[k].probability;
    }
    return sigma_plain(spec, values, probs);
}

} // namespace

PolicyEnumResult policy_enum(const MdpModel& model, int horizon, long node_budget) {
    if (horizon < 0)
        throw ValidationError("PARAM_RANGE", "", "horizon must be >= 0");
    const int n = model.num_states();

    double policy_count = 1.0;
    for (int s = 0; s < n; ++s)
        policy_count *= static_cast<double>(model.actions(s).size());
    if (policy_count > 1e6)
        throw SizeLimitError("stationary policy space has " + std::to_string(policy_count) +
                             " members");

    PolicyEnumResult result;
    result.tail_bound = std::pow(model.gamma(), horizon + 1) * model.r_max() /
                        (1.0 - model.gamma());
    result.best_value.values.assign(n, -std::numeric_limits<double>::infinity());
    result.best_policy.action.assign(n, 0);

    std::vector<int> policy(n, 0);
    double best_sum = -std::numeric_limits<double>::infinity();
    bool done = false;
    while (!done) {
        ++result.policies;
        for (int start = 0; start < n; ++start) {
            const double nodes = predicted_nodes(model, policy, start, horizon);
            if (nodes > static_cast<double>(node_budget))
                throw SizeLimitError("unrolled tree needs " + std::to_string(nodes) +
                                     " nodes, budget is " + std::to_string(node_budget));
            result.max_tree_nodes = std::max(result.max_tree_nodes, static_cast<long>(nodes));
        }

        double sum = 0.0;
        std::vector<double> values(n);
        for (int start = 0; start < n; ++start) {
            // rho of the negated cumulative reward, negated back.
            values[start] =
                -fold_policy_tree(model, policy, model.risk(), start, 0, horizon, 1.0, 0.0);
            sum += values[start];
        }
        for (int start = 0; start < n; ++start)
            result.best_value.values[start] = std::max(result.best_value.values[start],
                                                       values[start]);
        if (sum > best_sum) {
            best_sum = sum;
            result.best_policy.action = policy;
        }

        // odometer over the per-state admissible lists
        done = true;
        for (int s = 0; s < n; ++s) {
            if (++policy[s] < static_cast<int>(model.actions(s).size())) {
                done = false;
                break;
            }
            policy[s] = 0;
        }
    }
    return result;
}

} // namespace riskdp::oracles

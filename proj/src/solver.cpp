// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/solver.hpp"

#include "riskdp/errors.hpp"
#include "riskdp/kernels.hpp"
#include "riskdp/rng.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace riskdp {

namespace {

struct SweepWorkspace {
    detail::SigmaWorkspace sigma;
    std::vector<double> values;
    std::vector<double> probs;
};

/// Q(s, a) = r(s, a) + gamma * varsigma(V(next)).
double q_value(const MdpModel& model, const ValueFunction& v, int s, int a, double gamma,
               SweepWorkspace& ws) {
    const auto row = model.transitions(s, a);
    ws.values.resize(row.size());
    ws.probs.resize(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
        ws.values[k] = v.values[row[k].next_state];
        ws.probs[k] = row[k].probability;
    }
    const double certainty_equivalent =
        detail::varsigma_atoms(model.risk(), ws.values, ws.probs, ws.sigma);
    return model.reward(s, a) + gamma * certainty_equivalent;
}

void sweep(const MdpModel& model, const ValueFunction& v, double gamma, SweepWorkspace& ws,
           ValueFunction& out) {
    out.values.resize(model.num_states());
    for (int s = 0; s < model.num_states(); ++s) {
        double best = q_value(model, v, s, 0, gamma, ws);
        const int n_actions = static_cast<int>(model.actions(s).size());
        for (int a = 1; a < n_actions; ++a) {
            const double q = q_value(model, v, s, a, gamma, ws);
            if (q > best) best = q;
        }
        out.values[s] = best;
    }
}

} // namespace

ValueFunction zero_value(const MdpModel& model) {
    return ValueFunction{std::vector<double>(model.num_states(), 0.0)};
}

ValueFunction bellman_apply(const MdpModel& model, const ValueFunction& v) {
    SweepWorkspace ws;
    ValueFunction out;
    sweep(model, v, model.gamma(), ws, out);
    return out;
}

Policy extract_policy(const MdpModel& model, const ValueFunction& v) {
    SweepWorkspace ws;
    Policy policy;
    policy.action.resize(model.num_states());
    for (int s = 0; s < model.num_states(); ++s) {
        int best_a = 0;
        double best = q_value(model, v, s, 0, model.gamma(), ws);
        const int n_actions = static_cast<int>(model.actions(s).size());
        for (int a = 1; a < n_actions; ++a) {
            const double q = q_value(model, v, s, a, model.gamma(), ws);
            if (q > best) {
                best = q;
                best_a = a;
            }
        }
        policy.action[s] = best_a;
    }
    return policy;
}

SolveReport value_iteration(const MdpModel& model, const ValueFunction& v0, double theta,
                            long max_iters) {
    if (!(theta > 0.0))
        throw ValidationError("THETA_RANGE", "",
                              "theta must be > 0, got " + std::to_string(theta));
    if (max_iters < 1)
        throw ValidationError("PARAM_RANGE", "", "max_iters must be >= 1");
    if (static_cast<int>(v0.values.size()) != model.num_states())
        throw ValidationError("VALUE_SIZE", "", "initial value must cover every state");
    for (double v : v0.values)
        if (!std::isfinite(v))
            throw ValidationError("VALUE_NONFINITE", "", "initial value must be finite");

    const auto start = std::chrono::steady_clock::now();
    const double gamma = model.gamma();

    SolveReport report;
    report.theta = theta;

    SweepWorkspace ws;
    ValueFunction current = v0;
    ValueFunction next;
    while (report.iterations < max_iters) {
        sweep(model, current, gamma, ws, next);
        ++report.iterations;
        const double residual = kernels::sup_norm_diff(next.values, current.values);
        report.residuals.push_back(residual);
        std::swap(current, next);
        if (residual <= theta) break;
        if (report.iterations == max_iters)
            throw IterationLimitError("no convergence to theta=" + std::to_string(theta) +
                                      " within " + std::to_string(max_iters) + " sweeps");
    }

    const double first_residual = report.residuals.front();
    report.banach_bound =
        std::pow(gamma, report.iterations) / (1.0 - gamma) * first_residual;
    report.v_star = current;
    report.policy = extract_policy(model, current);
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    // Geometric decay guarantees termination within a computable sweep count.
    if (first_residual > theta) {
        const long cap =
            gamma == 0.0
                ? 2
                : static_cast<long>(std::ceil(std::log(theta * (1.0 - gamma) / first_residual) /
                                              std::log(gamma))) +
                      1;
        if (report.iterations > cap)
            throw VerificationError("stopped after " + std::to_string(report.iterations) +
                                    " sweeps, above the guaranteed cap " + std::to_string(cap));
    }
    return report;
}

ContractionReport check_contraction(const MdpModel& model, int trials, double amplitude,
                                    std::uint64_t seed) {
    return check_contraction(model, trials, amplitude, seed, model.gamma());
}

ContractionReport check_contraction(const MdpModel& model, int trials, double amplitude,
                                    std::uint64_t seed, double operator_gamma) {
    if (trials < 1)
        throw ValidationError("PARAM_RANGE", "", "trials must be >= 1");
    if (!(amplitude > 0.0))
        throw ValidationError("PARAM_RANGE", "", "amplitude must be > 0");

    ContractionReport report;
    report.trials = trials;
    report.gamma = model.gamma();

    const int n = model.num_states();
    SweepWorkspace ws;
    ValueFunction u{std::vector<double>(n)};
    ValueFunction v{std::vector<double>(n)};
    ValueFunction bu, bv;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
        Rng rng(trial_seed);
        for (int s = 0; s < n; ++s)
            u.values[s] = rng.uniform(-amplitude, amplitude);
        for (int s = 0; s < n; ++s)
            v.values[s] = rng.uniform(-amplitude, amplitude);
        const double distance = kernels::sup_norm_diff(u.values, v.values);
        if (distance == 0.0) continue;
        sweep(model, u, operator_gamma, ws, bu);
        sweep(model, v, operator_gamma, ws, bv);
        const double contracted = kernels::sup_norm_diff(bu.values, bv.values);
        const double ratio = contracted / distance;
        if (ratio > report.max_ratio) report.max_ratio = ratio;
        // ratio form keeps the report invariant: violations are empty
        // exactly when max_ratio <= gamma + 1e-9
        if (ratio > report.gamma + 1e-9)
            report.violations.push_back({trial_seed, ratio});
    }
    return report;
}

BanachReport check_banach_bound(const MdpModel& model, double theta_ref,
                                std::span<const int> checkpoints) {
    const double gamma = model.gamma();
    const SolveReport reference = value_iteration(model, zero_value(model), theta_ref, 10'000'000);

    BanachReport report;
    report.reference_theta = theta_ref;
    if (checkpoints.empty()) return report;

    int max_n = 1; // at least one sweep: the n = 0 bound needs ||V_1 - V_0||
    for (int n : checkpoints)
        max_n = std::max(max_n, n);

    SweepWorkspace ws;
    ValueFunction current = zero_value(model);
    ValueFunction next;
    double first_residual = 0.0;
    for (int n = 0; n <= max_n; ++n) {
        if (n > 0) {
            sweep(model, current, gamma, ws, next);
            const double residual = kernels::sup_norm_diff(next.values, current.values);
            if (n == 1) first_residual = residual;
            std::swap(current, next);
        }
        for (int checkpoint : checkpoints) {
            if (checkpoint != n) continue;
            const double actual = kernels::sup_norm_diff(current.values, reference.v_star.values);
            report.checkpoints.push_back({n, actual, 0.0});
        }
    }

    // bound = gamma^n / (1 - gamma) * ||V_1 - V_0||; the residual is only
    // known after the first sweep, so bounds are filled in afterwards.
    for (BanachCheckpoint& c : report.checkpoints)
        c.bound = std::pow(gamma, c.n) / (1.0 - gamma) * first_residual;

    for (const BanachCheckpoint& c : report.checkpoints)
        if (c.actual > c.bound + 1e-9)
            throw VerificationError("iterate " + std::to_string(c.n) + " sits " +
                                    std::to_string(c.actual) + " from the fixed point, above "
                                    "the a-priori bound " + std::to_string(c.bound));
    return report;
}

} // namespace riskdp

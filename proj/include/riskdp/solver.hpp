// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riskdp/mdp.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace riskdp {

/// Outcome of a value-iteration run. residuals[k-1] is the sup-norm step
/// ||V_k - V_{k-1}||; banach_bound is gamma^n / (1 - gamma) * residuals[0],
/// the a-priori distance bound for the final iterate.
struct SolveReport {
    ValueFunction v_star;
    Policy policy;
    int iterations = 0;
    std::vector<double> residuals;
    double theta = 0.0;
    double banach_bound = 0.0;
    double elapsed_seconds = 0.0; // diagnostic only; excluded from reports
};

ValueFunction zero_value(const MdpModel& model);

/// One dynamic-programming sweep: (BV)(s) = max_a r(s,a) + gamma *
/// varsigma(V(next)). Jacobi-style, reading only the previous iterate; ties
/// in the max resolve to the first admissible action, which affects policy
/// extraction only.
ValueFunction bellman_apply(const MdpModel& model, const ValueFunction& v);

/// Greedy stationary policy of V: first maximizing action per state.
Policy extract_policy(const MdpModel& model, const ValueFunction& v);

/// Iterates the sweep until the sup-norm residual drops to theta. Throws
/// IterationLimitError when max_iters sweeps were not enough, and
/// VerificationError if the geometric-termination guarantee fails.
SolveReport value_iteration(const MdpModel& model, const ValueFunction& v0, double theta,
                            long max_iters);

struct ContractionViolation {
    std::uint64_t seed;
    double ratio;
};

/// Evidence of the operator's Lipschitz constant: max over random pairs of
/// ||BU - BV|| / ||U - V||. Violations (ratio above gamma + 1e-9) are data in
/// the report, not exceptions.
struct ContractionReport {
    int trials = 0;
    double max_ratio = 0.0;
    double gamma = 0.0;
    std::vector<ContractionViolation> violations;
};

ContractionReport check_contraction(const MdpModel& model, int trials, double amplitude,
                                    std::uint64_t seed);

/// Self-test hook: the operator is applied with `operator_gamma` while the
/// ratio is still checked against the model's own discount. Passing a larger
/// value forces violations, proving the harness can fail.
ContractionReport check_contraction(const MdpModel& model, int trials, double amplitude,
                                    std::uint64_t seed, double operator_gamma);

struct BanachCheckpoint {
    int n;
    double actual; // ||V_n - V_star||
    double bound;  // gamma^n / (1 - gamma) * ||V_1 - V_0||
};

struct BanachReport {
    std::vector<BanachCheckpoint> checkpoints;
    double reference_theta = 0.0;
};

/// Solves to theta_ref for a fixed-point proxy, then replays the iteration
/// from zero and verifies the a-priori error bound at every checkpoint
/// (tolerance 1e-9; violations raise VerificationError).
BanachReport check_banach_bound(const MdpModel& model, double theta_ref,
                                std::span<const int> checkpoints);

} // namespace riskdp

// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riskdp/mdp.hpp"
#include "riskdp/rng.hpp"
#include "riskdp/solver.hpp"
#include "riskdp/tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace riskdp::harness {

// ---------------------------------------------------------------------------
// Seeded corpora generators, shared by the verify command and the test suite.
// ---------------------------------------------------------------------------

/// Up to max_atoms atoms, simplex-uniform probabilities, values uniform in
/// [lo, hi].
DiscreteDistribution random_distribution(Rng& rng, int max_atoms, double lo, double hi);

/// A shared finite sample space with two paired outcome vectors, for axioms
/// that compare functionals on the same atoms.
struct PairedSamples {
    std::vector<double> probs;
    std::vector<double> x;
    std::vector<double> y;
};
PairedSamples random_paired_samples(Rng& rng, int max_atoms, double lo, double hi);

/// Uniform-leaf-depth tree, depth in [1, max_depth], branching in
/// [1, max_branch] per node.
ScenarioTree random_tree(Rng& rng, int max_depth, int max_branch);

/// Path-wise non-increasing process: root uniform in [start_lo, start_hi],
/// every edge drops by uniform [0, max_step].
AdaptedProcess random_nonincreasing_process(Rng& rng, const ScenarioTree& tree, double start_lo,
                                            double start_hi, double max_step);

/// Path-wise non-decreasing process with per-stage increment bounds eps[t]
/// (geometrically shrinking, so the tail sums stay small).
struct BoundedIncrements {
    AdaptedProcess process;
    std::vector<double> eps;
};
BoundedIncrements random_nondecreasing_process(Rng& rng, const ScenarioTree& tree);

/// History tree of the chain induced by a fixed policy, carrying the
/// cumulative discounted reward as its adapted process; eps[t] = gamma^t *
/// r_max bounds the stage increments.
struct Rollout {
    ScenarioTree tree;
    AdaptedProcess cumulative;
    std::vector<double> eps;
};
Rollout rollout_tree(const MdpModel& model, const Policy& policy, int depth);

// ---------------------------------------------------------------------------
// Built-in fixtures.
// ---------------------------------------------------------------------------

/// Two states; s0 pays 1 and moves to {s0, s1} evenly, s1 absorbs at 0;
/// gamma = 1/2. Closed-form fixed points: (4/3, 0) under expectation,
/// (1, 0) under worst-case.
MdpModel two_state_model(const RiskSpec& risk);

/// Same instance plus a second action at s0: reward 0.9, self-loop.
MdpModel two_state_extended(const RiskSpec& risk);

/// Model set used by the error-bound and termination checks.
std::vector<MdpModel> fixture_models();

// ---------------------------------------------------------------------------
// Claim-level checks. Each returns a named pass/fail row with a numeric
// detail string; none of them throw for a failed claim.
// ---------------------------------------------------------------------------

struct AxiomResult {
    std::string name;
    bool pass;
    double worst_slack; // most adverse violation observed; <= 0 means margin
};

/// Five coherence axioms (monotonicity, sub-additivity, translation
/// invariance, positive homogeneity, support bounds) on seeded random sample
/// spaces, tolerance 1e-9.
std::vector<AxiomResult> axiom_suite(const RiskSpec& spec, int trials, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Nested-risk limit existence: non-increasing bounded processes give a
/// non-increasing trace confined to [min Z_T, Z_0].
CheckResult check_monotone_limit(const RiskSpec& spec, int n_trees, std::uint64_t seed);

/// Uniform tail bound 0 <= rho_{t+s} - rho_t <= e_t for increment-bounded
/// non-decreasing processes.
CheckResult check_uniform_bound_corpus(const RiskSpec& spec, int n_trees, std::uint64_t seed);

/// One-step decomposition lhs = rhs to 1e-9.
CheckResult check_decomposition_corpus(const RiskSpec& spec, int n_trees, std::uint64_t seed);

/// Operator contraction on random models (gamma in {0.5, 0.9, 0.99}), plus
/// the constant-shift case whose ratio must equal gamma to 1e-12.
/// break_operator mis-scales the applied discount to prove the harness can
/// fail.
CheckResult check_contraction_models(const RiskSpec& spec, int trials, std::uint64_t seed,
                                     bool break_operator = false);

/// A-priori error bound at checkpoints {1, 5, 10, 50} against a 1e-12
/// reference solve, on every fixture model.
CheckResult check_error_bound(const RiskSpec& spec, std::uint64_t seed);

/// Finite termination at theta = 1e-8 within the geometric-decay cap, with
/// per-step residual ratios at most gamma (tolerance 1e-9).
CheckResult check_termination(const RiskSpec& spec, std::uint64_t seed);

/// Cross-checks against the independent baselines: grid quantile
/// integration, path-fold nested risk, classical risk-neutral iteration
/// (expectation only) and stationary-policy enumeration.
CheckResult check_oracle_agreement(const RiskSpec& spec, std::uint64_t seed);

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

/// Runs every check for every spec (plus solve/contraction/error-bound rows
/// for a user-supplied model, when given).
VerifyReport verify_all(const std::vector<RiskSpec>& specs, const MdpModel* user_model,
                        int trials, std::uint64_t seed, bool break_operator = false);

} // namespace riskdp::harness

// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riskdp/distribution.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace riskdp {

enum class RiskKind { expectation, cvar, mean_cvar, worst_case };

/// A coherent one-stage risk functional, identified by its risk-envelope
/// family. sigma acts on loss-like outcomes and takes the upper tail; the
/// reward-side certainty equivalent is varsigma(Z) = -sigma(-Z).
///
/// Families: expectation (envelope {1}), CVaR_alpha (densities bounded by
/// 1/alpha), the lambda-mix of the two, and worst-case (all densities, i.e.
/// the essential supremum). alpha = 0 is rejected; the degenerate limit has
/// to be requested explicitly as worst-case.
class RiskSpec {
  public:
    static RiskSpec expectation();
    static RiskSpec cvar(double alpha);                     // alpha in (0, 1]
    static RiskSpec mean_cvar(double lambda, double alpha); // lambda in [0, 1]
    static RiskSpec worst_case();

    /// Grammar: `expectation` | `cvar:<alpha>` | `mean-cvar:<lambda>:<alpha>`
    /// | `worst-case`. Case-sensitive, no whitespace.
    static RiskSpec parse(std::string_view text);

    RiskKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double lambda() const noexcept { return lambda_; }

    /// Round-trips through parse().
    std::string to_string() const;

    bool operator==(const RiskSpec&) const = default;

  private:
    RiskSpec(RiskKind kind, double alpha, double lambda)
        : kind_(kind), alpha_(alpha), lambda_(lambda) {}

    RiskKind kind_;
    double alpha_;
    double lambda_;
};

/// Upper-tail risk of a loss-like variable: the exact supremum of the
/// quantile integral over the spec's envelope. For CVaR the boundary atom at
/// the alpha-quantile is split fractionally, which attains the supremum.
double sigma_eval(const RiskSpec& spec, const DiscreteDistribution& dist);

/// Reward-side certainty equivalent: -sigma_eval(spec, -dist). For CVaR this
/// is the mean of the worst alpha-tail of rewards; for worst-case, the
/// minimum outcome.
double varsigma_eval(const RiskSpec& spec, const DiscreteDistribution& dist);

namespace detail {

/// Scratch buffers for the sort performed inside every evaluation; reused by
/// callers with hot loops to avoid reallocation.
struct SigmaWorkspace {
    std::vector<int> order;
    std::vector<double> values;
    std::vector<double> probs;
    std::vector<double> negated;
};

/// Core evaluation on raw atom arrays. Internally stable-sorts atoms by
/// descending value, which fixes the floating-point summation order: results
/// do not depend on the atoms' input order.
double sigma_atoms(const RiskSpec& spec, std::span<const double> values,
                   std::span<const double> probs, SigmaWorkspace& ws);

double varsigma_atoms(const RiskSpec& spec, std::span<const double> values,
                      std::span<const double> probs, SigmaWorkspace& ws);

} // namespace detail

} // namespace riskdp

// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

namespace riskdp {

struct Atom {
    double value;
    double probability;
};

/// Finite discrete law: an ordered list of (value, probability) atoms.
/// Atoms stay in insertion order and equal values are never merged; all risk
/// functionals on the type are law-invariant, so merging must not matter
/// (and tests hold them to that).
///
/// Invariants enforced at construction: non-empty, finite values, strictly
/// positive probabilities, total mass 1 within kProbSumTolerance. Violations
/// are hard errors, never silently renormalized.
class DiscreteDistribution {
  public:
    static constexpr double kProbSumTolerance = 1e-9;

    explicit DiscreteDistribution(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    /// Same law with every value's sign flipped; atom order preserved.
    DiscreteDistribution negated() const;

  private:
    std::vector<Atom> atoms_;
};

/// Builds a validated distribution from (value, probability) pairs.
DiscreteDistribution make_distribution(const std::vector<std::pair<double, double>>& pairs);

/// Essential infimum / supremum of a finite law: min and max atom value.
struct SupportBounds {
    double lo;
    double hi;
};

SupportBounds support_bounds(const DiscreteDistribution& dist);

} // namespace riskdp

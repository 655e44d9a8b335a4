// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/distribution.hpp"

#include "riskdp/errors.hpp"
#include "riskdp/kernels.hpp"

#include <cmath>
#include <string>

namespace riskdp {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty())
        throw ValidationError("EMPTY_ATOMS", "", "distribution needs at least one atom");
    double mass = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        const std::string path = "atoms[" + std::to_string(i) + "]";
        if (!std::isfinite(a.value))
            throw ValidationError("VALUE_NONFINITE", path, "atom value must be finite");
        if (!std::isfinite(a.probability) || a.probability <= 0.0)
            throw ValidationError("PROB_NONPOSITIVE", path,
                                  "atom probability must be finite and > 0, got " +
                                      std::to_string(a.probability));
        mass += a.probability;
    }
    if (std::fabs(mass - 1.0) > kProbSumTolerance)
        throw ValidationError("PROB_SUM", "",
                              "probabilities sum to " + std::to_string(mass) + ", expected 1");
}

DiscreteDistribution DiscreteDistribution::negated() const {
    std::vector<Atom> flipped(atoms_);
    for (Atom& a : flipped)
        a.value = -a.value;
    return DiscreteDistribution(std::move(flipped));
}

DiscreteDistribution make_distribution(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Atom> atoms;
    atoms.reserve(pairs.size());
    for (const auto& [value, probability] : pairs)
        atoms.push_back({value, probability});
    return DiscreteDistribution(std::move(atoms));
}

SupportBounds support_bounds(const DiscreteDistribution& dist) {
    std::vector<double> values;
    values.reserve(dist.size());
    for (const Atom& a : dist.atoms())
        values.push_back(a.value);
    return {kernels::min_value(values), kernels::max_value(values)};
}

} // namespace riskdp

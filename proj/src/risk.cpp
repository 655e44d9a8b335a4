// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/risk.hpp"

#include "riskdp/errors.hpp"
#include "riskdp/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <numeric>

namespace riskdp {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw ValidationError("ALPHA_RANGE", "",
                              "alpha must lie in (0,1], got " + std::to_string(alpha));
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !(lambda <= 1.0))
        throw ValidationError("LAMBDA_RANGE", "",
                              "lambda must lie in [0,1], got " + std::to_string(lambda));
}

double parse_decimal(std::string_view token, const char* what) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ValidationError("RISK_GRAMMAR", "",
                              std::string("expected a decimal literal for ") + what);
    return out;
}

} // namespace

RiskSpec RiskSpec::expectation() { return RiskSpec(RiskKind::expectation, 1.0, 1.0); }

RiskSpec RiskSpec::cvar(double alpha) {
    check_alpha(alpha);
    return RiskSpec(RiskKind::cvar, alpha, 0.0);
}

RiskSpec RiskSpec::mean_cvar(double lambda, double alpha) {
    check_lambda(lambda);
    check_alpha(alpha);
    return RiskSpec(RiskKind::mean_cvar, alpha, lambda);
}

RiskSpec RiskSpec::worst_case() { return RiskSpec(RiskKind::worst_case, 0.0, 0.0); }

RiskSpec RiskSpec::parse(std::string_view text) {
    if (text == "expectation") return expectation();
    if (text == "worst-case") return worst_case();
    constexpr std::string_view cvar_prefix = "cvar:";
    constexpr std::string_view mean_prefix = "mean-cvar:";
    if (text.substr(0, cvar_prefix.size()) == cvar_prefix)
        return cvar(parse_decimal(text.substr(cvar_prefix.size()), "alpha"));
    if (text.substr(0, mean_prefix.size()) == mean_prefix) {
        const std::string_view rest = text.substr(mean_prefix.size());
        const std::size_t colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw ValidationError("RISK_GRAMMAR", "",
                                  "mean-cvar needs two parameters: mean-cvar:<lambda>:<alpha>");
        return mean_cvar(parse_decimal(rest.substr(0, colon), "lambda"),
                         parse_decimal(rest.substr(colon + 1), "alpha"));
    }
    throw ValidationError("RISK_GRAMMAR", "",
                          "unknown risk spec '" + std::string(text) +
                              "'; expected expectation | cvar:<alpha> | "
                              "mean-cvar:<lambda>:<alpha> | worst-case");
}

std::string RiskSpec::to_string() const {
    auto decimal = [](double v) {
        char buf[32];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, ptr);
    };
    switch (kind_) {
    case RiskKind::expectation: return "expectation";
    case RiskKind::cvar: return "cvar:" + decimal(alpha_);
    case RiskKind::mean_cvar: return "mean-cvar:" + decimal(lambda_) + ":" + decimal(alpha_);
    case RiskKind::worst_case: return "worst-case";
    }
    return "";
}

namespace detail {

namespace {

/// Average of the top `alpha` probability mass, boundary atom split
/// fractionally. Arrays must be sorted by descending value.
double upper_tail_average(std::span<const double> values, std::span<const double> probs,
                          double alpha) {
    const std::size_t n = values.size();
    std::size_t cut = 0;
    double mass = 0.0;
    while (cut < n && mass + probs[cut] < alpha) {
        mass += probs[cut];
        ++cut;
    }
    if (cut == n) {
        // alpha exceeds the realized mass (possible only through the 1e-9
        // normalization slack near alpha = 1): average everything.
        return kernels::dot(values, probs) / mass;
    }
    const double take = alpha - mass; // in (0, probs[cut]]
    const double weighted = kernels::dot(values.first(cut), probs.first(cut));
    return (weighted + values[cut] * take) / (mass + take);
}

double sigma_sorted(const RiskSpec& spec, std::span<const double> values,
                    std::span<const double> probs) {
    switch (spec.kind()) {
    case RiskKind::expectation:
        return kernels::dot(values, probs);
    case RiskKind::worst_case:
        return values.front();
    case RiskKind::cvar:
        return upper_tail_average(values, probs, spec.alpha());
    case RiskKind::mean_cvar:
        return spec.lambda() * kernels::dot(values, probs) +
               (1.0 - spec.lambda()) * upper_tail_average(values, probs, spec.alpha());
    }
    return 0.0;
}

} // namespace

double sigma_atoms(const RiskSpec& spec, std::span<const double> values,
                   std::span<const double> probs, SigmaWorkspace& ws) {
    assert(values.size() == probs.size() && !values.empty());
    const std::size_t n = values.size();
    ws.order.resize(n);
    std::iota(ws.order.begin(), ws.order.end(), 0);
    // Stable descending sort fixes the summation order for equal values too.
    std::stable_sort(ws.order.begin(), ws.order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    ws.values.resize(n);
    ws.probs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ws.values[i] = values[ws.order[i]];
        ws.probs[i] = probs[ws.order[i]];
    }
    return sigma_sorted(spec, ws.values, ws.probs);
}

double varsigma_atoms(const RiskSpec& spec, std::span<const double> values,
                      std::span<const double> probs, SigmaWorkspace& ws) {
    const std::size_t n = values.size();
    ws.negated.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        ws.negated[i] = -values[i];
    return -sigma_atoms(spec, ws.negated, probs, ws);
}

} // namespace detail

double sigma_eval(const RiskSpec& spec, const DiscreteDistribution& dist) {
    const auto& atoms = dist.atoms();
    std::vector<double> values(atoms.size());
    std::vector<double> probs(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        values[i] = atoms[i].value;
        probs[i] = atoms[i].probability;
    }
    detail::SigmaWorkspace ws;
    return detail::sigma_atoms(spec, values, probs, ws);
}

double varsigma_eval(const RiskSpec& spec, const DiscreteDistribution& dist) {
    return -sigma_eval(spec, dist.negated());
}

} // namespace riskdp

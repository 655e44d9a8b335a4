// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/harness.hpp"

#include "riskdp/errors.hpp"
#include "riskdp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

namespace riskdp::harness {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return std::string(buf);
}

std::vector<double> simplex_point(Rng& rng, int n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = -std::log(rng.uniform_open01());
        total += w[i];
    }
    for (int i = 0; i < n; ++i)
        w[i] /= total;
    return w;
}

} // namespace

DiscreteDistribution random_distribution(Rng& rng, int max_atoms, double lo, double hi) {
    const int n = static_cast<int>(rng.uniform_int(1, max_atoms));
    const std::vector<double> probs = simplex_point(rng, n);
    std::vector<Atom> atoms(n);
    for (int i = 0; i < n; ++i)
        atoms[i] = {rng.uniform(lo, hi), probs[i]};
    return DiscreteDistribution(std::move(atoms));
}

PairedSamples random_paired_samples(Rng& rng, int max_atoms, double lo, double hi) {
    const int n = static_cast<int>(rng.uniform_int(1, max_atoms));
    PairedSamples s;
    s.probs = simplex_point(rng, n);
    s.x.resize(n);
    s.y.resize(n);
    for (int i = 0; i < n; ++i) {
        s.x[i] = rng.uniform(lo, hi);
        s.y[i] = rng.uniform(lo, hi);
    }
    return s;
}

ScenarioTree random_tree(Rng& rng, int max_depth, int max_branch) {
    const int depth = static_cast<int>(rng.uniform_int(1, max_depth));
    std::vector<std::pair<int, double>> nodes;
    nodes.emplace_back(-1, 1.0);
    std::vector<int> frontier{0};
    for (int d = 1; d <= depth; ++d) {
        std::vector<int> next_frontier;
        for (int parent : frontier) {
            const int kids = static_cast<int>(rng.uniform_int(1, max_branch));
            const std::vector<double> probs = simplex_point(rng, kids);
            for (int k = 0; k < kids; ++k) {
                nodes.emplace_back(parent, probs[k]);
                next_frontier.push_back(static_cast<int>(nodes.size()) - 1);
            }
        }
        frontier = std::move(next_frontier);
    }
    return ScenarioTree::build(nodes);
}

AdaptedProcess random_nonincreasing_process(Rng& rng, const ScenarioTree& tree, double start_lo,
                                            double start_hi, double max_step) {
    std::vector<double> values(tree.size());
    values[0] = rng.uniform(start_lo, start_hi);
    for (int i = 1; i < tree.size(); ++i)
        values[i] = values[tree.node(i).parent] - rng.uniform(0.0, max_step);
    return AdaptedProcess(std::move(values));
}

BoundedIncrements random_nondecreasing_process(Rng& rng, const ScenarioTree& tree) {
    const int T = tree.depth();
    BoundedIncrements out{AdaptedProcess(std::vector<double>(tree.size(), 0.0)), {}};
    out.eps.resize(T);
    const double scale = rng.uniform(0.1, 1.0);
    const double decay = rng.uniform(0.3, 0.9);
    for (int t = 0; t < T; ++t)
        out.eps[t] = scale * std::pow(decay, t);
    std::vector<double> values(tree.size());
    values[0] = rng.uniform(-1.0, 1.0);
    for (int i = 1; i < tree.size(); ++i) {
        const double bound = out.eps[tree.node(i).depth - 1];
        values[i] = values[tree.node(i).parent] + bound * rng.uniform01();
    }
    out.process = AdaptedProcess(std::move(values));
    return out;
}

Rollout rollout_tree(const MdpModel& model, const Policy& policy, int depth) {
    std::vector<std::pair<int, double>> nodes;
    std::vector<double> cumulative;
    struct Item {
        int node;
        int state;
        int stage;
        double cum;
        double discount;
    };
    std::deque<Item> queue;
    nodes.emplace_back(-1, 1.0);
    const int s0 = 0;
    cumulative.push_back(model.reward(s0, policy.action[s0]));
    queue.push_back({0, s0, 0, cumulative[0], 1.0});
    while (!queue.empty()) {
        const Item item = queue.front();
        queue.pop_front();
        if (item.stage == depth) continue;
        const double discount = item.discount * model.gamma();
        for (const auto& tr : model.transitions(item.state, policy.action[item.state])) {
            nodes.emplace_back(item.node, tr.probability);
            const int id = static_cast<int>(nodes.size()) - 1;
            const double cum =
                item.cum + discount * model.reward(tr.next_state, policy.action[tr.next_state]);
            cumulative.push_back(cum);
            queue.push_back({id, tr.next_state, item.stage + 1, cum, discount});
        }
    }
    Rollout out{ScenarioTree::build(nodes), AdaptedProcess(std::move(cumulative)), {}};
    out.eps.resize(depth);
    for (int t = 0; t < depth; ++t)
        out.eps[t] = std::pow(model.gamma(), t + 1) * model.r_max();
    return out;
}

MdpModel two_state_model(const RiskSpec& risk) {
    using T = MdpModel::Transition;
    return MdpModel({"s0", "s1"}, {{"a"}, {"a"}}, {{1.0}, {0.0}},
                    {{{T{0, 0.5}, T{1, 0.5}}}, {{T{1, 1.0}}}}, 0.5, risk);
}

MdpModel two_state_extended(const RiskSpec& risk) {
    using T = MdpModel::Transition;
    return MdpModel({"s0", "s1"}, {{"a", "b"}, {"a"}}, {{1.0, 0.9}, {0.0}},
                    {{{T{0, 0.5}, T{1, 0.5}}, {T{0, 1.0}}}, {{T{1, 1.0}}}}, 0.5, risk);
}

std::vector<MdpModel> fixture_models() {
    std::vector<MdpModel> models;
    models.push_back(two_state_model(RiskSpec::expectation()));
    models.push_back(two_state_extended(RiskSpec::expectation()));
    models.push_back(MdpModel::random(6, 2, 2, 0.9, 3));
    models.push_back(MdpModel::random(5, 3, 3, 0.99, 4));
    models.push_back(MdpModel::random(4, 2, 2, 0.5, 5));
    models.push_back(MdpModel::random(3, 2, 1, 0.8, 6));
    return models;
}

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

std::vector<AxiomResult> axiom_suite(const RiskSpec& spec, int trials, std::uint64_t seed) {
    constexpr double kTol = 1e-9;
    double mono = -std::numeric_limits<double>::infinity();
    double subadd = mono, translation = mono, homogeneity = mono, support = mono;

    Rng rng(derive_seed(seed, 0x0a));
    detail::SigmaWorkspace ws;
    for (int trial = 0; trial < trials; ++trial) {
        PairedSamples s = random_paired_samples(rng, 20, -10.0, 10.0);
        const int n = static_cast<int>(s.probs.size());

        // monotonicity on a dominating pair
        std::vector<double> upper(n);
        for (int i = 0; i < n; ++i)
            upper[i] = s.y[i] + std::fabs(s.x[i]);
        const double sigma_upper = detail::sigma_atoms(spec, upper, s.probs, ws);
        const double sigma_y = detail::sigma_atoms(spec, s.y, s.probs, ws);
        mono = std::max(mono, sigma_y - sigma_upper);

        // sub-additivity
        std::vector<double> sum_xy(n);
        for (int i = 0; i < n; ++i)
            sum_xy[i] = s.x[i] + s.y[i];
        const double sigma_x = detail::sigma_atoms(spec, s.x, s.probs, ws);
        const double sigma_sum = detail::sigma_atoms(spec, sum_xy, s.probs, ws);
        subadd = std::max(subadd, sigma_sum - (sigma_x + sigma_y));

        // translation invariance
        const double c = rng.uniform(-5.0, 5.0);
        std::vector<double> shifted(n);
        for (int i = 0; i < n; ++i)
            shifted[i] = s.x[i] + c;
        const double sigma_shifted = detail::sigma_atoms(spec, shifted, s.probs, ws);
        translation = std::max(translation, std::fabs(sigma_shifted - (sigma_x + c)));

        // positive homogeneity
        const double lam = rng.uniform(0.0, 3.0);
        std::vector<double> scaled(n);
        for (int i = 0; i < n; ++i)
            scaled[i] = lam * s.x[i];
        const double sigma_scaled = detail::sigma_atoms(spec, scaled, s.probs, ws);
        homogeneity = std::max(homogeneity, std::fabs(sigma_scaled - lam * sigma_x));

        // support bounds
        const double lo = *std::min_element(s.x.begin(), s.x.end());
        const double hi = *std::max_element(s.x.begin(), s.x.end());
        support = std::max(support, std::max(lo - sigma_x, sigma_x - hi));
    }

    auto row = [&](const char* name, double slack) {
        return AxiomResult{name, slack <= kTol, slack};
    };
    return {row("monotonicity", mono), row("sub-additivity", subadd),
            row("translation-invariance", translation), row("positive-homogeneity", homogeneity),
            row("support-bounds", support)};
}

// ---------------------------------------------------------------------------
// Claim-level checks
// ---------------------------------------------------------------------------

CheckResult check_monotone_limit(const RiskSpec& spec, int n_trees, std::uint64_t seed) {
    CheckResult result{"nested-limit-monotone/" + spec.to_string(), true, ""};
    Rng rng(derive_seed(seed, 0x10));
    double worst_rise = -std::numeric_limits<double>::infinity();
    double worst_breach = worst_rise;
    try {
        for (int i = 0; i < n_trees; ++i) {
            const ScenarioTree tree = random_tree(rng, 5, 3);
            const AdaptedProcess z = random_nonincreasing_process(rng, tree, -2.0, 5.0, 1.0);
            const RhoLimitResult r = rho_limit(tree, z, spec);
            double lo = std::numeric_limits<double>::infinity();
            for (int node : tree.depth_slice(tree.depth()))
                lo = std::min(lo, z[node]);
            const double hi = z[0];
            for (std::size_t t = 0; t < r.trace.size(); ++t) {
                if (t > 0) worst_rise = std::max(worst_rise, r.trace[t] - r.trace[t - 1]);
                worst_breach = std::max(worst_breach,
                                        std::max(lo - r.trace[t], r.trace[t] - hi));
            }
        }
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
        return result;
    }
    result.pass = worst_rise <= 1e-9 && worst_breach <= 1e-9;
    result.detail = "trees=" + std::to_string(n_trees) + " worst_rise=" + fmt(worst_rise) +
                    " worst_bound_breach=" + fmt(worst_breach);
    return result;
}

CheckResult check_uniform_bound_corpus(const RiskSpec& spec, int n_trees, std::uint64_t seed) {
    CheckResult result{"uniform-bound/" + spec.to_string(), true, ""};
    Rng rng(derive_seed(seed, 0x11));
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_negative = std::numeric_limits<double>::infinity();
    int pairs = 0;
    try {
        for (int i = 0; i < n_trees; ++i) {
            const ScenarioTree tree = random_tree(rng, 5, 3);
            const BoundedIncrements gen = random_nondecreasing_process(rng, tree);
            const UniformBoundReport r = check_uniform_bound(tree, gen.process, spec, gen.eps);
            worst_excess = std::max(worst_excess, r.max_excess);
            worst_negative = std::min(worst_negative, r.min_difference);
            pairs += r.pairs_checked;
        }
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
        return result;
    }
    result.pass = worst_excess <= 1e-9 && worst_negative >= -1e-9;
    result.detail = "trees=" + std::to_string(n_trees) + " pairs=" + std::to_string(pairs) +
                    " worst_excess=" + fmt(worst_excess) + " min_diff=" + fmt(worst_negative);
    return result;
}

CheckResult check_decomposition_corpus(const RiskSpec& spec, int n_trees, std::uint64_t seed) {
    CheckResult result{"decomposition/" + spec.to_string(), true, ""};
    Rng rng(derive_seed(seed, 0x12));
    double worst = 0.0;
    try {
        for (int i = 0; i < n_trees; ++i) {
            const ScenarioTree tree = random_tree(rng, 4, 3);
            const BoundedIncrements gen = random_nondecreasing_process(rng, tree);
            const DecompositionResult r = check_decomposition(tree, gen.process, spec);
            worst = std::max(worst, std::fabs(r.lhs - r.rhs));
        }
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
        return result;
    }
    result.pass = worst <= 1e-9;
    result.detail = "trees=" + std::to_string(n_trees) + " worst_residual=" + fmt(worst);
    return result;
}

CheckResult check_contraction_models(const RiskSpec& spec, int trials, std::uint64_t seed,
                                     bool break_operator) {
    CheckResult result{"contraction/" + spec.to_string(), true, ""};
    const double gammas[] = {0.5, 0.9, 0.99};
    double worst_ratio_margin = -std::numeric_limits<double>::infinity();
    double worst_shift_error = 0.0;
    long violations = 0;
    try {
        for (int m = 0; m < 10; ++m) {
            MdpModel model = MdpModel::random(2 + (m % 9), 1 + (m % 3), 1 + (m % 2),
                                              gammas[m % 3], derive_seed(seed, 0x20 + m));
            model.set_risk(spec);
            const double gamma = model.gamma();
            const double operator_gamma =
                break_operator ? gamma + 0.6 * (1.0 - gamma) : gamma;
            const ContractionReport r = check_contraction(
                model, trials, 10.0, derive_seed(seed, 0x40 + m), operator_gamma);
            violations += static_cast<long>(r.violations.size());
            worst_ratio_margin = std::max(worst_ratio_margin, r.max_ratio - gamma);

            // constant-shift pair: the ratio must sit at gamma exactly
            Rng rng(derive_seed(seed, 0x60 + m));
            ValueFunction u{std::vector<double>(model.num_states())};
            for (double& x : u.values)
                x = rng.uniform(-10.0, 10.0);
            ValueFunction shifted{u.values};
            for (double& x : shifted.values)
                x += 1.75;
            const ValueFunction bu = bellman_apply(model, u);
            const ValueFunction bv = bellman_apply(model, shifted);
            double num = 0.0, den = 0.0;
            for (int s = 0; s < model.num_states(); ++s) {
                num = std::max(num, std::fabs(bu.values[s] - bv.values[s]));
                den = std::max(den, std::fabs(u.values[s] - shifted.values[s]));
            }
            if (!break_operator)
                worst_shift_error = std::max(worst_shift_error, std::fabs(num / den - gamma));
        }
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
        return result;
    }
    result.pass = violations == 0 && worst_ratio_margin <= 1e-9 && worst_shift_error <= 1e-12;
    result.detail = "violations=" + std::to_string(violations) +
                    " worst_ratio_margin=" + fmt(worst_ratio_margin) +
                    " shift_ratio_error=" + fmt(worst_shift_error);
    return result;
}

CheckResult check_error_bound(const RiskSpec& spec, std::uint64_t seed) {
    (void)seed;
    CheckResult result{"error-bound/" + spec.to_string(), true, ""};
    const int checkpoints[] = {1, 5, 10, 50};
    double worst_margin = -std::numeric_limits<double>::infinity();
    try {
        for (MdpModel model : fixture_models()) {
            model.set_risk(spec);
            const BanachReport r = check_banach_bound(model, 1e-12, checkpoints);
            for (const BanachCheckpoint& c : r.checkpoints)
                worst_margin = std::max(worst_margin, c.actual - c.bound);
        }
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
        return result;
    }
    result.pass = worst_margin <= 1e-9;
    result.detail = "worst_bound_margin=" + fmt(worst_margin);
    return result;
}

CheckResult check_termination(const RiskSpec& spec, std::uint64_t seed) {
    (void)seed;
    CheckResult result{"finite-termination/" + spec.to_string(), true, ""};
    double worst_ratio_excess = -std::numeric_limits<double>::infinity();
    long total_iterations = 0;
    try {
        for (MdpModel model : fixture_models()) {
            model.set_risk(spec);
            const SolveReport r = value_iteration(model, zero_value(model), 1e-8, 1'000'000);
            total_iterations += r.iterations;
            // geometric decay, additive tolerance: near theta the residuals
            // sit at the rounding floor of the value scale, so a pure ratio
            // test would amplify that noise
            for (std::size_t k = 1; k < r.residuals.size(); ++k)
                worst_ratio_excess =
                    std::max(worst_ratio_excess,
                             r.residuals[k] - model.gamma() * r.residuals[k - 1]);
        }
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
        return result;
    }
    result.pass = worst_ratio_excess <= 1e-9;
    result.detail = "iterations=" + std::to_string(total_iterations) +
                    " worst_decay_excess=" + fmt(worst_ratio_excess);
    return result;
}

CheckResult check_oracle_agreement(const RiskSpec& spec, std::uint64_t seed) {
    CheckResult result{"oracle-agreement/" + spec.to_string(), true, ""};
    Rng rng(derive_seed(seed, 0x80));
    double worst_grid = 0.0, worst_tree = 0.0, worst_vi = 0.0, worst_enum = 0.0;
    try {
        // grid quantile integration, 100 draws at grid 1e5
        constexpr long grid = 100'000;
        for (int i = 0; i < 100; ++i) {
            const DiscreteDistribution dist = random_distribution(rng, 20, -5.0, 5.0);
            const double exact = sigma_eval(spec, dist);
            const double approx = oracles::sigma_grid(spec, dist, grid);
            worst_grid = std::max(worst_grid, std::fabs(exact - approx));
        }
        const double alpha = spec.kind() == RiskKind::expectation ||
                                     spec.kind() == RiskKind::worst_case
                                 ? 1.0
                                 : spec.alpha();
        const double grid_tolerance = 15.0 / (alpha * static_cast<double>(grid));
        if (worst_grid > grid_tolerance) result.pass = false;

        // nested path fold vs the backward recursion
        for (int i = 0; i < 100; ++i) {
            const ScenarioTree tree = random_tree(rng, 4, 3);
            std::vector<double> values(tree.size());
            for (double& v : values)
                v = rng.uniform(-5.0, 5.0);
            const AdaptedProcess z(values);
            for (int t = 0; t <= tree.depth(); ++t) {
                const double a = rho_t(tree, z, spec, t);
                const double b = oracles::nested_paths(tree, z, spec, t);
                worst_tree = std::max(worst_tree, std::fabs(a - b));
            }
        }
        if (worst_tree > 1e-12) result.pass = false;

        // classical risk-neutral baseline (expectation only)
        if (spec.kind() == RiskKind::expectation) {
            for (int i = 0; i < 5; ++i) {
                MdpModel model = MdpModel::random(2 + i, 1 + (i % 3), 1 + (i % 2), 0.9,
                                                  derive_seed(seed, 0x90 + i));
                model.set_risk(spec);
                const SolveReport r = value_iteration(model, zero_value(model), 1e-10, 1'000'000);
                const ValueFunction w = oracles::classical_vi(model, 1e-10);
                for (int s = 0; s < model.num_states(); ++s)
                    worst_vi = std::max(worst_vi,
                                        std::fabs(r.v_star.values[s] - w.values[s]));
            }
            if (worst_vi > 1e-9) result.pass = false;
        }

        // stationary-policy enumeration on the extended two-state fixture
        {
            MdpModel model = two_state_extended(spec);
            const int horizon = 17;
            const SolveReport r = value_iteration(model, zero_value(model), 1e-10, 1'000'000);
            const auto enum_result = oracles::policy_enum(model, horizon);
            for (int s = 0; s < model.num_states(); ++s)
                worst_enum = std::max(worst_enum,
                                      std::fabs(enum_result.best_value.values[s] -
                                                r.v_star.values[s]));
            if (worst_enum > 1e-10 + enum_result.tail_bound) result.pass = false;
        }
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
        return result;
    }
    result.detail = "grid=" + fmt(worst_grid) + " tree=" + fmt(worst_tree) +
                    " classical=" + fmt(worst_vi) + " enum=" + fmt(worst_enum);
    return result;
}

VerifyReport verify_all(const std::vector<RiskSpec>& specs, const MdpModel* user_model,
                        int trials, std::uint64_t seed, bool break_operator) {
    VerifyReport report;
    for (const RiskSpec& spec : specs) {
        const auto axioms = axiom_suite(spec, trials, seed);
        CheckResult axiom_row{"axioms/" + spec.to_string(), true, ""};
        double worst = -std::numeric_limits<double>::infinity();
        for (const AxiomResult& a : axioms) {
            axiom_row.pass = axiom_row.pass && a.pass;
            worst = std::max(worst, a.worst_slack);
        }
        axiom_row.detail = "worst_slack=" + fmt(worst);
        report.checks.push_back(axiom_row);

        report.checks.push_back(check_monotone_limit(spec, 200, seed));
        report.checks.push_back(check_uniform_bound_corpus(spec, 200, seed));
        report.checks.push_back(check_decomposition_corpus(spec, 200, seed));
        report.checks.push_back(check_contraction_models(spec, trials, seed, break_operator));
        report.checks.push_back(check_error_bound(spec, seed));
        report.checks.push_back(check_termination(spec, seed));
        report.checks.push_back(check_oracle_agreement(spec, seed));
    }

    if (user_model != nullptr) {
        CheckResult row{"user-model/solve", true, ""};
        try {
            const SolveReport r =
                value_iteration(*user_model, zero_value(*user_model), 1e-8, 1'000'000);
            row.detail = "iterations=" + std::to_string(r.iterations) +
                         " banach_bound=" + fmt(r.banach_bound);
        } catch (const std::exception& e) {
            row.pass = false;
            row.detail = e.what();
        }
        report.checks.push_back(row);

        CheckResult contraction_row{"user-model/contraction", true, ""};
        try {
            const ContractionReport r =
                check_contraction(*user_model, trials, 10.0, derive_seed(seed, 0xff));
            contraction_row.pass =
                r.violations.empty() && r.max_ratio <= user_model->gamma() + 1e-9;
            contraction_row.detail = "max_ratio=" + fmt(r.max_ratio);
        } catch (const std::exception& e) {
            contraction_row.pass = false;
            contraction_row.detail = e.what();
        }
        report.checks.push_back(contraction_row);
    }

    report.all_pass = true;
    for (const CheckResult& c : report.checks)
        report.all_pass = report.all_pass && c.pass;
    return report;
}

} // namespace riskdp::harness
